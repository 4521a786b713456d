#include "hiercheck/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "hiercheck/errors.hpp"
#include "hiercheck/parallel.hpp"

namespace hiercheck {

namespace {
constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();
}

double tail_probability(const Eigen::Ref<const Eigen::VectorXd>& replicate_values,
                        const Eigen::Ref<const Eigen::VectorXd>& realized_values) {
  if (replicate_values.size() != realized_values.size()) {
    throw std::invalid_argument("tail_probability: length mismatch");
  }
  if (replicate_values.size() == 0) {
    throw std::invalid_argument("tail_probability: empty input");
  }
  const double count =
      (replicate_values.array() > realized_values.array()).cast<double>().sum();
  return count / static_cast<double>(replicate_values.size());
}

double bonferroni_adjust(double p, int k) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bonferroni_adjust: p must lie in [0,1]");
  }
  if (k < 1) throw std::invalid_argument("bonferroni_adjust: k must be positive");
  const double scaled = static_cast<double>(k) * p;
  return scaled > 1.0 ? 1.0 : scaled;
}

std::uint64_t cv_fit_seed(std::uint64_t seed, int left_out_group) {
  return derive_key(seed, {stream_tag::cv_fit, static_cast<std::uint64_t>(left_out_group)});
}

void validate_check_config(const CheckConfig& cfg, const std::string& method) {
  if (cfg.kinds.empty()) throw config_error("check: at least one discrepancy is required");
  std::set<Discrepancy> seen;
  for (Discrepancy k : cfg.kinds) {
    if (!seen.insert(k).second) {
      throw config_error("check: duplicate discrepancy '" + kind_name(k) + "'");
    }
  }
  const bool has_level2 = seen.count(Discrepancy::Level2X2) > 0;
  if (cfg.theta_mode == ThetaMode::Literal && has_level2) {
    throw config_error(
        "check: level2_x2 is degenerate under theta_mode=literal (realized and replicate "
        "values coincide draw by draw)");
  }
  if (method != "ppc" && seen.count(Discrepancy::MaxGroupMeanDev) > 0) {
    throw config_error(
        "check: max_groupmean_dev is population-scoped and needs method=ppc; "
        "cross-validated checks are per-group");
  }
  cfg.sampler.validate();
}

Eigen::MatrixXd detail::adjusted_matrix(const Eigen::MatrixXd& p, int k) {
  Eigen::MatrixXd out = p;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double v = out(r, c);
      if (std::isnan(v)) continue;
      out(r, c) = bonferroni_adjust(v, k);
    }
  }
  return out;
}

CheckReport ppc_report(const Dataset& data, const ModelSpec& spec, const CheckConfig& cfg) {
  validate_check_config(cfg, "ppc");
  spec.validate();

  SamplerConfig fit_cfg = cfg.sampler;
  fit_cfg.seed = derive_key(cfg.sampler.seed, {stream_tag::ppc_fit});
  const PosteriorChain chain = fit_posterior(data, data.all_indices(), spec, fit_cfg);
  const int m_draws = chain.draws();
  const int n_groups = data.n_groups();
  const int n_kinds = static_cast<int>(cfg.kinds.size());
  const int pop_col = n_groups;

  RngStream rng = RngStream::derive(cfg.sampler.seed, {stream_tag::ppc_draws});

  std::vector<Eigen::MatrixXd> rep_vals(cfg.kinds.size());
  std::vector<Eigen::MatrixXd> real_vals(cfg.kinds.size());
  for (auto& m : rep_vals) m.setConstant(m_draws, n_groups + 1, nan_value);
  for (auto& m : real_vals) m.setConstant(m_draws, n_groups + 1, nan_value);

  Dataset replicate = data;
  for (int m = 0; m < m_draws; ++m) {
    const ParamState state = chain.state(m);
    for (int i = 0; i < n_groups; ++i) {
      auto& g = replicate.groups[static_cast<std::size_t>(i)];
      g.values = sample_replicate_group(spec, g.size(), state.thetas[i], state.sigma2, rng);
    }
    for (int kk = 0; kk < n_kinds; ++kk) {
      const Discrepancy kind = cfg.kinds[static_cast<std::size_t>(kk)];
      if (per_group_capable(kind)) {
        for (int i = 0; i < n_groups; ++i) {
          const auto& obs = data.groups[static_cast<std::size_t>(i)].values;
          const auto& rep = replicate.groups[static_cast<std::size_t>(i)].values;
          rep_vals[static_cast<std::size_t>(kk)](m, i) =
              eval_group(kind, rep, state.thetas[i], state.mu, state.tau2, state.sigma2);
          real_vals[static_cast<std::size_t>(kk)](m, i) =
              eval_group(kind, obs, state.thetas[i], state.mu, state.tau2, state.sigma2);
        }
      }
      if (population_capable(kind)) {
        rep_vals[static_cast<std::size_t>(kk)](m, pop_col) =
            eval_population(kind, replicate, state);
        real_vals[static_cast<std::size_t>(kk)](m, pop_col) =
            eval_population(kind, data, state);
      }
    }
  }

  CheckReport report;
  report.method = "ppc";
  report.has_population = true;
  report.kinds = cfg.kinds;
  report.model = spec;
  report.config = cfg;
  report.warnings = chain.warnings;
  for (const auto& g : data.groups) report.groups.push_back(g.group_id);
  report.p.setConstant(n_kinds, n_groups + 1, nan_value);
  for (int kk = 0; kk < n_kinds; ++kk) {
    for (int t = 0; t <= n_groups; ++t) {
      if (std::isnan(rep_vals[static_cast<std::size_t>(kk)](0, t))) continue;
      report.p(kk, t) = tail_probability(rep_vals[static_cast<std::size_t>(kk)].col(t),
                                         real_vals[static_cast<std::size_t>(kk)].col(t));
    }
  }
  if (cfg.adjust == Adjust::Bonferroni) {
    report.p_adjusted = detail::adjusted_matrix(report.p, n_groups);
  }
  return report;
}

double detail::realized_theta_draw(const ModelSpec& spec, const GroupData& group, double mu,
                                   double tau2, double sigma2, RngStream& rng) {
  NormalParams np = cond_theta_params(group.values, mu, tau2, sigma2);
  double theta = rng.normal(np.mean, np.var);
  if (!spec.any_student_t()) return theta;

  // Augmentation sweeps: refresh the latent scales given theta, then redraw
  // theta given the scales. A handful of iterations is plenty for one
  // univariate center.
  const bool t1 = spec.level1 == LevelKind::StudentT;
  const bool t2 = spec.level2 == LevelKind::StudentT;
  Eigen::VectorXd l1 = Eigen::VectorXd::Ones(group.size());
  double l2 = 1.0;
  constexpr int sweeps = 16;
  for (int it = 0; it < sweeps; ++it) {
    if (t1) {
      for (Eigen::Index j = 0; j < group.size(); ++j) {
        const double r2 = (group.values[j] - theta) * (group.values[j] - theta) / sigma2;
        l1[j] = rng.gamma(0.5 * (spec.nu1 + 1.0), 0.5 * (spec.nu1 + r2));
      }
    }
    if (t2) {
      const double d2 = (theta - mu) * (theta - mu) / tau2;
      l2 = rng.gamma(0.5 * (spec.nu2 + 1.0), 0.5 * (spec.nu2 + d2));
    }
    np = cond_theta_params(group.values, mu, tau2, sigma2, t1 ? &l1 : nullptr, l2);
    theta = rng.normal(np.mean, np.var);
  }
  return theta;
}

detail::CvGroupResult detail::cv_group_pvalues(const GroupData& group,
                                               const Eigen::VectorXd& mu,
                                               const Eigen::VectorXd& tau2,
                                               const Eigen::VectorXd& sigma2,
                                               const ModelSpec& spec, const CheckConfig& cfg,
                                               RngStream& rng) {
  const int m_draws = static_cast<int>(mu.size());
  const int n_kinds = static_cast<int>(cfg.kinds.size());
  Eigen::MatrixXd rep_vals(m_draws, n_kinds);
  Eigen::MatrixXd real_vals(m_draws, n_kinds);

  for (int m = 0; m < m_draws; ++m) {
    const double mu_m = mu[m];
    const double tau2_m = tau2[m];
    const double sigma2_m = sigma2[m];
    const double theta_rep = sample_prior_theta(spec, mu_m, tau2_m, rng);
    const Eigen::VectorXd replicate =
        sample_replicate_group(spec, group.size(), theta_rep, sigma2_m, rng);
    // The realized-side center is drawn for every kept draw, whether or not a
    // theta-dependent kind is in the list: the draw sequence must not depend
    // on the requested kinds.
    double theta_real = theta_rep;
    if (cfg.theta_mode == ThetaMode::PosteriorRealized) {
      theta_real = realized_theta_draw(spec, group, mu_m, tau2_m, sigma2_m, rng);
    }
    for (int kk = 0; kk < n_kinds; ++kk) {
      const Discrepancy kind = cfg.kinds[static_cast<std::size_t>(kk)];
      rep_vals(m, kk) = eval_group(kind, replicate, theta_rep, mu_m, tau2_m, sigma2_m);
      const double theta_obs = depends_on(kind).uses_theta ? theta_real : theta_rep;
      real_vals(m, kk) = eval_group(kind, group.values, theta_obs, mu_m, tau2_m, sigma2_m);
    }
  }

  CvGroupResult out;
  for (int kk = 0; kk < n_kinds; ++kk) {
    out.p[cfg.kinds[static_cast<std::size_t>(kk)]] =
        tail_probability(rep_vals.col(kk), real_vals.col(kk));
  }
  return out;
}

detail::CvGroupResult detail::cv_group_exact(const Dataset& data, int group_index,
                                             const ModelSpec& spec, const CheckConfig& cfg) {
  if (group_index < 0 || group_index >= data.n_groups()) {
    throw std::invalid_argument("cv_ppc_group: unknown group index");
  }
  std::vector<int> scope;
  for (int k = 0; k < data.n_groups(); ++k) {
    if (k != group_index) scope.push_back(k);
  }
  SamplerConfig fit_cfg = cfg.sampler;
  fit_cfg.seed = cv_fit_seed(cfg.sampler.seed, group_index);
  const PosteriorChain chain = fit_posterior(data, scope, spec, fit_cfg);

  RngStream rng = RngStream::derive(
      cfg.sampler.seed, {stream_tag::cv_draws, static_cast<std::uint64_t>(group_index)});
  CvGroupResult res =
      cv_group_pvalues(data.groups[static_cast<std::size_t>(group_index)], chain.mu,
                       chain.tau2, chain.sigma2, spec, cfg, rng);
  res.warnings = chain.warnings;
  return res;
}

std::map<Discrepancy, double> cv_ppc_group(const Dataset& data, int group_index,
                                           const ModelSpec& spec, const CheckConfig& cfg) {
  validate_check_config(cfg, "cv");
  spec.validate();
  return detail::cv_group_exact(data, group_index, spec, cfg).p;
}

CheckReport cv_ppc_report(const Dataset& data, const ModelSpec& spec, const CheckConfig& cfg) {
  validate_check_config(cfg, "cv");
  spec.validate();
  if (data.n_groups() < 4) {
    throw data_error("cross-validated checks require at least 4 groups under default priors");
  }

  const int n_groups = data.n_groups();
  std::vector<detail::CvGroupResult> results(static_cast<std::size_t>(n_groups));
  parallel_for(
      n_groups,
      [&](int i) { results[static_cast<std::size_t>(i)] = detail::cv_group_exact(data, i, spec, cfg); },
      cfg.threads);

  CheckReport report;
  report.method = "cv";
  report.has_population = false;
  report.kinds = cfg.kinds;
  report.model = spec;
  report.config = cfg;
  for (const auto& g : data.groups) report.groups.push_back(g.group_id);
  report.p.resize(static_cast<int>(cfg.kinds.size()), n_groups);
  for (int i = 0; i < n_groups; ++i) {
    const auto& res = results[static_cast<std::size_t>(i)];
    for (int kk = 0; kk < static_cast<int>(cfg.kinds.size()); ++kk) {
      report.p(kk, i) = res.p.at(cfg.kinds[static_cast<std::size_t>(kk)]);
    }
    for (const auto& w : res.warnings) {
      if (std::find(report.warnings.begin(), report.warnings.end(), w) ==
          report.warnings.end()) {
        report.warnings.push_back(w);
      }
    }
  }
  if (cfg.adjust == Adjust::Bonferroni) {
    report.p_adjusted = detail::adjusted_matrix(report.p, n_groups);
  }
  return report;
}

}  // namespace hiercheck
