#include "hiercheck/loo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hiercheck/density.hpp"
#include "hiercheck/errors.hpp"
#include "hiercheck/parallel.hpp"

namespace hiercheck {

namespace {

constexpr double log_2pi = 1.8378770664093454836;

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace

double marginal_group_loglik(const ModelSpec& spec, const GroupData& group, double mu,
                             double tau2, double sigma2, int mc_points, RngStream* rng) {
  if (!(tau2 > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("marginal_group_loglik: scales must be positive");
  }
  const double n = static_cast<double>(group.size());
  if (spec.level1 == LevelKind::Normal && spec.level2 == LevelKind::Normal) {
    // x_i is jointly normal with common mean mu and covariance
    // sigma2*I + tau2*J; |Sigma| = sigma2^(n-1) * (sigma2 + n*tau2) and the
    // quadratic form splits into within and between parts.
    const double between_var = sigma2 + n * tau2;
    const double xbar = group.mean();
    return -0.5 * n * log_2pi - 0.5 * (n - 1.0) * std::log(sigma2) -
           0.5 * std::log(between_var) - 0.5 * group.ss_within() / sigma2 -
           0.5 * n * (xbar - mu) * (xbar - mu) / between_var;
  }
  if (rng == nullptr) {
    throw std::invalid_argument(
        "marginal_group_loglik: Student-t levels need an rng for the Monte Carlo estimate");
  }
  if (mc_points < 1) throw std::invalid_argument("marginal_group_loglik: mc_points >= 1");
  Eigen::VectorXd loglik(mc_points);
  for (int k = 0; k < mc_points; ++k) {
    const double theta = sample_prior_theta(spec, mu, tau2, *rng);
    loglik[k] = loglik_level1(spec, group, theta, sigma2);
  }
  return log_sum_exp(loglik) - std::log(static_cast<double>(mc_points));
}

LooWeights loo_weights(const PosteriorChain& chain, int group_index, const ModelSpec& spec,
                       const Dataset& data, double ess_threshold, int t_marginal_points) {
  if (group_index < 0 || group_index >= data.n_groups()) {
    throw std::invalid_argument("loo_weights: unknown group index");
  }
  if (chain.scope != data.all_indices()) {
    throw std::invalid_argument("loo_weights: chain must be fitted on all groups");
  }
  const auto& group = data.groups[static_cast<std::size_t>(group_index)];
  const int m_draws = chain.draws();

  LooWeights out;
  out.group = group_index;
  out.log_weights.resize(m_draws);
  const bool needs_rng = spec.any_student_t();
  RngStream rng = RngStream::derive(
      chain.config.seed, {stream_tag::marginal, static_cast<std::uint64_t>(group_index)});
  for (int m = 0; m < m_draws; ++m) {
    out.log_weights[m] =
        -marginal_group_loglik(spec, group, chain.mu[m], chain.tau2[m], chain.sigma2[m],
                               t_marginal_points, needs_rng ? &rng : nullptr);
  }
  out.log_weights.array() -= log_sum_exp(out.log_weights);
  out.weights = out.log_weights.array().exp().matrix();
  out.ess = 1.0 / out.weights.array().square().sum();
  if (out.ess > static_cast<double>(m_draws)) out.ess = static_cast<double>(m_draws);
  out.fallback = out.ess < ess_threshold;
  return out;
}

std::vector<int> multinomial_resample(const Eigen::Ref<const Eigen::VectorXd>& weights,
                                      int n, RngStream& rng) {
  if (weights.size() == 0) throw std::invalid_argument("multinomial_resample: no weights");
  if ((weights.array() < 0.0).any()) {
    throw std::invalid_argument("multinomial_resample: negative weight");
  }
  Eigen::VectorXd cumulative(weights.size());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    cumulative[k] = acc;
  }
  if (!(acc > 0.0)) throw std::invalid_argument("multinomial_resample: zero total weight");

  std::vector<int> out(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double u = rng.uniform() * acc;
    const double* begin = cumulative.data();
    const double* end = begin + cumulative.size();
    const double* it = std::upper_bound(begin, end, u);
    if (it == end) --it;
    out[static_cast<std::size_t>(m)] = static_cast<int>(it - begin);
  }
  return out;
}

CheckReport cv_ppc_fast(const Dataset& data, const ModelSpec& spec, const CheckConfig& cfg,
                        const LooConfig& loo_cfg) {
  validate_check_config(cfg, "cv-fast");
  spec.validate();
  if (data.n_groups() < 4) {
    throw data_error("cross-validated checks require at least 4 groups under default priors");
  }
  if (!(loo_cfg.ess_fraction >= 0.0)) {
    throw config_error("loo: ess_fraction must be non-negative");
  }

  SamplerConfig full_cfg = cfg.sampler;
  full_cfg.seed = derive_key(cfg.sampler.seed, {stream_tag::full_fit});
  const PosteriorChain chain = fit_posterior(data, data.all_indices(), spec, full_cfg);
  const double threshold = loo_cfg.ess_fraction * static_cast<double>(chain.draws());

  const int n_groups = data.n_groups();
  std::vector<detail::CvGroupResult> results(static_cast<std::size_t>(n_groups));
  std::vector<GroupLooDiag> diags(static_cast<std::size_t>(n_groups));

  parallel_for(
      n_groups,
      [&](int i) {
        const LooWeights w =
            loo_weights(chain, i, spec, data, threshold, loo_cfg.t_marginal_points);
        auto& diag = diags[static_cast<std::size_t>(i)];
        diag.group = data.groups[static_cast<std::size_t>(i)].group_id;
        diag.ess = w.ess;
        diag.fallback = w.fallback;
        if (w.fallback) {
          results[static_cast<std::size_t>(i)] = detail::cv_group_exact(data, i, spec, cfg);
          return;
        }
        RngStream resample_rng = RngStream::derive(
            cfg.sampler.seed, {stream_tag::resample, static_cast<std::uint64_t>(i)});
        const std::vector<int> idx =
            multinomial_resample(w.weights, chain.draws(), resample_rng);
        Eigen::VectorXd mu(chain.draws()), tau2(chain.draws()), sigma2(chain.draws());
        for (int m = 0; m < chain.draws(); ++m) {
          mu[m] = chain.mu[idx[static_cast<std::size_t>(m)]];
          tau2[m] = chain.tau2[idx[static_cast<std::size_t>(m)]];
          sigma2[m] = chain.sigma2[idx[static_cast<std::size_t>(m)]];
        }
        RngStream rng = RngStream::derive(
            cfg.sampler.seed, {stream_tag::cv_draws, static_cast<std::uint64_t>(i)});
        results[static_cast<std::size_t>(i)] = detail::cv_group_pvalues(
            data.groups[static_cast<std::size_t>(i)], mu, tau2, sigma2, spec, cfg, rng);
      },
      cfg.threads);

  CheckReport report;
  report.method = "cv-fast";
  report.has_population = false;
  report.kinds = cfg.kinds;
  report.model = spec;
  report.config = cfg;
  report.loo = diags;
  report.warnings = chain.warnings;
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
