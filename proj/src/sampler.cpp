#include "hiercheck/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hiercheck/errors.hpp"

namespace hiercheck {

void SamplerConfig::validate() const {
  if (m_draws < 100) throw config_error("sampler: m_draws must be at least 100");
  if (burn_in < 0) throw config_error("sampler: burn_in must be non-negative");
  if (thin < 1) throw config_error("sampler: thin must be at least 1");
  if (fix_sigma2 && !(*fix_sigma2 > 0.0)) throw config_error("sampler: fixed sigma2 must be positive");
  if (fix_tau2 && !(*fix_tau2 > 0.0)) throw config_error("sampler: fixed tau2 must be positive");
}

ParamState PosteriorChain::state(int m) const {
  ParamState s;
  s.mu = mu[m];
  s.tau2 = tau2[m];
  s.sigma2 = sigma2[m];
  s.thetas = thetas.row(m).transpose();
  if (lambda1) s.lambda1 = lambda1->row(m).transpose();
  if (lambda2) s.lambda2 = lambda2->row(m).transpose();
  return s;
}

NormalParams cond_theta_params(const Eigen::Ref<const Eigen::VectorXd>& values, double mu,
                               double tau2, double sigma2, const Eigen::VectorXd* lambda1_i,
                               double lambda2_i) {
  if (!(tau2 > 0.0) || !(sigma2 > 0.0) || !(lambda2_i > 0.0)) {
    throw std::invalid_argument("cond_theta_params: scales must be positive");
  }
  double prec = 0.0;
  double weighted = 0.0;
  if (lambda1_i) {
    if (lambda1_i->size() != values.size()) {
      throw std::invalid_argument("cond_theta_params: lambda1 length mismatch");
    }
    if ((lambda1_i->array() <= 0.0).any()) {
      throw std::invalid_argument("cond_theta_params: latent scales must be positive");
    }
    prec = lambda1_i->sum() / sigma2;
    weighted = (lambda1_i->array() * values.array()).sum() / sigma2;
  } else {
    prec = static_cast<double>(values.size()) / sigma2;
    weighted = values.sum() / sigma2;
  }
  const double prior_prec = lambda2_i / tau2;
  const double total = prec + prior_prec;
  return {(weighted + prior_prec * mu) / total, 1.0 / total};
}

NormalParams cond_mu_params(const Eigen::Ref<const Eigen::VectorXd>& thetas, double tau2,
                            const Eigen::VectorXd* lambda2) {
  if (thetas.size() == 0) throw std::invalid_argument("cond_mu_params: no group centers");
  if (!(tau2 > 0.0)) throw std::invalid_argument("cond_mu_params: tau2 must be positive");
  if (!lambda2) {
    return {thetas.mean(), tau2 / static_cast<double>(thetas.size())};
  }
  if (lambda2->size() != thetas.size()) {
    throw std::invalid_argument("cond_mu_params: lambda2 length mismatch");
  }
  const double total = lambda2->sum();
  return {(lambda2->array() * thetas.array()).sum() / total, tau2 / total};
}

double cond_sigma2_draw(const Dataset& data, const std::vector<int>& scope,
                        const Eigen::Ref<const Eigen::VectorXd>& thetas,
                        const Eigen::VectorXd* lambda1, RngStream& rng) {
  double ss = 0.0;
  Eigen::Index n_total = 0;
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < scope.size(); ++k) {
    const auto& values = data.groups[static_cast<std::size_t>(scope[k])].values;
    const auto resid2 = (values.array() - thetas[static_cast<Eigen::Index>(k)]).square();
    if (lambda1) {
      ss += (lambda1->segment(offset, values.size()).array() * resid2).sum();
    } else {
      ss += resid2.sum();
    }
    offset += values.size();
    n_total += values.size();
  }
  if (!(ss > 0.0)) {
    throw data_error("sigma2 update: zero residual sum of squares (point-mass fit)");
  }
  return rng.inv_gamma(0.5 * static_cast<double>(n_total), 0.5 * ss);
}

double cond_tau2_draw(const Eigen::Ref<const Eigen::VectorXd>& thetas, double mu,
                      const Eigen::VectorXd* lambda2, RngStream& rng) {
  const auto dev2 = (thetas.array() - mu).square();
  const double rate = lambda2 ? (lambda2->array() * dev2).sum() : dev2.sum();
  if (!(rate > 0.0)) {
    throw data_error("tau2 update: zero between-group deviation (point-mass fit)");
  }
  const double shape = 0.5 * (static_cast<double>(thetas.size()) - 1.0);
  return rng.inv_gamma(shape, 0.5 * rate);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> cond_lambda_draws(const ModelSpec& spec,
                                                              const Dataset& data,
                                                              const std::vector<int>& scope,
                                                              const ParamState& state,
                                                              RngStream& rng) {
  if (!spec.any_student_t()) {
    throw std::invalid_argument("cond_lambda_draws: both levels are normal");
  }
  Eigen::VectorXd lambda1;
  Eigen::VectorXd lambda2;
  if (spec.level1 == LevelKind::StudentT) {
    Eigen::Index n_total = 0;
    for (int g : scope) n_total += data.groups[static_cast<std::size_t>(g)].size();
    lambda1.resize(n_total);
    Eigen::Index offset = 0;
    for (std::size_t k = 0; k < scope.size(); ++k) {
      const auto& values = data.groups[static_cast<std::size_t>(scope[k])].values;
      const double theta = state.thetas[static_cast<Eigen::Index>(k)];
      for (Eigen::Index j = 0; j < values.size(); ++j) {
        const double r2 = (values[j] - theta) * (values[j] - theta) / state.sigma2;
        lambda1[offset + j] = rng.gamma(0.5 * (spec.nu1 + 1.0), 0.5 * (spec.nu1 + r2));
      }
      offset += values.size();
    }
  }
  if (spec.level2 == LevelKind::StudentT) {
    lambda2.resize(state.thetas.size());
    for (Eigen::Index i = 0; i < state.thetas.size(); ++i) {
      const double d2 = (state.thetas[i] - state.mu) * (state.thetas[i] - state.mu) / state.tau2;
      lambda2[i] = rng.gamma(0.5 * (spec.nu2 + 1.0), 0.5 * (spec.nu2 + d2));
    }
  }
  return {std::move(lambda1), std::move(lambda2)};
}

double sample_prior_theta(const ModelSpec& spec, double mu, double tau2, RngStream& rng) {
  if (!(tau2 > 0.0)) throw std::invalid_argument("sample_prior_theta: tau2 must be positive");
  if (spec.level2 == LevelKind::Normal) return rng.normal(mu, tau2);
  return mu + std::sqrt(tau2) * rng.student_t(spec.nu2);
}

Eigen::VectorXd sample_replicate_group(const ModelSpec& spec, Eigen::Index n, double theta,
                                       double sigma2, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_replicate_group: need n >= 1");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sample_replicate_group: sigma2 must be positive");
  Eigen::VectorXd out(n);
  const double scale = std::sqrt(sigma2);
  for (Eigen::Index j = 0; j < n; ++j) {
    out[j] = spec.level1 == LevelKind::Normal ? rng.normal(theta, sigma2)
                                              : theta + scale * rng.student_t(spec.nu1);
  }
  return out;
}

namespace {

void validate_scope(const Dataset& data, const std::vector<int>& scope) {
  if (scope.empty()) throw std::invalid_argument("fit_posterior: empty scope");
  std::vector<int> sorted = scope;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0 || sorted[k] >= data.n_groups()) {
      throw std::invalid_argument("fit_posterior: scope index out of range");
    }
    if (k > 0 && sorted[k] == sorted[k - 1]) {
      throw std::invalid_argument("fit_posterior: duplicate scope index");
    }
  }
}

struct InitState {
  double mu, tau2, sigma2;
  Eigen::VectorXd thetas;
};

// Method-of-moments start: group means, grand mean, pooled within-group
// variance and variance of group means (1.0 where undefined or zero).
InitState moments_init(const Dataset& data, const std::vector<int>& scope) {
  const int n_scope = static_cast<int>(scope.size());
  InitState init;
  init.thetas.resize(n_scope);
  double total_sum = 0.0;
  Eigen::Index total_n = 0;
  double ss_within = 0.0;
  for (int k = 0; k < n_scope; ++k) {
    const auto& g = data.groups[static_cast<std::size_t>(scope[static_cast<std::size_t>(k)])];
    init.thetas[k] = g.mean();
    total_sum += g.values.sum();
    total_n += g.size();
    ss_within += g.ss_within();
  }
  init.mu = total_sum / static_cast<double>(total_n);
  const auto dof_within = total_n - n_scope;
  init.sigma2 = (dof_within > 0 && ss_within > 0.0)
                    ? ss_within / static_cast<double>(dof_within)
                    : 1.0;
  const double ss_between = (init.thetas.array() - init.thetas.mean()).square().sum();
  init.tau2 = (n_scope > 1 && ss_between > 0.0) ? ss_between / (n_scope - 1) : 1.0;
  return init;
}

}  // namespace

PosteriorChain fit_posterior(const Dataset& data, const std::vector<int>& scope,
                             const ModelSpec& spec, const SamplerConfig& cfg) {
  cfg.validate();
  spec.validate();
  validate_scope(data, scope);

  const int n_scope = static_cast<int>(scope.size());
  if (n_scope < 3) {
    throw data_error("fit requires at least 3 groups: the flat prior on tau leaves the "
                     "posterior improper with fewer");
  }

  Eigen::Index n_total = 0;
  bool all_identical = true;
  const double first_value = data.groups[static_cast<std::size_t>(scope.front())].values[0];
  for (int g : scope) {
    const auto& values = data.groups[static_cast<std::size_t>(g)].values;
    n_total += values.size();
    if ((values.array() != first_value).any()) all_identical = false;
  }
  if (n_total < 3) throw data_error("fit requires at least 3 observations in scope");
  if (all_identical) {
    throw data_error("degenerate data: all in-scope observations are identical");
  }

  PosteriorChain chain;
  chain.scope = scope;
  chain.model = spec;
  chain.config = cfg;
  if (n_scope == 3) {
    chain.warnings.push_back(
        "fit uses exactly 3 groups; the level-2 variance posterior is extremely heavy-tailed");
  }

  const bool t1 = spec.level1 == LevelKind::StudentT;
  const bool t2 = spec.level2 == LevelKind::StudentT;

  ParamState s;
  {
    const InitState init = moments_init(data, scope);
    s.mu = init.mu;
    s.tau2 = cfg.fix_tau2.value_or(init.tau2);
    s.sigma2 = cfg.fix_sigma2.value_or(init.sigma2);
    s.thetas = init.thetas;
    if (t1) s.lambda1 = Eigen::VectorXd::Ones(n_total);
    if (t2) s.lambda2 = Eigen::VectorXd::Ones(n_scope);
  }

  chain.mu.resize(cfg.m_draws);
  chain.tau2.resize(cfg.m_draws);
  chain.sigma2.resize(cfg.m_draws);
  chain.thetas.resize(cfg.m_draws, n_scope);
  if (t1) chain.lambda1 = Eigen::MatrixXd(cfg.m_draws, n_total);
  if (t2) chain.lambda2 = Eigen::MatrixXd(cfg.m_draws, n_scope);

  RngStream rng = RngStream::derive(cfg.seed, {stream_tag::gibbs});

  // Per-group offsets into the flattened lambda1 vector.
  std::vector<Eigen::Index> offsets(scope.size());
  {
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < scope.size(); ++k) {
      offsets[k] = off;
      off += data.groups[static_cast<std::size_t>(scope[k])].size();
    }
  }

  const long total_sweeps =
      static_cast<long>(cfg.burn_in) + static_cast<long>(cfg.m_draws) * cfg.thin;
  int kept = 0;
  for (long sweep = 0; sweep < total_sweeps; ++sweep) {
    // Sweep order is fixed: lambda, theta_1..theta_I, mu, tau2, sigma2.
    if (t1 || t2) {
      auto [l1, l2] = cond_lambda_draws(spec, data, scope, s, rng);
      if (t1) s.lambda1 = std::move(l1);
      if (t2) s.lambda2 = std::move(l2);
    }
    for (int k = 0; k < n_scope; ++k) {
      const auto& values =
          data.groups[static_cast<std::size_t>(scope[static_cast<std::size_t>(k)])].values;
      Eigen::VectorXd l1_seg;
      const Eigen::VectorXd* l1_ptr = nullptr;
      if (t1) {
        l1_seg = s.lambda1->segment(offsets[static_cast<std::size_t>(k)], values.size());
        l1_ptr = &l1_seg;
      }
      const double l2_i = t2 ? (*s.lambda2)[k] : 1.0;
      const NormalParams np = cond_theta_params(values, s.mu, s.tau2, s.sigma2, l1_ptr, l2_i);
      s.thetas[k] = rng.normal(np.mean, np.var);
    }
    {
      const NormalParams np =
          cond_mu_params(s.thetas, s.tau2, t2 ? &*s.lambda2 : nullptr);
      s.mu = rng.normal(np.mean, np.var);
    }
    if (!cfg.fix_tau2) {
      s.tau2 = cond_tau2_draw(s.thetas, s.mu, t2 ? &*s.lambda2 : nullptr, rng);
    }
    if (!cfg.fix_sigma2) {
      s.sigma2 = cond_sigma2_draw(data, scope, s.thetas, t1 ? &*s.lambda1 : nullptr, rng);
    }
    if (!std::isfinite(s.mu) || !std::isfinite(s.tau2) || !std::isfinite(s.sigma2)) {
      throw std::runtime_error("fit_posterior: sampler state became non-finite");
    }

    const long post_burn = sweep - cfg.burn_in;
    if (post_burn >= 0 && (post_burn + 1) % cfg.thin == 0) {
      chain.mu[kept] = s.mu;
      chain.tau2[kept] = s.tau2;
      chain.sigma2[kept] = s.sigma2;
      chain.thetas.row(kept) = s.thetas.transpose();
      if (t1) chain.lambda1->row(kept) = s.lambda1->transpose();
      if (t2) chain.lambda2->row(kept) = s.lambda2->transpose();
      ++kept;
    }
  }
  return chain;
}

}  // namespace hiercheck
