#ifndef HIERCHECK_SAMPLER_HPP
#define HIERCHECK_SAMPLER_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hiercheck/data.hpp"
#include "hiercheck/model.hpp"
#include "hiercheck/rng.hpp"

namespace hiercheck {

struct SamplerConfig {
  int m_draws = 10000;
  int burn_in = 2000;
  int thin = 1;
  std::uint64_t seed = 1;
  // Test mode: hold a scale fixed instead of drawing it. Used by the oracle
  // tests that compare against closed forms with known scales.
  std::optional<double> fix_sigma2;
  std::optional<double> fix_tau2;

  void validate() const;
};

// Kept posterior draws, stored column-wise. thetas columns (and the flattened
// lambda1 columns) follow scope order.
struct PosteriorChain {
  Eigen::VectorXd mu;
  Eigen::VectorXd tau2;
  Eigen::VectorXd sigma2;
  Eigen::MatrixXd thetas;                   // m_draws x n_scope
  std::optional<Eigen::MatrixXd> lambda1;   // m_draws x n_obs_in_scope
  std::optional<Eigen::MatrixXd> lambda2;   // m_draws x n_scope
  std::vector<int> scope;
  ModelSpec model;
  SamplerConfig config;
  std::vector<std::string> warnings;

  int draws() const { return static_cast<int>(mu.size()); }
  ParamState state(int m) const;
};

struct NormalParams {
  double mean = 0.0;
  double var = 1.0;
};

// Full conditional of a group center: precision-weighted combination of the
// group's observations and the population center. Latent scales default to 1
// (normal levels).
NormalParams cond_theta_params(const Eigen::Ref<const Eigen::VectorXd>& values, double mu,
                               double tau2, double sigma2,
                               const Eigen::VectorXd* lambda1_i = nullptr,
                               double lambda2_i = 1.0);

// Full conditional of the population center under the flat prior.
NormalParams cond_mu_params(const Eigen::Ref<const Eigen::VectorXd>& thetas, double tau2,
                            const Eigen::VectorXd* lambda2 = nullptr);

// Inverse-gamma draw for the level-1 variance: shape N/2, rate SS/2 with
// SS = sum_ij lambda1_ij (x_ij - theta_i)^2.
double cond_sigma2_draw(const Dataset& data, const std::vector<int>& scope,
                        const Eigen::Ref<const Eigen::VectorXd>& thetas,
                        const Eigen::VectorXd* lambda1, RngStream& rng);

// Inverse-gamma draw for the level-2 variance under pi(tau2) = 1/tau:
// shape (I-1)/2, rate sum_i lambda2_i (theta_i - mu)^2 / 2.
double cond_tau2_draw(const Eigen::Ref<const Eigen::VectorXd>& thetas, double mu,
                      const Eigen::VectorXd* lambda2, RngStream& rng);

// Latent scale updates for the Student-t levels (gamma full conditionals).
// Returns empty vectors for levels that are normal; throws if both are.
std::pair<Eigen::VectorXd, Eigen::VectorXd> cond_lambda_draws(const ModelSpec& spec,
                                                              const Dataset& data,
                                                              const std::vector<int>& scope,
                                                              const ParamState& state,
                                                              RngStream& rng);

// One draw of a group center from the level-2 law.
double sample_prior_theta(const ModelSpec& spec, double mu, double tau2, RngStream& rng);

// n iid draws from the level-1 law around theta.
Eigen::VectorXd sample_replicate_group(const ModelSpec& spec, Eigen::Index n, double theta,
                                       double sigma2, RngStream& rng);

// Gibbs sampler over (lambda, theta, mu, tau2, sigma2) in that fixed sweep
// order. Requires at least 3 in-scope groups (flat prior on tau needs them for
// a proper posterior) and warns at exactly 3. Deterministic given the seed.
PosteriorChain fit_posterior(const Dataset& data, const std::vector<int>& scope,
                             const ModelSpec& spec, const SamplerConfig& cfg);

}  // namespace hiercheck

#endif
