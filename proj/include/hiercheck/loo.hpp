#ifndef HIERCHECK_LOO_HPP
#define HIERCHECK_LOO_HPP

#include <Eigen/Core>
#include <vector>

#include "hiercheck/checks.hpp"
#include "hiercheck/data.hpp"
#include "hiercheck/model.hpp"
#include "hiercheck/rng.hpp"
#include "hiercheck/sampler.hpp"

namespace hiercheck {

struct LooConfig {
  // Groups whose effective sample size falls below ess_fraction * m_draws are
  // refit exactly instead of resampled.
  double ess_fraction = 0.1;
  // Monte Carlo points per draw for the group marginal when a level is
  // Student-t (the normal-normal marginal is closed form).
  int t_marginal_points = 256;
};

struct LooWeights {
  int group = -1;
  Eigen::VectorXd log_weights;  // normalized: logsumexp == 0
  Eigen::VectorXd weights;      // exp(log_weights), sums to 1
  double ess = 0.0;
  bool fallback = false;
};

// log f(x_i | mu, tau2, sigma2) with the group center integrated out.
// Closed form when both levels are normal; otherwise a Monte Carlo average of
// the level-1 likelihood over level-2 draws (rng required).
double marginal_group_loglik(const ModelSpec& spec, const GroupData& group, double mu,
                             double tau2, double sigma2, int mc_points = 256,
                             RngStream* rng = nullptr);

// Importance weights turning the full-data chain into an approximation of the
// posterior without the given group: log w_m = -log f(x_i | eta_m).
LooWeights loo_weights(const PosteriorChain& chain, int group_index, const ModelSpec& spec,
                       const Dataset& data, double ess_threshold,
                       int t_marginal_points = 256);

// With-replacement multinomial draw of n indices proportional to weights.
std::vector<int> multinomial_resample(const Eigen::Ref<const Eigen::VectorXd>& weights,
                                      int n, RngStream& rng);

// Cross-validated check from a single full-data fit: per group, importance
// resampling approximates the leave-one-group-out posterior; groups flagged by
// the ESS guard are refit exactly (bit-identical to cv_ppc_report for them).
CheckReport cv_ppc_fast(const Dataset& data, const ModelSpec& spec, const CheckConfig& cfg,
                        const LooConfig& loo_cfg = {});

}  // namespace hiercheck

#endif
