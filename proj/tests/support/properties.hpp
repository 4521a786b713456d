#ifndef HIERCHECK_TEST_PROPERTIES_HPP
#define HIERCHECK_TEST_PROPERTIES_HPP

#include <string>
#include <vector>

// Module invariants exercised as property checks. Each function throws
// std::runtime_error with a description on violation; they are shared between
// the unit suite and the acceptance suite.
namespace props {

void loglik_translation_invariance();
void loglik_t_normal_limit();
void loglik_monotone_in_residual();

void cond_theta_variance_bound();
void cond_theta_affine_equivariance();
void chain_reproducibility();
void fit_normal_limit_agreement();

void discrepancy_nonnegative_zero_iff();
void discrepancy_scale_invariance();
void discrepancy_translation_equivariance();
void discrepancy_population_additivity();

void tail_probability_grid_and_monotonicity();
void cv_step1_bit_identity();
void kind_set_stability();
void bonferroni_bounds();

void ess_bounds_and_equal_weights();
void equal_weight_resample_is_uniform_bootstrap();
void marginal_matches_quadrature();

void power_monotone_in_alpha();
void adjusted_power_not_larger();
void power_monotone_in_shift();
void simulate_dataset_determinism();

struct NamedProperty {
  std::string name;
  void (*fn)();
};

const std::vector<NamedProperty>& all_properties();

}  // namespace props

#endif
