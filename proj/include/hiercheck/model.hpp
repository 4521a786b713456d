#ifndef HIERCHECK_MODEL_HPP
#define HIERCHECK_MODEL_HPP

#include <Eigen/Core>
#include <optional>
#include <string>

#include "hiercheck/errors.hpp"

namespace hiercheck {

enum class LevelKind { Normal, StudentT };

// Two-level model: observations around a group center (level 1), group
// centers around the population center (level 2). Either level may be a
// Student-t with fixed degrees of freedom; sigma2/tau2 are always squared
// scale parameters (the t variance is scale^2 * nu / (nu - 2)). The prior is
// fixed to the flat/objective family: pi(mu) = 1, pi(sigma2) = 1/sigma2,
// pi(tau2) = 1/tau.
struct ModelSpec {
  LevelKind level1 = LevelKind::Normal;
  double nu1 = 3.0;
  LevelKind level2 = LevelKind::Normal;
  double nu2 = 2.2;

  static ModelSpec normal_normal() { return {}; }
  static ModelSpec student_t(double nu1, double nu2) {
    return {LevelKind::StudentT, nu1, LevelKind::StudentT, nu2};
  }

  bool any_student_t() const {
    return level1 == LevelKind::StudentT || level2 == LevelKind::StudentT;
  }

  // Degrees of freedom must exceed 2 so both levels keep finite variances.
  void validate() const {
    if (level1 == LevelKind::StudentT && !(nu1 > 2.0))
      throw config_error("model: level-1 degrees of freedom must exceed 2");
    if (level2 == LevelKind::StudentT && !(nu2 > 2.0))
      throw config_error("model: level-2 degrees of freedom must exceed 2");
  }
};

// One joint draw of all unknowns. thetas align with the scope (group subset)
// of the fit that produced the state. Latent precision multipliers are present
// only for Student-t levels; lambda1 is flattened over the in-scope
// observations in group order.
struct ParamState {
  double mu = 0.0;
  double tau2 = 1.0;
  double sigma2 = 1.0;
  Eigen::VectorXd thetas;
  std::optional<Eigen::VectorXd> lambda1;
  std::optional<Eigen::VectorXd> lambda2;
};

inline std::string level_kind_name(LevelKind k) {
  return k == LevelKind::Normal ? "normal" : "t";
}

}  // namespace hiercheck

#endif
