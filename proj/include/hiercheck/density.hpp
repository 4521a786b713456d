#ifndef HIERCHECK_DENSITY_HPP
#define HIERCHECK_DENSITY_HPP

#include <Eigen/Core>

#include "hiercheck/data.hpp"
#include "hiercheck/model.hpp"

namespace hiercheck {

double normal_logpdf(double x, double mean, double var);

// Student-t with location/squared-scale parameterization: x = loc + scale * t_nu.
double student_t_logpdf(double x, double loc, double scale2, double nu);

// Sum over a group of the level-1 log density given the group center and
// squared scale.
double loglik_level1(const ModelSpec& spec, const GroupData& group, double theta,
                     double sigma2);
double loglik_level1(const ModelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& values,
                     double theta, double sigma2);

// Level-2 log density of one group center given the population parameters.
double loglik_level2(const ModelSpec& spec, double theta, double mu, double tau2);

}  // namespace hiercheck

#endif
