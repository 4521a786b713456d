#ifndef HIERCHECK_DISCREPANCY_HPP
#define HIERCHECK_DISCREPANCY_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "hiercheck/data.hpp"
#include "hiercheck/model.hpp"

namespace hiercheck {

// Discrepancy measures used to compare observed data against replicates. The
// chi-square kinds focus on the whole model, the first level, and the second
// level; the remaining kinds track extremes and absolute deviations.
enum class Discrepancy {
  OverallX2,        // sum_j (x_ij - mu)^2 / (sigma2 + tau2)
  Level1X2,         // sum_j (x_ij - theta_i)^2 / sigma2
  Level2X2,         // (theta_i - mu)^2 / tau2
  MaxObs,           // max_j x_ij
  MinObs,           // min_j x_ij
  MaxAbsDevTheta,   // max_j |x_ij - theta_i|
  MaxAbsDevMu,      // max_j |x_ij - mu|
  MaxGroupMeanDev,  // max_i |xbar_i - mu| (population only)
};

struct DiscrepancyDependence {
  bool uses_data = false;
  bool uses_theta = false;
  bool uses_eta = false;
};

// Which arguments the measure actually reads. A kind using the data only is a
// plain test statistic; Level2X2 ignores the data entirely.
DiscrepancyDependence depends_on(Discrepancy kind);

bool per_group_capable(Discrepancy kind);    // everything except MaxGroupMeanDev
bool population_capable(Discrepancy kind);   // the X2 kinds (summed) and MaxGroupMeanDev

// Value of a per-group-capable kind on one group's values.
double eval_group(Discrepancy kind, const Eigen::Ref<const Eigen::VectorXd>& values,
                  double theta, double mu, double tau2, double sigma2);

// Population value: X2 kinds sum their per-group values over all groups;
// MaxGroupMeanDev takes the largest |group mean - mu|. state.thetas must cover
// every group of the dataset in order.
double eval_population(Discrepancy kind, const Dataset& data, const ParamState& state);

const std::vector<Discrepancy>& all_discrepancies();

// Exact names used by the CLI and config files (overall_x2, level1_x2, ...).
std::string kind_name(Discrepancy kind);
Discrepancy kind_from_name(const std::string& name);

}  // namespace hiercheck

#endif
