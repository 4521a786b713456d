#ifndef HIERCHECK_CALIBRATION_HPP
#define HIERCHECK_CALIBRATION_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "hiercheck/checks.hpp"
#include "hiercheck/data.hpp"
#include "hiercheck/loo.hpp"

namespace hiercheck {

enum class Perturbation { None, ShiftGroup, InflateGroup, HeavyTailLevel2 };

// Generative scenario for p-value distribution and power studies: the
// two-level normal model at (mu0, tau20, sigma20), optionally with one group's
// center shifted by delta level-2 standard deviations, one group's level-1
// scale inflated by a factor, or a heavy-tailed level-2 law.
struct ScenarioSpec {
  int n_groups = 5;
  std::vector<int> group_sizes = {8};  // broadcast when a single entry
  double mu0 = 0.0;
  double tau20 = 1.0;
  double sigma20 = 1.0;
  Perturbation perturbation = Perturbation::None;
  int perturb_group = 0;        // 0-based
  double shift_delta = 0.0;     // in units of sqrt(tau20)
  double inflate_factor = 1.0;  // multiplies the level-1 standard deviation
  double heavy_nu = 3.0;        // level-2 t degrees of freedom
  std::uint64_t seed = 1;

  void validate() const;
  std::vector<int> resolved_sizes() const;
};

// One simulated dataset; deterministic in (scenario.seed, replicate_index).
// Group ids are "g1".."gI".
Dataset simulate_dataset(const ScenarioSpec& scenario, int replicate_index);

// P-values collected over replicates. Failed replicates keep a NaN matrix and
// carry a diagnostic message.
struct PValueSample {
  ScenarioSpec scenario;
  std::string method;
  std::vector<std::string> targets;  // group ids, then "population" for ppc
  std::vector<Discrepancy> kinds;
  std::vector<Eigen::MatrixXd> p;    // one kinds x targets matrix per replicate
  std::vector<std::string> failures; // empty string = replicate succeeded

  int n_replicates() const { return static_cast<int>(p.size()); }
  int target_index(const std::string& target) const;  // -1 if absent
  int kind_index(Discrepancy kind) const;             // -1 if absent
};

// Simulates n_reps datasets and runs the chosen check on each (replicates in
// parallel, failures isolated per replicate). method is "ppc", "cv" or
// "cv-fast".
PValueSample calibration_run(const ScenarioSpec& scenario, int n_reps,
                             const std::string& method, const ModelSpec& spec,
                             const CheckConfig& cfg, const LooConfig& loo_cfg = {});

struct UniformityStats {
  double ks_distance = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  int count = 0;
};

// Empirical distance from Uniform(0,1) plus first two moments of the selected
// p-value cell across the successful replicates.
UniformityStats uniformity_stats(const PValueSample& sample, const std::string& target,
                                 Discrepancy kind);

// Fraction of successful replicates with p < alpha; bonferroni_k > 0 applies
// min(1, k*p) first.
double power_estimate(const PValueSample& sample, const std::string& target,
                      Discrepancy kind, double alpha, int bonferroni_k = 0);

std::string perturbation_name(Perturbation p);
Perturbation perturbation_from_name(const std::string& name);

}  // namespace hiercheck

#endif
