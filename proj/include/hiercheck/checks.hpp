#ifndef HIERCHECK_CHECKS_HPP
#define HIERCHECK_CHECKS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hiercheck/data.hpp"
#include "hiercheck/discrepancy.hpp"
#include "hiercheck/model.hpp"
#include "hiercheck/rng.hpp"
#include "hiercheck/sampler.hpp"

namespace hiercheck {

// How the realized side of a theta-dependent discrepancy gets its group
// center in the cross-validated check. Literal follows the replicate side and
// reuses the level-2 prior draw; PosteriorRealized conditions the center on
// the group's observed data, which keeps Level2X2 informative.
enum class ThetaMode { Literal, PosteriorRealized };

enum class Adjust { None, Bonferroni };

struct CheckConfig {
  std::vector<Discrepancy> kinds;
  ThetaMode theta_mode = ThetaMode::PosteriorRealized;
  Adjust adjust = Adjust::None;
  SamplerConfig sampler;
  int threads = 0;  // 0 = hardware concurrency
};

struct GroupLooDiag {
  std::string group;
  double ess = 0.0;
  bool fallback = false;
};

// P-value matrix indexed by (discrepancy, group-or-population), plus echoes of
// everything needed to reproduce the run. Cells that do not apply (per-group
// kind in the population column and vice versa) hold NaN.
struct CheckReport {
  std::string method;  // "ppc" | "cv" | "cv-fast"
  std::vector<std::string> groups;
  bool has_population = false;
  std::vector<Discrepancy> kinds;
  Eigen::MatrixXd p;
  Eigen::MatrixXd p_adjusted;  // empty unless adjust != None
  ModelSpec model;
  CheckConfig config;
  std::vector<GroupLooDiag> loo;  // filled by the fast path
  std::vector<std::string> warnings;

  int n_targets() const { return static_cast<int>(groups.size()) + (has_population ? 1 : 0); }
};

// Proportion of draws where the replicate discrepancy strictly exceeds the
// realized one.
double tail_probability(const Eigen::Ref<const Eigen::VectorXd>& replicate_values,
                        const Eigen::Ref<const Eigen::VectorXd>& realized_values);

// min(1, k * p).
double bonferroni_adjust(double p, int k);

// Seed of the leave-one-group-out fit inside the cross-validated check; the
// resulting chain is bit-identical to fit_posterior on the group-deleted data
// with this seed.
std::uint64_t cv_fit_seed(std::uint64_t seed, int left_out_group);

void validate_check_config(const CheckConfig& cfg, const std::string& method);

// Regular posterior predictive check: one full-data fit; each kept draw
// replicates the whole dataset from its group centers, and both sides of
// every discrepancy are evaluated at that draw's parameters. Reports
// per-group columns and a population column.
CheckReport ppc_report(const Dataset& data, const ModelSpec& spec, const CheckConfig& cfg);

// Cross-validated check for one group: fit without the group, draw its center
// from the level-2 law per kept draw, replicate its data, and compare
// discrepancies.
std::map<Discrepancy, double> cv_ppc_group(const Dataset& data, int group_index,
                                           const ModelSpec& spec, const CheckConfig& cfg);

// Runs cv_ppc_group for every group (in parallel) and assembles the report;
// per-group columns only.
CheckReport cv_ppc_report(const Dataset& data, const ModelSpec& spec, const CheckConfig& cfg);

namespace detail {

// One draw of the group center given the group's data and the hyperparameters.
// Conjugate for normal levels; Student-t levels interleave latent-scale
// refreshes with conjugate draws for a fixed number of sweeps.
double realized_theta_draw(const ModelSpec& spec, const GroupData& group, double mu,
                           double tau2, double sigma2, RngStream& rng);

struct CvGroupResult {
  std::map<Discrepancy, double> p;
  std::vector<std::string> warnings;
};

// Steps 2-4 of the cross-validated procedure against a given sequence of
// hyperparameter draws. Shared by the exact and the importance-resampled path.
CvGroupResult cv_group_pvalues(const GroupData& group, const Eigen::VectorXd& mu,
                               const Eigen::VectorXd& tau2, const Eigen::VectorXd& sigma2,
                               const ModelSpec& spec, const CheckConfig& cfg, RngStream& rng);

CvGroupResult cv_group_exact(const Dataset& data, int group_index, const ModelSpec& spec,
                             const CheckConfig& cfg);

Eigen::MatrixXd adjusted_matrix(const Eigen::MatrixXd& p, int k);

}  // namespace detail

}  // namespace hiercheck

#endif
