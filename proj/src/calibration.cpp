#include "hiercheck/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hiercheck/errors.hpp"
#include "hiercheck/parallel.hpp"

namespace hiercheck {

namespace {
constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();
}

void ScenarioSpec::validate() const {
  if (n_groups < 1) throw config_error("scenario: need at least one group");
  if (group_sizes.empty()) throw config_error("scenario: group_sizes empty");
  if (group_sizes.size() != 1 && group_sizes.size() != static_cast<std::size_t>(n_groups)) {
    throw config_error("scenario: group_sizes must have one entry or one per group");
  }
  for (int n : group_sizes) {
    if (n < 1) throw config_error("scenario: group sizes must be positive");
  }
  if (!(tau20 > 0.0) || !(sigma20 > 0.0)) {
    throw config_error("scenario: scales must be positive");
  }
  if (perturbation == Perturbation::ShiftGroup || perturbation == Perturbation::InflateGroup) {
    if (perturb_group < 0 || perturb_group >= n_groups) {
      throw config_error("scenario: perturbed group index out of range");
    }
  }
  if (perturbation == Perturbation::InflateGroup && !(inflate_factor > 0.0)) {
    throw config_error("scenario: inflate factor must be positive");
  }
  if (perturbation == Perturbation::HeavyTailLevel2 && !(heavy_nu > 0.0)) {
    throw config_error("scenario: heavy-tail degrees of freedom must be positive");
  }
}

std::vector<int> ScenarioSpec::resolved_sizes() const {
  if (group_sizes.size() == static_cast<std::size_t>(n_groups)) return group_sizes;
  return std::vector<int>(static_cast<std::size_t>(n_groups), group_sizes.front());
}

Dataset simulate_dataset(const ScenarioSpec& scenario, int replicate_index) {
  scenario.validate();
  RngStream rng = RngStream::derive(
      scenario.seed, {stream_tag::simulate, static_cast<std::uint64_t>(replicate_index)});
  const std::vector<int> sizes = scenario.resolved_sizes();
  const double tau0 = std::sqrt(scenario.tau20);

  Eigen::VectorXd thetas(scenario.n_groups);
  for (int i = 0; i < scenario.n_groups; ++i) {
    double center = scenario.mu0;
    if (scenario.perturbation == Perturbation::ShiftGroup && i == scenario.perturb_group) {
      center += scenario.shift_delta * tau0;
    }
    if (scenario.perturbation == Perturbation::HeavyTailLevel2) {
      thetas[i] = center + tau0 * rng.student_t(scenario.heavy_nu);
    } else {
      thetas[i] = rng.normal(center, scenario.tau20);
    }
  }

  Dataset out;
  out.groups.resize(static_cast<std::size_t>(scenario.n_groups));
  for (int i = 0; i < scenario.n_groups; ++i) {
    double var = scenario.sigma20;
    if (scenario.perturbation == Perturbation::InflateGroup && i == scenario.perturb_group) {
      var *= scenario.inflate_factor * scenario.inflate_factor;
    }
    auto& g = out.groups[static_cast<std::size_t>(i)];
    g.group_id = "g" + std::to_string(i + 1);
    g.values.resize(sizes[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < g.values.size(); ++j) g.values[j] = rng.normal(thetas[i], var);
  }
  return out;
}

int PValueSample::target_index(const std::string& target) const {
  const auto it = std::find(targets.begin(), targets.end(), target);
  return it == targets.end() ? -1 : static_cast<int>(it - targets.begin());
}

int PValueSample::kind_index(Discrepancy kind) const {
  const auto it = std::find(kinds.begin(), kinds.end(), kind);
  return it == kinds.end() ? -1 : static_cast<int>(it - kinds.begin());
}

PValueSample calibration_run(const ScenarioSpec& scenario, int n_reps,
                             const std::string& method, const ModelSpec& spec,
                             const CheckConfig& cfg, const LooConfig& loo_cfg) {
  scenario.validate();
  spec.validate();
  if (n_reps < 1) throw config_error("calibration: need at least one replicate");
  if (method != "ppc" && method != "cv" && method != "cv-fast") {
    throw config_error("calibration: unknown method '" + method + "'");
  }
  validate_check_config(cfg, method);

  PValueSample sample;
  sample.scenario = scenario;
  sample.method = method;
  sample.kinds = cfg.kinds;
  for (int i = 0; i < scenario.n_groups; ++i) {
    sample.targets.push_back("g" + std::to_string(i + 1));
  }
  if (method == "ppc") sample.targets.push_back("population");

  const int n_targets = static_cast<int>(sample.targets.size());
  const int n_kinds = static_cast<int>(cfg.kinds.size());
  sample.p.assign(static_cast<std::size_t>(n_reps),
                  Eigen::MatrixXd::Constant(n_kinds, n_targets, nan_value));
  sample.failures.assign(static_cast<std::size_t>(n_reps), "");

  parallel_for(
      n_reps,
      [&](int r) {
        try {
          const Dataset data = simulate_dataset(scenario, r);
          CheckConfig rep_cfg = cfg;
          rep_cfg.sampler.seed = derive_key(
              cfg.sampler.seed, {stream_tag::cal_rep, static_cast<std::uint64_t>(r)});
          CheckReport report;
          if (method == "ppc") {
            report = ppc_report(data, spec, rep_cfg);
          } else if (method == "cv") {
            report = cv_ppc_report(data, spec, rep_cfg);
          } else {
            report = cv_ppc_fast(data, spec, rep_cfg, loo_cfg);
          }
          auto& dest = sample.p[static_cast<std::size_t>(r)];
          if (report.p.rows() != dest.rows() || report.p.cols() != dest.cols()) {
            throw std::logic_error("calibration: report shape mismatch");
          }
          dest = report.p;
        } catch (const std::exception& e) {
          sample.failures[static_cast<std::size_t>(r)] = e.what();
        }
      },
      cfg.threads);
  return sample;
}

namespace {

std::vector<double> collect_cell(const PValueSample& sample, const std::string& target,
                                 Discrepancy kind) {
  const int t = sample.target_index(target);
  const int k = sample.kind_index(kind);
  if (t < 0) throw std::invalid_argument("unknown target '" + target + "'");
  if (k < 0) throw std::invalid_argument("kind not present in sample");
  std::vector<double> out;
  for (int r = 0; r < sample.n_replicates(); ++r) {
    if (!sample.failures[static_cast<std::size_t>(r)].empty()) continue;
    const double v = sample.p[static_cast<std::size_t>(r)](k, t);
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

}  // namespace

UniformityStats uniformity_stats(const PValueSample& sample, const std::string& target,
                                 Discrepancy kind) {
  std::vector<double> values = collect_cell(sample, target, kind);
  if (values.size() < 2) {
    throw data_error("uniformity_stats: need at least 2 successful replicates");
  }
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  UniformityStats stats;
  stats.count = static_cast<int>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double hi = (static_cast<double>(i) + 1.0) / n - values[i];
    const double lo = values[i] - static_cast<double>(i) / n;
    stats.ks_distance = std::max({stats.ks_distance, hi, lo});
  }
  const Eigen::Map<const Eigen::VectorXd> v(values.data(),
                                            static_cast<Eigen::Index>(values.size()));
  stats.mean = v.mean();
  stats.variance = (v.array() - stats.mean).square().sum() / (n - 1.0);
  return stats;
}

double power_estimate(const PValueSample& sample, const std::string& target,
                      Discrepancy kind, double alpha, int bonferroni_k) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("power_estimate: alpha must lie in (0,1)");
  }
  const std::vector<double> values = collect_cell(sample, target, kind);
  if (values.empty()) throw data_error("power_estimate: no successful replicates");
  int hits = 0;
  for (double p : values) {
    const double adjusted = bonferroni_k > 0 ? bonferroni_adjust(p, bonferroni_k) : p;
    if (adjusted < alpha) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

std::string perturbation_name(Perturbation p) {
  switch (p) {
    case Perturbation::None: return "none";
    case Perturbation::ShiftGroup: return "shift_group";
    case Perturbation::InflateGroup: return "inflate_group";
    case Perturbation::HeavyTailLevel2: return "heavy_tail_level2";
  }
  throw std::logic_error("unreachable");
}

Perturbation perturbation_from_name(const std::string& name) {
  if (name == "none") return Perturbation::None;
  if (name == "shift_group") return Perturbation::ShiftGroup;
  if (name == "inflate_group") return Perturbation::InflateGroup;
  if (name == "heavy_tail_level2") return Perturbation::HeavyTailLevel2;
  throw config_error("unknown perturbation: '" + name + "'");
}

}  // namespace hiercheck
