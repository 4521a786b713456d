#include "hiercheck/discrepancy.hpp"

#include <stdexcept>

#include "hiercheck/errors.hpp"

namespace hiercheck {

DiscrepancyDependence depends_on(Discrepancy kind) {
  switch (kind) {
    case Discrepancy::OverallX2: return {true, false, true};
    case Discrepancy::Level1X2: return {true, true, true};
    case Discrepancy::Level2X2: return {false, true, true};
    case Discrepancy::MaxObs: return {true, false, false};
    case Discrepancy::MinObs: return {true, false, false};
    case Discrepancy::MaxAbsDevTheta: return {true, true, false};
    case Discrepancy::MaxAbsDevMu: return {true, false, true};
    case Discrepancy::MaxGroupMeanDev: return {true, false, true};
  }
  throw std::logic_error("unreachable");
}

bool per_group_capable(Discrepancy kind) { return kind != Discrepancy::MaxGroupMeanDev; }

bool population_capable(Discrepancy kind) {
  switch (kind) {
    case Discrepancy::OverallX2:
    case Discrepancy::Level1X2:
    case Discrepancy::Level2X2:
    case Discrepancy::MaxGroupMeanDev:
      return true;
    default:
      return false;
  }
}

double eval_group(Discrepancy kind, const Eigen::Ref<const Eigen::VectorXd>& values,
                  double theta, double mu, double tau2, double sigma2) {
  if (!per_group_capable(kind)) {
    throw std::invalid_argument("eval_group: " + kind_name(kind) + " is population-only");
  }
  if (!(tau2 > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("eval_group: scales must be positive");
  }
  switch (kind) {
    case Discrepancy::OverallX2:
      return (values.array() - mu).square().sum() / (sigma2 + tau2);
    case Discrepancy::Level1X2:
      return (values.array() - theta).square().sum() / sigma2;
    case Discrepancy::Level2X2:
      return (theta - mu) * (theta - mu) / tau2;
    case Discrepancy::MaxObs:
      return values.maxCoeff();
    case Discrepancy::MinObs:
      return values.minCoeff();
    case Discrepancy::MaxAbsDevTheta:
      return (values.array() - theta).abs().maxCoeff();
    case Discrepancy::MaxAbsDevMu:
      return (values.array() - mu).abs().maxCoeff();
    default:
      throw std::logic_error("unreachable");
  }
}

double eval_population(Discrepancy kind, const Dataset& data, const ParamState& state) {
  if (!population_capable(kind)) {
    throw std::invalid_argument("eval_population: " + kind_name(kind) + " is per-group only");
  }
  if (state.thetas.size() != data.n_groups()) {
    throw std::invalid_argument("eval_population: state does not cover all groups");
  }
  if (kind == Discrepancy::MaxGroupMeanDev) {
    return (data.group_means().array() - state.mu).abs().maxCoeff();
  }
  double sum = 0.0;
  for (int i = 0; i < data.n_groups(); ++i) {
    sum += eval_group(kind, data.groups[static_cast<std::size_t>(i)].values, state.thetas[i],
                      state.mu, state.tau2, state.sigma2);
  }
  return sum;
}

const std::vector<Discrepancy>& all_discrepancies() {
  static const std::vector<Discrepancy> kinds = {
      Discrepancy::OverallX2,      Discrepancy::Level1X2,  Discrepancy::Level2X2,
      Discrepancy::MaxObs,         Discrepancy::MinObs,    Discrepancy::MaxAbsDevTheta,
      Discrepancy::MaxAbsDevMu,    Discrepancy::MaxGroupMeanDev,
  };
  return kinds;
}

std::string kind_name(Discrepancy kind) {
  switch (kind) {
    case Discrepancy::OverallX2: return "overall_x2";
    case Discrepancy::Level1X2: return "level1_x2";
    case Discrepancy::Level2X2: return "level2_x2";
    case Discrepancy::MaxObs: return "max_obs";
    case Discrepancy::MinObs: return "min_obs";
    case Discrepancy::MaxAbsDevTheta: return "max_absdev_theta";
    case Discrepancy::MaxAbsDevMu: return "max_absdev_mu";
    case Discrepancy::MaxGroupMeanDev: return "max_groupmean_dev";
  }
  throw std::logic_error("unreachable");
}

Discrepancy kind_from_name(const std::string& name) {
  for (Discrepancy k : all_discrepancies()) {
    if (kind_name(k) == name) return k;
  }
  throw config_error("unknown discrepancy kind: '" + name + "'");
}

}  // namespace hiercheck
