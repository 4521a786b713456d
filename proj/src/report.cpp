#include "hiercheck/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hiercheck/errors.hpp"

namespace hiercheck {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Shortest decimal form that parses back to the same double.
std::string compact(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string model_line(const ModelSpec& model) {
  std::ostringstream os;
  os << "level1=" << level_kind_name(model.level1);
  if (model.level1 == LevelKind::StudentT) os << "(" << compact(model.nu1) << ")";
  os << " level2=" << level_kind_name(model.level2);
  if (model.level2 == LevelKind::StudentT) os << "(" << compact(model.nu2) << ")";
  return os.str();
}

void render_block(std::ostringstream& os, const CheckReport& report,
                  const Eigen::MatrixXd& values) {
  os << "discrepancy";
  for (const auto& g : report.groups) os << '\t' << g;
  if (report.has_population) os << "\tpopulation";
  os << '\n';
  for (int kk = 0; kk < static_cast<int>(report.kinds.size()); ++kk) {
    os << kind_name(report.kinds[static_cast<std::size_t>(kk)]);
    for (int t = 0; t < report.n_targets(); ++t) {
      const double v = values(kk, t);
      os << '\t' << (std::isnan(v) ? "-" : fixed3(v));
    }
    os << '\n';
  }
}

}  // namespace

std::string render_table(const CheckReport& report) {
  std::ostringstream os;
  os << "# hiercheck report\n";
  os << "# method: " << report.method << '\n';
  os << "# model: " << model_line(report.model) << '\n';
  os << "# sampler: draws=" << report.config.sampler.m_draws
     << " burn_in=" << report.config.sampler.burn_in << " thin=" << report.config.sampler.thin
     << " seed=" << report.config.sampler.seed << '\n';
  os << "# theta_mode: "
     << (report.config.theta_mode == ThetaMode::Literal ? "literal" : "posterior") << '\n';
  for (const auto& diag : report.loo) {
    os << "# loo: group=" << diag.group << " ess=" << fixed3(diag.ess)
       << " fallback=" << (diag.fallback ? "yes" : "no") << '\n';
  }
  for (const auto& w : report.warnings) os << "# warning: " << w << '\n';
  render_block(os, report, report.p);
  if (report.p_adjusted.size() > 0) {
    os << '\n';
    os << "# bonferroni (k=" << report.groups.size() << ")\n";
    render_block(os, report, report.p_adjusted);
  }
  return os.str();
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::isnan(m(r, c))) {
        row.push_back(nullptr);
      } else {
        row.push_back(m(r, c));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = n_rows > 0 ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
  Eigen::MatrixXd m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      const auto& v = rows.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
      m(r, c) = v.is_null() ? nan_value : v.get<double>();
    }
  }
  return m;
}

}  // namespace

nlohmann::json report_to_json(const CheckReport& report) {
  nlohmann::json j;
  j["tool"] = "hiercheck";
  j["format_version"] = 1;
  j["method"] = report.method;
  j["groups"] = report.groups;
  j["has_population"] = report.has_population;
  nlohmann::json kinds = nlohmann::json::array();
  for (Discrepancy k : report.kinds) kinds.push_back(kind_name(k));
  j["discrepancies"] = kinds;
  j["p"] = matrix_to_json(report.p);
  j["p_adjusted"] =
      report.p_adjusted.size() > 0 ? matrix_to_json(report.p_adjusted) : nlohmann::json();
  j["model"] = {{"level1", level_kind_name(report.model.level1)},
                {"nu1", report.model.nu1},
                {"level2", level_kind_name(report.model.level2)},
                {"nu2", report.model.nu2}};
  j["sampler"] = {{"draws", report.config.sampler.m_draws},
                  {"burn_in", report.config.sampler.burn_in},
                  {"thin", report.config.sampler.thin},
                  {"seed", report.config.sampler.seed}};
  j["theta_mode"] = report.config.theta_mode == ThetaMode::Literal ? "literal" : "posterior";
  j["adjust"] = report.config.adjust == Adjust::Bonferroni ? "bonferroni" : "none";
  nlohmann::json loo = nlohmann::json::array();
  for (const auto& d : report.loo) {
    loo.push_back({{"group", d.group}, {"ess", d.ess}, {"fallback", d.fallback}});
  }
  j["loo"] = loo;
  j["warnings"] = report.warnings;
  return j;
}

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport report;
  report.method = j.at("method").get<std::string>();
  report.groups = j.at("groups").get<std::vector<std::string>>();
  report.has_population = j.at("has_population").get<bool>();
  for (const auto& name : j.at("discrepancies")) {
    report.kinds.push_back(kind_from_name(name.get<std::string>()));
  }
  report.p = matrix_from_json(j.at("p"));
  if (!j.at("p_adjusted").is_null()) report.p_adjusted = matrix_from_json(j.at("p_adjusted"));
  const auto& model = j.at("model");
  report.model.level1 =
      model.at("level1").get<std::string>() == "t" ? LevelKind::StudentT : LevelKind::Normal;
  report.model.nu1 = model.at("nu1").get<double>();
  report.model.level2 =
      model.at("level2").get<std::string>() == "t" ? LevelKind::StudentT : LevelKind::Normal;
  report.model.nu2 = model.at("nu2").get<double>();
  const auto& sampler = j.at("sampler");
  report.config.sampler.m_draws = sampler.at("draws").get<int>();
  report.config.sampler.burn_in = sampler.at("burn_in").get<int>();
  report.config.sampler.thin = sampler.at("thin").get<int>();
  report.config.sampler.seed = sampler.at("seed").get<std::uint64_t>();
  report.config.theta_mode = j.at("theta_mode").get<std::string>() == "literal"
                                 ? ThetaMode::Literal
                                 : ThetaMode::PosteriorRealized;
  report.config.adjust = j.at("adjust").get<std::string>() == "bonferroni"
                             ? Adjust::Bonferroni
                             : Adjust::None;
  report.config.kinds = report.kinds;
  for (const auto& d : j.at("loo")) {
    report.loo.push_back({d.at("group").get<std::string>(), d.at("ess").get<double>(),
                          d.at("fallback").get<bool>()});
  }
  report.warnings = j.at("warnings").get<std::vector<std::string>>();
  return report;
}

std::string render_pvalue_matrix(const PValueSample& sample) {
  std::ostringstream os;
  os << "replicate\tstatus";
  for (const auto& target : sample.targets) {
    for (Discrepancy k : sample.kinds) os << '\t' << target << ':' << kind_name(k);
  }
  os << '\n';
  for (int r = 0; r < sample.n_replicates(); ++r) {
    const bool failed = !sample.failures[static_cast<std::size_t>(r)].empty();
    os << (r + 1) << '\t' << (failed ? "failed" : "ok");
    const auto& m = sample.p[static_cast<std::size_t>(r)];
    for (int t = 0; t < static_cast<int>(sample.targets.size()); ++t) {
      for (int kk = 0; kk < static_cast<int>(sample.kinds.size()); ++kk) {
        const double v = m(kk, t);
        os << '\t' << (std::isnan(v) ? "NA" : compact(v));
      }
    }
    os << '\n';
  }
  return os.str();
}

namespace {

struct CellSummary {
  std::string target;
  Discrepancy kind = Discrepancy::OverallX2;
  bool valid = false;
  UniformityStats stats;
  double power = nan_value;
  double power_adjusted = nan_value;
};

std::vector<CellSummary> summarize_cells(const PValueSample& sample, double alpha) {
  std::vector<CellSummary> cells;
  for (const auto& target : sample.targets) {
    const bool population = target == "population";
    for (Discrepancy k : sample.kinds) {
      CellSummary cell;
      cell.target = target;
      cell.kind = k;
      const bool applicable = population ? population_capable(k) : per_group_capable(k);
      if (applicable) {
        try {
          cell.stats = uniformity_stats(sample, target, k);
          cell.power = power_estimate(sample, target, k, alpha);
          cell.power_adjusted =
              power_estimate(sample, target, k, alpha, sample.scenario.n_groups);
          cell.valid = true;
        } catch (const std::exception&) {
          cell.valid = false;  // too few successful replicates
        }
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace

std::string render_calibration_summary(const PValueSample& sample, double alpha) {
  int failed = 0;
  for (const auto& f : sample.failures) {
    if (!f.empty()) ++failed;
  }
  std::ostringstream os;
  os << "# hiercheck calibration summary\n";
  os << "# method: " << sample.method << '\n';
  os << "# replicates: " << sample.n_replicates() << " (failed: " << failed << ")\n";
  os << "# scenario: groups=" << sample.scenario.n_groups
     << " perturbation=" << perturbation_name(sample.scenario.perturbation)
     << " seed=" << sample.scenario.seed << '\n';
  os << "# alpha: " << compact(alpha) << '\n';
  os << "target\tdiscrepancy\tcount\tks\tmean\tvariance\tpower\tpower_bonferroni\n";
  for (const auto& cell : summarize_cells(sample, alpha)) {
    os << cell.target << '\t' << kind_name(cell.kind);
    if (!cell.valid) {
      os << "\tNA\tNA\tNA\tNA\tNA\tNA\n";
      continue;
    }
    os << '\t' << cell.stats.count << '\t' << fixed3(cell.stats.ks_distance) << '\t'
       << fixed3(cell.stats.mean) << '\t' << fixed3(cell.stats.variance) << '\t'
       << fixed3(cell.power) << '\t' << fixed3(cell.power_adjusted) << '\n';
  }
  return os.str();
}

nlohmann::json calibration_summary_json(const PValueSample& sample, double alpha) {
  nlohmann::json j;
  j["tool"] = "hiercheck";
  j["format_version"] = 1;
  j["method"] = sample.method;
  j["replicates"] = sample.n_replicates();
  j["alpha"] = alpha;
  j["scenario"] = {{"groups", sample.scenario.n_groups},
                   {"mu0", sample.scenario.mu0},
                   {"tau2", sample.scenario.tau20},
                   {"sigma2", sample.scenario.sigma20},
                   {"perturbation", perturbation_name(sample.scenario.perturbation)},
                   {"perturb_group", sample.scenario.perturb_group + 1},
                   {"delta", sample.scenario.shift_delta},
                   {"factor", sample.scenario.inflate_factor},
                   {"nu", sample.scenario.heavy_nu},
                   {"seed", sample.scenario.seed}};
  nlohmann::json failures = nlohmann::json::array();
  for (int r = 0; r < sample.n_replicates(); ++r) {
    if (!sample.failures[static_cast<std::size_t>(r)].empty()) {
      failures.push_back(
          {{"replicate", r + 1}, {"error", sample.failures[static_cast<std::size_t>(r)]}});
    }
  }
  j["failures"] = failures;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : summarize_cells(sample, alpha)) {
    nlohmann::json c;
    c["target"] = cell.target;
    c["discrepancy"] = kind_name(cell.kind);
    if (cell.valid) {
      c["count"] = cell.stats.count;
      c["ks"] = cell.stats.ks_distance;
      c["mean"] = cell.stats.mean;
      c["variance"] = cell.stats.variance;
      c["power"] = cell.power;
      c["power_bonferroni"] = cell.power_adjusted;
    } else {
      c["count"] = nullptr;
    }
    cells.push_back(std::move(c));
  }
  j["cells"] = cells;
  return j;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path parent = target.parent_path().empty() ? "." : target.parent_path();
  const fs::path temp = parent / (target.filename().string() + ".tmp");
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write output file: " + temp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + temp.string());
  }
  fs::rename(temp, target);
}

}  // namespace hiercheck
