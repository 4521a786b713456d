#include "hiercheck/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hiercheck/errors.hpp"

namespace hiercheck {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

// Tracks key consumption so typos and leftovers are reported, not ignored.
class ConfigReader {
public:
  explicit ConfigReader(const IniDoc& doc) : doc_(doc) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) {
    used_[section].insert(key);
    const auto sec = doc_.sections.find(section);
    if (sec == doc_.sections.end()) return std::nullopt;
    const auto val = sec->second.find(key);
    if (val == sec->second.end()) return std::nullopt;
    return val->second;
  }

  std::string require(const std::string& section, const std::string& key) {
    auto v = get(section, key);
    if (!v) throw config_error("config: missing [" + section + "] " + key);
    return *v;
  }

  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& def) {
    return get(section, key).value_or(def);
  }

  double get_double(const std::string& section, const std::string& key, double def) {
    const auto v = get(section, key);
    return v ? parse_double(section, key, *v) : def;
  }

  long long get_int(const std::string& section, const std::string& key, long long def) {
    const auto v = get(section, key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      const long long n = std::stoll(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return n;
    } catch (...) {
      throw config_error("config: [" + section + "] " + key + " must be an integer, got '" +
                         *v + "'");
    }
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t def) {
    const auto v = get(section, key);
    if (!v) return def;
    try {
      std::size_t pos = 0;
      const unsigned long long n = std::stoull(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return n;
    } catch (...) {
      throw config_error("config: [" + section + "] " + key + " must be a non-negative "
                         "integer, got '" + *v + "'");
    }
  }

  double parse_double(const std::string& section, const std::string& key,
                      const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      throw config_error("config: [" + section + "] " + key + " must be a number, got '" +
                         v + "'");
    }
  }

  // Rejects any section or key never consumed by the schema.
  void finish() const {
    for (const auto& [section, keys] : doc_.sections) {
      const auto used = used_.find(section);
      if (used == used_.end()) {
        throw config_error("config: unknown section [" + section + "]");
      }
      for (const auto& [key, value] : keys) {
        if (used->second.count(key) == 0) {
          throw config_error("config: unknown key '" + key + "' in [" + section + "]");
        }
      }
    }
  }

private:
  const IniDoc& doc_;
  std::map<std::string, std::set<std::string>> used_;
};

ModelSpec read_model(ConfigReader& r) {
  ModelSpec spec;
  const std::string l1 = r.get_or("model", "level1", "normal");
  const std::string l2 = r.get_or("model", "level2", "normal");
  if (l1 != "normal" && l1 != "t") throw config_error("config: [model] level1 must be 'normal' or 't'");
  if (l2 != "normal" && l2 != "t") throw config_error("config: [model] level2 must be 'normal' or 't'");
  spec.level1 = l1 == "t" ? LevelKind::StudentT : LevelKind::Normal;
  spec.level2 = l2 == "t" ? LevelKind::StudentT : LevelKind::Normal;
  spec.nu1 = r.get_double("model", "nu1", 3.0);
  spec.nu2 = r.get_double("model", "nu2", 2.2);
  spec.validate();
  return spec;
}

SamplerConfig read_sampler(ConfigReader& r) {
  SamplerConfig cfg;
  cfg.m_draws = static_cast<int>(r.get_int("sampler", "draws", cfg.m_draws));
  cfg.burn_in = static_cast<int>(r.get_int("sampler", "burn_in", cfg.burn_in));
  cfg.thin = static_cast<int>(r.get_int("sampler", "thin", cfg.thin));
  cfg.seed = r.get_u64("sampler", "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

std::string read_method(ConfigReader& r) {
  const std::string method = r.require("check", "method");
  if (method != "ppc" && method != "cv" && method != "cv-fast") {
    throw config_error("config: [check] method must be ppc, cv or cv-fast");
  }
  return method;
}

std::vector<Discrepancy> read_kinds(ConfigReader& r, const std::string& method) {
  const std::string raw = r.get_or("check", "discrepancies", "all");
  std::vector<Discrepancy> kinds;
  if (trim(raw) == "all") {
    for (Discrepancy k : all_discrepancies()) {
      if (method != "ppc" && !per_group_capable(k)) continue;
      kinds.push_back(k);
    }
    return kinds;
  }
  for (const std::string& name : split_list(raw)) kinds.push_back(kind_from_name(name));
  if (kinds.empty()) throw config_error("config: [check] discrepancies resolves to none");
  return kinds;
}

ThetaMode read_theta_mode(ConfigReader& r) {
  const std::string mode = r.get_or("check", "theta_mode", "posterior");
  if (mode == "posterior") return ThetaMode::PosteriorRealized;
  if (mode == "literal") return ThetaMode::Literal;
  throw config_error("config: [check] theta_mode must be 'posterior' or 'literal'");
}

Adjust read_adjust(ConfigReader& r) {
  const std::string adjust = r.get_or("check", "adjust", "none");
  if (adjust == "none") return Adjust::None;
  if (adjust == "bonferroni") return Adjust::Bonferroni;
  throw config_error("config: [check] adjust must be 'none' or 'bonferroni'");
}

LooConfig read_loo(ConfigReader& r) {
  LooConfig loo;
  loo.ess_fraction = r.get_double("loo", "ess_fraction", loo.ess_fraction);
  loo.t_marginal_points =
      static_cast<int>(r.get_int("loo", "t_marginal_points", loo.t_marginal_points));
  if (!(loo.ess_fraction >= 0.0)) throw config_error("config: [loo] ess_fraction must be >= 0");
  if (loo.t_marginal_points < 1) throw config_error("config: [loo] t_marginal_points must be >= 1");
  return loo;
}

OutputSpec read_output(ConfigReader& r) {
  OutputSpec out;
  out.path = r.require("output", "path");
  out.format = r.get_or("output", "format", "table");
  if (out.format != "table" && out.format != "structured") {
    throw config_error("config: [output] format must be 'table' or 'structured'");
  }
  return out;
}

int read_threads(ConfigReader& r) {
  const long long t = r.get_int("run", "threads", 0);
  if (t < 0) throw config_error("config: [run] threads must be >= 0");
  return static_cast<int>(t);
}

}  // namespace

IniDoc parse_ini_text(const std::string& text, const std::string& origin) {
  IniDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw config_error(origin + ":" + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty()) {
        throw config_error(origin + ":" + std::to_string(lineno) + ": empty section name");
      }
      doc.sections[section];  // a section may be present but empty
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    if (section.empty()) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": key outside any section");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    auto [it, inserted] = doc.sections[section].try_emplace(key, value);
    if (!inserted) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                         "' in [" + section + "]");
    }
  }
  return doc;
}

IniDoc parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_ini_text(buffer.str(), path);
}

RunConfig parse_check_config(const IniDoc& doc) {
  ConfigReader r(doc);
  RunConfig cfg;
  cfg.data_path = r.require("data", "path");
  cfg.model = read_model(r);
  cfg.method = read_method(r);
  cfg.check.kinds = read_kinds(r, cfg.method);
  cfg.check.theta_mode = read_theta_mode(r);
  cfg.check.adjust = read_adjust(r);
  cfg.check.sampler = read_sampler(r);
  cfg.check.threads = read_threads(r);
  cfg.loo = read_loo(r);
  cfg.output = read_output(r);
  r.finish();
  validate_check_config(cfg.check, cfg.method);
  return cfg;
}

CalibrationRunConfig parse_calibration_config(const IniDoc& doc) {
  ConfigReader r(doc);
  CalibrationRunConfig cfg;

  cfg.scenario.n_groups = static_cast<int>(r.get_int("scenario", "groups", 5));
  const std::string sizes = r.get_or("scenario", "sizes", "8");
  cfg.scenario.group_sizes.clear();
  for (const std::string& s : split_list(sizes)) {
    try {
      cfg.scenario.group_sizes.push_back(std::stoi(s));
    } catch (...) {
      throw config_error("config: [scenario] sizes must be integers");
    }
  }
  cfg.scenario.mu0 = r.get_double("scenario", "mu0", 0.0);
  cfg.scenario.tau20 = r.get_double("scenario", "tau2", 1.0);
  cfg.scenario.sigma20 = r.get_double("scenario", "sigma2", 1.0);
  cfg.scenario.perturbation =
      perturbation_from_name(r.get_or("scenario", "perturbation", "none"));
  // 1-based in the config, matching the group labels g1..gI.
  cfg.scenario.perturb_group = static_cast<int>(r.get_int("scenario", "perturb_group", 1)) - 1;
  cfg.scenario.shift_delta = r.get_double("scenario", "delta", 0.0);
  cfg.scenario.inflate_factor = r.get_double("scenario", "factor", 1.0);
  cfg.scenario.heavy_nu = r.get_double("scenario", "nu", 3.0);
  cfg.scenario.seed = r.get_u64("scenario", "seed", 1);
  cfg.scenario.validate();

  cfg.replicates = static_cast<int>(r.get_int("calibration", "replicates", 1));
  cfg.alpha = r.get_double("calibration", "alpha", 0.05);
  if (cfg.replicates < 1) throw config_error("config: [calibration] replicates must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw config_error("config: [calibration] alpha must lie in (0,1)");
  }

  cfg.model = read_model(r);
  cfg.method = read_method(r);
  cfg.check.kinds = read_kinds(r, cfg.method);
  cfg.check.theta_mode = read_theta_mode(r);
  cfg.check.adjust = read_adjust(r);
  cfg.check.sampler = read_sampler(r);
  cfg.check.threads = read_threads(r);
  cfg.loo = read_loo(r);
  cfg.output = read_output(r);
  r.finish();
  validate_check_config(cfg.check, cfg.method);
  return cfg;
}

}  // namespace hiercheck
