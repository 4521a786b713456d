#include "hiercheck/data.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hiercheck/errors.hpp"

namespace hiercheck {

Eigen::Index Dataset::n_total() const {
  Eigen::Index n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

std::vector<int> Dataset::all_indices() const {
  std::vector<int> idx(groups.size());
  for (int i = 0; i < n_groups(); ++i) idx[static_cast<std::size_t>(i)] = i;
  return idx;
}

Eigen::VectorXd Dataset::group_means() const {
  Eigen::VectorXd m(n_groups());
  for (int i = 0; i < n_groups(); ++i) m[i] = groups[static_cast<std::size_t>(i)].mean();
  return m;
}

Dataset Dataset::without_group(int i) const {
  Dataset out;
  for (int k = 0; k < n_groups(); ++k) {
    if (k != i) out.groups.push_back(groups[static_cast<std::size_t>(k)]);
  }
  return out;
}

int Dataset::index_of(const std::string& group_id) const {
  for (int i = 0; i < n_groups(); ++i) {
    if (groups[static_cast<std::size_t>(i)].group_id == group_id) return i;
  }
  return -1;
}

Dataset validate_dataset(const std::vector<std::pair<std::string, double>>& raw) {
  if (raw.empty()) throw data_error("dataset: no observations");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<double>> by_id;
  for (const auto& [id, value] : raw) {
    if (!std::isfinite(value)) {
      throw data_error("dataset: non-finite value in group '" + id + "'");
    }
    auto [it, inserted] = by_id.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.push_back(value);
  }

  Dataset out;
  out.groups.reserve(order.size());
  for (const auto& id : order) {
    const auto& vals = by_id[id];
    GroupData g;
    g.group_id = id;
    g.values = Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                                 static_cast<Eigen::Index>(vals.size()));
    out.groups.push_back(std::move(g));
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parses_as_number(const std::string& s) {
  std::istringstream in(s);
  double v;
  char leftover;
  return static_cast<bool>(in >> v) && !(in >> leftover);
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open data file: " + path);

  std::vector<std::pair<std::string, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const auto comma = stripped.find(',');
    if (comma == std::string::npos) {
      throw data_error(path + ":" + std::to_string(lineno) + ": expected 'group,value'");
    }
    const std::string group = trim(stripped.substr(0, comma));
    const std::string value = trim(stripped.substr(comma + 1));

    if (!header_seen) {
      header_seen = true;
      if (parses_as_number(value)) {
        throw data_error(path + ": header row required ('group,value')");
      }
      continue;
    }
    if (group.empty()) {
      throw data_error(path + ":" + std::to_string(lineno) + ": empty group id");
    }
    if (!parses_as_number(value)) {
      throw data_error(path + ":" + std::to_string(lineno) + ": bad value '" + value + "'");
    }
    rows.emplace_back(group, std::stod(value));
  }
  if (rows.empty()) throw data_error(path + ": no observations after header");
  return validate_dataset(rows);
}

}  // namespace hiercheck
