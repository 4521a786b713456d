#ifndef HIERCHECK_DATA_HPP
#define HIERCHECK_DATA_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

namespace hiercheck {

struct GroupData {
  std::string group_id;
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
  double mean() const { return values.mean(); }
  // Sum of squared deviations from the group mean.
  double ss_within() const { return (values.array() - mean()).square().sum(); }
};

// Grouped observations. Group order is first-appearance order and is the
// canonical index used in every report and chain.
struct Dataset {
  std::vector<GroupData> groups;

  int n_groups() const { return static_cast<int>(groups.size()); }
  Eigen::Index n_total() const;
  std::vector<int> all_indices() const;
  Eigen::VectorXd group_means() const;
  // New dataset with group i removed; remaining order preserved.
  Dataset without_group(int i) const;
  int index_of(const std::string& group_id) const;  // -1 if absent
};

// Groups raw (group_id, value) rows by first appearance. Rejects empty input
// and non-finite values; repeated ids accumulate observations.
Dataset validate_dataset(const std::vector<std::pair<std::string, double>>& raw);

// Reads `group,value` delimited text with a mandatory header row.
Dataset read_dataset_csv(const std::string& path);

}  // namespace hiercheck

#endif
