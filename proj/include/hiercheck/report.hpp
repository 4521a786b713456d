#ifndef HIERCHECK_REPORT_HPP
#define HIERCHECK_REPORT_HPP

#include <string>

#include <json.hpp>

#include "hiercheck/calibration.hpp"
#include "hiercheck/checks.hpp"

namespace hiercheck {

// Tab-separated table: rows are discrepancy kinds, columns the groups and
// (for the regular check) the population. Values rounded to 3 decimals;
// inapplicable cells print "-". A Bonferroni block follows when adjustment
// was requested.
std::string render_table(const CheckReport& report);

// Full-precision machine-readable document with model/sampler metadata.
nlohmann::json report_to_json(const CheckReport& report);
CheckReport report_from_json(const nlohmann::json& j);

// Calibration outputs: raw p-value matrix (full precision, one row per
// replicate) and a per-cell summary (KS distance, mean, variance, power with
// and without Bonferroni).
std::string render_pvalue_matrix(const PValueSample& sample);
std::string render_calibration_summary(const PValueSample& sample, double alpha);
nlohmann::json calibration_summary_json(const PValueSample& sample, double alpha);

// Writes via a temporary file in the same directory plus rename, so a failed
// run never leaves a partial file behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hiercheck

#endif
