#include "hiercheck/runner.hpp"

#include <ostream>

#include "hiercheck/config.hpp"
#include "hiercheck/data.hpp"
#include "hiercheck/errors.hpp"
#include "hiercheck/report.hpp"

namespace hiercheck {

namespace {

CheckReport dispatch_check(const RunConfig& cfg, const Dataset& data) {
  if (cfg.method == "ppc") return ppc_report(data, cfg.model, cfg.check);
  if (cfg.method == "cv") return cv_ppc_report(data, cfg.model, cfg.check);
  return cv_ppc_fast(data, cfg.model, cfg.check, cfg.loo);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const data_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_data;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_runtime;
  }
}

}  // namespace

int run_check(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = parse_check_config(parse_ini_file(config_path));
    const Dataset data = read_dataset_csv(cfg.data_path);
    const CheckReport report = dispatch_check(cfg, data);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    const std::string content = cfg.output.format == "structured"
                                    ? report_to_json(report).dump(2) + "\n"
                                    : render_table(report);
    write_file_atomic(cfg.output.path, content);
    out << "report written to " << cfg.output.path << '\n';
    return exit_ok;
  });
}

int run_calibration(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const CalibrationRunConfig cfg = parse_calibration_config(parse_ini_file(config_path));
    const PValueSample sample =
        calibration_run(cfg.scenario, cfg.replicates, cfg.method, cfg.model, cfg.check, cfg.loo);

    int failed = 0;
    for (const auto& f : sample.failures) {
      if (!f.empty()) ++failed;
    }
    if (failed == sample.n_replicates()) {
      err << "error: every replicate failed; first failure: " << sample.failures.front()
          << '\n';
      return exit_runtime;
    }

    const std::string matrix_path = cfg.output.path + ".pvalues.tsv";
    write_file_atomic(matrix_path, render_pvalue_matrix(sample));
    const bool structured = cfg.output.format == "structured";
    const std::string summary_path =
        cfg.output.path + (structured ? ".summary.json" : ".summary.tsv");
    write_file_atomic(summary_path,
                      structured ? calibration_summary_json(sample, cfg.alpha).dump(2) + "\n"
                                 : render_calibration_summary(sample, cfg.alpha));
    if (failed > 0) {
      err << "warning: " << failed << " of " << sample.n_replicates()
          << " replicates failed\n";
    }
    out << "p-value matrix written to " << matrix_path << '\n';
    out << "summary written to " << summary_path << '\n';
    return exit_ok;
  });
}

int run_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const IniDoc doc = parse_ini_file(config_path);
    if (doc.has("scenario")) {
      parse_calibration_config(doc);
      out << "calibration config OK\n";
      return exit_ok;
    }
    const RunConfig cfg = parse_check_config(doc);
    const Dataset data = read_dataset_csv(cfg.data_path);
    if ((cfg.method == "cv" || cfg.method == "cv-fast") && data.n_groups() < 4) {
      throw data_error("cross-validated checks require at least 4 groups under default priors");
    }
    if (cfg.method == "ppc" && data.n_groups() < 3) {
      throw data_error("fit requires at least 3 groups: the flat prior on tau leaves the "
                       "posterior improper with fewer");
    }
    out << "check config OK (" << data.n_groups() << " groups, " << data.n_total()
        << " observations)\n";
    return exit_ok;
  });
}

}  // namespace hiercheck
