#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace s2lab {

/// Outcome of one named check, serialized verbatim into the JSON report.
struct VerificationReport {
  std::string check_name;
  std::string space_description;
  double max_absolute_residual = 0.0;
  double relative_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
  std::string anchor;  // the identity or quantity the check pins down
};

/// Gate on the absolute residual.
VerificationReport make_report_abs(std::string check, std::string space, double abs_resid,
                                   double rel_resid, double tol, double runtime_ms,
                                   std::string anchor);

/// Gate on the relative residual.
VerificationReport make_report_rel(std::string check, std::string space, double abs_resid,
                                   double rel_resid, double tol, double runtime_ms,
                                   std::string anchor);

/// JSON array with snake_case fields and floats printed to 17 significant
/// digits, so byte-identical inputs give byte-identical reports.
std::string reports_to_json(const std::vector<VerificationReport>& reports);

void write_text_file(const std::string& path, const std::string& content);

/// Columnar series for the plot emitter (singular spectra, Richardson
/// convergence, residual slices).
struct Series {
  std::string name;                  // file stem
  std::vector<std::string> columns;  // header names
  std::vector<std::vector<double>> rows;
};

std::string series_to_csv(const Series& s);

/// Writes <name>.csv plus a <name>.gp gnuplot script referencing it; never
/// invokes a plotter. Throws `empty-series` when there is nothing to plot.
void emit_plots(const std::vector<Series>& series, const std::string& out_dir);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace s2lab
