#include "s2lab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace s2lab {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

VerificationReport make_report_abs(std::string check, std::string space, double abs_resid,
                                   double rel_resid, double tol, double runtime_ms,
                                   std::string anchor) {
  VerificationReport r;
  r.check_name = std::move(check);
  r.space_description = std::move(space);
  r.max_absolute_residual = abs_resid;
  r.relative_residual = rel_resid;
  r.tolerance = tol;
  r.pass = abs_resid <= tol;
  r.runtime_ms = runtime_ms;
  r.anchor = std::move(anchor);
  return r;
}

VerificationReport make_report_rel(std::string check, std::string space, double abs_resid,
                                   double rel_resid, double tol, double runtime_ms,
                                   std::string anchor) {
  VerificationReport r = make_report_abs(std::move(check), std::move(space), abs_resid,
                                         rel_resid, tol, runtime_ms, std::move(anchor));
  r.pass = rel_resid <= tol;
  return r;
}

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "[\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << "  {\n";
    out << "    \"check_name\": \"" << escape(r.check_name) << "\",\n";
    out << "    \"space_description\": \"" << escape(r.space_description) << "\",\n";
    out << "    \"max_absolute_residual\": " << fmt17(r.max_absolute_residual) << ",\n";
    out << "    \"relative_residual\": " << fmt17(r.relative_residual) << ",\n";
    out << "    \"tolerance\": " << fmt17(r.tolerance) << ",\n";
    out << "    \"pass\": " << (r.pass ? "true" : "false") << ",\n";
    out << "    \"runtime_ms\": " << fmt17(r.runtime_ms) << ",\n";
    out << "    \"anchor\": \"" << escape(r.anchor) << "\"\n";
    out << "  }" << (i + 1 < reports.size() ? "," : "") << "\n";
  }
  out << "]\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << content;
}

std::string series_to_csv(const Series& s) {
  std::ostringstream out;
  for (size_t c = 0; c < s.columns.size(); ++c)
    out << s.columns[c] << (c + 1 < s.columns.size() ? "," : "");
  out << "\n";
  for (const auto& row : s.rows) {
    for (size_t c = 0; c < row.size(); ++c) out << fmt17(row[c]) << (c + 1 < row.size() ? "," : "");
    out << "\n";
  }
  return out.str();
}

void emit_plots(const std::vector<Series>& series, const std::string& out_dir) {
  if (series.empty()) throw std::invalid_argument("empty-series: nothing to plot");
  for (const auto& s : series) {
    if (s.rows.empty()) throw std::invalid_argument("empty-series: " + s.name + " has no rows");
    const std::filesystem::path dir(out_dir);
    write_text_file((dir / (s.name + ".csv")).string(), series_to_csv(s));
    std::ostringstream gp;
    gp << "# gnuplot script for " << s.name << "\n";
    gp << "set datafile separator ','\n";
    gp << "set key autotitle columnhead\n";
    gp << "set logscale y\n";
    gp << "plot ";
    for (size_t c = 1; c < s.columns.size(); ++c)
      gp << "'" << s.name << ".csv' using 1:" << (c + 1) << " with linespoints"
         << (c + 1 < s.columns.size() ? ", " : "\n");
    if (s.columns.size() == 1) gp << "'" << s.name << ".csv' using 1 with linespoints\n";
    write_text_file((dir / (s.name + ".gp")).string(), gp.str());
  }
}

}  // namespace s2lab
