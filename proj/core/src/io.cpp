#include "effaction/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "effaction/errors.hpp"

namespace effaction {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void put_cell(std::ostream& out, double v) {
  if (std::isfinite(v)) out << format_number(v);
  // NaN cells (unsolvable columns) stay empty.
}

}  // namespace

void write_table_csv(const EffectiveTable& table, std::ostream& out) {
  out << "x,omega,Omega,a2,V,W,m_eff,valid\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    put_cell(out, table.x[i]);
    out << ',';
    put_cell(out, table.omega[i]);
    out << ',';
    put_cell(out, table.Omega[i]);
    out << ',';
    put_cell(out, table.a2[i]);
    out << ',';
    put_cell(out, table.V[i]);
    out << ',';
    put_cell(out, table.W[i]);
    out << ',';
    put_cell(out, table.m_eff[i]);
    out << ',' << (table.valid[i] ? '1' : '0') << '\n';
  }
}

void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out) {
  out << "t,x,v,E,r\n";
  for (const auto& s : record.samples) {
    out << format_number(s.t) << ',' << format_number(s.x) << ','
        << format_number(s.v) << ',' << format_number(s.E) << ',';
    if (std::isinf(s.r))
      out << "inf";
    else
      out << format_number(s.r);
    out << '\n';
  }
}

void write_point_csv(const SelfConsistentPoint& point, std::ostream& out) {
  out << "x,Omega,a2,W,iterations,residual,converged,method\n";
  out << format_number(point.x) << ',' << format_number(point.Omega) << ','
      << format_number(point.a2) << ',' << format_number(point.W) << ','
      << point.report.iterations << ',' << format_number(point.report.final_residual)
      << ',' << (point.report.converged ? '1' : '0') << ','
      << method_name(point.report.method) << '\n';
}

void atomic_write_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write output file: " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place: " + target.string() + ": " + ec.message());
  }
}

}  // namespace effaction
