#include "tnewton/csv.hpp"

#include "tnewton/errors.hpp"

#include <cmath>
#include <cstdio>

namespace tnewton::csv {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  }
  return out;
}

void write_trace(std::ostream& os, const IterateTrace& trace) {
  const auto d = trace.records.empty() ? 0 : trace.records.front().x.size();
  os << "k";
  for (Eigen::Index i = 0; i < d; ++i) os << ",x_" << i;
  os << ",f,grad_norm,alpha,scaling,dual_sq,termination\n";
  const std::string term(to_string(trace.termination));
  for (const auto& r : trace.records) {
    os << r.k;
    for (Eigen::Index i = 0; i < d; ++i) os << ',' << fmt(r.x(i));
    os << ',' << fmt(r.f) << ',' << fmt(r.grad_norm) << ',' << fmt(r.alpha) << ','
       << (r.scaling ? fmt(*r.scaling) : "") << ',' << fmt(r.dual_sq) << ',' << term << '\n';
  }
}

void write_scan(std::ostream& os, const scan::GridScan& scan, ScanKind kind) {
  os << "ix,iy,x,y," << (kind == ScanKind::SignFlip ? "scaling_sign" : "converged")
     << ",iterations,final_value,error\n";
  for (const auto& c : scan.cells) {
    os << c.ix << ',' << c.iy << ',' << fmt(c.x) << ',' << fmt(c.y) << ',';
    if (c.ok()) {
      if (kind == ScanKind::SignFlip) {
        os << c.scaling_sign;
      } else {
        os << (c.converged ? 1 : 0);
      }
      os << ',' << c.iterations << ',' << fmt(c.final_value) << ",\n";
    } else {
      os << ",,," << sanitize(c.error) << '\n';
    }
  }
}

void write_sweep(std::ostream& os, const scan::SweepResult& sweep) {
  os << "alpha,converged,iterations,final_grad_norm,termination\n";
  for (const auto& r : sweep.rows) {
    os << fmt(r.alpha) << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ','
       << fmt(r.final_grad_norm) << ',' << to_string(r.termination) << '\n';
  }
}

void write_convexify_report(std::ostream& os, const std::vector<convexify::ReportRow>& rows, double c) {
  const auto d = rows.empty() ? 0 : rows.front().x.size();
  for (Eigen::Index i = 0; i < d; ++i) os << "x_" << i << ',';
  os << "f,r,min_eig_before,min_eig_after,c\n";
  for (const auto& r : rows) {
    for (Eigen::Index i = 0; i < d; ++i) os << fmt(r.x(i)) << ',';
    os << fmt(r.f) << ',' << fmt(r.r) << ',' << fmt(r.min_eig_before) << ',' << fmt(r.min_eig_after)
       << ',' << fmt(c) << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace tnewton::csv
