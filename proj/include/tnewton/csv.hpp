#pragma once

#include "tnewton/convexify.hpp"
#include "tnewton/newton.hpp"
#include "tnewton/scans.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

namespace tnewton::csv {

/// 17 significant digits, "inf" / "-inf" / "nan" for non-finite values.
std::string fmt(double v);

/// Strips separators and newlines from free-text fields.
std::string sanitize(const std::string& s);

/// k,x_0..x_{d-1},f,grad_norm,alpha,scaling,dual_sq,termination
void write_trace(std::ostream& os, const IterateTrace& trace);

enum class ScanKind { SignFlip, Convergence };

/// ix,iy,x,y,scaling_sign|converged,iterations,final_value,error
void write_scan(std::ostream& os, const scan::GridScan& scan, ScanKind kind);

/// alpha,converged,iterations,final_grad_norm,termination
void write_sweep(std::ostream& os, const scan::SweepResult& sweep);

/// x,f,r,min_eig_before,min_eig_after,c
void write_convexify_report(std::ostream& os, const std::vector<convexify::ReportRow>& rows, double c);

/// Opens `path` for writing (creating parent directories). Throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace tnewton::csv
