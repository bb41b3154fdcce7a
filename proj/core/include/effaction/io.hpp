#pragma once

#include <ostream>
#include <string>

#include "effaction/dynamics.hpp"
#include "effaction/variational.hpp"

namespace effaction {

/// Numeric formatting shared by every data file: 17 significant digits,
/// so doubles survive a parse-and-reprint round trip byte-for-byte.
std::string format_number(double v);

/// `x,omega,Omega,a2,V,W,m_eff,valid` with one row per grid point in
/// ascending x; cells of flagged points are left empty.
void write_table_csv(const EffectiveTable& table, std::ostream& out);

/// `t,x,v,E,r`, one row per accepted integrator step.
void write_trajectory_csv(const TrajectoryRecord& record, std::ostream& out);

/// Header plus one row for a solved point:
/// `x,Omega,a2,W,iterations,residual,converged,method`.
void write_point_csv(const SelfConsistentPoint& point, std::ostream& out);

/// Writes through a temporary file in the same directory and renames, so a
/// crash never leaves a truncated data file behind.
void atomic_write_file(const std::string& path, const std::string& contents);

}  // namespace effaction
