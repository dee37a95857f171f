#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ringstab/analytics.hpp"
#include "ringstab/mcn.hpp"
#include "ringstab/params.hpp"

namespace ringstab {

/// A trajectory viewed through fluid scaling: mass and time divided by the
/// initial customer count. sq[g] and st[g] are full class vectors sampled at
/// scaled time times[g], linearly interpolated between integer steps of the
/// underlying path.
struct ScaledTrajectory {
  int L = 0;
  double norm_x = 0.0;  // L1 size of the initial state
  double grid_step = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> sq;
  std::vector<std::vector<double>> st;
};

/// Samples traj on a uniform scaled-time grid. The grid covers
/// [0, max_scaled_time] when given, otherwise the whole recorded horizon.
/// Requires grid_step > 0 and horizon >= norm_x * max_scaled_time.
ScaledTrajectory scale_trajectory(const McnTrajectory& traj, double grid_step,
                                  std::optional<double> max_scaled_time = std::nullopt);

/// Residual work per station: r[g][i] at scaled time times[g] is the scaled
/// work the network still owes station i, SQ_i0 + sum_j b(i,j) SQ_j0.
/// The same functional is recomputed through the dense route, the traffic
/// inverse applied to the class vector carrying the entry-queue components,
/// and the two must agree within 1e-9 (max_route_gap records the worst gap;
/// disagreement throws std::logic_error). Throws std::domain_error when a
/// flagged infinite visit column meets nonzero queue mass.
struct ResidualWork {
  std::vector<double> times;
  std::vector<std::vector<double>> r;
  double max_route_gap = 0.0;
};

ResidualWork residual_work(const ScaledTrajectory& scaled, const VisitMatrix& vm,
                           const ParameterSetting& ps);

/// First grid time at which the total scaled queue mass is <= epsilon.
std::optional<double> drain_time(const ScaledTrajectory& scaled, double epsilon);

/// Sweep of the circular drainage property: whenever entry queue i is empty
/// (scaled mass <= tol), the residual work upstream must dominate,
/// r[i-1] >= r[i] - tol (station i-1 read cyclically). Returns every
/// violating (station, time) pair with the size of the gap.
struct CircularityViolation {
  int station = 0;
  double time = 0.0;
  double gap = 0.0;
};

std::vector<CircularityViolation> circularity_check(const ScaledTrajectory& scaled,
                                                    const ResidualWork& residual, double tol);

}  // namespace ringstab
