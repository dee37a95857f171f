#include "ringstab/fluid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ringstab {

ScaledTrajectory scale_trajectory(const McnTrajectory& traj, double grid_step,
                                  std::optional<double> max_scaled_time) {
  if (grid_step <= 0.0) throw std::invalid_argument("scale_trajectory: grid_step must be > 0");
  if (traj.states.empty()) throw std::invalid_argument("scale_trajectory: empty trajectory");

  const int L = traj.L;
  const std::size_t n = class_count(L);

  double norm = 0.0;
  for (std::int64_t v : traj.states.front().q) norm += static_cast<double>(v);
  const double mass_scale = std::max(norm, 1.0);

  const double horizon = static_cast<double>(traj.horizon);
  double t_max;
  if (max_scaled_time) {
    t_max = *max_scaled_time;
    if (t_max < 0.0) throw std::invalid_argument("scale_trajectory: negative max_scaled_time");
    if (norm * t_max > horizon * (1.0 + 1e-12))
      throw std::invalid_argument(
          "scale_trajectory: horizon too short for the requested scaled window (need " +
          std::to_string(norm * t_max) + " steps, have " + std::to_string(traj.horizon) + ")");
  } else {
    t_max = norm > 0.0 ? horizon / norm : horizon;
  }

  ScaledTrajectory out;
  out.L = L;
  out.norm_x = norm;
  out.grid_step = grid_step;

  const auto points = static_cast<std::size_t>(std::floor(t_max / grid_step + 1e-9)) + 1;
  out.times.reserve(points);
  out.sq.reserve(points);
  out.st.reserve(points);

  for (std::size_t g = 0; g < points; ++g) {
    const double t = static_cast<double>(g) * grid_step;
    const double s = std::min(norm * t, horizon);
    const auto lo = static_cast<std::size_t>(std::floor(s));
    const double frac = s - static_cast<double>(lo);
    const std::size_t hi = frac > 0.0 ? lo + 1 : lo;

    std::vector<double> sq(n), st(n);
    for (std::size_t c = 0; c < n; ++c) {
      const double q_lo = static_cast<double>(traj.states[lo].q[c]);
      const double q_hi = static_cast<double>(traj.states[hi].q[c]);
      sq[c] = ((1.0 - frac) * q_lo + frac * q_hi) / mass_scale;
      const double t_lo = static_cast<double>(traj.services_cum[lo][c]);
      const double t_hi = static_cast<double>(traj.services_cum[hi][c]);
      st[c] = ((1.0 - frac) * t_lo + frac * t_hi) / mass_scale;
    }
    out.times.push_back(t);
    out.sq.push_back(std::move(sq));
    out.st.push_back(std::move(st));
  }
  return out;
}

ResidualWork residual_work(const ScaledTrajectory& scaled, const VisitMatrix& vm,
                           const ParameterSetting& ps) {
  const int L = scaled.L;
  if (ps.L != L || static_cast<int>(vm.b.rows()) != L)
    throw std::invalid_argument("residual_work: dimension mismatch");
  const std::size_t n = class_count(L);

  // Dense route, factored once: y solves (I - P^T) y = v, then station sums.
  const Matrix P = routing_matrix(ps);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -= P(c, r);
  // Zero-rate tags make I - P^T singular on their loop; they carry no mass
  // here (enforced below), so pin their coordinates to the identity.
  for (int i = 0; i < L; ++i) {
    for (int tag = 1; tag <= L; ++tag) {
      if (!ps.zero_rate(tag)) continue;
      const auto c = static_cast<Eigen::Index>(class_index(L, i, tag));
      for (std::size_t k = 0; k < n; ++k) {
        A(c, static_cast<Eigen::Index>(k)) = 0.0;
        A(static_cast<Eigen::Index>(k), c) = (static_cast<std::size_t>(c) == k) ? 1.0 : 0.0;
      }
      A(c, c) = 1.0;
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);

  ResidualWork out;
  out.times = scaled.times;
  out.r.reserve(scaled.times.size());

  for (std::size_t g = 0; g < scaled.times.size(); ++g) {
    // Closed form: entry queues weighted by expected future visits.
    std::vector<double> r1(static_cast<std::size_t>(L), 0.0);
    for (int i = 0; i < L; ++i) {
      double acc = scaled.sq[g][class_index(L, i, 0)];
      for (int type = 1; type <= L; ++type) {
        const double mass = scaled.sq[g][class_index(L, type - 1, 0)];
        if (vm.column_infinite(type)) {
          if (mass != 0.0)
            throw std::domain_error(
                "residual_work: entry queue of zero-rate type " + std::to_string(type) +
                " carries mass but its visit counts are infinite");
          continue;
        }
        acc += vm.b(static_cast<std::size_t>(i), static_cast<std::size_t>(type - 1)) * mass;
      }
      r1[static_cast<std::size_t>(i)] = acc;
    }

    // Dense route on the class vector holding the entry-queue components.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (int i = 0; i < L; ++i)
      v(static_cast<Eigen::Index>(class_index(L, i, 0))) = scaled.sq[g][class_index(L, i, 0)];
    const Eigen::VectorXd y = lu.solve(v);
    for (int i = 0; i < L; ++i) {
      double r2 = 0.0;
      for (int tag = 0; tag <= L; ++tag)
        r2 += y(static_cast<Eigen::Index>(class_index(L, i, tag)));
      const double gap = std::abs(r2 - r1[static_cast<std::size_t>(i)]);
      out.max_route_gap = std::max(out.max_route_gap, gap);
    }
    if (out.max_route_gap > 1e-9)
      throw std::logic_error("residual_work: closed-form and dense routes disagree by " +
                             std::to_string(out.max_route_gap));
    out.r.push_back(std::move(r1));
  }
  return out;
}

std::optional<double> drain_time(const ScaledTrajectory& scaled, double epsilon) {
  if (epsilon < 0.0) throw std::invalid_argument("drain_time: epsilon must be >= 0");
  for (std::size_t g = 0; g < scaled.times.size(); ++g) {
    double total = 0.0;
    for (double v : scaled.sq[g]) total += v;
    if (total <= epsilon) return scaled.times[g];
  }
  return std::nullopt;
}

std::vector<CircularityViolation> circularity_check(const ScaledTrajectory& scaled,
                                                    const ResidualWork& residual, double tol) {
  if (scaled.times.size() != residual.times.size())
    throw std::invalid_argument("circularity_check: residual grid does not match trajectory");
  const int L = scaled.L;
  std::vector<CircularityViolation> violations;
  for (std::size_t g = 0; g < scaled.times.size(); ++g) {
    for (int i = 0; i < L; ++i) {
      if (scaled.sq[g][class_index(L, i, 0)] > tol) continue;
      const int prev = (i + L - 1) % L;
      const double gap = residual.r[g][static_cast<std::size_t>(i)] -
                         residual.r[g][static_cast<std::size_t>(prev)];
      if (gap > tol)
        violations.push_back(CircularityViolation{i, scaled.times[g], gap});
    }
  }
  return violations;
}

}  // namespace ringstab
