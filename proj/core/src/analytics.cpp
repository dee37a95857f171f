#include "ringstab/analytics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ringstab {

double VisitMatrix::at(int cell, int type) const {
  if (column_infinite(type))
    throw std::domain_error("VisitMatrix: column of zero-rate type " + std::to_string(type) +
                            " is infinite");
  return b(static_cast<std::size_t>(cell), static_cast<std::size_t>(type - 1));
}

double VisitMatrix::max_entry() const {
  double best = 0.0;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    if (infinite_column[j]) continue;
    for (std::size_t i = 0; i < b.rows(); ++i) best = std::max(best, b(i, j));
  }
  return best;
}

DwellDistribution dwell_distribution(const ParameterSetting& ps, int type, int k_max) {
  if (type < 1 || type > ps.L)
    throw std::invalid_argument("dwell_distribution: type label " + std::to_string(type) +
                                " outside 1..L");
  if (k_max < 1) throw std::invalid_argument("dwell_distribution: k_max must be >= 1");
  if (ps.zero_rate(type))
    throw std::domain_error("dwell_distribution: type " + std::to_string(type) +
                            " is zero-rate, its dwell time is infinite");

  const int entry = type - 1;
  DwellDistribution d;
  d.pmf.resize(static_cast<std::size_t>(k_max));
  // After entering at cell `entry` the vehicle occupies cells entry+1,
  // entry+2, ... A dwell of k means it survives the first k-1 of those and
  // departs from the k-th.
  double survive = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    const int cell = (entry + k) % ps.L;
    const double h = ps.hazard(cell, type);
    d.pmf[static_cast<std::size_t>(k - 1)] = survive * h;
    survive *= 1.0 - h;
  }
  d.tail = survive;
  return d;
}

VisitMatrix visit_matrix(const ParameterSetting& ps) {
  const int L = ps.L;
  VisitMatrix vm;
  vm.b = Matrix(static_cast<std::size_t>(L), static_cast<std::size_t>(L));
  vm.infinite_column.assign(static_cast<std::size_t>(L), false);

  for (int type = 1; type <= L; ++type) {
    if (ps.zero_rate(type)) {
      vm.infinite_column[static_cast<std::size_t>(type - 1)] = true;
      continue;
    }
    const int entry = type - 1;
    double survive_lap = 1.0;
    for (int cell = 0; cell < L; ++cell) survive_lap *= 1.0 - ps.hazard(cell, type);
    const double denom = 1.0 - survive_lap;  // > 0 by the departure requirement

    for (int i = 0; i < L; ++i) {
      // Number of cells the vehicle must survive before first reaching cell
      // i: the cells strictly between its entry cell and i along the ring.
      const int steps_before = ((i - type) % L + L) % L;
      double reach = 1.0;
      for (int m = 1; m <= steps_before; ++m)
        reach *= 1.0 - ps.hazard((entry + m) % L, type);
      // Expected visits = P(reach at all) * geometric number of laps.
      vm.b(static_cast<std::size_t>(i), static_cast<std::size_t>(entry)) = reach / denom;
    }
  }
  return vm;
}

Matrix marginal_distribution(const ParameterSetting& ps) {
  const int L = ps.L;
  const VisitMatrix vm = visit_matrix(ps);
  Matrix pi(static_cast<std::size_t>(L), static_cast<std::size_t>(L + 1));
  for (int i = 0; i < L; ++i) {
    double occupied = 0.0;
    for (int type = 1; type <= L; ++type) {
      double entry_mass;
      if (vm.column_infinite(type)) {
        if (ps.p[type - 1] != 0.0)
          throw std::domain_error("marginal_distribution: type " + std::to_string(type) +
                                  " has infinite visit counts but positive arrival rate");
        entry_mass = 0.0;
      } else {
        entry_mass = vm.b(static_cast<std::size_t>(i), static_cast<std::size_t>(type - 1)) *
                     ps.p[static_cast<std::size_t>(type - 1)];
      }
      pi(static_cast<std::size_t>(i), static_cast<std::size_t>(type)) = entry_mass;
      occupied += entry_mass;
    }
    // Reported as computed even when negative (overloaded settings): the
    // sign carries the diagnosis.
    pi(static_cast<std::size_t>(i), 0) = 1.0 - occupied;
  }
  return pi;
}

Matrix routing_matrix(const ParameterSetting& ps) {
  const int L = ps.L;
  const std::size_t n = class_count(L);
  Matrix P(n, n);
  for (int i = 0; i < L; ++i) {
    const int next = (i + 1) % L;
    // An entry-queue customer at cell i enters the ring as a type-(i+1)
    // vehicle occupying the next cell.
    P(class_index(L, i, 0), class_index(L, next, i + 1)) = 1.0;
    for (int tag = 1; tag <= L; ++tag) {
      P(class_index(L, i, tag), class_index(L, next, tag)) = 1.0 - ps.hazard(i, tag);
    }
  }
  return P;
}

TrafficSolution traffic_solution(const ParameterSetting& ps) {
  const int L = ps.L;
  const std::size_t n = class_count(L);
  const Matrix P = routing_matrix(ps);

  // Classes whose tag is zero-rate sit on a routing loop with no exit, which
  // makes I - P^T singular. Their rates are identically 0 (the matching
  // p is 0 by validation), so solve on the complement and scatter back.
  std::vector<int> reduced_of_full(n, -1);
  std::vector<std::size_t> full_of_reduced;
  for (int i = 0; i < L; ++i) {
    for (int tag = 0; tag <= L; ++tag) {
      if (tag >= 1 && ps.zero_rate(tag)) continue;
      const std::size_t full = class_index(L, i, tag);
      reduced_of_full[full] = static_cast<int>(full_of_reduced.size());
      full_of_reduced.push_back(full);
    }
  }
  const std::size_t m = full_of_reduced.size();

  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m),
                                                static_cast<Eigen::Index>(m));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      // A = I - P^T restricted: subtract P(col, row).
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) -=
          P(full_of_reduced[c], full_of_reduced[r]);
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (int i = 0; i < L; ++i) {
    const int r = reduced_of_full[class_index(L, i, 0)];
    rhs(r) = ps.p[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXd sol = A.partialPivLu().solve(rhs);

  TrafficSolution ts;
  ts.lambda.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) ts.lambda[full_of_reduced[r]] = sol(static_cast<Eigen::Index>(r));
  ts.rho.assign(static_cast<std::size_t>(L), 0.0);
  for (int i = 0; i < L; ++i) {
    double s = 0.0;
    for (int tag = 0; tag <= L; ++tag) s += ts.lambda[class_index(L, i, tag)];
    ts.rho[static_cast<std::size_t>(i)] = s;
  }
  return ts;
}

LoadProfile load_profile(const ParameterSetting& ps) {
  LoadProfile lp;
  lp.pi = marginal_distribution(ps);
  TrafficSolution ts = traffic_solution(ps);
  lp.lambda = std::move(ts.lambda);
  lp.rho = std::move(ts.rho);
  return lp;
}

StabilityReport stability_verdict(const ParameterSetting& ps,
                                  std::optional<double> threshold_override) {
  constexpr double kBoundaryTol = 1e-12;
  const int L = ps.L;
  const Matrix pi = marginal_distribution(ps);
  const TrafficSolution ts = traffic_solution(ps);
  const VisitMatrix vm = visit_matrix(ps);

  StabilityReport report;
  report.threshold = threshold_override.value_or(1.0);
  report.margins.resize(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i)
    report.margins[static_cast<std::size_t>(i)] =
        pi(static_cast<std::size_t>(i), 0) - ps.p[static_cast<std::size_t>(i)];
  report.rho_bar = *std::max_element(ts.rho.begin(), ts.rho.end());
  report.B = vm.max_entry();

  if (std::abs(report.rho_bar - report.threshold) <= kBoundaryTol) {
    report.verdict = Verdict::Boundary;
  } else if (report.rho_bar < report.threshold) {
    report.verdict = Verdict::Stable;
    report.delta = (1.0 + report.B) / (report.threshold - report.rho_bar);
  } else {
    report.verdict = Verdict::Unstable;
  }
  return report;
}

StabilityRegion stability_region(const ParameterSetting& ps, int resolution) {
  if (resolution < 1) throw std::invalid_argument("stability_region: resolution must be >= 1");
  const int L = ps.L;
  const VisitMatrix vm = visit_matrix(ps);
  for (int type = 1; type <= L; ++type) {
    if (vm.column_infinite(type))
      throw std::domain_error(
          "stability_region: zero-rate types make the region degenerate; "
          "use the slotted tau condition instead");
  }

  StabilityRegion region;
  for (int i = 0; i < L; ++i) {
    Halfspace h;
    h.coefficients.resize(static_cast<std::size_t>(L));
    for (int k = 0; k < L; ++k) {
      h.coefficients[static_cast<std::size_t>(k)] =
          (i == k ? 1.0 : 0.0) + vm.b(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
    }
    h.rhs = 1.0;
    region.inequalities.push_back(std::move(h));
  }

  if (L == 2) {
    double x_max = std::numeric_limits<double>::infinity();
    double y_max = std::numeric_limits<double>::infinity();
    for (const Halfspace& h : region.inequalities) {
      if (h.coefficients[0] > 0.0) x_max = std::min(x_max, h.rhs / h.coefficients[0]);
      if (h.coefficients[1] > 0.0) y_max = std::min(y_max, h.rhs / h.coefficients[1]);
    }
    region.intercepts = {x_max, y_max};
    for (int s = 0; s <= resolution; ++s) {
      const double x = x_max * static_cast<double>(s) / static_cast<double>(resolution);
      double y = std::numeric_limits<double>::infinity();
      for (const Halfspace& h : region.inequalities) {
        if (h.coefficients[1] > 0.0)
          y = std::min(y, (h.rhs - h.coefficients[0] * x) / h.coefficients[1]);
      }
      region.boundary.emplace_back(x, std::max(y, 0.0));
    }
  }
  return region;
}

}  // namespace ringstab
