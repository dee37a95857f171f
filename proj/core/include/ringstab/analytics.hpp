#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ringstab/params.hpp"

namespace ringstab {

/// Distribution of the dwell time of a type-j vehicle: the number of cells it
/// occupies after entering (it enters at cell j and first occupies cell j+1;
/// dwell k means it departs from cell j+k, indices wrapping around the ring).
/// pmf[k-1] = P(dwell == k) for k = 1..k_max; tail = P(dwell > k_max).
/// P(dwell == 0) is identically 0 and not stored.
struct DwellDistribution {
  std::vector<double> pmf;
  double tail = 0.0;
};

/// Expected visit counts: b(i, j-1) is the expected number of times a type-j
/// vehicle occupies cell i over its whole dwell. Columns of zero-rate types
/// diverge and are flagged instead of stored as large floats.
struct VisitMatrix {
  Matrix b;
  std::vector<bool> infinite_column;  // indexed by type - 1

  /// Visit count for cell (0-based) and type (1-based label).
  /// Throws std::domain_error if the column is flagged infinite.
  double at(int cell, int type) const;
  bool column_infinite(int type) const { return infinite_column[static_cast<std::size_t>(type - 1)]; }
  /// Largest entry over finite columns.
  double max_entry() const;
};

/// Effective per-class arrival rates and station loads of the equivalent
/// multiclass queueing network. lambda is indexed by class_index(L, i, j);
/// rho[i] = sum over tags of lambda at station i.
struct TrafficSolution {
  std::vector<double> lambda;
  std::vector<double> rho;
};

/// Everything the stationary analysis produces for one setting.
struct LoadProfile {
  Matrix pi;  // L x (L+1): pi(i, j) = stationary probability cell i holds a type-j vehicle; j = 0 means empty
  std::vector<double> lambda;
  std::vector<double> rho;
};

enum class Verdict { Stable, Unstable, Boundary };

struct StabilityReport {
  Verdict verdict = Verdict::Unstable;
  std::vector<double> margins;  // pi(i,0) - p[i], positive everywhere iff stable at threshold 1
  double rho_bar = 0.0;         // max_i rho[i]
  double B = 0.0;               // max finite visit count
  std::optional<double> delta;  // (1 + B) / (threshold - rho_bar), present when stable
  double threshold = 1.0;
};

/// One linear constraint: sum_k coefficients[k] * p[k] < rhs.
struct Halfspace {
  std::vector<double> coefficients;
  double rhs = 1.0;
};

struct StabilityRegion {
  std::vector<Halfspace> inequalities;          // one per cell, coefficients delta_ik + b(i,k)
  std::vector<double> intercepts;               // per-axis maxima of the region (L == 2 only)
  std::vector<std::pair<double, double>> boundary;  // sampled boundary polyline (L == 2 only)
};

/// P(dwell) for a type with at least one positive hazard; throws
/// std::domain_error for zero-rate types (their dwell is infinite) and
/// std::invalid_argument for labels outside 1..L or k_max < 1.
DwellDistribution dwell_distribution(const ParameterSetting& ps, int type, int k_max);

/// Closed-form expected visit counts. Zero-rate columns come back flagged.
VisitMatrix visit_matrix(const ParameterSetting& ps);

/// Stationary cell-state marginals: pi(i, j) = b(i,j) * p[j-1] for j >= 1 and
/// pi(i, 0) = 1 - sum of the rest. The j = 0 entry is reported as computed,
/// which can be negative when the setting is overloaded. Throws
/// std::domain_error if some flagged column has p > 0.
Matrix marginal_distribution(const ParameterSetting& ps);

/// Dense solve of the class-space traffic equations lambda = p + P^T lambda.
/// Classes of zero-rate tags carry rate 0 and are excluded from the solve
/// (their loop in the routing graph has no exit).
TrafficSolution traffic_solution(const ParameterSetting& ps);

/// Full stationary profile: marginals plus traffic solution.
LoadProfile load_profile(const ParameterSetting& ps);

/// Stability classification. With the default threshold 1, the verdict is
/// Stable iff every margin pi(i,0) - p[i] is positive iff rho_bar < 1.
/// threshold_override (used by the slotted mapping, threshold 1/m) moves the
/// comparison to rho_bar < threshold. Boundary when |rho_bar - threshold|
/// <= 1e-12.
StabilityReport stability_verdict(const ParameterSetting& ps,
                                  std::optional<double> threshold_override = std::nullopt);

/// The exact stability region in arrival-rate space: L halfspaces
/// sum_k (delta_ik + b(i,k)) p_k < 1. For L == 2 also emits the axis
/// intercepts and a boundary polyline with `resolution` + 1 points.
StabilityRegion stability_region(const ParameterSetting& ps, int resolution = 256);

/// Routing matrix of the equivalent multiclass network over the full
/// class space: row class_index(kl), column class_index(target).
Matrix routing_matrix(const ParameterSetting& ps);

}  // namespace ringstab
