#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ringstab/params.hpp"
#include "ringstab/uniform_field.hpp"

namespace ringstab {

/// State of the multiclass queueing view. q[class_index(L, i, j)] counts
/// class-(i,j) customers at station i: tag 0 is the exogenous entry queue
/// (unbounded), tags j >= 1 are ring vehicles that entered at cell j, at most
/// one of which may be present per station.
struct McnState {
  int L = 0;
  std::vector<std::int64_t> q;

  static McnState empty(int L) {
    return McnState{L, std::vector<std::int64_t>(class_count(L), 0)};
  }
  std::int64_t& at(int station, int tag) { return q[class_index(L, station, tag)]; }
  std::int64_t at(int station, int tag) const { return q[class_index(L, station, tag)]; }
  /// Number of ring customers at the station (0 or 1 in any valid state).
  std::int64_t ring_occupancy(int station) const;
  bool operator==(const McnState&) const = default;

  /// Throws std::invalid_argument on dimension mismatch, negative counts, or
  /// more than one ring customer at a station.
  void validate_for(const ParameterSetting& ps) const;
};

/// What one step contributed to the running counts: arrivals per station,
/// service completions per class, and for served ring classes whether the
/// customer stayed in the network (moved to the next station) or left.
struct StepBookkeeping {
  std::vector<std::uint8_t> arrivals;  // per station
  std::vector<std::uint8_t> services;  // per class
  std::vector<std::uint8_t> onward;    // per class, meaningful where services == 1 and tag >= 1
};

/// One synchronous update, reading the state at t and producing t + 1.
///
/// Station i always serves its ring customer if one is present (strict
/// priority); it serves the entry queue only when no ring customer is there.
/// A served entry customer becomes a type-(i+1) ring customer at station
/// i+1. A served ring customer of tag v leaves the network when
/// u(i, v, t) <= q(i, v-1) and otherwise moves to station i+1 with the same
/// tag. Arrivals join entry queue i when u(i, 0, t+1) <= p[i]. All counters
/// are 64-bit; they overflow after ~9.2e18 events, far beyond any feasible
/// run.
void step_mcn_into(const McnState& state, const ParameterSetting& ps, const UniformField& field,
                   std::int64_t t, McnState& out, StepBookkeeping* bookkeeping = nullptr);
McnState step_mcn(const McnState& state, const ParameterSetting& ps, const UniformField& field,
                  std::int64_t t);

/// Full-resolution path with cumulative bookkeeping, the raw material of the
/// queueing-equation audit and of fluid scaling.
struct McnTrajectory {
  int L = 0;
  std::int64_t horizon = 0;
  std::vector<McnState> states;                          // size horizon + 1
  std::vector<std::vector<std::int64_t>> arrivals_cum;   // per step, per station
  std::vector<std::vector<std::int64_t>> services_cum;   // per step, per class
  /// routing[class] lists, per service completion of that ring class in
  /// order, 1 if the customer stayed in the network and 0 if it left.
  /// Entry classes (tag 0) route deterministically and keep no history.
  std::vector<std::vector<std::uint8_t>> routing;
};

McnTrajectory run_mcn(const McnState& initial, const ParameterSetting& ps,
                      const UniformField& field, std::int64_t horizon);

/// Result of checking the six pathwise queueing identities on a trajectory,
/// in exact integer arithmetic:
///   1. flow balance: Q(t) = Q(0) + A(t) + routed inflow at T(t) - T(t)
///   2. Q >= 0 with per-step increments in {-1, 0, 1}
///   3. T(0) = 0, T non-decreasing with per-step increments in {0, 1}
///   4. cumulative idleness I_i(t) = t - sum_j T_ij(t) is non-decreasing
///   5. work conservation: a station never idles while any of its queues
///      is nonempty
///   6. priority: a station never leaves its ring customer unserved, i.e.
///      I0_i(t) = t - sum_{j>=1} T_ij(t) only grows when no ring customer
///      is present
struct AuditReport {
  struct Check {
    bool pass = true;
    std::optional<std::int64_t> first_violation;
    std::string detail;
  };
  std::array<Check, 6> equations;
  bool pass() const {
    for (const auto& c : equations)
      if (!c.pass) return false;
    return true;
  }
};

/// Audits a recorded trajectory. Works on hand-built paths too: it uses only
/// the recorded states, cumulative counts, and routing histories. Throws
/// std::invalid_argument if the trajectory arrays are dimensionally
/// malformed (e.g. a service count pointing past its routing history).
AuditReport audit(const McnTrajectory& traj);

}  // namespace ringstab
