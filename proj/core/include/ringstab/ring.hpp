#pragma once

#include <cstdint>
#include <vector>

#include "ringstab/analytics.hpp"
#include "ringstab/params.hpp"
#include "ringstab/uniform_field.hpp"

namespace ringstab {

/// State of the cellular-automaton view: cells[i] is 0 (empty) or the type
/// label (1..L) of the vehicle occupying cell i; queues[i] counts vehicles
/// waiting at the entry of cell i.
struct RingState {
  std::vector<int> cells;
  std::vector<std::int64_t> queues;

  static RingState empty(int L) {
    return RingState{std::vector<int>(static_cast<std::size_t>(L), 0),
                     std::vector<std::int64_t>(static_cast<std::size_t>(L), 0)};
  }
  int L() const { return static_cast<int>(cells.size()); }
  bool operator==(const RingState&) const = default;

  /// Throws std::invalid_argument unless dimensions match ps and every entry
  /// is in range (cells in 0..L, queues >= 0).
  void validate_for(const ParameterSetting& ps) const;
};

/// One synchronous update of the current model, reading the state at time t
/// and producing the state at t + 1.
///
/// Per cell i: a vehicle of type v occupying cell i departs when
/// u(i, v, t) <= q(i, v-1), otherwise it moves to cell i+1. When cell i is
/// empty and queue i is nonempty, the head of the queue enters the ring and
/// occupies cell i+1 as a type-(i+1) vehicle. Arrivals join queue i when
/// u(i, 0, t+1) <= p[i]: a fresh arrival waits at least one full step before
/// it can enter.
void step_into(const RingState& state, const ParameterSetting& ps, const UniformField& field,
               std::int64_t t, RingState& out);
RingState step(const RingState& state, const ParameterSetting& ps, const UniformField& field,
               std::int64_t t);

/// One update of the legacy variant in which an arrival finding its queue
/// empty and its cell free enters the ring immediately. Consumes the arrival
/// uniform u(i, 0, t) of the current step instead of the next one.
void step_legacy_into(const RingState& state, const ParameterSetting& ps,
                      const UniformField& field, std::int64_t t, RingState& out);
RingState step_legacy(const RingState& state, const ParameterSetting& ps,
                      const UniformField& field, std::int64_t t);

enum class RingModel { kCurrent, kLegacy };

/// Recorded path of a simulation run. Snapshots are taken at t = 0, every
/// record_every steps, and at the horizon. Alongside each snapshot the
/// trajectory stores running totals over (0, t]: time spent by each cell in
/// each occupancy state, queue arrivals per cell, and ring departures per
/// cell, so long-run frequencies never require full-resolution storage.
struct RingTrajectory {
  std::int64_t horizon = 0;
  std::int64_t record_every = 1;
  RingModel model = RingModel::kCurrent;
  std::vector<std::int64_t> times;
  std::vector<RingState> states;
  /// occupancy[k][i * (L+1) + v] = number of times cell i held state v over
  /// t in [1, times[k]].
  std::vector<std::vector<std::int64_t>> occupancy;
  std::vector<std::vector<std::int64_t>> arrivals;    // cumulative per cell
  std::vector<std::vector<std::int64_t>> departures;  // cumulative per cell
  int L() const { return states.empty() ? 0 : states.front().L(); }
};

/// Runs `horizon` steps from `initial`, recording snapshots every
/// `record_every` steps. record_every must be >= 1, horizon >= 0.
RingTrajectory run(const RingState& initial, const ParameterSetting& ps,
                   const UniformField& field, std::int64_t horizon, std::int64_t record_every,
                   RingModel model = RingModel::kCurrent);

/// Empirical cell-state frequencies over (burn_in, horizon], using the
/// snapshot grid point nearest above burn_in as the window start. Returns an
/// L x (L+1) matrix whose rows sum to 1. Requires burn_in < horizon.
Matrix estimate_marginals(const RingTrajectory& traj, std::int64_t burn_in);

/// Least-squares slope of queue length against time for each queue, fitted
/// over the snapshots in the window [horizon - window, horizon]. Requires
/// 0 < window <= horizon and at least two snapshots in the window.
std::vector<double> queue_growth_slopes(const RingTrajectory& traj, std::int64_t window);

}  // namespace ringstab
