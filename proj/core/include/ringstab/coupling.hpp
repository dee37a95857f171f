#pragma once

#include <cstdint>
#include <optional>

#include "ringstab/mcn.hpp"
#include "ringstab/params.hpp"
#include "ringstab/ring.hpp"
#include "ringstab/uniform_field.hpp"

namespace ringstab {

/// The state bijection between the two views: queue i maps to entry class
/// (i, 0) and a type-v vehicle in cell i maps to the single ring class
/// (i, v) customer.
McnState forward_map(const RingState& state);

/// Inverse of forward_map. Throws std::invalid_argument if some station
/// holds more than one ring customer or an entry count is negative.
RingState inverse_map(const McnState& state);

/// Outcome of driving both simulators with the same uniform field and
/// checking forward_map(cellular state) == network state after every step.
/// On divergence the report carries both states at the first mismatch.
struct CouplingReport {
  bool pass = true;
  std::int64_t horizon = 0;
  std::optional<std::int64_t> first_divergence;
  std::optional<RingState> ring_state;
  std::optional<McnState> mcn_state;
  std::optional<McnState> mapped_ring_state;
};

CouplingReport coupled_run(const RingState& initial, const ParameterSetting& ps,
                           const UniformField& field, std::int64_t horizon);

/// Outcome of running the current model next to the legacy model from the
/// offset initial condition Q(0) = Q_legacy(0) + arrival indicator at t = 0,
/// same cells. Along the coupled path the cells must stay identical and the
/// queue gap at every cell must equal the arrival indicator of that step,
/// so the two models differ by at most one waiting vehicle per queue.
struct LegacyCouplingReport {
  bool pass = true;
  std::int64_t horizon = 0;
  std::optional<std::int64_t> first_violation;
  std::int64_t max_queue_gap = 0;
  std::optional<RingState> current_state;
  std::optional<RingState> legacy_state;
};

LegacyCouplingReport legacy_coupled_run(const RingState& initial_legacy,
                                        const ParameterSetting& ps, const UniformField& field,
                                        std::int64_t horizon);

}  // namespace ringstab
