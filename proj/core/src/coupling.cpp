#include "ringstab/coupling.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace ringstab {

McnState forward_map(const RingState& state) {
  const int L = state.L();
  McnState out = McnState::empty(L);
  for (int i = 0; i < L; ++i) {
    out.at(i, 0) = state.queues[static_cast<std::size_t>(i)];
    const int v = state.cells[static_cast<std::size_t>(i)];
    if (v != 0) out.at(i, v) = 1;
  }
  return out;
}

RingState inverse_map(const McnState& state) {
  const int L = state.L;
  RingState out = RingState::empty(L);
  for (int i = 0; i < L; ++i) {
    if (state.at(i, 0) < 0)
      throw std::invalid_argument("inverse_map: negative entry queue at station " +
                                  std::to_string(i));
    out.queues[static_cast<std::size_t>(i)] = state.at(i, 0);
    int occupant = 0;
    for (int tag = 1; tag <= L; ++tag) {
      const std::int64_t c = state.at(i, tag);
      if (c < 0 || c > 1)
        throw std::invalid_argument("inverse_map: ring class count out of range at station " +
                                    std::to_string(i));
      if (c == 1) {
        if (occupant != 0)
          throw std::invalid_argument("inverse_map: station " + std::to_string(i) +
                                      " holds two ring customers");
        occupant = tag;
      }
    }
    out.cells[static_cast<std::size_t>(i)] = occupant;
  }
  return out;
}

CouplingReport coupled_run(const RingState& initial, const ParameterSetting& ps,
                           const UniformField& field, std::int64_t horizon) {
  initial.validate_for(ps);
  if (horizon < 0) throw std::invalid_argument("coupled_run: horizon must be >= 0");

  CouplingReport report;
  report.horizon = horizon;

  RingState ring = initial;
  RingState ring_next = RingState::empty(ps.L);
  McnState mcn = forward_map(initial);
  McnState mcn_next = McnState::empty(ps.L);

  for (std::int64_t t = 0; t <= horizon; ++t) {
    if (forward_map(ring) != mcn) {
      report.pass = false;
      report.first_divergence = t;
      report.ring_state = ring;
      report.mcn_state = mcn;
      report.mapped_ring_state = forward_map(ring);
      return report;
    }
    if (t == horizon) break;
    step_into(ring, ps, field, t, ring_next);
    step_mcn_into(mcn, ps, field, t, mcn_next);
    std::swap(ring, ring_next);
    std::swap(mcn, mcn_next);
  }
  return report;
}

LegacyCouplingReport legacy_coupled_run(const RingState& initial_legacy,
                                        const ParameterSetting& ps, const UniformField& field,
                                        std::int64_t horizon) {
  initial_legacy.validate_for(ps);
  if (horizon < 0) throw std::invalid_argument("legacy_coupled_run: horizon must be >= 0");
  const int L = ps.L;

  LegacyCouplingReport report;
  report.horizon = horizon;

  // Offset start: the current model pre-loads each queue with the arrival
  // the legacy model would admit during its first step.
  RingState current = initial_legacy;
  for (int i = 0; i < L; ++i) {
    if (field.u(i, 0, 0) <= ps.p[static_cast<std::size_t>(i)])
      current.queues[static_cast<std::size_t>(i)] += 1;
  }
  RingState legacy = initial_legacy;
  RingState scratch = RingState::empty(L);

  for (std::int64_t t = 0; t <= horizon; ++t) {
    for (int i = 0; i < L; ++i) {
      const std::size_t si = static_cast<std::size_t>(i);
      const std::int64_t gap = current.queues[si] - legacy.queues[si];
      const std::int64_t expected =
          field.u(i, 0, t) <= ps.p[si] ? 1 : 0;
      const bool cells_match = current.cells[si] == legacy.cells[si];
      if (gap > report.max_queue_gap) report.max_queue_gap = gap;
      if (!cells_match || gap != expected) {
        report.pass = false;
        report.first_violation = t;
        report.current_state = current;
        report.legacy_state = legacy;
        return report;
      }
    }
    if (t == horizon) break;
    step_into(current, ps, field, t, scratch);
    std::swap(current, scratch);
    step_legacy_into(legacy, ps, field, t, scratch);
    std::swap(legacy, scratch);
  }
  return report;
}

}  // namespace ringstab
