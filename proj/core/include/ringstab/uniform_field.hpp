#pragma once

#include <cstdint>

namespace ringstab {

/// Deterministic field of uniforms indexed by (cell, lane, time).
///
/// u(i, j, t) is a pure function of (seed, i, j, t): no state, no evaluation
/// order. That is what lets the cellular-automaton simulator, the multiclass
/// queueing simulator, and the legacy-model simulator consume the exact same
/// randomness and be compared path by path.
///
/// Lanes: u(i, 0, t) drives the arrival at the queue of cell i during the
/// step ending at t; u(i, v, t) with v in 1..L drives the departure of a
/// type-v vehicle occupying cell i at time t. Cell indices are 0-based,
/// type labels 1-based, matching the rest of the library.
///
/// Values lie strictly inside (0,1), so a comparison u <= p with p == 0
/// never fires and u <= q with q == 1 always does.
class UniformField {
 public:
  UniformField(std::uint64_t seed, int L);

  /// i in [0, L), j in [0, L], t >= 0. Throws std::out_of_range otherwise.
  double u(int i, int j, std::int64_t t) const;

  std::uint64_t seed() const { return seed_; }
  int L() const { return L_; }

 private:
  std::uint64_t seed_;
  int L_;
};

}  // namespace ringstab
