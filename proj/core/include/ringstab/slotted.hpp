#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ringstab/analytics.hpp"
#include "ringstab/params.hpp"
#include "ringstab/ring.hpp"

namespace ringstab {

/// A slotted ring: c equal slots rotate past n fixed stations, one slot
/// length per time unit. Packets arrive at station r as a Bernoulli stream
/// of rate arrival_rates[r] per slot-time, wait in the station queue,
/// transmit into the first empty passing slot, and leave the ring when their
/// slot passes their destination. dest(r, s) is the probability a packet
/// from station r is bound for station s: zero diagonal, rows sum to 1.
struct SlottedSpec {
  int n = 0;
  int c = 0;
  std::vector<double> arrival_rates;
  Matrix dest;

  /// Throws std::invalid_argument on bad dimensions, rates outside [0,1),
  /// negative or non-normalized dest rows, nonzero diagonal, or n < 2
  /// (with one station no dest row can sum to 1).
  void validate() const;
};

/// Cell layout shared by the mappings and the direct simulator.
/// Stations sit at station_cells (0-based); the c slots start at slot_cells
/// and advance one cell per fine step; m cells separate consecutive slots,
/// so one slot-time equals m fine steps and a full rotation takes L.
struct SlottedGeometry {
  int L = 0;
  int m = 1;
  int k = 1;
  std::vector<int> station_cells;
  std::vector<int> slot_cells;
};

/// n <= c layout: L = c, stations on consecutive cells 0..n-1, every cell a
/// slot.
SlottedGeometry simple_geometry(int n, int c);

/// Common-multiple layout: L = lcm(n, c), stations every k = L/n cells,
/// slots every m = L/c cells. When c divides n the lcm leaves no spare type
/// label for the permanently circulating placeholders, so L doubles.
SlottedGeometry general_geometry(int n, int c);

/// A slotted spec translated into ring parameters: the ring reproduces the
/// slotted dynamics observed at full rotations. station_cells[r] is the
/// entry cell of station r, the stability threshold is 1/m, and `condition`
/// restates rho < 1/m as inequalities over the original arrival rates.
struct SlottedMapping {
  ParameterSetting ps;
  std::vector<int> station_cells;
  int m = 1;
  std::vector<Halfspace> condition;
};

/// Mapping for n <= c. Destination probabilities become conditional removal
/// hazards at station cells; unreachable station cells (no remaining
/// destination mass) get hazard 1, which keeps every visit column finite.
SlottedMapping map_simple(const SlottedSpec& spec);

/// Mapping on the common-multiple layout, valid for every n, c (with n <= c
/// it degenerates to the simple construction up to rotation, m = 1). Cells
/// without a slot at time zero are held by placeholder vehicles of a
/// zero-rate type that never depart: they encode the absence of a slot.
SlottedMapping map_general(const SlottedSpec& spec);

/// The stability condition of the mapping in arrival-rate space:
/// lambda_r + sum_s b(cell_r, type_s) lambda_s < 1 for every station r.
std::vector<Halfspace> tau_condition(const SlottedMapping& mapping);

/// Ring state at time zero: empty slots everywhere a slot starts,
/// placeholder vehicles elsewhere.
RingState slotted_initial_state(const SlottedMapping& mapping);

/// Direct discrete simulator of the slotted ring itself: slot objects moving
/// past stations, removal on reaching the destination, transmission into an
/// aligned empty slot (a slot emptied at a station is not refilled on the
/// same pass), Bernoulli arrivals of rate arrival_rates[r]/m per fine step.
/// Runs on its own generator; it shares no code path with the cellular
/// simulator, which is what makes the two comparable as independent
/// witnesses of the mapping.
class SlottedRingSim {
 public:
  SlottedRingSim(const SlottedSpec& spec, const SlottedGeometry& geometry, std::uint64_t seed);

  /// Advances one fine step (every slot moves one cell).
  void step();
  /// Station queue lengths.
  const std::vector<std::int64_t>& queues() const { return queues_; }
  /// Fine steps per full rotation.
  int epoch_length() const { return geometry_.L; }
  std::int64_t now() const { return t_; }

 private:
  struct Slot {
    int pos = 0;
    int dest = -1;  // station index, -1 when empty
  };
  SlottedGeometry geometry_;
  std::vector<int> station_at_cell_;  // station index or -1 per cell
  std::vector<Slot> slots_;
  std::vector<std::int64_t> queues_;
  std::vector<double> fine_rates_;
  std::vector<std::discrete_distribution<int>> dest_draw_;
  std::mt19937_64 rng_;
  std::int64_t t_ = 0;
};

}  // namespace ringstab
