#include "ringstab/slotted.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

namespace ringstab {
namespace {

// Turns destination probabilities into per-cell removal hazards. A packet
// from station r meets the other stations in ring order; conditioning on
// having passed the earlier ones gives hazard mass / (mass still ahead).
// Computing the denominator as a tail sum keeps each hazard in [0, 1]
// exactly and makes the last reachable station certain. Stations with no
// remaining destination mass are never reached with positive probability;
// hazard one there keeps the dwell distribution of the label finite.
void assign_hazards(const SlottedSpec& spec, const SlottedGeometry& g, Matrix& q) {
  for (int r = 0; r < spec.n; ++r) {
    const int entry_cell = g.station_cells[r];
    const int col = entry_cell;  // label entry_cell + 1
    double ahead = 0.0;
    for (int o = spec.n - 2; o >= 0; --o) {
      const int s = (r + 1 + o) % spec.n;
      const double mass = spec.dest(r, s);
      ahead += mass;
      q(g.station_cells[s], col) = ahead > 0.0 ? mass / ahead : 1.0;
    }
    q(entry_cell, col) = 1.0;  // own station: only reachable with mass zero
  }
}

int phantom_label(const ParameterSetting& ps) {
  if (ps.zero_rate_types.empty())
    throw std::logic_error("slotted mapping has no label available for placeholders");
  return *ps.zero_rate_types.begin();
}

}  // namespace

void SlottedSpec::validate() const {
  if (n < 2)
    throw std::invalid_argument(
        "slotted spec: need at least two stations (no destination row can "
        "sum to one otherwise)");
  if (c < 1) throw std::invalid_argument("slotted spec: need at least one slot");
  if (static_cast<int>(arrival_rates.size()) != n)
    throw std::invalid_argument("slotted spec: arrival_rates must have one entry per station");
  for (double rate : arrival_rates)
    if (!(rate >= 0.0) || rate >= 1.0)
      throw std::invalid_argument("slotted spec: arrival rates must lie in [0, 1)");
  if (dest.rows() != static_cast<std::size_t>(n) || dest.cols() != static_cast<std::size_t>(n))
    throw std::invalid_argument("slotted spec: dest must be n by n");
  for (int r = 0; r < n; ++r) {
    double sum = 0.0;
    for (int s = 0; s < n; ++s) {
      const double v = dest(r, s);
      if (!(v >= 0.0) || v > 1.0)
        throw std::invalid_argument("slotted spec: dest entries must lie in [0, 1]");
      if (r == s && v != 0.0)
        throw std::invalid_argument("slotted spec: packets cannot be destined to their origin");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("slotted spec: each dest row must sum to one");
  }
}

SlottedGeometry simple_geometry(int n, int c) {
  if (n < 1 || c < n)
    throw std::invalid_argument("simple geometry requires 1 <= n <= c");
  SlottedGeometry g;
  g.L = c;
  g.m = 1;
  g.k = 1;
  for (int r = 0; r < n; ++r) g.station_cells.push_back(r);
  for (int j = 0; j < c; ++j) g.slot_cells.push_back(j);
  return g;
}

SlottedGeometry general_geometry(int n, int c) {
  if (n < 1 || c < 1) throw std::invalid_argument("general geometry requires n, c >= 1");
  int L = std::lcm(n, c);
  // When c divides n every cell hosts a station and no label is left for the
  // placeholder vehicles that stand in for missing slots. Doubling the ring
  // frees alternate labels without changing anything at the stations.
  if (L == n && L > c) L *= 2;
  SlottedGeometry g;
  g.L = L;
  g.m = L / c;
  g.k = L / n;
  for (int r = 1; r <= n; ++r) g.station_cells.push_back(r * g.k - 1);
  for (int j = 1; j <= c; ++j) g.slot_cells.push_back(j * g.m - 1);
  return g;
}

SlottedMapping map_simple(const SlottedSpec& spec) {
  spec.validate();
  if (spec.n > spec.c)
    throw std::invalid_argument("map_simple requires n <= c; use map_general");
  const SlottedGeometry g = simple_geometry(spec.n, spec.c);
  std::vector<double> p(g.L, 0.0);
  for (int r = 0; r < spec.n; ++r) p[g.station_cells[r]] = spec.arrival_rates[r];
  Matrix q(g.L, g.L, 0.0);
  // Labels of cells without a station are never issued; hazard one
  // everywhere keeps their visit columns finite without touching the
  // dynamics (their arrival rates are zero).
  for (int type = spec.n + 1; type <= g.L; ++type)
    for (int i = 0; i < g.L; ++i) q(i, type - 1) = 1.0;
  assign_hazards(spec, g, q);
  SlottedMapping mapping{ParameterSetting::create(g.L, p, q, {}), g.station_cells, g.m, {}};
  mapping.condition = tau_condition(mapping);
  return mapping;
}

SlottedMapping map_general(const SlottedSpec& spec) {
  spec.validate();
  const SlottedGeometry g = general_geometry(spec.n, spec.c);
  std::vector<double> p(g.L, 0.0);
  for (int r = 0; r < spec.n; ++r) p[g.station_cells[r]] = spec.arrival_rates[r] / g.m;
  Matrix q(g.L, g.L, 0.0);
  assign_hazards(spec, g, q);
  // Labels of cells without a station become the zero-rate pool; the
  // placeholders that stand in for absent slots circulate forever under
  // hazard zero.
  std::set<int> zero_rate;
  std::vector<bool> station_label(g.L + 1, false);
  for (int cell : g.station_cells) station_label[cell + 1] = true;
  for (int type = 1; type <= g.L; ++type)
    if (!station_label[type]) zero_rate.insert(type);
  SlottedMapping mapping{ParameterSetting::create(g.L, p, q, zero_rate), g.station_cells, g.m,
                         {}};
  mapping.condition = tau_condition(mapping);
  return mapping;
}

std::vector<Halfspace> tau_condition(const SlottedMapping& mapping) {
  const VisitMatrix vm = visit_matrix(mapping.ps);
  const int n = static_cast<int>(mapping.station_cells.size());
  std::vector<Halfspace> out;
  out.reserve(n);
  for (int r = 0; r < n; ++r) {
    Halfspace h;
    h.coefficients.assign(n, 0.0);
    h.rhs = 1.0;
    for (int s = 0; s < n; ++s) {
      const int type = mapping.station_cells[s] + 1;
      h.coefficients[s] = (s == r ? 1.0 : 0.0) + vm.at(mapping.station_cells[r], type);
    }
    out.push_back(std::move(h));
  }
  return out;
}

RingState slotted_initial_state(const SlottedMapping& mapping) {
  const int L = mapping.ps.L;
  RingState state = RingState::empty(L);
  if (mapping.m == 1) return state;  // a slot starts in every cell
  std::vector<bool> slot(L, false);
  const int c = L / mapping.m;
  for (int j = 1; j <= c; ++j) slot[j * mapping.m - 1] = true;
  const int label = phantom_label(mapping.ps);
  for (int i = 0; i < L; ++i)
    if (!slot[i]) state.cells[i] = label;
  return state;
}

SlottedRingSim::SlottedRingSim(const SlottedSpec& spec, const SlottedGeometry& geometry,
                               std::uint64_t seed)
    : geometry_(geometry), rng_(seed) {
  spec.validate();
  if (static_cast<int>(geometry_.station_cells.size()) != spec.n ||
      static_cast<int>(geometry_.slot_cells.size()) * geometry_.m != geometry_.L)
    throw std::invalid_argument("slotted geometry does not match the spec");
  station_at_cell_.assign(geometry_.L, -1);
  for (int r = 0; r < spec.n; ++r) {
    const int cell = geometry_.station_cells[r];
    if (cell < 0 || cell >= geometry_.L || station_at_cell_[cell] >= 0)
      throw std::invalid_argument("slotted geometry has overlapping or out-of-range stations");
    station_at_cell_[cell] = r;
  }
  slots_.reserve(geometry_.slot_cells.size());
  for (int cell : geometry_.slot_cells) slots_.push_back(Slot{cell, -1});
  queues_.assign(spec.n, 0);
  fine_rates_.reserve(spec.n);
  dest_draw_.reserve(spec.n);
  for (int r = 0; r < spec.n; ++r) {
    fine_rates_.push_back(spec.arrival_rates[r] / geometry_.m);
    std::vector<double> row(spec.n);
    for (int s = 0; s < spec.n; ++s) row[s] = spec.dest(r, s);
    dest_draw_.emplace_back(row.begin(), row.end());
  }
}

void SlottedRingSim::step() {
  for (Slot& slot : slots_) {
    const int s = station_at_cell_[slot.pos];
    if (s < 0) continue;
    if (slot.dest == s) {
      slot.dest = -1;  // delivered; the freed slot is not refilled this pass
    } else if (slot.dest < 0 && queues_[s] > 0) {
      --queues_[s];
      slot.dest = dest_draw_[s](rng_);
    }
  }
  for (Slot& slot : slots_) slot.pos = (slot.pos + 1) % geometry_.L;
  for (std::size_t s = 0; s < queues_.size(); ++s)
    if (std::bernoulli_distribution(fine_rates_[s])(rng_)) ++queues_[s];
  ++t_;
}

}  // namespace ringstab
