#include "ringstab/ring.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace ringstab {

void RingState::validate_for(const ParameterSetting& ps) const {
  if (L() != ps.L || static_cast<int>(queues.size()) != ps.L)
    throw std::invalid_argument("RingState: dimensions do not match the setting");
  for (int i = 0; i < ps.L; ++i) {
    const int v = cells[static_cast<std::size_t>(i)];
    if (v < 0 || v > ps.L)
      throw std::invalid_argument("RingState: cell " + std::to_string(i) +
                                  " holds invalid state " + std::to_string(v));
    if (queues[static_cast<std::size_t>(i)] < 0)
      throw std::invalid_argument("RingState: queue " + std::to_string(i) + " is negative");
  }
}

void step_into(const RingState& state, const ParameterSetting& ps, const UniformField& field,
               std::int64_t t, RingState& out) {
  const int L = ps.L;
  out.cells.assign(static_cast<std::size_t>(L), 0);
  out.queues.resize(static_cast<std::size_t>(L));

  for (int i = 0; i < L; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const std::size_t next = static_cast<std::size_t>((i + 1) % L);
    const int v = state.cells[si];
    const bool enters = state.queues[si] > 0 && v == 0;
    if (enters) {
      out.cells[next] = i + 1;  // the entering vehicle carries its entry cell as type
    } else if (v != 0 && field.u(i, v, t) > ps.hazard(i, v)) {
      out.cells[next] = v;  // survives this cell, advances
    }
    const std::int64_t arrival = field.u(i, 0, t + 1) <= ps.p[si] ? 1 : 0;
    out.queues[si] = state.queues[si] - (enters ? 1 : 0) + arrival;
  }
}

RingState step(const RingState& state, const ParameterSetting& ps, const UniformField& field,
               std::int64_t t) {
  RingState out;
  step_into(state, ps, field, t, out);
  return out;
}

void step_legacy_into(const RingState& state, const ParameterSetting& ps,
                      const UniformField& field, std::int64_t t, RingState& out) {
  const int L = ps.L;
  out.cells.assign(static_cast<std::size_t>(L), 0);
  out.queues.resize(static_cast<std::size_t>(L));

  for (int i = 0; i < L; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const std::size_t next = static_cast<std::size_t>((i + 1) % L);
    const int v = state.cells[si];
    const bool arrival = field.u(i, 0, t) <= ps.p[si];
    if (state.queues[si] > 0 && v == 0) {
      // Head of the queue enters; a simultaneous arrival takes its place.
      out.cells[next] = i + 1;
      out.queues[si] = state.queues[si] - (arrival ? 0 : 1);
    } else if (state.queues[si] == 0 && v == 0) {
      // Empty queue, free cell: an arrival bypasses the queue entirely.
      if (arrival) out.cells[next] = i + 1;
      out.queues[si] = 0;
    } else {
      // Cell occupied: the arrival, if any, must queue.
      if (field.u(i, v, t) > ps.hazard(i, v)) out.cells[next] = v;
      out.queues[si] = state.queues[si] + (arrival ? 1 : 0);
    }
  }
}

RingState step_legacy(const RingState& state, const ParameterSetting& ps,
                      const UniformField& field, std::int64_t t) {
  RingState out;
  step_legacy_into(state, ps, field, t, out);
  return out;
}

RingTrajectory run(const RingState& initial, const ParameterSetting& ps,
                   const UniformField& field, std::int64_t horizon, std::int64_t record_every,
                   RingModel model) {
  initial.validate_for(ps);
  if (horizon < 0) throw std::invalid_argument("run: horizon must be >= 0");
  if (record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");

  const int L = ps.L;
  const std::size_t occ_size = static_cast<std::size_t>(L) * static_cast<std::size_t>(L + 1);

  RingTrajectory traj;
  traj.horizon = horizon;
  traj.record_every = record_every;
  traj.model = model;

  std::vector<std::int64_t> occupancy(occ_size, 0);
  std::vector<std::int64_t> arrivals(static_cast<std::size_t>(L), 0);
  std::vector<std::int64_t> departures(static_cast<std::size_t>(L), 0);

  RingState current = initial;
  RingState scratch = RingState::empty(L);

  auto snapshot = [&](std::int64_t t) {
    traj.times.push_back(t);
    traj.states.push_back(current);
    traj.occupancy.push_back(occupancy);
    traj.arrivals.push_back(arrivals);
    traj.departures.push_back(departures);
  };
  snapshot(0);

  for (std::int64_t t = 0; t < horizon; ++t) {
    if (model == RingModel::kCurrent) {
      step_into(current, ps, field, t, scratch);
      for (int i = 0; i < L; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const int v = current.cells[si];
        if (v != 0 && field.u(i, v, t) <= ps.hazard(i, v)) ++departures[si];
        if (field.u(i, 0, t + 1) <= ps.p[si]) ++arrivals[si];
      }
    } else {
      step_legacy_into(current, ps, field, t, scratch);
      for (int i = 0; i < L; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const int v = current.cells[si];
        if (v != 0 && field.u(i, v, t) <= ps.hazard(i, v)) ++departures[si];
        if (field.u(i, 0, t) <= ps.p[si]) ++arrivals[si];
      }
    }
    std::swap(current, scratch);
    for (int i = 0; i < L; ++i) {
      const std::size_t si = static_cast<std::size_t>(i);
      ++occupancy[si * static_cast<std::size_t>(L + 1) +
                  static_cast<std::size_t>(current.cells[si])];
    }
    if ((t + 1) % record_every == 0 || t + 1 == horizon) snapshot(t + 1);
  }
  return traj;
}

Matrix estimate_marginals(const RingTrajectory& traj, std::int64_t burn_in) {
  if (traj.states.empty()) throw std::invalid_argument("estimate_marginals: empty trajectory");
  if (burn_in < 0 || burn_in >= traj.horizon)
    throw std::invalid_argument("estimate_marginals: burn_in must lie in [0, horizon)");
  const int L = traj.L();

  std::size_t start = 0;
  while (traj.times[start] < burn_in) ++start;
  const std::size_t last = traj.times.size() - 1;
  const double window = static_cast<double>(traj.times[last] - traj.times[start]);
  if (window <= 0.0) throw std::invalid_argument("estimate_marginals: empty averaging window");

  Matrix freq(static_cast<std::size_t>(L), static_cast<std::size_t>(L + 1));
  for (int i = 0; i < L; ++i) {
    for (int v = 0; v <= L; ++v) {
      const std::size_t k = static_cast<std::size_t>(i) * static_cast<std::size_t>(L + 1) +
                            static_cast<std::size_t>(v);
      freq(static_cast<std::size_t>(i), static_cast<std::size_t>(v)) =
          static_cast<double>(traj.occupancy[last][k] - traj.occupancy[start][k]) / window;
    }
  }
  return freq;
}

std::vector<double> queue_growth_slopes(const RingTrajectory& traj, std::int64_t window) {
  if (window <= 0 || window > traj.horizon)
    throw std::invalid_argument("queue_growth_slopes: window must lie in (0, horizon]");
  const std::int64_t start_time = traj.horizon - window;
  const int L = traj.L();

  std::size_t first = 0;
  while (traj.times[first] < start_time) ++first;
  const std::size_t count = traj.times.size() - first;
  if (count < 2)
    throw std::invalid_argument("queue_growth_slopes: need at least two snapshots in the window");

  double mean_t = 0.0;
  for (std::size_t k = first; k < traj.times.size(); ++k)
    mean_t += static_cast<double>(traj.times[k]);
  mean_t /= static_cast<double>(count);

  std::vector<double> slopes(static_cast<std::size_t>(L), 0.0);
  double denom = 0.0;
  for (std::size_t k = first; k < traj.times.size(); ++k) {
    const double dt = static_cast<double>(traj.times[k]) - mean_t;
    denom += dt * dt;
  }
  for (int i = 0; i < L; ++i) {
    double mean_q = 0.0;
    for (std::size_t k = first; k < traj.times.size(); ++k)
      mean_q += static_cast<double>(traj.states[k].queues[static_cast<std::size_t>(i)]);
    mean_q /= static_cast<double>(count);
    double num = 0.0;
    for (std::size_t k = first; k < traj.times.size(); ++k) {
      const double dt = static_cast<double>(traj.times[k]) - mean_t;
      num += dt * (static_cast<double>(traj.states[k].queues[static_cast<std::size_t>(i)]) - mean_q);
    }
    slopes[static_cast<std::size_t>(i)] = denom > 0.0 ? num / denom : 0.0;
  }
  return slopes;
}

}  // namespace ringstab
