#include "ringstab/mcn.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace ringstab {

std::int64_t McnState::ring_occupancy(int station) const {
  std::int64_t s = 0;
  for (int tag = 1; tag <= L; ++tag) s += at(station, tag);
  return s;
}

void McnState::validate_for(const ParameterSetting& ps) const {
  if (L != ps.L || q.size() != class_count(ps.L))
    throw std::invalid_argument("McnState: dimensions do not match the setting");
  for (int i = 0; i < L; ++i) {
    if (at(i, 0) < 0)
      throw std::invalid_argument("McnState: entry queue " + std::to_string(i) + " is negative");
    std::int64_t ring = 0;
    for (int tag = 1; tag <= L; ++tag) {
      const std::int64_t v = at(i, tag);
      if (v < 0 || v > 1)
        throw std::invalid_argument("McnState: ring class (" + std::to_string(i) + "," +
                                    std::to_string(tag) + ") must be 0 or 1");
      ring += v;
    }
    if (ring > 1)
      throw std::invalid_argument("McnState: station " + std::to_string(i) +
                                  " holds more than one ring customer");
  }
}

void step_mcn_into(const McnState& state, const ParameterSetting& ps, const UniformField& field,
                   std::int64_t t, McnState& out, StepBookkeeping* bookkeeping) {
  const int L = ps.L;
  const std::size_t n = class_count(L);
  out.L = L;
  out.q.assign(n, 0);
  if (bookkeeping) {
    bookkeeping->arrivals.assign(static_cast<std::size_t>(L), 0);
    bookkeeping->services.assign(n, 0);
    bookkeeping->onward.assign(n, 0);
  }

  for (int i = 0; i < L; ++i) {
    const int next = (i + 1) % L;
    const std::int64_t ring = state.ring_occupancy(i);
    const bool serve_entry = state.at(i, 0) > 0 && ring == 0;

    const bool arrival = field.u(i, 0, t + 1) <= ps.p[static_cast<std::size_t>(i)];
    out.q[class_index(L, i, 0)] += state.at(i, 0) - (serve_entry ? 1 : 0) + (arrival ? 1 : 0);
    if (bookkeeping && arrival) bookkeeping->arrivals[static_cast<std::size_t>(i)] = 1;

    if (serve_entry) {
      // The entering vehicle is tagged with its entry cell label i+1.
      out.q[class_index(L, next, i + 1)] += 1;
      if (bookkeeping) bookkeeping->services[class_index(L, i, 0)] = 1;
    }
    for (int tag = 1; tag <= L; ++tag) {
      if (state.at(i, tag) == 0) continue;
      // Priority service: the ring customer always completes this step.
      const bool onward = field.u(i, tag, t) > ps.hazard(i, tag);
      if (onward) out.q[class_index(L, next, tag)] += 1;
      if (bookkeeping) {
        bookkeeping->services[class_index(L, i, tag)] = 1;
        bookkeeping->onward[class_index(L, i, tag)] = onward ? 1 : 0;
      }
    }
  }
}

McnState step_mcn(const McnState& state, const ParameterSetting& ps, const UniformField& field,
                  std::int64_t t) {
  McnState out;
  step_mcn_into(state, ps, field, t, out);
  return out;
}

McnTrajectory run_mcn(const McnState& initial, const ParameterSetting& ps,
                      const UniformField& field, std::int64_t horizon) {
  initial.validate_for(ps);
  if (horizon < 0) throw std::invalid_argument("run_mcn: horizon must be >= 0");
  const int L = ps.L;
  const std::size_t n = class_count(L);

  McnTrajectory traj;
  traj.L = L;
  traj.horizon = horizon;
  traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.arrivals_cum.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.services_cum.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.states.push_back(initial);
  traj.arrivals_cum.emplace_back(static_cast<std::size_t>(L), 0);
  traj.services_cum.emplace_back(n, 0);
  traj.routing.assign(n, {});

  McnState current = initial;
  McnState scratch = McnState::empty(L);
  StepBookkeeping delta;

  for (std::int64_t t = 0; t < horizon; ++t) {
    step_mcn_into(current, ps, field, t, scratch, &delta);

    std::vector<std::int64_t> a = traj.arrivals_cum.back();
    for (int i = 0; i < L; ++i) a[static_cast<std::size_t>(i)] += delta.arrivals[static_cast<std::size_t>(i)];
    traj.arrivals_cum.push_back(std::move(a));

    std::vector<std::int64_t> s = traj.services_cum.back();
    for (std::size_t c = 0; c < n; ++c) {
      if (!delta.services[c]) continue;
      s[c] += 1;
      // Only ring classes make a random routing decision worth recording.
      if (c % static_cast<std::size_t>(L + 1) != 0) traj.routing[c].push_back(delta.onward[c]);
    }
    traj.services_cum.push_back(std::move(s));

    std::swap(current, scratch);
    traj.states.push_back(current);
  }
  return traj;
}

namespace {

void record_violation(AuditReport::Check& check, std::int64_t t, const std::string& detail) {
  if (!check.pass) return;
  check.pass = false;
  check.first_violation = t;
  check.detail = detail;
}

}  // namespace

AuditReport audit(const McnTrajectory& traj) {
  const int L = traj.L;
  const std::size_t n = class_count(L);
  const std::size_t steps = traj.states.size();
  if (steps == 0) throw std::invalid_argument("audit: empty trajectory");
  if (traj.arrivals_cum.size() != steps || traj.services_cum.size() != steps ||
      traj.routing.size() != n)
    throw std::invalid_argument("audit: bookkeeping arrays do not match the state count");

  // Prefix sums of onward routings per ring class: onward_prefix[c][k] =
  // customers among the first k completions that stayed in the network.
  std::vector<std::vector<std::int64_t>> onward_prefix(n);
  for (std::size_t c = 0; c < n; ++c) {
    onward_prefix[c].resize(traj.routing[c].size() + 1, 0);
    for (std::size_t k = 0; k < traj.routing[c].size(); ++k)
      onward_prefix[c][k + 1] = onward_prefix[c][k] + (traj.routing[c][k] ? 1 : 0);
  }

  AuditReport report;
  auto& eq = report.equations;

  for (std::size_t ti = 0; ti < steps; ++ti) {
    const auto t = static_cast<std::int64_t>(ti);
    const McnState& st = traj.states[ti];

    for (int i = 0; i < L; ++i) {
      std::int64_t t_station = 0;   // sum_j T_ij(t)
      std::int64_t t_priority = 0;  // sum_{j>=1} T_ij(t)
      for (int tag = 0; tag <= L; ++tag) {
        const std::size_t c = class_index(L, i, tag);
        const std::int64_t q_t = st.q[c];
        const std::int64_t t_c = traj.services_cum[ti][c];

        // Equation 1: flow balance. Each class has exactly one upstream
        // feeder: entry class (prev, 0) feeds tag prev+1, ring class
        // (prev, tag) feeds tag `tag`.
        const int prev = (i + L - 1) % L;
        std::int64_t inflow = 0;
        if (tag == 0) {
          inflow = traj.arrivals_cum[ti][static_cast<std::size_t>(i)];
        } else {
          if (tag == prev + 1) inflow += traj.services_cum[ti][class_index(L, prev, 0)];
          const std::size_t feeder = class_index(L, prev, tag);
          const std::int64_t completions = traj.services_cum[ti][feeder];
          if (completions < 0 ||
              completions > static_cast<std::int64_t>(traj.routing[feeder].size()))
            throw std::invalid_argument(
                "audit: service count exceeds recorded routing history for class (" +
                std::to_string(prev) + "," + std::to_string(tag) + ")");
          inflow += onward_prefix[feeder][static_cast<std::size_t>(completions)];
        }
        const std::int64_t expected = traj.states[0].q[c] + inflow - t_c;
        if (q_t != expected)
          record_violation(eq[0], t,
                           "class (" + std::to_string(i) + "," + std::to_string(tag) +
                               "): queue " + std::to_string(q_t) + " != balance " +
                               std::to_string(expected));

        // Equation 2: nonnegativity and unit increments.
        if (q_t < 0)
          record_violation(eq[1], t, "class (" + std::to_string(i) + "," + std::to_string(tag) +
                                         ") negative");
        if (ti + 1 < steps) {
          const std::int64_t dq = traj.states[ti + 1].q[c] - q_t;
          if (dq < -1 || dq > 1)
            record_violation(eq[1], t + 1,
                             "class (" + std::to_string(i) + "," + std::to_string(tag) +
                                 ") jumped by " + std::to_string(dq));
        }

        // Equation 3: T starts at zero, never decreases, unit increments.
        if (ti == 0 && t_c != 0)
          record_violation(eq[2], 0, "T(0) nonzero for class (" + std::to_string(i) + "," +
                                         std::to_string(tag) + ")");
        if (ti + 1 < steps) {
          const std::int64_t dt_c = traj.services_cum[ti + 1][c] - t_c;
          if (dt_c < 0 || dt_c > 1)
            record_violation(eq[2], t + 1,
                             "T increment " + std::to_string(dt_c) + " for class (" +
                                 std::to_string(i) + "," + std::to_string(tag) + ")");
        }

        t_station += t_c;
        if (tag >= 1) t_priority += t_c;
      }

      // Equations 4, 5, 6 are per-station statements about idleness.
      if (ti + 1 < steps) {
        std::int64_t t_station_next = 0;
        std::int64_t t_priority_next = 0;
        std::int64_t queue_total = 0;
        std::int64_t ring_total = 0;
        for (int tag = 0; tag <= L; ++tag) {
          const std::size_t c = class_index(L, i, tag);
          t_station_next += traj.services_cum[ti + 1][c];
          if (tag >= 1) {
            t_priority_next += traj.services_cum[ti + 1][c];
            ring_total += st.q[c];
          }
          queue_total += st.q[c];
        }
        const std::int64_t di = 1 - (t_station_next - t_station);
        if (di < 0)
          record_violation(eq[3], t + 1, "station " + std::to_string(i) +
                                             " served more than one customer in a step");
        if (di > 0 && queue_total > 0)
          record_violation(eq[4], t, "station " + std::to_string(i) + " idled while holding " +
                                         std::to_string(queue_total) + " customers");
        const std::int64_t di0 = 1 - (t_priority_next - t_priority);
        if (di0 > 0 && ring_total > 0)
          record_violation(eq[5], t, "station " + std::to_string(i) +
                                         " skipped its ring customer");
      }
    }
  }
  return report;
}

}  // namespace ringstab
