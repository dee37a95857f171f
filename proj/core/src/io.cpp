#include "ringstab/io.hpp"

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ringstab {
namespace {

using nlohmann::json;

json optional_int(const std::optional<std::int64_t>& v) {
  return v ? json(*v) : json(nullptr);
}

std::ostream& csv_float(std::ostream& out) {
  out << std::setprecision(17);
  return out;
}

}  // namespace

void to_json(json& j, const Matrix& m) {
  j = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
}

void from_json(const json& j, Matrix& m) {
  if (!j.is_array()) throw std::invalid_argument("matrix: expected an array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  if (rows > 0) {
    if (!j[0].is_array()) throw std::invalid_argument("matrix: rows must be arrays");
    cols = j[0].size();
  }
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw std::invalid_argument("matrix: rows must all have the same length");
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = j[r][c].get<double>();
  }
  m = std::move(out);
}

void to_json(json& j, const ParameterSetting& ps) {
  j = json{{"L", ps.L}, {"p", ps.p}, {"q", ps.q}, {"zero_rate_types", ps.zero_rate_types}};
}

void from_json(const json& j, ParameterSetting& ps) {
  std::set<int> zero_rate;
  if (j.contains("zero_rate_types")) j.at("zero_rate_types").get_to(zero_rate);
  ps = ParameterSetting::create(j.at("L").get<int>(), j.at("p").get<std::vector<double>>(),
                                j.at("q").get<Matrix>(), std::move(zero_rate));
}

void to_json(json& j, const SlottedSpec& spec) {
  j = json{{"n", spec.n}, {"c", spec.c}, {"arrival_rates", spec.arrival_rates},
           {"dest", spec.dest}};
}

void from_json(const json& j, SlottedSpec& spec) {
  SlottedSpec out;
  out.n = j.at("n").get<int>();
  out.c = j.at("c").get<int>();
  out.arrival_rates = j.at("arrival_rates").get<std::vector<double>>();
  out.dest = j.at("dest").get<Matrix>();
  out.validate();
  spec = std::move(out);
}

void to_json(json& j, const RingState& state) {
  j = json{{"cells", state.cells}, {"queues", state.queues}};
}

void to_json(json& j, const McnState& state) {
  j = json{{"L", state.L}, {"q", state.q}};
}

void to_json(json& j, const Halfspace& h) {
  j = json{{"coefficients", h.coefficients}, {"rhs", h.rhs}};
}

void to_json(json& j, const VisitMatrix& vm) {
  j = json{{"b", vm.b}, {"infinite_columns", vm.infinite_column}};
}

void to_json(json& j, const LoadProfile& profile) {
  j = json{{"pi", profile.pi}, {"lambda", profile.lambda}, {"rho", profile.rho}};
}

void to_json(json& j, const StabilityReport& report) {
  j = json{{"verdict", report.verdict},
           {"margins", report.margins},
           {"rho_bar", report.rho_bar},
           {"B", report.B},
           {"delta", report.delta ? json(*report.delta) : json(nullptr)},
           {"threshold", report.threshold}};
}

void to_json(json& j, const StabilityRegion& region) {
  json boundary = json::array();
  for (const auto& [x, y] : region.boundary) boundary.push_back(json::array({x, y}));
  j = json{{"inequalities", region.inequalities},
           {"intercepts", region.intercepts},
           {"boundary", std::move(boundary)}};
}

void to_json(json& j, const CouplingReport& report) {
  j = json{{"pass", report.pass},
           {"horizon", report.horizon},
           {"first_divergence", optional_int(report.first_divergence)},
           {"ring_state", report.ring_state ? json(*report.ring_state) : json(nullptr)},
           {"mcn_state", report.mcn_state ? json(*report.mcn_state) : json(nullptr)},
           {"mapped_ring_state",
            report.mapped_ring_state ? json(*report.mapped_ring_state) : json(nullptr)}};
}

void to_json(json& j, const LegacyCouplingReport& report) {
  j = json{{"pass", report.pass},
           {"horizon", report.horizon},
           {"first_violation", optional_int(report.first_violation)},
           {"max_queue_gap", report.max_queue_gap},
           {"current_state", report.current_state ? json(*report.current_state) : json(nullptr)},
           {"legacy_state", report.legacy_state ? json(*report.legacy_state) : json(nullptr)}};
}

void to_json(json& j, const AuditReport& report) {
  json equations = json::array();
  for (std::size_t k = 0; k < report.equations.size(); ++k) {
    const auto& check = report.equations[k];
    equations.push_back(json{{"equation", k + 1},
                             {"pass", check.pass},
                             {"first_violation", optional_int(check.first_violation)},
                             {"detail", check.detail}});
  }
  j = json{{"pass", report.pass()}, {"equations", std::move(equations)}};
}

void to_json(json& j, const TransientProfile& profile) {
  j = json{{"pi_tilde0", profile.pi_tilde0},
           {"unstable", profile.unstable},
           {"stable", profile.stable},
           {"growth", profile.growth},
           {"residual", profile.residual},
           {"iterations", profile.iterations},
           {"boundary_flag", profile.boundary_flag},
           {"multiple_solutions", profile.multiple_solutions}};
}

void to_json(json& j, const GrowthComparison& comparison) {
  j = json{{"mean_slopes", comparison.mean_slopes},
           {"predicted", comparison.predicted},
           {"std_errors", comparison.std_errors}};
}

void to_json(json& j, const SlottedMapping& mapping) {
  j = json{{"ps", mapping.ps},
           {"station_cells", mapping.station_cells},
           {"m", mapping.m},
           {"threshold", 1.0 / mapping.m},
           {"condition", mapping.condition}};
}

void write_ring_trajectory_csv(std::ostream& out, const RingTrajectory& traj) {
  const int L = traj.L();
  out << "t";
  for (int i = 0; i < L; ++i) out << ",queue_" << i;
  for (int i = 0; i < L; ++i) out << ",cell_" << i;
  for (int i = 0; i < L; ++i) out << ",arrivals_" << i;
  for (int i = 0; i < L; ++i) out << ",departures_" << i;
  out << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (int i = 0; i < L; ++i) out << ',' << traj.states[k].queues[static_cast<std::size_t>(i)];
    for (int i = 0; i < L; ++i) out << ',' << traj.states[k].cells[static_cast<std::size_t>(i)];
    for (int i = 0; i < L; ++i) out << ',' << traj.arrivals[k][static_cast<std::size_t>(i)];
    for (int i = 0; i < L; ++i) out << ',' << traj.departures[k][static_cast<std::size_t>(i)];
    out << "\n";
  }
}

void write_region_csv(std::ostream& out, const StabilityRegion& region) {
  csv_float(out) << "p0,p1\n";
  for (const auto& [x, y] : region.boundary) out << x << ',' << y << "\n";
}

void write_scaled_trajectory_csv(std::ostream& out, const ScaledTrajectory& scaled,
                                 const ResidualWork* residual) {
  const int L = scaled.L;
  csv_float(out) << "t";
  for (int i = 0; i < L; ++i) out << ",entry_" << i;
  for (int i = 0; i < L; ++i) out << ",ring_" << i;
  if (residual)
    for (int i = 0; i < L; ++i) out << ",r_" << i;
  out << "\n";
  for (std::size_t g = 0; g < scaled.times.size(); ++g) {
    out << scaled.times[g];
    for (int i = 0; i < L; ++i) out << ',' << scaled.sq[g][class_index(L, i, 0)];
    for (int i = 0; i < L; ++i) {
      double ring = 0.0;
      for (int tag = 1; tag <= L; ++tag) ring += scaled.sq[g][class_index(L, i, tag)];
      out << ',' << ring;
    }
    if (residual)
      for (int i = 0; i < L; ++i) out << ',' << residual->r[g][static_cast<std::size_t>(i)];
    out << "\n";
  }
}

}  // namespace ringstab
