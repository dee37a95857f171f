#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "ringstab/analytics.hpp"
#include "ringstab/coupling.hpp"
#include "ringstab/fluid.hpp"
#include "ringstab/mcn.hpp"
#include "ringstab/params.hpp"
#include "ringstab/ring.hpp"
#include "ringstab/slotted.hpp"
#include "ringstab/transient.hpp"

namespace ringstab {

NLOHMANN_JSON_SERIALIZE_ENUM(Verdict, {
                                          {Verdict::Stable, "Stable"},
                                          {Verdict::Unstable, "Unstable"},
                                          {Verdict::Boundary, "Boundary"},
                                      })

// nlohmann hooks: `nlohmann::json j = value;` and `j.get<T>()`.
// Matrices are arrays of equally long row arrays.
void to_json(nlohmann::json& j, const Matrix& m);
void from_json(const nlohmann::json& j, Matrix& m);

// Keys: L, p, q, zero_rate_types (optional on input, default empty).
// Parsing validates through ParameterSetting::create and throws
// std::invalid_argument with the violated constraint.
void to_json(nlohmann::json& j, const ParameterSetting& ps);
void from_json(const nlohmann::json& j, ParameterSetting& ps);

// Keys: n, c, arrival_rates, dest. Parsing validates.
void to_json(nlohmann::json& j, const SlottedSpec& spec);
void from_json(const nlohmann::json& j, SlottedSpec& spec);

void to_json(nlohmann::json& j, const RingState& state);
void to_json(nlohmann::json& j, const McnState& state);

// Report serializers (one-way). Optional fields are emitted as null when
// absent so every document carries the full key set.
void to_json(nlohmann::json& j, const Halfspace& h);
void to_json(nlohmann::json& j, const VisitMatrix& vm);
void to_json(nlohmann::json& j, const LoadProfile& profile);
void to_json(nlohmann::json& j, const StabilityReport& report);
void to_json(nlohmann::json& j, const StabilityRegion& region);
void to_json(nlohmann::json& j, const CouplingReport& report);
void to_json(nlohmann::json& j, const LegacyCouplingReport& report);
void to_json(nlohmann::json& j, const AuditReport& report);
void to_json(nlohmann::json& j, const TransientProfile& profile);
void to_json(nlohmann::json& j, const GrowthComparison& comparison);
void to_json(nlohmann::json& j, const SlottedMapping& mapping);

// CSV writers. Every file starts with a header row; floating-point values
// are printed with round-trip precision so re-runs are byte-identical.

/// t, queue_<i>, cell_<i>, arrivals_<i>, departures_<i> per snapshot.
void write_ring_trajectory_csv(std::ostream& out, const RingTrajectory& traj);

/// p0, p1 rows of the sampled boundary polyline (L == 2 regions).
void write_region_csv(std::ostream& out, const StabilityRegion& region);

/// t, entry_<i> (scaled entry-queue mass), ring_<i> (scaled ring mass at
/// station i) and, when residual is given, r_<i>.
void write_scaled_trajectory_csv(std::ostream& out, const ScaledTrajectory& scaled,
                                 const ResidualWork* residual = nullptr);

}  // namespace ringstab
