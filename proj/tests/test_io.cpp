#include "doctest.h"
#include "ringstab/io.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace ringstab;
using nlohmann::json;

namespace {

ParameterSetting two_cell_reference() {
  Matrix q(2, 2, 0.0);
  q(0, 0) = 0.75;
  q(0, 1) = 0.75;
  q(1, 0) = 0.5;
  q(1, 1) = 0.5;
  return ParameterSetting::create(2, {0.3, 0.3}, q);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("parameter settings round-trip through json") {
  auto ps = two_cell_reference();
  ps.zero_rate_types = {};
  json j = ps;
  CHECK(j["L"] == 2);
  CHECK(j["p"] == json::array({0.3, 0.3}));
  CHECK(j["q"][0] == json::array({0.75, 0.75}));
  auto back = j.get<ParameterSetting>();
  CHECK(back.L == ps.L);
  CHECK(back.p == ps.p);
  CHECK(back.q == ps.q);
}

TEST_CASE("deserialization validates the setting") {
  json j = json::parse(R"({"L": 1, "p": [1.5], "q": [[0.5]]})");
  CHECK_THROWS_AS(j.get<ParameterSetting>(), std::invalid_argument);
  json missing = json::parse(R"({"L": 1, "p": [0.1]})");
  CHECK_THROWS_AS(missing.get<ParameterSetting>(), json::exception);
  json ragged = json::parse(R"({"L": 2, "p": [0.1, 0.1], "q": [[0.5, 0.5], [0.5]]})");
  CHECK_THROWS_AS(ragged.get<ParameterSetting>(), std::invalid_argument);
}

TEST_CASE("zero-rate labels survive the round trip") {
  Matrix q(2, 2, 0.5);
  q(0, 1) = 0.0;
  q(1, 1) = 0.0;
  auto ps = ParameterSetting::create(2, {0.1, 0.0}, q, {2});
  json j = ps;
  CHECK(j["zero_rate_types"] == json::array({2}));
  auto back = j.get<ParameterSetting>();
  CHECK(back.zero_rate(2));
}

TEST_CASE("slotted specs round-trip through json") {
  SlottedSpec spec;
  spec.n = 2;
  spec.c = 3;
  spec.arrival_rates = {0.2, 0.1};
  spec.dest = Matrix(2, 2, 0.0);
  spec.dest(0, 1) = 1.0;
  spec.dest(1, 0) = 1.0;
  json j = spec;
  auto back = j.get<SlottedSpec>();
  CHECK(back.n == 2);
  CHECK(back.c == 3);
  CHECK(back.arrival_rates == spec.arrival_rates);
  CHECK(back.dest == spec.dest);
  json bad = j;
  bad["dest"][0][0] = 0.5;
  CHECK_THROWS_AS(bad.get<SlottedSpec>(), std::invalid_argument);
}

TEST_CASE("states serialize with their structure visible") {
  RingState s = RingState::empty(2);
  s.cells = {2, 0};
  s.queues = {3, 1};
  json jr = s;
  CHECK(jr["cells"] == json::array({2, 0}));
  CHECK(jr["queues"] == json::array({3, 1}));
  McnState m = McnState::empty(2);
  m.at(0, 0) = 5;
  json jm = m;
  CHECK(jm["L"] == 2);
  CHECK(jm["q"][0] == 5);
}

TEST_CASE("verdicts serialize as strings") {
  CHECK(json(Verdict::Stable) == "Stable");
  CHECK(json(Verdict::Unstable) == "Unstable");
  CHECK(json(Verdict::Boundary) == "Boundary");
}

TEST_CASE("stability report carries null delta when absent") {
  StabilityReport r;
  r.verdict = Verdict::Unstable;
  r.margins = {-0.1};
  r.rho_bar = 1.2;
  r.B = 2.0;
  r.threshold = 1.0;
  json j = r;
  CHECK(j["delta"].is_null());
  CHECK(j["verdict"] == "Unstable");
  r.delta = 4.5;
  json j2 = r;
  CHECK(j2["delta"] == 4.5);
}

TEST_CASE("audit report numbers its equations from one") {
  AuditReport r;
  r.equations[2].pass = false;
  r.equations[2].first_violation = 17;
  r.equations[2].detail = "x";
  json j = r;
  CHECK(j["pass"] == false);
  REQUIRE(j["equations"].size() == 6);
  CHECK(j["equations"][0]["equation"] == 1);
  CHECK(j["equations"][2]["equation"] == 3);
  CHECK(j["equations"][2]["pass"] == false);
  CHECK(j["equations"][2]["first_violation"] == 17);
  CHECK(j["equations"][0]["first_violation"].is_null());
}

TEST_CASE("ring trajectory csv has one row per snapshot") {
  auto ps = two_cell_reference();
  UniformField field(3, 2);
  auto traj = run(RingState::empty(2), ps, field, 20, 5);
  std::ostringstream out;
  write_ring_trajectory_csv(out, traj);
  auto lines = lines_of(out.str());
  REQUIRE(lines.size() == traj.times.size() + 1);
  CHECK(lines[0] ==
        "t,queue_0,queue_1,cell_0,cell_1,arrivals_0,arrivals_1,departures_0,departures_1");
  CHECK(lines[1].substr(0, 2) == "0,");
}

TEST_CASE("region csv traces the boundary") {
  auto region = stability_region(two_cell_reference(), 8);
  std::ostringstream out;
  write_region_csv(out, region);
  auto lines = lines_of(out.str());
  REQUIRE(lines.size() == region.boundary.size() + 1);
  CHECK(lines[0] == "p0,p1");
}

TEST_CASE("scaled trajectory csv includes residual columns when given") {
  auto ps = two_cell_reference();
  McnState initial = McnState::empty(2);
  initial.at(0, 0) = 10;
  initial.at(1, 0) = 10;
  UniformField field(4, 2);
  auto traj = run_mcn(initial, ps, field, 100);
  auto scaled = scale_trajectory(traj, 0.5);
  std::ostringstream bare;
  write_scaled_trajectory_csv(bare, scaled);
  auto bare_lines = lines_of(bare.str());
  REQUIRE(bare_lines.size() == scaled.times.size() + 1);
  CHECK(bare_lines[0] == "t,entry_0,entry_1,ring_0,ring_1");

  auto vm = visit_matrix(ps);
  auto rw = residual_work(scaled, vm, ps);
  std::ostringstream full;
  write_scaled_trajectory_csv(full, scaled, &rw);
  auto full_lines = lines_of(full.str());
  CHECK(full_lines[0] == "t,entry_0,entry_1,ring_0,ring_1,r_0,r_1");
  REQUIRE(full_lines.size() == scaled.times.size() + 1);
}
