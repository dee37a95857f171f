#include "ringstab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ringstab/io.hpp"

namespace ringstab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Flag values as parsed; unset flags fall back to the config file.
struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::int64_t> horizon;
  std::optional<int> replications;
  std::optional<std::string> out_dir;
  std::optional<std::string> model;
};

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
}

int resolve_jobs(const std::optional<int>& flag, const json& cfg) {
  int jobs = 1;
  if (flag) {
    jobs = *flag;
  } else if (const char* env = std::getenv("RINGSTAB_JOBS")) {
    try {
      jobs = std::stoi(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("RINGSTAB_JOBS must be an integer");
    }
  } else if (cfg.contains("jobs")) {
    jobs = cfg.at("jobs").get<int>();
  }
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  return jobs;
}

RunConfig resolve(const std::string& subcommand, const json& cfg, const Flags& flags) {
  RunConfig rc;
  rc.subcommand = subcommand;
  rc.model = flags.model ? *flags.model : cfg.value("model", std::string("ring"));
  if (rc.model != "ring" && rc.model != "ring-legacy" && rc.model != "mcn")
    throw std::invalid_argument("model must be one of ring, ring-legacy, mcn");
  rc.seed = flags.seed ? *flags.seed : cfg.value("seed", std::uint64_t{1});
  rc.horizon = flags.horizon ? *flags.horizon : cfg.value("horizon", std::int64_t{100000});
  if (rc.horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  rc.replications = flags.replications ? *flags.replications : cfg.value("replications", 1);
  if (rc.replications < 1) throw std::invalid_argument("replications must be >= 1");
  rc.jobs = resolve_jobs(flags.jobs, cfg);
  rc.burn_in = cfg.value("burn_in", std::int64_t{-1});
  if (rc.burn_in < 0) rc.burn_in = rc.horizon / 10;
  rc.record_every = cfg.value("record_every", std::int64_t{0});
  if (rc.record_every == 0) rc.record_every = std::max<std::int64_t>(1, rc.horizon / 1000);
  if (rc.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
  rc.grid = cfg.value("grid", 0.05);
  if (!(rc.grid > 0.0)) throw std::invalid_argument("grid must be > 0");
  rc.epsilon = cfg.value("epsilon", 0.05);
  if (!(rc.epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  rc.tol = cfg.value("tol", 0.05);
  if (!(rc.tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  rc.initial_norm = cfg.value("initial_norm", 0.0);
  if (!(rc.initial_norm >= 0.0)) throw std::invalid_argument("initial_norm must be >= 0");
  rc.initial_queues = cfg.value("initial_queues", std::vector<std::int64_t>{});
  if (cfg.contains("threshold") && !cfg.at("threshold").is_null()) {
    rc.threshold = cfg.at("threshold").get<double>();
    if (!(*rc.threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
  }
  if (cfg.contains("max_scaled_time") && !cfg.at("max_scaled_time").is_null()) {
    rc.max_scaled_time = cfg.at("max_scaled_time").get<double>();
    if (!(*rc.max_scaled_time > 0.0))
      throw std::invalid_argument("max_scaled_time must be > 0");
  }
  rc.resolution = cfg.value("resolution", 256);
  if (rc.resolution < 2) throw std::invalid_argument("resolution must be >= 2");
  rc.layout = cfg.value("layout", std::string("auto"));
  if (rc.layout != "auto" && rc.layout != "simple" && rc.layout != "general")
    throw std::invalid_argument("layout must be one of auto, simple, general");
  rc.audit = cfg.value("audit", true);
  rc.out_dir = flags.out_dir ? *flags.out_dir : cfg.value("out", std::string{});
  return rc;
}

// Runs fn(0..count-1) on a pool of `jobs` threads. The first exception wins
// and is rethrown on the caller after the pool drains.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

void write_sidecar(const std::string& dir, const std::string& name,
                   const std::function<void(std::ostream&)>& body) {
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write sidecar file: " + path.string());
  body(out);
}

RingState ring_initial(const ParameterSetting& ps, const std::vector<std::int64_t>& queues) {
  RingState state = RingState::empty(ps.L);
  if (!queues.empty()) {
    if (static_cast<int>(queues.size()) != ps.L)
      throw std::invalid_argument("initial_queues must have length L");
    for (std::int64_t v : queues)
      if (v < 0) throw std::invalid_argument("initial_queues must be non-negative");
    state.queues = queues;
  }
  return state;
}

McnState mcn_initial(const ParameterSetting& ps, const std::vector<std::int64_t>& queues,
                     double norm) {
  McnState state = McnState::empty(ps.L);
  if (!queues.empty()) {
    if (static_cast<int>(queues.size()) != ps.L)
      throw std::invalid_argument("initial_queues must have length L");
    for (int i = 0; i < ps.L; ++i) {
      if (queues[static_cast<std::size_t>(i)] < 0)
        throw std::invalid_argument("initial_queues must be non-negative");
      state.at(i, 0) = queues[static_cast<std::size_t>(i)];
    }
  } else if (norm > 0.0) {
    const auto total = static_cast<std::int64_t>(std::llround(norm));
    const std::int64_t base = total / ps.L;
    const std::int64_t rem = total % ps.L;
    for (int i = 0; i < ps.L; ++i) state.at(i, 0) = base + (i < rem ? 1 : 0);
  }
  return state;
}

// Full-resolution network paths hold ~2 class-space vectors per step.
void check_mcn_budget(const ParameterSetting& ps, std::int64_t horizon) {
  const auto per_step = static_cast<std::int64_t>(2 * class_count(ps.L) + ps.L);
  if (horizon * per_step > 40'000'000)
    throw std::invalid_argument(
        "this run stores full-resolution network paths; horizon times class "
        "count exceeds the memory budget, reduce one of them");
}

void emit(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

int cmd_analyze(const json& cfg, const RunConfig& rc, std::ostream& out) {
  const auto ps = cfg.get<ParameterSetting>();
  const StabilityReport report = stability_verdict(ps, rc.threshold);
  const LoadProfile profile = load_profile(ps);
  const VisitMatrix vm = visit_matrix(ps);
  json doc{{"command", "analyze"}, {"parameters", ps},  {"report", report},
           {"load", profile},      {"visit", vm},       {"region", nullptr}};
  const bool finite = std::none_of(vm.infinite_column.begin(), vm.infinite_column.end(),
                                   [](bool flagged) { return flagged; });
  if (finite) {
    const StabilityRegion region = stability_region(ps, rc.resolution);
    doc["region"] = region;
    if (!rc.out_dir.empty() && !region.boundary.empty())
      write_sidecar(rc.out_dir, "region.csv",
                    [&](std::ostream& f) { write_region_csv(f, region); });
  }
  emit(out, doc);
  return 0;
}

int cmd_region(const json& cfg, const RunConfig& rc, std::ostream& out) {
  const auto ps = cfg.get<ParameterSetting>();
  const StabilityRegion region = stability_region(ps, rc.resolution);
  const json doc{{"command", "region"}, {"parameters", ps}, {"region", region}};
  if (!rc.out_dir.empty() && !region.boundary.empty())
    write_sidecar(rc.out_dir, "region.csv",
                  [&](std::ostream& f) { write_region_csv(f, region); });
  emit(out, doc);
  return 0;
}

int cmd_simulate(const json& cfg, const RunConfig& rc, std::ostream& out) {
  const auto ps = cfg.get<ParameterSetting>();
  const int reps = rc.replications;
  std::vector<json> runs(static_cast<std::size_t>(reps));
  std::vector<std::vector<std::int64_t>> finals(static_cast<std::size_t>(reps));
  bool checks_pass = true;

  if (rc.model == "mcn") {
    check_mcn_budget(ps, rc.horizon);
    const McnState init = mcn_initial(ps, rc.initial_queues, 0.0);
    std::atomic<bool> audit_pass{true};
    parallel_for(reps, rc.jobs, [&](int r) {
      const std::uint64_t seed = rc.seed + static_cast<std::uint64_t>(r);
      const UniformField field(seed, ps.L);
      const McnTrajectory traj = run_mcn(init, ps, field, rc.horizon);
      json rec{{"seed", seed}, {"final", traj.states.back()}, {"audit", nullptr}};
      if (rc.audit) {
        const AuditReport report = audit(traj);
        if (!report.pass()) audit_pass = false;
        rec["audit"] = report;
      }
      std::vector<std::int64_t> q(static_cast<std::size_t>(ps.L));
      for (int i = 0; i < ps.L; ++i) q[static_cast<std::size_t>(i)] = traj.states.back().at(i, 0);
      finals[static_cast<std::size_t>(r)] = std::move(q);
      runs[static_cast<std::size_t>(r)] = std::move(rec);
    });
    checks_pass = audit_pass.load();
  } else {
    const RingModel model = rc.model == "ring" ? RingModel::kCurrent : RingModel::kLegacy;
    const RingState init = ring_initial(ps, rc.initial_queues);
    const bool stats = rc.horizon >= 2 && rc.burn_in < rc.horizon;
    parallel_for(reps, rc.jobs, [&](int r) {
      const std::uint64_t seed = rc.seed + static_cast<std::uint64_t>(r);
      const UniformField field(seed, ps.L);
      const RingTrajectory traj = run(init, ps, field, rc.horizon, rc.record_every, model);
      json rec{{"seed", seed},
               {"final_queues", traj.states.back().queues},
               {"arrivals", traj.arrivals.back()},
               {"departures", traj.departures.back()},
               {"slopes", nullptr},
               {"marginals", nullptr}};
      if (stats) {
        rec["slopes"] = queue_growth_slopes(traj, rc.horizon - rc.burn_in);
        rec["marginals"] = estimate_marginals(traj, rc.burn_in);
      }
      if (!rc.out_dir.empty())
        write_sidecar(rc.out_dir, "trajectory_seed" + std::to_string(seed) + ".csv",
                      [&](std::ostream& f) { write_ring_trajectory_csv(f, traj); });
      finals[static_cast<std::size_t>(r)] = traj.states.back().queues;
      runs[static_cast<std::size_t>(r)] = std::move(rec);
    });
  }

  std::vector<double> mean_final(static_cast<std::size_t>(ps.L), 0.0);
  for (const auto& q : finals)
    for (int i = 0; i < ps.L; ++i)
      mean_final[static_cast<std::size_t>(i)] +=
          static_cast<double>(q[static_cast<std::size_t>(i)]) / reps;

  const json doc{{"command", "simulate"},
                 {"model", rc.model},
                 {"horizon", rc.horizon},
                 {"record_every", rc.record_every},
                 {"burn_in", rc.burn_in},
                 {"runs", runs},
                 {"aggregate", json{{"mean_final_queues", mean_final}}},
                 {"pass", checks_pass}};
  emit(out, doc);
  return checks_pass ? 0 : 2;
}

int cmd_couple(const json& cfg, const RunConfig& rc, std::ostream& out) {
  if (rc.model == "mcn")
    throw std::invalid_argument(
        "couple runs the two views side by side: --model ring checks the "
        "cellular/network bijection, --model ring-legacy the legacy offset");
  const auto ps = cfg.get<ParameterSetting>();
  const RingState init = ring_initial(ps, rc.initial_queues);
  const int reps = rc.replications;
  std::vector<json> runs(static_cast<std::size_t>(reps));
  std::atomic<bool> all_pass{true};
  parallel_for(reps, rc.jobs, [&](int r) {
    const std::uint64_t seed = rc.seed + static_cast<std::uint64_t>(r);
    const UniformField field(seed, ps.L);
    json rec;
    bool pass = false;
    if (rc.model == "ring") {
      const CouplingReport report = coupled_run(init, ps, field, rc.horizon);
      pass = report.pass;
      rec = report;
    } else {
      const LegacyCouplingReport report = legacy_coupled_run(init, ps, field, rc.horizon);
      pass = report.pass;
      rec = report;
    }
    rec["seed"] = seed;
    if (!pass) all_pass = false;
    runs[static_cast<std::size_t>(r)] = std::move(rec);
  });
  const json doc{{"command", "couple"},
                 {"model", rc.model},
                 {"horizon", rc.horizon},
                 {"runs", runs},
                 {"pass", all_pass.load()}};
  emit(out, doc);
  return all_pass.load() ? 0 : 2;
}

int cmd_fluid(const json& cfg, const RunConfig& rc, std::ostream& out) {
  const auto ps = cfg.get<ParameterSetting>();
  const McnState init = mcn_initial(ps, rc.initial_queues, rc.initial_norm);
  std::int64_t total = 0;
  for (std::int64_t v : init.q) total += v;
  if (total <= 0)
    throw std::invalid_argument(
        "fluid needs initial queue mass: set initial_norm or initial_queues");
  const double t_max = rc.max_scaled_time
                           ? *rc.max_scaled_time
                           : static_cast<double>(rc.horizon) / static_cast<double>(total);
  if (!(t_max > 0.0)) throw std::invalid_argument("fluid needs a positive scaled window");
  const std::int64_t horizon =
      rc.max_scaled_time
          ? static_cast<std::int64_t>(std::ceil(static_cast<double>(total) * t_max))
          : rc.horizon;
  check_mcn_budget(ps, horizon);

  const VisitMatrix vm = visit_matrix(ps);
  const StabilityReport stability = stability_verdict(ps, rc.threshold);
  const int reps = rc.replications;
  std::vector<json> runs(static_cast<std::size_t>(reps));
  std::atomic<bool> clean{true};
  parallel_for(reps, rc.jobs, [&](int r) {
    const std::uint64_t seed = rc.seed + static_cast<std::uint64_t>(r);
    const UniformField field(seed, ps.L);
    const McnTrajectory traj = run_mcn(init, ps, field, horizon);
    const ScaledTrajectory scaled = scale_trajectory(traj, rc.grid, t_max);
    const ResidualWork residual = residual_work(scaled, vm, ps);
    const std::optional<double> drained = drain_time(scaled, rc.epsilon);
    const std::vector<CircularityViolation> violations =
        circularity_check(scaled, residual, rc.tol);
    json rec{{"seed", seed},
             {"drain_time", drained ? json(*drained) : json(nullptr)},
             {"max_route_gap", residual.max_route_gap},
             {"violations", violations.size()},
             {"first_violation", nullptr}};
    if (!violations.empty()) {
      clean = false;
      rec["first_violation"] = json{{"station", violations.front().station},
                                    {"time", violations.front().time},
                                    {"gap", violations.front().gap}};
    }
    if (!rc.out_dir.empty())
      write_sidecar(rc.out_dir, "fluid_seed" + std::to_string(seed) + ".csv",
                    [&](std::ostream& f) { write_scaled_trajectory_csv(f, scaled, &residual); });
    runs[static_cast<std::size_t>(r)] = std::move(rec);
  });
  const json doc{{"command", "fluid"},
                 {"initial_mass", total},
                 {"grid", rc.grid},
                 {"epsilon", rc.epsilon},
                 {"tol", rc.tol},
                 {"max_scaled_time", t_max},
                 {"delta", stability.delta ? json(*stability.delta) : json(nullptr)},
                 {"runs", runs},
                 {"pass", clean.load()}};
  emit(out, doc);
  return clean.load() ? 0 : 2;
}

int cmd_transient(const json& cfg, const RunConfig& rc, std::ostream& out) {
  const auto ps = cfg.get<ParameterSetting>();
  const TransientProfile profile = solve_fixed_point(ps);
  json doc{{"command", "transient"}, {"profile", profile}, {"comparison", nullptr}};
  if (rc.horizon >= 10) {
    const int reps = rc.replications;
    const std::int64_t record_every = std::max<std::int64_t>(1, rc.horizon / 1000);
    const std::int64_t window = rc.horizon - rc.horizon / 10;
    std::vector<json> runs(static_cast<std::size_t>(reps));
    std::vector<std::vector<double>> slopes_all(static_cast<std::size_t>(reps));
    parallel_for(reps, rc.jobs, [&](int r) {
      const std::uint64_t seed = rc.seed + static_cast<std::uint64_t>(r);
      const UniformField field(seed, ps.L);
      const RingTrajectory traj =
          run(RingState::empty(ps.L), ps, field, rc.horizon, record_every);
      std::vector<double> slopes = queue_growth_slopes(traj, window);
      runs[static_cast<std::size_t>(r)] = json{{"seed", seed}, {"slopes", slopes}};
      slopes_all[static_cast<std::size_t>(r)] = std::move(slopes);
    });
    std::vector<double> mean(static_cast<std::size_t>(ps.L), 0.0);
    std::vector<double> se(static_cast<std::size_t>(ps.L), 0.0);
    for (const auto& s : slopes_all)
      for (int i = 0; i < ps.L; ++i) mean[static_cast<std::size_t>(i)] += s[static_cast<std::size_t>(i)] / reps;
    if (reps >= 2) {
      for (const auto& s : slopes_all)
        for (int i = 0; i < ps.L; ++i) {
          const double d = s[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)];
          se[static_cast<std::size_t>(i)] += d * d;
        }
      for (int i = 0; i < ps.L; ++i)
        se[static_cast<std::size_t>(i)] =
            std::sqrt(se[static_cast<std::size_t>(i)] / (static_cast<double>(reps) * (reps - 1)));
    }
    doc["comparison"] = json{{"horizon", rc.horizon},
                             {"per_seed", runs},
                             {"mean_slopes", mean},
                             {"std_errors", se},
                             {"predicted", profile.growth}};
  }
  emit(out, doc);
  return 0;
}

int cmd_slotted_map(const json& cfg, const RunConfig& rc, std::ostream& out) {
  const auto spec = cfg.get<SlottedSpec>();
  std::string layout = rc.layout;
  if (layout == "auto") layout = spec.n <= spec.c ? "simple" : "general";
  const SlottedMapping mapping = layout == "simple" ? map_simple(spec) : map_general(spec);
  const StabilityReport report = stability_verdict(mapping.ps, 1.0 / mapping.m);
  const json doc{{"command", "slotted-map"},
                 {"spec", spec},
                 {"layout", layout},
                 {"mapping", mapping},
                 {"report", report}};
  emit(out, doc);
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analyzer and simulator for a stochastic ring network with entry queues"};
  app.name("ringstab");
  app.require_subcommand(1);

  Flags flags;
  const auto add_common = [&](CLI::App* sub, bool with_model) {
    sub->add_option("--config", flags.config_path, "JSON configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "base seed of the uniform field");
    sub->add_option("--jobs", flags.jobs,
                    "worker threads for replications (RINGSTAB_JOBS as fallback)");
    sub->add_option("--horizon", flags.horizon, "simulation steps");
    sub->add_option("--replications", flags.replications, "independent seeded runs");
    sub->add_option("--out", flags.out_dir, "directory for CSV sidecar files");
    if (with_model)
      sub->add_option("--model", flags.model, "ring | ring-legacy | mcn");
  };

  add_common(app.add_subcommand("analyze", "stability verdict, loads, marginals, visit counts"),
             false);
  add_common(app.add_subcommand("region", "exact stability region in arrival-rate space"),
             false);
  add_common(app.add_subcommand("simulate", "seeded simulation runs with summary statistics"),
             true);
  add_common(app.add_subcommand("couple", "step two model views in lockstep and compare"),
             true);
  add_common(app.add_subcommand("fluid", "fluid-scaled drain analysis of a loaded start"),
             false);
  add_common(app.add_subcommand("transient", "fixed-point growth profile vs simulation"),
             false);
  add_common(app.add_subcommand("slotted-map", "translate a slotted-ring spec to ring parameters"),
             false);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    const json cfg = load_json_file(flags.config_path);
    const RunConfig rc = resolve(name, cfg, flags);
    if (!rc.out_dir.empty()) fs::create_directories(rc.out_dir);
    if (name == "analyze") return cmd_analyze(cfg, rc, out);
    if (name == "region") return cmd_region(cfg, rc, out);
    if (name == "simulate") return cmd_simulate(cfg, rc, out);
    if (name == "couple") return cmd_couple(cfg, rc, out);
    if (name == "fluid") return cmd_fluid(cfg, rc, out);
    if (name == "transient") return cmd_transient(cfg, rc, out);
    if (name == "slotted-map") return cmd_slotted_map(cfg, rc, out);
    err << "unknown subcommand: " << name << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "check failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ringstab
