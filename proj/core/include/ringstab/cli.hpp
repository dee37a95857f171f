#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ringstab {

/// Effective settings of one CLI invocation after merging, in order of
/// precedence, command-line flags, the RINGSTAB_JOBS environment variable
/// (jobs only), the config file, and built-in defaults.
struct RunConfig {
  std::string subcommand;
  std::string model = "ring";  // ring | ring-legacy | mcn
  std::uint64_t seed = 1;
  std::int64_t horizon = 100000;
  int replications = 1;
  int jobs = 1;
  std::int64_t burn_in = 0;       // window start for empirical marginals
  std::int64_t record_every = 1;  // snapshot spacing
  double grid = 0.05;             // fluid scaled-time grid step
  double epsilon = 0.05;          // fluid drain threshold
  double tol = 0.05;              // fluid circularity tolerance
  double initial_norm = 0.0;      // fluid initial queue mass, spread evenly
  std::vector<std::int64_t> initial_queues;  // explicit initial queues
  std::optional<double> threshold;           // stability threshold override
  std::optional<double> max_scaled_time;     // fluid horizon in scaled time
  int resolution = 256;                      // region boundary samples
  std::string layout = "auto";               // slotted-map: auto | simple | general
  bool audit = true;                         // run the audit on mcn paths
  std::string out_dir;                       // CSV sidecar directory, empty = none
};

/// Parses and dispatches one invocation. `args` holds the command-line
/// arguments without the program name, in natural order. Writes exactly one
/// JSON document to `out`, diagnostics to `err`, and CSV sidecars under the
/// --out directory when one is configured. Exit status: 0 on success, 1 on
/// configuration or validation errors, 2 when a requested check fails
/// (coupling divergence, audit violation, fluid circularity breach or
/// residual-work route disagreement).
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ringstab
