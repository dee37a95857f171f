#pragma once

#include <cstdint>
#include <vector>

#include "ringstab/analytics.hpp"
#include "ringstab/params.hpp"

namespace ringstab {

/// Long-run growth profile of a (possibly overloaded) setting, from the
/// fixed point of v = G(v), G(v)_i = 1 - sum_j b(i,j) min(v_j, p_j).
/// pi_tilde0[i] solves the system; queues of cells with p[i] > pi_tilde0[i]
/// grow linearly at rate growth[i] = p[i] - pi_tilde0[i], the others stay
/// stable. When the setting is stable the fixed point coincides with the
/// stationary empty-cell probabilities and `unstable` is empty.
struct TransientProfile {
  std::vector<double> pi_tilde0;
  std::vector<int> unstable;  // 0-based cells with p > pi_tilde0
  std::vector<int> stable;    // 0-based cells with p < pi_tilde0
  std::vector<double> growth; // per cell, 0 for stable cells
  double residual = 0.0;
  std::int64_t iterations = 0;
  /// Some |p[i] - pi_tilde0[i]| <= 1e-9: the classification is fragile.
  bool boundary_flag = false;
  /// Random restarts found a solution differing by more than 1e-6: the
  /// fixed point is not unique and the returned profile is one of several.
  bool multiple_solutions = false;
};

/// Damped fixed-point solve v <- (v + G(v))/2 from the all-ones start,
/// stopping when max_i |v_i - G(v)_i| <= tol. If the half-damped iteration
/// has not converged after max_iter steps it is retried with the smaller
/// step 1/(1 + max row sum of the visit matrix), which tames settings whose
/// visit counts make the half step overshoot. Throws std::runtime_error if
/// neither pass converges. Ten seeded random restarts probe for alternative
/// fixed points.
TransientProfile solve_fixed_point(const ParameterSetting& ps, std::int64_t max_iter = 1000000,
                                   double tol = 1e-10);

/// Measured queue growth against the profile's prediction: `seeds`
/// independent runs of the cellular simulator over `horizon` steps from the
/// empty state, slopes fitted over the last 90% of each run.
struct GrowthComparison {
  std::vector<double> mean_slopes;     // per cell, averaged over seeds
  std::vector<double> predicted;      // profile growth rates
  std::vector<double> std_errors;     // standard error of the mean slope
};

GrowthComparison compare_with_simulation(const ParameterSetting& ps,
                                         const TransientProfile& profile, std::int64_t horizon,
                                         int seeds);

}  // namespace ringstab
