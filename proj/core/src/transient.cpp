#include "ringstab/transient.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ringstab/ring.hpp"
#include "ringstab/uniform_field.hpp"

namespace ringstab {
namespace {

struct FixedPointSystem {
  int L;
  const VisitMatrix& vm;
  const std::vector<double>& p;

  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> out(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) {
      double occupied = 0.0;
      for (int type = 1; type <= L; ++type) {
        // Zero-rate columns carry no arrival mass: min(v, 0) vanishes.
        if (vm.column_infinite(type)) continue;
        occupied += vm.b(static_cast<std::size_t>(i), static_cast<std::size_t>(type - 1)) *
                    std::min(v[static_cast<std::size_t>(type - 1)], p[static_cast<std::size_t>(type - 1)]);
      }
      out[static_cast<std::size_t>(i)] = 1.0 - occupied;
    }
    return out;
  }

  double residual(const std::vector<double>& v) const {
    const std::vector<double> g = apply(v);
    double r = 0.0;
    for (int i = 0; i < L; ++i)
      r = std::max(r, std::abs(v[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)]));
    return r;
  }
};

struct IterationResult {
  std::vector<double> v;
  double residual = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

IterationResult iterate(const FixedPointSystem& sys, std::vector<double> v, double step,
                        std::int64_t max_iter, double tol) {
  IterationResult res;
  for (std::int64_t it = 0; it < max_iter; ++it) {
    const std::vector<double> g = sys.apply(v);
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) r = std::max(r, std::abs(v[i] - g[i]));
    if (r <= tol) {
      res.v = std::move(v);
      res.residual = r;
      res.iterations = it;
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (1.0 - step) * v[i] + step * g[i];
  }
  res.residual = sys.residual(v);
  res.v = std::move(v);
  res.iterations = max_iter;
  return res;
}

IterationResult solve_from(const FixedPointSystem& sys, const std::vector<double>& start,
                           std::int64_t max_iter, double tol) {
  IterationResult res = iterate(sys, start, 0.5, max_iter, tol);
  if (res.converged) return res;
  // Visit counts with large row sums make the half step overshoot; shrink
  // the step below the contraction threshold and retry.
  double row_sum_max = 0.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(sys.L); ++i) {
    double s = 0.0;
    for (int type = 1; type <= sys.L; ++type) {
      if (sys.vm.column_infinite(type)) continue;
      s += sys.vm.b(i, static_cast<std::size_t>(type - 1));
    }
    row_sum_max = std::max(row_sum_max, s);
  }
  IterationResult retry = iterate(sys, start, 1.0 / (1.0 + row_sum_max), max_iter, tol);
  retry.iterations += res.iterations;
  return retry;
}

}  // namespace

TransientProfile solve_fixed_point(const ParameterSetting& ps, std::int64_t max_iter, double tol) {
  if (max_iter < 1) throw std::invalid_argument("solve_fixed_point: max_iter must be >= 1");
  if (tol <= 0.0) throw std::invalid_argument("solve_fixed_point: tol must be > 0");
  const int L = ps.L;
  const VisitMatrix vm = visit_matrix(ps);
  const FixedPointSystem sys{L, vm, ps.p};

  const std::vector<double> ones(static_cast<std::size_t>(L), 1.0);
  IterationResult primary = solve_from(sys, ones, max_iter, tol);
  if (!primary.converged)
    throw std::runtime_error("solve_fixed_point: no convergence after " +
                             std::to_string(max_iter) + " iterations (residual " +
                             std::to_string(primary.residual) + ")");

  TransientProfile profile;
  profile.pi_tilde0 = primary.v;
  profile.residual = primary.residual;
  profile.iterations = primary.iterations;
  profile.growth.assign(static_cast<std::size_t>(L), 0.0);

  constexpr double kBoundaryTol = 1e-9;
  for (int i = 0; i < L; ++i) {
    const double margin = ps.p[static_cast<std::size_t>(i)] - profile.pi_tilde0[static_cast<std::size_t>(i)];
    if (std::abs(margin) <= kBoundaryTol) profile.boundary_flag = true;
    if (margin > 0.0) {
      profile.unstable.push_back(i);
      profile.growth[static_cast<std::size_t>(i)] = margin;
    } else {
      profile.stable.push_back(i);
    }
  }

  // Probe for alternative fixed points from scattered starts. A solution
  // set with diameter above 1e-6 marks the profile as one of several.
  std::mt19937_64 rng(0x5EED5EEDull);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int restart = 0; restart < 10; ++restart) {
    std::vector<double> start(static_cast<std::size_t>(L));
    for (double& x : start) x = unif(rng);
    const IterationResult alt = solve_from(sys, start, max_iter, tol);
    if (!alt.converged) continue;
    for (int i = 0; i < L; ++i) {
      if (std::abs(alt.v[static_cast<std::size_t>(i)] -
                   profile.pi_tilde0[static_cast<std::size_t>(i)]) > 1e-6) {
        profile.multiple_solutions = true;
        break;
      }
    }
  }
  return profile;
}

GrowthComparison compare_with_simulation(const ParameterSetting& ps,
                                         const TransientProfile& profile, std::int64_t horizon,
                                         int seeds) {
  if (horizon < 10) throw std::invalid_argument("compare_with_simulation: horizon too short");
  if (seeds < 1) throw std::invalid_argument("compare_with_simulation: seeds must be >= 1");
  const int L = ps.L;

  GrowthComparison cmp;
  cmp.predicted = profile.growth;
  cmp.mean_slopes.assign(static_cast<std::size_t>(L), 0.0);
  cmp.std_errors.assign(static_cast<std::size_t>(L), 0.0);

  const std::int64_t record_every = std::max<std::int64_t>(1, horizon / 1000);
  const std::int64_t window = horizon - horizon / 10;
  std::vector<std::vector<double>> all_slopes(static_cast<std::size_t>(seeds));

  for (int s = 0; s < seeds; ++s) {
    const UniformField field(static_cast<std::uint64_t>(s), L);
    const RingTrajectory traj =
        run(RingState::empty(L), ps, field, horizon, record_every, RingModel::kCurrent);
    all_slopes[static_cast<std::size_t>(s)] = queue_growth_slopes(traj, window);
    for (int i = 0; i < L; ++i)
      cmp.mean_slopes[static_cast<std::size_t>(i)] +=
          all_slopes[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < L; ++i) cmp.mean_slopes[static_cast<std::size_t>(i)] /= seeds;
  if (seeds > 1) {
    for (int i = 0; i < L; ++i) {
      double var = 0.0;
      for (int s = 0; s < seeds; ++s) {
        const double d = all_slopes[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] -
                         cmp.mean_slopes[static_cast<std::size_t>(i)];
        var += d * d;
      }
      var /= static_cast<double>(seeds - 1);
      cmp.std_errors[static_cast<std::size_t>(i)] = std::sqrt(var / seeds);
    }
  }
  return cmp;
}

}  // namespace ringstab
