#include "varcomp/interval.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "varcomp/reml.hpp"

namespace varcomp {

namespace {

// Shrinks [in, out] (either order) around the boundary of the region where
// `inside` holds. Returns the final inside point, so the bound is never
// reported outside the confidence set.
template <class Inside>
double bisect_boundary(Inside inside, double in, double out, double tol, int max_iter) {
  for (int iter = 0; iter < max_iter && std::abs(out - in) > tol; ++iter) {
    const double mid = 0.5 * (in + out);
    if (inside(mid)) {
      in = mid;
    } else {
      out = mid;
    }
  }
  return in;
}

void finish(ConfidenceInterval& ci, std::int64_t evaluations) {
  ci.lower = std::clamp(ci.lower, 0.0, 1.0);
  ci.upper = std::clamp(ci.upper, ci.lower, 1.0);
  ci.touches_zero = ci.lower == 0.0;
  ci.touches_one = ci.upper == 1.0;
  ci.evaluations = evaluations;
}

}  // namespace

void SearchConfig::check() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  }
  if (max_iter < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");
  }
  if (grid_fallback < 16) {
    throw Error(ErrorCode::InvalidArgument, "grid_fallback must be at least 16");
  }
}

ConfidenceInterval invert_two_sided(const RotatedData& rd, const SearchConfig& cfg) {
  cfg.check();
  RemlEvaluator eval(rd);
  const double q = chi2_quantile(1.0 - cfg.alpha, 1);
  auto stat = [&eval](double h2) { return eval.t_stat_h2(h2); };
  auto inside = [&](double h2) { return stat(h2) <= q; };

  ConfidenceInterval ci;
  ci.level = 1.0 - cfg.alpha;

  std::optional<double> seed;
  double lo = 0.0;
  double hi = kMaxH2;
  for (int iter = 0; iter < cfg.max_iter && hi - lo > 1e-12; ++iter) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    const double t1 = stat(m1);
    if (t1 < q) {
      seed = m1;
      break;
    }
    const double t2 = stat(m2);
    if (t2 < q) {
      seed = m2;
      break;
    }
    if (t1 < t2) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  if (!seed) {
    for (double edge : {lo, hi}) {
      if (stat(edge) < q) {
        seed = edge;
        break;
      }
    }
  }

  if (seed) {
    const double a = *seed;
    if (a <= cfg.tol || inside(0.0)) {
      ci.lower = 0.0;
    } else {
      ci.lower = bisect_boundary(inside, a, 0.0, cfg.tol, cfg.max_iter);
    }
    if (a >= kMaxH2 - cfg.tol || inside(kMaxH2)) {
      ci.upper = 1.0;
    } else {
      ci.upper = bisect_boundary(inside, a, kMaxH2, cfg.tol, cfg.max_iter);
    }
    finish(ci, eval.evaluations());
    return ci;
  }

  // No sub-threshold point along the ternary path: scan a grid and report
  // the hull of every sub-threshold point.
  const int count = cfg.grid_fallback;
  std::vector<double> grid(count);
  std::vector<char> in_set(count);
  for (int k = 0; k < count; ++k) {
    grid[k] = kMaxH2 * static_cast<double>(k) / static_cast<double>(count - 1);
    in_set[k] = inside(grid[k]) ? 1 : 0;
  }
  const auto first = std::find(in_set.begin(), in_set.end(), 1);
  if (first == in_set.end()) {
    throw Error(ErrorCode::EmptyRegion,
                "no h2 on a " + std::to_string(count) + "-point grid satisfies T <= q");
  }
  const auto last = std::find(in_set.rbegin(), in_set.rend(), 1);
  const int i_first = static_cast<int>(first - in_set.begin());
  const int i_last = count - 1 - static_cast<int>(last - in_set.rbegin());

  ci.warnings.emplace_back(kWarnGridFallback);
  if (std::find(in_set.begin() + i_first, in_set.begin() + i_last + 1, 0) !=
      in_set.begin() + i_last + 1) {
    ci.warnings.emplace_back(kWarnMultimodal);
  }
  ci.lower = i_first == 0 ? 0.0
                          : bisect_boundary(inside, grid[i_first], grid[i_first - 1], cfg.tol,
                                            cfg.max_iter);
  ci.upper = i_last == count - 1 ? 1.0
                                 : bisect_boundary(inside, grid[i_last], grid[i_last + 1],
                                                   cfg.tol, cfg.max_iter);
  finish(ci, eval.evaluations());
  return ci;
}

ConfidenceInterval invert_one_sided_lower(const RotatedData& rd, const SearchConfig& cfg) {
  cfg.check();
  RemlEvaluator eval(rd);
  const double z = normal_quantile(1.0 - cfg.alpha);
  auto inside = [&](double h2) { return eval.s_stat_h2(h2) <= z; };

  ConfidenceInterval ci;
  ci.level = 1.0 - cfg.alpha;
  ci.one_sided = true;
  ci.upper = 1.0;

  if (inside(0.0)) {
    ci.lower = 0.0;
    finish(ci, eval.evaluations());
    return ci;
  }

  // Coarse bracketing scan; S is expected to decrease, so once inside, every
  // later scan point should stay inside.
  constexpr int kScan = 16;
  std::optional<int> first_inside;
  double previous = 0.0;
  double bracket_out = 0.0;
  for (int k = 1; k <= kScan; ++k) {
    const double h2 = kMaxH2 * static_cast<double>(k) / kScan;
    const bool in = inside(h2);
    if (in && !first_inside) {
      first_inside = k;
      bracket_out = previous;
    } else if (!in && first_inside) {
      if (ci.warnings.empty()) {
        ci.warnings.emplace_back(kWarnNonMonotone);
      }
    }
    previous = h2;
  }
  if (!first_inside) {
    throw Error(ErrorCode::EmptyRegion, "S(h2) exceeds the normal quantile on all of [0, 1)");
  }
  const double bracket_in = kMaxH2 * static_cast<double>(*first_inside) / kScan;
  ci.lower = bisect_boundary(inside, bracket_in, bracket_out, cfg.tol, cfg.max_iter);
  finish(ci, eval.evaluations());
  return ci;
}

RemlEstimate reml_estimate(const RotatedData& rd) {
  RemlEvaluator eval(rd);
  RemlEstimate est;

  const ProfileState& at_zero = eval.profile(0.0);
  if (at_zero.degenerate) {
    est.degenerate = true;
    est.evaluations = eval.evaluations();
    return est;
  }

  auto objective = [&eval](double h2) { return eval.profile_loglik(h2); };

  constexpr int kScan = 32;
  double best_h2 = 0.0;
  double best_value = objective(0.0);
  int best_k = 0;
  double worst_value = best_value;
  for (int k = 1; k <= kScan; ++k) {
    const double h2 = kMaxH2 * static_cast<double>(k) / kScan;
    const double value = objective(h2);
    worst_value = std::min(worst_value, value);
    if (value > best_value) {
      best_value = value;
      best_h2 = h2;
      best_k = k;
    }
  }

  double a = kMaxH2 * static_cast<double>(std::max(best_k - 1, 0)) / kScan;
  double b = kMaxH2 * static_cast<double>(std::min(best_k + 1, kScan)) / kScan;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  for (int iter = 0; iter < 80; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  for (auto [h2, value] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{a, objective(a)},
                           std::pair{b, objective(b)}}) {
    if (value > best_value) {
      best_value = value;
      best_h2 = h2;
    }
  }

  est.h2 = best_h2;
  est.profile_loglik = best_value;
  est.sigma2 = eval.profile(best_h2).sigma2_tilde;
  try {
    eval.score_info(EvalPoint{best_h2, std::nullopt});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularInformation) {
      throw;
    }
    est.unidentifiable = true;
  }
  if (best_value - worst_value <= 1e-10 * (1.0 + std::abs(best_value))) {
    est.unidentifiable = true;
  }
  est.evaluations = eval.evaluations();
  return est;
}

}  // namespace varcomp
