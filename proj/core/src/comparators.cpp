#include "varcomp/comparators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "varcomp/reml.hpp"

namespace varcomp {

namespace {

void require_usable(const RemlEstimate& estimate) {
  if (estimate.degenerate) {
    throw Error(ErrorCode::DegenerateFit, "REML fit is degenerate (zero residuals)");
  }
}

void set_flags(ConfidenceInterval& ci) {
  ci.touches_zero = ci.lower == 0.0;
  ci.touches_one = ci.upper == 1.0;
}

}  // namespace

std::string_view to_string(ComparatorMethod method) {
  return method == ComparatorMethod::Wald ? "wald" : "rlr";
}

ComparatorResult wald_interval(const RotatedData& rd, double alpha) {
  return wald_interval(rd, alpha, reml_estimate(rd));
}

ComparatorResult wald_interval(const RotatedData& rd, double alpha, const RemlEstimate& estimate) {
  require_usable(estimate);
  const double z = Quantiles::for_alpha(alpha).z_two_sided;
  RemlEvaluator eval(rd);
  const ScoreInfo si = eval.score_info(EvalPoint{estimate.h2, estimate.sigma2});
  const double se = std::sqrt(si.inverse_11());

  ComparatorResult result;
  result.method = ComparatorMethod::Wald;
  result.h2_hat = estimate.h2;
  result.sigma2_hat = estimate.sigma2;
  ConfidenceInterval& ci = result.interval;
  ci.level = 1.0 - alpha;
  ci.lower = std::clamp(estimate.h2 - z * se, 0.0, 1.0);
  ci.upper = std::clamp(estimate.h2 + z * se, 0.0, 1.0);
  ci.evaluations = eval.evaluations();
  set_flags(ci);
  return result;
}

ComparatorResult rlr_interval(const RotatedData& rd, double alpha) {
  return rlr_interval(rd, alpha, reml_estimate(rd));
}

ComparatorResult rlr_interval(const RotatedData& rd, double alpha, const RemlEstimate& estimate) {
  require_usable(estimate);
  const double q = chi2_quantile(1.0 - alpha, 1);
  RemlEvaluator eval(rd);

  std::vector<double> grid(kRlrGridPoints);
  std::vector<double> values(kRlrGridPoints);
  double best = estimate.profile_loglik;
  for (int k = 0; k < kRlrGridPoints; ++k) {
    grid[k] = kMaxH2 * static_cast<double>(k) / (kRlrGridPoints - 1);
    values[k] = eval.profile_loglik(grid[k]);
    best = std::max(best, values[k]);
  }
  auto statistic = [&](double h2) {
    return std::max(0.0, 2.0 * (best - eval.profile_loglik(h2)));
  };
  auto inside = [&](double h2) { return statistic(h2) <= q; };
  auto grid_inside = [&](int k) { return 2.0 * (best - values[k]) <= q; };

  // The estimate is always in the set; extend outward to the outermost
  // sub-threshold grid points.
  double lower_in = estimate.h2;
  double upper_in = estimate.h2;
  int lower_k = -1;
  int upper_k = -1;
  for (int k = 0; k < kRlrGridPoints; ++k) {
    if (grid_inside(k)) {
      if (lower_k < 0) {
        lower_k = k;
      }
      upper_k = k;
    }
  }
  if (lower_k >= 0) {
    lower_in = std::min(lower_in, grid[lower_k]);
    upper_in = std::max(upper_in, grid[upper_k]);
  }

  auto refine = [&](double in, double out) {
    for (int iter = 0; iter < 200 && std::abs(out - in) > 1e-8; ++iter) {
      const double mid = 0.5 * (in + out);
      (inside(mid) ? in : out) = mid;
    }
    return in;
  };

  ComparatorResult result;
  result.method = ComparatorMethod::Rlr;
  result.h2_hat = estimate.h2;
  result.sigma2_hat = estimate.sigma2;
  ConfidenceInterval& ci = result.interval;
  ci.level = 1.0 - alpha;

  if (lower_in <= 0.0) {
    ci.lower = 0.0;
  } else {
    // Largest grid point strictly below lower_in is outside by construction.
    auto it = std::lower_bound(grid.begin(), grid.end(), lower_in);
    const double out = it == grid.begin() ? 0.0 : *(it - 1);
    ci.lower = (out == 0.0 && inside(0.0)) ? 0.0 : refine(lower_in, out);
  }
  if (upper_in >= kMaxH2) {
    ci.upper = 1.0;
  } else {
    auto it = std::upper_bound(grid.begin(), grid.end(), upper_in);
    const double out = it == grid.end() ? kMaxH2 : *it;
    ci.upper = (out == kMaxH2 && inside(kMaxH2)) ? 1.0 : refine(upper_in, out);
  }
  ci.evaluations = eval.evaluations();
  set_flags(ci);
  return result;
}

}  // namespace varcomp
