#pragma once

#include <cstdint>

#include "varcomp/model.hpp"
#include "varcomp/preprocess.hpp"
#include "varcomp/quantiles.hpp"

namespace varcomp {

struct SearchConfig {
  double alpha = 0.05;
  /// Final bracket width of each bisection, in h2 units.
  double tol = 1e-6;
  /// Iteration cap for the ternary search and for each bisection.
  int max_iter = 200;
  /// Equally spaced points scanned when the ternary search finds no point
  /// below the threshold.
  int grid_fallback = 512;

  void check() const;
};

inline constexpr const char* kWarnGridFallback = "grid-fallback";
inline constexpr const char* kWarnMultimodal = "multimodal";
inline constexpr const char* kWarnNonMonotone = "non-monotone";

/// {h2 : T(h2) <= q_{1-alpha,1}} as an interval: a ternary search toward the
/// minimum of T stops at the first sub-threshold point, then bisection
/// locates each crossing.
ConfidenceInterval invert_two_sided(const RotatedData& rd, const SearchConfig& cfg = {});

/// One-sided interval [lower, 1] from the signed root statistic: lower is
/// the smallest h2 with S(h2) <= z_{1-alpha}.
ConfidenceInterval invert_one_sided_lower(const RotatedData& rd, const SearchConfig& cfg = {});

struct RemlEstimate {
  double h2 = 0.0;
  double sigma2 = 0.0;
  double profile_loglik = 0.0;
  /// Residuals vanish; no variance can be estimated.
  bool degenerate = false;
  /// The restricted information is singular (kernel proportional to the
  /// identity on the error-contrast space), so h2 is not identified.
  bool unidentifiable = false;
  std::int64_t evaluations = 0;
};

/// Maximizes h2 -> l_R(h2, sigma2_tilde(h2)) over [0, 1 - 1e-8]: a coarse
/// scan picks a bracket, then 80 golden-section steps refine it.
RemlEstimate reml_estimate(const RotatedData& rd);

}  // namespace varcomp
