#pragma once

#include <string_view>

#include "varcomp/interval.hpp"

namespace varcomp {

enum class ComparatorMethod { Wald, Rlr };

std::string_view to_string(ComparatorMethod method);

struct ComparatorResult {
  ComparatorMethod method = ComparatorMethod::Wald;
  ConfidenceInterval interval;
  double h2_hat = 0.0;
  double sigma2_hat = 0.0;
};

/// h2_hat -/+ z_{1-alpha/2} * se, truncated to [0, 1], with se taken from
/// the restricted information at the REML estimate.
ComparatorResult wald_interval(const RotatedData& rd, double alpha);
ComparatorResult wald_interval(const RotatedData& rd, double alpha, const RemlEstimate& estimate);

/// {h2 : 2 (l_R(h2_hat) - l_R(h2, sigma2_tilde(h2))) <= q_{1-alpha,1}}, taken
/// as the hull over a 1024-point grid and refined by bisection at the two
/// outermost crossings.
ComparatorResult rlr_interval(const RotatedData& rd, double alpha);
ComparatorResult rlr_interval(const RotatedData& rd, double alpha, const RemlEstimate& estimate);

inline constexpr int kRlrGridPoints = 1024;

}  // namespace varcomp
