#pragma once

namespace varcomp {

/// Standard normal quantile (Wichura's AS 241, PPND16; relative accuracy
/// about 1e-16). Requires 0 < prob < 1.
double normal_quantile(double prob);

/// Chi-square quantile for 1 or 2 degrees of freedom. df = 2 is the closed
/// form -2 log(1 - prob); df = 1 squares the normal quantile at (1 + prob)/2.
double chi2_quantile(double prob, int df);

/// Critical values used when inverting the statistics at level 1 - alpha.
struct Quantiles {
  double q1 = 0.0;           // chi2_1 at 1 - alpha
  double q2 = 0.0;           // chi2_2 at 1 - alpha
  double z_one_sided = 0.0;  // normal at 1 - alpha
  double z_two_sided = 0.0;  // normal at 1 - alpha / 2

  static Quantiles for_alpha(double alpha);
};

}  // namespace varcomp
