#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>

#include "varcomp/preprocess.hpp"

namespace varcomp {

/// Evaluation point for the restricted likelihood. A missing sigma2 means
/// "use the profile variance at this h2".
struct EvalPoint {
  double h2 = 0.0;
  std::optional<double> sigma2;
};

/// Everything at a fixed h2 that does not depend on sigma2. Computed in
/// O(n p^2 + p^3) without forming any n x n matrix.
struct ProfileState {
  double h2 = 0.0;
  Eigen::VectorXd weights;    // w_i = 1 / (h2 * lambda_i + 1 - h2)
  Eigen::VectorXd beta;       // GLS coefficients
  Eigen::VectorXd residuals;  // y - X beta
  Eigen::VectorXd q_diag;     // diagonal of the weighted projector complement
  double weighted_rss = 0.0;  // sum w_i r_i^2
  double sigma2_tilde = 0.0;  // weighted_rss / (n - p)
  double sum_log_v = 0.0;     // sum log(h2 lambda_i + 1 - h2)
  double log_det_gram = 0.0;  // log |X^T V^-1 X|
  // sigma2-free pieces of the score and information, with
  // D_ii = (lambda_i - 1) w_i.
  double sum_d_w_r2 = 0.0;    // sum D_ii w_i r_i^2
  double trace_qd = 0.0;      // tr(Q D)
  double trace_qdqd = 0.0;    // tr(Q D Q D)
  Eigen::Index n = 0;
  Eigen::Index p = 0;

  /// True when the residuals vanish relative to the response (y in the
  /// column span of X); the profile variance is then unusable.
  bool degenerate = false;
};

/// Restricted score and 2x2 restricted information at (h2, sigma2).
struct ScoreInfo {
  double h2 = 0.0;
  double sigma2 = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double i11 = 0.0;
  double i12 = 0.0;
  double i22 = 0.0;
  double det = 0.0;

  /// Leading element of the inverse information, I22 / det.
  double inverse_11() const { return i22 / det; }
};

/// Information matrices with det <= kSingularInformationTolerance * I11 * I22
/// are treated as singular.
inline constexpr double kSingularInformationTolerance = 1e-12;

/// Largest h2 at which statistics are evaluated; h2 = 1 itself maps to +inf.
inline constexpr double kMaxH2 = 1.0 - 1e-8;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Reusable evaluator bound to one RotatedData. Keeps scratch buffers so
/// repeated evaluations do not allocate; one instance per thread.
class RemlEvaluator {
 public:
  explicit RemlEvaluator(const RotatedData& data);

  const RotatedData& data() const { return *data_; }

  /// Recomputes (or reuses) the profile state at h2.
  const ProfileState& profile(double h2);

  double restricted_loglik(const EvalPoint& point);
  /// h2 -> l_R(h2, sigma2_tilde(h2)).
  double profile_loglik(double h2);
  ScoreInfo score_info(const EvalPoint& point);

  /// Quadratic form U^T I^-1 U; +inf at h2 >= 1.
  double t_stat_joint(double h2, double sigma2);
  /// U1^2 * I^11 at the profile variance; +inf at h2 >= 1.
  double t_stat_h2(double h2);
  /// Signed root U1 * sqrt(I^11) at the profile variance; -inf at h2 >= 1.
  double s_stat_h2(double h2);

  /// Number of profile computations performed so far.
  std::int64_t evaluations() const { return evaluations_; }

 private:
  void compute_profile(double h2);
  double resolve_sigma2(const EvalPoint& point);

  const RotatedData* data_;
  ProfileState state_;
  bool has_state_ = false;
  std::int64_t evaluations_ = 0;

  Eigen::VectorXd sqrt_w_;
  Eigen::VectorXd d_;
  Eigen::MatrixXd xs_;     // diag(sqrt w) X
  Eigen::MatrixXd z_;      // L^-1 xs^T, p x n
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd c_;      // z diag(D) z^T
};

ProfileState profile(const RotatedData& rd, double h2);
double restricted_loglik(const RotatedData& rd, const EvalPoint& point);
double profile_loglik(const RotatedData& rd, double h2);
ScoreInfo score_info(const RotatedData& rd, const EvalPoint& point);
double t_stat_joint(const RotatedData& rd, double h2, double sigma2);
double t_stat_h2(const RotatedData& rd, double h2);
double s_stat_h2(const RotatedData& rd, double h2);

}  // namespace varcomp
