#include "varcomp/reml.hpp"

#include <cmath>
#include <sstream>

namespace varcomp {

namespace {

void check_h2(double h2) {
  if (!(h2 >= 0.0 && h2 < 1.0)) {
    std::ostringstream msg;
    msg << "h2 must lie in [0, 1), got " << h2;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

}  // namespace

RemlEvaluator::RemlEvaluator(const RotatedData& data) : data_(&data) {
  check_rotated(data);
}

const ProfileState& RemlEvaluator::profile(double h2) {
  if (!has_state_ || state_.h2 != h2) {
    compute_profile(h2);
  }
  return state_;
}

void RemlEvaluator::compute_profile(double h2) {
  check_h2(h2);
  has_state_ = false;
  ++evaluations_;

  const RotatedData& rd = *data_;
  const Eigen::Index n = rd.n();
  const Eigen::Index p = rd.p();
  ProfileState& st = state_;
  st.h2 = h2;
  st.n = n;
  st.p = p;
  st.weights.resize(n);
  sqrt_w_.resize(n);
  d_.resize(n);

  double sum_log_v = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // 1 + h2 (lambda - 1) is the same denominator as h2 lambda + 1 - h2,
    // written to avoid cancellation for h2 near 1 and small lambda.
    const double shift = h2 * (rd.lambdas[i] - 1.0);
    const double v = 1.0 + shift;
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::NumericalOverflow, "nonpositive variance factor at h2 = " +
                                                    std::to_string(h2));
    }
    const double w = 1.0 / v;
    st.weights[i] = w;
    sqrt_w_[i] = std::sqrt(w);
    d_[i] = (rd.lambdas[i] - 1.0) * w;
    sum_log_v += std::log1p(shift);
  }
  st.sum_log_v = sum_log_v;

  double trace_papd = 0.0;
  if (p == 0) {
    st.beta.resize(0);
    st.residuals = rd.y;
    st.q_diag.setOnes(n);
    st.log_det_gram = 0.0;
  } else {
    xs_.noalias() = sqrt_w_.asDiagonal() * rd.x;
    gram_.noalias() = xs_.transpose() * xs_;
    Eigen::VectorXd ys = sqrt_w_.cwiseProduct(rd.y);

    Eigen::LLT<Eigen::MatrixXd> llt(gram_);
    bool use_cholesky = llt.info() == Eigen::Success;
    if (use_cholesky) {
      const auto diag = llt.matrixLLT().diagonal();
      const double min_pivot = diag.minCoeff();
      use_cholesky = min_pivot * min_pivot >
                     static_cast<double>(p) * 1e-14 * gram_.diagonal().maxCoeff();
    }

    if (use_cholesky) {
      z_ = xs_.transpose();
      llt.matrixL().solveInPlace(z_);
      Eigen::VectorXd c = z_ * ys;
      st.beta = llt.matrixU().solve(c);
      st.q_diag = 1.0 - z_.colwise().squaredNorm().transpose().array();
      st.log_det_gram = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      c_.noalias() = z_ * d_.asDiagonal() * z_.transpose();
      trace_papd = c_.squaredNorm();
    } else {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(gram_);
      const Eigen::VectorXd pivots = ldlt.vectorD();
      const double largest = pivots.cwiseAbs().maxCoeff();
      if (ldlt.info() != Eigen::Success ||
          pivots.minCoeff() <= static_cast<double>(p) * 1e-14 * largest) {
        throw Error(ErrorCode::SingularGram,
                    "X^T V^-1 X is numerically singular at h2 = " + std::to_string(h2));
      }
      Eigen::MatrixXd m = ldlt.solve(xs_.transpose());  // G^-1 xs^T
      st.beta = m * ys;
      st.q_diag = 1.0 - (xs_.transpose().array() * m.array()).colwise().sum().transpose();
      st.log_det_gram = pivots.array().log().sum();
      Eigen::MatrixXd ab = m * d_.asDiagonal() * xs_;  // G^-1 B
      trace_papd = (ab * ab).trace();
    }
    st.residuals.noalias() = rd.y - rd.x * st.beta;
  }

  double wrss = 0.0;
  double sum_d_w_r2 = 0.0;
  double sum_d2 = 0.0;
  double trace_pd2 = 0.0;
  double trace_qd = 0.0;
  double weighted_y2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = st.weights[i];
    const double r = st.residuals[i];
    const double d = d_[i];
    const double q = st.q_diag[i];
    wrss += w * r * r;
    sum_d_w_r2 += d * w * r * r;
    sum_d2 += d * d;
    trace_pd2 += (1.0 - q) * d * d;
    trace_qd += q * d;
    weighted_y2 += w * rd.y[i] * rd.y[i];
  }
  st.weighted_rss = wrss;
  st.sum_d_w_r2 = sum_d_w_r2;
  st.trace_qd = trace_qd;
  st.trace_qdqd = sum_d2 - 2.0 * trace_pd2 + trace_papd;
  st.sigma2_tilde = wrss / static_cast<double>(n - p);
  st.degenerate = !(wrss > 1e-20 * weighted_y2);
  has_state_ = true;
}

double RemlEvaluator::resolve_sigma2(const EvalPoint& point) {
  const ProfileState& st = profile(point.h2);
  if (point.sigma2) {
    if (!(*point.sigma2 > 0.0) || !std::isfinite(*point.sigma2)) {
      throw Error(ErrorCode::InvalidArgument, "sigma2 must be positive and finite");
    }
    return *point.sigma2;
  }
  if (st.degenerate) {
    throw Error(ErrorCode::DegenerateFit,
                "residuals vanish: the response lies in the column span of X");
  }
  return st.sigma2_tilde;
}

double RemlEvaluator::restricted_loglik(const EvalPoint& point) {
  const double sigma2 = resolve_sigma2(point);
  const ProfileState& st = state_;
  const double dof = static_cast<double>(st.n - st.p);
  return -0.5 * (dof * std::log(sigma2) + st.sum_log_v + st.weighted_rss / sigma2 +
                 st.log_det_gram);
}

double RemlEvaluator::profile_loglik(double h2) {
  return restricted_loglik(EvalPoint{h2, std::nullopt});
}

ScoreInfo RemlEvaluator::score_info(const EvalPoint& point) {
  const double sigma2 = resolve_sigma2(point);
  const ProfileState& st = state_;
  const double dof = static_cast<double>(st.n - st.p);
  const double sigma4 = sigma2 * sigma2;

  ScoreInfo si;
  si.h2 = point.h2;
  si.sigma2 = sigma2;
  si.u1 = 0.5 * (st.sum_d_w_r2 / sigma2 - st.trace_qd);
  si.u2 = 0.5 * (-dof / sigma2 + st.weighted_rss / sigma4);
  si.i11 = 0.5 * st.trace_qdqd;
  si.i12 = st.trace_qd / (2.0 * sigma2);
  si.i22 = dof / (2.0 * sigma4);
  si.det = si.i11 * si.i22 - si.i12 * si.i12;
  if (!(si.det > kSingularInformationTolerance * si.i11 * si.i22) || !(si.i11 > 0.0)) {
    std::ostringstream msg;
    msg << "restricted information is singular at h2 = " << point.h2
        << " (the kernel is proportional to the identity on the space orthogonal to X)";
    throw Error(ErrorCode::SingularInformation, msg.str());
  }
  return si;
}

double RemlEvaluator::t_stat_joint(double h2, double sigma2) {
  if (h2 >= 1.0) {
    return kInfinity;
  }
  const ScoreInfo si = score_info(EvalPoint{h2, sigma2});
  const double quad =
      si.i22 * si.u1 * si.u1 - 2.0 * si.i12 * si.u1 * si.u2 + si.i11 * si.u2 * si.u2;
  return std::max(0.0, quad / si.det);
}

double RemlEvaluator::t_stat_h2(double h2) {
  if (h2 >= 1.0) {
    return kInfinity;
  }
  const ScoreInfo si = score_info(EvalPoint{h2, std::nullopt});
  return si.u1 * si.u1 * si.inverse_11();
}

double RemlEvaluator::s_stat_h2(double h2) {
  if (h2 >= 1.0) {
    return -kInfinity;
  }
  const ScoreInfo si = score_info(EvalPoint{h2, std::nullopt});
  return si.u1 * std::sqrt(si.inverse_11());
}

ProfileState profile(const RotatedData& rd, double h2) {
  RemlEvaluator eval(rd);
  return eval.profile(h2);
}

double restricted_loglik(const RotatedData& rd, const EvalPoint& point) {
  RemlEvaluator eval(rd);
  return eval.restricted_loglik(point);
}

double profile_loglik(const RotatedData& rd, double h2) {
  RemlEvaluator eval(rd);
  return eval.profile_loglik(h2);
}

ScoreInfo score_info(const RotatedData& rd, const EvalPoint& point) {
  RemlEvaluator eval(rd);
  return eval.score_info(point);
}

double t_stat_joint(const RotatedData& rd, double h2, double sigma2) {
  RemlEvaluator eval(rd);
  return eval.t_stat_joint(h2, sigma2);
}

double t_stat_h2(const RotatedData& rd, double h2) {
  RemlEvaluator eval(rd);
  return eval.t_stat_h2(h2);
}

double s_stat_h2(const RotatedData& rd, double h2) {
  RemlEvaluator eval(rd);
  return eval.s_stat_h2(h2);
}

}  // namespace varcomp
