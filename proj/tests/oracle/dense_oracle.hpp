#pragma once

// Dense-matrix reference implementation of the restricted likelihood, score
// and information, working on (Y, X, K) in the original coordinates. Forms
// every n x n matrix explicitly; test use only.

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace varcomp::oracle {

struct DenseEval {
  double loglik = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double i11 = 0.0;
  double i12 = 0.0;
  double i22 = 0.0;
  double det = 0.0;
  double sigma2_tilde = 0.0;
  Eigen::VectorXd beta;

  double t_joint() const {
    Eigen::Matrix2d info;
    info << i11, i12, i12, i22;
    Eigen::Vector2d u(u1, u2);
    return u.dot(info.inverse() * u);
  }
  double inverse_11() const {
    Eigen::Matrix2d info;
    info << i11, i12, i12, i22;
    return info.inverse()(0, 0);
  }
};

inline Eigen::MatrixXd sym_inverse(const Eigen::MatrixXd& m) {
  return m.ldlt().solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

inline double log_det_spd(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) {
    return 0.0;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

/// Profile variance: (Y - X beta)^T V2^-1 (Y - X beta) / (n - p).
inline double dense_sigma2_tilde(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& k, double h2) {
  const Eigen::Index n = y.size();
  const Eigen::MatrixXd i_n = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd v2 = h2 * k + (1.0 - h2) * i_n;
  const Eigen::MatrixXd v2_inv = sym_inverse(v2);
  Eigen::VectorXd r = y;
  if (x.cols() > 0) {
    const Eigen::MatrixXd a = sym_inverse(x.transpose() * v2_inv * x);
    r = y - x * (a * x.transpose() * v2_inv * y);
  }
  return r.dot(v2_inv * r) / static_cast<double>(n - x.cols());
}

inline DenseEval dense_evaluate(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                                const Eigen::MatrixXd& k, double h2, double sigma2) {
  const Eigen::Index n = y.size();
  const Eigen::Index p = x.cols();
  const Eigen::MatrixXd i_n = Eigen::MatrixXd::Identity(n, n);

  const Eigen::MatrixXd sigma = sigma2 * (h2 * k + (1.0 - h2) * i_n);
  const Eigen::MatrixXd v1 = sigma2 * (k - i_n);
  const Eigen::MatrixXd v2 = h2 * k + (1.0 - h2) * i_n;
  const Eigen::MatrixXd s_inv = sym_inverse(sigma);

  DenseEval out;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd r = y;
  double log_det_xsx = 0.0;
  if (p > 0) {
    const Eigen::MatrixXd xsx = x.transpose() * s_inv * x;
    a = sym_inverse(xsx);
    out.beta = a * x.transpose() * s_inv * y;
    r = y - x * out.beta;
    log_det_xsx = log_det_spd(xsx);
  }

  out.loglik = -0.5 * (log_det_spd(sigma) + log_det_xsx + r.dot(s_inv * r));

  // U_j = 1/2 R' S^-1 V_j S^-1 R - 1/2 tr(S^-1 V_j)
  //       + 1/2 tr(S^-1 X (X' S^-1 X)^-1 X' S^-1 V_j)
  const Eigen::MatrixXd proj = p > 0 ? Eigen::MatrixXd(s_inv * x * a * x.transpose() * s_inv)
                                     : Eigen::MatrixXd::Zero(n, n);
  auto score = [&](const Eigen::MatrixXd& vj) {
    const Eigen::VectorXd sr = s_inv * r;
    return 0.5 * sr.dot(vj * sr) - 0.5 * (s_inv * vj).trace() + 0.5 * (proj * vj).trace();
  };
  out.u1 = score(v1);
  out.u2 = score(v2);

  // Information with P = S^-1/2 X A X' S^-1/2, Q = I - P, H = O D O^T.
  // H = V2^-1 (K - I), since V2 and K share eigenvectors.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sigma_eig(sigma);
  const Eigen::MatrixXd s_inv_half = sigma_eig.operatorInverseSqrt();
  const Eigen::MatrixXd p_mat = p > 0 ? Eigen::MatrixXd(s_inv_half * x * a * x.transpose() * s_inv_half)
                                      : Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd q_mat = i_n - p_mat;
  const Eigen::MatrixXd h_mat = v2.ldlt().solve(k - i_n);
  const Eigen::MatrixXd qh = q_mat * h_mat;
  out.i11 = 0.5 * (qh * qh).trace();
  out.i12 = qh.trace() / (2.0 * sigma2);
  out.i22 = static_cast<double>(n - p) / (2.0 * sigma2 * sigma2);
  out.det = out.i11 * out.i22 - out.i12 * out.i12;
  out.sigma2_tilde = dense_sigma2_tilde(y, x, k, h2);
  return out;
}

/// T(h2) = U1^2 I^11 evaluated at the profile variance.
inline double dense_t_h2(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& k, double h2) {
  if (h2 >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double s2 = dense_sigma2_tilde(y, x, k, h2);
  const DenseEval e = dense_evaluate(y, x, k, h2, s2);
  return e.u1 * e.u1 * e.inverse_11();
}

/// Null-space basis V (n x (n - p)) with V^T X = 0 from a full QR of X.
inline Eigen::MatrixXd null_space_basis(const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (p == 0) {
    return Eigen::MatrixXd::Identity(n, n);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - p);
}

}  // namespace varcomp::oracle
