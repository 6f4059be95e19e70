#pragma once

#include <Eigen/Dense>

#include <filesystem>

#include "varcomp/model.hpp"

namespace varcomp {

/// Data rotated into the eigenbasis of K, where the covariance is diagonal:
/// cov(y) = sigma2 * diag(h2 * lambda_i + 1 - h2).
struct RotatedData {
  Eigen::VectorXd lambdas;  // decreasing, nonnegative
  Eigen::VectorXd y;        // O^T Y
  Eigen::MatrixXd x;        // O^T X, n x p

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }
};

/// Checks the RotatedData shape and ordering contract; throws on violation.
void check_rotated(const RotatedData& rd);

/// Eigendecomposition K = O diag(lambdas) O^T with the rotated design,
/// reusable for any number of responses.
struct SharedBasis {
  Eigen::VectorXd lambdas;   // decreasing, nonnegative
  Eigen::MatrixXd x;         // O^T X
  Eigen::MatrixXd rotation;  // O; empty when discarded
  double kernel_scale = 1.0; // lambdas were divided by this factor

  Eigen::Index n() const { return lambdas.size(); }
  Eigen::Index p() const { return x.cols(); }
  bool has_rotation() const { return rotation.size() > 0; }
};

struct DecomposeOptions {
  bool keep_rotation = true;
  /// Rescale K by its largest eigenvalue. No test statistic changes; the
  /// scale is absorbed by sigma2.
  bool normalize = false;
};

/// Relative tolerance below which negative eigenvalues are clamped to zero.
inline constexpr double kNegativeEigenTolerance = 1e-8;

SharedBasis decompose(const ModelData& data, const DecomposeOptions& options = {});
SharedBasis decompose(const Eigen::MatrixXd& kernel, const Eigen::MatrixXd& x,
                      const DecomposeOptions& options = {});

/// Eigenvalues of K only (decreasing, clamped). Much cheaper than a full
/// decomposition; enough for simulations drawn directly in the eigenbasis.
Eigen::VectorXd kernel_eigenvalues(const Eigen::MatrixXd& kernel);

/// Y_O = O^T Y.
RotatedData rotate_response(const SharedBasis& basis, const Eigen::VectorXd& y);

/// Pairs an already rotated response with the basis.
RotatedData with_rotated_response(const SharedBasis& basis, Eigen::VectorXd y_rotated);

/// Full preprocessing for a single response: validate, decompose, rotate.
RotatedData preprocess(const ModelData& data);

// Cache layout (little-endian): the 6 bytes "VCEIG1", n and p as uint64,
// then float64 values: lambdas (n), X_O (n x p, row-major), O (n x n, row-major).
void save_basis(const std::filesystem::path& path, const SharedBasis& basis);
SharedBasis load_basis(const std::filesystem::path& path);

}  // namespace varcomp
