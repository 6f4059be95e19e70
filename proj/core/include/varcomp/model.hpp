#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "varcomp/error.hpp"

namespace varcomp {

/// AR(1) correlation kernel, K_ij = rho^|i-j|.
struct Ar1Kernel {
  double rho = 0.5;
};

/// Exponential-decay spatial kernel, K_ij = exp(-||s_i - s_j|| / length_scale).
/// Coordinates are stored one location per row.
struct ExpDecayKernel {
  Eigen::MatrixXd coordinates;
  double length_scale = 1.0;
};

/// Dense kernel read from a delimited text file (n rows of n numbers).
struct DenseKernelFile {
  std::filesystem::path path;
};

using KernelSpec = std::variant<Ar1Kernel, ExpDecayKernel, DenseKernelFile>;

void check_kernel_spec(const KernelSpec& spec);
std::string describe(const KernelSpec& spec);

/// Builds the dense symmetric n x n kernel matrix for `spec`.
Eigen::MatrixXd materialize_kernel(const KernelSpec& spec, Eigen::Index n);

/// Raw inputs of Y ~ N(X beta, sigma_g^2 K + sigma_e^2 I) before rotation.
struct ModelData {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;  // n x p, p may be zero
  std::variant<Eigen::MatrixXd, KernelSpec> kernel;

  Eigen::Index n() const { return y.size(); }
  Eigen::Index p() const { return x.cols(); }

  /// The dense kernel, materializing a KernelSpec if necessary.
  Eigen::MatrixXd kernel_matrix() const;
};

struct ValidationReport {
  bool ok = true;
  ErrorCode failure = ErrorCode::InvalidArgument;  // meaningful only when !ok
  std::string message;
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  Eigen::Index rank = 0;
  double symmetry_defect = 0.0;  // max |K_ij - K_ji|
};

/// Checks sample size, rank of X and kernel symmetry. Never throws for bad
/// data; the report carries the failure.
ValidationReport validate(const ModelData& data);
ValidationReport validate(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                          const Eigen::MatrixXd& kernel);

/// Throws Error with the report's failure code when validation fails.
void require_valid(const ValidationReport& report);

/// Numerical rank with tolerance n * eps * (largest singular value).
Eigen::Index column_rank(const Eigen::MatrixXd& x);

/// Model parameters in the (h2, sigma2) parameterization.
class Parameters {
 public:
  Parameters(Eigen::VectorXd beta, double h2, double sigma2);

  static Parameters from_components(Eigen::VectorXd beta, double sigma_g2, double sigma_e2);

  const Eigen::VectorXd& beta() const { return beta_; }
  double h2() const { return h2_; }
  double sigma2() const { return sigma2_; }
  double sigma_g2() const { return h2_ * sigma2_; }
  double sigma_e2() const { return complement_ * sigma2_; }
  double tau() const { return h2_ / complement_; }

 private:
  Eigen::VectorXd beta_;
  double h2_;
  double sigma2_;
  // 1 - h2, kept separately so components near h2 = 1 survive a round trip.
  double complement_;
};

/// A confidence set for h2, reported as an interval inside [0, 1].
struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 1.0;
  double level = 0.95;
  bool one_sided = false;
  bool touches_zero = false;
  bool touches_one = false;
  std::int64_t evaluations = 0;
  std::vector<std::string> warnings;

  double width() const { return upper - lower; }
  bool contains(double h2) const { return lower <= h2 && h2 <= upper; }
};

}  // namespace varcomp
