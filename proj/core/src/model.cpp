#include "varcomp/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "varcomp/table_io.hpp"

namespace varcomp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void check_kernel_spec(const KernelSpec& spec) {
  std::visit(Overloaded{
                 [](const Ar1Kernel& k) {
                   if (!(k.rho > 0.0 && k.rho < 1.0)) {
                     throw Error(ErrorCode::InvalidArgument,
                                 "AR1 kernel requires 0 < rho < 1, got " + std::to_string(k.rho));
                   }
                 },
                 [](const ExpDecayKernel& k) {
                   if (!(k.length_scale > 0.0) || !std::isfinite(k.length_scale)) {
                     throw Error(ErrorCode::InvalidArgument,
                                 "exponential-decay kernel requires a > 0");
                   }
                   if (!k.coordinates.allFinite()) {
                     throw Error(ErrorCode::InvalidArgument, "kernel coordinates must be finite");
                   }
                 },
                 [](const DenseKernelFile&) {},
             },
             spec);
}

std::string describe(const KernelSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Ar1Kernel& k) { out << "ar1:" << k.rho; },
                 [&](const ExpDecayKernel& k) {
                   out << "expdecay:" << k.length_scale << " (" << k.coordinates.rows()
                       << " locations)";
                 },
                 [&](const DenseKernelFile& k) { out << "dense:" << k.path.string(); },
             },
             spec);
  return out.str();
}

Eigen::MatrixXd materialize_kernel(const KernelSpec& spec, Eigen::Index n) {
  check_kernel_spec(spec);
  return std::visit(
      Overloaded{
          [n](const Ar1Kernel& k) {
            Eigen::MatrixXd kernel(n, n);
            // Powers by repeated multiplication along each diagonal keep
            // the matrix exactly symmetric.
            Eigen::VectorXd powers(n);
            double value = 1.0;
            for (Eigen::Index d = 0; d < n; ++d) {
              powers[d] = value;
              value *= k.rho;
            }
            for (Eigen::Index j = 0; j < n; ++j) {
              for (Eigen::Index i = 0; i < n; ++i) {
                kernel(i, j) = powers[std::abs(i - j)];
              }
            }
            return kernel;
          },
          [n](const ExpDecayKernel& k) {
            if (k.coordinates.rows() != n) {
              throw Error(ErrorCode::DimensionMismatch,
                          "kernel has " + std::to_string(k.coordinates.rows()) +
                              " coordinates but the response has length " + std::to_string(n));
            }
            Eigen::MatrixXd kernel(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
              kernel(j, j) = 1.0;
              for (Eigen::Index i = j + 1; i < n; ++i) {
                double dist = (k.coordinates.row(i) - k.coordinates.row(j)).norm();
                double value = std::exp(-dist / k.length_scale);
                kernel(i, j) = value;
                kernel(j, i) = value;
              }
            }
            return kernel;
          },
          [n](const DenseKernelFile& k) {
            Eigen::MatrixXd kernel = read_matrix(k.path);
            if (kernel.rows() != n || kernel.cols() != n) {
              throw Error(ErrorCode::DimensionMismatch,
                          "kernel file " + k.path.string() + " is " +
                              std::to_string(kernel.rows()) + "x" + std::to_string(kernel.cols()) +
                              ", expected " + std::to_string(n) + "x" + std::to_string(n));
            }
            return kernel;
          },
      },
      spec);
}

Eigen::MatrixXd ModelData::kernel_matrix() const {
  if (const auto* dense = std::get_if<Eigen::MatrixXd>(&kernel)) {
    return *dense;
  }
  return materialize_kernel(std::get<KernelSpec>(kernel), n());
}

Eigen::Index column_rank(const Eigen::MatrixXd& x) {
  if (x.cols() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) {
    return 0;
  }
  double tol = static_cast<double>(x.rows()) * std::numeric_limits<double>::epsilon() * s[0];
  return (s.array() > tol).count();
}

ValidationReport validate(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
                          const Eigen::MatrixXd& kernel) {
  ValidationReport report;
  report.n = y.size();
  report.p = x.cols();
  auto fail = [&report](ErrorCode code, std::string message) {
    report.ok = false;
    report.failure = code;
    report.message = std::move(message);
    return report;
  };

  if (report.n < 2) {
    return fail(ErrorCode::TooFewObservations, "need at least 2 observations");
  }
  if (x.rows() != report.n) {
    return fail(ErrorCode::DimensionMismatch, "X has " + std::to_string(x.rows()) +
                                                  " rows but Y has length " +
                                                  std::to_string(report.n));
  }
  if (report.p >= report.n) {
    return fail(ErrorCode::TooFewObservations,
                "n = " + std::to_string(report.n) + " must exceed p = " + std::to_string(report.p));
  }
  if (!y.allFinite() || !x.allFinite()) {
    return fail(ErrorCode::InvalidArgument, "Y and X must be finite");
  }
  if (kernel.rows() != report.n || kernel.cols() != report.n) {
    return fail(ErrorCode::DimensionMismatch, "kernel must be " + std::to_string(report.n) + "x" +
                                                  std::to_string(report.n));
  }
  if (!kernel.allFinite()) {
    return fail(ErrorCode::InvalidArgument, "kernel must be finite");
  }

  report.rank = column_rank(x);
  report.symmetry_defect = (kernel - kernel.transpose()).cwiseAbs().maxCoeff();
  double scale = kernel.cwiseAbs().maxCoeff();

  if (report.rank < report.p) {
    return fail(ErrorCode::RankDeficientX, "X has rank " + std::to_string(report.rank) +
                                               " but " + std::to_string(report.p) + " columns");
  }
  if (report.symmetry_defect > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "kernel asymmetry " << report.symmetry_defect << " exceeds 1e-10 * max|K|";
    return fail(ErrorCode::NonSymmetricKernel, msg.str());
  }
  return report;
}

ValidationReport validate(const ModelData& data) {
  Eigen::MatrixXd kernel;
  try {
    kernel = data.kernel_matrix();
  } catch (const Error& e) {
    ValidationReport report;
    report.ok = false;
    report.failure = e.code();
    report.message = e.what();
    report.n = data.n();
    report.p = data.p();
    return report;
  }
  return validate(data.y, data.x, kernel);
}

void require_valid(const ValidationReport& report) {
  if (!report.ok) {
    throw Error(report.failure, report.message);
  }
}

Parameters::Parameters(Eigen::VectorXd beta, double h2, double sigma2)
    : beta_(std::move(beta)), h2_(h2), sigma2_(sigma2), complement_(1.0 - h2) {
  if (!(h2 >= 0.0 && h2 < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "h2 must lie in [0, 1)");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::InvalidArgument, "sigma2 must be positive");
  }
}

Parameters Parameters::from_components(Eigen::VectorXd beta, double sigma_g2, double sigma_e2) {
  if (!(sigma_g2 >= 0.0) || !(sigma_e2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need sigma_g2 >= 0 and sigma_e2 > 0");
  }
  double total = sigma_g2 + sigma_e2;
  Parameters out(std::move(beta), sigma_g2 / total, total);
  out.complement_ = sigma_e2 / total;
  return out;
}

}  // namespace varcomp
