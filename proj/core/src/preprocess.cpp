#include "varcomp/preprocess.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace varcomp {

namespace {

struct Spectrum {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd vectors;
};

// Reverses Eigen's increasing order and clamps rounding-level negatives.
void order_and_clamp(Eigen::VectorXd& lambdas, Eigen::MatrixXd* vectors) {
  lambdas.reverseInPlace();
  if (vectors != nullptr) {
    *vectors = vectors->rowwise().reverse().eval();
  }
  double largest = lambdas.size() > 0 ? lambdas[0] : 0.0;
  double smallest = lambdas.size() > 0 ? lambdas[lambdas.size() - 1] : 0.0;
  if (smallest < -kNegativeEigenTolerance * std::max(largest, 0.0)) {
    std::ostringstream msg;
    msg << "kernel has eigenvalue " << smallest << " below -1e-8 * " << largest
        << "; K must be positive semidefinite";
    throw Error(ErrorCode::IndefiniteKernel, msg.str());
  }
  lambdas = lambdas.cwiseMax(0.0);
}

Spectrum eigen_decompose(const Eigen::MatrixXd& kernel, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      kernel, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, "symmetric eigensolver did not converge");
  }
  Spectrum s;
  s.lambdas = solver.eigenvalues();
  if (vectors) {
    s.vectors = solver.eigenvectors();
    order_and_clamp(s.lambdas, &s.vectors);
  } else {
    order_and_clamp(s.lambdas, nullptr);
  }
  return s;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> bytes{};
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), 8);
}

std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return v;
}

void write_f64(std::ostream& out, double value) {
  write_u64(out, std::bit_cast<std::uint64_t>(value));
}

double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

constexpr char kMagic[6] = {'V', 'C', 'E', 'I', 'G', '1'};

}  // namespace

void check_rotated(const RotatedData& rd) {
  if (rd.lambdas.size() != rd.y.size() || rd.x.rows() != rd.y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "rotated data components disagree in length");
  }
  if (rd.n() <= rd.p()) {
    throw Error(ErrorCode::TooFewObservations, "n must exceed p");
  }
}

SharedBasis decompose(const Eigen::MatrixXd& kernel, const Eigen::MatrixXd& x,
                      const DecomposeOptions& options) {
  if (kernel.rows() != kernel.cols() || kernel.rows() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel and X row counts disagree");
  }
  Spectrum s = eigen_decompose(kernel, true);
  SharedBasis basis;
  basis.x = s.vectors.transpose() * x;
  basis.lambdas = std::move(s.lambdas);
  if (options.normalize && basis.lambdas.size() > 0 && basis.lambdas[0] > 0.0) {
    basis.kernel_scale = basis.lambdas[0];
    basis.lambdas /= basis.kernel_scale;
  }
  if (options.keep_rotation) {
    basis.rotation = std::move(s.vectors);
  }
  return basis;
}

SharedBasis decompose(const ModelData& data, const DecomposeOptions& options) {
  Eigen::MatrixXd kernel = data.kernel_matrix();
  require_valid(validate(data.y, data.x, kernel));
  return decompose(kernel, data.x, options);
}

Eigen::VectorXd kernel_eigenvalues(const Eigen::MatrixXd& kernel) {
  if (kernel.rows() != kernel.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel must be square");
  }
  return eigen_decompose(kernel, false).lambdas;
}

RotatedData rotate_response(const SharedBasis& basis, const Eigen::VectorXd& y) {
  if (!basis.has_rotation()) {
    throw Error(ErrorCode::InvalidArgument, "basis was decomposed without keeping the rotation");
  }
  if (y.size() != basis.n()) {
    throw Error(ErrorCode::DimensionMismatch, "response has length " + std::to_string(y.size()) +
                                                  ", basis has n = " + std::to_string(basis.n()));
  }
  return with_rotated_response(basis, basis.rotation.transpose() * y);
}

RotatedData with_rotated_response(const SharedBasis& basis, Eigen::VectorXd y_rotated) {
  if (y_rotated.size() != basis.n()) {
    throw Error(ErrorCode::DimensionMismatch, "rotated response length does not match basis");
  }
  return RotatedData{basis.lambdas, std::move(y_rotated), basis.x};
}

RotatedData preprocess(const ModelData& data) {
  Eigen::MatrixXd kernel = data.kernel_matrix();
  require_valid(validate(data.y, data.x, kernel));
  Spectrum s = eigen_decompose(kernel, true);
  return RotatedData{std::move(s.lambdas), s.vectors.transpose() * data.y,
                     s.vectors.transpose() * data.x};
}

void save_basis(const std::filesystem::path& path, const SharedBasis& basis) {
  if (!basis.has_rotation()) {
    throw Error(ErrorCode::InvalidArgument, "cannot cache a basis without its rotation");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  const auto n = static_cast<std::uint64_t>(basis.n());
  const auto p = static_cast<std::uint64_t>(basis.p());
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, n);
  write_u64(out, p);
  for (Eigen::Index i = 0; i < basis.n(); ++i) {
    write_f64(out, basis.lambdas[i]);
  }
  for (Eigen::Index i = 0; i < basis.n(); ++i) {
    for (Eigen::Index j = 0; j < basis.p(); ++j) {
      write_f64(out, basis.x(i, j));
    }
  }
  for (Eigen::Index i = 0; i < basis.n(); ++i) {
    for (Eigen::Index j = 0; j < basis.n(); ++j) {
      write_f64(out, basis.rotation(i, j));
    }
  }
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path.string());
  }
}

SharedBasis load_basis(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::IoError, path.string() + " is not an eigendecomposition cache");
  }
  const std::uint64_t n = read_u64(in);
  const std::uint64_t p = read_u64(in);
  if (!in || n == 0 || p >= n || n > (std::uint64_t{1} << 20)) {
    throw Error(ErrorCode::IoError, path.string() + ": bad cache dimensions");
  }
  const auto ni = static_cast<Eigen::Index>(n);
  const auto pi = static_cast<Eigen::Index>(p);
  SharedBasis basis;
  basis.lambdas.resize(ni);
  basis.x.resize(ni, pi);
  basis.rotation.resize(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    basis.lambdas[i] = read_f64(in);
  }
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = 0; j < pi; ++j) {
      basis.x(i, j) = read_f64(in);
    }
  }
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = 0; j < ni; ++j) {
      basis.rotation(i, j) = read_f64(in);
    }
  }
  if (!in) {
    throw Error(ErrorCode::IoError, path.string() + ": truncated cache");
  }
  return basis;
}

}  // namespace varcomp
