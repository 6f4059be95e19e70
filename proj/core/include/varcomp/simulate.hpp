#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "varcomp/model.hpp"
#include "varcomp/preprocess.hpp"
#include "varcomp/rng.hpp"

namespace varcomp {

enum class KernelFamily { Ar1, ExpDecay };

enum class Method { ProposedTwoSided, ProposedOneSided, Wald, Rlr };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);

/// A grid of simulation settings. Every (n, kernel parameter, h2)
/// combination is one cell; each cell gets `replicates` independent datasets.
struct SimDesign {
  std::vector<Eigen::Index> n_list{500};
  KernelFamily family = KernelFamily::Ar1;
  /// rho for AR1, length scale a for ExpDecay (locations uniform on the unit
  /// square, drawn once per cell).
  std::vector<double> kernel_params{0.95};
  std::vector<double> h2_list{0.5};
  double sigma2 = 1.0;
  Eigen::Index p = 5;
  double beta = 0.0;  // every coefficient set to this value
  int replicates = 100;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  /// Draw X once per cell instead of once per replicate.
  bool fixed_x = false;

  void check() const;
};

/// One parameter setting, the unit the generator works on.
struct SimCell {
  Eigen::Index n = 500;
  KernelFamily family = KernelFamily::Ar1;
  double kernel_param = 0.95;
  double h2 = 0.5;
  double sigma2 = 1.0;
  Eigen::Index p = 5;
  double beta = 0.0;
};

/// Kernel spec for a cell; ExpDecay locations are drawn from `rng`.
KernelSpec cell_kernel(const SimCell& cell, Rng& rng);

/// Draws X (standard normal) and Y ~ N(X beta, sigma2 (h2 K + (1 - h2) I))
/// through the eigenbasis: Y_O = X_O beta + e with independent
/// e_i ~ N(0, sigma2 (h2 lambda_i + 1 - h2)), then Y = O Y_O. Requires a
/// basis that kept its rotation.
ModelData generate(const SimCell& cell, const SharedBasis& basis, const KernelSpec& kernel,
                   Rng& rng);

/// Same draw directly in the eigenbasis, O(n p). With a fresh standard
/// normal X, O^T X is again i.i.d. standard normal, so X_O is drawn directly
/// unless `fixed_x_rotated` is supplied.
RotatedData generate_rotated(const SimCell& cell, const Eigen::VectorXd& lambdas, Rng& rng,
                             const Eigen::MatrixXd* fixed_x_rotated = nullptr);

struct SimRow {
  Eigen::Index n = 0;
  double kernel_param = 0.0;
  double h2 = 0.0;
  Method method = Method::ProposedTwoSided;
  int replicates = 0;
  double coverage = 0.0;
  double coverage_se = 0.0;  // sqrt(coverage (1 - coverage) / replicates)
  double mean_width = 0.0;   // over successful replicates
  double width_se = 0.0;
  double failure_rate = 0.0;
  double mean_evaluations = 0.0;
  double seconds_per_interval = 0.0;
};

struct SimReport {
  SimDesign design;
  std::vector<Method> methods;
  std::vector<SimRow> rows;  // cell-major, methods in the order requested

  const SimRow* find(Eigen::Index n, double kernel_param, double h2, Method method) const;
};

/// Runs every cell and method. Replicates run in parallel; each owns an RNG
/// seeded from (master seed, cell index, replicate index), and failures are
/// counted as non-covering and reported in failure_rate.
SimReport run(const SimDesign& design, const std::vector<Method>& methods, int workers);

std::string report_csv(const SimReport& report, bool include_timing = true);
std::string report_json(const SimReport& report);

}  // namespace varcomp
