#include "varcomp/simulate.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "varcomp/comparators.hpp"
#include "varcomp/interval.hpp"
#include "varcomp/parallel.hpp"
#include "varcomp/table_io.hpp"

namespace varcomp {

namespace {

constexpr std::uint64_t kKernelStream = 0x6b65726e656cULL;  // "kernel"
constexpr std::uint64_t kFixedXStream = 0x66697865642d78ULL;  // "fixed-x"

struct Outcome {
  bool failed = false;
  bool covered = false;
  double width = 0.0;
  double evaluations = 0.0;
  double seconds = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::MatrixXd standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

Eigen::VectorXd rotated_noise(const SimCell& cell, const Eigen::VectorXd& lambdas, Rng& rng) {
  Eigen::VectorXd e(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    const double v = cell.h2 * lambdas[i] + 1.0 - cell.h2;
    e[i] = std::sqrt(cell.sigma2 * v) * rng.normal();
  }
  return e;
}

void check_cell(const SimCell& cell) {
  if (!(cell.h2 >= 0.0 && cell.h2 < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "simulation h2 must lie in [0, 1)");
  }
  if (!(cell.sigma2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "simulation sigma2 must be positive");
  }
  if (cell.p < 0 || cell.n <= cell.p) {
    throw Error(ErrorCode::TooFewObservations, "simulation needs n > p");
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::ProposedTwoSided: return "proposed_two_sided";
    case Method::ProposedOneSided: return "proposed_one_sided";
    case Method::Wald: return "wald";
    case Method::Rlr: return "rlr";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::ProposedTwoSided, Method::ProposedOneSided, Method::Wald,
                   Method::Rlr}) {
    if (to_string(m) == name) {
      return m;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

void SimDesign::check() const {
  if (replicates < 1) {
    throw Error(ErrorCode::InvalidArgument, "replicates must be at least 1");
  }
  if (n_list.empty() || kernel_params.empty() || h2_list.empty()) {
    throw Error(ErrorCode::InvalidArgument, "simulation grid lists must be non-empty");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
  for (double h2 : h2_list) {
    if (!(h2 >= 0.0 && h2 < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "simulation h2 values must lie in [0, 1)");
    }
  }
  for (Eigen::Index n : n_list) {
    if (n <= p || p < 0) {
      throw Error(ErrorCode::TooFewObservations, "every n must exceed p");
    }
  }
  for (double param : kernel_params) {
    if (family == KernelFamily::Ar1) {
      check_kernel_spec(Ar1Kernel{param});
    } else if (!(param > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "length scale must be positive");
    }
  }
  if (!(sigma2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "sigma2 must be positive");
  }
}

KernelSpec cell_kernel(const SimCell& cell, Rng& rng) {
  if (cell.family == KernelFamily::Ar1) {
    return Ar1Kernel{cell.kernel_param};
  }
  ExpDecayKernel k;
  k.length_scale = cell.kernel_param;
  k.coordinates.resize(cell.n, 2);
  for (Eigen::Index i = 0; i < cell.n; ++i) {
    k.coordinates(i, 0) = rng.uniform();
    k.coordinates(i, 1) = rng.uniform();
  }
  return k;
}

ModelData generate(const SimCell& cell, const SharedBasis& basis, const KernelSpec& kernel,
                   Rng& rng) {
  check_cell(cell);
  if (!basis.has_rotation() || basis.n() != cell.n) {
    throw Error(ErrorCode::DimensionMismatch, "basis must match n and keep its rotation");
  }
  Eigen::MatrixXd x = standard_normal_matrix(cell.n, cell.p, rng);
  Eigen::VectorXd y_rotated =
      basis.rotation.transpose() * (x * Eigen::VectorXd::Constant(cell.p, cell.beta));
  y_rotated += rotated_noise(cell, basis.lambdas * basis.kernel_scale, rng);
  ModelData data;
  data.y = basis.rotation * y_rotated;
  data.x = std::move(x);
  data.kernel = kernel;
  return data;
}

RotatedData generate_rotated(const SimCell& cell, const Eigen::VectorXd& lambdas, Rng& rng,
                             const Eigen::MatrixXd* fixed_x_rotated) {
  check_cell(cell);
  if (lambdas.size() != cell.n) {
    throw Error(ErrorCode::DimensionMismatch, "eigenvalue count must equal n");
  }
  RotatedData rd;
  rd.lambdas = lambdas;
  rd.x = fixed_x_rotated != nullptr ? *fixed_x_rotated
                                    : standard_normal_matrix(cell.n, cell.p, rng);
  rd.y = rotated_noise(cell, lambdas, rng);
  if (cell.beta != 0.0 && cell.p > 0) {
    rd.y += rd.x * Eigen::VectorXd::Constant(cell.p, cell.beta);
  }
  return rd;
}

const SimRow* SimReport::find(Eigen::Index n, double kernel_param, double h2,
                              Method method) const {
  for (const SimRow& row : rows) {
    if (row.n == n && row.kernel_param == kernel_param && row.h2 == h2 && row.method == method) {
      return &row;
    }
  }
  return nullptr;
}

SimReport run(const SimDesign& design, const std::vector<Method>& methods, int workers) {
  design.check();
  if (methods.empty()) {
    throw Error(ErrorCode::InvalidArgument, "at least one method is required");
  }
  SimReport report;
  report.design = design;
  report.methods = methods;

  SearchConfig cfg;
  cfg.alpha = design.alpha;
  const std::size_t m_count = methods.size();
  std::uint64_t cell_index = 0;
  std::uint64_t kernel_index = 0;

  for (Eigen::Index n : design.n_list) {
    for (double param : design.kernel_params) {
      SimCell base{n, design.family, param, 0.0, design.sigma2, design.p, design.beta};
      Rng kernel_rng(derive_seed(derive_seed(design.seed, kKernelStream), kernel_index++));
      const KernelSpec spec = cell_kernel(base, kernel_rng);
      const Eigen::VectorXd lambdas = kernel_eigenvalues(materialize_kernel(spec, n));

      for (double h2 : design.h2_list) {
        SimCell cell = base;
        cell.h2 = h2;
        const std::uint64_t cell_seed = derive_seed(design.seed, cell_index++);
        Eigen::MatrixXd fixed_x;
        if (design.fixed_x) {
          Rng x_rng(derive_seed(cell_seed, kFixedXStream));
          fixed_x = standard_normal_matrix(n, design.p, x_rng);
        }

        const auto reps = static_cast<std::size_t>(design.replicates);
        std::vector<Outcome> outcomes(reps * m_count);
        parallel_for(reps, workers, [&](std::size_t r) {
          Rng rng(derive_seed(cell_seed, r));
          const RotatedData rd =
              generate_rotated(cell, lambdas, rng, design.fixed_x ? &fixed_x : nullptr);

          std::optional<RemlEstimate> estimate;
          double estimate_seconds = 0.0;
          for (std::size_t m = 0; m < m_count; ++m) {
            Outcome& out = outcomes[r * m_count + m];
            const auto start = std::chrono::steady_clock::now();
            try {
              ConfidenceInterval ci;
              switch (methods[m]) {
                case Method::ProposedTwoSided:
                  ci = invert_two_sided(rd, cfg);
                  break;
                case Method::ProposedOneSided:
                  ci = invert_one_sided_lower(rd, cfg);
                  break;
                case Method::Wald:
                case Method::Rlr: {
                  if (!estimate) {
                    estimate = reml_estimate(rd);
                    estimate_seconds = seconds_since(start);
                  }
                  ci = methods[m] == Method::Wald ? wald_interval(rd, design.alpha, *estimate).interval
                                                  : rlr_interval(rd, design.alpha, *estimate).interval;
                  out.seconds += estimate_seconds;
                  ci.evaluations += estimate->evaluations;
                  break;
                }
              }
              out.covered = ci.contains(h2);
              out.width = ci.width();
              out.evaluations = static_cast<double>(ci.evaluations);
            } catch (const Error&) {
              out.failed = true;
            }
            out.seconds += seconds_since(start);
          }
        });

        for (std::size_t m = 0; m < m_count; ++m) {
          SimRow row;
          row.n = n;
          row.kernel_param = param;
          row.h2 = h2;
          row.method = methods[m];
          row.replicates = design.replicates;
          double covered = 0.0;
          double failures = 0.0;
          double width_sum = 0.0;
          double width_sq = 0.0;
          double evals = 0.0;
          double secs = 0.0;
          for (std::size_t r = 0; r < reps; ++r) {
            const Outcome& out = outcomes[r * m_count + m];
            secs += out.seconds;
            if (out.failed) {
              failures += 1.0;
              continue;
            }
            covered += out.covered ? 1.0 : 0.0;
            width_sum += out.width;
            width_sq += out.width * out.width;
            evals += out.evaluations;
          }
          const double total = static_cast<double>(reps);
          const double ok = total - failures;
          row.coverage = covered / total;
          row.coverage_se = std::sqrt(row.coverage * (1.0 - row.coverage) / total);
          row.failure_rate = failures / total;
          if (ok > 0.0) {
            row.mean_width = width_sum / ok;
            row.mean_evaluations = evals / ok;
            const double var = ok > 1.0 ? (width_sq - ok * row.mean_width * row.mean_width) / (ok - 1.0)
                                        : 0.0;
            row.width_se = std::sqrt(std::max(var, 0.0) / ok);
          }
          row.seconds_per_interval = secs / total;
          report.rows.push_back(row);
        }
      }
    }
  }
  return report;
}

std::string report_csv(const SimReport& report, bool include_timing) {
  std::ostringstream out;
  out << "n,kernel_param,h2,method,replicates,coverage,coverage_se,mean_width,width_se,"
         "failure_rate,mean_evaluations";
  if (include_timing) {
    out << ",seconds_per_interval";
  }
  out << '\n';
  for (const SimRow& row : report.rows) {
    out << row.n << ',' << format_double(row.kernel_param) << ',' << format_double(row.h2) << ','
        << to_string(row.method) << ',' << row.replicates << ',' << format_double(row.coverage)
        << ',' << format_double(row.coverage_se) << ',' << format_double(row.mean_width) << ','
        << format_double(row.width_se) << ',' << format_double(row.failure_rate) << ','
        << format_double(row.mean_evaluations);
    if (include_timing) {
      out << ',' << format_double(row.seconds_per_interval);
    }
    out << '\n';
  }
  return out.str();
}

std::string report_json(const SimReport& report) {
  nlohmann::json doc;
  const SimDesign& d = report.design;
  doc["design"] = {
      {"n_list", d.n_list},
      {"kernel", d.family == KernelFamily::Ar1 ? "ar1" : "expdecay"},
      {"kernel_params", d.kernel_params},
      {"h2_list", d.h2_list},
      {"sigma2", d.sigma2},
      {"p", d.p},
      {"beta", d.beta},
      {"replicates", d.replicates},
      {"alpha", d.alpha},
      {"seed", d.seed},
      {"fixed_x", d.fixed_x},
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const SimRow& row : report.rows) {
    rows.push_back({
        {"n", row.n},
        {"kernel_param", row.kernel_param},
        {"h2", row.h2},
        {"method", std::string(to_string(row.method))},
        {"replicates", row.replicates},
        {"coverage", row.coverage},
        {"coverage_se", row.coverage_se},
        {"mean_width", row.mean_width},
        {"width_se", row.width_se},
        {"failure_rate", row.failure_rate},
        {"mean_evaluations", row.mean_evaluations},
        {"seconds_per_interval", row.seconds_per_interval},
    });
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace varcomp
