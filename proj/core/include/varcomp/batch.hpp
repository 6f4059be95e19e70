#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "varcomp/interval.hpp"
#include "varcomp/model.hpp"
#include "varcomp/preprocess.hpp"

namespace varcomp {

enum class BatchMode { TwoSided, OneSidedLower };

/// Many responses sharing one kernel and one design matrix.
struct BatchInput {
  Eigen::MatrixXd expression;   // n x d, one response per column
  std::vector<std::string> ids; // d identifiers; defaults to column indices
  Eigen::MatrixXd covariates;   // n x p
  std::variant<KernelSpec, Eigen::MatrixXd> kernel = Ar1Kernel{0.5};
  /// A precomputed basis (e.g. from the cache file) skips decomposition.
  std::optional<SharedBasis> basis;
  BatchMode mode = BatchMode::OneSidedLower;
  double alpha = 0.05;
  /// Replace each column by standardized log1p(column).
  bool log_normalize = false;
};

inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusZeroVariance = "skipped_zero_variance";
inline constexpr const char* kStatusNonFinite = "skipped_non_finite";

struct ResponseResult {
  std::string id;
  std::string status = kStatusOk;  // "ok", a skip reason, or an error code name
  std::string message;
  double lower = 0.0;
  double upper = 0.0;
  double h2_hat = 0.0;
  double sigma2_hat = 0.0;
  std::int64_t evaluations = 0;
  std::vector<std::string> warnings;
  /// 1-based position in the lower-bound ranking.
  std::size_t rank = 0;

  bool ok() const { return status == kStatusOk; }
};

struct BatchResult {
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  BatchMode mode = BatchMode::OneSidedLower;
  double alpha = 0.05;
  int workers = 1;
  std::vector<ResponseResult> responses;  // input order
  double decomposition_seconds = 0.0;
  double post_decomposition_seconds = 0.0;
  double mean_seconds_per_response = 0.0;
};

/// Decomposes the kernel once, then rotates and inverts every response on
/// `workers` threads. Per-response failures are recorded, never thrown.
/// Output (apart from timings) does not depend on the worker count.
BatchResult run_batch(const BatchInput& input, int workers);

/// Response indices ordered by decreasing lower bound; ties (and failed
/// responses, which sort last) are ordered by identifier, then input order.
std::vector<std::size_t> rank_by_lower_bound(const BatchResult& result);

/// Rows in rank order with columns id,lower,upper,h2_hat,status.
std::string batch_csv(const BatchResult& result);
std::string batch_summary_json(const BatchResult& result);

/// Reads an expression table (header row = identifiers) into a BatchInput.
BatchInput read_expression(const std::string& path);

}  // namespace varcomp
