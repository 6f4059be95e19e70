#include "varcomp/batch.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "varcomp/parallel.hpp"
#include "varcomp/table_io.hpp"

namespace varcomp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Returns a skip reason, or nullptr when the column is usable.
const char* prepare_column(Eigen::VectorXd& y, bool log_normalize) {
  if (!y.allFinite()) {
    return kStatusNonFinite;
  }
  if (log_normalize) {
    if ((y.array() <= -1.0).any()) {
      return kStatusNonFinite;
    }
    y = y.array().log1p().matrix();
  }
  if (y.maxCoeff() == y.minCoeff()) {
    return kStatusZeroVariance;
  }
  if (log_normalize) {
    const double mean = y.mean();
    y.array() -= mean;
    const double sd = std::sqrt(y.squaredNorm() / static_cast<double>(y.size() - 1));
    y /= sd;
  }
  return nullptr;
}

void analyse(const SharedBasis& basis, const Eigen::VectorXd& column, const BatchInput& input,
             ResponseResult& out) {
  Eigen::VectorXd y = column;
  if (const char* skip = prepare_column(y, input.log_normalize)) {
    out.status = skip;
    return;
  }
  try {
    const RotatedData rd = rotate_response(basis, y);
    const RemlEstimate estimate = reml_estimate(rd);
    if (estimate.degenerate) {
      throw Error(ErrorCode::DegenerateFit,
                  "response lies in the column span of the covariates");
    }
    out.h2_hat = estimate.h2;
    out.sigma2_hat = estimate.sigma2;
    SearchConfig cfg;
    cfg.alpha = input.alpha;
    const ConfidenceInterval ci = input.mode == BatchMode::TwoSided
                                      ? invert_two_sided(rd, cfg)
                                      : invert_one_sided_lower(rd, cfg);
    out.lower = ci.lower;
    out.upper = ci.upper;
    out.evaluations = ci.evaluations + estimate.evaluations;
    out.warnings = ci.warnings;
  } catch (const Error& e) {
    out.status = std::string(to_string(e.code()));
    out.message = e.what();
  }
}

}  // namespace

BatchResult run_batch(const BatchInput& input, int workers) {
  const Eigen::Index n = input.expression.rows();
  const Eigen::Index d = input.expression.cols();
  if (d < 1) {
    throw Error(ErrorCode::InvalidArgument, "batch needs at least one response");
  }
  if (!input.ids.empty() && static_cast<Eigen::Index>(input.ids.size()) != d) {
    throw Error(ErrorCode::DimensionMismatch, "identifier count does not match response count");
  }
  if (!(input.alpha > 0.0 && input.alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }

  BatchResult result;
  result.mode = input.mode;
  result.alpha = input.alpha;
  result.workers = std::max(workers, 1);

  const auto decomposition_start = std::chrono::steady_clock::now();
  SharedBasis basis;
  if (input.basis) {
    basis = *input.basis;
    if (basis.n() != n) {
      throw Error(ErrorCode::DimensionMismatch, "cached basis does not match the response length");
    }
  } else {
    if (input.covariates.rows() != n) {
      throw Error(ErrorCode::DimensionMismatch, "covariates must have one row per observation");
    }
    Eigen::MatrixXd kernel = std::holds_alternative<Eigen::MatrixXd>(input.kernel)
                                 ? std::get<Eigen::MatrixXd>(input.kernel)
                                 : materialize_kernel(std::get<KernelSpec>(input.kernel), n);
    // Validation with a placeholder response; Y is checked per column.
    Eigen::VectorXd probe = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    require_valid(validate(probe, input.covariates, kernel));
    basis = decompose(kernel, input.covariates);
  }
  result.decomposition_seconds = seconds_since(decomposition_start);
  result.n = basis.n();
  result.p = basis.p();

  result.responses.resize(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    result.responses[j].id = input.ids.empty() ? std::to_string(j) : input.ids[j];
  }

  const auto start = std::chrono::steady_clock::now();
  parallel_for(static_cast<std::size_t>(d), workers, [&](std::size_t j) {
    analyse(basis, input.expression.col(static_cast<Eigen::Index>(j)), input,
            result.responses[j]);
  });
  result.post_decomposition_seconds = seconds_since(start);
  result.mean_seconds_per_response = result.post_decomposition_seconds / static_cast<double>(d);

  const std::vector<std::size_t> order = rank_by_lower_bound(result);
  for (std::size_t r = 0; r < order.size(); ++r) {
    result.responses[order[r]].rank = r + 1;
  }
  return result;
}

std::vector<std::size_t> rank_by_lower_bound(const BatchResult& result) {
  std::vector<std::size_t> order(result.responses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& rs = result.responses;
  std::stable_sort(order.begin(), order.end(), [&rs](std::size_t a, std::size_t b) {
    const ResponseResult& ra = rs[a];
    const ResponseResult& rb = rs[b];
    if (ra.ok() != rb.ok()) {
      return ra.ok();
    }
    if (ra.ok() && ra.lower != rb.lower) {
      return ra.lower > rb.lower;
    }
    return ra.id < rb.id;
  });
  return order;
}

std::string batch_csv(const BatchResult& result) {
  std::ostringstream out;
  out << "id,lower,upper,h2_hat,status\n";
  for (std::size_t idx : rank_by_lower_bound(result)) {
    const ResponseResult& r = result.responses[idx];
    out << r.id << ',';
    if (r.ok()) {
      out << format_double(r.lower) << ',' << format_double(r.upper) << ','
          << format_double(r.h2_hat);
    } else {
      out << ",,";
    }
    out << ',' << r.status << '\n';
  }
  return out.str();
}

std::string batch_summary_json(const BatchResult& result) {
  nlohmann::json doc;
  std::size_t ok = 0;
  std::size_t skipped = 0;
  for (const ResponseResult& r : result.responses) {
    if (r.ok()) {
      ++ok;
    } else if (r.status.rfind("skipped", 0) == 0) {
      ++skipped;
    }
  }
  nlohmann::json ranking = nlohmann::json::array();
  for (std::size_t idx : rank_by_lower_bound(result)) {
    if (result.responses[idx].ok()) {
      ranking.push_back(result.responses[idx].id);
    }
  }
  doc["n"] = result.n;
  doc["p"] = result.p;
  doc["responses"] = result.responses.size();
  doc["mode"] = result.mode == BatchMode::TwoSided ? "two_sided" : "one_sided_lower";
  doc["alpha"] = result.alpha;
  doc["workers"] = result.workers;
  doc["ok"] = ok;
  doc["skipped"] = skipped;
  doc["failed"] = result.responses.size() - ok - skipped;
  doc["decomposition_seconds"] = result.decomposition_seconds;
  doc["post_decomposition_seconds"] = result.post_decomposition_seconds;
  doc["mean_seconds_per_response"] = result.mean_seconds_per_response;
  doc["ranking"] = std::move(ranking);
  return doc.dump(2) + "\n";
}

BatchInput read_expression(const std::string& path) {
  Table table = read_table(path);
  BatchInput input;
  input.expression = std::move(table.values);
  input.ids = std::move(table.header);
  return input;
}

}  // namespace varcomp
