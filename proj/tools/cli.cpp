#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "varcomp/batch.hpp"
#include "varcomp/comparators.hpp"
#include "varcomp/interval.hpp"
#include "varcomp/parallel.hpp"
#include "varcomp/preprocess.hpp"
#include "varcomp/simulate.hpp"
#include "varcomp/table_io.hpp"

namespace varcomp::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Common {
  std::string kernel;
  std::string coords;
  std::string covariates;
  double alpha = 0.05;
  bool one_sided = false;
  std::string cache;
  std::string output;
  std::string format = "csv";
  int workers = 1;
};

struct CiOptions {
  std::string response;
  std::string column;
  std::string method = "proposed";
};

struct BatchOptions {
  std::string expression;
  std::string summary;
  bool log_normalize = false;
};

struct SimulateOptions {
  std::vector<Eigen::Index> n_list{200};
  std::string family = "ar1";
  std::vector<double> params{0.95};
  std::vector<double> h2_list{0.5};
  double sigma2 = 1.0;
  Eigen::Index p = 5;
  double beta = 0.0;
  int replicates = 100;
  std::uint64_t seed = 1;
  std::string method = "all";
  bool fixed_x = false;
  bool no_timing = false;
};

struct BenchOptions {
  std::vector<Eigen::Index> n_list{200, 500, 1000, 2000};
  int repeats = 5;
  double h2 = 0.5;
  Eigen::Index p = 5;
  std::uint64_t seed = 1;
  std::string method = "proposed";
  bool include_decomposition = false;
};

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "--alpha must lie in (0, 1), got " + format_double(alpha));
  }
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw Error(ErrorCode::InvalidArgument, "--format must be csv or json");
  }
}

void emit(const Common& common, const std::string& text, std::ostream& out) {
  if (common.output.empty()) {
    out << text;
  } else {
    write_text_file(common.output, text);
  }
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) {
      return value;
    }
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "cannot parse " + what + " '" + text + "'");
}

Eigen::MatrixXd read_covariates(const std::string& path, Eigen::Index n) {
  if (path.empty()) {
    return Eigen::MatrixXd::Ones(n, 1);
  }
  return read_matrix(path);
}

Eigen::MatrixXd kernel_for(const Common& common, Eigen::Index n) {
  if (common.kernel.rfind("expdecay:", 0) == 0 && common.coords.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--coords is required for an expdecay kernel");
  }
  return materialize_kernel(parse_kernel(common.kernel, common.coords), n);
}

// A cached basis must describe this kernel and these covariates. The
// covariate check is exact up to rounding; the kernel check tests the
// leading and trailing eigenpairs.
void check_cached_basis(const SharedBasis& basis, const Eigen::MatrixXd& kernel,
                        const Eigen::MatrixXd& x, const std::string& path) {
  const Eigen::Index n = kernel.rows();
  if (basis.n() != n || basis.p() != x.cols()) {
    throw Error(ErrorCode::DimensionMismatch, path + ": cached basis has n = " +
                                                  std::to_string(basis.n()) + ", p = " +
                                                  std::to_string(basis.p()));
  }
  const double scale = std::max(1.0, basis.kernel_scale * basis.lambdas[0]);
  for (Eigen::Index i : {Eigen::Index{0}, n - 1}) {
    const Eigen::VectorXd v = basis.rotation.col(i);
    const double defect =
        (kernel * v - basis.kernel_scale * basis.lambdas[i] * v).norm();
    if (defect > 1e-6 * scale) {
      throw Error(ErrorCode::DimensionMismatch, path + ": cached basis does not match the kernel");
    }
  }
  const Eigen::MatrixXd rotated = basis.rotation.transpose() * x;
  if ((rotated - basis.x).norm() > 1e-8 * std::max(1.0, x.norm())) {
    throw Error(ErrorCode::DimensionMismatch,
                path + ": cached basis does not match the covariates");
  }
}

SharedBasis load_or_build_basis(const Common& common, const Eigen::MatrixXd& kernel,
                                const Eigen::MatrixXd& x, std::ostream& err) {
  if (!common.cache.empty() && std::filesystem::exists(common.cache)) {
    SharedBasis basis = load_basis(common.cache);
    check_cached_basis(basis, kernel, x, common.cache);
    err << "# loaded eigendecomposition from " << common.cache << '\n';
    return basis;
  }
  SharedBasis basis = decompose(kernel, x);
  if (!common.cache.empty()) {
    save_basis(common.cache, basis);
    err << "# wrote eigendecomposition to " << common.cache << '\n';
  }
  return basis;
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const std::string& item : items) {
    if (!out.empty()) {
      out += sep;
    }
    out += item;
  }
  return out;
}

struct CiRow {
  std::string method;
  ConfidenceInterval interval;
};

int cmd_ci(const Common& common, const CiOptions& opts, std::ostream& out, std::ostream& err) {
  check_alpha(common.alpha);
  check_format(common.format);
  if (opts.method != "proposed" && opts.method != "wald" && opts.method != "rlr" &&
      opts.method != "all") {
    throw Error(ErrorCode::InvalidArgument, "--method must be proposed, wald, rlr or all");
  }

  Table table = read_table(opts.response);
  Eigen::Index col = 0;
  if (!opts.column.empty()) {
    const auto it = std::find(table.header.begin(), table.header.end(), opts.column);
    if (it == table.header.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  opts.response + " has no column named '" + opts.column + "'");
    }
    col = it - table.header.begin();
  }
  const Eigen::VectorXd y = table.values.col(col);
  const Eigen::Index n = y.size();
  const Eigen::MatrixXd x = read_covariates(common.covariates, n);
  const Eigen::MatrixXd kernel = kernel_for(common, n);
  require_valid(validate(y, x, kernel));

  const auto decomposition_start = Clock::now();
  const SharedBasis basis = load_or_build_basis(common, kernel, x, err);
  const double decomposition_seconds = seconds_since(decomposition_start);
  const RotatedData rd = rotate_response(basis, y);

  const RemlEstimate est = reml_estimate(rd);
  if (est.degenerate) {
    throw Error(ErrorCode::DegenerateFit, "response lies in the column span of the covariates");
  }

  SearchConfig cfg;
  cfg.alpha = common.alpha;
  std::vector<CiRow> rows;
  const bool all = opts.method == "all";
  if (all || opts.method == "proposed") {
    if (common.one_sided) {
      rows.push_back({"proposed_one_sided", invert_one_sided_lower(rd, cfg)});
    } else {
      rows.push_back({"proposed_two_sided", invert_two_sided(rd, cfg)});
    }
  }
  if (all || opts.method == "wald") {
    rows.push_back({"wald", wald_interval(rd, common.alpha, est).interval});
  }
  if (all || opts.method == "rlr") {
    rows.push_back({"rlr", rlr_interval(rd, common.alpha, est).interval});
  }

  std::string text;
  if (common.format == "csv") {
    std::ostringstream s;
    s << "method,lower,upper,level,h2_hat,sigma2_hat,evaluations,warnings\n";
    for (const CiRow& row : rows) {
      s << row.method << ',' << format_double(row.interval.lower) << ','
        << format_double(row.interval.upper) << ',' << format_double(row.interval.level) << ','
        << format_double(est.h2) << ',' << format_double(est.sigma2) << ','
        << row.interval.evaluations << ',' << join(row.interval.warnings, ';') << '\n';
    }
    text = s.str();
  } else {
    nlohmann::json doc;
    doc["n"] = rd.n();
    doc["p"] = rd.p();
    doc["estimate"] = {{"h2", est.h2},
                       {"sigma2", est.sigma2},
                       {"profile_loglik", est.profile_loglik},
                       {"unidentifiable", est.unidentifiable},
                       {"evaluations", est.evaluations}};
    doc["decomposition_seconds"] = decomposition_seconds;
    nlohmann::json intervals = nlohmann::json::array();
    for (const CiRow& row : rows) {
      intervals.push_back({{"method", row.method},
                           {"lower", row.interval.lower},
                           {"upper", row.interval.upper},
                           {"level", row.interval.level},
                           {"touches_zero", row.interval.touches_zero},
                           {"touches_one", row.interval.touches_one},
                           {"evaluations", row.interval.evaluations},
                           {"warnings", row.interval.warnings}});
    }
    doc["intervals"] = std::move(intervals);
    text = doc.dump(2) + "\n";
  }
  if (est.unidentifiable) {
    err << "# warning: h2 is not identified for this kernel\n";
  }
  emit(common, text, out);
  return kExitOk;
}

int cmd_batch(const Common& common, const BatchOptions& opts, std::ostream& out,
              std::ostream& err) {
  check_alpha(common.alpha);
  check_format(common.format);
  BatchInput input = read_expression(opts.expression);
  const Eigen::Index n = input.expression.rows();
  input.covariates = read_covariates(common.covariates, n);
  input.mode = common.one_sided ? BatchMode::OneSidedLower : BatchMode::TwoSided;
  input.alpha = common.alpha;
  input.log_normalize = opts.log_normalize;
  const Eigen::MatrixXd kernel = kernel_for(common, n);
  require_valid(validate(Eigen::VectorXd::LinSpaced(n, 0.0, 1.0), input.covariates, kernel));

  const auto decomposition_start = Clock::now();
  input.basis = load_or_build_basis(common, kernel, input.covariates, err);
  const double decomposition_seconds = seconds_since(decomposition_start);

  BatchResult result = run_batch(input, common.workers);
  result.decomposition_seconds = decomposition_seconds;

  std::string text;
  if (common.format == "csv") {
    text = batch_csv(result);
  } else {
    nlohmann::json doc = nlohmann::json::parse(batch_summary_json(result));
    nlohmann::json responses = nlohmann::json::array();
    for (std::size_t idx : rank_by_lower_bound(result)) {
      const ResponseResult& r = result.responses[idx];
      nlohmann::json row = {{"id", r.id}, {"status", r.status}, {"rank", r.rank}};
      if (r.ok()) {
        row["lower"] = r.lower;
        row["upper"] = r.upper;
        row["h2_hat"] = r.h2_hat;
        row["sigma2_hat"] = r.sigma2_hat;
        row["evaluations"] = r.evaluations;
        row["warnings"] = r.warnings;
      } else if (!r.message.empty()) {
        row["message"] = r.message;
      }
      responses.push_back(std::move(row));
    }
    doc["results"] = std::move(responses);
    text = doc.dump(2) + "\n";
  }
  if (!opts.summary.empty()) {
    write_text_file(opts.summary, batch_summary_json(result));
  }
  std::size_t ok = 0;
  for (const ResponseResult& r : result.responses) {
    ok += r.ok() ? 1 : 0;
  }
  err << "# " << ok << " of " << result.responses.size() << " responses analysed in "
      << format_double(result.post_decomposition_seconds) << " s after decomposition\n";
  emit(common, text, out);
  return kExitOk;
}

std::vector<Method> simulation_methods(const std::string& name, bool one_sided) {
  if (name == "all") {
    return {Method::ProposedTwoSided, Method::ProposedOneSided, Method::Wald, Method::Rlr};
  }
  if (name == "proposed") {
    return {one_sided ? Method::ProposedOneSided : Method::ProposedTwoSided};
  }
  if (name == "wald") {
    return {Method::Wald};
  }
  if (name == "rlr") {
    return {Method::Rlr};
  }
  return {method_from_string(name)};
}

int cmd_simulate(const Common& common, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  check_alpha(common.alpha);
  check_format(common.format);
  SimDesign design;
  design.n_list = opts.n_list;
  if (opts.family == "ar1") {
    design.family = KernelFamily::Ar1;
  } else if (opts.family == "expdecay") {
    design.family = KernelFamily::ExpDecay;
  } else {
    throw Error(ErrorCode::InvalidArgument, "--family must be ar1 or expdecay");
  }
  design.kernel_params = opts.params;
  design.h2_list = opts.h2_list;
  design.sigma2 = opts.sigma2;
  design.p = opts.p;
  design.beta = opts.beta;
  design.replicates = opts.replicates;
  design.alpha = common.alpha;
  design.seed = opts.seed;
  design.fixed_x = opts.fixed_x;
  design.check();

  const auto start = Clock::now();
  const SimReport report =
      run(design, simulation_methods(opts.method, common.one_sided), common.workers);
  err << "# simulation finished in " << format_double(seconds_since(start)) << " s\n";
  emit(common, common.format == "csv" ? report_csv(report, !opts.no_timing) : report_json(report),
       out);
  return kExitOk;
}

struct BenchRow {
  Eigen::Index n = 0;
  double decomposition_seconds = 0.0;
  std::vector<double> seconds;
  std::int64_t evaluations = 0;
  double lower = 0.0;
  double upper = 0.0;
};

int cmd_bench(const Common& common, const BenchOptions& opts, std::ostream& out,
              std::ostream& err) {
  check_alpha(common.alpha);
  check_format(common.format);
  if (opts.repeats < 1) {
    throw Error(ErrorCode::InvalidArgument, "--repeats must be positive");
  }
  if (!(opts.h2 >= 0.0 && opts.h2 < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "--h2 must lie in [0, 1)");
  }
  if (opts.method != "proposed" && opts.method != "wald" && opts.method != "rlr") {
    throw Error(ErrorCode::InvalidArgument, "--method must be proposed, wald or rlr");
  }
  const KernelSpec family = parse_kernel(common.kernel, "");
  if (std::holds_alternative<DenseKernelFile>(family)) {
    throw Error(ErrorCode::InvalidArgument, "bench generates its own data; use ar1 or expdecay");
  }

  std::vector<BenchRow> rows;
  for (std::size_t cell_index = 0; cell_index < opts.n_list.size(); ++cell_index) {
    SimCell cell;
    cell.n = opts.n_list[cell_index];
    cell.h2 = opts.h2;
    cell.p = opts.p;
    Rng rng(derive_seed(opts.seed, cell_index));
    KernelSpec spec = family;
    if (const auto* ar1 = std::get_if<Ar1Kernel>(&family)) {
      cell.family = KernelFamily::Ar1;
      cell.kernel_param = ar1->rho;
    } else {
      cell.family = KernelFamily::ExpDecay;
      cell.kernel_param = std::get<ExpDecayKernel>(family).length_scale;
      spec = cell_kernel(cell, rng);
    }
    const Eigen::MatrixXd kernel = materialize_kernel(spec, cell.n);
    const SharedBasis seed_basis = decompose(kernel, Eigen::MatrixXd::Ones(cell.n, 1));
    const ModelData data = generate(cell, seed_basis, spec, rng);

    BenchRow row;
    row.n = cell.n;
    auto start = Clock::now();
    const RotatedData rd = preprocess(data);
    row.decomposition_seconds = seconds_since(start);

    SearchConfig cfg;
    cfg.alpha = common.alpha;
    for (int r = 0; r < opts.repeats; ++r) {
      start = Clock::now();
      const RotatedData local = opts.include_decomposition ? preprocess(data) : rd;
      ConfidenceInterval ci;
      if (opts.method == "wald") {
        ci = wald_interval(local, common.alpha).interval;
      } else if (opts.method == "rlr") {
        ci = rlr_interval(local, common.alpha).interval;
      } else if (common.one_sided) {
        ci = invert_one_sided_lower(local, cfg);
      } else {
        ci = invert_two_sided(local, cfg);
      }
      row.seconds.push_back(seconds_since(start));
      row.evaluations = ci.evaluations;
      row.lower = ci.lower;
      row.upper = ci.upper;
    }
    err << "# n = " << row.n << " done\n";
    rows.push_back(std::move(row));
  }

  std::string text;
  if (common.format == "csv") {
    std::ostringstream s;
    s << "n,p,repeats,decomposition_seconds,mean_seconds,sd_seconds,min_seconds,max_seconds,"
         "evaluations,lower,upper\n";
    for (const BenchRow& row : rows) {
      const double r = static_cast<double>(row.seconds.size());
      const double mean = std::accumulate(row.seconds.begin(), row.seconds.end(), 0.0) / r;
      double ss = 0.0;
      for (double t : row.seconds) {
        ss += (t - mean) * (t - mean);
      }
      const double sd = row.seconds.size() > 1 ? std::sqrt(ss / (r - 1.0)) : 0.0;
      s << row.n << ',' << opts.p << ',' << row.seconds.size() << ','
        << format_double(row.decomposition_seconds) << ',' << format_double(mean) << ','
        << format_double(sd) << ','
        << format_double(*std::min_element(row.seconds.begin(), row.seconds.end())) << ','
        << format_double(*std::max_element(row.seconds.begin(), row.seconds.end())) << ','
        << row.evaluations << ',' << format_double(row.lower) << ','
        << format_double(row.upper) << '\n';
    }
    text = s.str();
  } else {
    nlohmann::json doc = nlohmann::json::array();
    for (const BenchRow& row : rows) {
      doc.push_back({{"n", row.n},
                     {"p", opts.p},
                     {"decomposition_seconds", row.decomposition_seconds},
                     {"seconds", row.seconds},
                     {"evaluations", row.evaluations},
                     {"lower", row.lower},
                     {"upper", row.upper}});
    }
    text = doc.dump(2) + "\n";
  }
  emit(common, text, out);
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& common, bool with_inputs) {
  if (with_inputs) {
    cmd->add_option("--kernel", common.kernel, "ar1:RHO | expdecay:A | dense:PATH")->required();
    cmd->add_option("--coords", common.coords, "coordinates for expdecay (n rows, any columns)");
    cmd->add_option("--covariates", common.covariates, "covariate matrix (default: intercept)");
    cmd->add_option("--cache", common.cache, "eigendecomposition cache file");
  }
  cmd->add_option("--alpha", common.alpha, "miscoverage level in (0, 1)");
  cmd->add_flag("--one-sided", common.one_sided, "lower confidence bound instead of an interval");
  cmd->add_option("--output", common.output, "write results here instead of stdout");
  cmd->add_option("--format", common.format, "csv or json");
}

std::string echo(const CLI::App& cmd) {
  std::istringstream config(cmd.config_to_str(true, false));
  std::ostringstream s;
  s << "# varcomp " << cmd.get_name() << '\n';
  for (std::string line; std::getline(config, line);) {
    if (!line.empty()) {
      s << "#   " << line << '\n';
    }
  }
  return s.str();
}

}  // namespace

KernelSpec parse_kernel(const std::string& text, const std::string& coords_path) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "--kernel must look like ar1:RHO, expdecay:A or dense:PATH, got '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  KernelSpec spec;
  if (kind == "ar1") {
    spec = Ar1Kernel{parse_number(arg, "AR1 correlation")};
  } else if (kind == "expdecay") {
    ExpDecayKernel k;
    k.length_scale = parse_number(arg, "length scale");
    if (!coords_path.empty()) {
      k.coordinates = read_matrix(coords_path);
    }
    spec = std::move(k);
  } else if (kind == "dense") {
    spec = DenseKernelFile{arg};
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown kernel family '" + kind + "'");
  }
  if (!std::holds_alternative<ExpDecayKernel>(spec) || !coords_path.empty()) {
    check_kernel_spec(spec);
  }
  return spec;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Confidence intervals for the kernel variance share h2"};
  app.name("varcomp");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  CiOptions ci_opts;
  Common ci_common;
  CLI::App* ci = app.add_subcommand("ci", "interval for one response");
  ci->add_option("--response", ci_opts.response, "response table (first column unless --column)")
      ->required();
  ci->add_option("--column", ci_opts.column, "response column name");
  ci->add_option("--method", ci_opts.method, "proposed, wald, rlr or all");
  add_common(ci, ci_common, true);

  BatchOptions batch_opts;
  Common batch_common;
  batch_common.workers = default_workers();
  CLI::App* batch = app.add_subcommand("batch", "intervals for every column of a table");
  batch->add_option("--expression", batch_opts.expression, "n x d table, header = identifiers")
      ->required();
  batch->add_option("--summary", batch_opts.summary, "write a JSON summary here");
  batch->add_flag("--log-normalize", batch_opts.log_normalize,
                  "replace each column by standardized log1p");
  batch->add_option("--workers", batch_common.workers, "worker threads");
  add_common(batch, batch_common, true);

  SimulateOptions sim_opts;
  Common sim_common;
  sim_common.workers = default_workers();
  CLI::App* simulate = app.add_subcommand("simulate", "coverage and width by Monte Carlo");
  simulate->add_option("--n", sim_opts.n_list, "sample sizes")->delimiter(',');
  simulate->add_option("--family", sim_opts.family, "ar1 or expdecay");
  simulate->add_option("--params", sim_opts.params, "rho or length-scale values")
      ->delimiter(',');
  simulate->add_option("--h2", sim_opts.h2_list, "true h2 values")->delimiter(',');
  simulate->add_option("--sigma2", sim_opts.sigma2, "total variance");
  simulate->add_option("--p", sim_opts.p, "number of covariates");
  simulate->add_option("--beta", sim_opts.beta, "value of every coefficient");
  simulate->add_option("--replicates", sim_opts.replicates, "replicates per cell");
  simulate->add_option("--seed", sim_opts.seed, "master seed");
  simulate->add_option("--method", sim_opts.method,
                       "proposed, wald, rlr, all, or a report method name");
  simulate->add_flag("--fixed-x", sim_opts.fixed_x, "draw X once per cell");
  simulate->add_flag("--no-timing", sim_opts.no_timing, "omit the timing column");
  simulate->add_option("--workers", sim_common.workers, "worker threads");
  add_common(simulate, sim_common, false);

  BenchOptions bench_opts;
  Common bench_common;
  bench_common.kernel = "ar1:0.95";
  CLI::App* bench = app.add_subcommand("bench", "time per interval against n");
  bench->add_option("--kernel", bench_common.kernel, "ar1:RHO or expdecay:A");
  bench->add_option("--n", bench_opts.n_list, "sample sizes")->delimiter(',');
  bench->add_option("--repeats", bench_opts.repeats, "timed repetitions per n");
  bench->add_option("--h2", bench_opts.h2, "true h2 of the generated data");
  bench->add_option("--p", bench_opts.p, "number of covariates");
  bench->add_option("--seed", bench_opts.seed, "master seed");
  bench->add_option("--method", bench_opts.method, "proposed, wald or rlr");
  bench->add_flag("--include-decomposition", bench_opts.include_decomposition,
                  "count the eigendecomposition in each timing");
  add_common(bench, bench_common, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    err << echo(*chosen);
    if (chosen == ci) {
      return cmd_ci(ci_common, ci_opts, out, err);
    }
    if (chosen == batch) {
      return cmd_batch(batch_common, batch_opts, out, err);
    }
    if (chosen == simulate) {
      return cmd_simulate(sim_common, sim_opts, out, err);
    }
    return cmd_bench(bench_common, bench_opts, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kExitValidation : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace varcomp::cli
