// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/dense_oracle.hpp"
#include "oracle/test_data.hpp"
#include "varcomp/batch.hpp"
#include "varcomp/comparators.hpp"
#include "varcomp/interval.hpp"
#include "varcomp/parallel.hpp"
#include "varcomp/reml.hpp"
#include "varcomp/simulate.hpp"

namespace {

using namespace varcomp;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

const Eigen::VectorXd& ar1_spectrum(Eigen::Index n, double rho) {
  return testing::ar1_eigenvalues(n, rho);
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// ---------------------------------------------------------------------------
// Oracle datasets shared by criteria 1 and 2.

struct OracleCase {
  std::string label;
  Eigen::MatrixXd kernel;
  ModelData data;
};

std::vector<OracleCase> oracle_cases() {
  std::vector<OracleCase> cases;
  const std::vector<Eigen::Index> ns{8, 50, 200};
  const std::vector<Eigen::Index> ps{0, 2, 5};
  std::mt19937_64 gen(20240101);
  std::uniform_real_distribution<double> h2_dist(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index n = ns[i % 3];
    const Eigen::Index p = ps[(i / 3) % 3];
    const int family = (i / 9) % 3;
    OracleCase c;
    if (family == 0) {
      c.kernel = materialize_kernel(Ar1Kernel{0.5}, n);
      c.label = "ar1(0.5)";
    } else if (family == 1) {
      c.kernel = materialize_kernel(Ar1Kernel{0.95}, n);
      c.label = "ar1(0.95)";
    } else {
      ExpDecayKernel k;
      k.coordinates = testing::random_coordinates(n, gen);
      k.length_scale = 0.3;
      c.kernel = materialize_kernel(k, n);
      c.label = "expdecay(0.3)";
    }
    c.label += " n=" + std::to_string(n) + " p=" + std::to_string(p);
    c.data = testing::make_dataset(c.kernel, p, h2_dist(gen), 1.0, 1000 + i);
    cases.push_back(std::move(c));
  }
  return cases;
}

Outcome criterion_1() {
  const auto start = Clock::now();
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> h2_dist(0.02, 0.98);
  std::uniform_real_distribution<double> log_s2(-1.0, 1.0);
  double worst = 0.0;
  std::string worst_where;
  int comparisons = 0;
  for (const OracleCase& c : oracle_cases()) {
    const RotatedData rd = preprocess(c.data);
    for (int k = 0; k < 3; ++k) {
      const double h2 = h2_dist(gen);
      const double s2 = std::pow(10.0, log_s2(gen));
      const ScoreInfo si = score_info(rd, {h2, s2});
      const oracle::DenseEval d = oracle::dense_evaluate(c.data.y, c.data.x, c.kernel, h2, s2);
      const std::vector<std::pair<const char*, std::pair<double, double>>> pairs{
          {"U1", {si.u1, d.u1}},
          {"U2", {si.u2, d.u2}},
          {"I11", {si.i11, d.i11}},
          {"I12", {si.i12, d.i12}},
          {"I22", {si.i22, d.i22}},
          {"T(h2,s2)", {t_stat_joint(rd, h2, s2), d.t_joint()}},
          {"T(h2)", {t_stat_h2(rd, h2), oracle::dense_t_h2(c.data.y, c.data.x, c.kernel, h2)}}};
      for (const auto& [name, values] : pairs) {
        const double e = rel_err(values.first, values.second);
        ++comparisons;
        if (e > worst) {
          worst = e;
          worst_where = std::string(name) + " " + c.label;
        }
      }
    }
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-7 && secs <= 60.0,
          std::to_string(comparisons) + " comparisons, max rel err " + fmt("%.2e", worst) +
              " (" + worst_where + "), " + fmt("%.1f", secs) + " s of 60 s"};
}

Outcome criterion_2() {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> h2_dist(0.02, 0.98);
  std::uniform_real_distribution<double> log_s2(-1.0, 1.0);
  double worst = 0.0;
  int points = 0;
  for (const OracleCase& c : oracle_cases()) {
    const RotatedData rd = preprocess(c.data);
    for (int k = 0; k < 20; ++k) {
      const double h2 = h2_dist(gen);
      const double s2 = std::pow(10.0, log_s2(gen));
      const ScoreInfo si = score_info(rd, {h2, s2});
      const double dh = 1e-6 * std::max(1.0, h2);
      const double ds = 1e-6 * std::max(1.0, s2);
      const double fd_h = (restricted_loglik(rd, {h2 + dh, s2}) -
                           restricted_loglik(rd, {h2 - dh, s2})) / (2.0 * dh);
      const double fd_s = (restricted_loglik(rd, {h2, s2 + ds}) -
                           restricted_loglik(rd, {h2, s2 - ds})) / (2.0 * ds);
      worst = std::max({worst, rel_err(si.u1, fd_h), rel_err(si.u2, fd_s)});
      ++points;
    }
  }
  return {worst <= 1e-4,
          std::to_string(points) + " points, max rel err " + fmt("%.2e", worst)};
}

// ---------------------------------------------------------------------------

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

Outcome criterion_3() {
  const auto start = Clock::now();
  const Eigen::Index n = 500;
  const int reps = 2000;
  const Eigen::VectorXd& lambdas = ar1_spectrum(n, 0.95);
  const std::vector<double> h2s{0.0, 0.005, 0.5, 0.95};
  const std::vector<double> s2s{1e-3, 1.0, 1e3};
  auto chi1 = [](double x) { return x <= 0.0 ? 0.0 : std::erf(std::sqrt(0.5 * x)); };
  auto chi2 = [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-0.5 * x); };

  double worst1 = 0.0;
  double worst2 = 0.0;
  std::size_t failures = 0;
  std::ostringstream cells;
  std::uint64_t cell_index = 0;
  for (double h2 : h2s) {
    for (double s2 : s2s) {
      SimCell cell;
      cell.n = n;
      cell.h2 = h2;
      cell.sigma2 = s2;
      const std::uint64_t cell_seed = derive_seed(3003, cell_index++);
      std::vector<double> t1(reps);
      std::vector<double> t2(reps);
      std::vector<char> failed(reps, 0);
      parallel_for(reps, default_workers(), [&](std::size_t r) {
        Rng rng(derive_seed(cell_seed, r));
        const RotatedData rd = generate_rotated(cell, lambdas, rng);
        try {
          t1[r] = t_stat_h2(rd, h2);
          t2[r] = t_stat_joint(rd, h2, s2);
        } catch (const Error&) {
          failed[r] = 1;
        }
      });
      std::vector<double> a;
      std::vector<double> b;
      for (int r = 0; r < reps; ++r) {
        if (!failed[r]) {
          a.push_back(t1[r]);
          b.push_back(t2[r]);
        } else {
          ++failures;
        }
      }
      const double d1 = ks_distance(a, chi1);
      const double d2 = ks_distance(b, chi2);
      worst1 = std::max(worst1, d1);
      worst2 = std::max(worst2, d2);
      cells << " [h2=" << h2 << " s2=" << s2 << ": " << fmt("%.4f", d1) << "/"
            << fmt("%.4f", d2) << "]";
    }
  }
  const double secs = seconds_since(start);
  return {worst1 <= 0.035 && worst2 <= 0.035 && failures == 0 && secs <= 600.0,
          "max KS chi2_1 " + fmt("%.4f", worst1) + ", chi2_2 " + fmt("%.4f", worst2) +
              ", failed fits " + std::to_string(failures) + ", " + fmt("%.1f", secs) +
              " s of 600 s;" + cells.str()};
}

Outcome criterion_4() {
  const auto start = Clock::now();
  SimDesign design;
  design.n_list = {500, 1000};
  design.kernel_params = {0.95};
  design.h2_list = {0.0, 0.001, 0.005, 0.05, 0.5, 0.9};
  design.replicates = 2000;
  design.seed = 4004;
  const SimReport proposed = run(design, {Method::ProposedTwoSided}, default_workers());

  SimDesign wald_design = design;
  wald_design.n_list = {500};
  wald_design.h2_list = {0.005};
  wald_design.seed = 4005;
  const SimReport wald = run(wald_design, {Method::Wald}, default_workers());

  bool pass = true;
  std::ostringstream detail;
  detail << "proposed coverage:";
  for (const SimRow& row : proposed.rows) {
    const bool ok = row.coverage >= 0.935 && row.coverage <= 0.965;
    pass = pass && ok;
    detail << " [n=" << row.n << " h2=" << row.h2 << ": " << fmt("%.4f", row.coverage)
           << (ok ? "" : " OUT") << "]";
  }
  const double wald_cov = wald.rows.front().coverage;
  const bool wald_distorted = wald_cov < 0.93 || wald_cov > 0.97;
  pass = pass && wald_distorted;
  const double secs = seconds_since(start);
  pass = pass && secs <= 1800.0;
  detail << "; wald at n=500 h2=0.005: " << fmt("%.4f", wald_cov)
         << (wald_distorted ? " (outside [0.93, 0.97])" : " (inside [0.93, 0.97])") << "; "
         << fmt("%.1f", secs) << " s of 1800 s";
  return {pass, detail.str()};
}

Outcome criterion_5() {
  SimDesign low;
  low.n_list = {500};
  low.kernel_params = {0.1};
  low.h2_list = {0.5};
  low.replicates = 1000;
  low.seed = 5005;
  const SimRow weak = run(low, {Method::ProposedTwoSided}, default_workers()).rows.front();
  bool pass = weak.mean_width > 0.8 && weak.coverage >= 0.93;
  std::ostringstream detail;
  detail << "rho=0.1 n=500 h2=0.5: width " << fmt("%.4f", weak.mean_width) << ", coverage "
         << fmt("%.4f", weak.coverage) << ";";

  SimDesign grid;
  grid.n_list = {250, 500, 1000, 2000};
  grid.kernel_params = {0.5, 0.95};
  grid.h2_list = {0.5};
  grid.replicates = 1000;
  grid.seed = 5006;
  const SimReport report = run(grid, {Method::ProposedTwoSided}, default_workers());
  for (double rho : grid.kernel_params) {
    detail << " rho=" << rho << " widths";
    const SimRow* previous = nullptr;
    for (Eigen::Index n : grid.n_list) {
      const SimRow* row = report.find(n, rho, 0.5, Method::ProposedTwoSided);
      detail << ' ' << fmt("%.4f", row->mean_width);
      if (previous) {
        const double slack =
            2.0 * std::hypot(previous->width_se, row->width_se);
        if (row->mean_width > previous->mean_width + slack) {
          pass = false;
          detail << "(increase)";
        }
      }
      previous = row;
    }
    detail << ';';
  }
  return {pass, detail.str()};
}

Outcome criterion_6() {
  int singular_expected = 0;
  int singular_seen = 0;
  int regular_checked = 0;
  int regular_singular = 0;
  const std::vector<std::pair<double, double>> points{
      {0.0, 1.0}, {0.1, 0.5}, {0.5, 1.0}, {0.9, 2.0}, {0.999, 1e-3}, {0.3, 1e3}};
  for (double c : {0.25, 1.0, 4.0}) {
    for (Eigen::Index n : {10, 50, 200}) {
      for (Eigen::Index p : {0, 2}) {
        const ModelData data =
            testing::make_dataset(c * Eigen::MatrixXd::Identity(n, n), p, 0.3, 1.0, n + p);
        const RotatedData rd = preprocess(data);
        for (const auto& [h2, s2] : points) {
          ++singular_expected;
          try {
            score_info(rd, {h2, s2});
          } catch (const Error& e) {
            singular_seen += e.code() == ErrorCode::SingularInformation ? 1 : 0;
          }
        }
      }
    }
  }
  for (Eigen::Index n : {10, 11, 25, 50, 200}) {
    for (Eigen::Index p : {0, 2, 5}) {
      if (n <= p + 1) {
        continue;
      }
      const ModelData data =
          testing::make_dataset(materialize_kernel(Ar1Kernel{0.5}, n), p, 0.3, 1.0, 7 * n + p);
      const RotatedData rd = preprocess(data);
      for (const auto& [h2, s2] : points) {
        ++regular_checked;
        try {
          score_info(rd, {h2, s2});
        } catch (const Error&) {
          ++regular_singular;
        }
      }
    }
  }
  return {singular_seen == singular_expected && regular_singular == 0,
          "cI: " + std::to_string(singular_seen) + "/" + std::to_string(singular_expected) +
              " raised SingularInformation; AR1(0.5): " + std::to_string(regular_singular) +
              "/" + std::to_string(regular_checked) + " raised"};
}

Outcome criterion_7() {
  std::mt19937_64 gen(7007);
  std::uniform_int_distribution<int> n_dist(8, 30);
  std::uniform_int_distribution<int> p_dist(0, 3);
  int agree = 0;
  int degenerate_instances = 0;
  std::ostringstream detail;
  for (int i = 0; i < 20; ++i) {
    const Eigen::Index n = n_dist(gen);
    const Eigen::Index p = p_dist(gen);
    Eigen::MatrixXd x = testing::normal_matrix(n, p, gen);
    Eigen::MatrixXd k;
    if (i % 2 == 0) {
      // Proportional to the identity on the complement of span(X).
      const Eigen::MatrixXd a = testing::normal_matrix(p, p, gen);
      const double c = 0.5 + static_cast<double>(i) / 10.0;
      k = c * Eigen::MatrixXd::Identity(n, n) + x * a * a.transpose() * x.transpose();
    } else {
      const Eigen::MatrixXd g = testing::normal_matrix(n, n, gen);
      k = g * g.transpose() / static_cast<double>(n);
    }
    const Eigen::VectorXd y = testing::normal_matrix(n, 1, gen).col(0);

    const Eigen::MatrixXd v = oracle::null_space_basis(x);
    const Eigen::MatrixXd m = v.transpose() * k * v;
    const double c = m.trace() / static_cast<double>(n - p);
    const bool proportional =
        (m - c * Eigen::MatrixXd::Identity(n - p, n - p)).norm() <= 1e-10 * m.norm();

    const RotatedData rd = preprocess(ModelData{y, x, k});
    bool singular = false;
    try {
      const ScoreInfo si = score_info(rd, {0.4, 1.0});
      singular = si.det <= 1e-10 * si.i11 * si.i22;
    } catch (const Error& e) {
      singular = e.code() == ErrorCode::SingularInformation;
    }
    agree += singular == proportional ? 1 : 0;
    degenerate_instances += proportional ? 1 : 0;
    if (singular != proportional) {
      detail << " mismatch at instance " << i << " (n=" << n << " p=" << p << ")";
    }
  }
  return {agree == 20 && degenerate_instances > 0 && degenerate_instances < 20,
          std::to_string(agree) + "/20 agree, " + std::to_string(degenerate_instances) +
              " proportional instances" + detail.str()};
}

Outcome criterion_8() {
  const std::vector<Eigen::Index> ns{250, 500, 1000, 2000, 4000};
  constexpr int kDatasets = 15;
  std::vector<double> times;
  std::ostringstream detail;
  for (Eigen::Index n : ns) {
    const Eigen::VectorXd& lambdas = ar1_spectrum(n, 0.95);
    SimCell cell;
    cell.n = n;
    cell.h2 = 0.5;
    cell.p = 5;
    std::vector<double> per_interval;
    for (int r = 0; r < kDatasets; ++r) {
      Rng rng(derive_seed(8008, static_cast<std::uint64_t>(n * 100 + r)));
      const RotatedData rd = generate_rotated(cell, lambdas, rng);
      const auto start = Clock::now();
      invert_two_sided(rd);
      per_interval.push_back(seconds_since(start));
    }
    std::nth_element(per_interval.begin(), per_interval.begin() + kDatasets / 2,
                     per_interval.end());
    times.push_back(per_interval[kDatasets / 2]);
    detail << " n=" << n << ": " << fmt("%.2e", times.back()) << " s";
  }
  double snt = 0.0;
  double snn = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    snt += static_cast<double>(ns[i]) * times[i];
    snn += static_cast<double>(ns[i]) * static_cast<double>(ns[i]);
  }
  const double beta = snt / snn;
  const double mean = std::accumulate(times.begin(), times.end(), 0.0) / times.size();
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    ss_res += std::pow(times[i] - beta * static_cast<double>(ns[i]), 2);
    ss_tot += std::pow(times[i] - mean, 2);
  }
  const double r2 = 1.0 - ss_res / ss_tot;
  return {r2 >= 0.95, "median per-interval time" + detail.str() + "; slope " +
                          fmt("%.3e", beta) + " s per observation, R^2 " + fmt("%.4f", r2)};
}

Outcome criterion_9() {
  const Eigen::Index n = 500;
  const Eigen::Index d = 1000;
  const Eigen::MatrixXd kernel = materialize_kernel(Ar1Kernel{0.95}, n);
  const SharedBasis basis = decompose(kernel, Eigen::MatrixXd::Ones(n, 1));
  BatchInput input;
  input.expression.resize(n, d);
  input.covariates = Eigen::MatrixXd::Ones(n, 1);
  input.kernel = kernel;
  input.mode = BatchMode::OneSidedLower;
  for (Eigen::Index j = 0; j < d; ++j) {
    SimCell cell;
    cell.n = n;
    cell.p = 1;
    cell.beta = 2.0;
    cell.h2 = 0.9 * static_cast<double>(j % 10) / 10.0;
    Rng rng(derive_seed(9009, static_cast<std::uint64_t>(j)));
    ModelData data = generate(cell, basis, Ar1Kernel{0.95}, rng);
    input.expression.col(j) = data.y;
    input.ids.push_back("resp" + std::to_string(100000 + j));
  }
  const BatchResult one = run_batch(input, 1);
  const BatchResult eight = run_batch(input, 8);
  const bool identical = batch_csv(one) == batch_csv(eight);
  std::size_t ok = 0;
  for (const ResponseResult& r : one.responses) {
    ok += r.ok() ? 1 : 0;
  }
  const double slowest = std::max(one.post_decomposition_seconds, eight.post_decomposition_seconds);
  return {identical && slowest < 120.0,
          std::string(identical ? "identical" : "DIFFERENT") + " tables for 1 and 8 workers; " +
              std::to_string(ok) + "/" + std::to_string(d) + " ok; post-decomposition " +
              fmt("%.2f", one.post_decomposition_seconds) + " s (1 worker), " +
              fmt("%.2f", eight.post_decomposition_seconds) + " s (8 workers), decomposition " +
              fmt("%.2f", one.decomposition_seconds) + " s"};
}

Outcome criterion_10() {
  const double q = chi2_quantile(0.95, 1);
  const double tol = SearchConfig{}.tol;
  int fixtures = 0;
  int interior = 0;
  double worst_gap = 0.0;
  int nest_violations = 0;
  int coherence_violations = 0;
  std::mt19937_64 gen(10010);
  for (Eigen::Index n : {50, 200, 500}) {
    std::vector<std::pair<std::string, Eigen::VectorXd>> spectra{
        {"ar1(0.5)", ar1_spectrum(n, 0.5)}, {"ar1(0.95)", ar1_spectrum(n, 0.95)}};
    ExpDecayKernel ed;
    ed.coordinates = testing::random_coordinates(n, gen);
    ed.length_scale = 0.2;
    spectra.emplace_back("expdecay(0.2)", kernel_eigenvalues(materialize_kernel(ed, n)));
    for (const auto& [name, lambdas] : spectra) {
      for (double h2 : {0.05, 0.5, 0.9}) {
        ++fixtures;
        const RotatedData rd = testing::make_rotated(lambdas, 3, h2, 1.0, gen());
        const ConfidenceInterval c90 = invert_two_sided(rd, {0.10});
        const ConfidenceInterval c95 = invert_two_sided(rd, {0.05});
        const ConfidenceInterval c99 = invert_two_sided(rd, {0.01});
        for (double bound : {c95.lower, c95.upper}) {
          if (bound > 0.0 && bound < 1.0) {
            ++interior;
            worst_gap = std::max(worst_gap, std::abs(t_stat_h2(rd, bound) - q));
          }
        }
        if (!(c99.lower <= c95.lower + tol && c95.lower <= c90.lower + tol &&
              c99.upper >= c95.upper - tol && c95.upper >= c90.upper - tol)) {
          ++nest_violations;
        }
        for (double alpha : {0.05, 0.025}) {
          const ConfidenceInterval one = invert_one_sided_lower(rd, {alpha});
          const ConfidenceInterval two = invert_two_sided(rd, {2.0 * alpha});
          if (one.lower > two.lower + tol) {
            ++coherence_violations;
          }
        }
      }
    }
  }
  return {worst_gap <= 1e-3 && nest_violations == 0 && coherence_violations == 0,
          std::to_string(fixtures) + " fixtures, " + std::to_string(interior) +
              " interior bounds, max |T - q| " + fmt("%.2e", worst_gap) + ", nesting violations " +
              std::to_string(nest_violations) + ", one/two-sided violations " +
              std::to_string(coherence_violations)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", criterion_1},
      {"gradient check", criterion_2},
      {"chi-square calibration", criterion_3},
      {"uniform coverage", criterion_4},
      {"width behavior", criterion_5},
      {"degeneracy detection", criterion_6},
      {"singularity criterion", criterion_7},
      {"linear scaling", criterion_8},
      {"batch determinism and throughput", criterion_9},
      {"interval search correctness", criterion_10}};

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    selected.insert(std::stoi(argv[i]));
  }

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) {
      continue;
    }
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += outcome.pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", outcome.pass ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), outcome.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
