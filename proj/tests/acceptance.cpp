// Property-based acceptance checks, one PASS/FAIL line per criterion.
//
//   acceptance          run all criteria
//   acceptance 3 6      run the listed criteria
//
// Exit status is 0 only when every requested criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sympmarg/circuit.hpp"
#include "sympmarg/entropy.hpp"
#include "sympmarg/marginal.hpp"
#include "sympmarg/sampling.hpp"
#include "sympmarg/synthesis.hpp"

using namespace sympmarg;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Shared trial set of criteria 1, 5 and 8.
struct PhysicalTrial {
  RandomState st;
  int n;
};

const std::vector<PhysicalTrial>& physical_trials() {
  static const std::vector<PhysicalTrial> trials = [] {
    std::vector<PhysicalTrial> out;
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> modes(2, 8);
    out.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
      const int n = modes(rng);
      out.push_back({random_state(n, 5.0, rng), n});
    }
    return out;
  }();
  return trials;
}

Result necessity() {
  int feasible = 0;
  double worst = INFINITY;
  for (const auto& t : physical_trials()) {
    const FeasibilityVerdict v = check_matrix_consistency(CovarianceMatrix(t.st.gamma));
    feasible += v.feasible;
    worst = std::min(worst, v.min_slack());
  }
  const int total = static_cast<int>(physical_trials().size());
  return {feasible == total && worst >= -1e-8, fmt("%d/%d feasible, worst slack %.3g", feasible, total, worst)};
}

Result sufficiency() {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> modes(1, 8);
  int ok = 0;
  double worst = 0.0;
  std::string first_failure;
  for (int i = 0; i < 1000; ++i) {
    const FeasiblePair p = random_feasible_pair(modes(rng), rng);
    try {
      const SynthesisTrace t = synthesize(p.c, p.d);
      const Matrix& g = t.final_matrix.matrix();
      const double err = std::max(oracle::max_diff(oracle::symplectic_eigenvalues(g), p.d),
                                  oracle::max_diff(oracle::local_values(g), p.c));
      worst = std::max(worst, err);
      ok += err <= 1e-7;
    } catch (const std::exception& e) {
      if (first_failure.empty()) first_failure = e.what();
    }
  }
  std::string detail = fmt("%d/1000 reproduced, worst error %.3g", ok, worst);
  if (!first_failure.empty()) detail += "; first exception: " + first_failure;
  return {ok == 1000, detail};
}

Result two_mode_closed_form() {
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> cdist(0.2, 5.0), u(-1.0, 1.0);
  double worst_formula = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double c1 = cdist(rng), c2 = cdist(rng);
    const double bound = std::sqrt(c1 * c2);
    const double e = bound * u(rng) * 0.999, f = bound * u(rng) * 0.999;
    const TwoModeBlock blk{c1, c2, 1, 1, e, f};
    const auto [d1, d2] = two_mode_eigenvalues_closed_form(c1, c2, e, f);
    const std::vector<double> ref = oracle::symplectic_eigenvalues(Matrix(blk.matrix()));
    worst_formula = std::max({worst_formula, std::abs(d1 - ref[0]), std::abs(d2 - ref[1])});
  }

  double worst_solve = 0.0;
  int zero_mismatch = 0, zero_cases = 0, failures = 0;
  for (int i = 0; i < 10000; ++i) {
    FeasiblePair p = random_feasible_pair(2, rng);
    if (i % 10 == 0) p.c = p.d;
    try {
      const TwoModeBlock b = solve_two_mode(p.c[0], p.c[1], p.d[0], p.d[1]);
      const auto [d1, d2] = two_mode_eigenvalues_closed_form(b.c1, b.c2, b.e, b.f);
      worst_solve = std::max({worst_solve, std::abs(d1 - p.d[0]), std::abs(d2 - p.d[1])});
      const double s1 = p.c[0] - p.d[0];
      const double s2 = p.c[0] + p.c[1] - p.d[0] - p.d[1];
      const bool slacks_zero = std::abs(s1) <= 1e-12 && std::abs(s2) <= 1e-12;
      const bool coupling_zero = b.e == 0.0 && b.f == 0.0;
      zero_cases += slacks_zero;
      zero_mismatch += slacks_zero != coupling_zero;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  return {worst_formula <= 1e-10 && worst_solve <= 1e-9 && zero_mismatch == 0 && failures == 0,
          fmt("formula vs eigensolver %.3g, solve round trip %.3g, zero-coupling mismatches %d of %d tight, "
              "exceptions %d",
              worst_formula, worst_solve, zero_mismatch, zero_cases, failures)};
}

Result pure_cone() {
  int disagreements = 0, feasible = 0, synthesized = 0;
  double worst = 0.0;
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j <= 12; ++j)
      for (int k = 0; k <= 12; ++k) {
        const std::vector<double> b{0.25 * i, 0.25 * j, 0.25 * k};
        const double mx = std::max({b[0], b[1], b[2]});
        const bool brute = mx <= (b[0] + b[1] + b[2]) - mx;
        const bool got = check_pure(b).feasible;
        disagreements += brute != got;
        if (!brute) continue;
        ++feasible;
        try {
          const SynthesisTrace t = synthesize_pure(b);
          const Matrix& g = t.final_matrix.matrix();
          double defect = 0.0;
          for (double d : oracle::symplectic_eigenvalues(g)) defect = std::max(defect, std::abs(d - 1.0));
          worst = std::max(worst, defect);
          synthesized += defect <= 1e-7;
        } catch (const std::exception&) {
        }
      }
  return {disagreements == 0 && synthesized == feasible,
          fmt("2197 grid points, %d disagreements, %d/%d synthesized, worst purity defect %.3g", disagreements,
              synthesized, feasible, worst)};
}

Result trace_and_upper_bound() {
  double worst_trace = INFINITY, worst_upper = INFINITY;
  for (const auto& t : physical_trials()) {
    const Matrix& g = t.st.gamma;
    const std::vector<double> d = oracle::symplectic_eigenvalues(g);
    std::vector<double> c = oracle::local_values(g);
    std::sort(c.begin(), c.end());
    const double sd = std::accumulate(d.begin(), d.end(), 0.0);
    worst_trace = std::min(worst_trace, 0.5 * g.trace() - sd);
    const int n = t.n;
    const double head_c = std::accumulate(c.begin(), c.end() - 1, 0.0);
    const double upper = sd - d[0] + (3.0 - 2.0 * n) * d[0];
    worst_upper = std::min(worst_upper, upper - (c[n - 1] - head_c));
  }
  return {worst_trace >= -1e-8 && worst_upper >= -1e-8,
          fmt("worst trace slack %.3g, worst upper-bound slack %.3g", worst_trace, worst_upper)};
}

Result entropy_bound() {
  const std::vector<double> c{1.5, 1.5, 2.0};
  const double bound = entropy_report(c).global_upper_bound;
  const double expected = 3.0 * std::log2(3.0) - 2.0;
  const double example_err = std::abs(bound - expected);

  double worst_first = INFINITY, worst_second = INFINITY;
  int violations = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto& t = physical_trials()[i];
    const std::vector<double> d = oracle::symplectic_eigenvalues(t.st.gamma);
    const std::vector<double> cl = oracle::local_values(t.st.gamma);
    double sum_s = 0.0;
    for (double x : d) sum_s += oracle::entropy(x);
    const double s_sum_d = oracle::entropy(std::accumulate(d.begin(), d.end(), 0.0));
    const double s_sum_c = oracle::entropy(std::accumulate(cl.begin(), cl.end(), 0.0));
    const double first = s_sum_d - sum_s, second = s_sum_c - s_sum_d;
    worst_first = std::min(worst_first, first);
    worst_second = std::min(worst_second, second);
    violations += first < -1e-9 || second < -1e-9;
  }
  return {example_err <= 1e-12 && violations == 0,
          fmt("example bound error %.3g; chain over 1000 matrices: %d violations, worst sum s(d) <= s(sum d) slack "
              "%.3g, worst s(sum d) <= s(sum c) slack %.3g",
              example_err, violations, worst_first, worst_second)};
}

Result preparation() {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> modes(1, 6);
  int ok = 0;
  double worst = 0.0;
  std::string first_failure;
  for (int i = 0; i < 100; ++i) {
    const int n = modes(rng);
    const RandomState st = random_pure_state(n, 5.0, rng);
    try {
      const PreparationCircuit c = circuit_from_pure(CovarianceMatrix(st.gamma));
      Matrix s = Matrix::Identity(2 * n, 2 * n);
      for (const auto& el : c.input_network) s = el.symplectic(n) * s;
      Matrix q = Matrix::Identity(2 * n, 2 * n);
      for (int k = 0; k < n; ++k) q.block(2 * k, 2 * k, 2, 2) = c.squeezers[k].symplectic();
      s = q * s;
      for (const auto& el : c.output_network) s = el.symplectic(n) * s;
      const Matrix seed = oracle::diag_pairs(c.seed);
      const double defect = max_abs(s * seed * s.transpose() - st.gamma) / std::max(1.0, max_abs(st.gamma));
      const int passive = static_cast<int>(c.input_network.size() + c.output_network.size());
      worst = std::max(worst, defect);
      ok += defect <= 1e-7 && passive <= n * (n - 1) / 2 + n;
    } catch (const std::exception& e) {
      if (first_failure.empty()) first_failure = e.what();
    }
  }
  std::string detail = fmt("%d/100 circuits replay within 1e-7 with bounded element count, worst %.3g", ok, worst);
  if (!first_failure.empty()) detail += "; first exception: " + first_failure;
  return {ok == 100, detail};
}

Result reconstruction() {
  double worst_w = 0.0, worst_e = 0.0, worst_inv = 0.0;
  std::mt19937_64 rng(1618);
  for (const auto& t : physical_trials()) {
    const CovarianceMatrix gamma(t.st.gamma);
    const WilliamsonForm w = williamson(gamma);
    const Matrix& s = w.transform.matrix();
    worst_w = std::max(worst_w, max_abs(s * t.st.gamma * s.transpose() - oracle::diag_pairs(w.spectrum.values)));
    const EulerFactors ef = euler_decompose(SymplecticTransform(t.st.transform));
    worst_e = std::max(worst_e, max_abs(ef.reconstruct() - t.st.transform));
    const Matrix s2 = random_symplectic(t.n, 5.0, rng()).matrix();
    const Matrix moved = s2 * t.st.gamma * s2.transpose();
    worst_inv = std::max(worst_inv, oracle::max_diff(oracle::symplectic_eigenvalues(moved), w.spectrum.values));
  }
  return {worst_w <= 1e-8 && worst_e <= 1e-8 && worst_inv <= 1e-8,
          fmt("Williamson defect %.3g, Euler defect %.3g, congruence invariance %.3g", worst_w, worst_e, worst_inv)};
}

struct Criterion {
  const char* name;
  std::function<Result()> run;
};

const Criterion kCriteria[] = {
    {"necessity", necessity},
    {"sufficiency round trip", sufficiency},
    {"two-mode closed form", two_mode_closed_form},
    {"pure cone", pure_cone},
    {"symplectic trace and upper bound", trace_and_upper_bound},
    {"entropy bound", entropy_bound},
    {"preparation soundness", preparation},
    {"Williamson/Euler reconstruction", reconstruction},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 8; ++i) which.push_back(i);
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > 8) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = kCriteria[k - 1].run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d (%s): %s: %s [%.1f s]\n", k, kCriteria[k - 1].name, r.pass ? "PASS" : "FAIL",
                r.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
