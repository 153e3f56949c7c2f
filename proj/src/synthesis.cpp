#include "sympmarg/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sympmarg {
namespace {

std::string fmt(double v) { return std::to_string(v); }

class Builder {
 public:
  explicit Builder(const Tolerances& tol) : tol_(tol) {}

  std::vector<SynthesisStep> steps;

  // Appends the steps realising (c, d) on the global modes `slots`. On entry
  // the sub-state on `slots` is diag(d) in slot order.
  void build(std::vector<double> c, std::vector<double> d, std::vector<int> slots) {
    const int m = static_cast<int>(c.size());
    if (m == 1) {
      if (std::abs(c[0] - d[0]) > tol_.ineq)
        throw Error(ErrorCode::ToleranceCollapse, "single-mode remainder with c = " + fmt(c[0]) + ", d = " + fmt(d[0]));
      return;
    }
    if (m == 2) {
      add_two_mode(solve_two_mode(c[0], c[1], d[0], d[1], tol_), {slots[0], slots[1]});
      return;
    }

    // Largest k with c1 >= d_k; ties go to the larger index.
    int k = 0;
    for (int j = 0; j < m; ++j)
      if (c[0] >= d[j] - tol_.ineq) k = j;

    if (k <= m - 3) {
      // Couple c1 with x = d_k + d_{k+1} - c1 into spectrum (d_k, d_{k+1});
      // the remaining modes see spectrum (d_1..d_{k-1}, x, d_{k+2}..).
      const double x = std::clamp(d[k + 1] - (c[0] - d[k]), d[k], d[k + 1]);
      std::vector<double> arrangement;
      arrangement.push_back(d[k]);
      for (int j = 0; j < k; ++j) arrangement.push_back(d[j]);
      for (int j = k + 1; j < m; ++j) arrangement.push_back(d[j]);
      relabel(d, arrangement, slots);

      add_two_mode(solve_two_mode(c[0], x, d[k], d[k + 1], tol_), {slots[0], slots[k + 1]});

      std::vector<double> sub_c(c.begin() + 1, c.end());
      std::vector<double> sub_d;
      for (int j = 0; j < k; ++j) sub_d.push_back(d[j]);
      sub_d.push_back(x);
      for (int j = k + 2; j < m; ++j) sub_d.push_back(d[j]);
      check_recursive(sub_c, sub_d);
      build(std::move(sub_c), std::move(sub_d), std::vector<int>(slots.begin() + 1, slots.end()));
      return;
    }

    // k in {m-2, m-1}: couple c_n with x into spectrum (d_{n-1}, d_n).
    const double head_c = std::accumulate(c.begin(), c.end() - 2, 0.0);
    const double head_d = std::accumulate(d.begin(), d.end() - 2, 0.0);
    const double cn = c[m - 1], cn1 = c[m - 2];
    const double dn = d[m - 1], dn1 = d[m - 2];
    const double lower = std::max({dn1, dn1 + (dn - cn), dn1 + (cn - dn), cn1 + (head_d - head_c)});
    const double upper = std::min(cn + (dn - dn1), cn1 + (head_c - head_d));
    if (lower > upper + tol_.ineq)
      throw Error(ErrorCode::ToleranceCollapse, "empty interval for x: [" + fmt(lower) + ", " + fmt(upper) + "]");
    const double x = lower <= upper ? 0.5 * (lower + upper) : lower;

    add_two_mode(solve_two_mode(x, cn, dn1, dn, tol_), {slots[m - 2], slots[m - 1]});

    std::vector<double> sub_c(c.begin(), c.end() - 1);
    std::vector<double> sub_d(d.begin(), d.end() - 2);
    sub_d.push_back(x);
    check_recursive(sub_c, sub_d);
    build(std::move(sub_c), std::move(sub_d), std::vector<int>(slots.begin(), slots.end() - 1));
  }

 private:
  void add_two_mode(const TwoModeBlock& block, std::vector<int> modes) {
    if (block.e == 0.0 && block.f == 0.0 && block.c1 == block.d1 && block.c2 == block.d2) return;
    // The Williamson transform of the block maps it to diag(d1, d1, d2, d2);
    // its inverse builds the block from that diagonal.
    const CovarianceMatrix gamma(Matrix(block.matrix()), tol_);
    const WilliamsonForm wf = williamson(gamma, tol_);
    SynthesisStep step;
    step.kind = SynthesisStep::Kind::TwoMode;
    step.modes = std::move(modes);
    step.block = block;
    step.transform = symplectic_inverse(wf.transform.matrix());
    steps.push_back(std::move(step));
  }

  // Permutes the slots so that slot j holds arrangement[j]; `current` lists
  // the values held now. Equal values keep their slot.
  void relabel(const std::vector<double>& current, const std::vector<double>& arrangement,
               const std::vector<int>& slots) {
    const int m = static_cast<int>(current.size());
    std::vector<int> source(m, -1);
    std::vector<bool> used(m, false);
    for (int j = 0; j < m; ++j) {
      if (current[j] == arrangement[j]) {
        source[j] = j;
        used[j] = true;
      }
    }
    for (int j = 0; j < m; ++j) {
      if (source[j] >= 0) continue;
      for (int i = 0; i < m; ++i) {
        if (!used[i] && current[i] == arrangement[j]) {
          source[j] = i;
          used[i] = true;
          break;
        }
      }
      if (source[j] < 0) throw Error(ErrorCode::ToleranceCollapse, "mode relabelling lost a value");
    }
    std::vector<int> moved;
    std::vector<int> order;
    for (int j = 0; j < m; ++j) {
      if (source[j] != j) moved.push_back(j);
    }
    if (moved.empty()) return;
    // Local permutation over the moved slots only.
    for (int j : moved) {
      const auto pos = std::find(moved.begin(), moved.end(), source[j]) - moved.begin();
      order.push_back(static_cast<int>(pos));
    }
    SynthesisStep step;
    step.kind = SynthesisStep::Kind::Congruence;
    for (int j : moved) step.modes.push_back(slots[j]);
    step.transform = mode_permutation(order);
    steps.push_back(std::move(step));
  }

  void check_recursive(const std::vector<double>& c, const std::vector<double>& d) const {
    const FeasibilityVerdict v = check_mixed(c, d, tol_);
    if (!v.feasible)
      throw Error(ErrorCode::ToleranceCollapse, "recursive sub-problem infeasible, min slack " + fmt(v.min_slack()));
  }

  Tolerances tol_;
};

}  // namespace

Eigen::Matrix4d TwoModeBlock::matrix() const {
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  g(0, 0) = g(1, 1) = c1;
  g(2, 2) = g(3, 3) = c2;
  g(0, 2) = g(2, 0) = e;
  g(1, 3) = g(3, 1) = f;
  return g;
}

std::pair<double, double> two_mode_eigenvalues_closed_form(double c1, double c2, double e, double f) {
  const double ef = e * f;
  const double radicand = c1 * c1 * c1 * c1 + c2 * c2 * c2 * c2 + 4.0 * ef * c2 * c2 -
                          2.0 * c1 * c1 * (c2 * c2 - 2.0 * ef) + 4.0 * c1 * c2 * (e * e + f * f);
  const double base = c1 * c1 + c2 * c2 + 2.0 * ef;
  const double root = std::sqrt(std::max(0.0, radicand));
  const double lo = 0.5 * (base - root);
  const double hi = 0.5 * (base + root);
  if (!(lo > 0.0) || c1 * c2 <= e * e || c1 * c2 <= f * f || !(c1 > 0.0))
    throw Error(ErrorCode::NotPositive, "two-mode block is not strictly positive");
  return {std::sqrt(lo), std::sqrt(hi)};
}

TwoModeBlock solve_two_mode(double c1, double c2, double d1, double d2, const Tolerances& tol) {
  if (!(c1 > 0.0 && c2 > 0.0 && d1 > 0.0 && d2 > 0.0))
    throw Error(ErrorCode::InvalidArgument, "two-mode values must be positive");
  if (d1 > d2) throw Error(ErrorCode::NotSorted, "two-mode spectrum must satisfy d1 <= d2");
  const double lo = std::min(c1, c2), hi = std::max(c1, c2);
  double sum_slack = (lo + hi) - (d1 + d2);
  double diff_slack = (d2 - d1) - (hi - lo);
  if (sum_slack < -tol.ineq || diff_slack < -tol.ineq) {
    throw Error(ErrorCode::InfeasiblePair, "c = (" + fmt(c1) + ", " + fmt(c2) + "), d = (" + fmt(d1) + ", " + fmt(d2) +
                                               "): slacks " + fmt(sum_slack) + ", " + fmt(diff_slack));
  }
  TwoModeBlock out{c1, c2, d1, d2, 0.0, 0.0};
  if (std::abs(sum_slack) <= tol.pos) sum_slack = 0.0;
  if (std::abs(diff_slack) <= tol.pos) diff_slack = 0.0;
  // (e + f)^2 = diff_slack * (...) and (e - f)^2 = sum_slack * (...).
  const double gap = hi - lo, spread = d2 - d1;
  const double cc4 = 4.0 * lo * hi;
  const double plus = std::max(0.0, diff_slack) * (spread + gap) * ((d1 + d2) - gap) * ((d1 + d2) + gap) / cc4;
  const double minus = std::max(0.0, sum_slack) * ((lo + hi) + (d1 + d2)) * ((lo + hi) - spread) * ((lo + hi) + spread) / cc4;
  const double sp = std::sqrt(plus), sm = std::sqrt(minus);
  out.e = 0.5 * (sp + sm);
  out.f = 0.5 * (sp - sm);
  return out;
}

Matrix SynthesisTrace::seed() const {
  Vector diag(2 * modes());
  for (int j = 0; j < modes(); ++j) diag(2 * j) = diag(2 * j + 1) = d[j];
  return diag.asDiagonal();
}

Matrix SynthesisTrace::replay_transform() const {
  const int n = modes();
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  for (const auto& step : steps) {
    if (step.kind == SynthesisStep::Kind::DirectSum) continue;
    s = embed_modes(step.transform, step.modes, n) * s;
  }
  return s;
}

Matrix SynthesisTrace::replay() const {
  const Matrix s = replay_transform();
  Matrix g = s * seed() * s.transpose();
  return 0.5 * (g + g.transpose());
}

SynthesisTrace synthesize(std::span<const double> c_in, std::span<const double> d_in, const Tolerances& tol) {
  if (c_in.size() != d_in.size())
    throw Error(ErrorCode::LengthMismatch, "c and d must have the same length");
  if (c_in.empty()) throw Error(ErrorCode::LengthMismatch, "empty input");
  std::vector<double> c = sorted_copy(c_in);
  std::vector<double> d = sorted_copy(d_in);
  const FeasibilityVerdict verdict = check_mixed(c, d, tol);
  if (!verdict.feasible)
    throw Error(ErrorCode::InfeasibleInput, "(c, d) violates " + verdict.violated().front().label());

  const int n = static_cast<int>(c.size());
  Builder builder(tol);
  std::vector<int> slots(n);
  std::iota(slots.begin(), slots.end(), 0);
  builder.build(c, d, slots);

  std::vector<SynthesisStep> steps;
  SynthesisStep seed;
  seed.kind = SynthesisStep::Kind::DirectSum;
  seed.modes = slots;
  seed.spectrum = d;
  steps.push_back(std::move(seed));
  for (auto& s : builder.steps) steps.push_back(std::move(s));

  SynthesisTrace trace{std::move(c), std::move(d), std::move(steps), Matrix(), CovarianceMatrix(Matrix::Identity(2 * n, 2 * n))};
  trace.transform = trace.replay_transform();
  trace.final_matrix = CovarianceMatrix(trace.replay(), tol);
  return trace;
}

SynthesisTrace synthesize_pure(std::span<const double> b, const Tolerances& tol) {
  const FeasibilityVerdict verdict = check_pure(b, tol);
  if (!verdict.feasible)
    throw Error(ErrorCode::InfeasibleInput, "b violates " + verdict.violated().front().label());
  std::vector<double> c(b.begin(), b.end());
  for (double& v : c) v += 1.0;
  const std::vector<double> ones(b.size(), 1.0);
  return synthesize(c, ones, tol);
}

SynthesisDefects measure_synthesis(const SynthesisTrace& trace, const Tolerances& tol) {
  SynthesisDefects out;
  const SpectrumVector d = symplectic_eigenvalues(trace.final_matrix, tol);
  const LocalDiagonal c = local_diagonal(trace.final_matrix);
  for (int j = 0; j < trace.modes(); ++j) {
    out.spectrum = std::max(out.spectrum, std::abs(d[j] - trace.d[j]));
    out.local = std::max(out.local, std::abs(c.by_mode[j] - trace.c[j]));
  }
  out.replay = max_abs(trace.replay() - trace.final_matrix.matrix());
  return out;
}

}  // namespace sympmarg
