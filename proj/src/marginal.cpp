#include "sympmarg/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sympmarg {
namespace {

void require_positive_sorted(std::span<const double> v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i]))
      throw Error(ErrorCode::NonPositive, std::string(name) + " has a non-positive entry at position " + std::to_string(i + 1));
    if (i > 0 && v[i] < v[i - 1])
      throw Error(ErrorCode::NotSorted, std::string(name) + " is not non-decreasing at position " + std::to_string(i + 1));
  }
}

}  // namespace

Matrix LocalDiagonal::local_transform() const {
  const int n = static_cast<int>(normal_forms.size());
  Matrix out = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) out.block<2, 2>(2 * j, 2 * j) = normal_forms[j];
  return out;
}

std::string Constraint::label() const {
  switch (kind) {
    case Kind::PartialSum: return "PartialSum(" + std::to_string(index) + ")";
    case Kind::LastCondition: return "LastCondition";
    case Kind::PureCone: return "PureCone(" + std::to_string(index) + ")";
  }
  return "?";
}

std::vector<Constraint> FeasibilityVerdict::violated() const {
  std::vector<Constraint> out;
  for (const auto& c : constraints)
    if (c.slack < -tolerance) out.push_back(c);
  return out;
}

double FeasibilityVerdict::min_slack() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : constraints) m = std::min(m, c.slack);
  return m;
}

std::vector<double> sorted_copy(std::span<const double> values, std::vector<int>* order) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
  std::vector<double> out;
  out.reserve(values.size());
  for (int i : idx) out.push_back(values[i]);
  if (order) *order = std::move(idx);
  return out;
}

LocalDiagonal local_diagonal(const CovarianceMatrix& gamma) {
  const int n = gamma.modes();
  const Matrix& g = gamma.matrix();
  LocalDiagonal out;
  out.by_mode.resize(n);
  out.normal_forms.resize(n);
  for (int j = 0; j < n; ++j) {
    const Eigen::Matrix2d block = g.block<2, 2>(2 * j, 2 * j);
    const double det = block(0, 0) * block(1, 1) - block(0, 1) * block(0, 1);
    if (!(det > 0.0))
      throw Error(ErrorCode::NotPositive, "diagonal block of mode " + std::to_string(j + 1) + " is not positive");
    const double c = std::sqrt(det);
    out.by_mode[j] = c;
    // sqrt(c) * block^{-1/2} has unit determinant and maps block to c * 1.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(block);
    const Eigen::Vector2d inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
    out.normal_forms[j] = std::sqrt(c) * eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
  }
  out.values = {sorted_copy(out.by_mode, &out.order), SpectrumKind::LocalDiagonal};
  return out;
}

FeasibilityVerdict check_mixed(std::span<const double> c, std::span<const double> d, const Tolerances& tol) {
  if (c.size() != d.size())
    throw Error(ErrorCode::LengthMismatch, "c has " + std::to_string(c.size()) + " entries, d has " + std::to_string(d.size()));
  if (c.empty()) throw Error(ErrorCode::LengthMismatch, "empty vectors");
  require_positive_sorted(c, "c");
  require_positive_sorted(d, "d");
  const int n = static_cast<int>(c.size());
  FeasibilityVerdict v;
  v.tolerance = tol.ineq;
  double sc = 0.0, sd = 0.0;
  for (int k = 0; k < n; ++k) {
    sc += c[k];
    sd += d[k];
    v.constraints.push_back({Constraint::Kind::PartialSum, k + 1, sc - sd});
  }
  const double head_c = sc - c[n - 1];
  const double head_d = sd - d[n - 1];
  v.constraints.push_back({Constraint::Kind::LastCondition, 0, (d[n - 1] - head_d) - (c[n - 1] - head_c)});
  v.feasible = v.min_slack() >= -tol.ineq;
  return v;
}

FeasibilityVerdict check_pure(std::span<const double> b, const Tolerances& tol) {
  if (b.empty()) throw Error(ErrorCode::LengthMismatch, "empty vector");
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!(b[i] >= 0.0) || !std::isfinite(b[i]))
      throw Error(ErrorCode::NegativeEntry, "b has a negative entry at position " + std::to_string(i + 1));
  const auto top = std::max_element(b.begin(), b.end());
  const double total = std::accumulate(b.begin(), b.end(), 0.0);
  FeasibilityVerdict v;
  v.tolerance = tol.ineq;
  v.constraints.push_back({Constraint::Kind::PureCone, static_cast<int>(top - b.begin()) + 1, (total - *top) - *top});
  v.feasible = v.min_slack() >= -tol.ineq;
  return v;
}

FeasibilityVerdict check_matrix_consistency(const CovarianceMatrix& gamma, const Tolerances& tol) {
  const LocalDiagonal c = local_diagonal(gamma);
  const SpectrumVector d = symplectic_eigenvalues(gamma, tol);
  return check_mixed(c.values.values, d.values, tol);
}

std::vector<double> temperature_to_b(std::span<const double> temperatures) {
  std::vector<double> b;
  b.reserve(temperatures.size());
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    const double t = temperatures[i];
    if (!(t > 0.0))
      throw Error(ErrorCode::NonPositiveTemperature, "temperature at position " + std::to_string(i + 1) + " is not positive");
    b.push_back(2.0 / std::expm1(1.0 / t));
  }
  return b;
}

TemperatureVector b_to_temperature(std::span<const double> b) {
  TemperatureVector out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!(b[i] >= 0.0))
      throw Error(ErrorCode::NegativeEntry, "b has a negative entry at position " + std::to_string(i + 1));
    if (b[i] == 0.0) {
      out.values.push_back(0.0);
      out.zero_temperature.push_back(true);
    } else {
      out.values.push_back(1.0 / std::log1p(2.0 / b[i]));
      out.zero_temperature.push_back(false);
    }
  }
  return out;
}

double last_condition_upper_bound_slack(std::span<const double> c, std::span<const double> d) {
  const int n = static_cast<int>(c.size());
  const double head_c = std::accumulate(c.begin(), c.end() - 1, 0.0);
  const double tail_d = std::accumulate(d.begin() + 1, d.end(), 0.0);
  return tail_d + (3.0 - 2.0 * n) * d[0] - (c[n - 1] - head_c);
}

}  // namespace sympmarg
