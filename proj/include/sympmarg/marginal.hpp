#pragma once

#include <span>
#include <string>
#include <vector>

#include "sympmarg/symplectic.hpp"

namespace sympmarg {

/// Symplectic main diagonal elements of a matrix together with the local
/// symplectic 2x2 maps bringing each diagonal block to c_j * 1.
struct LocalDiagonal {
  /// Sorted non-decreasing.
  SpectrumVector values;
  /// values[i] belongs to mode order[i].
  std::vector<int> order;
  /// Per-mode values in mode order.
  std::vector<double> by_mode;
  /// normal_forms[j] * block_j * normal_forms[j]^T = by_mode[j] * 1, det = 1.
  std::vector<Eigen::Matrix2d> normal_forms;

  /// Block-diagonal symplectic matrix made of the per-mode normal forms.
  Matrix local_transform() const;
};

struct Constraint {
  enum class Kind { PartialSum, LastCondition, PureCone };
  Kind kind;
  /// 1-based: k for PartialSum(k), the mode j for PureCone(j); 0 for LastCondition.
  int index = 0;
  /// Negative means violated.
  double slack = 0.0;

  std::string label() const;
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<Constraint> constraints;
  double tolerance = 0.0;

  std::vector<Constraint> violated() const;
  double min_slack() const;
};

/// Temperatures of single modes in oscillator units. b = 0 maps to T = 0,
/// flagged in `zero_temperature`.
struct TemperatureVector {
  std::vector<double> values;
  std::vector<bool> zero_temperature;
};

LocalDiagonal local_diagonal(const CovarianceMatrix& gamma);

/// Partial-sum and last-condition test for sorted positive vectors.
FeasibilityVerdict check_mixed(std::span<const double> c, std::span<const double> d,
                               const Tolerances& tol = kDefaultTolerances);

/// Pure cone b_j <= sum_{k != j} b_k; reports the constraint for j = argmax b.
FeasibilityVerdict check_pure(std::span<const double> b, const Tolerances& tol = kDefaultTolerances);

/// check_mixed(local_diagonal(gamma), symplectic_eigenvalues(gamma)).
FeasibilityVerdict check_matrix_consistency(const CovarianceMatrix& gamma,
                                            const Tolerances& tol = kDefaultTolerances);

std::vector<double> temperature_to_b(std::span<const double> temperatures);
TemperatureVector b_to_temperature(std::span<const double> b);

/// sum_{j>=2} d_j + (3 - 2n) d_1 - (c_n - sum_{j<n} c_j) for sorted c, d.
double last_condition_upper_bound_slack(std::span<const double> c, std::span<const double> d);

/// Sorted copy plus the permutation used (sorted[i] = values[order[i]]).
std::vector<double> sorted_copy(std::span<const double> values, std::vector<int>* order = nullptr);

}  // namespace sympmarg
