#pragma once

#include <span>
#include <vector>

#include "sympmarg/marginal.hpp"
#include "sympmarg/symplectic.hpp"

namespace sympmarg {

/// Per-mode entropies of the local values together with the global bound.
struct EntropyReport {
  std::vector<double> per_mode_entropies;  ///< s(c_j), bits
  double total_local_sum = 0.0;            ///< sum_j s(c_j)
  double global_upper_bound = 0.0;         ///< s(sum_j c_j)
  /// Set when the report comes from a matrix: the entropy sum_j s(d_j) of
  /// the Gaussian state itself.
  bool has_gaussian_entropy = false;
  double gaussian_entropy = 0.0;
  /// Gaussian entropy does not exceed the bound (within tol.ineq).
  bool purity_consistent = true;
};

/// Von Neumann entropy in bits of a single mode with symplectic eigenvalue c:
/// ((c+1)/2) log2((c+1)/2) - ((c-1)/2) log2((c-1)/2). Values in
/// [1 - tol.psd, 1) are clamped to 1; smaller ones throw BelowOne.
double entropy_s(double c, const Tolerances& tol = kDefaultTolerances);

/// c >= 1 with entropy_s(c) = e, by bisection to 1e-12 relative. Throws
/// NegativeEntry for e < 0 and InversionFailure if no bracket is found.
double entropy_s_inverse(double e);

/// (s(c_1), ..., s(c_n)) of a pure physical matrix; NotPure otherwise.
std::vector<double> entanglement_profile(const CovarianceMatrix& gamma, const Tolerances& tol = kDefaultTolerances);

/// Whether the per-mode entanglement entropies e of a pure state are
/// compatible: check_pure(s^{-1}(e) - 1).
FeasibilityVerdict sharing_feasible(std::span<const double> e, const Tolerances& tol = kDefaultTolerances);

/// s(sum_k c_k). Throws BelowOne.
double entropy_upper_bound(std::span<const double> c, const Tolerances& tol = kDefaultTolerances);

EntropyReport entropy_report(std::span<const double> c, const Tolerances& tol = kDefaultTolerances);
EntropyReport entropy_report(const CovarianceMatrix& gamma, const Tolerances& tol = kDefaultTolerances);

}  // namespace sympmarg
