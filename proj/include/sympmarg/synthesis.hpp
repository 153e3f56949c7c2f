#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sympmarg/marginal.hpp"
#include "sympmarg/symplectic.hpp"

namespace sympmarg {

/// Two-mode matrix [[c1, 0, e, 0], [0, c1, 0, f], [e, 0, c2, 0], [0, f, 0, c2]]
/// with symplectic eigenvalues (d1, d2). c1, c2 follow mode order and need
/// not be sorted; d1 <= d2.
struct TwoModeBlock {
  double c1 = 1.0, c2 = 1.0;
  double d1 = 1.0, d2 = 1.0;
  double e = 0.0, f = 0.0;

  Eigen::Matrix4d matrix() const;
};

/// Symplectic eigenvalues of the TwoModeBlock assembled from (c1, c2, e, f),
/// evaluated with the explicit radical formula. Sorted ascending.
std::pair<double, double> two_mode_eigenvalues_closed_form(double c1, double c2, double e, double f);

/// Couplings (e, f) realising spectrum (d1, d2) with local values (c1, c2).
/// Requires c1 + c2 >= d1 + d2 and |c2 - c1| <= d2 - d1 within tol.ineq.
TwoModeBlock solve_two_mode(double c1, double c2, double d1, double d2, const Tolerances& tol = kDefaultTolerances);

struct SynthesisStep {
  enum class Kind {
    DirectSum,   ///< seed diag(d1, d1, ..., dn, dn)
    TwoMode,     ///< two-mode coupling on `modes`, from `block`
    Congruence,  ///< mode relabelling on `modes`
  };
  Kind kind = Kind::DirectSum;
  std::vector<int> modes;
  std::vector<double> spectrum;       // DirectSum only
  std::optional<TwoModeBlock> block;  // TwoMode only
  Matrix transform;                   // local 2k x 2k symplectic; empty for DirectSum
};

/// Ordered record of the construction. Replaying applies each step as a
/// congruence, in order, to the seed.
struct SynthesisTrace {
  std::vector<double> c;  ///< target local values, sorted
  std::vector<double> d;  ///< target symplectic eigenvalues, sorted
  std::vector<SynthesisStep> steps;
  /// S with final_matrix = S diag(d1, d1, ...) S^T.
  Matrix transform;
  CovarianceMatrix final_matrix;

  int modes() const noexcept { return static_cast<int>(d.size()); }
  Matrix seed() const;
  /// Product of all step transforms (the first step applied rightmost).
  Matrix replay_transform() const;
  Matrix replay() const;
};

/// Builds a matrix whose symplectic main diagonal is c and whose symplectic
/// spectrum is d. Inputs are sorted internally; mode j of the result carries
/// the j-th smallest c. Throws InfeasibleInput unless check_mixed(c, d) holds.
SynthesisTrace synthesize(std::span<const double> c, std::span<const double> d,
                          const Tolerances& tol = kDefaultTolerances);

/// synthesize(b + 1, 1) for the pure cone.
SynthesisTrace synthesize_pure(std::span<const double> b, const Tolerances& tol = kDefaultTolerances);

struct SynthesisDefects {
  double spectrum = 0.0;  ///< max |d_williamson - d|
  double local = 0.0;     ///< max |c_local - c|
  double replay = 0.0;    ///< max |replay() - final_matrix|
};

SynthesisDefects measure_synthesis(const SynthesisTrace& trace, const Tolerances& tol = kDefaultTolerances);

}  // namespace sympmarg
