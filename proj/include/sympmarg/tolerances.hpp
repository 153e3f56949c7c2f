#pragma once

namespace sympmarg {

/// Numerical tolerances shared by every module. The symmetry and
/// symplecticity tolerances are relative to the max-norm of the matrix under
/// test; all others are absolute.
struct Tolerances {
  double sym = 1e-10;
  double sympl = 1e-10;
  double pos = 1e-12;
  double psd = 1e-9;
  double recon = 1e-8;
  double ineq = 1e-9;
  /// Relative gap below which two symplectic eigenvalues share a block.
  double pair = 1e-8;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace sympmarg
