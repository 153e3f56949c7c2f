#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sympmarg/error.hpp"
#include "sympmarg/tolerances.hpp"

// Phase-space conventions: n modes, coordinates ordered (x1, p1, ..., xn, pn),
// symplectic form sigma = diag([[0, 1], [-1, 0]], ...).

namespace sympmarg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// The 2n x 2n block-diagonal symplectic form.
Matrix symplectic_form(int modes);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& m);

/// max |S sigma S^T - sigma|.
double symplectic_defect(const Matrix& s);

/// max |O O^T - 1|.
double orthogonality_defect(const Matrix& o);

/// Inverse of a symplectic matrix, -sigma S^T sigma.
Matrix symplectic_inverse(const Matrix& s);

/// Embeds a 2k x 2k transform acting on `modes` (in the order given) into the
/// identity on `total_modes` modes.
Matrix embed_modes(const Matrix& local, std::span<const int> modes, int total_modes);

/// Symplectic (orthogonal) matrix moving the content of mode `order[j]` to mode j.
Matrix mode_permutation(std::span<const int> order);

/// Real 2n x 2n image of an n x n unitary. Entry U_jk becomes the block
/// [[Re U_jk, Im U_jk], [-Im U_jk, Re U_jk]].
Matrix passive_from_unitary(const ComplexMatrix& u);

/// Inverse of passive_from_unitary; throws NotPassive when `o` does not have
/// the block structure or is not orthogonal within tol.sympl.
ComplexMatrix unitary_from_passive(const Matrix& o, const Tolerances& tol = kDefaultTolerances);

enum class SpectrumKind { SymplecticSpectrum, LocalDiagonal };

/// Non-decreasing vector of positive values: either symplectic eigenvalues d
/// or symplectic main diagonal elements c.
struct SpectrumVector {
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::SymplecticSpectrum;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double sum() const noexcept;
};

/// Strictly positive real symmetric 2n x 2n matrix.
class CovarianceMatrix {
 public:
  /// Validates symmetry (relative tol.sym), even dimension and strict
  /// positivity (smallest eigenvalue > tol.pos). The stored matrix is the
  /// symmetric part of `m`.
  explicit CovarianceMatrix(const Matrix& m, const Tolerances& tol = kDefaultTolerances);

  int modes() const noexcept { return static_cast<int>(gamma_.rows() / 2); }
  const Matrix& matrix() const noexcept { return gamma_; }

  /// Smallest eigenvalue of the Hermitian matrix gamma + i sigma.
  double uncertainty_margin() const;
  /// gamma + i sigma >= 0 within tol.psd.
  bool is_physical(const Tolerances& tol = kDefaultTolerances) const;

 private:
  Matrix gamma_;
};

/// Real 2n x 2n matrix S with S sigma S^T = sigma.
class SymplecticTransform {
 public:
  /// Throws NotSymplectic if the defect exceeds tol.sympl * max(1, |S|_max^2).
  explicit SymplecticTransform(const Matrix& s, const Tolerances& tol = kDefaultTolerances);

  static SymplecticTransform identity(int modes);
  /// Skips validation; for results that are symplectic by construction.
  static SymplecticTransform unchecked(Matrix s) { return SymplecticTransform(std::move(s), Unchecked{}); }

  int modes() const noexcept { return static_cast<int>(s_.rows() / 2); }
  const Matrix& matrix() const noexcept { return s_; }
  SymplecticTransform inverse() const;

 private:
  struct Unchecked {};
  SymplecticTransform(Matrix s, Unchecked) : s_(std::move(s)) {}
  Matrix s_;
};

struct WilliamsonForm {
  /// S with S gamma S^T = diag(d1, d1, ..., dn, dn).
  SymplecticTransform transform;
  SpectrumVector spectrum;
  /// Groups of mode indices whose symplectic eigenvalues coincide within tol.pair.
  std::vector<std::vector<int>> degenerate_blocks;
};

/// S = O diag(z1, 1/z1, ..., zn, 1/zn) V with O, V orthogonal-symplectic.
struct EulerFactors {
  SymplecticTransform outer;
  std::vector<double> squeezing;  ///< z_k >= 1
  SymplecticTransform inner;

  Matrix squeeze_matrix() const;
  Matrix reconstruct() const;
};

/// Simply counted symplectic eigenvalues, non-decreasing.
SpectrumVector symplectic_eigenvalues(const CovarianceMatrix& gamma,
                                      const Tolerances& tol = kDefaultTolerances);

/// Williamson normal form. Within a degenerate block the basis is fixed by a
/// pivoted symplectic Gram-Schmidt sweep over the coordinate axes, so the
/// result is reproducible (diagonal inputs give S = 1).
WilliamsonForm williamson(const CovarianceMatrix& gamma, const Tolerances& tol = kDefaultTolerances);

/// Sum of the symplectic eigenvalues.
double symplectic_trace(const CovarianceMatrix& gamma, const Tolerances& tol = kDefaultTolerances);

EulerFactors euler_decompose(const SymplecticTransform& s, const Tolerances& tol = kDefaultTolerances);

/// Haar-random element of Sp(2n) intersect O(2n), i.e. the image of a Haar unitary.
Matrix random_passive(int modes, std::mt19937_64& rng);

/// O diag(z, 1/z) V with Haar passive O, V and z_k uniform in [1, squeeze_bound].
/// Deterministic per seed.
SymplecticTransform random_symplectic(int modes, double squeeze_bound, std::uint64_t seed);

}  // namespace sympmarg
