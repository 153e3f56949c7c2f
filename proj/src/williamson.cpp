#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "detail/gram_schmidt.hpp"
#include "sympmarg/symplectic.hpp"

namespace sympmarg {
namespace {

struct Kernel {
  Matrix sqrt_gamma;
  Matrix inv_sqrt_gamma;
  Matrix k;  // sqrt(gamma) sigma sqrt(gamma), antisymmetric
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian;  // of i K
};

Kernel make_kernel(const CovarianceMatrix& gamma) {
  const int n = gamma.modes();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gamma.matrix());
  const Vector lambda = eig.eigenvalues();
  if (!(lambda(0) > 0.0)) throw Error(ErrorCode::NotPositive, "covariance matrix lost positivity");
  const Matrix& v = eig.eigenvectors();
  Kernel out;
  out.sqrt_gamma = v * lambda.cwiseSqrt().asDiagonal() * v.transpose();
  out.inv_sqrt_gamma = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  out.k = out.sqrt_gamma * symplectic_form(n) * out.sqrt_gamma;
  out.k = 0.5 * (out.k - out.k.transpose());
  const ComplexMatrix ik = std::complex<double>(0.0, 1.0) * out.k.cast<std::complex<double>>();
  out.hermitian.compute(ik);
  return out;
}

// Positive half of the spectrum of iK, ascending, after checking that it is
// mirrored by the negative half.
std::vector<double> paired_spectrum(const Vector& eigenvalues, int n, const Tolerances& tol) {
  std::vector<double> d(n);
  const double top = std::abs(eigenvalues(2 * n - 1));
  for (int j = 0; j < n; ++j) {
    const double plus = eigenvalues(n + j);
    const double minus = -eigenvalues(n - 1 - j);
    if (!(plus > 0.0) || std::abs(plus - minus) > tol.pair * std::max(1.0, top)) {
      throw Error(ErrorCode::SpectralPairingFailure,
                  "eigenvalues " + std::to_string(plus) + " and " + std::to_string(-minus) + " do not pair");
    }
    d[j] = 0.5 * (plus + minus);
  }
  return d;
}

// Consecutive runs of (ascending) values within tol.pair * max.
std::vector<std::vector<int>> degenerate_runs(const std::vector<double>& d, const Tolerances& tol) {
  std::vector<std::vector<int>> runs;
  const double gap = tol.pair * std::max(1.0, d.back());
  for (int j = 0; j < static_cast<int>(d.size()); ++j) {
    if (!runs.empty() && d[j] - d[runs.back().back()] <= gap)
      runs.back().push_back(j);
    else
      runs.push_back({j});
  }
  return runs;
}

}  // namespace

SpectrumVector symplectic_eigenvalues(const CovarianceMatrix& gamma, const Tolerances& tol) {
  const int n = gamma.modes();
  const Matrix a = [&] {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gamma.matrix());
    return Matrix(eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose());
  }();
  Matrix k = a * symplectic_form(n) * a;
  k = 0.5 * (k - k.transpose());
  const ComplexMatrix ik = std::complex<double>(0.0, 1.0) * k.cast<std::complex<double>>();
  const Vector ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(ik, Eigen::EigenvaluesOnly).eigenvalues();
  return {paired_spectrum(ev, n, tol), SpectrumKind::SymplecticSpectrum};
}

double symplectic_trace(const CovarianceMatrix& gamma, const Tolerances& tol) {
  return symplectic_eigenvalues(gamma, tol).sum();
}

WilliamsonForm williamson(const CovarianceMatrix& gamma, const Tolerances& tol) {
  const int n = gamma.modes();
  const Kernel kernel = make_kernel(gamma);
  const std::vector<double> d = paired_spectrum(kernel.hermitian.eigenvalues(), n, tol);
  const auto runs = degenerate_runs(d, tol);

  // iK u = d u with u = a + i b gives K a = d b and K b = -d a. A real
  // orthonormal basis of each block is {sqrt(2) a_j, sqrt(2) b_j}; inside it we
  // pick a (p-slot) by pivoting and set b = K a / |K a| (x-slot).
  const ComplexMatrix& u = kernel.hermitian.eigenvectors();
  std::vector<int> axes;
  for (int m = 0; m < n; ++m) {
    axes.push_back(2 * m + 1);
    axes.push_back(2 * m);
  }

  Matrix w(2 * n, 2 * n);
  Vector pair_values(n);
  detail::OrthonormalSet chosen(2 * n);
  for (const auto& run : runs) {
    const int m = static_cast<int>(run.size());
    Matrix basis(2 * n, 2 * m);
    for (int t = 0; t < m; ++t) {
      const auto col = u.col(n + run[t]);
      basis.col(2 * t) = std::sqrt(2.0) * col.real();
      basis.col(2 * t + 1) = std::sqrt(2.0) * col.imag();
    }
    // Re-orthonormalise the block basis; it is orthonormal up to rounding.
    Eigen::HouseholderQR<Matrix> qr(basis);
    basis = qr.householderQ() * Matrix::Identity(2 * n, 2 * m);
    const auto pairs = detail::pivoted_pairs(
        basis, axes, m, [&](const Vector& a) { return Vector(kernel.k * a); }, chosen);
    for (int t = 0; t < m; ++t) {
      const int mode = run[t];
      w.col(2 * mode) = pairs[t].partner;
      w.col(2 * mode + 1) = pairs[t].primary;
      pair_values(mode) = d[mode];
    }
  }

  Vector sqrt_d(2 * n);
  for (int j = 0; j < n; ++j) sqrt_d(2 * j) = sqrt_d(2 * j + 1) = std::sqrt(pair_values(j));
  const Matrix s = sqrt_d.asDiagonal() * w.transpose() * kernel.inv_sqrt_gamma;
  const double scale = std::max(1.0, max_abs(s));
  if (!(symplectic_defect(s) <= 1e-6 * scale * scale))
    throw Error(ErrorCode::DegenerateSubspaceFailure, "normal-mode basis is not symplectic");

  WilliamsonForm out{SymplecticTransform::unchecked(s), {d, SpectrumKind::SymplecticSpectrum}, {}};
  for (const auto& run : runs)
    if (run.size() > 1) out.degenerate_blocks.push_back(run);
  return out;
}

}  // namespace sympmarg
