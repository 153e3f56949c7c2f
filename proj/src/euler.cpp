#include <algorithm>
#include <cmath>

#include "detail/gram_schmidt.hpp"
#include "sympmarg/symplectic.hpp"

namespace sympmarg {

// S^T S = V^T diag(z1^2, 1/z1^2, ...) V. Eigenvectors of S^T S above 1 span an
// isotropic subspace, and -sigma maps the lambda-eigenspace onto the
// 1/lambda-eigenspace, so the rows of V come in pairs (v, -sigma v). Exactly
// degenerate eigenvalues (including the cluster at 1) are resolved by pivoted
// Gram-Schmidt over the coordinate axes so identity-like inputs give V = 1.
EulerFactors euler_decompose(const SymplecticTransform& transform, const Tolerances& tol) {
  const Matrix& s = transform.matrix();
  const int n = transform.modes();
  const Matrix sigma = symplectic_form(n);
  {
    const double scale = std::max(1.0, max_abs(s));
    if (!(symplectic_defect(s) <= tol.sympl * scale * scale))
      throw Error(ErrorCode::NotSymplectic, "Euler decomposition needs a symplectic input");
  }

  Matrix gram = s.transpose() * s;
  gram = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Vector& lambda = eig.eigenvalues();  // ascending
  const Matrix& vecs = eig.eigenvectors();
  const double top = lambda(2 * n - 1);
  const double cluster_gap = 1e-12 * std::max(1.0, top);

  std::vector<int> axes;
  for (int m = 0; m < n; ++m) {
    axes.push_back(2 * m);
    axes.push_back(2 * m + 1);
  }
  const auto partner = [&](const Vector& v) { return Vector(-sigma * v); };

  detail::OrthonormalSet chosen(2 * n);
  std::vector<Vector> rows;
  rows.reserve(2 * n);
  int idx = 2 * n - 1;
  while (static_cast<int>(rows.size()) < 2 * n) {
    if (idx < 0) throw Error(ErrorCode::NumericalFailure, "Euler decomposition ran out of eigenvectors");
    const int remaining = n - static_cast<int>(rows.size()) / 2;
    if (lambda(idx) - 1.0 <= cluster_gap) {
      // Everything left sits at 1: the remaining 2 * remaining dimensions form
      // one block, split symplectically.
      const Matrix basis = vecs.middleCols(idx + 1 - 2 * remaining, 2 * remaining);
      const auto pairs = detail::pivoted_pairs(basis, axes, remaining, partner, chosen);
      for (const auto& p : pairs) {
        rows.push_back(p.primary);
        rows.push_back(p.partner);
      }
      break;
    }
    int lo = idx;
    while (lo - 1 >= 0 && lambda(idx) - lambda(lo - 1) <= cluster_gap && lambda(lo - 1) - 1.0 > cluster_gap) --lo;
    const int m = idx - lo + 1;
    const Matrix basis = vecs.middleCols(lo, m);
    const auto pairs = detail::pivoted_pairs(basis, axes, m, partner, chosen);
    for (const auto& p : pairs) {
      rows.push_back(p.primary);
      rows.push_back(p.partner);
    }
    idx = lo - 1;
  }

  Matrix v(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r) v.row(r) = rows[r].transpose();
  std::vector<double> z(n);
  for (int k = 0; k < n; ++k) {
    const double rayleigh = rows[2 * k].dot(gram * rows[2 * k]);
    z[k] = std::max(1.0, std::sqrt(rayleigh));
  }
  Vector inv_z(2 * n);
  for (int k = 0; k < n; ++k) {
    inv_z(2 * k) = 1.0 / z[k];
    inv_z(2 * k + 1) = z[k];
  }
  const Matrix o = s * v.transpose() * inv_z.asDiagonal();
  return {SymplecticTransform::unchecked(o), std::move(z), SymplecticTransform::unchecked(v)};
}

}  // namespace sympmarg
