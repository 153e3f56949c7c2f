#include "sympmarg/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sympmarg {

Matrix symplectic_form(int modes) {
  Matrix sigma = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    sigma(2 * k, 2 * k + 1) = 1.0;
    sigma(2 * k + 1, 2 * k) = -1.0;
  }
  return sigma;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double symplectic_defect(const Matrix& s) {
  const Matrix sigma = symplectic_form(static_cast<int>(s.rows() / 2));
  return max_abs(s * sigma * s.transpose() - sigma);
}

double orthogonality_defect(const Matrix& o) {
  return max_abs(o * o.transpose() - Matrix::Identity(o.rows(), o.cols()));
}

Matrix symplectic_inverse(const Matrix& s) {
  const Matrix sigma = symplectic_form(static_cast<int>(s.rows() / 2));
  return -sigma * s.transpose() * sigma;
}

Matrix embed_modes(const Matrix& local, std::span<const int> modes, int total_modes) {
  const int k = static_cast<int>(modes.size());
  if (local.rows() != 2 * k || local.cols() != 2 * k)
    throw Error(ErrorCode::InvalidArgument, "local transform does not match the number of modes");
  Matrix out = Matrix::Identity(2 * total_modes, 2 * total_modes);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      out.block<2, 2>(2 * modes[a], 2 * modes[b]) = local.block<2, 2>(2 * a, 2 * b);
    }
  }
  return out;
}

Matrix mode_permutation(std::span<const int> order) {
  const int n = static_cast<int>(order.size());
  Matrix p = Matrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    p(2 * j, 2 * order[j]) = 1.0;
    p(2 * j + 1, 2 * order[j] + 1) = 1.0;
  }
  return p;
}

Matrix passive_from_unitary(const ComplexMatrix& u) {
  const auto n = u.rows();
  Matrix o(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = u(j, k).real();
      const double im = u(j, k).imag();
      o(2 * j, 2 * k) = re;
      o(2 * j, 2 * k + 1) = im;
      o(2 * j + 1, 2 * k) = -im;
      o(2 * j + 1, 2 * k + 1) = re;
    }
  }
  return o;
}

ComplexMatrix unitary_from_passive(const Matrix& o, const Tolerances& tol) {
  if (o.rows() != o.cols() || o.rows() % 2 != 0)
    throw Error(ErrorCode::NotPassive, "passive transform must be square with even dimension");
  const auto n = o.rows() / 2;
  ComplexMatrix u(n, n);
  double structure = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double re = o(2 * j, 2 * k);
      const double im = o(2 * j, 2 * k + 1);
      structure = std::max({structure, std::abs(o(2 * j + 1, 2 * k + 1) - re), std::abs(o(2 * j + 1, 2 * k) + im)});
      u(j, k) = {re, im};
    }
  }
  const double ortho = orthogonality_defect(o);
  if (structure > tol.sympl || ortho > tol.sympl) {
    throw Error(ErrorCode::NotPassive, "matrix is not orthogonal-symplectic (block defect " + std::to_string(structure) +
                                           ", orthogonality defect " + std::to_string(ortho) + ")");
  }
  return u;
}

double SpectrumVector::sum() const noexcept { return std::accumulate(values.begin(), values.end(), 0.0); }

CovarianceMatrix::CovarianceMatrix(const Matrix& m, const Tolerances& tol) {
  if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "covariance matrix must be square with positive even dimension");
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, "covariance matrix has non-finite entries");
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m - m.transpose());
  if (asym > tol.sym * scale)
    throw Error(ErrorCode::NotSymmetric, "asymmetry " + std::to_string(asym) + " exceeds tolerance");
  gamma_ = 0.5 * (m + m.transpose());
  const double smallest = Eigen::SelfAdjointEigenSolver<Matrix>(gamma_, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (!(smallest > tol.pos))
    throw Error(ErrorCode::NotPositive, "smallest eigenvalue " + std::to_string(smallest) + " is not positive");
}

double CovarianceMatrix::uncertainty_margin() const {
  const ComplexMatrix h = gamma_.cast<std::complex<double>>() +
                          std::complex<double>(0.0, 1.0) * symplectic_form(modes()).cast<std::complex<double>>();
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

bool CovarianceMatrix::is_physical(const Tolerances& tol) const { return uncertainty_margin() >= -tol.psd; }

SymplecticTransform::SymplecticTransform(const Matrix& s, const Tolerances& tol) : s_(s) {
  if (s.rows() != s.cols() || s.rows() == 0 || s.rows() % 2 != 0)
    throw Error(ErrorCode::NotSymplectic, "symplectic transform must be square with positive even dimension");
  const double scale = std::max(1.0, max_abs(s));
  const double defect = symplectic_defect(s);
  if (!(defect <= tol.sympl * scale * scale))
    throw Error(ErrorCode::NotSymplectic, "symplectic defect " + std::to_string(defect) + " exceeds tolerance");
}

SymplecticTransform SymplecticTransform::identity(int modes) {
  return SymplecticTransform(Matrix::Identity(2 * modes, 2 * modes), Unchecked{});
}

SymplecticTransform SymplecticTransform::inverse() const { return SymplecticTransform(symplectic_inverse(s_), Unchecked{}); }

Matrix EulerFactors::squeeze_matrix() const {
  const auto n = static_cast<Eigen::Index>(squeezing.size());
  Vector diag(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    diag(2 * k) = squeezing[k];
    diag(2 * k + 1) = 1.0 / squeezing[k];
  }
  return diag.asDiagonal();
}

Matrix EulerFactors::reconstruct() const { return outer.matrix() * squeeze_matrix() * inner.matrix(); }

}  // namespace sympmarg
