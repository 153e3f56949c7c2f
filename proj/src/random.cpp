#include <cmath>
#include <complex>

#include "sympmarg/symplectic.hpp"

namespace sympmarg {

Matrix random_passive(int modes, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(modes, modes);
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < modes; ++j) g(i, j) = {normal(rng), normal(rng)};
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(modes, modes);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fixing the phases of diag(R) makes Q Haar distributed.
  for (int j = 0; j < modes; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return passive_from_unitary(q);
}

SymplecticTransform random_symplectic(int modes, double squeeze_bound, std::uint64_t seed) {
  if (modes < 1) throw Error(ErrorCode::InvalidArgument, "mode count must be positive");
  if (!(squeeze_bound >= 1.0)) throw Error(ErrorCode::InvalidArgument, "squeeze bound must be >= 1");
  std::mt19937_64 rng(seed);
  const Matrix outer = random_passive(modes, rng);
  const Matrix inner = random_passive(modes, rng);
  std::uniform_real_distribution<double> uniform(1.0, squeeze_bound);
  Vector diag(2 * modes);
  for (int k = 0; k < modes; ++k) {
    const double z = squeeze_bound > 1.0 ? uniform(rng) : 1.0;
    diag(2 * k) = z;
    diag(2 * k + 1) = 1.0 / z;
  }
  return SymplecticTransform::unchecked(outer * diag.asDiagonal() * inner);
}

}  // namespace sympmarg
