#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sympmarg/sampling.hpp"
#include "sympmarg/symplectic.hpp"

using namespace sympmarg;

namespace {

Matrix two_mode_squeezed() {
  const double r = std::sqrt(3.0);
  Matrix g(4, 4);
  g << 2, 0, r, 0,
       0, 2, 0, -r,
       r, 0, 2, 0,
       0, -r, 0, 2;
  return g;
}

}  // namespace

TEST_SUITE("symplectic_core") {

TEST_CASE("symplectic form squares to minus identity") {
  const Matrix s = symplectic_form(3);
  CHECK(max_abs(s + s.transpose()) == 0.0);
  CHECK(max_abs(s * s + Matrix::Identity(6, 6)) == 0.0);
}

TEST_CASE("symplectic eigenvalues of simple matrices") {
  for (double v : symplectic_eigenvalues(CovarianceMatrix(Matrix::Identity(4, 4))).values) CHECK(std::abs(v - 1.0) < 1e-14);
  const SpectrumVector d = symplectic_eigenvalues(CovarianceMatrix(oracle::diag_pairs({2, 3})));
  CHECK(d[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(d[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(d.kind == SpectrumKind::SymplecticSpectrum);
}

TEST_CASE("symplectic eigenvalues survive a random congruence") {
  const Matrix s = random_symplectic(2, 3.0, 11).matrix();
  const Matrix g = s * oracle::diag_pairs({1.5, 2.5}) * s.transpose();
  const SpectrumVector d = symplectic_eigenvalues(CovarianceMatrix(0.5 * (g + g.transpose())));
  CHECK(std::abs(d[0] - 1.5) < 1e-9);
  CHECK(std::abs(d[1] - 2.5) < 1e-9);
}

TEST_CASE("williamson of a single thermal mode is trivial") {
  const WilliamsonForm w = williamson(CovarianceMatrix(3.0 * Matrix::Identity(2, 2)));
  CHECK(max_abs(w.transform.matrix() - Matrix::Identity(2, 2)) < 1e-14);
  CHECK(w.spectrum[0] == doctest::Approx(3.0));
}

TEST_CASE("two-mode squeezed vacuum has unit symplectic eigenvalues") {
  const CovarianceMatrix g(two_mode_squeezed());
  const WilliamsonForm w = williamson(g);
  CHECK(std::abs(w.spectrum[0] - 1.0) < 1e-12);
  CHECK(std::abs(w.spectrum[1] - 1.0) < 1e-12);
  const Matrix& s = w.transform.matrix();
  CHECK(max_abs(s * g.matrix() * s.transpose() - Matrix::Identity(4, 4)) < 1e-12);
  CHECK(g.is_physical());
}

TEST_CASE("williamson round trip on random matrices") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 8;
    const RandomState st = random_state(n, 5.0, rng);
    const CovarianceMatrix g(st.gamma);
    const WilliamsonForm w = williamson(g);
    const Matrix& s = w.transform.matrix();
    CHECK(oracle::max_diff(w.spectrum.values, st.d) < 1e-9);
    CHECK(max_abs(s * st.gamma * s.transpose() - oracle::diag_pairs(w.spectrum.values)) < 1e-8);
    CHECK(symplectic_defect(s) < 1e-10 * std::max(1.0, max_abs(s) * max_abs(s)));
    CHECK(oracle::max_diff(w.spectrum.values, oracle::symplectic_eigenvalues(st.gamma)) < 1e-8);
  }
}

TEST_CASE("degenerate spectra give a reproducible williamson basis") {
  // Diagonal inputs must come back untouched even when values repeat.
  const Matrix diag = oracle::diag_pairs({2, 2, 3});
  const WilliamsonForm w = williamson(CovarianceMatrix(diag));
  CHECK(max_abs(w.transform.matrix() - Matrix::Identity(6, 6)) < 1e-12);
  REQUIRE(w.degenerate_blocks.size() == 1);
  CHECK(w.degenerate_blocks[0] == std::vector<int>{0, 1});

  std::mt19937_64 rng(9);
  const Matrix s = random_symplectic(3, 3.0, rng()).matrix();
  const Matrix g = s * oracle::diag_pairs({1.5, 1.5, 1.5}) * s.transpose();
  const CovarianceMatrix gamma(0.5 * (g + g.transpose()));
  const WilliamsonForm a = williamson(gamma);
  const WilliamsonForm b = williamson(gamma);
  CHECK(max_abs(a.transform.matrix() - b.transform.matrix()) == 0.0);
  const Matrix& t = a.transform.matrix();
  CHECK(max_abs(t * gamma.matrix() * t.transpose() - 1.5 * Matrix::Identity(6, 6)) < 1e-8);
}

TEST_CASE("symplectic trace") {
  CHECK(symplectic_trace(CovarianceMatrix(Matrix::Identity(6, 6))) == doctest::Approx(3.0));
  CHECK(symplectic_trace(CovarianceMatrix(oracle::diag_pairs({2, 5}))) == doctest::Approx(7.0));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const RandomState st = random_state(3, 4.0, rng);
    const std::vector<double> c = oracle::local_values(st.gamma);
    CHECK(symplectic_trace(CovarianceMatrix(st.gamma)) <= c[0] + c[1] + c[2] + 1e-9);
  }
}

TEST_CASE("symplectic trace bounded by half the trace for scalar diagonal blocks") {
  // gamma with blocks c_j * 1: half the trace equals the sum of the c_j.
  const double r = std::sqrt(3.0);
  Matrix g(4, 4);
  g << 2, 0, r, 0,
       0, 2, 0, -r,
       r, 0, 2, 0,
       0, -r, 0, 2;
  CHECK(symplectic_trace(CovarianceMatrix(g)) <= 0.5 * g.trace() + 1e-9);
}

TEST_CASE("euler decomposition of trivial inputs") {
  const EulerFactors id = euler_decompose(SymplecticTransform::identity(3));
  CHECK(max_abs(id.outer.matrix() - Matrix::Identity(6, 6)) < 1e-14);
  CHECK(max_abs(id.inner.matrix() - Matrix::Identity(6, 6)) < 1e-14);
  for (double z : id.squeezing) CHECK(z == doctest::Approx(1.0));

  Matrix sq(2, 2);
  sq << 2.5, 0, 0, 0.4;
  const EulerFactors e = euler_decompose(SymplecticTransform(sq));
  CHECK(e.squeezing[0] == doctest::Approx(2.5));
  CHECK(max_abs(e.outer.matrix() - Matrix::Identity(2, 2)) < 1e-14);
  CHECK(max_abs(e.inner.matrix() - Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("euler decomposition normalises squeezing to at least one") {
  Matrix sq(2, 2);
  sq << 0.25, 0, 0, 4.0;
  const EulerFactors e = euler_decompose(SymplecticTransform(sq));
  CHECK(e.squeezing[0] == doctest::Approx(4.0));
  CHECK(max_abs(e.reconstruct() - sq) < 1e-12);
}

TEST_CASE("euler reconstruction on random transforms") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 6);
    const SymplecticTransform s = random_symplectic(n, 5.0, seed);
    const EulerFactors e = euler_decompose(s);
    CHECK(max_abs(e.reconstruct() - s.matrix()) < 1e-8);
    CHECK(orthogonality_defect(e.outer.matrix()) < 1e-9);
    CHECK(orthogonality_defect(e.inner.matrix()) < 1e-9);
    CHECK(symplectic_defect(e.outer.matrix()) < 1e-9);
    CHECK(symplectic_defect(e.inner.matrix()) < 1e-9);
    for (double z : e.squeezing) CHECK(z >= 1.0);
  }
}

TEST_CASE("random symplectic sampling") {
  const SymplecticTransform passive = random_symplectic(4, 1.0, 21);
  CHECK(orthogonality_defect(passive.matrix()) < 1e-12);
  const SymplecticTransform s = random_symplectic(5, 5.0, 22);
  CHECK(symplectic_defect(s.matrix()) < 1e-10);
  CHECK(max_abs(random_symplectic(5, 5.0, 22).matrix() - s.matrix()) == 0.0);
  CHECK(max_abs(random_symplectic(5, 5.0, 23).matrix() - s.matrix()) > 0.0);
}

TEST_CASE("congruence invariance of the symplectic spectrum") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 5;
    const RandomState st = random_state(n, 3.0, rng);
    const Matrix s = random_symplectic(n, 3.0, rng()).matrix();
    const Matrix moved = s * st.gamma * s.transpose();
    const SpectrumVector a = symplectic_eigenvalues(CovarianceMatrix(st.gamma));
    const SpectrumVector b = symplectic_eigenvalues(CovarianceMatrix(0.5 * (moved + moved.transpose())));
    CHECK(oracle::max_diff(a.values, b.values) < 1e-8);
  }
}

TEST_CASE("physicality test agrees with the spectrum test") {
  std::mt19937_64 rng(23);
  int physical = 0, unphysical = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const RandomState st = random_state(1 + trial % 4, 3.0, rng, 0.6, 2.0);
    const CovarianceMatrix g(st.gamma);
    const bool by_spectrum = symplectic_eigenvalues(g).values.front() >= 1.0 - 1e-9;
    CHECK(g.is_physical() == by_spectrum);
    (by_spectrum ? physical : unphysical)++;
  }
  CHECK(physical > 10);
  CHECK(unphysical > 10);
}

TEST_CASE("passive matrices correspond to unitaries") {
  std::mt19937_64 rng(4);
  const Matrix o = random_passive(4, rng);
  CHECK(symplectic_defect(o) < 1e-12);
  CHECK(orthogonality_defect(o) < 1e-12);
  const ComplexMatrix u = unitary_from_passive(o);
  CHECK(max_abs(passive_from_unitary(u) - o) < 1e-14);
  ComplexMatrix one = ComplexMatrix::Identity(1, 1) * std::complex<double>(0.0, 1.0);
  Matrix expected(2, 2);
  expected << 0, 1, -1, 0;
  CHECK(max_abs(passive_from_unitary(one) - expected) == 0.0);
  Matrix squeeze(2, 2);
  squeeze << 2, 0, 0, 0.5;
  CHECK_THROWS_AS(unitary_from_passive(squeeze), Error);
}

TEST_CASE("validation errors") {
  Matrix asym = Matrix::Identity(2, 2);
  asym(0, 1) = 0.1;
  try {
    CovarianceMatrix bad(asym);
    FAIL("accepted an asymmetric matrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
  Matrix indefinite = Matrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  try {
    CovarianceMatrix bad(indefinite);
    FAIL("accepted an indefinite matrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositive);
  }
  Matrix not_sympl = 2.0 * Matrix::Identity(2, 2);
  try {
    SymplecticTransform bad(not_sympl);
    FAIL("accepted a non-symplectic matrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymplectic);
  }
  try {
    euler_decompose(SymplecticTransform::unchecked(not_sympl));
    FAIL("decomposed a non-symplectic matrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymplectic);
  }
}

TEST_CASE("mode embedding and permutation") {
  Matrix local(2, 2);
  local << 2, 0, 0, 0.5;
  const std::vector<int> modes{2};
  const Matrix e = embed_modes(local, modes, 3);
  CHECK(e(4, 4) == 2.0);
  CHECK(e(5, 5) == 0.5);
  CHECK(e(0, 0) == 1.0);
  const std::vector<int> order{1, 0};
  const Matrix p = mode_permutation(order);
  const Matrix swapped = p * oracle::diag_pairs({1, 2}) * p.transpose();
  CHECK(swapped(0, 0) == 2.0);
  CHECK(swapped(2, 2) == 1.0);
  CHECK(symplectic_defect(p) == 0.0);
}

}  // TEST_SUITE
