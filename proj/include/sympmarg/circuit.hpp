#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sympmarg/symplectic.hpp"
#include "sympmarg/synthesis.hpp"

namespace sympmarg {

/// Passive optical element. As a unitary on the touched modes a rotation is
/// [[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]] on (mode_a, mode_b);
/// a phase is e^{i phi} on mode_a.
struct PassiveElement {
  enum class Kind { Rotation, Phase };
  Kind kind = Kind::Phase;
  int mode_a = 0;
  int mode_b = -1;
  double theta = 0.0;
  double phi = 0.0;

  /// 2n x 2n orthogonal-symplectic matrix of this element.
  Matrix symplectic(int modes) const;
};

/// Single-mode squeezer. `z` is the variance factor: on the vacuum it yields
/// diag(z, 1/z) for orientation X and diag(1/z, z) for P.
struct Squeezer {
  enum class Orientation { X, P };
  double z = 1.0;
  Orientation orientation = Orientation::X;

  Eigen::Matrix2d symplectic() const;
};

/// seed -> input network -> squeezers -> output network.
struct PreparationCircuit {
  enum class Source { PureOPO, MixedOQV };
  int modes = 0;
  Source source = Source::PureOPO;
  /// Symplectic eigenvalue of each seed mode (all 1 for pure targets).
  std::vector<double> seed;
  std::vector<PassiveElement> input_network;
  /// One per mode.
  std::vector<Squeezer> squeezers;
  std::vector<PassiveElement> output_network;

  Matrix seed_matrix() const;
  /// Total symplectic transform applied to the seed.
  Matrix transform() const;
  /// Covariance matrix produced by running the circuit on its seed.
  Matrix replay() const;
};

/// Matrix of an ordered element list (first element applied first).
Matrix network_matrix(const std::vector<PassiveElement>& elements, int modes);

/// Breaks an orthogonal-symplectic matrix into at most n(n-1)/2 nearest-
/// neighbour rotations and n phases, returned in application order. Rows are
/// cleared bottom-up within each column, columns left to right. Throws
/// NotPassive.
std::vector<PassiveElement> passive_to_two_mode_rotations(const Matrix& o, const Tolerances& tol = kDefaultTolerances);

/// gamma = O P O^T with P a product of squeezed vacua; requires a pure
/// physical matrix (NotPhysical / NotPure otherwise).
PreparationCircuit circuit_from_pure(const CovarianceMatrix& gamma, const Tolerances& tol = kDefaultTolerances);

/// Circuit realising trace.final_matrix from the thermal seed diag(d).
PreparationCircuit circuit_from_mixed(const SynthesisTrace& trace, const Tolerances& tol = kDefaultTolerances);

/// Pure targets go through circuit_from_pure, others use the Williamson
/// transform with seed diag(d). Requires a physical matrix.
PreparationCircuit circuit_from_covariance(const CovarianceMatrix& gamma, const Tolerances& tol = kDefaultTolerances);

void write_circuit(std::ostream& out, const PreparationCircuit& circuit);
PreparationCircuit read_circuit(std::istream& in);

}  // namespace sympmarg
