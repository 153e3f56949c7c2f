#pragma once

#include <random>
#include <vector>

#include "sympmarg/symplectic.hpp"

namespace sympmarg {

/// gamma = S diag(d1, d1, ...) S^T with d sorted uniform in [d_lo, d_hi] and
/// S = random_symplectic(n, squeeze_bound, rng()).
struct RandomState {
  Matrix gamma;
  std::vector<double> d;
  Matrix transform;
};

RandomState random_state(int modes, double squeeze_bound, std::mt19937_64& rng, double d_lo = 1.0, double d_hi = 4.0);

/// Pure state S S^T.
RandomState random_pure_state(int modes, double squeeze_bound, std::mt19937_64& rng);

struct FeasiblePair {
  std::vector<double> c;
  std::vector<double> d;
};

/// Random pair accepted by check_mixed: d sorted uniform in [1, 4], c = d,
/// then a few random suffix increases and downward transfers (moving mass
/// from a larger to a smaller entry), each pushed onto the boundary with
/// probability 0.2. Every move is re-checked.
FeasiblePair random_feasible_pair(int modes, std::mt19937_64& rng);

}  // namespace sympmarg
