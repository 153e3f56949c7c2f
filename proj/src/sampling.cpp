#include "sympmarg/sampling.hpp"

#include <algorithm>

#include "sympmarg/marginal.hpp"

namespace sympmarg {
namespace {

std::vector<double> sorted_uniform(int n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  std::sort(v.begin(), v.end());
  return v;
}

Matrix diag_pairs(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) g(2 * k, 2 * k) = g(2 * k + 1, 2 * k + 1) = d[k];
  return g;
}

}  // namespace

RandomState random_state(int modes, double squeeze_bound, std::mt19937_64& rng, double d_lo, double d_hi) {
  RandomState out;
  out.d = sorted_uniform(modes, d_lo, d_hi, rng);
  out.transform = random_symplectic(modes, squeeze_bound, rng()).matrix();
  out.gamma = out.transform * diag_pairs(out.d) * out.transform.transpose();
  out.gamma = 0.5 * (out.gamma + out.gamma.transpose()).eval();
  return out;
}

RandomState random_pure_state(int modes, double squeeze_bound, std::mt19937_64& rng) {
  return random_state(modes, squeeze_bound, rng, 1.0, 1.0);
}

FeasiblePair random_feasible_pair(int modes, std::mt19937_64& rng) {
  FeasiblePair p;
  p.d = sorted_uniform(modes, 1.0, 4.0, rng);
  p.c = p.d;
  const int n = modes;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> moves(1, 4);
  const int count = moves(rng);
  for (int m = 0; m < count; ++m) {
    std::vector<double> next = p.c;
    const bool boundary = u01(rng) < 0.2;
    const double pick = n == 1 ? 0.0 : u01(rng);
    if (pick < 0.4) {
      // Raise c_i, ..., c_n by delta; only i = n can break the last condition.
      const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
      double delta = 2.0 * u01(rng);
      if (i == n - 1 && n > 1) {
        const double room = std::max(0.0, check_mixed(p.c, p.d).constraints.back().slack);
        delta = boundary ? room : std::min(delta, room * u01(rng));
      }
      for (int j = i; j < n; ++j) next[j] += delta;
    } else {
      const int j = std::uniform_int_distribution<int>(1, n - 1)(rng);
      const int i = std::uniform_int_distribution<int>(0, j - 1)(rng);
      double t = 0.0;
      if (pick < 0.7) {
        // Move mass from c_j down to c_i without crossing.
        const double half_gap = 0.5 * (p.c[j] - p.c[i]);
        t = boundary ? half_gap : half_gap * u01(rng);
      } else {
        // Move mass from c_i up to c_j, limited by the partial sums it lowers.
        const FeasibilityVerdict v = check_mixed(p.c, p.d);
        double room = p.c[i] - (i > 0 ? p.c[i - 1] : 0.0);
        for (int k = i; k < j; ++k) room = std::min(room, v.constraints[k].slack);
        if (j == n - 1) room = std::min(room, 0.5 * v.constraints.back().slack);
        room = std::max(0.0, room);
        t = boundary ? -room : -room * u01(rng);
      }
      next[i] += t;
      next[j] -= t;
      std::sort(next.begin(), next.end());
    }
    if (n == 1) next = p.d;
    if (check_mixed(next, p.d).feasible) p.c = next;
  }
  return p;
}

}  // namespace sympmarg
