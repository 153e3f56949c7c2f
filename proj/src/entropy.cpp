#include "sympmarg/entropy.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace sympmarg {
namespace {

double xlog2x(double x) { return x <= 1e-300 ? 0.0 : x * std::log2(x); }

}  // namespace

double entropy_s(double c, const Tolerances& tol) {
  if (!(c >= 1.0 - tol.psd)) throw Error(ErrorCode::BelowOne, "entropy argument " + std::to_string(c) + " is below 1");
  if (std::isinf(c)) return c;
  c = std::max(c, 1.0);
  return xlog2x((c + 1.0) / 2.0) - xlog2x((c - 1.0) / 2.0);
}

double entropy_s_inverse(double e) {
  if (!(e >= 0.0)) throw Error(ErrorCode::NegativeEntry, "entropy value is negative");
  if (e == 0.0) return 1.0;
  if (!std::isfinite(e)) throw Error(ErrorCode::InversionFailure, "entropy value is not finite");
  double lo = 1.0, hi = 2.0;
  for (int i = 0; entropy_s(hi) < e; ++i) {
    if (i > 1100 || !std::isfinite(hi)) throw Error(ErrorCode::InversionFailure, "cannot bracket entropy " + std::to_string(e));
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (entropy_s(mid) < e ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> entanglement_profile(const CovarianceMatrix& gamma, const Tolerances& tol) {
  const SpectrumVector d = symplectic_eigenvalues(gamma, tol);
  for (double v : d.values)
    if (std::abs(v - 1.0) > tol.psd) throw Error(ErrorCode::NotPure, "symplectic eigenvalue " + std::to_string(v) + " differs from 1");
  const LocalDiagonal local = local_diagonal(gamma);
  std::vector<double> out;
  for (double c : local.by_mode) out.push_back(entropy_s(c, tol));
  return out;
}

FeasibilityVerdict sharing_feasible(std::span<const double> e, const Tolerances& tol) {
  std::vector<double> b;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i] >= 0.0)) throw Error(ErrorCode::NegativeEntry, "entropy at position " + std::to_string(i + 1) + " is negative");
    b.push_back(entropy_s_inverse(e[i]) - 1.0);
  }
  return check_pure(b, tol);
}

double entropy_upper_bound(std::span<const double> c, const Tolerances& tol) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!(c[i] >= 1.0 - tol.psd)) throw Error(ErrorCode::BelowOne, "c at position " + std::to_string(i + 1) + " is below 1");
  return entropy_s(std::accumulate(c.begin(), c.end(), 0.0), tol);
}

EntropyReport entropy_report(std::span<const double> c, const Tolerances& tol) {
  EntropyReport r;
  for (double v : c) r.per_mode_entropies.push_back(entropy_s(v, tol));
  r.total_local_sum = std::accumulate(r.per_mode_entropies.begin(), r.per_mode_entropies.end(), 0.0);
  r.global_upper_bound = entropy_upper_bound(c, tol);
  return r;
}

EntropyReport entropy_report(const CovarianceMatrix& gamma, const Tolerances& tol) {
  const LocalDiagonal local = local_diagonal(gamma);
  EntropyReport r = entropy_report(local.by_mode, tol);
  const SpectrumVector d = symplectic_eigenvalues(gamma, tol);
  r.has_gaussian_entropy = true;
  for (double v : d.values) r.gaussian_entropy += entropy_s(v, tol);
  r.purity_consistent = r.gaussian_entropy <= r.global_upper_bound + tol.ineq;
  return r;
}

}  // namespace sympmarg
