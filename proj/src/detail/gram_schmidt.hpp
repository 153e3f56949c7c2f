#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sympmarg/symplectic.hpp"

namespace sympmarg::detail {

/// Running orthonormal set. Vectors added later are orthogonalised against
/// everything already present.
class OrthonormalSet {
 public:
  explicit OrthonormalSet(int dim) : dim_(dim) {}

  /// Removes the components along the stored vectors (two passes).
  void project_out(Vector& v) const {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : vectors_) v -= u.dot(v) * u;
  }

  /// Orthogonalises, normalises and stores `v`. Returns the stored vector.
  const Vector& add(Vector v) {
    project_out(v);
    const double norm = v.norm();
    if (!(norm > 1e-6)) throw Error(ErrorCode::DegenerateSubspaceFailure, "partner vector collapsed during Gram-Schmidt");
    vectors_.push_back(v / norm);
    return vectors_.back();
  }

  int dim() const noexcept { return dim_; }

 private:
  int dim_;
  std::vector<Vector> vectors_;
};

struct VectorPair {
  Vector primary;
  Vector partner;
};

/// Chooses `count` primary vectors from the column span of `basis`
/// (orthonormal columns). Each step takes the coordinate axis, scanned in
/// `axis_order`, with the largest residual after projecting onto the span and
/// removing everything already chosen; the partner is `partner_of(primary)`,
/// orthonormalised in turn. When `partner_of` is empty only primaries are kept.
inline std::vector<VectorPair> pivoted_pairs(const Matrix& basis, std::span<const int> axis_order, int count,
                                             const std::function<Vector(const Vector&)>& partner_of,
                                             OrthonormalSet& chosen) {
  std::vector<VectorPair> out;
  const Matrix projector = basis * basis.transpose();
  for (int step = 0; step < count; ++step) {
    Vector best;
    double best_norm = -1.0;
    for (int axis : axis_order) {
      Vector r = projector.col(axis);
      chosen.project_out(r);
      r = projector * r;
      const double norm = r.norm();
      // Ties keep the earlier axis.
      if (norm > best_norm * (1.0 + 1e-10)) {
        best_norm = norm;
        best = std::move(r);
      }
    }
    if (!(best_norm > 1e-6))
      throw Error(ErrorCode::DegenerateSubspaceFailure, "no admissible pivot left in degenerate block");
    VectorPair pair;
    pair.primary = chosen.add(best);
    if (partner_of) pair.partner = chosen.add(partner_of(pair.primary));
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace sympmarg::detail
