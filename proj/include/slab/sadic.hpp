#pragma once

// Geometry of K_S^n: normalized local norms, the sup norm, the content and
// its pseudoballs, and the reduction of a vector by S-units so that every
// local norm lands near a prescribed target.

#include "slab/numberfield.hpp"

#include "json.hpp"

#include <vector>

namespace slab {

/// One local coordinate. Finite places always carry the exact K-element;
/// archimedean places carry the embedded value and, when known, the element.
struct LocalScalar {
  Complex approx;
  std::optional<FieldElement> exact;
};

struct SAdicVector {
  FieldPtr field;
  std::vector<Place> places;                      // the set S, in order
  std::vector<std::vector<LocalScalar>> components;  // components[v][i]

  std::size_t dim() const { return components.empty() ? 0 : components[0].size(); }
};

/// Diagonal image of z ∈ K^n in K_S^n.
SAdicVector diagonal_embedding(const FieldPtr& field, const std::vector<Place>& S,
                               const std::vector<FieldElement>& z);

/// ξ·x, with ξ acting through each place.
SAdicVector scale(const FieldElement& xi, const SAdicVector& x);

/// ‖x^(v)‖_v: Euclidean at real places, squared Euclidean at complex places,
/// max of |x_i|_v at finite places (with the exponent of that max).
LocalAbs local_norm(const Place& v, const std::vector<LocalScalar>& component);

Real sup_norm(const SAdicVector& x);
Real content(const SAdicVector& x);
bool pseudoball_contains(const Real& radius, const SAdicVector& x);

struct BalancingTarget {
  std::vector<Real> targets;  // a_v per place of S
};

struct BalanceResult {
  FieldElement xi;
  std::vector<int> exponents;  // ξ = Π u_i^{e_i}
  Real achieved_ratio;         // exp of max_v |log(‖ξ x^(v)‖_v / a_v)|
};

BalanceResult unit_balance(const SAdicVector& x, const BalancingTarget& target, const SUnitGroup& units,
                           int exponent_bound);

/// Certified upper bound for the balancing constant of S: the exponential of
/// a sup-norm covering radius bound of the log-unit lattice.
Real balancing_constant(const FieldPtr& field, const std::vector<Place>& S, const SUnitGroup& units);

/// Per-place coordinate arrays. Finite scalars become {"val", "unit_digits"}.
nlohmann::json to_json(const SAdicVector& x);

}  // namespace slab
