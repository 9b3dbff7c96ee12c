#pragma once

// Exact arithmetic in K = Q(θ), its places with normalized absolute values,
// field norms and S-unit groups for the supported field classes.

#include "slab/arith.hpp"
#include "slab/poly.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace slab {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

/// Element of K in power-basis coordinates (exact rationals).
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, std::vector<Rational> coords);

  static FieldElement from_rational(const FieldPtr& field, const Rational& q);
  static FieldElement theta(const FieldPtr& field);

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coords() const { return coords_; }
  bool is_zero() const;
  bool is_rational() const;

  /// Coordinate polynomial in θ.
  poly::QPoly as_poly() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.coords_ == b.coords_; }

  FieldElement inverse() const;
  FieldElement pow(int e) const;

  std::string str() const;

 private:
  FieldPtr field_;
  std::vector<Rational> coords_;
};

class NumberField {
 public:
  int degree() const { return static_cast<int>(min_poly_.size()) - 1; }
  const poly::QPoly& min_poly() const { return min_poly_; }
  const poly::ZPoly& min_poly_z() const { return min_poly_z_; }
  /// Field discriminant relative to the stored integral basis.
  const BigInt& discriminant() const { return discriminant_; }
  const BigInt& poly_discriminant() const { return poly_discriminant_; }
  /// Power-basis coordinates of each integral basis element.
  const std::vector<std::vector<Rational>>& integral_basis() const { return basis_; }
  /// [basis lattice : Z[θ]] as a positive integer.
  const BigInt& index() const { return index_; }
  int real_places() const { return r1_; }
  int complex_places() const { return r2_; }
  bool is_rational_field() const { return degree() == 1; }

 private:
  friend FieldPtr create_field(const std::vector<BigInt>&, const std::vector<std::vector<Rational>>&);
  poly::QPoly min_poly_;
  poly::ZPoly min_poly_z_;
  BigInt discriminant_;
  BigInt poly_discriminant_;
  std::vector<std::vector<Rational>> basis_;
  BigInt index_{1};
  int r1_ = 0;
  int r2_ = 0;
};

/// Builds K from monic integer coefficients c0..c_d (low degree first). The
/// one-element list {1} is accepted as shorthand for x, i.e. K = Q. An empty
/// basis selects the power basis.
FieldPtr create_field(const std::vector<BigInt>& min_poly_coeffs,
                      const std::vector<std::vector<Rational>>& integral_basis = {});

enum class PlaceKind { Real, Complex, Finite };

struct Place {
  PlaceKind kind = PlaceKind::Real;
  int index = 0;  // embedding index among its kind, or factor index above p
  bool sole = false;  // the only place of its kind (labels "inf" or "p")

  // archimedean: the root θ_σ and an isolating description with rational data
  Complex root;
  Rational iso_lo, iso_hi;        // real: root in (iso_lo, iso_hi]
  Rational disc_re, disc_im, disc_radius;  // complex: |root - center| <= radius

  // finite
  BigInt p{0};
  poly::ZPoly factor;        // monic lift of an irreducible factor of min_poly mod p
  int residue_degree = 0;
  int ramification = 1;
  unsigned precision = 0;    // the lift is exact modulo p^precision

  bool archimedean() const { return kind != PlaceKind::Finite; }
  std::string label() const;
  BigInt modulus() const { return ipow(p, precision); }
};

struct SUnitGroup {
  std::vector<FieldElement> generators;  // free part
  FieldElement torsion_generator;
  int torsion_order = 2;
  int rank = 0;
};

/// Normalized absolute value. For finite places `exponent` holds e with
/// |x|_v = p^(-e); it is unset for archimedean places and for zero.
struct LocalAbs {
  Real value;
  std::optional<int> exponent;
};

std::vector<Place> archimedean_places(const FieldPtr& field);

/// Places above p, one per irreducible factor of the minimal polynomial mod p.
std::vector<Place> finite_places(const FieldPtr& field, std::int64_t p, unsigned precision = 30);

/// Re-lifts a finite place to a higher precision, or re-polishes an
/// archimedean root; returns a new place.
Place refine_place(const FieldPtr& field, const Place& place, unsigned precision);

/// σ(x) at an archimedean place.
Complex embed(const FieldElement& x, const Place& place);

LocalAbs local_abs(const FieldElement& x, const Place& place);

/// Same exponent as local_abs, computed by reducing x modulo the lifted local
/// factor instead of by resultants. Used as an independent route and by the
/// enumeration kernels. Unset when x ≡ 0 at the lift precision.
std::optional<int> finite_exponent_by_reduction(const FieldElement& x, const Place& place);

Rational field_norm(const FieldElement& x);

/// S must contain every archimedean place. `configured` overrides the
/// built-in generators (required for fields beyond Q and quadratics).
SUnitGroup s_unit_group(const FieldPtr& field, const std::vector<Place>& S,
                        const std::vector<FieldElement>& configured = {});

/// log Π_{v∈S} |u|_v split into its archimedean (approximate) and finite
/// (exact, as Σ e_v log p) parts.
struct ProductFormulaCheck {
  Real archimedean_product;
  Rational finite_product;
  bool exact_at_finite = true;
  Real deviation() const;  // |arch * finite - 1|
};
ProductFormulaCheck product_formula(const FieldElement& u, const std::vector<Place>& S);

}  // namespace slab
