#include "slab/numberfield.hpp"

#include "slab/error.hpp"
#include "slab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace slab {

namespace {

Rational real_to_rational(const Real& x) { return to_rational(x); }

std::vector<Rational> reduce_mod_minpoly(const FieldPtr& field, const poly::QPoly& p) {
  poly::QPoly r = poly::rem(p, field->min_poly());
  std::vector<Rational> coords(static_cast<std::size_t>(field->degree()), Rational(0));
  for (std::size_t i = 0; i < r.size(); ++i) coords[i] = r[i];
  return coords;
}

}  // namespace

// ---- FieldElement -------------------------------------------------------------

FieldElement::FieldElement(FieldPtr field, std::vector<Rational> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw Error(ErrorCode::InvalidArgument, "field element without a field");
  coords_.resize(static_cast<std::size_t>(field_->degree()), Rational(0));
}

FieldElement FieldElement::from_rational(const FieldPtr& field, const Rational& q) {
  std::vector<Rational> c(static_cast<std::size_t>(field->degree()), Rational(0));
  c[0] = q;
  return {field, c};
}

FieldElement FieldElement::theta(const FieldPtr& field) {
  return {field, reduce_mod_minpoly(field, poly::QPoly{Rational(0), Rational(1)})};
}

bool FieldElement::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
}

bool FieldElement::is_rational() const {
  return std::all_of(coords_.begin() + 1, coords_.end(), [](const Rational& c) { return c == 0; });
}

poly::QPoly FieldElement::as_poly() const {
  poly::QPoly p(coords_.begin(), coords_.end());
  poly::trim(p);
  return p;
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  if (field_->degree() == 1) {
    coords_[0] *= o.coords_[0];
    return *this;
  }
  coords_ = reduce_mod_minpoly(field_, poly::mul(as_poly(), o.as_poly()));
  return *this;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorCode::InvalidArgument, "inverse of zero");
  const auto d = static_cast<std::size_t>(field_->degree());
  if (d == 1) return from_rational(field_, Rational(1) / coords_[0]);
  // columns: coordinates of x·θ^j
  linalg::Matrix<Rational> m(d, std::vector<Rational>(d));
  FieldElement col = from_rational(field_, Rational(1));
  const FieldElement th = theta(field_);
  for (std::size_t j = 0; j < d; ++j) {
    FieldElement prod = *this * col;
    for (std::size_t i = 0; i < d; ++i) m[i][j] = prod.coords_[i];
    col *= th;
  }
  std::vector<Rational> rhs(d, Rational(0));
  rhs[0] = 1;
  auto sol = linalg::solve(m, rhs);
  if (!sol) throw Error(ErrorCode::InvalidArgument, "element is not invertible");
  return {field_, *sol};
}

FieldElement FieldElement::pow(int e) const {
  FieldElement base = e < 0 ? inverse() : *this;
  unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
  FieldElement result = from_rational(field_, Rational(1));
  while (k > 0) {
    if (k & 1U) result *= base;
    base *= base;
    k >>= 1U;
  }
  return result;
}

std::string FieldElement::str() const {
  if (coords_.size() == 1) return to_string(coords_[0]);
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? " " : "") << to_string(coords_[i]);
  os << ']';
  return os.str();
}

// ---- construction ---------------------------------------------------------------

namespace {

// True when no proper factor exists. Modular degree patterns first; roots
// grouped numerically (with exact division as the certificate) otherwise.
bool irreducible(const poly::ZPoly& m) {
  const int d = static_cast<int>(m.size()) - 1;
  if (d <= 1) return true;
  if (m[0] == 0) return false;
  std::set<int> possible;
  for (int k = 1; k < d; ++k) possible.insert(k);
  int tested = 0;
  for (std::int64_t p = 2; p < 400 && tested < 25; ++p) {
    if (!is_prime(static_cast<std::uint64_t>(p))) continue;
    poly::FpPoly f = poly::fp_reduce(m, p);
    if (poly::degree(f) != d || !poly::fp_is_squarefree(f, p)) continue;
    ++tested;
    auto factors = poly::fp_factor_squarefree(f, p);
    std::set<int> sums{0};
    for (const auto& g : factors) {
      std::set<int> next = sums;
      for (int s : sums) next.insert(s + poly::degree(g));
      sums = std::move(next);
    }
    std::set<int> keep;
    for (int k : possible) {
      if (sums.count(k)) keep.insert(k);
    }
    possible = std::move(keep);
    if (possible.empty()) return true;
  }
  if (d > 16) throw Error(ErrorCode::InvalidArgument, "irreducibility undecided above degree 16");
  const poly::QPoly mq = poly::to_q(m);
  auto roots = poly::complex_roots(mq);
  for (int k : possible) {
    if (2 * k > d) continue;
    std::vector<int> pick(static_cast<std::size_t>(d), 0);
    std::fill(pick.begin(), pick.begin() + k, 1);
    std::sort(pick.begin(), pick.end());
    do {
      std::vector<Complex> prod{Complex(Real(1))};
      for (int i = 0; i < d; ++i) {
        if (!pick[static_cast<std::size_t>(i)]) continue;
        std::vector<Complex> next(prod.size() + 1);
        for (std::size_t j = 0; j < prod.size(); ++j) {
          next[j + 1] += prod[j];
          next[j] -= prod[j] * roots[static_cast<std::size_t>(i)];
        }
        prod = std::move(next);
      }
      poly::QPoly cand;
      bool integral = true;
      for (const auto& c : prod) {
        Real r = round(c.re);
        if (abs(c.re - r) > Real("1e-20") || abs(c.im) > Real("1e-20")) {
          integral = false;
          break;
        }
        cand.emplace_back(round_to_bigint(r));
      }
      if (integral && poly::rem(mq, cand).empty()) return false;
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return true;
}

}  // namespace

FieldPtr create_field(const std::vector<BigInt>& coeffs_in, const std::vector<std::vector<Rational>>& basis) {
  std::vector<BigInt> coeffs = coeffs_in;
  if (coeffs.size() == 1 && coeffs[0] == 1) coeffs = {BigInt(0), BigInt(1)};
  if (coeffs.size() < 2) throw Error(ErrorCode::NotMonic, "minimal polynomial must have degree >= 1");
  if (coeffs.back() != 1) throw Error(ErrorCode::NotMonic, "leading coefficient must be 1");
  auto field = std::make_shared<NumberField>();
  field->min_poly_z_ = coeffs;
  field->min_poly_ = poly::to_q(coeffs);
  const int d = field->degree();

  const poly::QPoly deriv = poly::derivative(field->min_poly_);
  Rational res = poly::resultant(field->min_poly_, deriv);
  if ((d * (d - 1) / 2) % 2 == 1) res = -res;
  field->poly_discriminant_ = num(res);
  if (field->poly_discriminant_ == 0) throw Error(ErrorCode::Reducible, "repeated roots");
  if (!irreducible(coeffs)) throw Error(ErrorCode::Reducible, "minimal polynomial factors over Q");

  const auto du = static_cast<std::size_t>(d);
  if (basis.empty()) {
    field->basis_.assign(du, std::vector<Rational>(du, Rational(0)));
    for (std::size_t i = 0; i < du; ++i) field->basis_[i][i] = 1;
  } else {
    if (basis.size() != du) throw Error(ErrorCode::InvalidArgument, "integral basis needs d elements");
    for (const auto& b : basis) {
      if (b.size() != du) throw Error(ErrorCode::InvalidArgument, "basis element has wrong length");
    }
    field->basis_ = basis;
  }
  Rational det = linalg::determinant(field->basis_);
  if (det == 0) throw Error(ErrorCode::InvalidArgument, "integral basis is singular");
  Rational idx = abs(Rational(1) / det);
  if (den(idx) != 1) throw Error(ErrorCode::InvalidArgument, "basis lattice does not contain Z[θ]");
  field->index_ = num(idx);
  field->discriminant_ = field->poly_discriminant_ / (field->index_ * field->index_);
  field->r1_ = poly::count_real_roots(field->min_poly_);
  field->r2_ = (d - field->r1_) / 2;
  return field;
}

// ---- places ----------------------------------------------------------------------

std::string Place::label() const {
  if (kind == PlaceKind::Finite) {
    return sole ? p.str() : p.str() + "." + std::to_string(index);
  }
  if (sole) return "inf";
  return (kind == PlaceKind::Real ? "real" : "complex") + std::to_string(index);
}

namespace {

void polish_complex_place(const poly::QPoly& f, Place& place) {
  const poly::QPoly df = poly::derivative(f);
  for (int i = 0; i < 4; ++i) {
    Complex dv = poly::eval(df, place.root);
    if (dv.is_zero()) break;
    place.root -= poly::eval(f, place.root) / dv;
  }
  place.disc_re = real_to_rational(place.root.re);
  place.disc_im = real_to_rational(place.root.im);
  Complex center(to_real(place.disc_re), to_real(place.disc_im));
  Real bound = Real(poly::degree(f)) * (poly::eval(f, center) / poly::eval(df, center)).abs();
  place.disc_radius = real_to_rational(bound * 2 + Real("1e-55"));
}

}  // namespace

std::vector<Place> archimedean_places(const FieldPtr& field) {
  std::vector<Place> out;
  const auto& f = field->min_poly();
  int idx = 0;
  for (const auto& [lo, hi] : poly::isolate_real_roots(f)) {
    Place pl;
    pl.kind = PlaceKind::Real;
    pl.index = idx++;
    pl.iso_lo = lo;
    pl.iso_hi = hi;
    pl.root = Complex(poly::refine_real_root(f, lo, hi));
    pl.sole = field->degree() == 1;
    out.push_back(std::move(pl));
  }
  if (field->complex_places() > 0) {
    auto roots = poly::complex_roots(f);
    std::vector<Complex> upper;
    for (auto& r : roots) {
      if (r.im > Real("1e-30")) upper.push_back(r);
    }
    std::sort(upper.begin(), upper.end(), [](const Complex& a, const Complex& b) {
      return a.re != b.re ? a.re < b.re : a.im < b.im;
    });
    if (static_cast<int>(upper.size()) != field->complex_places()) {
      throw Error(ErrorCode::PrecisionExhausted, "complex root separation failed");
    }
    idx = 0;
    for (auto& r : upper) {
      Place pl;
      pl.kind = PlaceKind::Complex;
      pl.index = idx++;
      pl.root = r;
      polish_complex_place(f, pl);
      out.push_back(std::move(pl));
    }
  }
  return out;
}

std::vector<Place> finite_places(const FieldPtr& field, std::int64_t p, unsigned precision) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  }
  if (precision == 0) throw Error(ErrorCode::InvalidArgument, "precision must be positive");
  if (field->index() % p == 0) {
    throw Error(ErrorCode::RamifiedOrBadPrime, std::to_string(p) + " divides the index [O_K : Z[θ]]");
  }
  poly::FpPoly mp = poly::fp_reduce(field->min_poly_z(), p);
  if (!poly::fp_is_squarefree(mp, p)) {
    throw Error(ErrorCode::RamifiedOrBadPrime, "minimal polynomial has a square factor mod " + std::to_string(p));
  }
  auto factors = poly::fp_factor_squarefree(mp, p);
  auto lifted = poly::hensel_lift(field->min_poly_z(), factors, p, precision);
  std::vector<Place> out;
  int total = 0;
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    Place pl;
    pl.kind = PlaceKind::Finite;
    pl.index = static_cast<int>(i);
    pl.p = p;
    pl.factor = lifted[i];
    pl.residue_degree = poly::degree(factors[i]);
    pl.ramification = 1;
    pl.precision = precision;
    pl.sole = lifted.size() == 1;
    total += pl.residue_degree * pl.ramification;
    out.push_back(std::move(pl));
  }
  if (total != field->degree()) throw Error(ErrorCode::RamifiedOrBadPrime, "degree identity failed");
  return out;
}

Place refine_place(const FieldPtr& field, const Place& place, unsigned precision) {
  if (place.archimedean()) {
    Place out = place;
    if (place.kind == PlaceKind::Real) {
      out.root = Complex(poly::refine_real_root(field->min_poly(), place.iso_lo, place.iso_hi));
    } else {
      polish_complex_place(field->min_poly(), out);
    }
    return out;
  }
  auto all = finite_places(field, place.p.convert_to<std::int64_t>(), precision);
  Place out = all.at(static_cast<std::size_t>(place.index));
  return out;
}

Complex embed(const FieldElement& x, const Place& place) {
  if (!place.archimedean()) throw Error(ErrorCode::InvalidArgument, "embed needs an archimedean place");
  Complex acc;
  const auto& c = x.coords();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * place.root + Complex(to_real(*it));
  return acc;
}

namespace {

Real p_power(const BigInt& p, int e) {
  Real r = pow(Real(p), -e);
  return r;
}

}  // namespace

LocalAbs local_abs(const FieldElement& x, const Place& place) {
  if (x.is_zero()) return {Real(0), std::nullopt};
  if (place.kind == PlaceKind::Real) return {abs(embed(x, place).re), std::nullopt};
  if (place.kind == PlaceKind::Complex) return {embed(x, place).abs2(), std::nullopt};

  auto [a, d] = poly::clear_denominators(x.as_poly());
  const int dval = valuation(d, place.p);
  Place current = place;
  for (;;) {
    const BigInt modulus = current.modulus();
    BigInt res = mod(poly::resultant(current.factor, a), modulus);
    if (res != 0) {
      int e = valuation(res, current.p) - current.residue_degree * dval;
      return {p_power(current.p, e), e};
    }
    if (current.precision * 2 > 480) {
      throw Error(ErrorCode::PrecisionExhausted, "valuation exceeds p-adic precision cap");
    }
    current = refine_place(x.field(), current, current.precision * 2);
  }
}

std::optional<int> finite_exponent_by_reduction(const FieldElement& x, const Place& place) {
  if (x.is_zero()) return std::nullopt;
  auto [a, d] = poly::clear_denominators(x.as_poly());
  const BigInt modulus = place.modulus();
  auto r = poly::zmod_divmod(a, place.factor, modulus).second;
  std::optional<int> best;
  for (const auto& c : r) {
    if (c == 0) continue;
    int v = valuation(c, place.p);
    if (!best || v < *best) best = v;
  }
  if (!best) return std::nullopt;
  return place.residue_degree * (*best - valuation(d, place.p));
}

Rational field_norm(const FieldElement& x) {
  if (x.is_zero()) return 0;
  if (x.field()->degree() == 1) return x.coords()[0];
  auto [a, d] = poly::clear_denominators(x.as_poly());
  Rational res = poly::resultant(x.field()->min_poly(), poly::to_q(a));
  return res / Rational(ipow(d, static_cast<unsigned>(x.field()->degree())));
}

Real ProductFormulaCheck::deviation() const { return abs(archimedean_product * to_real(finite_product) - 1); }

ProductFormulaCheck product_formula(const FieldElement& u, const std::vector<Place>& S) {
  ProductFormulaCheck out{Real(1), Rational(1), true};
  for (const auto& v : S) {
    LocalAbs a = local_abs(u, v);
    if (v.archimedean()) {
      out.archimedean_product *= a.value;
    } else if (a.exponent) {
      out.finite_product *= rpow(Rational(v.p), -*a.exponent);
    } else {
      out.finite_product = 0;
      out.exact_at_finite = false;
    }
  }
  return out;
}

// ---- S-units ---------------------------------------------------------------------

namespace {

// floor((P + sqrt(D)) / Q) for D > 0 not a square, Q != 0.
BigInt floor_quadratic(const BigInt& P, const BigInt& Q, const BigInt& D) {
  Real approx = (Real(P) + sqrt(Real(D))) / Real(Q);
  BigInt a = floor_to_bigint(approx);
  // exact correction: a <= x < a + 1
  auto le = [&](const BigInt& k) {  // k <= (P + sqrt D)/Q
    BigInt lhs = k * Q - P;             // compare k*Q - P with sqrt(D), sign of Q matters
    if (Q > 0) return lhs < 0 || lhs * lhs <= D;
    return lhs > 0 && lhs * lhs >= D;  // k*Q - P >= sqrt(D) when Q < 0
  };
  while (!le(a)) --a;
  while (le(a + 1)) ++a;
  return a;
}

FieldElement real_quadratic_fundamental_unit(const FieldPtr& field) {
  const auto& m = field->min_poly_z();  // x^2 + b x + c
  const BigInt b = m[1], c = m[0];
  const BigInt D = b * b - 4 * c;
  BigInt P = -b, Q = 2;  // θ = (P + √D) / Q, the larger root
  BigInt hm2 = 0, hm1 = 1, km2 = 1, km1 = 0;  // convergent recurrences seeded
  for (int iter = 0; iter < 100000; ++iter) {
    BigInt a = floor_quadratic(P, Q, D);
    BigInt hn = a * hm1 + hm2, kn = a * km1 + km2;
    hm2 = hm1;
    hm1 = hn;
    km2 = km1;
    km1 = kn;
    const BigInt& x = hn;
    const BigInt& y = kn;
    BigInt norm = x * x + b * x * y + c * y * y;
    if (norm == 1 || norm == -1) {
      FieldElement u(field, {Rational(x), Rational(-y)});
      // orient so that the unit exceeds 1 at the embedding θ ↦ larger root
      Real theta_big = (Real(-b) + sqrt(Real(D))) / 2;
      auto value = [&](const FieldElement& e) { return to_real(e.coords()[0]) + to_real(e.coords()[1]) * theta_big; };
      for (const FieldElement& cand : {u, -u, u.inverse(), -u.inverse()}) {
        if (value(cand) > 1) return cand;
      }
    }
    BigInt P_next = a * Q - P;
    BigInt Q_next = (D - P_next * P_next) / Q;
    P = P_next;
    Q = Q_next;
  }
  throw Error(ErrorCode::UnsupportedFieldWithoutConfig, "fundamental unit search did not terminate");
}

FieldElement imaginary_quadratic_torsion(const FieldPtr& field, int& order) {
  FieldElement best = FieldElement::from_rational(field, Rational(-1));
  order = 2;
  const FieldElement one = FieldElement::from_rational(field, Rational(1));
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      FieldElement x(field, {Rational(a), Rational(b)});
      if (x.is_zero() || field_norm(x) != 1) continue;
      FieldElement pw = x;
      for (int k = 1; k <= 12; ++k) {
        if (pw == one) {
          if (k > order) {
            order = k;
            best = x;
          }
          break;
        }
        pw *= x;
      }
    }
  }
  return best;
}

bool only_primes(BigInt n, const std::vector<BigInt>& primes) {
  if (n < 0) n = -n;
  if (n == 0) return false;
  for (const auto& p : primes) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

// S-units from elements of Z[θ] whose norms are supported on the S-primes,
// reduced to a basis of their valuation lattice.
std::vector<FieldElement> finite_generators(const FieldPtr& field, const std::vector<Place>& S) {
  std::vector<Place> in_s;
  std::vector<BigInt> primes;
  for (const auto& v : S) {
    if (v.archimedean()) continue;
    in_s.push_back(v);
    if (std::find(primes.begin(), primes.end(), v.p) == primes.end()) primes.push_back(v.p);
  }
  if (in_s.empty()) return {};
  std::vector<Place> outside;
  for (const auto& p : primes) {
    for (auto& w : finite_places(field, p.convert_to<std::int64_t>())) {
      bool present = std::any_of(in_s.begin(), in_s.end(), [&](const Place& v) { return v.p == w.p && v.index == w.index; });
      if (!present) outside.push_back(std::move(w));
    }
  }
  struct Cand {
    BigInt norm;
    FieldElement x;
    std::vector<long> vals;
  };
  std::vector<Cand> cands;
  const int bound = 40;
  for (int a = -bound; a <= bound; ++a) {
    for (int b = 0; b <= bound; ++b) {
      if (b == 0 && a <= 0) continue;
      FieldElement x(field, {Rational(a), Rational(b)});
      Rational n = field_norm(x);
      BigInt ni = num(n);
      if (abs(ni) <= 1 || !only_primes(ni, primes)) continue;
      bool ok = std::all_of(outside.begin(), outside.end(), [&](const Place& w) { return local_abs(x, w).exponent == 0; });
      if (!ok) continue;
      std::vector<long> vals;
      for (const auto& v : in_s) vals.push_back(*local_abs(x, v).exponent);
      cands.push_back({abs(ni), x, vals});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& l, const Cand& r) { return l.norm < r.norm; });
  if (cands.size() > 48) cands.resize(48);

  // Hermite-style row reduction carrying the elements along.
  const std::size_t cols = in_s.size();
  std::vector<Cand> rows = cands;
  std::vector<FieldElement> out;
  std::size_t top = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    for (;;) {
      std::size_t piv = rows.size();
      for (std::size_t i = top; i < rows.size(); ++i) {
        if (rows[i].vals[c] != 0 && (piv == rows.size() || std::labs(rows[i].vals[c]) < std::labs(rows[piv].vals[c]))) piv = i;
      }
      if (piv == rows.size()) break;
      std::swap(rows[top], rows[piv]);
      bool done = true;
      for (std::size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i].vals[c] == 0) continue;
        long q = rows[i].vals[c] / rows[top].vals[c];
        for (std::size_t j = 0; j < cols; ++j) rows[i].vals[j] -= q * rows[top].vals[j];
        rows[i].x *= rows[top].x.pow(static_cast<int>(-q));
        if (rows[i].vals[c] != 0) done = false;
      }
      if (done) break;
    }
    if (top < rows.size() && rows[top].vals[c] != 0) {
      if (rows[top].vals[c] < 0) {
        for (auto& v : rows[top].vals) v = -v;
        rows[top].x = rows[top].x.inverse();
      }
      out.push_back(rows[top].x);
      ++top;
    }
  }
  if (out.size() != cols) {
    throw Error(ErrorCode::UnsupportedFieldWithoutConfig, "norm-equation search did not find a full set of S-unit generators");
  }
  return out;
}

void verify_generators(const SUnitGroup& g, const std::vector<Place>& S) {
  for (const auto& u : g.generators) {
    auto chk = product_formula(u, S);
    if (!chk.exact_at_finite || chk.deviation() > Real("1e-12")) {
      throw Error(ErrorCode::GeneratorInvariantViolated, "product formula fails for generator " + u.str());
    }
  }
}

}  // namespace

SUnitGroup s_unit_group(const FieldPtr& field, const std::vector<Place>& S, const std::vector<FieldElement>& configured) {
  int arch = 0;
  int finite = 0;
  for (const auto& v : S) (v.archimedean() ? arch : finite)++;
  if (arch != field->real_places() + field->complex_places()) {
    throw Error(ErrorCode::InvalidArgument, "S must contain every archimedean place");
  }
  SUnitGroup g;
  g.torsion_generator = FieldElement::from_rational(field, Rational(-1));
  g.torsion_order = 2;
  if (!configured.empty()) {
    g.generators = configured;
    g.rank = static_cast<int>(configured.size());
    verify_generators(g, S);
    return g;
  }
  const int d = field->degree();
  if (d == 1) {
    for (const auto& v : S) {
      if (!v.archimedean()) g.generators.push_back(FieldElement::from_rational(field, Rational(v.p)));
    }
  } else if (d == 2 && field->index() == 1) {
    if (field->real_places() == 2) {
      g.generators.push_back(real_quadratic_fundamental_unit(field));
    } else {
      g.torsion_generator = imaginary_quadratic_torsion(field, g.torsion_order);
    }
    for (auto& x : finite_generators(field, S)) g.generators.push_back(std::move(x));
  } else {
    throw Error(ErrorCode::UnsupportedFieldWithoutConfig, "S-unit generators must be configured for this field");
  }
  g.rank = field->real_places() + field->complex_places() - 1 + finite;
  verify_generators(g, S);
  return g;
}

}  // namespace slab
