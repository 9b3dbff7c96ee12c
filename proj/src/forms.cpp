#include "slab/forms.hpp"

#include "linear_kernel.hpp"
#include "shell.hpp"
#include "slab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace slab {

using detail::ArchKernel;
using detail::FiniteKernel;

namespace {

bool same_field(const FieldPtr& a, const FieldPtr& b) { return a == b || a->min_poly() == b->min_poly(); }

FieldElement constant(const FieldPtr& F, const Rational& q) { return FieldElement::from_rational(F, q); }

std::vector<FieldElement> basis_elements(const FieldPtr& field) {
  std::vector<FieldElement> out;
  for (const auto& b : field->integral_basis()) out.emplace_back(field, b);
  return out;
}

// Common field of the exact coefficients, or null when one is missing.
FieldPtr exact_field(const std::vector<LinearForm>& factors) {
  FieldPtr F;
  for (const auto& l : factors) {
    for (const auto& c : l) {
      if (!c.exact) return nullptr;
      if (!F) {
        F = c.exact->field();
      } else if (!same_field(F, c.exact->field())) {
        return nullptr;
      }
    }
  }
  return F;
}

std::map<std::vector<int>, std::size_t> monomial_index(int n, int m) {
  std::map<std::vector<int>, std::size_t> out;
  auto list = monomials(n, m);
  for (std::size_t i = 0; i < list.size(); ++i) out[list[i]] = i;
  return out;
}

// Coefficients of l_1 ⋯ l_m over monomials(n, m).
template <class T>
std::vector<T> expand(const std::vector<std::vector<T>>& factors, int n, const T& one, const T& zero) {
  std::vector<std::vector<int>> cur{std::vector<int>(static_cast<std::size_t>(n), 0)};
  std::vector<T> coef{one};
  int deg = 0;
  for (const auto& l : factors) {
    ++deg;
    auto next_list = monomials(n, deg);
    auto index = monomial_index(n, deg);
    std::vector<T> next(next_list.size(), zero);
    for (std::size_t a = 0; a < cur.size(); ++a) {
      for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
        auto e = cur[a];
        ++e[j];
        next[index.at(e)] += coef[a] * l[j];
      }
    }
    cur = std::move(next_list);
    coef = std::move(next);
  }
  return coef;
}

std::size_t complex_rank(std::vector<std::vector<Complex>> m) {
  if (m.empty()) return 0;
  Real scale = 0;
  for (const auto& row : m) {
    for (const auto& x : row) scale = std::max(scale, x.abs());
  }
  const Real tol = Real("1e-20") * scale;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = r;
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].abs() > m[best][c].abs()) best = i;
    }
    if (!(m[best][c].abs() > tol)) continue;
    std::swap(m[best], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Complex f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

std::size_t exact_rank(std::vector<std::vector<FieldElement>> m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    const FieldElement inv = m[r][c].inverse();
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      const FieldElement f = m[i][c] * inv;
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

DecomposableForm build_form(const FieldPtr& field, const std::vector<Place>& S,
                            std::vector<std::vector<LinearForm>> factors, bool check, std::string label) {
  if (S.empty() || factors.size() != S.size()) throw Error(ErrorCode::ShapeMismatch, "one factor list per place");
  DecomposableForm f;
  f.field = field;
  f.places = S;
  f.label = std::move(label);
  f.m = static_cast<int>(factors[0].size());
  if (f.m == 0 || factors[0][0].empty()) throw Error(ErrorCode::ShapeMismatch, "empty form");
  f.n = static_cast<int>(factors[0][0].size());
  for (std::size_t v = 0; v < S.size(); ++v) {
    if (factors[v].size() != static_cast<std::size_t>(f.m)) {
      throw Error(ErrorCode::ShapeMismatch, "every place needs the same number of factors");
    }
    for (const auto& l : factors[v]) {
      if (l.size() != static_cast<std::size_t>(f.n)) throw Error(ErrorCode::ShapeMismatch, "factor length differs");
      if (S[v].archimedean()) continue;
      for (const auto& c : l) {
        if (!c.exact || !same_field(c.exact->field(), field)) {
          throw Error(ErrorCode::NonExactRepresentative, "finite places need coefficients in K");
        }
      }
    }
  }
  for (std::size_t v = 0; v < S.size(); ++v) {
    const auto& fv = factors[v];
    int rank = 0;
    if (S[v].archimedean()) {
      std::vector<std::vector<Complex>> a;
      for (const auto& l : fv) {
        a.emplace_back();
        for (const auto& c : l) a.back().push_back(c.approx);
      }
      rank = static_cast<int>(complex_rank(a));
    } else {
      std::vector<std::vector<FieldElement>> a;
      for (const auto& l : fv) {
        a.emplace_back();
        for (const auto& c : l) a.back().push_back(*c.exact);
      }
      rank = static_cast<int>(exact_rank(a));
    }
    f.ranks.push_back(rank);
    if (check && rank < f.m) throw Error(ErrorCode::DependentFactors, "linear factors are dependent");

    const std::size_t count = monomials(f.n, f.m).size();
    std::vector<LocalScalar> ex(count);
    if (S[v].archimedean()) {
      std::vector<std::vector<Complex>> a;
      for (const auto& l : fv) {
        a.emplace_back();
        for (const auto& c : l) a.back().push_back(c.approx);
      }
      auto coef = expand(a, f.n, Complex(Real(1)), Complex());
      for (std::size_t i = 0; i < count; ++i) ex[i].approx = coef[i];
    }
    if (FieldPtr F = exact_field(fv)) {
      std::vector<std::vector<FieldElement>> a;
      for (const auto& l : fv) {
        a.emplace_back();
        for (const auto& c : l) a.back().push_back(*c.exact);
      }
      auto coef = expand(a, f.n, constant(F, 1), constant(F, 0));
      for (std::size_t i = 0; i < count; ++i) ex[i].exact = coef[i];
    }
    f.expansion.push_back(std::move(ex));
  }
  f.factors = std::move(factors);
  return f;
}

// A real coefficient a + b√d with d > 0, exact in Q(√d).
LocalScalar surd(const Rational& a, const Rational& b, int d) {
  auto F = create_field({BigInt(-d), BigInt(0), BigInt(1)});
  return {Complex(to_real(a) + to_real(b) * sqrt(Real(d))), FieldElement(F, {a, b})};
}

struct PointValue {
  std::vector<LocalScalar> values;
  Real magnitude;
  bool zero = false;
};

PointValue evaluate_point(const DecomposableForm& f, const std::vector<FieldElement>& z) {
  PointValue out;
  out.magnitude = 1;
  const bool rational_z = f.field->is_rational_field();
  for (std::size_t v = 0; v < f.places.size(); ++v) {
    const Place& pl = f.places[v];
    LocalScalar value;
    FieldPtr F = exact_field(f.factors[v]);
    if (F && !(same_field(F, f.field) || rational_z)) F = nullptr;
    if (pl.archimedean()) {
      std::vector<Complex> sz;
      for (const auto& x : z) sz.push_back(embed(x, pl));
      Complex prod(Real(1));
      Real scale = 1;
      for (const auto& l : f.factors[v]) {
        Complex acc;
        Real size = 0;
        for (std::size_t j = 0; j < sz.size(); ++j) {
          acc += l[j].approx * sz[j];
          size += l[j].approx.abs() * sz[j].abs();
        }
        prod *= acc;
        scale *= size;
      }
      value.approx = prod;
      if (!F && prod.abs() <= Real("1e-40") * scale) out.zero = true;
    }
    if (F) {
      FieldElement prod = constant(F, 1);
      for (const auto& l : f.factors[v]) {
        FieldElement acc = constant(F, 0);
        for (std::size_t j = 0; j < z.size(); ++j) {
          const FieldElement zj = same_field(F, f.field) ? FieldElement(F, z[j].coords()) : constant(F, z[j].coords()[0]);
          acc += *l[j].exact * zj;
        }
        prod *= acc;
      }
      if (prod.is_zero()) out.zero = true;
      value.exact = prod;
    }
    out.values.push_back(std::move(value));
  }
  out.magnitude = out.zero ? Real(0) : magnitude(f, out.values);
  return out;
}

struct Candidate {
  LatticePoint z;
  std::int64_t height;
};

void accept_candidate(const DecomposableForm& f, const Candidate& c, const std::optional<Real>& bound,
                      std::vector<SpectrumEntry>& out, std::size_t& zeros) {
  auto pv = evaluate_point(f, point_coordinates(f.field, {}, c.z, f.n));
  if (pv.zero) {
    ++zeros;
    return;
  }
  if (bound && pv.magnitude > *bound) return;
  out.push_back({pv.magnitude, 1, c.height, c.z, std::move(pv.values)});
}

// Stable sort by magnitude, then merge runs within 1e-30 relative; the first
// point in enumeration order represents each run.
std::vector<SpectrumEntry> merge_entries(std::vector<SpectrumEntry> raw) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.magnitude < b.magnitude; });
  std::vector<SpectrumEntry> out;
  const Real res("1e-30");
  for (auto& e : raw) {
    if (!out.empty() && e.magnitude - out.back().magnitude <= res * e.magnitude) {
      ++out.back().count;
      out.back().height = std::min(out.back().height, e.height);
      continue;
    }
    out.push_back(std::move(e));
  }
  return out;
}

void check_spectrum_window(const DecomposableForm& f, const HeightWindow& w) {
  if (w.denom != 0) throw Error(ErrorCode::InvalidArgument, "form spectra use integral points only");
  check_window(f.n * f.field->degree(), w, 0);
}

// Continued-fraction convergent with denominator at most `bound`.
Rational best_rational(const Real& x, const BigInt& bound) {
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Real y = x;
  for (int iter = 0; iter < 200; ++iter) {
    const BigInt a = floor_to_bigint(y);
    const BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > bound) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const Real frac = y - Real(a);
    if (abs(frac) < Real("1e-60")) break;
    y = 1 / frac;
  }
  return Rational(p1, q1);
}

// Primitive integral representative of a K-vector: clear power-basis
// denominators, divide by the content, make the first nonzero coordinate of
// the first nonzero entry positive.
std::vector<FieldElement> primitive(const std::vector<FieldElement>& x) {
  BigInt l = 1, g = 0;
  for (const auto& e : x) {
    for (const auto& c : e.coords()) l = l / gcd(l, den(c)) * den(c);
  }
  for (const auto& e : x) {
    for (const auto& c : e.coords()) g = gcd(g, num(c * Rational(l)));
  }
  if (g == 0) return x;
  Rational s = Rational(l) / Rational(g);
  for (const auto& e : x) {
    bool done = false;
    for (const auto& c : e.coords()) {
      if (c != 0) {
        if (c < 0) s = -s;
        done = true;
        break;
      }
    }
    if (done) break;
  }
  std::vector<FieldElement> out;
  for (const auto& e : x) out.push_back(e * constant(e.field(), s));
  return out;
}

Real local_size(const LocalScalar& c, const Place& v) {
  if (v.archimedean()) return c.approx.abs();
  if (c.exact->is_zero()) return 0;
  return local_abs(*c.exact, v).value;
}

// K-vector of ratios c_i / c_pivot at one place, or the reason it fails.
struct PlaceRatios {
  std::optional<std::vector<FieldElement>> ratios;
  ReconstructionStatus failure = ReconstructionStatus::NoRationalReconstruction;
  std::string evidence;
};

PlaceRatios place_ratios(const DecomposableForm& f, std::size_t v, const ReconstructionOptions& opt) {
  const auto& ex = f.expansion[v];
  const Place& pl = f.places[v];
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < ex.size(); ++i) {
    if (local_size(ex[i], pl) > local_size(ex[pivot], pl)) pivot = i;
  }
  PlaceRatios out;
  const std::string where = "place " + pl.label() + ", coefficient ";
  const bool exact = std::all_of(ex.begin(), ex.end(), [](const LocalScalar& c) { return c.exact.has_value(); });
  std::vector<FieldElement> r;
  if (exact) {
    const FieldElement inv = ex[pivot].exact->inverse();
    for (std::size_t i = 0; i < ex.size(); ++i) {
      FieldElement q = *ex[i].exact * inv;
      if (same_field(q.field(), f.field)) {
        r.emplace_back(f.field, q.coords());
      } else if (q.is_rational()) {
        r.push_back(constant(f.field, q.coords()[0]));
      } else {
        out.evidence = where + std::to_string(i) + " = " + q.str() + " is not in K";
        return out;
      }
    }
    out.ratios = std::move(r);
    return out;
  }
  bool unsure = false;
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const Complex q = ex[i].approx / ex[pivot].approx;
    const Real re_err = abs(q.im);
    const Rational guess = best_rational(q.re, opt.max_denominator);
    const Real err = std::max(re_err, Real(abs(q.re - to_real(guess))));
    if (err > opt.reject) {
      out.evidence = where + std::to_string(i) + " ratio " + to_string(q.re) + " has no rational value";
      return out;
    }
    if (err > opt.accept) unsure = true;
    r.push_back(constant(f.field, guess));
  }
  if (unsure) {
    out.failure = ReconstructionStatus::Inconclusive;
    out.evidence = "ratios at place " + pl.label() + " agree only to limited precision";
    return out;
  }
  out.ratios = std::move(r);
  return out;
}

// Minor of rows r.. with the columns in `mask`, as a polynomial over
// monomials(d, d - r).
using Poly = std::map<std::vector<int>, Rational>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      auto e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

Poly minor(const std::vector<std::vector<Poly>>& m, std::size_t r, unsigned mask, std::map<unsigned, Poly>& memo) {
  const std::size_t d = m.size();
  if (r == d) return Poly{{std::vector<int>(d, 0), Rational(1)}};
  if (auto it = memo.find(mask); it != memo.end()) return it->second;
  Poly out;
  int sign = 1;
  for (std::size_t c = 0; c < d; ++c) {
    if (!(mask & (1U << c))) continue;
    if (!m[r][c].empty()) {
      for (const auto& [e, x] : poly_mul(m[r][c], minor(m, r + 1, mask & ~(1U << c), memo))) out[e] += sign * x;
    }
    sign = -sign;
  }
  memo[mask] = out;
  return out;
}

// Fixed-point fraction {x}·2^128.
using u128 = unsigned __int128;

u128 fixed_fraction(const Real& x) {
  const Real fr = x - floor(x);
  const BigInt scaled = round_to_bigint(ldexp(fr, 128));
  const BigInt mask64 = (BigInt(1) << 64) - 1;
  const auto lo = static_cast<std::uint64_t>((scaled & mask64).convert_to<unsigned long long>());
  const auto hi = static_cast<std::uint64_t>(((scaled >> 64) & mask64).convert_to<unsigned long long>());
  return (static_cast<u128>(hi) << 64) | lo;
}

long double fixed_distance(u128 a) {
  const u128 d = a < (static_cast<u128>(1) << 127) ? a : static_cast<u128>(-a);
  return std::ldexp(static_cast<long double>(d), -128);
}

Real nearest_distance(const RealSpec& x, std::int64_t n) {
  if (x.exact) {
    const Rational t = *x.exact * Rational(n);
    BigInt fl = num(t) / den(t);
    if (Rational(fl) > t) fl -= 1;
    const Rational f = t - Rational(fl);
    return to_real(f <= Rational(1, 2) ? f : 1 - f);
  }
  const Real t = x.value * n;
  return abs(t - round(t));
}

Real littlewood_value(const RealSpec& a, const RealSpec& b, std::int64_t n) {
  return Real(n) * nearest_distance(a, n) * nearest_distance(b, n);
}

struct Chunk {
  std::vector<std::pair<std::int64_t, long double>> records;
};

Chunk scan_chunk(u128 fa, u128 fb, std::int64_t lo, std::int64_t hi) {
  Chunk out;
  u128 a = fa * static_cast<u128>(lo), b = fb * static_cast<u128>(lo);
  long double best = std::numeric_limits<long double>::infinity();
  for (std::int64_t n = lo; n < hi; ++n) {
    const long double v = static_cast<long double>(n) * fixed_distance(a) * fixed_distance(b);
    if (v < best) {
      best = v;
      out.records.emplace_back(n, v);
    }
    a += fa;
    b += fb;
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> monomials(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == e.size()) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[i] = a;
      self(self, i + 1, left - a);
    }
  };
  if (n > 0) rec(rec, 0, m);
  return out;
}

DecomposableForm make_form(const FieldPtr& field, const std::vector<Place>& S,
                           std::vector<std::vector<LinearForm>> factors) {
  return build_form(field, S, std::move(factors), true, "");
}

DecomposableForm make_probe(const FieldPtr& field, const std::vector<Place>& S,
                            std::vector<std::vector<LinearForm>> factors, std::string label) {
  return build_form(field, S, std::move(factors), false, std::move(label));
}

DecomposableForm dependent_factor_probe() {
  auto Q = create_field({BigInt(0), BigInt(1)});
  // φ = (1 + √5)/2
  LocalScalar phi = surd(Rational(1, 2), Rational(1, 2), 5);
  LocalScalar minus_one{Complex(Real(-1)), constant(phi.exact->field(), -1)};
  LocalScalar x1{Complex(Real(1)), constant(phi.exact->field(), 1)};
  LocalScalar x0{Complex(), constant(phi.exact->field(), 0)};
  return make_probe(Q, archimedean_places(Q), {{{x1, x0}, {x1, x0}, {phi, minus_one}}}, kCounterexampleLabel);
}

DecomposableForm indecomposable_probe() {
  auto Q = create_field({BigInt(0), BigInt(1)});
  // x² + √2 y² = (x + i 2^{1/4} y)(x - i 2^{1/4} y)
  const Real r = sqrt(sqrt(Real(2)));
  LinearForm a{{Complex(Real(1)), std::nullopt}, {Complex(Real(0), r), std::nullopt}};
  LinearForm b{{Complex(Real(1)), std::nullopt}, {Complex(Real(0), -r), std::nullopt}};
  return make_probe(Q, archimedean_places(Q), {{a, b}}, kCounterexampleLabel);
}

std::vector<LocalScalar> evaluate(const DecomposableForm& f, const std::vector<FieldElement>& z) {
  if (z.size() != static_cast<std::size_t>(f.n)) throw Error(ErrorCode::ShapeMismatch, "point has wrong length");
  return evaluate_point(f, z).values;
}

Real magnitude(const DecomposableForm& f, const std::vector<LocalScalar>& values) {
  Real out = 1;
  for (std::size_t v = 0; v < f.places.size(); ++v) {
    const Place& pl = f.places[v];
    const auto& x = values[v];
    if (pl.archimedean() && x.exact && x.exact->is_rational()) {
      const Real r = abs(to_real(x.exact->coords()[0]));
      out *= pl.kind == PlaceKind::Complex ? r * r : r;
    } else if (pl.kind == PlaceKind::Real) {
      out *= x.approx.abs();
    } else if (pl.kind == PlaceKind::Complex) {
      out *= x.approx.abs2();
    } else {
      if (values[v].exact->is_zero()) return 0;
      out *= local_abs(*values[v].exact, pl).value;
    }
  }
  return out;
}

std::optional<Real> ValueSpectrum::min_magnitude() const {
  if (entries.empty()) return std::nullopt;
  return entries.front().magnitude;
}

std::optional<Real> ValueSpectrum::min_gap() const {
  std::optional<Real> out;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const Real g = entries[i].magnitude - entries[i - 1].magnitude;
    if (!out || g < *out) out = g;
  }
  return out;
}

ValueSpectrum value_spectrum(const DecomposableForm& f, const HeightWindow& w, const std::optional<Real>& bound,
                             Execution mode) {
  check_spectrum_window(f, w);
  const int d = f.field->degree();
  const int dim = f.n * d;
  const auto places = detail::kernel_places(f.field, f.places);
  const auto omega = basis_elements(f.field);
  const bool rational = f.field->is_rational_field();

  // one kernel per place and factor, acting on integral-basis coordinates
  std::vector<std::optional<ArchKernel>> arch;
  std::vector<std::optional<FiniteKernel>> fin;
  for (std::size_t v = 0; v < places.size(); ++v) {
    const Place& pl = places[v];
    std::vector<Complex> sigma;
    if (pl.archimedean()) {
      for (const auto& x : omega) sigma.push_back(embed(x, pl));
    }
    for (const auto& l : f.factors[v]) {
      std::vector<std::vector<LocalScalar>> row(1, std::vector<LocalScalar>(static_cast<std::size_t>(dim)));
      for (std::size_t j = 0; j < l.size(); ++j) {
        for (std::size_t k = 0; k < omega.size(); ++k) {
          LocalScalar& s = row[0][j * omega.size() + k];
          if (pl.archimedean()) s.approx = l[j].approx * sigma[k];
          if (l[j].exact) {
            if (rational) {
              s.exact = l[j].exact;
            } else if (same_field(l[j].exact->field(), f.field)) {
              s.exact = FieldElement(f.field, l[j].exact->coords()) * omega[k];
            }
          }
        }
      }
      if (pl.archimedean()) {
        arch.emplace_back(ArchKernel(pl, row));
        fin.emplace_back();
      } else {
        arch.emplace_back();
        fin.emplace_back(FiniteKernel(pl, row));
      }
    }
  }
  const long double limit =
      bound ? static_cast<long double>(bound->convert_to<double>()) * (1 + 1e-6L) + 1e-300L
            : std::numeric_limits<long double>::infinity();

  const auto H = static_cast<long long>(w.height);
  std::vector<std::size_t> counts(static_cast<std::size_t>(H), 0);
  auto scan = [&](std::int64_t h) {
    std::vector<Candidate> out;
    detail::for_each_in_shell(dim, h, [&](const std::vector<std::int64_t>& c) {
      ++counts[static_cast<std::size_t>(h - 1)];
      long double mag = 1;
      for (std::size_t k = 0; k < arch.size(); ++k) {
        if (arch[k]) {
          mag *= arch[k]->norm(c.data());
        } else {
          const auto e = fin[k]->exponent(c.data());
          mag *= e ? std::pow(static_cast<long double>(fin[k]->place().p.convert_to<double>()), -*e) : 0.0L;
        }
      }
      if (mag <= limit) out.push_back({{c, {}}, h});
    });
    return out;
  };

  std::vector<std::vector<SpectrumEntry>> entries(static_cast<std::size_t>(H));
  std::vector<std::size_t> zeros(static_cast<std::size_t>(H), 0);
  auto run = [&](long long h) {
    const auto i = static_cast<std::size_t>(h - 1);
    for (const auto& c : scan(h)) accept_candidate(f, c, bound, entries[i], zeros[i]);
  };
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long h = H; h >= 1; --h) run(h);
  } else {
    for (long long h = 1; h <= H; ++h) run(h);
  }

  ValueSpectrum out;
  out.window = w;
  out.bound = bound;
  std::vector<SpectrumEntry> raw;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out.zeros += zeros[i];
    out.points += counts[i];
    for (auto& e : entries[i]) raw.push_back(std::move(e));
  }
  out.entries = merge_entries(std::move(raw));
  return out;
}

ValueSpectrum value_spectrum_reference(const DecomposableForm& f, const HeightWindow& w,
                                       const std::optional<Real>& bound) {
  check_spectrum_window(f, w);
  const int dim = f.n * f.field->degree();
  ValueSpectrum out;
  out.window = w;
  out.bound = bound;
  std::vector<SpectrumEntry> raw;
  for (std::int64_t h = 1; h <= w.height; ++h) {
    detail::for_each_in_shell(dim, h, [&](const std::vector<std::int64_t>& c) {
      ++out.points;
      accept_candidate(f, {{c, {}}, h}, bound, raw, out.zeros);
    });
  }
  out.entries = merge_entries(std::move(raw));
  return out;
}

std::string status_name(ReconstructionStatus s) {
  switch (s) {
    case ReconstructionStatus::Reconstructed:
      return "reconstructed";
    case ReconstructionStatus::NoRationalReconstruction:
      return "no-rational-reconstruction";
    case ReconstructionStatus::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

ReconstructionResult rationality_reconstruct(const DecomposableForm& f, const ReconstructionOptions& opt) {
  ReconstructionResult out;
  std::optional<std::vector<FieldElement>> g;
  std::optional<PlaceRatios> unsure;
  for (std::size_t v = 0; v < f.places.size(); ++v) {
    auto pr = place_ratios(f, v, opt);
    if (!pr.ratios) {
      if (pr.failure == ReconstructionStatus::NoRationalReconstruction) {
        out.status = pr.failure;
        out.evidence = pr.evidence;
        return out;
      }
      if (!unsure) unsure = std::move(pr);
      continue;
    }
    auto p = primitive(*pr.ratios);
    if (!g) {
      g = std::move(p);
      continue;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!(p[i] == (*g)[i])) {
        out.status = ReconstructionStatus::NoRationalReconstruction;
        out.evidence = "places " + f.places[0].label() + " and " + f.places[v].label() + " disagree at coefficient " +
                       std::to_string(i);
        return out;
      }
    }
  }
  if (unsure || !g) {
    out.status = ReconstructionStatus::Inconclusive;
    out.evidence = unsure ? unsure->evidence : "no usable place";
    return out;
  }
  out.status = ReconstructionStatus::Reconstructed;
  out.g = *g;
  for (std::size_t v = 0; v < f.places.size(); ++v) {
    const Place& pl = f.places[v];
    const auto& ex = f.expansion[v];
    std::size_t pivot = 0;
    while ((*g)[pivot].is_zero()) ++pivot;
    LocalScalar a;
    if (pl.archimedean()) a.approx = ex[pivot].approx / embed((*g)[pivot], pl);
    if (ex[pivot].exact && same_field(ex[pivot].exact->field(), f.field)) {
      a.exact = FieldElement(f.field, ex[pivot].exact->coords()) * (*g)[pivot].inverse();
    } else if (ex[pivot].exact && (*g)[pivot].is_rational()) {
      a.exact = *ex[pivot].exact * constant(ex[pivot].exact->field(), (*g)[pivot].coords()[0]).inverse();
    }
    out.alpha.push_back(std::move(a));
  }
  return out;
}

DiscretenessReport discreteness_report(const DecomposableForm& f, const std::vector<std::int64_t>& heights,
                                       const DiscretenessOptions& opt, Execution mode) {
  if (heights.size() < 3) throw Error(ErrorCode::TooFewWindows, "at least three windows are needed");
  for (std::size_t i = 1; i < heights.size(); ++i) {
    if (heights[i] <= heights[i - 1]) throw Error(ErrorCode::InvalidArgument, "window heights must increase");
  }
  DiscretenessReport out;
  out.heights = heights;
  for (auto h : heights) out.radii.push_back(opt.radius * Real(heights.front()) / Real(h));
  out.spectrum = value_spectrum(f, {heights.back(), opt.denom, opt.cap}, opt.bound, mode);
  const auto& E = out.spectrum.entries;
  if (!E.empty()) {
    out.min_magnitude = E.front().magnitude;
    out.min_witness = E.front().witness;
  }

  // single-linkage clusters at the final radius
  const Real r_last = out.radii.back();
  std::size_t start = 0;
  for (std::size_t i = 1; i <= E.size(); ++i) {
    if (i < E.size() && E[i].magnitude - E[i - 1].magnitude <= r_last) continue;
    if (i - start >= 2) {
      Cluster c;
      std::size_t top = start;
      for (std::size_t k = start; k < i; ++k) {
        c.members.push_back(k);
        if (E[k].height > E[top].height) top = k;
      }
      c.center = E[top].magnitude;
      for (std::size_t j = 0; j < heights.size(); ++j) {
        std::size_t cnt = 0;
        for (auto k : c.members) cnt += E[k].height <= heights[j] && abs(E[k].magnitude - c.center) <= out.radii[j];
        c.per_window.push_back(cnt);
      }
      if (c.per_window.back() >= c.per_window.front() + opt.new_members) out.clusters.push_back(std::move(c));
    }
    start = i;
  }
  out.verdict = out.clusters.empty() ? "discrete-trend" : "accumulation-detected";

  if (!f.label.empty()) {
    out.prediction = "none";
  } else {
    out.reconstruction = rationality_reconstruct(f);
    switch (out.reconstruction->status) {
      case ReconstructionStatus::Reconstructed:
        out.prediction = "discrete";
        break;
      case ReconstructionStatus::NoRationalReconstruction:
        out.prediction = "non-discrete";
        break;
      case ReconstructionStatus::Inconclusive:
        out.prediction = "none";
        break;
    }
  }
  if (out.prediction == "none") {
    out.agreement = "no-prediction";
  } else {
    const bool discrete = out.verdict == "discrete-trend";
    out.agreement = discrete == (out.prediction == "discrete") ? "consistent" : "ANOMALY";
  }
  return out;
}

std::vector<Rational> norm_form_coefficients(const FieldPtr& field, const std::vector<FieldElement>& basis) {
  const int d = field->degree();
  if (basis.size() != static_cast<std::size_t>(d)) throw Error(ErrorCode::DegenerateBasis, "basis has wrong size");
  if (d > 16) throw Error(ErrorCode::InvalidArgument, "degree too large for exact expansion");
  std::vector<std::vector<FieldElement>> coords(1);
  for (const auto& mu : basis) {
    if (!same_field(mu.field(), field)) throw Error(ErrorCode::DegenerateBasis, "basis element from another field");
    coords[0].push_back(mu);
  }
  {
    std::vector<std::vector<Rational>> m;
    for (const auto& mu : basis) m.push_back(mu.coords());
    std::vector<std::vector<FieldElement>> a;
    auto Q = create_field({BigInt(0), BigInt(1)});
    for (auto& row : m) {
      a.emplace_back();
      for (auto& x : row) a.back().push_back(constant(Q, x));
    }
    if (exact_rank(a) < static_cast<std::size_t>(d)) throw Error(ErrorCode::DegenerateBasis, "basis is dependent");
  }
  // N(Σ x_i μ_i) = det of the multiplication map, entry (r, c) being the
  // r-th coordinate of Σ x_i μ_i θ^c
  const auto D = static_cast<std::size_t>(d);
  std::vector<std::vector<Poly>> M(D, std::vector<Poly>(D));
  const FieldElement theta = FieldElement::theta(field);
  for (std::size_t i = 0; i < D; ++i) {
    FieldElement x = basis[i];
    for (std::size_t c = 0; c < D; ++c) {
      for (std::size_t r = 0; r < D; ++r) {
        if (x.coords()[r] == 0) continue;
        std::vector<int> e(D, 0);
        e[i] = 1;
        M[r][c][e] += x.coords()[r];
      }
      x *= theta;
    }
  }
  for (auto& row : M) {
    for (auto& p : row) {
      for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
    }
  }
  std::map<unsigned, Poly> memo;
  const Poly det = minor(M, 0, static_cast<unsigned>((std::size_t{1} << D) - 1), memo);
  const auto list = monomials(d, d);
  std::vector<Rational> out(list.size(), Rational(0));
  const auto index = monomial_index(d, d);
  for (const auto& [e, c] : det) {
    int deg = 0;
    for (int x : e) deg += x;
    if (deg == d) out[index.at(e)] += c;
  }
  return out;
}

DecomposableForm norm_form(const FieldPtr& field, const std::vector<FieldElement>& basis) {
  const auto coef = norm_form_coefficients(field, basis);
  auto Q = create_field({BigInt(0), BigInt(1)});
  std::vector<LinearForm> factors;
  for (const auto& pl : archimedean_places(field)) {
    LinearForm l;
    for (const auto& mu : basis) l.push_back({embed(mu, pl), std::nullopt});
    factors.push_back(l);
    if (pl.kind == PlaceKind::Complex) {
      for (auto& c : l) c.approx = c.approx.conj();
      factors.push_back(std::move(l));
    }
  }
  auto f = make_form(Q, archimedean_places(Q), {factors});
  for (std::size_t i = 0; i < coef.size(); ++i) {
    f.expansion[0][i] = {Complex(to_real(coef[i])), constant(Q, coef[i])};
  }
  return f;
}

LittlewoodResult littlewood_scan(const RealSpec& alpha, const RealSpec& beta, std::int64_t N, Execution mode) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  if (N > 1000000000) throw Error(ErrorCode::WindowTooLarge, "N is capped at 1e9");
  const u128 fa = fixed_fraction(alpha.exact ? to_real(*alpha.exact) : alpha.value);
  const u128 fb = fixed_fraction(beta.exact ? to_real(*beta.exact) : beta.value);
  const std::int64_t chunk = std::int64_t{1} << 20;
  const auto chunks = static_cast<long long>((N + chunk - 1) / chunk);
  std::vector<Chunk> parts(static_cast<std::size_t>(chunks));
  auto run = [&](long long i) {
    const std::int64_t lo = 1 + i * chunk, hi = std::min<std::int64_t>(N + 1, lo + chunk);
    parts[static_cast<std::size_t>(i)] = scan_chunk(fa, fb, lo, hi);
  };
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < chunks; ++i) run(i);
  } else {
    for (long long i = 0; i < chunks; ++i) run(i);
  }
  // global prefix minima are chunk prefix minima; confirm at working precision
  LittlewoodResult out;
  long double best = std::numeric_limits<long double>::infinity();
  for (const auto& part : parts) {
    for (const auto& [n, v] : part.records) {
      if (!(v < best)) continue;
      best = v;
      Real exact = littlewood_value(alpha, beta, n);
      if (out.records.empty() || exact < out.records.back().value) out.records.push_back({n, exact});
    }
  }
  out.min_value = out.records.back().value;
  out.argmin = out.records.back().n;
  return out;
}

LittlewoodResult littlewood_reference(const RealSpec& alpha, const RealSpec& beta, std::int64_t N) {
  LittlewoodResult out;
  for (std::int64_t n = 1; n <= N; ++n) {
    Real v = littlewood_value(alpha, beta, n);
    if (out.records.empty() || v < out.records.back().value) out.records.push_back({n, v});
  }
  out.min_value = out.records.back().value;
  out.argmin = out.records.back().n;
  return out;
}

}  // namespace slab
