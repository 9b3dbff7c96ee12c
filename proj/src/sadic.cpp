#include "slab/sadic.hpp"

#include "slab/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace slab {

SAdicVector diagonal_embedding(const FieldPtr& field, const std::vector<Place>& S,
                               const std::vector<FieldElement>& z) {
  SAdicVector x{field, S, {}};
  for (const auto& v : S) {
    std::vector<LocalScalar> comp;
    comp.reserve(z.size());
    for (const auto& zi : z) {
      LocalScalar s;
      if (v.archimedean()) s.approx = embed(zi, v);
      s.exact = zi;
      comp.push_back(std::move(s));
    }
    x.components.push_back(std::move(comp));
  }
  return x;
}

SAdicVector scale(const FieldElement& xi, const SAdicVector& x) {
  SAdicVector out = x;
  for (std::size_t v = 0; v < x.places.size(); ++v) {
    const Place& pl = x.places[v];
    Complex factor = pl.archimedean() ? embed(xi, pl) : Complex();
    for (auto& s : out.components[v]) {
      if (pl.archimedean()) s.approx = s.approx * factor;
      if (s.exact) s.exact = xi * *s.exact;
    }
  }
  return out;
}

LocalAbs local_norm(const Place& v, const std::vector<LocalScalar>& component) {
  if (v.archimedean()) {
    Real sum = 0;
    for (const auto& s : component) sum += s.approx.abs2();
    return {v.kind == PlaceKind::Real ? sqrt(sum) : sum, std::nullopt};
  }
  std::optional<int> best;
  for (const auto& s : component) {
    if (!s.exact) throw Error(ErrorCode::NonExactRepresentative, "finite-place coordinate without exact value");
    auto a = local_abs(*s.exact, v);
    if (a.exponent && (!best || *a.exponent < *best)) best = a.exponent;
  }
  if (!best) return {Real(0), std::nullopt};
  return {pow(Real(v.p), -*best), best};
}

Real sup_norm(const SAdicVector& x) {
  Real best = 0;
  for (std::size_t v = 0; v < x.places.size(); ++v) best = std::max(best, local_norm(x.places[v], x.components[v]).value);
  return best;
}

Real content(const SAdicVector& x) {
  Real prod = 1;
  for (std::size_t v = 0; v < x.places.size(); ++v) {
    Real n = local_norm(x.places[v], x.components[v]).value;
    if (n == 0) return Real(0);
    prod *= n;
  }
  return prod;
}

bool pseudoball_contains(const Real& radius, const SAdicVector& x) {
  if (!(radius > 0)) throw Error(ErrorCode::InvalidArgument, "pseudoball radius must be positive");
  return content(x) < radius;
}

namespace {

// log |u|_v for each generator (rows) and place (columns)
std::vector<std::vector<Real>> log_embedding(const SUnitGroup& units, const std::vector<Place>& S) {
  std::vector<std::vector<Real>> L;
  for (const auto& u : units.generators) {
    std::vector<Real> row;
    for (const auto& v : S) row.push_back(log(local_abs(u, v).value));
    L.push_back(std::move(row));
  }
  return L;
}

// Calls f on every vector in [-bound, bound]^r in lexicographic order.
void for_each_exponent(std::size_t r, int bound, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> e(r, -bound);
  for (;;) {
    f(e);
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (e[i] < bound) {
        ++e[i];
        for (std::size_t j = i + 1; j < r; ++j) e[j] = -bound;
        break;
      }
      if (i == 0) return;
    }
    if (r == 0) return;
  }
}

}  // namespace

BalanceResult unit_balance(const SAdicVector& x, const BalancingTarget& target, const SUnitGroup& units,
                           int exponent_bound) {
  const std::size_t m = x.places.size();
  if (target.targets.size() != m) throw Error(ErrorCode::ShapeMismatch, "one target per place required");
  std::vector<Real> y(m);
  Real prod_targets = 1;
  for (std::size_t v = 0; v < m; ++v) {
    Real n = local_norm(x.places[v], x.components[v]).value;
    if (n == 0) throw Error(ErrorCode::ZeroComponent, "component at " + x.places[v].label() + " vanishes");
    if (!(target.targets[v] > 0)) throw Error(ErrorCode::InvalidArgument, "targets must be positive");
    y[v] = log(n / target.targets[v]);
    prod_targets *= target.targets[v];
  }
  Real c = content(x);
  if (abs(prod_targets - c) / c > Real("1e-8")) {
    throw Error(ErrorCode::InvalidArgument, "product of targets must equal the content");
  }
  auto L = log_embedding(units, x.places);
  const Real tie = Real("1e-12");
  std::vector<int> best_e;
  Real best = -1;
  for_each_exponent(L.size(), exponent_bound, [&](const std::vector<int>& e) {
    Real worst = 0;
    for (std::size_t v = 0; v < m; ++v) {
      Real s = y[v];
      for (std::size_t i = 0; i < e.size(); ++i) s += e[i] * L[i][v];
      worst = std::max(worst, abs(s));
    }
    if (best < 0 || worst < best - tie) {
      best = worst;
      best_e = e;
    }
  });
  FieldElement xi = FieldElement::from_rational(x.field, Rational(1));
  for (std::size_t i = 0; i < best_e.size(); ++i) xi *= units.generators[i].pow(best_e[i]);
  return {xi, best_e, exp(best)};
}

Real balancing_constant(const FieldPtr& field, const std::vector<Place>& S, const SUnitGroup& units) {
  (void)field;
  const std::size_t m = S.size();
  if (m <= 1) return Real(1);
  auto L = log_embedding(units, S);
  const std::size_t r = L.size();
  if (r + 1 < m) {
    throw Error(ErrorCode::GeneratorInvariantViolated, "S-unit generators do not span the log hyperplane");
  }
  const int grid = r == 1 ? 64 : (r == 2 ? 24 : 10);
  Real spread = 0;  // Σ ‖b_i‖_∞
  for (const auto& row : L) {
    Real mx = 0;
    for (const auto& x : row) mx = std::max(mx, abs(x));
    spread += mx;
  }
  Real worst = 0;
  std::vector<int> t(r, 0);
  for (;;) {
    std::vector<Real> y(m, Real(0));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t v = 0; v < m; ++v) y[v] += Real(t[i]) / grid * L[i][v];
    }
    Real nearest = -1;
    for_each_exponent(r, 2, [&](const std::vector<int>& k) {
      Real d = 0;
      for (std::size_t v = 0; v < m; ++v) {
        Real s = y[v];
        for (std::size_t i = 0; i < r; ++i) s -= k[i] * L[i][v];
        d = std::max(d, abs(s));
      }
      if (nearest < 0 || d < nearest) nearest = d;
    });
    worst = std::max(worst, nearest);
    std::size_t i = 0;
    while (i < r && ++t[i] == grid) t[i++] = 0;
    if (i == r) break;
  }
  return exp(worst + spread / (2 * grid));
}

namespace {

nlohmann::json finite_scalar_json(const FieldElement& x, const Place& v) {
  if (x.is_zero()) return {{"val", nullptr}, {"unit_digits", nlohmann::json::array()}};
  auto [a, d] = poly::clear_denominators(x.as_poly());
  const BigInt modulus = v.modulus();
  auto r = poly::zmod_divmod(a, v.factor, modulus).second;
  r.resize(static_cast<std::size_t>(v.residue_degree), BigInt(0));
  int shift = -1;
  for (const auto& c : r) {
    if (c == 0) continue;
    int val = valuation(c, v.p);
    if (shift < 0 || val < shift) shift = val;
  }
  const int dval = valuation(d, v.p);
  BigInt dunit = d / ipow(v.p, static_cast<unsigned>(dval));
  const unsigned digits = v.precision - static_cast<unsigned>(shift);
  const BigInt m = ipow(v.p, digits);
  BigInt inv = inverse_mod(dunit, m);
  auto expand = [&](BigInt c) {
    c = mod((c / ipow(v.p, static_cast<unsigned>(shift))) * inv, m);
    nlohmann::json out = nlohmann::json::array();
    for (unsigned i = 0; i < digits; ++i) {
      out.push_back((c % v.p).convert_to<long>());
      c /= v.p;
    }
    return out;
  };
  nlohmann::json unit;
  if (v.residue_degree == 1) {
    unit = expand(r[0]);
  } else {
    unit = nlohmann::json::array();
    for (const auto& c : r) unit.push_back(expand(c));
  }
  return {{"val", v.residue_degree * (shift - dval)}, {"unit_digits", unit}};
}

}  // namespace

nlohmann::json to_json(const SAdicVector& x) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t v = 0; v < x.places.size(); ++v) {
    const Place& pl = x.places[v];
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& s : x.components[v]) {
      if (pl.kind == PlaceKind::Real) {
        coords.push_back(s.approx.re.convert_to<double>());
      } else if (pl.kind == PlaceKind::Complex) {
        coords.push_back({s.approx.re.convert_to<double>(), s.approx.im.convert_to<double>()});
      } else {
        coords.push_back(finite_scalar_json(*s.exact, pl));
      }
    }
    out[pl.label()] = coords;
  }
  return out;
}

}  // namespace slab
