#include "slab/error.hpp"
#include "slab/forms.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

using namespace slab;

namespace {

FieldPtr rationals() { return create_field({BigInt(0), BigInt(1)}); }

LocalScalar rat(const FieldPtr& F, const Rational& q) { return {Complex(to_real(q)), FieldElement::from_rational(F, q)}; }

// a + b√d, exact in Q(√d)
LocalScalar surd(const FieldPtr& F, const Rational& a, const Rational& b) {
  const auto d = -F->min_poly_z()[0];
  return {Complex(to_real(a) + to_real(b) * sqrt(Real(d))), FieldElement(F, {a, b})};
}

LocalScalar num(const Real& x) { return {Complex(x), std::nullopt}; }

DecomposableForm rational_form(const std::vector<std::vector<Rational>>& rows) {
  auto Q = rationals();
  std::vector<LinearForm> f;
  for (const auto& r : rows) {
    f.emplace_back();
    for (const auto& x : r) f.back().push_back(rat(Q, x));
  }
  return make_form(Q, archimedean_places(Q), {f});
}

// x(√2x - y)
DecomposableForm sqrt2_form() {
  auto Q = rationals();
  auto F = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  return make_form(Q, archimedean_places(Q), {{{surd(F, 1, 0), surd(F, 0, 0)}, {surd(F, 0, 1), surd(F, -1, 0)}}});
}

std::vector<FieldElement> zq(const FieldPtr& Q, std::vector<std::int64_t> z) {
  std::vector<FieldElement> out;
  for (auto x : z) out.push_back(FieldElement::from_rational(Q, Rational(x)));
  return out;
}

void same_spectrum(const ValueSpectrum& a, const ValueSpectrum& b) {
  REQUIRE(a.entries.size() == b.entries.size());
  CHECK(a.zeros == b.zeros);
  CHECK(a.points == b.points);
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(abs(a.entries[i].magnitude - b.entries[i].magnitude) <= Real("1e-40") * b.entries[i].magnitude);
    CHECK(a.entries[i].count == b.entries[i].count);
    CHECK(a.entries[i].height == b.entries[i].height);
    CHECK(a.entries[i].witness == b.entries[i].witness);
  }
}

}  // namespace

TEST_CASE("monomial basis and expansion") {
  CHECK(monomials(2, 2) == std::vector<std::vector<int>>{{2, 0}, {1, 1}, {0, 2}});
  CHECK(monomials(3, 2).size() == 6);
  CHECK(monomials(3, 3).front() == std::vector<int>{3, 0, 0});

  auto f0 = rational_form({{1, 0}, {0, 1}});
  std::vector<Rational> e;
  for (const auto& c : f0.expansion[0]) e.push_back(c.exact->coords()[0]);
  CHECK(e == std::vector<Rational>{0, 1, 0});
  auto g = rational_form({{1, -1}, {1, 1}});
  e.clear();
  for (const auto& c : g.expansion[0]) e.push_back(c.exact->coords()[0]);
  CHECK(e == std::vector<Rational>{1, 0, -1});
  CHECK(g.ranks == std::vector<int>{2});

  CHECK_THROWS_AS(rational_form({{1, 2}, {2, 4}}), Error);
  try {
    rational_form({{1, 0}, {1, 0}, {1, 1}});
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::DependentFactors);
  }
  auto probe = dependent_factor_probe();
  CHECK(probe.label == kCounterexampleLabel);
  CHECK(probe.ranks == std::vector<int>{2});
  CHECK_THROWS_AS(make_form(probe.field, probe.places, probe.factors), Error);

  // finite places need exact coefficients from K
  auto Q = rationals();
  auto S = archimedean_places(Q);
  for (auto& v : finite_places(Q, 5)) S.push_back(v);
  LinearForm l{num(Real(1)), num(Real(0))};
  CHECK_THROWS_AS(make_form(Q, S, {{l}, {l}}), Error);
}

TEST_CASE("evaluation") {
  auto Q = rationals();
  auto F = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  auto pell = make_form(Q, archimedean_places(Q), {{{surd(F, 1, 0), surd(F, 0, 1)}, {surd(F, 1, 0), surd(F, 0, -1)}}});
  auto v = evaluate(pell, zq(Q, {1, 1}));
  REQUIRE(v[0].exact);
  CHECK(*v[0].exact == FieldElement::from_rational(F, -1));
  CHECK(magnitude(pell, v) == 1);

  auto f = sqrt2_form();
  auto w = evaluate(f, zq(Q, {5, 7}));
  CHECK(std::abs(w[0].approx.re.convert_to<double>() - 5 * (5 * std::sqrt(2.0) - 7)) < 1e-12);
  CHECK(abs(w[0].approx.re - Real("0.35533905932737622")) < Real("1e-16"));
  CHECK(*w[0].exact == FieldElement(F, {Rational(-35), Rational(25)}));

  auto Qi = create_field({BigInt(1), BigInt(0), BigInt(1)});
  auto C = archimedean_places(Qi);
  const auto i = FieldElement::theta(Qi);
  auto one = FieldElement::from_rational(Qi, 1);
  LinearForm a{{embed(one, C[0]), one}, {embed(i, C[0]), i}};
  LinearForm b{{embed(one, C[0]), one}, {embed(-i, C[0]), -i}};
  auto g = make_form(Qi, C, {{a, b}});
  auto gv = evaluate(g, {one, one});
  CHECK(*gv[0].exact == FieldElement::from_rational(Qi, 2));
  CHECK(abs(gv[0].approx.re - 2) < Real("1e-50"));
  CHECK(magnitude(g, gv) == 4);  // normalized at a complex place
}

TEST_CASE("value spectra") {
  auto Q = rationals();
  auto F = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  auto pell = make_form(Q, archimedean_places(Q), {{{surd(F, 1, 0), surd(F, 0, 1)}, {surd(F, 1, 0), surd(F, 0, -1)}}});
  auto s = value_spectrum(pell, {50, 0});
  REQUIRE(!s.entries.empty());
  CHECK(*s.min_magnitude() == 1);
  for (const auto& e : s.entries) CHECK(e.magnitude == floor(e.magnitude));
  // oracle: distinct |x² - 2y²| over the window
  std::set<long long> oracle;
  for (long long y = 0; y <= 50; ++y) {
    for (long long x = -50; x <= 50; ++x) {
      if (y == 0 && x <= 0) continue;
      if (x * x - 2 * y * y != 0) oracle.insert(std::llabs(x * x - 2 * y * y));
    }
  }
  CHECK(s.entries.size() == oracle.size());
  CHECK(s.points == 101 * 101 / 2);

  auto t = value_spectrum(sqrt2_form(), {100, 0}, Real(1));
  // convergents y/x of √2 give |x(√2x - y)|
  for (auto [x, y] : std::vector<std::pair<double, double>>{{1, 1}, {2, 3}, {5, 7}, {12, 17}, {29, 41}}) {
    const double want = std::abs(x * (std::sqrt(2.0) * x - y));
    bool found = false;
    for (const auto& e : t.entries) found = found || std::abs(e.magnitude.convert_to<double>() - want) < 1e-6;
    CHECK_MESSAGE(found, want);
  }
  CHECK(t.zeros == 100);  // (0, y) for y = 1..100

  auto three = rational_form({{3, 0}, {0, 1}});
  auto u = value_spectrum(three, {10, 0});
  CHECK(*u.min_magnitude() == 3);
  CHECK(*u.min_gap() == 3);
  for (const auto& e : u.entries) CHECK(e.magnitude / 3 == floor(e.magnitude / 3));

  auto empty = value_spectrum(three, {10, 0}, Real(1));
  CHECK(empty.entries.empty());

  CHECK_THROWS_AS(value_spectrum(three, {100000, 0}), Error);
  CHECK_THROWS_AS(value_spectrum(three, {10, 2}), Error);
}

TEST_CASE("fast spectrum matches the reference") {
  auto Q = rationals();
  same_spectrum(value_spectrum(sqrt2_form(), {30, 0}, Real(3)), value_spectrum_reference(sqrt2_form(), {30, 0}, Real(3)));
  auto r = rational_form({{1, 2}, {3, -1}});
  same_spectrum(value_spectrum(r, {20, 0}), value_spectrum_reference(r, {20, 0}));
  same_spectrum(value_spectrum(r, {20, 0}, std::nullopt, Execution::Serial), value_spectrum(r, {20, 0}));

  // S = {∞, 5}
  auto S = archimedean_places(Q);
  for (auto& v : finite_places(Q, 5)) S.push_back(v);
  std::vector<LinearForm> fs{{rat(Q, 1), rat(Q, 2)}, {rat(Q, 3), rat(Q, -1)}};
  auto two = make_form(Q, S, {fs, fs});
  auto fast = value_spectrum(two, {15, 0});
  same_spectrum(fast, value_spectrum_reference(two, {15, 0}));
  for (const auto& e : fast.entries) {
    // |f|_∞ |f|_5 strips the powers of 5
    auto v = e.values[0].exact->coords()[0];
    BigInt a = abs(num(v));
    while (a % 5 == 0) a /= 5;
    CHECK(e.magnitude == Real(a));
  }

  // Q(i) with a complex place, z over Z[i]
  auto Qi = create_field({BigInt(1), BigInt(0), BigInt(1)});
  auto C = archimedean_places(Qi);
  const auto i = FieldElement::theta(Qi);
  auto one = FieldElement::from_rational(Qi, 1);
  auto two_i = FieldElement::from_rational(Qi, 2) + i;
  LinearForm a{{embed(one, C[0]), one}, {embed(i, C[0]), i}};
  LinearForm b{{embed(two_i, C[0]), two_i}, {embed(-one, C[0]), -one}};
  auto g = make_form(Qi, C, {{a, b}});
  same_spectrum(value_spectrum(g, {3, 0}), value_spectrum_reference(g, {3, 0}));

  auto probe = indecomposable_probe();
  same_spectrum(value_spectrum(probe, {20, 0}, Real(5)), value_spectrum_reference(probe, {20, 0}, Real(5)));
}

TEST_CASE("spectra are invariant under SL2(Z)") {
  auto Q = rationals();
  auto F = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  const std::vector<std::vector<std::int64_t>> gammas{{1, 1, 0, 1}, {0, -1, 1, 0}, {2, 1, 1, 1}};
  for (const auto& gm : gammas) {
    // f∘γ: l(γz) has coefficients l·γ
    auto f = sqrt2_form();
    std::vector<LinearForm> comp;
    for (const auto& l : f.factors[0]) {
      LinearForm c;
      for (int col = 0; col < 2; ++col) {
        LocalScalar s{l[0].approx * Complex(Real(gm[static_cast<std::size_t>(col)])) +
                          l[1].approx * Complex(Real(gm[static_cast<std::size_t>(2 + col)])),
                      *l[0].exact * FieldElement::from_rational(F, gm[static_cast<std::size_t>(col)]) +
                          *l[1].exact * FieldElement::from_rational(F, gm[static_cast<std::size_t>(2 + col)])};
        c.push_back(s);
      }
      comp.push_back(c);
    }
    auto g = make_form(Q, archimedean_places(Q), {comp});
    auto small = value_spectrum(g, {10, 0}, Real(5));
    auto big = value_spectrum(f, {40, 0}, Real(5));
    for (const auto& e : small.entries) {
      bool found = false;
      for (const auto& b : big.entries) found = found || abs(b.magnitude - e.magnitude) < Real("1e-40");
      CHECK(found);
    }
  }
}

TEST_CASE("discreteness reports") {
  auto rep = discreteness_report(sqrt2_form(), {10, 100, 1000, 10000});
  CHECK(rep.verdict == "accumulation-detected");
  REQUIRE(!rep.clusters.empty());
  const auto& c = rep.clusters.front();
  CHECK(abs(c.center - 1 / (2 * sqrt(Real(2)))) < Real("1e-7"));
  CHECK(c.per_window.back() >= 5);
  CHECK(rep.prediction == "non-discrete");
  CHECK(rep.agreement == "consistent");

  // oracle: the Pell convergents (x, y) with y² - 2x² = ±1 in the window
  std::size_t pell = 0;
  for (long long x = 1, y = 1; x <= 10000 && y <= 10000; std::tie(x, y) = std::make_pair(x + y, 2 * x + y)) {
    if (std::abs(x / (std::sqrt(2.0) * x + y) - 1 / (2 * std::sqrt(2.0))) <= rep.radii.back().convert_to<double>()) {
      ++pell;
    }
  }
  CHECK(c.per_window.back() >= pell);

  auto Q = rationals();
  auto F = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  auto pell_form = make_form(Q, archimedean_places(Q), {{{surd(F, 1, 0), surd(F, 0, 1)}, {surd(F, 1, 0), surd(F, 0, -1)}}});
  auto d = discreteness_report(pell_form, {10, 100, 1000});
  CHECK(d.verdict == "discrete-trend");
  CHECK(d.agreement == "consistent");
  CHECK(*d.min_magnitude == 1);
  auto three = discreteness_report(rational_form({{3, 0}, {0, 1}}), {10, 100, 1000});
  CHECK(three.verdict == "discrete-trend");
  CHECK(*three.min_magnitude == 3);

  auto probe = discreteness_report(dependent_factor_probe(), {10, 100, 1000, 10000});
  CHECK(probe.verdict == "discrete-trend");
  CHECK(probe.agreement == "no-prediction");
  CHECK(abs(*probe.min_magnitude - (3 - sqrt(Real(5))) / 2) < Real("1e-6"));
  CHECK(*probe.min_witness == LatticePoint{{1, 2}, {}});
  // brute force: min |x²(φx - y)| over a small box
  double best = 1e9;
  const double phi = (1 + std::sqrt(5.0)) / 2;
  for (int x = -60; x <= 60; ++x) {
    for (int y = -60; y <= 60; ++y) {
      const double val = std::abs(x * x * (phi * x - y));
      if (val > 1e-12) best = std::min(best, val);
    }
  }
  CHECK(std::abs(probe.min_magnitude->convert_to<double>() - best) < 1e-12);

  CHECK_THROWS_AS(discreteness_report(sqrt2_form(), {10, 100}), Error);
  CHECK_THROWS_AS(discreteness_report(sqrt2_form(), {10, 10, 100}), Error);
}

TEST_CASE("norm forms") {
  auto coeffs = [](const FieldPtr& K) {
    std::vector<FieldElement> basis{FieldElement::from_rational(K, 1), FieldElement::theta(K)};
    return norm_form_coefficients(K, basis);
  };
  CHECK(coeffs(create_field({BigInt(-2), BigInt(0), BigInt(1)})) == std::vector<Rational>{1, 0, -2});
  CHECK(coeffs(create_field({BigInt(1), BigInt(0), BigInt(1)})) == std::vector<Rational>{1, 0, 1});
  CHECK(coeffs(create_field({BigInt(-1), BigInt(-1), BigInt(1)})) == std::vector<Rational>{1, 1, -1});

  // N(a + bθ + cθ²) = a³ + 2b³ + 4c³ - 6abc for θ³ = 2
  auto K3 = create_field({BigInt(-2), BigInt(0), BigInt(0), BigInt(1)});
  const auto th = FieldElement::theta(K3);
  auto n3 = norm_form_coefficients(K3, {FieldElement::from_rational(K3, 1), th, th * th});
  const auto mons = monomials(3, 3);
  for (std::size_t i = 0; i < mons.size(); ++i) {
    Rational want = 0;
    if (mons[i] == std::vector<int>{3, 0, 0}) want = 1;
    if (mons[i] == std::vector<int>{0, 3, 0}) want = 2;
    if (mons[i] == std::vector<int>{0, 0, 3}) want = 4;
    if (mons[i] == std::vector<int>{1, 1, 1}) want = -6;
    CHECK(n3[i] == want);
  }

  std::mt19937 rng(9);
  std::uniform_int_distribution<int> c(-30, 30);
  for (const auto& K : {create_field({BigInt(-2), BigInt(0), BigInt(1)}), create_field({BigInt(-1), BigInt(-1), BigInt(1)}),
                        create_field({BigInt(1), BigInt(0), BigInt(1)}), K3}) {
    std::vector<FieldElement> basis;
    FieldElement p = FieldElement::from_rational(K, 1);
    for (int k = 0; k < K->degree(); ++k) {
      basis.push_back(p);
      p = p * FieldElement::theta(K);
    }
    auto f = norm_form(K, basis);
    CHECK(f.m == K->degree());
    const auto ms = monomials(f.n, f.m);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Rational> z;
      FieldElement elt = FieldElement::from_rational(K, 0);
      for (int k = 0; k < f.n; ++k) {
        z.push_back(c(rng));
        elt += FieldElement::from_rational(K, z.back()) * basis[static_cast<std::size_t>(k)];
      }
      Rational val = 0;
      for (std::size_t i = 0; i < ms.size(); ++i) {
        Rational term = f.expansion[0][i].exact->coords()[0];
        for (std::size_t k = 0; k < z.size(); ++k) term *= rpow(z[k], ms[i][k]);
        val += term;
      }
      CHECK(val == field_norm(elt));
      // the product of the linear factors agrees numerically
      std::vector<FieldElement> zf;
      for (const auto& x : z) zf.push_back(FieldElement::from_rational(f.field, x));
      CHECK(abs(evaluate(f, zf)[0].approx.re - to_real(val)) < Real("1e-40") * (1 + abs(to_real(val))));
    }
    for (std::size_t i = 0; i < ms.size(); ++i) {
      CHECK(abs(f.expansion[0][i].approx.re - to_real(f.expansion[0][i].exact->coords()[0])) < Real("1e-40"));
    }
  }
  auto K = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  const auto s2 = FieldElement::theta(K);
  CHECK_THROWS_AS(norm_form_coefficients(K, {s2, s2 * FieldElement::from_rational(K, 3)}), Error);
  CHECK_THROWS_AS(norm_form_coefficients(K, {s2}), Error);
}

TEST_CASE("rational reconstruction") {
  auto Q = rationals();
  auto S = archimedean_places(Q);
  const Real pi_ = pi();
  auto pif = make_form(Q, S, {{{num(pi_), num(-pi_)}, {num(Real(1)), num(Real(1))}}});
  auto r = rationality_reconstruct(pif);
  REQUIRE(r.status == ReconstructionStatus::Reconstructed);
  CHECK(r.g[0] == FieldElement::from_rational(Q, 1));
  CHECK(r.g[1] == FieldElement::from_rational(Q, 0));
  CHECK(r.g[2] == FieldElement::from_rational(Q, -1));
  CHECK(abs(r.alpha[0].approx.re - pi_) < Real("1e-50"));

  auto F = create_field({BigInt(-2), BigInt(0), BigInt(1)});
  auto two = make_form(Q, S, {{{surd(F, 0, 1), surd(F, 0, 1)}, {surd(F, 0, 1), surd(F, 0, -1)}}});
  auto r2 = rationality_reconstruct(two);
  REQUIRE(r2.status == ReconstructionStatus::Reconstructed);
  CHECK(r2.g[0] == FieldElement::from_rational(Q, 1));
  CHECK(r2.g[2] == FieldElement::from_rational(Q, -1));
  CHECK(*r2.alpha[0].exact == FieldElement::from_rational(F, 2));

  auto r3 = rationality_reconstruct(sqrt2_form());
  CHECK(r3.status == ReconstructionStatus::NoRationalReconstruction);
  CHECK(!r3.evidence.empty());
  // the same form with numeric coefficients fails through continued fractions
  auto f = sqrt2_form();
  for (auto& l : f.factors[0]) {
    for (auto& c : l) c.exact.reset();
  }
  auto numeric = make_form(Q, S, f.factors);
  CHECK(rationality_reconstruct(numeric).status == ReconstructionStatus::NoRationalReconstruction);

  // a ratio confirmed to 25 digits only
  auto near = make_form(Q, S, {{{num(Real(1)), num(Real(0))}, {num(Real(1) / 3 + Real("1e-25")), num(Real(1))}}});
  CHECK(rationality_reconstruct(near).status == ReconstructionStatus::Inconclusive);

  // S = {∞, 2}: the finite place must carry the same rational form
  auto S2 = S;
  for (auto& v : finite_places(Q, 2)) S2.push_back(v);
  std::vector<LinearForm> arch{{num(Real(3) * pi_), num(Real(0))}, {num(Real(1)), num(Real(2))}};
  std::vector<LinearForm> fin{{rat(Q, 4), rat(Q, 0)}, {rat(Q, 1), rat(Q, 2)}};
  auto both = rationality_reconstruct(make_form(Q, S2, {arch, fin}));
  REQUIRE(both.status == ReconstructionStatus::Reconstructed);
  CHECK(*both.alpha[1].exact == FieldElement::from_rational(Q, 4));
  std::vector<LinearForm> other{{rat(Q, 4), rat(Q, 0)}, {rat(Q, 1), rat(Q, 3)}};
  CHECK(rationality_reconstruct(make_form(Q, S2, {arch, other})).status ==
        ReconstructionStatus::NoRationalReconstruction);
}

TEST_CASE("reconstruction round trip") {
  auto Q = rationals();
  auto S = archimedean_places(Q);
  for (auto& v : finite_places(Q, 3)) S.push_back(v);
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> c(-9, 9), deg(2, 3);
  std::uniform_real_distribution<double> mag(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = deg(rng);
    std::vector<std::vector<Rational>> rows;
    for (;;) {
      rows.assign(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m)));
      for (auto& r : rows) {
        for (auto& x : r) x = c(rng);
      }
      try {
        rational_form(rows);
        break;
      } catch (const Error&) {
      }
    }
    auto exact = rational_form(rows);
    // primitive normalization of the exact product
    std::vector<Rational> g;
    for (const auto& x : exact.expansion[0]) g.push_back(x.exact->coords()[0]);
    BigInt content = 0;
    for (const auto& x : g) content = gcd(content, num(x));
    Rational sgn = 1;
    for (const auto& x : g) {
      if (x != 0) {
        sgn = x < 0 ? -1 : 1;
        break;
      }
    }
    for (auto& x : g) x = x / Rational(content) * sgn;

    const Real alpha = pow(Real(10), Real(mag(rng)));
    std::vector<LinearForm> arch, fin;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      arch.emplace_back();
      fin.emplace_back();
      for (const auto& x : rows[i]) {
        arch.back().push_back(num(i == 0 ? alpha * to_real(x) : to_real(x)));
        fin.back().push_back(rat(Q, i == 0 ? 2 * x : x));
      }
    }
    auto res = rationality_reconstruct(make_form(Q, S, {arch, fin}));
    REQUIRE(res.status == ReconstructionStatus::Reconstructed);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(res.g[i].coords()[0] == g[i]);
    // f = α g with g the primitive form, so α = α_input · content · sign
    const Real want = alpha * Real(content) * to_real(sgn);
    CHECK(abs(res.alpha[0].approx.re - want) <= Real("1e-30") * abs(want));
    CHECK(*res.alpha[1].exact == FieldElement::from_rational(Q, 2 * Rational(content) * sgn));
  }
}

TEST_CASE("littlewood scan") {
  RealSpec half{Real("0.5"), Rational(1, 2)};
  RealSpec r2{sqrt(Real(2)), std::nullopt}, r3{sqrt(Real(3)), std::nullopt};
  auto a = littlewood_scan(half, r2, 10);
  CHECK(a.min_value == 0);
  CHECK(a.argmin == 2);
  auto third = littlewood_scan({Real(1) / 3, Rational(1, 3)}, r2, 50);
  CHECK(third.min_value == 0);
  CHECK(third.argmin == 3);

  auto s = littlewood_scan(r2, r2, 1000);
  auto ref = littlewood_reference(r2, r2, 1000);
  REQUIRE(s.records.size() == ref.records.size());
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    CHECK(s.records[i].n == ref.records[i].n);
    CHECK(abs(s.records[i].value - ref.records[i].value) < Real("1e-50"));
  }
  // double-precision oracle for the minimiser
  double best = 1e9;
  long long arg = 0;
  for (long long n = 1; n <= 1000; ++n) {
    const double t = n * std::sqrt(2.0);
    const double d = std::abs(t - std::round(t));
    if (n * d * d < best) {
      best = n * d * d;
      arg = n;
    }
  }
  CHECK(s.argmin == arg);
  CHECK(std::abs(s.min_value.convert_to<double>() - best) < 1e-9);

  auto big = littlewood_scan(r2, r3, 100000);
  CHECK(big.min_value > 0);
  for (std::size_t i = 1; i < big.records.size(); ++i) {
    CHECK(big.records[i].value < big.records[i - 1].value);
    CHECK(big.records[i].n > big.records[i - 1].n);
  }
  auto serial = littlewood_scan(r2, r3, 3000000, Execution::Serial);
  auto par = littlewood_scan(r2, r3, 3000000, Execution::Parallel);
  REQUIRE(serial.records.size() == par.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) CHECK(serial.records[i].n == par.records[i].n);
  CHECK_THROWS_AS(littlewood_scan(r2, r3, 0), Error);
}
