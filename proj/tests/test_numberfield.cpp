#include "doctest.h"

#include "slab/error.hpp"
#include "slab/numberfield.hpp"

#include <random>

using namespace slab;

namespace {

FieldPtr gaussian() { return create_field({BigInt(1), BigInt(0), BigInt(1)}); }
FieldPtr sqrt2() { return create_field({BigInt(-2), BigInt(0), BigInt(1)}); }
FieldPtr golden() { return create_field({BigInt(-1), BigInt(-1), BigInt(1)}); }
FieldPtr rationals() { return create_field({BigInt(0), BigInt(1)}); }

FieldElement el(const FieldPtr& k, std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return {k, v};
}

// resultant-free oracle: the norm of a + bθ in a quadratic field x^2 + px + q
// is a^2 - p a b + q b^2
Rational quadratic_norm(const FieldPtr& k, const Rational& a, const Rational& b) {
  const auto& m = k->min_poly();
  return a * a - m[1] * a * b + m[0] * b * b;
}

FieldElement random_element(const FieldPtr& k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-30, 30), dn(1, 12);
  std::vector<Rational> c;
  for (int i = 0; i < k->degree(); ++i) c.emplace_back(coef(rng), dn(rng));
  FieldElement x(k, c);
  if (x.is_zero()) return FieldElement::from_rational(k, Rational(1));
  return x;
}

}  // namespace

TEST_CASE("create_field: degree one, discriminants, errors") {
  auto q = create_field({BigInt(1)});
  CHECK(q->degree() == 1);
  CHECK(q->real_places() == 1);
  CHECK(gaussian()->discriminant() == -4);
  CHECK(golden()->discriminant() == 5);
  CHECK(sqrt2()->discriminant() == 8);

  CHECK_THROWS_AS(create_field({BigInt(1), BigInt(2)}), Error);  // x·2 + 1 not monic
  try {
    create_field({BigInt(1), BigInt(0), BigInt(2)});
    FAIL("expected NotMonic");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotMonic);
  }
  try {
    create_field({BigInt(-1), BigInt(0), BigInt(1)});  // (x-1)(x+1)
    FAIL("expected Reducible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Reducible);
  }
  try {
    create_field({BigInt(1), BigInt(0), BigInt(0), BigInt(0), BigInt(1)});  // x^4 + 1 is irreducible
  } catch (...) {
    FAIL("x^4+1 is irreducible");
  }
  try {
    // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2); every pattern test passes it
    create_field({BigInt(4), BigInt(0), BigInt(0), BigInt(0), BigInt(1)});
    FAIL("expected Reducible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Reducible);
  }
}

TEST_CASE("archimedean places") {
  auto gi = archimedean_places(gaussian());
  REQUIRE(gi.size() == 1);
  CHECK(gi[0].kind == PlaceKind::Complex);
  CHECK(abs(gi[0].root.im - 1) < Real("1e-50"));

  auto s2 = archimedean_places(sqrt2());
  REQUIRE(s2.size() == 2);
  CHECK(abs(s2[0].root.re + sqrt(Real(2))) < Real("1e-50"));
  CHECK(abs(s2[1].root.re - sqrt(Real(2))) < Real("1e-50"));
  CHECK(s2[0].iso_lo < s2[0].iso_hi);

  auto q = archimedean_places(rationals());
  REQUIRE(q.size() == 1);
  CHECK(q[0].label() == "inf");

  auto cubic = create_field({BigInt(-2), BigInt(0), BigInt(0), BigInt(1)});
  auto pl = archimedean_places(cubic);
  int real = 0, cplx = 0;
  for (auto& v : pl) (v.kind == PlaceKind::Real ? real : cplx)++;
  CHECK(real == 1);
  CHECK(cplx == 1);
}

TEST_CASE("finite places: splitting, inertia, ramification") {
  auto k = gaussian();
  auto p5 = finite_places(k, 5);
  REQUIRE(p5.size() == 2);
  // factors x + 2 and x + 3 (= x - 2) mod 5, sorted by constant term
  CHECK(mod(p5[0].factor[0], BigInt(5)) == 2);
  CHECK(mod(p5[1].factor[0], BigInt(5)) == 3);
  for (auto& v : p5) {
    CHECK(v.residue_degree == 1);
    // the lift is an exact root of x^2 + 1 modulo 5^30
    BigInt r = -v.factor[0];
    CHECK(mod(r * r + 1, v.modulus()) == 0);
  }
  auto p3 = finite_places(k, 3);
  REQUIRE(p3.size() == 1);
  CHECK(p3[0].residue_degree == 2);
  CHECK(p3[0].label() == "3");
  try {
    finite_places(k, 2);
    FAIL("2 ramifies in Q(i)");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RamifiedOrBadPrime);
  }
  // degree identity over a batch of primes
  auto cubic = create_field({BigInt(-2), BigInt(0), BigInt(0), BigInt(1)});
  for (std::int64_t p : {5, 7, 11, 13, 31, 43}) {
    auto places = finite_places(cubic, p);
    int sum = 0;
    for (auto& v : places) sum += v.residue_degree * v.ramification;
    CHECK(sum == 3);
  }
}

TEST_CASE("local_abs fixtures") {
  auto k = gaussian();
  auto p5 = finite_places(k, 5);
  // place 0 has factor ≡ x + 2, i.e. i ↦ -2 (mod 5): 2 + i ↦ 0
  auto z = el(k, {2, 1});
  CHECK(local_abs(z, p5[0]).exponent == 1);
  CHECK(abs(local_abs(z, p5[0]).value - Real(1) / 5) < Real("1e-60"));
  CHECK(local_abs(z, p5[1]).exponent == 0);

  auto arch = archimedean_places(k);
  CHECK(abs(local_abs(el(k, {3, 4}), arch[0]).value - 25) < Real("1e-55"));

  auto p3 = finite_places(k, 3);
  CHECK(local_abs(el(k, {1, 1}), p3[0]).exponent == 0);
  CHECK(local_abs(el(k, {3, 0}), p3[0]).exponent == 2);  // |3|_v = 3^-2 at the inert place
  CHECK(local_abs(FieldElement::from_rational(k, Rational(0)), p3[0]).value == 0);
  CHECK(local_abs(FieldElement::from_rational(k, Rational(1, 25)), p5[1]).exponent == -2);
}

TEST_CASE("local_abs doubles precision when the valuation is deep") {
  auto q = rationals();
  auto p2 = finite_places(q, 2, 4);
  auto x = FieldElement::from_rational(q, Rational(ipow(BigInt(2), 10) * 3));
  CHECK(local_abs(x, p2[0]).exponent == 10);
  auto huge = FieldElement::from_rational(q, Rational(ipow(BigInt(2), 600)));
  try {
    local_abs(huge, p2[0]);
    FAIL("expected PrecisionExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExhausted);
  }
}

TEST_CASE("field_norm") {
  CHECK(field_norm(FieldElement::from_rational(gaussian(), Rational(1))) == 1);
  CHECK(field_norm(el(gaussian(), {2, 1})) == 5);
  CHECK(field_norm(el(sqrt2(), {1, 1})) == -1);
  CHECK(field_norm(FieldElement::from_rational(rationals(), Rational(-7, 3))) == Rational(-7, 3));
  std::mt19937_64 rng(7);
  for (auto k : {gaussian(), sqrt2(), golden()}) {
    for (int i = 0; i < 50; ++i) {
      auto x = random_element(k, rng);
      CHECK(field_norm(x) == quadratic_norm(k, x.coords()[0], x.coords()[1]));
    }
  }
}

TEST_CASE("arithmetic: inverse and powers") {
  auto k = golden();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto x = random_element(k, rng);
    CHECK(x * x.inverse() == FieldElement::from_rational(k, Rational(1)));
    CHECK(x.pow(3) * x.pow(-2) == x);
  }
}

TEST_CASE("property: multiplicativity of local_abs and route agreement") {
  std::mt19937_64 rng(11);
  auto cubic = create_field({BigInt(-2), BigInt(0), BigInt(0), BigInt(1)});
  for (auto k : {gaussian(), sqrt2(), cubic}) {
    std::vector<Place> places = archimedean_places(k);
    for (std::int64_t p : {5, 7, 13}) {
      for (auto& v : finite_places(k, p)) places.push_back(v);
    }
    for (const auto& v : places) {
      for (int i = 0; i < 100; ++i) {
        auto a = random_element(k, rng), b = random_element(k, rng);
        auto la = local_abs(a, v), lb = local_abs(b, v), lab = local_abs(a * b, v);
        if (v.archimedean()) {
          CHECK(abs(lab.value - la.value * lb.value) / lab.value < Real("1e-10"));
        } else {
          CHECK(*lab.exponent == *la.exponent + *lb.exponent);
          CHECK(finite_exponent_by_reduction(a, v) == la.exponent);
        }
      }
    }
  }
}

TEST_CASE("property: norm consistency |N(a)|_p = prod over v|p of |a|_v") {
  std::mt19937_64 rng(5);
  auto cubic = create_field({BigInt(-2), BigInt(0), BigInt(0), BigInt(1)});
  for (auto k : {gaussian(), golden(), cubic}) {
    for (std::int64_t p : {3, 5, 11, 29}) {
      std::vector<Place> above;
      try {
        above = finite_places(k, p);
      } catch (const Error&) {
        continue;
      }
      for (int i = 0; i < 100; ++i) {
        auto a = random_element(k, rng);
        int sum = 0;
        for (auto& v : above) sum += *local_abs(a, v).exponent;
        CHECK(sum == valuation(field_norm(a), BigInt(p)));
      }
    }
  }
}

TEST_CASE("s_unit_group fixtures") {
  auto q = rationals();
  std::vector<Place> S = archimedean_places(q);
  S.push_back(finite_places(q, 2)[0]);
  auto g = s_unit_group(q, S);
  CHECK(g.rank == 1);
  REQUIRE(g.generators.size() == 1);
  CHECK(g.generators[0] == FieldElement::from_rational(q, Rational(2)));
  CHECK(g.torsion_generator == FieldElement::from_rational(q, Rational(-1)));

  auto k = sqrt2();
  auto gs = s_unit_group(k, archimedean_places(k));
  CHECK(gs.rank == 1);
  REQUIRE(gs.generators.size() == 1);
  CHECK(gs.generators[0] == el(k, {1, 1}));

  auto phi = golden();
  auto gp = s_unit_group(phi, archimedean_places(phi));
  CHECK(gp.generators[0] == el(phi, {0, 1}));

  auto gi = gaussian();
  auto gg = s_unit_group(gi, archimedean_places(gi));
  CHECK(gg.rank == 0);
  CHECK(gg.generators.empty());
  CHECK(gg.torsion_order == 4);
  CHECK(field_norm(gg.torsion_generator) == 1);

  // Q(i) with both places above 5: rank 2, generators supported at 5 only
  std::vector<Place> S5 = archimedean_places(gi);
  for (auto& v : finite_places(gi, 5)) S5.push_back(v);
  auto g5 = s_unit_group(gi, S5);
  CHECK(g5.rank == 2);
  CHECK(g5.generators.size() == 2);

  auto cubic = create_field({BigInt(-2), BigInt(0), BigInt(0), BigInt(1)});
  try {
    s_unit_group(cubic, archimedean_places(cubic));
    FAIL("expected UnsupportedFieldWithoutConfig");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFieldWithoutConfig);
  }
  // cube root of 2: 1 + θ + θ^2 is a unit (norm 1)
  auto u = el(cubic, {1, 1, 1});
  CHECK(field_norm(u) == 1);
  auto gc = s_unit_group(cubic, archimedean_places(cubic), {u});
  CHECK(gc.rank == 1);
  try {
    s_unit_group(cubic, archimedean_places(cubic), {el(cubic, {3, 0, 0})});
    FAIL("expected GeneratorInvariantViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GeneratorInvariantViolated);
  }
}

TEST_CASE("property: product formula on S-unit power products") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> ex(-3, 3);
  auto gi = gaussian();
  std::vector<Place> S = archimedean_places(gi);
  for (auto& v : finite_places(gi, 5)) S.push_back(v);
  auto g = s_unit_group(gi, S);
  for (int i = 0; i < 100; ++i) {
    auto u = g.torsion_generator.pow(ex(rng));
    for (auto& gen : g.generators) u *= gen.pow(ex(rng));
    auto chk = product_formula(u, S);
    CHECK(chk.exact_at_finite);
    CHECK(chk.deviation() < Real("1e-10"));
  }
}
