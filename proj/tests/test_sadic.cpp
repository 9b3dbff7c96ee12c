#include "slab/error.hpp"
#include "slab/sadic.hpp"

#include "doctest.h"

#include <random>

using namespace slab;

namespace {

FieldPtr rationals() { return create_field({BigInt(0), BigInt(1)}); }
FieldPtr gaussian() { return create_field({BigInt(1), BigInt(0), BigInt(1)}); }
FieldPtr sqrt2() { return create_field({BigInt(-2), BigInt(0), BigInt(1)}); }

FieldElement q(const FieldPtr& k, const Rational& r) { return FieldElement::from_rational(k, r); }

std::vector<Place> places_of(const FieldPtr& k, const std::vector<std::int64_t>& primes) {
  auto S = archimedean_places(k);
  for (auto p : primes) {
    for (auto& v : finite_places(k, p)) S.push_back(v);
  }
  return S;
}

// Vector whose component at place v is the diagonal image of values[v].
SAdicVector from_components(const FieldPtr& k, const std::vector<Place>& S,
                            const std::vector<std::vector<FieldElement>>& values) {
  SAdicVector x{k, S, {}};
  for (std::size_t v = 0; v < S.size(); ++v) {
    x.components.push_back(diagonal_embedding(k, {S[v]}, values[v]).components[0]);
  }
  return x;
}

SAdicVector q_pair(const FieldPtr& k, const std::vector<Place>& S, Rational inf, Rational two) {
  return from_components(k, S, {{q(k, inf)}, {q(k, two)}});
}

bool close(const Real& a, const Real& b, const char* tol = "1e-20") { return abs(a - b) <= Real(tol); }

Rational random_nonzero(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> numd(-60, 60), dend(1, 40);
  int n = 0;
  while (n == 0) n = numd(rng);
  return Rational(n, dend(rng));
}

}  // namespace

TEST_CASE("sup norm and content fixtures") {
  auto k = rationals();
  auto S3 = places_of(k, {3});
  auto x = from_components(k, S3, {{q(k, 3), q(k, 4)}, {q(k, 2), q(k, 6)}});
  CHECK(close(sup_norm(x), 5));
  CHECK(close(content(x), 5));

  auto i = gaussian();
  auto Si = archimedean_places(i);
  auto z = diagonal_embedding(i, Si, {FieldElement(i, {Rational(3), Rational(4)})});
  CHECK(close(sup_norm(z), 25));

  auto S2 = places_of(k, {2});
  auto zero = diagonal_embedding(k, S2, {q(k, 0), q(k, 0)});
  CHECK(sup_norm(zero) == 0);
  CHECK(content(zero) == 0);
  CHECK(pseudoball_contains(Real(1), zero));

  auto x81 = q_pair(k, S2, 8, 1);
  CHECK(close(content(x81), 8));
  CHECK(close(content(scale(q(k, 2), x81)), 8));
  CHECK(close(sup_norm(scale(q(k, 2), x81)), 16));
  CHECK_FALSE(pseudoball_contains(Real(8), x81));
  CHECK(pseudoball_contains(Real("8.01"), x81));
  CHECK_THROWS_AS(pseudoball_contains(Real(0), x81), Error);
}

TEST_CASE("unit balancing fixtures") {
  auto k = rationals();
  auto S = places_of(k, {2});
  auto units = s_unit_group(k, S);
  auto x = q_pair(k, S, 8, 1);
  const Real a = 2 * sqrt(Real(2));

  auto r = unit_balance(x, {{a, a}}, units, 10);
  CHECK(r.xi == q(k, Rational(1, 4)));
  CHECK(close(r.achieved_ratio, sqrt(Real(2)), "1e-10"));
  auto y = scale(r.xi, x);
  CHECK(close(local_norm(S[0], y.components[0]).value, 2));
  CHECK(close(local_norm(S[1], y.components[1]).value, 4));

  // targets c^{1/m}: same ξ, both norms within a factor 2 of √8
  const Real root = sqrt(content(x));
  auto r3 = unit_balance(x, {{root, root}}, units, 10);
  CHECK(r3.xi == r.xi);
  for (std::size_t v = 0; v < 2; ++v) {
    Real n = local_norm(S[v], scale(r3.xi, x).components[v]).value;
    CHECK(n <= 2 * root);
    CHECK(n >= root / 2);
  }

  auto exact = q_pair(k, S, 2, Rational(1, 4));
  auto r1 = unit_balance(exact, {{Real(2), Real(4)}}, units, 10);
  CHECK(r1.xi == q(k, 1));
  CHECK(close(r1.achieved_ratio, 1));

  CHECK_THROWS_AS(unit_balance(exact, {{Real(1), Real(1)}}, units, 10), Error);
  try {
    unit_balance(q_pair(k, S, 0, 1), {{Real(1), Real(1)}}, units, 5);
    FAIL("expected ZeroComponent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroComponent);
  }
}

TEST_CASE("balancing constant") {
  auto k = rationals();
  auto S = places_of(k, {2});
  Real kappa = balancing_constant(k, S, s_unit_group(k, S));
  // covering radius log 2 / 2 plus the grid slack
  CHECK(kappa >= sqrt(Real(2)));
  CHECK(kappa < sqrt(Real(2)) * Real("1.01"));
  auto inf = archimedean_places(k);
  CHECK(balancing_constant(k, inf, s_unit_group(k, inf)) == 1);

  auto S23 = places_of(k, {2, 3});
  Real kappa23 = balancing_constant(k, S23, s_unit_group(k, S23));
  CHECK(kappa23 > 1);
  CHECK(kappa23 < 10);
}

TEST_CASE("content is invariant under S-units") {
  std::mt19937_64 rng(7);
  auto k = rationals();
  auto S = places_of(k, {2, 3});
  auto units = s_unit_group(k, S);
  auto r2 = sqrt2();
  auto S2 = places_of(r2, {7});
  auto units2 = s_unit_group(r2, S2);
  std::uniform_int_distribution<int> ed(-4, 4), nd(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const bool use_q = trial % 2 == 0;
    const auto& field = use_q ? k : r2;
    const auto& places = use_q ? S : S2;
    const auto& gens = use_q ? units : units2;
    FieldElement xi = q(field, 1);
    for (const auto& u : gens.generators) xi *= u.pow(ed(rng));
    std::vector<FieldElement> z;
    const int n = nd(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<Rational> c;
      for (int j = 0; j < field->degree(); ++j) c.push_back(random_nonzero(rng));
      z.emplace_back(field, c);
    }
    auto x = diagonal_embedding(field, places, z);
    Real c0 = content(x);
    REQUIRE(c0 > 0);
    CHECK(abs(content(scale(xi, x)) - c0) / c0 < Real("1e-9"));
  }
}

TEST_CASE("content versus sup norm") {
  std::mt19937_64 rng(11);
  auto k = rationals();
  auto S = places_of(k, {2, 5});
  const int m = static_cast<int>(S.size());
  for (int trial = 0; trial < 100; ++trial) {
    auto x = diagonal_embedding(k, S, {q(k, random_nonzero(rng)), q(k, random_nonzero(rng))});
    Real c = content(x), s = sup_norm(x);
    CHECK(c <= pow(s, m) * (1 + Real("1e-30")));
    bool equal = true;
    for (int v = 0; v < m; ++v) equal = equal && close(local_norm(S[v], x.components[v]).value, s);
    CHECK(equal == close(c, pow(s, m)));
  }
  // all local norms equal to 2: (2, 1/2) at (∞, 2) has norms 2 and 2
  auto S2 = places_of(k, {2});
  auto x = q_pair(k, S2, 2, Rational(1, 2));
  CHECK(close(content(x), pow(sup_norm(x), 2)));
}

TEST_CASE("unit balancing never exceeds the balancing constant") {
  std::mt19937_64 rng(3);
  auto k = rationals();
  auto S = places_of(k, {2});
  auto units = s_unit_group(k, S);
  const Real kappa = balancing_constant(k, S, units);
  std::uniform_real_distribution<double> split(-3.0, 3.0);
  std::uniform_int_distribution<int> nd(1, 3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<FieldElement> inf, two;
    const int n = nd(rng);
    for (int i = 0; i < n; ++i) {
      inf.push_back(q(k, random_nonzero(rng)));
      two.push_back(q(k, random_nonzero(rng)));
    }
    auto x = from_components(k, S, {inf, two});
    Real c = content(x);
    Real a0 = sqrt(c) * exp(Real(split(rng)));
    auto r = unit_balance(x, {{a0, c / a0}}, units, 20);
    CHECK(r.achieved_ratio <= kappa);
  }
}

TEST_CASE("json layout") {
  auto k = rationals();
  auto S = places_of(k, {2});
  auto j = to_json(diagonal_embedding(k, S, {q(k, Rational(3, 4))}));
  CHECK(j["inf"][0].get<double>() == doctest::Approx(0.75));
  CHECK(j["2"][0]["val"] == -2);
  CHECK(j["2"][0]["unit_digits"][0] == 1);
  CHECK(j["2"][0]["unit_digits"][1] == 1);
  CHECK(j["2"][0]["unit_digits"][2] == 0);

  auto i = gaussian();
  auto Si = places_of(i, {3});
  auto ji = to_json(diagonal_embedding(i, Si, {FieldElement(i, {Rational(3), Rational(4)})}));
  CHECK(ji["complex0"][0][1].get<double>() == doctest::Approx(4).epsilon(1e-12));
  CHECK(ji["3"][0]["unit_digits"].size() == 2);  // residue degree 2
}
