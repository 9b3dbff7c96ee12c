#include "slab/dynamics.hpp"
#include "slab/error.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace slab;

namespace {

FieldPtr rationals() { return create_field({BigInt(0), BigInt(1)}); }

std::vector<Place> places_of(const FieldPtr& k, const std::vector<std::int64_t>& primes) {
  auto S = archimedean_places(k);
  for (auto p : primes) {
    for (auto& v : finite_places(k, p)) S.push_back(v);
  }
  return S;
}

FieldElement q(const FieldPtr& k, const Rational& r) { return FieldElement::from_rational(k, r); }

std::vector<std::vector<FieldElement>> rational_matrix(const FieldPtr& k, std::vector<std::vector<Rational>> m) {
  std::vector<std::vector<FieldElement>> out;
  for (auto& row : m) {
    out.emplace_back();
    for (auto& x : row) out.back().push_back(q(k, x));
  }
  return out;
}

OrbitPoint anisotropic(const FieldPtr& k) {
  const Real s = sqrt(Real(2)), c = 1 / sqrt(2 * s);
  return {make_lattice(k, archimedean_places(k),
                       {numeric_matrix({{Complex(c), Complex(s * c)}, {Complex(-c), Complex(s * c)}})}),
          Provenance::Explicit};
}

Real entry(const OrbitPoint& x, std::size_t v, std::size_t i, std::size_t j) { return x.lattice.g[v][i][j].approx.re; }

// Random element of SL2(Z[1/2]) as a product of elementary matrices.
std::vector<std::vector<Rational>> random_sl2(std::mt19937& rng) {
  std::uniform_int_distribution<int> a(-3, 3), e(0, 2);
  std::vector<std::vector<Rational>> m{{1, 0}, {0, 1}};
  for (int r = 0; r < 3; ++r) {
    const Rational x = Rational(a(rng)) / (1 << e(rng));
    // upper then lower elementary factor
    m = {{m[0][0] + x * m[1][0], m[0][1] + x * m[1][1]}, {m[1][0], m[1][1]}};
    const Rational y = Rational(a(rng)) / (1 << e(rng));
    m = {{m[0][0], m[0][1]}, {m[1][0] + y * m[0][0], m[1][1] + y * m[0][1]}};
  }
  return m;
}

}  // namespace

TEST_CASE("torus action") {
  auto k = rationals();
  auto S = places_of(k, {2});
  auto x = identity_point(k, S, 2);

  TorusElement one{{{Real(0), Real(0)}, {Real(0), Real(0)}}};
  auto same = act(one, x);
  CHECK(same.provenance == Provenance::Identity);
  CHECK(entry(same, 0, 0, 0) == 1);
  CHECK(*same.lattice.g[1][1][1].exact == q(k, 1));

  auto R = archimedean_places(k);
  auto y = act(torus_from_exponents(R, {{1, -1}}, {Real(1)}), identity_point(k, R, 2));
  CHECK(y.provenance == Provenance::Explicit);
  CHECK(abs(entry(y, 0, 0, 0) - exp(Real(1))) < Real("1e-50"));
  CHECK(abs(entry(y, 0, 1, 1) - exp(Real(-1))) < Real("1e-50"));
  CHECK(entry(y, 0, 0, 1) == 0);

  // finite-place steps keep exactness
  auto z = act(torus_from_exponents(S, {{0, 0}, {1, -1}}, {Real(0), Real(3)}), x);
  CHECK(z.provenance == Provenance::Identity);
  CHECK(*z.lattice.g[1][0][0].exact == q(k, 8));
  CHECK_THROWS_AS(torus_from_exponents(S, {{1, -1}, {1, -1}}, {Real(0), Real("0.5")}), Error);
  CHECK_THROWS_AS(torus_from_exponents(S, {{1, 0}, {1, -1}}, {Real(0), Real(1)}), Error);
  CHECK_THROWS_AS(act(torus_from_exponents(R, {{1, -1}}, {Real(1)}), x), Error);

  // t1·(t2·x) = (t1 t2)·x
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> s(-2, 2);
  std::uniform_int_distribution<int> kk(-3, 3);
  auto p = rational_point(k, S, rational_matrix(k, {{3, 2}, {1, 1}}));
  for (int trial = 0; trial < 20; ++trial) {
    auto t1 = torus_from_exponents(S, {{2, -2}, {1, -1}}, {Real(s(rng)), Real(kk(rng))});
    auto t2 = torus_from_exponents(S, {{1, -1}, {-1, 1}}, {Real(s(rng)), Real(kk(rng))});
    auto a = act(t1, act(t2, p));
    auto b = act(t1 * t2, p);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(abs(entry(a, 0, i, j) - entry(b, 0, i, j)) < Real("1e-10"));
        CHECK(*a.lattice.g[1][i][j].exact == *b.lattice.g[1][i][j].exact);
      }
    }
  }
}

TEST_CASE("trajectory fixtures") {
  auto k = rationals();
  auto R = archimedean_places(k);
  auto x = identity_point(k, R, 2);
  RaySchedule ray{default_exponents(1, 2), {}};
  for (int s = 0; s <= 10; ++s) ray.steps.push_back({Real(s), {Real(s)}});
  auto rep = trajectory(x, ray, {50, 0});
  REQUIRE(rep.rows.size() == 11);
  for (int s = 0; s <= 10; ++s) {
    CHECK(abs(rep.rows[static_cast<std::size_t>(s)].min_content - exp(Real(-s))) < Real("1e-12"));
  }
  CHECK(rep.rows[3].witness == "(0;1)");
  CHECK(classify_ray(rep) == "diverging-trend");

  RaySchedule bad = ray;
  bad.steps[2].param = Real(1);
  CHECK_THROWS_AS(trajectory(x, bad, {50, 0}), Error);

  // two places along s = k ln 2
  auto S = places_of(k, {2});
  auto both = trajectory(identity_point(k, S, 2), straight_ray(S, 2, {1, 1}, 20), {50, 10});
  for (const auto& row : both.rows) CHECK(abs(row.min_content - 1) < Real("1e-6"));
  CHECK(classify_ray(both) == "bounded-below");

  // |x² - 2y²| >= 1 and a² + b² >= 2|ab| = |x² - 2y²|/√2 give a floor of 2^{-1/4}
  auto an = anisotropic(k);
  RaySchedule flow{default_exponents(1, 2), {}};
  for (int i = 0; i <= 50; ++i) flow.steps.push_back({Real(i) / 5, {Real(i) / 5}});
  const Real floor = pow(Real(2), Real("-0.25"));
  int violations = 0;
  Real lowest = 10;
  for (const auto& row : trajectory(an, flow, {50, 0}).rows) {
    violations += row.min_supnorm < floor - Real("1e-12");
    if (row.min_supnorm < lowest) lowest = row.min_supnorm;
  }
  CHECK(abs(lowest - floor) < Real("1e-12"));
  CHECK(violations == 0);
}

TEST_CASE("classification") {
  std::vector<Real> decay, flat, dip, wobble;
  for (int i = 0; i < 12; ++i) {
    decay.push_back(exp(Real(-i)));
    flat.push_back(Real(1));
    dip.push_back(i == 5 ? Real("1e-4") : Real(1));
    wobble.push_back(i % 2 ? Real("0.05") : Real(1));
  }
  CHECK(classify_ray(decay) == "diverging-trend");
  CHECK(classify_ray(flat) == "bounded-below");
  CHECK(classify_ray(dip) == "recurrent");
  CHECK(classify_ray(wobble) == "inconclusive");
  CHECK_THROWS_AS(classify_ray(std::vector<Real>(9, Real(1))), Error);
  try {
    classify_ray(std::vector<Real>(3, Real(1)));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewSteps);
  }
}

TEST_CASE("divergence surveys") {
  auto k = rationals();
  auto S = places_of(k, {2});
  const HeightWindow w{50, 10};
  auto x = identity_point(k, S, 2);

  for (std::size_t v : {0, 1}) {
    auto sv = divergence_survey(x, {v}, default_grid(S, {v}, 20), w);
    CHECK(sv.expected == "divergent");
    CHECK(sv.verdict == "consistent");
    for (const auto& r : sv.rays) CHECK(r.classification == "diverging-trend");
  }
  auto full = divergence_survey(x, {0, 1}, default_grid(S, {0, 1}, 20), w);
  CHECK(full.expected == "non-divergent");
  CHECK(full.verdict == "consistent");
  bool diagonal = false;
  for (const auto& r : full.rays) {
    if (r.name != "(+1,+1)") continue;
    diagonal = true;
    CHECK(r.classification == "bounded-below");
    for (auto c : r.cells) CHECK(abs(full.cells[c].systole.min_content - 1) < Real("1e-6"));
  }
  CHECK(diagonal);

  // serial and parallel surveys agree cell for cell
  auto grid = default_grid(S, {0, 1}, 10);
  auto a = divergence_survey(x, {0, 1}, grid, {8, 3}, std::nullopt, Execution::Serial);
  auto b = divergence_survey(x, {0, 1}, grid, {8, 3}, std::nullopt, Execution::Parallel);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].witness == b.cells[i].witness);
    CHECK(a.cells[i].systole.min_content == b.cells[i].systole.min_content);
  }

  // a forced expectation that the data contradicts is flagged
  auto forced = divergence_survey(x, {0, 1}, default_grid(S, {0, 1}, 10), {20, 5}, std::string("divergent"));
  CHECK(forced.verdict == "ANOMALY");

  // one place on Q with S = {∞}
  auto R = archimedean_places(k);
  auto sv = divergence_survey(identity_point(k, R, 2), {0}, default_grid(R, {0}, 12), {50, 0});
  CHECK(sv.verdict == "consistent");
}

TEST_CASE("locally divergent point") {
  auto k = rationals();
  auto S = places_of(k, {2});
  auto x = locally_divergent_example(k, S);
  CHECK(*x.lattice.g[0][0][1].exact == q(k, 1));
  CHECK(*x.lattice.g[1][0][1].exact == q(k, 0));
  CHECK_THROWS_AS(locally_divergent_example(k, archimedean_places(k)), Error);

  const HeightWindow w{50, 10};
  for (std::size_t v : {0, 1}) {
    auto sv = divergence_survey(x, {v}, default_grid(S, {v}, 20), w);
    for (const auto& r : sv.rays) CHECK(r.classification == "diverging-trend");
  }
  auto full = divergence_survey(x, {0, 1}, default_grid(S, {0, 1}, 20), w);
  bool recurrent = false;
  for (const auto& r : full.rays) recurrent = recurrent || r.classification == "recurrent";
  CHECK(recurrent);
  CHECK(full.verdict == "consistent");
}

TEST_CASE("rational points are never divergent under the full torus") {
  auto k = rationals();
  auto S = places_of(k, {2});
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = rational_point(k, S, rational_matrix(k, random_sl2(rng)));
    auto sv = divergence_survey(x, {0, 1}, default_grid(S, {0, 1}, 12), {30, 6});
    CAPTURE(trial);
    CHECK(sv.verdict == "consistent");
  }
}

TEST_CASE("equivariance and invariance") {
  auto k = rationals();
  auto S = places_of(k, {2});
  auto x = rational_point(k, S, rational_matrix(k, {{2, 1}, {1, 1}}));
  const Real s = Real("1.3");
  auto y = act(torus_from_exponents(S, {{1, -1}, {1, -1}}, {s, Real(2)}), x);

  // the same lattice built by hand from t·g
  const Real e = exp(s);
  auto direct = make_lattice(
      k, S,
      {numeric_matrix({{Complex(2 * e), Complex(e)}, {Complex(1 / e), Complex(1 / e)}}),
       exact_matrix(S[1], rational_matrix(k, {{8, 4}, {Rational(1, 4), Rational(1, 4)}}))});
  const HeightWindow w{20, 4};
  auto a = systole(y.lattice, w), b = systole(direct, w);
  CHECK(a.content_witness == b.content_witness);
  CHECK(abs(a.min_content - b.min_content) < Real("1e-30"));

  // g·(1 1/2; 0 1) represents the same coset
  auto xg = rational_point(k, S, rational_matrix(k, {{Rational(2), Rational(2)}, {Rational(1), Rational(3, 2)}}));
  auto yg = act(torus_from_exponents(S, {{1, -1}, {1, -1}}, {s, Real(2)}), xg);
  CHECK(abs(systole(yg.lattice, w).min_content - a.min_content) < Real("1e-30"));
}

TEST_CASE("expanding elements") {
  auto k = rationals();
  auto inf = archimedean_places(k).front();
  auto two = finite_places(k, 2).front();

  auto t = expanding_element({{0, 1}}, 2, Rational(2), inf);
  CHECK(t.exponents == std::vector<Rational>{1, -1});
  CHECK(t.base == 2);
  CHECK(verify_expansion(t, {{0, 1}}));

  std::vector<std::pair<int, int>> tri{{0, 1}, {1, 2}, {0, 2}};
  auto t3 = expanding_element(tri, 3, Rational(3), inf);
  CHECK(t3.exponents == std::vector<Rational>{2, 0, -2});
  CHECK(verify_expansion(t3, tri));

  auto tp = expanding_element({{0, 1}}, 2, Rational(5), two);
  CHECK(tp.exponents == std::vector<Rational>{-2, 2});
  CHECK(verify_expansion(tp, {{0, 1}}));

  CHECK_THROWS_AS(expanding_element({{0, 1}, {1, 0}}, 2, Rational(2), inf), Error);
  CHECK_THROWS_AS(expanding_element({{0, 1}, {1, 2}, {2, 0}}, 3, Rational(2), inf), Error);
  CHECK_THROWS_AS(expanding_element({{0, 1}}, 2, Rational(1), inf), Error);
  CHECK_FALSE(verify_expansion(t, {{1, 0}}));

  // ‖Ad(t)x‖ >= τ‖x‖ for x in the span, with |t_i/t_j|_v computed exactly
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> c(-9, 9);
  for (const auto& [el, pos] : std::vector<std::pair<ExpandingElement, std::vector<std::pair<int, int>>>>{
           {t, {{0, 1}}}, {t3, tri}, {tp, {{0, 1}}}}) {
    for (int trial = 0; trial < 50; ++trial) {
      Rational before = 0, after = 0;
      for (auto [i, j] : pos) {
        const Rational x = c(rng);
        const Rational d = el.exponents[static_cast<std::size_t>(i)] - el.exponents[static_cast<std::size_t>(j)];
        // ratio τ^d at the real place, |2^d|_2 = 2^{-d} at the dyadic one
        const Rational ratio = el.place.archimedean() ? rpow(el.tau, num(d).convert_to<int>())
                                                      : rpow(Rational(2), -num(d).convert_to<int>());
        const Rational ax = x < 0 ? -x : x;
        before = std::max(before, ax);
        after = std::max(after, ratio * ax);
      }
      CHECK(after >= el.tau * before);
    }
  }
}
