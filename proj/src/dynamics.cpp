#include "slab/dynamics.hpp"

#include "slab/error.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <sstream>

namespace slab {

namespace {

FieldElement field_int(const FieldPtr& field, std::int64_t c) {
  return FieldElement::from_rational(field, Rational(c));
}

std::vector<std::vector<FieldElement>> identity_entries(const FieldPtr& field, int n) {
  std::vector<std::vector<FieldElement>> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) id[static_cast<std::size_t>(i)].push_back(field_int(field, i == j ? 1 : 0));
  }
  return id;
}

bool is_integer(const Real& x) { return floor(x) == x; }

std::string sign_name(int s) { return s > 0 ? "+1" : (s < 0 ? "-1" : "0"); }

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Identity: return "identity";
    case Provenance::Rational: return "rational";
    case Provenance::Explicit: return "explicit";
  }
  return "explicit";
}

OrbitPoint identity_point(const FieldPtr& field, const std::vector<Place>& S, int n) {
  return {identity_lattice(field, S, n), Provenance::Identity};
}

OrbitPoint rational_point(const FieldPtr& field, const std::vector<Place>& S,
                          const std::vector<std::vector<FieldElement>>& q) {
  std::vector<LocalMatrix> g;
  for (const auto& v : S) g.push_back(exact_matrix(v, q));
  return {make_lattice(field, S, std::move(g)), Provenance::Rational};
}

TorusElement torus_from_exponents(const std::vector<Place>& S, const std::vector<std::vector<int>>& exponents,
                                  const std::vector<Real>& amounts) {
  if (exponents.size() != S.size() || amounts.size() != S.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one exponent vector and amount per place");
  }
  TorusElement t;
  for (std::size_t v = 0; v < S.size(); ++v) {
    int sum = 0;
    for (int c : exponents[v]) sum += c;
    if (sum != 0) throw Error(ErrorCode::InvalidArgument, "torus exponents must sum to zero");
    if (!S[v].archimedean() && !is_integer(amounts[v])) {
      throw Error(ErrorCode::InvalidArgument, "finite-place steps must be integers");
    }
    std::vector<Real> x;
    for (int c : exponents[v]) x.push_back(amounts[v] * c);
    t.log_diag.push_back(std::move(x));
  }
  return t;
}

TorusElement operator*(const TorusElement& a, const TorusElement& b) {
  if (a.log_diag.size() != b.log_diag.size()) throw Error(ErrorCode::ShapeMismatch, "torus elements differ in places");
  TorusElement out = a;
  for (std::size_t v = 0; v < a.log_diag.size(); ++v) {
    if (a.log_diag[v].size() != b.log_diag[v].size()) throw Error(ErrorCode::ShapeMismatch, "torus sizes differ");
    for (std::size_t i = 0; i < a.log_diag[v].size(); ++i) out.log_diag[v][i] += b.log_diag[v][i];
  }
  return out;
}

OrbitPoint act(const TorusElement& t, const OrbitPoint& x) {
  const SLattice& lat = x.lattice;
  if (t.log_diag.size() != lat.places.size()) throw Error(ErrorCode::ShapeMismatch, "torus and point differ in places");
  SLattice out = lat;
  bool exact = true;
  for (std::size_t v = 0; v < lat.places.size(); ++v) {
    const Place& pl = lat.places[v];
    if (t.log_diag[v].size() != static_cast<std::size_t>(lat.n)) {
      throw Error(ErrorCode::ShapeMismatch, "torus has wrong size");
    }
    for (std::size_t i = 0; i < t.log_diag[v].size(); ++i) {
      const Real& x_i = t.log_diag[v][i];
      if (x_i == 0) continue;
      if (pl.archimedean()) {
        exact = false;
        const Real e = exp(x_i);
        for (auto& s : out.g[v][i]) {
          s.approx = s.approx * Complex(e);
          s.exact.reset();
        }
      } else {
        const FieldElement pe = FieldElement::from_rational(lat.field, rpow(Rational(pl.p), x_i.convert_to<int>()));
        for (auto& s : out.g[v][i]) s.exact = pe * *s.exact;
      }
    }
  }
  for (const auto& m : lat.g) {
    for (const auto& row : m) {
      for (const auto& s : row) exact = exact && s.exact.has_value();
    }
  }
  return {std::move(out), exact ? x.provenance : Provenance::Explicit};
}

std::vector<std::vector<int>> default_exponents(std::size_t places, int n) {
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  c.front() = 1;
  c.back() = -1;
  return std::vector<std::vector<int>>(places, c);
}

Real archimedean_step(const std::vector<Place>& S) {
  auto primes = s_primes(S);
  return log(Real(primes.empty() ? 2 : primes.front()));
}

RaySchedule straight_ray(const std::vector<Place>& S, int n, const std::vector<int>& direction, int steps) {
  if (direction.size() != S.size()) throw Error(ErrorCode::ShapeMismatch, "one direction entry per place");
  RaySchedule ray{default_exponents(S.size(), n), {}};
  const Real arch = archimedean_step(S);
  for (int t = 0; t <= steps; ++t) {
    RayStep step{Real(t), {}};
    for (std::size_t v = 0; v < S.size(); ++v) {
      step.amounts.push_back(S[v].archimedean() ? arch * direction[v] * t : Real(direction[v] * t));
    }
    ray.steps.push_back(std::move(step));
  }
  return ray;
}

TrajectoryReport trajectory(const OrbitPoint& x, const RaySchedule& ray, const HeightWindow& w) {
  TrajectoryReport report;
  const auto primes = s_primes(x.lattice.places);
  const int d = x.lattice.field->degree();
  for (std::size_t i = 0; i < ray.steps.size(); ++i) {
    if (i > 0 && !(ray.steps[i].param > ray.steps[i - 1].param)) {
      throw Error(ErrorCode::InvalidArgument, "ray parameters must increase");
    }
    const auto& step = ray.steps[i];
    auto y = act(torus_from_exponents(x.lattice.places, ray.exponents, step.amounts), x);
    auto sys = systole(y.lattice, w);
    report.rows.push_back({step.param, step.amounts, sys.min_content, sys.min_supnorm,
                           format_point(sys.content_witness, x.lattice.n, d, primes)});
  }
  return report;
}

std::string classify_ray(const std::vector<Real>& v, const ClassifyThresholds& th) {
  if (v.size() < 10) throw Error(ErrorCode::TooFewSteps, "classification needs at least 10 steps");
  const Real high = th.high_fraction * v.front();
  const Real tol = Real("1e-9");
  bool tail_monotone = true;
  for (std::size_t i = v.size() / 2 + 1; i < v.size(); ++i) {
    tail_monotone = tail_monotone && v[i] <= v[i - 1] * (1 + tol);
  }
  if (tail_monotone && v.back() < th.low) return "diverging-trend";
  bool dipped = false;
  for (const auto& x : v) {
    if (dipped && x > high) return "recurrent";
    dipped = dipped || x < th.low;
  }
  if (*std::min_element(v.begin(), v.end()) > high) return "bounded-below";
  return "inconclusive";
}

std::string classify_ray(const TrajectoryReport& report, const ClassifyThresholds& th) {
  std::vector<Real> v;
  for (const auto& r : report.rows) v.push_back(r.min_content);
  return classify_ray(v, th);
}

std::vector<PlaceGrid> default_grid(const std::vector<Place>& S, const std::vector<std::size_t>& R, int steps) {
  const Real arch = archimedean_step(S);
  std::vector<PlaceGrid> out;
  for (auto v : R) {
    if (v >= S.size()) throw Error(ErrorCode::InvalidArgument, "active place out of range");
    PlaceGrid g{v, {}};
    for (int i = -steps; i <= steps; ++i) g.values.push_back(S[v].archimedean() ? arch * i : Real(i));
    out.push_back(std::move(g));
  }
  return out;
}

SurveyVerdict divergence_survey(const OrbitPoint& x, const std::vector<std::size_t>& R,
                                const std::vector<PlaceGrid>& grid, const HeightWindow& w,
                                const std::optional<std::string>& expected_override, Execution mode) {
  const auto& S = x.lattice.places;
  if (R.empty() || grid.size() != R.size()) throw Error(ErrorCode::ShapeMismatch, "one grid per active place");
  std::vector<std::size_t> origin;
  double cells = 1;
  for (std::size_t a = 0; a < R.size(); ++a) {
    if (grid[a].place != R[a]) throw Error(ErrorCode::ShapeMismatch, "grids must follow the active places");
    auto it = std::find(grid[a].values.begin(), grid[a].values.end(), Real(0));
    if (it == grid[a].values.end()) throw Error(ErrorCode::InvalidArgument, "every grid must contain 0");
    origin.push_back(static_cast<std::size_t>(it - grid[a].values.begin()));
    cells *= static_cast<double>(grid[a].values.size());
  }
  if (cells > 1e6) throw Error(ErrorCode::WindowTooLarge, "survey grid exceeds 10^6 cells");
  check_window(x.lattice.n * x.lattice.field->degree(), w, s_primes(S).size());

  SurveyVerdict out;
  // cells in grid order, the last active place varying fastest
  std::vector<std::size_t> idx(R.size(), 0);
  for (;;) {
    SurveyCell c;
    c.index = idx;
    c.amounts.assign(S.size(), Real(0));
    for (std::size_t a = 0; a < R.size(); ++a) c.amounts[R[a]] = grid[a].values[idx[a]];
    out.cells.push_back(std::move(c));
    std::size_t a = R.size();
    bool carried = true;
    while (carried && a > 0) {
      --a;
      carried = ++idx[a] == grid[a].values.size();
      if (carried) idx[a] = 0;
    }
    if (carried) break;
  }

  const auto exps = default_exponents(S.size(), x.lattice.n);
  const auto primes = s_primes(S);
  const int d = x.lattice.field->degree();
  std::exception_ptr failure;
  const auto count = static_cast<long long>(out.cells.size());
  auto work = [&](long long i, Execution inner) {
    auto& c = out.cells[static_cast<std::size_t>(i)];
    auto y = act(torus_from_exponents(S, exps, c.amounts), x);
    c.systole = systole(y.lattice, w, inner);
    c.witness = format_point(c.systole.content_witness, x.lattice.n, d, primes);
  };
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < count; ++i) {
      try {
        work(i, Execution::Serial);
      } catch (...) {
#pragma omp critical
        failure = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < count; ++i) work(i, Execution::Serial);
  }
  if (failure) std::rethrow_exception(failure);

  auto cell_at = [&](const std::vector<long long>& pos) -> std::optional<std::size_t> {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < R.size(); ++a) {
      if (pos[a] < 0 || pos[a] >= static_cast<long long>(grid[a].values.size())) return std::nullopt;
      flat = flat * grid[a].values.size() + static_cast<std::size_t>(pos[a]);
    }
    return flat;
  };
  std::vector<long long> o(origin.begin(), origin.end());

  // straight rays: every nonzero sign pattern
  std::vector<int> dir(R.size(), -1);
  for (;;) {
    if (std::any_of(dir.begin(), dir.end(), [](int s) { return s != 0; })) {
      SurveyRay ray;
      ray.name = "(";
      for (std::size_t a = 0; a < R.size(); ++a) ray.name += (a ? "," : "") + sign_name(dir[a]);
      ray.name += ")";
      for (long long t = 0;; ++t) {
        std::vector<long long> pos = o;
        for (std::size_t a = 0; a < R.size(); ++a) pos[a] += dir[a] * t;
        auto cell = cell_at(pos);
        if (!cell) break;
        ray.cells.push_back(*cell);
      }
      out.rays.push_back(std::move(ray));
    }
    std::size_t a = 0;
    while (a < dir.size() && dir[a] == 1) dir[a++] = -1;
    if (a == dir.size()) break;
    ++dir[a];
  }
  // staircases: move the first place out, then the second (and vice versa)
  if (R.size() == 2) {
    for (int first = 0; first < 2; ++first) {
      for (int sign : {1, -1}) {
        SurveyRay ray;
        ray.name = std::string("staircase(") + (first == 0 ? "first" : "second") + "," + sign_name(sign) + ")";
        std::vector<long long> pos = o;
        const auto a = static_cast<std::size_t>(first), b = 1 - a;
        ray.cells.push_back(*cell_at(pos));
        for (;;) {
          pos[a] += sign;
          auto cell = cell_at(pos);
          if (!cell) {
            pos[a] -= sign;
            break;
          }
          ray.cells.push_back(*cell);
        }
        for (;;) {
          pos[b] += sign;
          auto cell = cell_at(pos);
          if (!cell) break;
          ray.cells.push_back(*cell);
        }
        out.rays.push_back(std::move(ray));
      }
    }
  }
  for (auto& ray : out.rays) {
    std::vector<Real> v;
    for (auto c : ray.cells) v.push_back(out.cells[c].systole.min_content);
    ray.classification = classify_ray(v);
  }

  if (expected_override) {
    out.expected = *expected_override;
  } else if (R.size() == 1) {
    bool exact = true;
    for (const auto& row : x.lattice.g[R[0]]) {
      for (const auto& s : row) exact = exact && s.exact.has_value();
    }
    out.expected = exact ? "divergent" : "none";
  } else if (R.size() == S.size() && S.size() > 1) {
    out.expected = "non-divergent";
  } else {
    out.expected = "none";
  }
  if (out.expected == "divergent") {
    bool all = std::all_of(out.rays.begin(), out.rays.end(),
                           [](const SurveyRay& r) { return r.classification == "diverging-trend"; });
    out.verdict = all ? "consistent" : "ANOMALY";
  } else if (out.expected == "non-divergent") {
    bool any = std::any_of(out.rays.begin(), out.rays.end(),
                           [](const SurveyRay& r) { return r.classification == "bounded-below"; });
    out.verdict = any ? "consistent" : "ANOMALY";
  } else if (out.expected == "none") {
    out.verdict = "no-prediction";
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown expectation '" + out.expected + "'");
  }
  return out;
}

OrbitPoint locally_divergent_example(const FieldPtr& field, const std::vector<Place>& S) {
  if (S.size() < 2) throw Error(ErrorCode::NeedTwoPlaces, "the example needs two places");
  auto id = identity_entries(field, 2);
  auto u = id;
  u[0][1] = field_int(field, 1);
  std::vector<LocalMatrix> g;
  for (std::size_t v = 0; v < S.size(); ++v) g.push_back(exact_matrix(S[v], v == 0 ? u : id));
  return {make_lattice(field, S, std::move(g)), Provenance::Explicit};
}

ExpandingElement expanding_element(const std::vector<std::pair<int, int>>& positions, int n, const Rational& tau,
                                   const Place& v) {
  if (!(tau > 1)) throw Error(ErrorCode::InvalidArgument, "tau must exceed 1");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be at least 2");
  const auto N = static_cast<std::size_t>(n);
  std::vector<std::vector<std::size_t>> out_edges(N);
  for (auto [i, j] : positions) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
      throw Error(ErrorCode::InvalidArgument, "positions must be off-diagonal entries");
    }
    out_edges[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
  }
  // height = longest path to a sink; a grey node on the stack means a cycle
  std::vector<int> state(N, 0), height(N, 0);
  std::function<void(std::size_t)> visit = [&](std::size_t a) {
    state[a] = 1;
    for (auto b : out_edges[a]) {
      if (state[b] == 1) throw Error(ErrorCode::CyclicPositions, "positions contain a cycle");
      if (state[b] == 0) visit(b);
      height[a] = std::max(height[a], height[b] + 1);
    }
    state[a] = 2;
  };
  for (std::size_t a = 0; a < N; ++a) {
    if (state[a] == 0) visit(a);
  }
  int total = 0;
  for (int h : height) total += h;

  ExpandingElement out{v, tau, Rational(0), {}, {}};
  std::vector<Real> diag;
  if (v.archimedean()) {
    out.base = tau;
    const Rational mean(total, n);
    const Real log_tau = log(to_real(tau));
    for (std::size_t a = 0; a < N; ++a) {
      Rational e = 2 * (Rational(height[a]) - mean);
      out.exponents.push_back(e);
      diag.push_back(to_real(e) * log_tau);
    }
  } else {
    out.base = Rational(v.p);
    const int f = v.residue_degree;
    int m = 1;
    while (Rational(ipow(v.p, static_cast<unsigned>(2 * m * f))) < tau) ++m;
    while ((2 * m * total) % n != 0) ++m;
    const int c = 2 * m * total / n;
    for (std::size_t a = 0; a < N; ++a) {
      const int e = -(2 * m * height[a] - c);
      out.exponents.push_back(Rational(e));
      diag.push_back(Real(e));
    }
  }
  out.torus.log_diag.push_back(std::move(diag));
  return out;
}

bool verify_expansion(const ExpandingElement& t, const std::vector<std::pair<int, int>>& positions) {
  for (auto [i, j] : positions) {
    const Rational delta = t.exponents[static_cast<std::size_t>(i)] - t.exponents[static_cast<std::size_t>(j)];
    if (t.place.archimedean()) {
      // |t_i/t_j|_v = τ^{δ} (squared at complex places) >= τ iff the exponent is >= 1
      const Rational power = t.place.kind == PlaceKind::Complex ? 2 * delta : delta;
      if (power < 1) return false;
    } else {
      // |p^δ|_v = p^{-fδ}
      if (den(delta) != 1) return false;
      const Rational value = rpow(Rational(t.place.p), -t.place.residue_degree * num(delta).convert_to<int>());
      if (value < t.tau) return false;
    }
  }
  return true;
}

}  // namespace slab
