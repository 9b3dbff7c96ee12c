#include "slab/lattice.hpp"

#include "linear_kernel.hpp"
#include "shell.hpp"
#include "slab/error.hpp"
#include "slab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace slab {

namespace {

using detail::ArchKernel;
using detail::FiniteKernel;

constexpr long double kTieTolerance = 1e-13L;

bool strictly_below(long double candidate, long double best) {
  return candidate < best * (1 - kTieTolerance);
}

std::vector<FieldElement> basis_elements(const FieldPtr& field) {
  std::vector<FieldElement> out;
  for (const auto& b : field->integral_basis()) out.emplace_back(field, b);
  return out;
}

FieldElement field_int(const FieldPtr& field, std::int64_t c) {
  return FieldElement::from_rational(field, Rational(c));
}

Complex complex_det(std::vector<std::vector<Complex>> m) {
  const std::size_t n = m.size();
  Complex det(Real(1));
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c].abs2() > m[best][c].abs2()) best = i;
    }
    if (m[best][c].is_zero()) return Complex();
    if (best != c) {
      std::swap(m[best], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      Complex f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

FieldElement exact_det(std::vector<std::vector<FieldElement>> m) {
  const std::size_t n = m.size();
  FieldElement det = field_int(m[0][0].field(), 1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c].is_zero()) ++piv;
    if (piv == n) return field_int(det.field(), 0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    FieldElement inv = m[c][c].inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c].is_zero()) continue;
      FieldElement f = m[i][c] * inv;
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

// Coefficients G[v][i][(j,k)] = g_v[i][j]·ω_k of the point map on numerators.
std::vector<std::vector<std::vector<LocalScalar>>> point_map(const SLattice& lat) {
  const auto omega = basis_elements(lat.field);
  const std::size_t d = omega.size(), n = static_cast<std::size_t>(lat.n);
  std::vector<std::vector<std::vector<LocalScalar>>> out(lat.places.size());
  for (std::size_t v = 0; v < lat.places.size(); ++v) {
    const Place& pl = lat.places[v];
    std::vector<Complex> sigma;
    if (pl.archimedean()) {
      for (const auto& w : omega) sigma.push_back(embed(w, pl));
    }
    out[v].assign(n, std::vector<LocalScalar>(n * d));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const LocalScalar& g = lat.g[v][i][j];
        for (std::size_t k = 0; k < d; ++k) {
          LocalScalar& s = out[v][i][j * d + k];
          if (pl.archimedean()) s.approx = g.approx * sigma[k];
          if (g.exact) s.exact = *g.exact * omega[k];
        }
      }
    }
  }
  return out;
}

void require_full_primes(const SLattice& lat, const std::vector<std::int64_t>& primes) {
  for (auto p : primes) {
    std::size_t in_s = 0;
    for (const auto& v : lat.places) in_s += (!v.archimedean() && v.p == p) ? 1 : 0;
    if (in_s != finite_places(lat.field, p, 4).size()) {
      throw Error(ErrorCode::InvalidArgument,
                  "denominators at " + std::to_string(p) + " need every place above it in S");
    }
  }
}

// Per-place local norm evaluators for one linear map on integer coordinates.
struct PlaceKernels {
  std::vector<std::optional<ArchKernel>> arch;
  std::vector<std::optional<FiniteKernel>> fin;
  std::vector<int> prime_index;  // finite place -> index into the prime list
  std::vector<long double> p;    // finite place prime

  PlaceKernels(const std::vector<Place>& places, const std::vector<std::vector<std::vector<LocalScalar>>>& coeff,
               const std::vector<std::int64_t>& primes) {
    for (std::size_t v = 0; v < places.size(); ++v) {
      const Place& pl = places[v];
      if (pl.archimedean()) {
        arch.emplace_back(ArchKernel(pl, coeff[v]));
        fin.emplace_back();
        prime_index.push_back(-1);
        p.push_back(0);
      } else {
        arch.emplace_back();
        fin.emplace_back(FiniteKernel(pl, coeff[v]));
        const auto pi = pl.p.convert_to<std::int64_t>();
        prime_index.push_back(static_cast<int>(std::find(primes.begin(), primes.end(), pi) - primes.begin()));
        p.push_back(static_cast<long double>(pi));
      }
    }
  }
};

struct Best {
  long double content = std::numeric_limits<long double>::infinity();
  long double supnorm = std::numeric_limits<long double>::infinity();
  LatticePoint content_witness;
  LatticePoint supnorm_witness;
  std::size_t count = 0;

  void merge(const Best& o) {
    if (strictly_below(o.content, content)) {
      content = o.content;
      content_witness = o.content_witness;
    }
    if (strictly_below(o.supnorm, supnorm)) {
      supnorm = o.supnorm;
      supnorm_witness = o.supnorm_witness;
    }
    count += o.count;
  }
};

// Visits every point of shell h: canonical numerator, then admissible
// denominator tuples (a numerator divisible by p is skipped for e_p > 0).
template <class F>
void for_each_point_in_shell(int dim, std::int64_t h, int E, const std::vector<std::int64_t>& primes, F&& f) {
  std::vector<int> e(primes.size(), 0);
  std::vector<bool> divisible(primes.size());
  detail::for_each_in_shell(dim, h, [&](const std::vector<std::int64_t>& c) {
    for (std::size_t i = 0; i < primes.size(); ++i) {
      bool all = true;
      for (auto x : c) all = all && x % primes[i] == 0;
      divisible[i] = all;
    }
    std::fill(e.begin(), e.end(), 0);
    for (;;) {
      f(c, e);
      std::size_t i = 0;
      for (; i < e.size(); ++i) {
        if (divisible[i] || e[i] == E) {
          e[i] = 0;
          continue;
        }
        ++e[i];
        break;
      }
      if (i == e.size()) break;
    }
  });
}

// Denominator tuples in enumeration order with their per-place scale factors.
struct DenomTable {
  std::vector<std::vector<int>> tuples;
  std::vector<unsigned> masks;                 // primes with e_p > 0
  std::vector<std::vector<long double>> scale;  // [tuple][place]

  DenomTable(const std::vector<Place>& places, const PlaceKernels& K, const std::vector<std::int64_t>& primes,
             int E) {
    std::vector<int> e(primes.size(), 0);
    for (;;) {
      unsigned mask = 0;
      long double D = 1;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] > 0) mask |= 1U << i;
        D *= std::pow(static_cast<long double>(primes[i]), e[i]);
      }
      std::vector<long double> sc;
      for (std::size_t v = 0; v < places.size(); ++v) {
        if (K.arch[v]) {
          sc.push_back(K.arch[v]->is_complex() ? 1 / (D * D) : 1 / D);
        } else {
          const int ep = e[static_cast<std::size_t>(K.prime_index[v])];
          sc.push_back(std::pow(K.p[v], places[v].residue_degree * ep));
        }
      }
      tuples.push_back(e);
      masks.push_back(mask);
      scale.push_back(std::move(sc));
      std::size_t i = 0;
      while (i < e.size() && e[i] == E) e[i++] = 0;
      if (i == e.size()) break;
      ++e[i];
    }
  }
};

Best scan_shell(const SLattice& lat, const PlaceKernels& K, const DenomTable& T,
                const std::vector<std::int64_t>& primes, std::int64_t h) {
  const int dim = lat.n * lat.field->degree();
  const std::size_t m = lat.places.size();
  Best best;
  std::vector<long double> base(m);
  detail::for_each_in_shell(dim, h, [&](const std::vector<std::int64_t>& c) {
    unsigned divisible = 0;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      bool all = true;
      for (auto x : c) all = all && x % primes[i] == 0;
      if (all) divisible |= 1U << i;
    }
    for (std::size_t v = 0; v < m; ++v) {
      if (K.arch[v]) {
        base[v] = K.arch[v]->norm(c.data());
      } else {
        auto x = K.fin[v]->exponent(c.data());
        base[v] = x ? std::pow(K.p[v], -*x) : 0.0L;
      }
    }
    for (std::size_t t = 0; t < T.tuples.size(); ++t) {
      if (T.masks[t] & divisible) continue;
      ++best.count;
      const auto& sc = T.scale[t];
      long double content = 1, sup = 0;
      for (std::size_t v = 0; v < m; ++v) {
        const long double local = base[v] * sc[v];
        content *= local;
        sup = std::max(sup, local);
      }
      if (strictly_below(content, best.content)) {
        best.content = content;
        best.content_witness = {c, T.tuples[t]};
      }
      if (strictly_below(sup, best.supnorm)) {
        best.supnorm = sup;
        best.supnorm_witness = {c, T.tuples[t]};
      }
    }
  });
  return best;
}

SystoleResult finish(const SLattice& lat, const std::vector<std::int64_t>& primes, const Best& best) {
  SystoleResult out;
  out.count = best.count;
  if (best.count == 0) {
    out.min_content = std::numeric_limits<double>::infinity();
    out.min_supnorm = std::numeric_limits<double>::infinity();
    return out;
  }
  out.content_witness = best.content_witness;
  out.supnorm_witness = best.supnorm_witness;
  out.min_content = content(lattice_image(lat, point_coordinates(lat.field, primes, best.content_witness, lat.n)));
  out.min_supnorm = sup_norm(lattice_image(lat, point_coordinates(lat.field, primes, best.supnorm_witness, lat.n)));
  return out;
}

}  // namespace

LocalMatrix exact_matrix(const Place& v, const std::vector<std::vector<FieldElement>>& m) {
  LocalMatrix out;
  for (const auto& row : m) {
    std::vector<LocalScalar> r;
    for (const auto& x : row) {
      LocalScalar s;
      if (v.archimedean()) s.approx = embed(x, v);
      s.exact = x;
      r.push_back(std::move(s));
    }
    out.push_back(std::move(r));
  }
  return out;
}

LocalMatrix numeric_matrix(const std::vector<std::vector<Complex>>& m) {
  LocalMatrix out;
  for (const auto& row : m) {
    std::vector<LocalScalar> r;
    for (const auto& x : row) r.push_back({x, std::nullopt});
    out.push_back(std::move(r));
  }
  return out;
}

SLattice make_lattice(const FieldPtr& field, const std::vector<Place>& S, std::vector<LocalMatrix> g) {
  if (g.size() != S.size()) throw Error(ErrorCode::ShapeMismatch, "one matrix per place of S");
  const std::size_t n = g.empty() ? 0 : g[0].size();
  if (n == 0) throw Error(ErrorCode::ShapeMismatch, "empty matrix");
  for (std::size_t v = 0; v < S.size(); ++v) {
    if (g[v].size() != n) throw Error(ErrorCode::ShapeMismatch, "matrices differ in size");
    for (const auto& row : g[v]) {
      if (row.size() != n) throw Error(ErrorCode::ShapeMismatch, "matrix is not square");
    }
    if (S[v].archimedean()) {
      std::vector<std::vector<Complex>> a(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& s : g[v][i]) a[i].push_back(s.approx);
      }
      if ((complex_det(a) - Complex(Real(1))).abs() > Real("1e-10")) {
        throw Error(ErrorCode::InvalidArgument, "det g is not 1 at " + S[v].label());
      }
    } else {
      std::vector<std::vector<FieldElement>> a(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& s : g[v][i]) {
          if (!s.exact) throw Error(ErrorCode::NonExactRepresentative, "finite-place entry without exact value");
          a[i].push_back(*s.exact);
        }
      }
      auto abs_det = local_abs(exact_det(a), S[v]);
      if (!abs_det.exponent || *abs_det.exponent != 0) {
        throw Error(ErrorCode::InvalidArgument, "det g is not a unit at " + S[v].label());
      }
    }
  }
  return {field, detail::kernel_places(field, S), static_cast<int>(n), std::move(g)};
}

SLattice identity_lattice(const FieldPtr& field, const std::vector<Place>& S, int n) {
  std::vector<std::vector<FieldElement>> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) id[static_cast<std::size_t>(i)].push_back(field_int(field, i == j ? 1 : 0));
  }
  std::vector<LocalMatrix> g;
  for (const auto& v : S) g.push_back(exact_matrix(v, id));
  return make_lattice(field, S, std::move(g));
}

std::vector<std::int64_t> s_primes(const std::vector<Place>& S) {
  std::set<std::int64_t> ps;
  for (const auto& v : S) {
    if (!v.archimedean()) ps.insert(v.p.convert_to<std::int64_t>());
  }
  return {ps.begin(), ps.end()};
}

std::vector<FieldElement> point_coordinates(const FieldPtr& field, const std::vector<std::int64_t>& primes,
                                            const LatticePoint& z, int n) {
  const auto omega = basis_elements(field);
  const std::size_t d = omega.size();
  Rational D = 1;
  for (std::size_t i = 0; i < primes.size() && i < z.denom.size(); ++i) {
    D *= Rational(ipow(BigInt(primes[i]), static_cast<unsigned>(z.denom[i])));
  }
  const FieldElement inv_d = FieldElement::from_rational(field, 1 / D);
  std::vector<FieldElement> out;
  for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
    FieldElement acc = field_int(field, 0);
    for (std::size_t k = 0; k < d; ++k) acc += field_int(field, z.numer[j * d + k]) * omega[k];
    out.push_back(acc * inv_d);
  }
  return out;
}

std::string format_point(const LatticePoint& z, int n, int d, const std::vector<std::int64_t>& primes) {
  std::ostringstream os;
  os << '(';
  for (int j = 0; j < n; ++j) {
    if (j > 0) os << ';';
    if (d == 1) {
      os << z.numer[static_cast<std::size_t>(j)];
      continue;
    }
    os << '[';
    for (int k = 0; k < d; ++k) os << (k > 0 ? " " : "") << z.numer[static_cast<std::size_t>(j * d + k)];
    os << ']';
  }
  os << ')';
  bool first = true;
  for (std::size_t i = 0; i < primes.size() && i < z.denom.size(); ++i) {
    if (z.denom[i] == 0) continue;
    os << (first ? "/" : "*") << primes[i] << '^' << z.denom[i];
    first = false;
  }
  return os.str();
}

SAdicVector lattice_image(const SLattice& lat, const std::vector<FieldElement>& z) {
  const auto n = static_cast<std::size_t>(lat.n);
  if (z.size() != n) throw Error(ErrorCode::ShapeMismatch, "point has wrong dimension");
  SAdicVector out{lat.field, lat.places, {}};
  for (std::size_t v = 0; v < lat.places.size(); ++v) {
    const Place& pl = lat.places[v];
    std::vector<Complex> zs;
    if (pl.archimedean()) {
      for (const auto& x : z) zs.push_back(embed(x, pl));
    }
    std::vector<LocalScalar> comp(n);
    for (std::size_t i = 0; i < n; ++i) {
      bool exact = true;
      FieldElement acc = field_int(lat.field, 0);
      for (std::size_t j = 0; j < n; ++j) {
        const LocalScalar& g = lat.g[v][i][j];
        if (pl.archimedean()) comp[i].approx += g.approx * zs[j];
        if (g.exact) {
          acc += *g.exact * z[j];
        } else {
          exact = false;
        }
      }
      if (exact) comp[i].exact = acc;
    }
    out.components.push_back(std::move(comp));
  }
  return out;
}

double window_count(int dim, std::int64_t height, int denom, std::size_t nprimes) {
  return std::pow(2.0 * static_cast<double>(height) + 1.0, dim) * std::pow(denom + 1.0, static_cast<double>(nprimes));
}

void check_window(int dim, const HeightWindow& w, std::size_t nprimes) {
  if (w.height < 1) throw Error(ErrorCode::InvalidArgument, "height must be positive");
  if (w.denom < 0) throw Error(ErrorCode::InvalidArgument, "denominator exponent must be nonnegative");
  const double count = window_count(dim, w.height, w.denom, nprimes);
  if (count > w.cap) {
    std::ostringstream os;
    os << "window holds " << count << " points, cap is " << w.cap;
    throw Error(ErrorCode::WindowTooLarge, os.str());
  }
}

std::vector<LatticePoint> enumerate_points(const SLattice& lat, const HeightWindow& w) {
  const auto primes = s_primes(lat.places);
  const int dim = lat.n * lat.field->degree();
  check_window(dim, w, primes.size());
  if (w.denom > 0) require_full_primes(lat, primes);
  std::vector<LatticePoint> out;
  for (std::int64_t h = 1; h <= w.height; ++h) {
    for_each_point_in_shell(dim, h, w.denom, primes, [&](const std::vector<std::int64_t>& c, const std::vector<int>& e) {
      out.push_back({c, e});
    });
  }
  return out;
}

SystoleResult systole(const SLattice& lat, const HeightWindow& w, Execution mode) {
  const auto primes = s_primes(lat.places);
  const int dim = lat.n * lat.field->degree();
  check_window(dim, w, primes.size());
  if (w.denom > 0) require_full_primes(lat, primes);
  const PlaceKernels kernels(lat.places, point_map(lat), primes);
  const DenomTable table(lat.places, kernels, primes, w.denom);

  std::vector<Best> shells(static_cast<std::size_t>(w.height));
  const auto H = static_cast<long long>(w.height);
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long h = H; h >= 1; --h) {
      shells[static_cast<std::size_t>(h - 1)] = scan_shell(lat, kernels, table, primes, h);
    }
  } else {
    for (long long h = 1; h <= H; ++h) {
      shells[static_cast<std::size_t>(h - 1)] = scan_shell(lat, kernels, table, primes, h);
    }
  }
  Best total;
  for (const auto& s : shells) total.merge(s);
  return finish(lat, primes, total);
}

SystoleResult systole_reference(const SLattice& lat, const HeightWindow& w) {
  const auto primes = s_primes(lat.places);
  SystoleResult out;
  out.min_content = std::numeric_limits<double>::infinity();
  out.min_supnorm = std::numeric_limits<double>::infinity();
  const Real tie = Real(1) - Real("1e-13");
  for (const auto& z : enumerate_points(lat, w)) {
    ++out.count;
    auto image = lattice_image(lat, point_coordinates(lat.field, primes, z, lat.n));
    Real c = content(image), s = sup_norm(image);
    if (c < out.min_content * tie) {
      out.min_content = c;
      out.content_witness = z;
    }
    if (s < out.min_supnorm * tie) {
      out.min_supnorm = s;
      out.supnorm_witness = z;
    }
  }
  return out;
}

MahlerVerdict mahler_test(const std::vector<SLattice>& lats, const Real& r, const HeightWindow& w) {
  if (!(r > 0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  MahlerVerdict out;
  out.family_passes = true;
  for (const auto& lat : lats) {
    const SLattice& first = lats.front();
    bool same_places = lat.places.size() == first.places.size();
    for (std::size_t v = 0; same_places && v < lat.places.size(); ++v) {
      same_places = lat.places[v].label() == first.places[v].label();
    }
    if (lat.field != first.field || lat.n != first.n || !same_places) {
      throw Error(ErrorCode::ShapeMismatch, "family members differ in field, places or dimension");
    }
    MahlerEntry e;
    e.systole = systole(lat, w);
    e.content_passes = e.systole.min_content > r;
    e.supnorm_passes = e.systole.min_supnorm > r;
    out.family_passes = out.family_passes && e.content_passes && e.supnorm_passes;
    out.entries.push_back(std::move(e));
  }
  out.verdict = out.family_passes ? "precompact-at-this-scale" : "not-precompact";
  return out;
}

namespace {

using KMatrix = std::vector<std::vector<FieldElement>>;

KMatrix zero_matrix(const FieldPtr& field, std::size_t n) {
  return KMatrix(n, std::vector<FieldElement>(n, field_int(field, 0)));
}

KMatrix kmul(const KMatrix& a, const KMatrix& b) {
  const std::size_t n = a.size();
  KMatrix out = zero_matrix(a[0][0].field(), n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

std::vector<Rational> flatten(const KMatrix& m) {
  std::vector<Rational> out;
  for (const auto& row : m) {
    for (const auto& x : row) out.insert(out.end(), x.coords().begin(), x.coords().end());
  }
  return out;
}

// Q-span of K-matrices kept in echelon form alongside the matrices themselves.
class MatrixSpan {
 public:
  bool add(const KMatrix& m) {
    auto rows = echelon_;
    rows.push_back(flatten(m));
    if (linalg::rank(rows) == echelon_.size()) return false;
    echelon_ = std::move(rows);
    linalg::row_reduce(echelon_);
    elements_.push_back(m);
    return true;
  }
  const std::vector<KMatrix>& elements() const { return elements_; }

 private:
  linalg::Matrix<Rational> echelon_;
  std::vector<KMatrix> elements_;
};

// sl_n basis over O: E_ab (a != b) then E_aa - E_nn, each times ω_k.
std::vector<KMatrix> sl_basis(const FieldPtr& field, int n) {
  const auto N = static_cast<std::size_t>(n);
  std::vector<KMatrix> out;
  for (std::size_t a = 0; a < N; ++a) {
    for (std::size_t b = 0; b < N; ++b) {
      if (a == b) continue;
      auto m = zero_matrix(field, N);
      m[a][b] = field_int(field, 1);
      out.push_back(m);
    }
  }
  for (std::size_t a = 0; a + 1 < N; ++a) {
    auto m = zero_matrix(field, N);
    m[a][a] = field_int(field, 1);
    m[N - 1][N - 1] = field_int(field, -1);
    out.push_back(m);
  }
  return out;
}

using CMatrix = std::vector<std::vector<Complex>>;

CMatrix cmul(const CMatrix& a, const CMatrix& b) {
  const std::size_t n = a.size();
  CMatrix o(n, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) o[i][j] += a[i][k] * b[k][j];
    }
  }
  return o;
}

CMatrix numeric_inverse(CMatrix a) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i].push_back(Complex(Real(i == j ? 1 : 0)));
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a[i][c].abs2() > a[piv][c].abs2()) piv = i;
    }
    std::swap(a[piv], a[c]);
    Complex inv = Complex(Real(1)) / a[c][c];
    for (auto& x : a[c]) x = x * inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      Complex f = a[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  CMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(a[i].begin() + static_cast<std::ptrdiff_t>(n), a[i].end());
  return out;
}

KMatrix exact_inverse(KMatrix a) {
  const std::size_t n = a.size();
  const FieldPtr field = a[0][0].field();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i].push_back(field_int(field, i == j ? 1 : 0));
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (a[piv][c].is_zero()) ++piv;
    std::swap(a[piv], a[c]);
    FieldElement inv = a[c][c].inverse();
    for (auto& x : a[c]) x *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      FieldElement f = a[i][c];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  KMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(a[i].begin() + static_cast<std::ptrdiff_t>(n), a[i].end());
  return out;
}

CMatrix numeric_part(const LocalMatrix& g) {
  CMatrix out;
  for (const auto& row : g) {
    out.emplace_back();
    for (const auto& s : row) out.back().push_back(s.approx);
  }
  return out;
}

KMatrix exact_part(const LocalMatrix& g) {
  KMatrix out;
  for (const auto& row : g) {
    out.emplace_back();
    for (const auto& s : row) {
      if (!s.exact) throw Error(ErrorCode::NonExactRepresentative, "matrix entry without exact value");
      out.back().push_back(*s.exact);
    }
  }
  return out;
}

// ‖Ad(g)X‖_S at working precision (exact at finite places).
Real adjoint_norm(const SLattice& lat, const KMatrix& X) {
  Real sup = 0;
  for (std::size_t v = 0; v < lat.places.size(); ++v) {
    const Place& pl = lat.places[v];
    std::vector<LocalScalar> entries;
    if (pl.archimedean()) {
      CMatrix xv;
      for (const auto& row : X) {
        xv.emplace_back();
        for (const auto& y : row) xv.back().push_back(embed(y, pl));
      }
      const CMatrix ga = numeric_part(lat.g[v]);
      for (const auto& row : cmul(cmul(ga, xv), numeric_inverse(ga))) {
        for (const auto& y : row) entries.push_back({y, std::nullopt});
      }
    } else {
      const KMatrix ge = exact_part(lat.g[v]);
      for (const auto& row : kmul(kmul(ge, X), exact_inverse(ge))) {
        for (const auto& y : row) entries.push_back({Complex(), y});
      }
    }
    sup = std::max(sup, local_norm(pl, entries).value);
  }
  return sup;
}

bool generates_nilpotent(const std::vector<KMatrix>& gens, int n, std::vector<KMatrix>* basis_out) {
  MatrixSpan span;
  for (const auto& g : gens) span.add(g);
  // close under brackets
  for (std::size_t i = 0; i < span.elements().size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const KMatrix a = span.elements()[i], b = span.elements()[j];
      auto ab = kmul(a, b), ba = kmul(b, a);
      for (std::size_t r = 0; r < ab.size(); ++r) {
        for (std::size_t c = 0; c < ab.size(); ++c) ab[r][c] -= ba[r][c];
      }
      span.add(ab);
    }
  }
  if (basis_out) *basis_out = span.elements();
  // the associative envelope must vanish in degree n
  std::vector<KMatrix> power = span.elements();
  for (int k = 1; k < n && !power.empty(); ++k) {
    MatrixSpan next;
    for (const auto& b : span.elements()) {
      for (const auto& p : power) next.add(kmul(b, p));
    }
    power = next.elements();
  }
  return power.empty();
}

struct AdjointPoint {
  std::vector<std::int64_t> numer;
  std::vector<int> denom;
  long double norm;
};

// ‖Ad(g)X‖_S for every X in the window, with X = Σ c_{qk} B_q ω_k / D.
std::vector<AdjointPoint> adjoint_points(const SLattice& lat, const HeightWindow& w) {
  if (lat.n > 4) throw Error(ErrorCode::InvalidArgument, "span check supports n <= 4");
  const FieldPtr& field = lat.field;
  const auto n = static_cast<std::size_t>(lat.n);
  const auto primes = s_primes(lat.places);
  const auto basis = sl_basis(field, lat.n);
  const auto omega = basis_elements(field);
  const std::size_t d = omega.size();
  const int dim = static_cast<int>(basis.size() * d);
  check_window(dim, w, primes.size());
  if (w.denom > 0) require_full_primes(lat, primes);

  // coeff[v][(a,b)][(q,k)] = (g B_q g^{-1})_{ab}·ω_k at place v
  std::vector<std::vector<std::vector<LocalScalar>>> coeff(lat.places.size());
  for (std::size_t v = 0; v < lat.places.size(); ++v) {
    const Place& pl = lat.places[v];
    coeff[v].assign(n * n, std::vector<LocalScalar>(basis.size() * d));
    bool exact = true;
    for (const auto& row : lat.g[v]) {
      for (const auto& s : row) exact = exact && s.exact.has_value();
    }
    std::vector<std::vector<Complex>> ga, gi;
    KMatrix ge, gie;
    if (exact) {
      ge = exact_part(lat.g[v]);
      gie = exact_inverse(ge);
    } else if (!pl.archimedean()) {
      throw Error(ErrorCode::NonExactRepresentative, "finite-place entry without exact value");
    }
    if (pl.archimedean()) {
      ga = numeric_part(lat.g[v]);
      gi = numeric_inverse(ga);
    }
    std::vector<Complex> sigma;
    if (pl.archimedean()) {
      for (const auto& o : omega) sigma.push_back(embed(o, pl));
    }
    for (std::size_t q = 0; q < basis.size(); ++q) {
      // Ad(g)B_q
      std::vector<std::vector<Complex>> an;
      KMatrix ae;
      if (pl.archimedean()) {
        std::vector<std::vector<Complex>> bq(n, std::vector<Complex>(n));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) bq[i][j] = Complex(to_real(basis[q][i][j].coords()[0]));
        }
        an = cmul(cmul(ga, bq), gi);
      }
      if (exact) ae = kmul(kmul(ge, basis[q]), gie);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          for (std::size_t k = 0; k < d; ++k) {
            LocalScalar& s = coeff[v][a * n + b][q * d + k];
            if (pl.archimedean()) s.approx = an[a][b] * sigma[k];
            if (exact) s.exact = ae[a][b] * omega[k];
          }
        }
      }
    }
  }

  const PlaceKernels kernels(lat.places, coeff, primes);
  std::vector<AdjointPoint> out;
  for (std::int64_t h = 1; h <= w.height; ++h) {
    for_each_point_in_shell(dim, h, w.denom, primes, [&](const std::vector<std::int64_t>& c, const std::vector<int>& e) {
      long double D = 1;
      for (std::size_t i = 0; i < primes.size(); ++i) D *= std::pow(static_cast<long double>(primes[i]), e[i]);
      long double sup = 0;
      for (std::size_t v = 0; v < lat.places.size(); ++v) {
        long double local;
        if (kernels.arch[v]) {
          local = kernels.arch[v]->norm(c.data()) / (kernels.arch[v]->is_complex() ? D * D : D);
        } else {
          auto x = kernels.fin[v]->exponent(c.data());
          const int f = lat.places[v].residue_degree;
          const int ep = e[static_cast<std::size_t>(kernels.prime_index[v])];
          local = x ? std::pow(kernels.p[v], -(*x - f * ep)) : 0.0L;
        }
        sup = std::max(sup, local);
      }
      out.push_back({c, e, sup});
    });
  }
  return out;
}

KMatrix adjoint_preimage(const FieldPtr& field, int n, const std::vector<std::int64_t>& primes,
                         const AdjointPoint& x) {
  const auto basis = sl_basis(field, n);
  const auto omega = basis_elements(field);
  const std::size_t d = omega.size();
  Rational D = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) D *= Rational(ipow(BigInt(primes[i]), static_cast<unsigned>(x.denom[i])));
  KMatrix out = zero_matrix(field, static_cast<std::size_t>(n));
  for (std::size_t q = 0; q < basis.size(); ++q) {
    FieldElement coef = field_int(field, 0);
    for (std::size_t k = 0; k < d; ++k) coef += field_int(field, x.numer[q * d + k]) * omega[k];
    coef *= FieldElement::from_rational(field, 1 / D);
    if (coef.is_zero()) continue;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (!basis[q][i][j].is_zero()) out[i][j] += coef * basis[q][i][j];
      }
    }
  }
  return out;
}

}  // namespace

NilpotentSpan nilpotent_span_check(const SLattice& lat, const Real& t, const HeightWindow& w) {
  if (!(t > 0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  const auto primes = s_primes(lat.places);
  const auto td = t.convert_to<long double>();
  NilpotentSpan out;
  for (const auto& x : adjoint_points(lat, w)) {
    if (x.norm >= td * (1 + kTieTolerance)) continue;
    KMatrix X = adjoint_preimage(lat.field, lat.n, primes, x);
    if (x.norm > td * (1 - kTieTolerance) && !(adjoint_norm(lat, X) < t)) continue;
    out.generators.push_back(std::move(X));
  }
  out.nilpotent = generates_nilpotent(out.generators, lat.n, &out.basis);
  return out;
}

Real calibrate_nilpotent_radius(const FieldPtr& field, const std::vector<Place>& S, int n, const HeightWindow& w) {
  const SLattice lat = identity_lattice(field, S, n);
  const auto primes = s_primes(lat.places);
  auto points = adjoint_points(lat, w);
  std::stable_sort(points.begin(), points.end(),
                   [](const AdjointPoint& a, const AdjointPoint& b) { return a.norm < b.norm; });
  std::vector<KMatrix> gens;
  std::size_t i = 0;
  while (i < points.size()) {
    const long double level = points[i].norm;
    while (i < points.size() && points[i].norm <= level * (1 + kTieTolerance)) {
      gens.push_back(adjoint_preimage(field, n, primes, points[i]));
      ++i;
    }
    if (!generates_nilpotent(gens, n, nullptr)) return adjoint_norm(lat, gens.back());
  }
  return Real(std::numeric_limits<double>::infinity());
}

}  // namespace slab
