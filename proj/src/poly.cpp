#include "slab/poly.hpp"

#include "slab/error.hpp"

#include <algorithm>
#include <random>

namespace slab::poly {

// ---- over Q ----------------------------------------------------------------

void trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const QPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

QPoly scale(const QPoly& a, const Rational& c) {
  QPoly r = a;
  for (auto& x : r) x *= c;
  trim(r);
  return r;
}

std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  const int db = degree(b);
  if (db < 0) throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
  QPoly r = a;
  trim(r);
  QPoly q(r.size() > static_cast<std::size_t>(db) ? r.size() - static_cast<std::size_t>(db) : 0);
  const Rational lead = b[static_cast<std::size_t>(db)];
  for (int dr = degree(r); dr >= db; dr = degree(r)) {
    Rational c = r[static_cast<std::size_t>(dr)] / lead;
    auto shift = static_cast<std::size_t>(dr - db);
    q[shift] = c;
    for (int i = 0; i <= db; ++i) r[shift + static_cast<std::size_t>(i)] -= c * b[static_cast<std::size_t>(i)];
    trim(r);
  }
  trim(q);
  return {q, r};
}

QPoly rem(const QPoly& a, const QPoly& b) { return divmod(a, b).second; }

QPoly derivative(const QPoly& f) {
  QPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  trim(d);
  return d;
}

QPoly monic_gcd(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    QPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  return scale(a, Rational(1) / a.back());
}

Rational eval(const QPoly& f, const Rational& x) {
  Rational acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Real eval(const QPoly& f, const Real& x) {
  Real acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + to_real(*it);
  return acc;
}

Complex eval(const QPoly& f, const Complex& x) {
  Complex acc;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + Complex(to_real(*it));
  return acc;
}

namespace {

Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

}  // namespace

Rational resultant(const QPoly& a_in, const QPoly& b_in) {
  QPoly a = a_in, b = b_in;
  trim(a);
  trim(b);
  const int da = degree(a), db = degree(b);
  if (da < 0 || db < 0) return 0;
  if (da == 0) return rpow(a[0], db);
  if (db == 0) return rpow(b[0], da);
  const auto n = static_cast<std::size_t>(da + db);
  std::vector<std::vector<Rational>> syl(n, std::vector<Rational>(n, Rational(0)));
  for (int r = 0; r < db; ++r) {
    for (int i = 0; i <= da; ++i) syl[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + da - i)] = a[static_cast<std::size_t>(i)];
  }
  for (int r = 0; r < da; ++r) {
    for (int i = 0; i <= db; ++i) syl[static_cast<std::size_t>(db + r)][static_cast<std::size_t>(r + db - i)] = b[static_cast<std::size_t>(i)];
  }
  return determinant(std::move(syl));
}

QPoly to_q(const ZPoly& f) {
  QPoly r(f.begin(), f.end());
  trim(r);
  return r;
}

BigInt resultant(const ZPoly& a, const ZPoly& b) { return num(resultant(to_q(a), to_q(b))); }

std::pair<ZPoly, BigInt> clear_denominators(const QPoly& f) {
  BigInt d = 1;
  for (const auto& c : f) d = boost::multiprecision::lcm(d, den(c));
  ZPoly out;
  out.reserve(f.size());
  for (const auto& c : f) out.push_back(num(c) * (d / den(c)));
  return {out, d};
}

// ---- over F_p ----------------------------------------------------------------

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % p);
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1 % p;
  a %= p;
  if (a < 0) a += p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::int64_t invmod(std::int64_t a, std::int64_t p) { return powmod(a, p - 2, p); }

FpPoly fp_sub(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = ((r[i] - b[i]) % p + p) % p;
  trim(r);
  return r;
}

FpPoly fp_monic(FpPoly f, std::int64_t p) {
  trim(f);
  if (f.empty()) return f;
  std::int64_t inv = invmod(f.back(), p);
  for (auto& c : f) c = mulmod(c, inv, p);
  return f;
}

// Returns (g, s, t) with s a + t b = g, g monic.
std::tuple<FpPoly, FpPoly, FpPoly> fp_xgcd(FpPoly a, FpPoly b, std::int64_t p) {
  FpPoly s0{1}, s1{}, t0{}, t1{1};
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto [q, r] = fp_divmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
    FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p);
    FpPoly t2 = fp_sub(t0, fp_mul(q, t1, p), p);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  std::int64_t inv = invmod(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  for (auto& c : s0) c = mulmod(c, inv, p);
  for (auto& c : t0) c = mulmod(c, inv, p);
  return {a, s0, t0};
}

void equal_degree_split(const FpPoly& f, int d, std::int64_t p, std::mt19937_64& rng,
                        std::vector<FpPoly>& out) {
  const int n = degree(f);
  if (n == d) {
    out.push_back(f);
    return;
  }
  std::uniform_int_distribution<std::int64_t> coeff(0, p - 1);
  for (;;) {
    FpPoly a(static_cast<std::size_t>(n));
    for (auto& c : a) c = coeff(rng);
    trim(a);
    if (degree(a) < 1) continue;
    FpPoly g = fp_gcd(a, f, p);
    if (degree(g) > 0 && degree(g) < n) {
      equal_degree_split(g, d, p, rng, out);
      equal_degree_split(fp_divmod(f, g, p).first, d, p, rng, out);
      return;
    }
    FpPoly b;
    if (p == 2) {
      // trace map of F_{2^d}
      FpPoly term = a;
      b = a;
      for (int j = 1; j < d; ++j) {
        term = fp_divmod(fp_mul(term, term, p), f, p).second;
        FpPoly sum(std::max(b.size(), term.size()), 0);
        for (std::size_t i = 0; i < b.size(); ++i) sum[i] = b[i];
        for (std::size_t i = 0; i < term.size(); ++i) sum[i] = (sum[i] + term[i]) % p;
        trim(sum);
        b = std::move(sum);
      }
    } else {
      BigInt e = (ipow(BigInt(p), static_cast<unsigned>(d)) - 1) / 2;
      b = fp_sub(fp_powmod(a, e, f, p), FpPoly{1}, p);
    }
    g = fp_gcd(b, f, p);
    if (degree(g) > 0 && degree(g) < n) {
      equal_degree_split(g, d, p, rng, out);
      equal_degree_split(fp_divmod(f, g, p).first, d, p, rng, out);
      return;
    }
  }
}

}  // namespace

void trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const FpPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    if (f[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

FpPoly fp_reduce(const ZPoly& f, std::int64_t p) {
  FpPoly r;
  r.reserve(f.size());
  for (const auto& c : f) r.push_back(mod(c, BigInt(p)).convert_to<std::int64_t>());
  trim(r);
  return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  trim(r);
  return r;
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  const int db = degree(b);
  if (db < 0) throw Error(ErrorCode::InvalidArgument, "division by zero polynomial mod p");
  FpPoly r = a;
  trim(r);
  FpPoly q(r.size() > static_cast<std::size_t>(db) ? r.size() - static_cast<std::size_t>(db) : 0, 0);
  const std::int64_t inv = invmod(b[static_cast<std::size_t>(db)], p);
  for (int dr = degree(r); dr >= db; dr = degree(r)) {
    std::int64_t c = mulmod(r[static_cast<std::size_t>(dr)], inv, p);
    auto shift = static_cast<std::size_t>(dr - db);
    q[shift] = c;
    for (int i = 0; i <= db; ++i) {
      auto& x = r[shift + static_cast<std::size_t>(i)];
      x = ((x - mulmod(c, b[static_cast<std::size_t>(i)], p)) % p + p) % p;
    }
    trim(r);
  }
  trim(q);
  return {q, r};
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = fp_divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(a, p);
}

FpPoly fp_powmod(FpPoly base, BigInt e, const FpPoly& m, std::int64_t p) {
  FpPoly result{1};
  base = fp_divmod(base, m, p).second;
  while (e > 0) {
    if ((e & 1) != 0) result = fp_divmod(fp_mul(result, base, p), m, p).second;
    base = fp_divmod(fp_mul(base, base, p), m, p).second;
    e >>= 1;
  }
  return result;
}

bool fp_is_squarefree(const FpPoly& f, std::int64_t p) {
  FpPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(mulmod(f[i], static_cast<std::int64_t>(i) % p, p));
  trim(d);
  if (d.empty()) return degree(f) <= 0;
  return degree(fp_gcd(f, d, p)) == 0;
}

std::vector<FpPoly> fp_factor_squarefree(const FpPoly& f_in, std::int64_t p) {
  FpPoly f = fp_monic(f_in, p);
  std::vector<FpPoly> out;
  std::mt19937_64 rng(0x5eed);
  FpPoly x{0, 1};
  FpPoly h = x;
  for (int d = 1; 2 * d <= degree(f); ++d) {
    h = fp_powmod(h, BigInt(p), f, p);
    FpPoly g = fp_gcd(fp_sub(h, x, p), f, p);
    if (degree(g) > 0) {
      equal_degree_split(g, d, p, rng, out);
      f = fp_divmod(f, g, p).first;
      h = fp_divmod(h, f, p).second;
    }
  }
  if (degree(f) > 0) out.push_back(fp_monic(f, p));
  std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

// ---- over Z / m ----------------------------------------------------------------------

ZPoly zmod_reduce(const ZPoly& f, const BigInt& m) {
  ZPoly r;
  r.reserve(f.size());
  for (const auto& c : f) r.push_back(mod(c, m));
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

ZPoly zmod_mul(const ZPoly& a, const ZPoly& b, const BigInt& m) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return zmod_reduce(r, m);
}

std::pair<ZPoly, ZPoly> zmod_divmod(const ZPoly& a, const ZPoly& b, const BigInt& m) {
  ZPoly bb = zmod_reduce(b, m);
  if (bb.empty() || bb.back() != 1) throw Error(ErrorCode::InvalidArgument, "zmod_divmod needs a monic divisor");
  const std::size_t db = bb.size() - 1;
  ZPoly r = zmod_reduce(a, m);
  ZPoly q(r.size() > db ? r.size() - db : 0, BigInt(0));
  while (r.size() > db) {
    BigInt c = r.back();
    std::size_t shift = r.size() - 1 - db;
    q[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) r[shift + i] = mod(r[shift + i] - c * bb[i], m);
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  while (!q.empty() && q.back() == 0) q.pop_back();
  return {q, r};
}

namespace {

ZPoly zsub(const ZPoly& a, const ZPoly& b, const BigInt& m) {
  ZPoly r(std::max(a.size(), b.size()), BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return zmod_reduce(r, m);
}

ZPoly zadd(const ZPoly& a, const ZPoly& b, const BigInt& m) {
  ZPoly r(std::max(a.size(), b.size()), BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return zmod_reduce(r, m);
}

ZPoly to_z(const FpPoly& f) { return ZPoly(f.begin(), f.end()); }

// Lifts f ≡ g h (mod p) to modulus >= target; g and h monic.
std::pair<ZPoly, ZPoly> lift_pair(const ZPoly& f, const FpPoly& g0, const FpPoly& h0, std::int64_t p,
                                  const BigInt& target) {
  auto [one, s0, t0] = fp_xgcd(g0, h0, p);
  if (degree(one) != 0) throw Error(ErrorCode::RamifiedOrBadPrime, "factors not coprime mod p");
  ZPoly g = to_z(g0), h = to_z(h0), s = to_z(s0), t = to_z(t0);
  BigInt m = p;
  while (m < target) {
    BigInt m2 = m * m;
    ZPoly e = zsub(f, zmod_mul(g, h, m2), m2);
    auto [q, r] = zmod_divmod(zmod_mul(s, e, m2), h, m2);
    ZPoly g1 = zadd(zadd(g, zmod_mul(t, e, m2), m2), zmod_mul(q, g, m2), m2);
    ZPoly h1 = zadd(h, r, m2);
    ZPoly b = zsub(zadd(zmod_mul(s, g1, m2), zmod_mul(t, h1, m2), m2), ZPoly{BigInt(1)}, m2);
    auto [c, d] = zmod_divmod(zmod_mul(s, b, m2), h1, m2);
    s = zsub(s, d, m2);
    t = zsub(zsub(t, zmod_mul(t, b, m2), m2), zmod_mul(c, g1, m2), m2);
    g = std::move(g1);
    h = std::move(h1);
    m = m2;
  }
  return {zmod_reduce(g, target), zmod_reduce(h, target)};
}

}  // namespace

std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors, std::int64_t p,
                               unsigned precision) {
  const BigInt target = ipow(BigInt(p), precision);
  std::vector<ZPoly> out;
  ZPoly rest = zmod_reduce(f, target);
  for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
    FpPoly others{1};
    for (std::size_t j = i + 1; j < factors.size(); ++j) others = fp_mul(others, factors[j], p);
    auto [g, h] = lift_pair(rest, factors[i], others, p, target);
    out.push_back(std::move(g));
    rest = std::move(h);
  }
  if (!factors.empty()) out.push_back(rest);
  return out;
}

// ---- roots ---------------------------------------------------------------------------

namespace {

std::vector<QPoly> sturm_chain(const QPoly& f) {
  std::vector<QPoly> chain{f, derivative(f)};
  while (degree(chain.back()) > 0) {
    QPoly r = rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    chain.push_back(scale(r, Rational(-1)));
  }
  return chain;
}

int sign_changes(const std::vector<QPoly>& chain, const Rational& x) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    Rational v = eval(p, x);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

Rational root_bound(const QPoly& f) {
  const int d = degree(f);
  Rational m = 0;
  for (int i = 0; i < d; ++i) m = std::max(m, abs(f[static_cast<std::size_t>(i)] / f[static_cast<std::size_t>(d)]));
  return m + 1;
}

}  // namespace

int count_real_roots(const QPoly& f) {
  if (degree(f) < 1) return 0;
  auto chain = sturm_chain(f);
  Rational b = root_bound(f);
  return sign_changes(chain, -b) - sign_changes(chain, b);
}

std::vector<std::pair<Rational, Rational>> isolate_real_roots(const QPoly& f, unsigned bits) {
  std::vector<std::pair<Rational, Rational>> out;
  if (degree(f) < 1) return out;
  auto chain = sturm_chain(f);
  const Rational width = Rational(1, ipow(BigInt(2), bits));
  Rational b = root_bound(f);
  // intervals (lo, hi] with root counts
  std::vector<std::pair<Rational, Rational>> stack{{-b, b}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    int n = sign_changes(chain, lo) - sign_changes(chain, hi);
    if (n == 0) continue;
    if (n == 1 && hi - lo < width) {
      out.emplace_back(lo, hi);
      continue;
    }
    Rational mid = (lo + hi) / 2;
    if (eval(f, mid) == 0) {
      out.emplace_back(mid, mid);
      Rational eps = std::min(width, (hi - lo) / 4);
      // shrink around the exact root until no other root is inside
      while (sign_changes(chain, mid - eps) - sign_changes(chain, mid + eps) > 1) eps /= 2;
      stack.emplace_back(lo, mid - eps);
      stack.emplace_back(mid + eps, hi);
      continue;
    }
    stack.emplace_back(mid, hi);
    stack.emplace_back(lo, mid);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Real refine_real_root(const QPoly& f, Rational lo, Rational hi) {
  if (lo == hi) return to_real(lo);
  // (lo, hi] holds exactly one simple root; f changes sign across it
  Rational flo = eval(f, lo);
  if (flo == 0) {
    // root cannot be lo itself (half-open), nudge slightly inward
    lo += (hi - lo) / 1024;
    flo = eval(f, lo);
  }
  const int slo = flo > 0 ? 1 : -1;
  const Rational stop = Rational(1, ipow(BigInt(2), 80));
  while (hi - lo > stop) {
    Rational mid = (lo + hi) / 2;
    Rational v = eval(f, mid);
    if (v == 0) return to_real(mid);
    if ((v > 0 ? 1 : -1) == slo) lo = mid; else hi = mid;
  }
  QPoly df = derivative(f);
  Real x = to_real((lo + hi) / 2);
  for (int i = 0; i < 8; ++i) {
    Real d = eval(df, x);
    if (d == 0) break;
    x -= eval(f, x) / d;
  }
  return x;
}

std::vector<Complex> complex_roots(const QPoly& f_in) {
  QPoly f = f_in;
  trim(f);
  const int d = degree(f);
  if (d < 1) return {};
  f = scale(f, Rational(1) / f.back());
  QPoly df = derivative(f);
  const Real radius = to_real(root_bound(f));
  std::vector<Complex> z(static_cast<std::size_t>(d));
  const Real two_pi = 2 * pi();
  for (int k = 0; k < d; ++k) {
    Real angle = two_pi * k / d + Real(0.4);
    z[static_cast<std::size_t>(k)] = Complex(radius * cos(angle) / 2, radius * sin(angle) / 2);
  }
  const Real tol = Real("1e-60");
  for (int iter = 0; iter < 2000; ++iter) {
    Real worst = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      Complex ratio = eval(f, z[k]) / eval(df, z[k]);
      Complex sum;
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != k) sum += Complex(Real(1)) / (z[k] - z[j]);
      }
      Complex w = ratio / (Complex(Real(1)) - ratio * sum);
      z[k] -= w;
      worst = std::max(worst, w.abs() / (Real(1) + z[k].abs()));
    }
    if (worst < tol) break;
  }
  for (auto& r : z) {
    for (int i = 0; i < 3; ++i) {
      Complex dv = eval(df, r);
      if (dv.is_zero()) break;
      r -= eval(f, r) / dv;
    }
  }
  return z;
}

}  // namespace slab::poly
