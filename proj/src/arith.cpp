#include "slab/arith.hpp"

#include "slab/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <cctype>
#include <sstream>

namespace slab {

namespace {

BigInt mpfr_to_bigint(const Real& x, mpfr_rnd_t mode) {
  BigInt out;
  mpfr_get_z(out.backend().data(), x.backend().data(), mode);
  return out;
}

}  // namespace

BigInt round_to_bigint(const Real& x) { return mpfr_to_bigint(x, MPFR_RNDNA); }
BigInt floor_to_bigint(const Real& x) { return mpfr_to_bigint(x, MPFR_RNDD); }

Rational to_rational(const Real& x, unsigned bits) {
  return Rational(round_to_bigint(ldexp(x, static_cast<int>(bits))), ipow(BigInt(2), bits));
}

int valuation(BigInt x, const BigInt& p) {
  if (x == 0) throw Error(ErrorCode::InvalidArgument, "valuation of zero");
  int v = 0;
  BigInt q, r;
  for (;;) {
    divide_qr(x, p, q, r);
    if (r != 0) return v;
    x = q;
    ++v;
  }
}

int valuation(const Rational& q, const BigInt& p) { return valuation(num(q), p) - valuation(den(q), p); }

BigInt ipow(const BigInt& base, unsigned exp) { return boost::multiprecision::pow(base, exp); }

Rational rpow(const Rational& base, int exp) {
  if (exp >= 0) {
    return Rational(ipow(num(base), static_cast<unsigned>(exp)), ipow(den(base), static_cast<unsigned>(exp)));
  }
  if (base == 0) throw Error(ErrorCode::InvalidArgument, "zero to a negative power");
  return Rational(ipow(den(base), static_cast<unsigned>(-exp)), ipow(num(base), static_cast<unsigned>(-exp)));
}

BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

BigInt mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt old_r = mod(a, m), r = m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(ErrorCode::InvalidArgument, "not invertible modulo m");
  return mod(old_s, m);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty rational");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
      if (d == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator in '" + s + "'");
      return Rational(n, d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      auto scale = static_cast<unsigned>(s.size() - dot - 1);
      if (digits.empty() || digits == "-" || digits == "+") throw Error(ErrorCode::InvalidArgument, s);
      return Rational(BigInt(digits), ipow(BigInt(10), scale));
    }
    return Rational(BigInt(s));
  } catch (const std::runtime_error&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse rational '" + s + "'");
  }
}

Real parse_real(std::string_view text) {
  try {
    return Real(std::string(text));
  } catch (const std::runtime_error&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse real '" + std::string(text) + "'");
  }
}

std::string to_string(const Rational& q) {
  if (den(q) == 1) return num(q).str();
  return num(q).str() + "/" + den(q).str();
}

std::string to_string(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

Real pi() { return boost::math::constants::pi<Real>(); }
Real log_real(const Real& x) { return log(x); }
Real exp_real(const Real& x) { return exp(x); }

}  // namespace slab
