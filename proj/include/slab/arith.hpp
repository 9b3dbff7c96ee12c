#pragma once

// Scalar types shared by every module: exact integers and rationals (GMP),
// 64-digit reals (MPFR) and a small complex type over them.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace slab {

using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Working precision of all archimedean arithmetic, in decimal digits.
inline constexpr unsigned kRealDigits = 64;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<kRealDigits>,
                                           boost::multiprecision::et_off>;

struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Complex conj() const { return {re, -im}; }
  Real abs2() const { return re * re + im * im; }
  Real abs() const { return sqrt(abs2()); }
  bool is_zero() const { return re == 0 && im == 0; }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    Real d = o.abs2();
    Real r = (re * o.re + im * o.im) / d;
    im = (im * o.re - re * o.im) / d;
    re = std::move(r);
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
};

inline Real to_real(const Rational& q) {
  return Real(boost::multiprecision::numerator(q)) / Real(boost::multiprecision::denominator(q));
}

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Nearest integer (ties away from zero).
BigInt round_to_bigint(const Real& x);
BigInt floor_to_bigint(const Real& x);

/// Exact dyadic rational within 2^-bits of x.
Rational to_rational(const Real& x, unsigned bits = 200);

/// p-adic valuation of a nonzero integer.
int valuation(BigInt x, const BigInt& p);

/// p-adic valuation of a nonzero rational.
int valuation(const Rational& q, const BigInt& p);

BigInt ipow(const BigInt& base, unsigned exp);
Rational rpow(const Rational& base, int exp);

BigInt gcd(const BigInt& a, const BigInt& b);

/// Modular inverse of a unit modulo m, result in [0, m).
BigInt inverse_mod(const BigInt& a, const BigInt& m);

/// Positive residue of a modulo m.
BigInt mod(const BigInt& a, const BigInt& m);

bool is_prime(std::uint64_t n);

/// Parses "7", "-3/4" or "1.25" (exact decimal) into a rational.
Rational parse_rational(std::string_view text);

/// Parses a decimal or scientific string at full working precision.
Real parse_real(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Real& x, int digits = 17);

Real pi();
Real log_real(const Real& x);
Real exp_real(const Real& x);

}  // namespace slab
