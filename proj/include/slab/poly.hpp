#pragma once

// Dense univariate polynomials, coefficients stored low degree first.

#include "slab/arith.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace slab::poly {

using QPoly = std::vector<Rational>;
using ZPoly = std::vector<BigInt>;
using FpPoly = std::vector<std::int64_t>;

// ---- over Q ----------------------------------------------------------------

void trim(QPoly& f);
int degree(const QPoly& f);
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const Rational& c);
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b);
QPoly rem(const QPoly& a, const QPoly& b);
QPoly derivative(const QPoly& f);
QPoly monic_gcd(QPoly a, QPoly b);
Rational eval(const QPoly& f, const Rational& x);
Real eval(const QPoly& f, const Real& x);
Complex eval(const QPoly& f, const Complex& x);

/// Resultant by fraction-free elimination on the Sylvester matrix.
Rational resultant(const QPoly& a, const QPoly& b);
BigInt resultant(const ZPoly& a, const ZPoly& b);

QPoly to_q(const ZPoly& f);

/// Integer polynomial with the common denominator pulled out: f = A / D.
std::pair<ZPoly, BigInt> clear_denominators(const QPoly& f);

// ---- over F_p (p < 2^31) ------------------------------------------------------

void trim(FpPoly& f);
int degree(const FpPoly& f);
FpPoly fp_reduce(const ZPoly& f, std::int64_t p);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::int64_t p);
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b, std::int64_t p);
FpPoly fp_gcd(FpPoly a, FpPoly b, std::int64_t p);
FpPoly fp_powmod(FpPoly base, BigInt e, const FpPoly& m, std::int64_t p);

/// Distinct monic irreducible factors of a monic squarefree polynomial mod p,
/// sorted by (degree, coefficients). Deterministic.
std::vector<FpPoly> fp_factor_squarefree(const FpPoly& f, std::int64_t p);

bool fp_is_squarefree(const FpPoly& f, std::int64_t p);

// ---- over Z / p^N --------------------------------------------------------------

ZPoly zmod_reduce(const ZPoly& f, const BigInt& m);
ZPoly zmod_mul(const ZPoly& a, const ZPoly& b, const BigInt& m);
/// Division by a monic divisor over Z/m.
std::pair<ZPoly, ZPoly> zmod_divmod(const ZPoly& a, const ZPoly& b, const BigInt& m);

/// Lifts a coprime factorization f ≡ g_1···g_r (mod p), all monic, to one
/// modulo p^precision. f must be monic over Z.
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors, std::int64_t p,
                               unsigned precision);

// ---- roots -------------------------------------------------------------------------

/// Number of distinct real roots (Sturm).
int count_real_roots(const QPoly& f);

/// Rational isolating intervals of the real roots of a squarefree polynomial,
/// in increasing order, each of width < 2^-bits.
std::vector<std::pair<Rational, Rational>> isolate_real_roots(const QPoly& f, unsigned bits = 8);

/// Refines an isolating interval by exact bisection and finishes with Newton
/// at working precision.
Real refine_real_root(const QPoly& f, Rational lo, Rational hi);

/// All complex roots at working precision (Aberth iteration + Newton polish).
std::vector<Complex> complex_roots(const QPoly& f);

}  // namespace slab::poly
