#pragma once

// The S-arithmetic lattice g·O^n inside K_S^n: window enumeration, systoles,
// Mahler-type verdicts and the small-vector span check in the adjoint lattice.
//
// Points are z_j = (Σ_k c_{jk} ω_k) / Π p^{e_p} with integral-basis numerators
// |c_{jk}| <= H and denominator exponents e_p <= E over the rational primes of S.

#include "slab/sadic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slab {

using LocalMatrix = std::vector<std::vector<LocalScalar>>;

struct HeightWindow {
  std::int64_t height = 50;  // H
  int denom = 5;             // E
  double cap = 1e8;
};

struct SLattice {
  FieldPtr field;
  std::vector<Place> places;
  int n = 0;
  std::vector<LocalMatrix> g;  // g[v][i][j]
};

/// Exact matrix over K viewed at the place v.
LocalMatrix exact_matrix(const Place& v, const std::vector<std::vector<FieldElement>>& m);
/// Real or complex matrix at an archimedean place, without exact preimage.
LocalMatrix numeric_matrix(const std::vector<std::vector<Complex>>& m);

/// Validates det g_v = 1 at every place (1e-10 archimedean, unit at finite places).
SLattice make_lattice(const FieldPtr& field, const std::vector<Place>& S, std::vector<LocalMatrix> g);
SLattice identity_lattice(const FieldPtr& field, const std::vector<Place>& S, int n);

/// Rational primes below the finite places of S, ascending.
std::vector<std::int64_t> s_primes(const std::vector<Place>& S);

struct LatticePoint {
  std::vector<std::int64_t> numer;  // c_{jk} at j*d + k
  std::vector<int> denom;           // e_p per S-prime

  bool operator==(const LatticePoint&) const = default;
};

/// z_j as field elements.
std::vector<FieldElement> point_coordinates(const FieldPtr& field, const std::vector<std::int64_t>& primes,
                                            const LatticePoint& z, int n);
/// "(1;0)" or "(1;3)/2^1", integral-basis vectors in brackets when d > 1.
std::string format_point(const LatticePoint& z, int n, int d, const std::vector<std::int64_t>& primes);

/// g·z computed exactly at finite places and at working precision elsewhere.
SAdicVector lattice_image(const SLattice& lat, const std::vector<FieldElement>& z);

double window_count(int dim, std::int64_t height, int denom, std::size_t nprimes);
void check_window(int dim, const HeightWindow& w, std::size_t nprimes);

/// Every point of the window once up to sign, in enumeration order.
std::vector<LatticePoint> enumerate_points(const SLattice& lat, const HeightWindow& w);

struct SystoleResult {
  Real min_content;
  LatticePoint content_witness;
  Real min_supnorm;
  LatticePoint supnorm_witness;
  std::size_t count = 0;
};

enum class Execution { Serial, Parallel };

/// Window-restricted systole: an upper bound for the true minimum, attained
/// by the reported witnesses.
SystoleResult systole(const SLattice& lat, const HeightWindow& w, Execution mode = Execution::Parallel);

/// Same minimum computed point by point through lattice_image; slow, for tests.
SystoleResult systole_reference(const SLattice& lat, const HeightWindow& w);

struct MahlerEntry {
  SystoleResult systole;
  bool content_passes = false;  // content-systole > r
  bool supnorm_passes = false;  // sup-norm systole > r
};

struct MahlerVerdict {
  std::vector<MahlerEntry> entries;
  bool family_passes = false;
  std::string verdict;  // "precompact-at-this-scale" or "not-precompact"
};

MahlerVerdict mahler_test(const std::vector<SLattice>& lats, const Real& r, const HeightWindow& w);

struct NilpotentSpan {
  bool nilpotent = false;
  std::vector<std::vector<std::vector<FieldElement>>> generators;  // kept X ∈ sl_n(O)
  std::vector<std::vector<std::vector<FieldElement>>> basis;       // bracket closure
};

/// Collects X ∈ sl_n(O) from the window with ‖Ad(g)X‖_S < t and decides
/// whether their Lie span consists of nilpotent matrices.
NilpotentSpan nilpotent_span_check(const SLattice& lat, const Real& t, const HeightWindow& w);

/// Smallest ‖X‖_S at which the check first fails on g = identity: the check
/// holds for every t up to the returned value.
Real calibrate_nilpotent_radius(const FieldPtr& field, const std::vector<Place>& S, int n, const HeightWindow& w);

}  // namespace slab
