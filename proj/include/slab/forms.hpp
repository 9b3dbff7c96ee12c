#pragma once

// Decomposable forms over K_S: evaluation on O^n, value spectra and their
// discreteness, norm forms, rational reconstruction and the Littlewood scan.

#include "slab/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slab {

/// Coefficients of one linear form, one per variable.
using LinearForm = std::vector<LocalScalar>;

struct DecomposableForm {
  FieldPtr field;  // variables range over O_K
  std::vector<Place> places;
  int n = 0;  // variables
  int m = 0;  // factors
  std::vector<std::vector<LinearForm>> factors;  // factors[v][i]
  std::vector<int> ranks;                        // rank of the factor matrix per place
  std::vector<std::vector<LocalScalar>> expansion;  // [v][monomial], see monomials()
  std::string label;  // set for probes that bypass the independence check
};

/// Exponent vectors of degree m in n variables, first exponent descending:
/// (x², xy, y²) for n = m = 2.
std::vector<std::vector<int>> monomials(int n, int m);

/// Validates linear independence of the factors at every place.
DecomposableForm make_form(const FieldPtr& field, const std::vector<Place>& S,
                           std::vector<std::vector<LinearForm>> factors);
/// Same container without the independence gate.
DecomposableForm make_probe(const FieldPtr& field, const std::vector<Place>& S,
                            std::vector<std::vector<LinearForm>> factors, std::string label);

inline const char* kCounterexampleLabel = "counterexample: hypothesis violated";

/// x²(φx - y) over Q: discrete values from dependent factors.
DecomposableForm dependent_factor_probe();
/// x² + βy² over Q with β = √2: discrete values from a non-decomposable form.
DecomposableForm indecomposable_probe();

/// (f_v(z))_v; exact wherever the coefficients allow it.
std::vector<LocalScalar> evaluate(const DecomposableForm& f, const std::vector<FieldElement>& z);
/// Π_v |f_v(z)|_v with normalized absolute values.
Real magnitude(const DecomposableForm& f, const std::vector<LocalScalar>& values);

struct SpectrumEntry {
  Real magnitude;
  std::size_t count = 0;              // points up to sign with this magnitude
  std::int64_t height = 0;            // smallest shell reaching it
  LatticePoint witness;               // first point in enumeration order
  std::vector<LocalScalar> values;    // f_v at the witness
};

struct ValueSpectrum {
  HeightWindow window;
  std::optional<Real> bound;  // only magnitudes <= bound are kept
  std::vector<SpectrumEntry> entries;  // sorted, deduplicated at 1e-30 relative
  std::size_t zeros = 0;
  std::size_t points = 0;
  std::optional<Real> min_magnitude() const;
  std::optional<Real> min_gap() const;
};

ValueSpectrum value_spectrum(const DecomposableForm& f, const HeightWindow& w,
                             const std::optional<Real>& bound = std::nullopt, Execution mode = Execution::Parallel);
/// Every point at working precision; the oracle for the fast path.
ValueSpectrum value_spectrum_reference(const DecomposableForm& f, const HeightWindow& w,
                                       const std::optional<Real>& bound = std::nullopt);

enum class ReconstructionStatus { Reconstructed, NoRationalReconstruction, Inconclusive };
std::string status_name(ReconstructionStatus s);

struct ReconstructionResult {
  ReconstructionStatus status = ReconstructionStatus::Inconclusive;
  std::vector<LocalScalar> alpha;       // per place, f_v = α_v g
  std::vector<FieldElement> g;          // primitive, over monomials(n, m)
  std::string evidence;                 // first disagreeing coordinate
};

struct ReconstructionOptions {
  BigInt max_denominator{1000000};
  Real accept{"1e-40"};  // residual confirming a rational coordinate
  Real reject{"1e-20"};  // residual above which a coordinate is irrational
};

ReconstructionResult rationality_reconstruct(const DecomposableForm& f, const ReconstructionOptions& opt = {});

struct Cluster {
  Real center;  // member of largest height
  std::vector<std::size_t> members;  // indices into the spectrum
  std::vector<std::size_t> per_window;  // members within the window radius
};

struct DiscretenessReport {
  std::string verdict;     // "discrete-trend" or "accumulation-detected"
  std::string prediction;  // "discrete", "non-discrete" or "none"
  std::string agreement;   // "consistent", "ANOMALY" or "no-prediction"
  std::vector<std::int64_t> heights;
  std::vector<Real> radii;
  std::vector<Cluster> clusters;  // accumulating clusters, by center
  std::optional<Real> min_magnitude;
  std::optional<LatticePoint> min_witness;
  std::optional<ReconstructionResult> reconstruction;
  ValueSpectrum spectrum;  // at the largest height
};

struct DiscretenessOptions {
  Real bound{10};
  Real radius{"0.1"};  // at the first height, shrinking like 1/H
  std::size_t new_members = 3;
  int denom = 0;
  double cap = 1e9;
};

DiscretenessReport discreteness_report(const DecomposableForm& f, const std::vector<std::int64_t>& heights,
                                       const DiscretenessOptions& opt = {}, Execution mode = Execution::Parallel);

/// N_{K/Q}(x_1 μ_1 + … + x_d μ_d) over Q with S = {∞}, one factor per
/// embedding and exact rational expansion.
DecomposableForm norm_form(const FieldPtr& field, const std::vector<FieldElement>& basis);
/// Exact expanded coefficients of a norm form.
std::vector<Rational> norm_form_coefficients(const FieldPtr& field, const std::vector<FieldElement>& basis);

/// Real input with an exact value when it is rational.
struct RealSpec {
  Real value;
  std::optional<Rational> exact;
};

struct LittlewoodRecord {
  std::int64_t n;
  Real value;
};

struct LittlewoodResult {
  Real min_value;
  std::int64_t argmin = 0;
  std::vector<LittlewoodRecord> records;  // strict prefix minima
};

/// min over 1 <= n <= N of n⟨nα⟩⟨nβ⟩, smallest n on ties.
LittlewoodResult littlewood_scan(const RealSpec& alpha, const RealSpec& beta, std::int64_t N,
                                 Execution mode = Execution::Parallel);
/// Direct evaluation at working precision for every n.
LittlewoodResult littlewood_reference(const RealSpec& alpha, const RealSpec& beta, std::int64_t N);

}  // namespace slab
