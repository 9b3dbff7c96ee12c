#pragma once

// Diagonal torus actions on SL_n(K_S)/SL_n(O): trajectories of the window
// systole along rays, their empirical classification, exponent-grid surveys
// and expanding torus elements for sets of root positions.

#include "slab/lattice.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slab {

enum class Provenance { Identity, Rational, Explicit };
std::string provenance_name(Provenance p);

struct OrbitPoint {
  SLattice lattice;  // representative g and the places S
  Provenance provenance = Provenance::Explicit;
};

OrbitPoint identity_point(const FieldPtr& field, const std::vector<Place>& S, int n);
/// π(q) for q ∈ SL_n(K), embedded at every place.
OrbitPoint rational_point(const FieldPtr& field, const std::vector<Place>& S,
                          const std::vector<std::vector<FieldElement>>& q);

/// Element of the split diagonal torus: entry i at v is e^{x_{v,i}} at
/// archimedean places and p^{x_{v,i}} (x integral) at finite places.
struct TorusElement {
  std::vector<std::vector<Real>> log_diag;  // x_{v,i}, summing to zero per place
};

TorusElement operator*(const TorusElement& a, const TorusElement& b);

/// Entries e^{s·c_i} at archimedean places and p^{k·c_i} at finite places,
/// where amounts[v] is s or k (an integer at finite places).
TorusElement torus_from_exponents(const std::vector<Place>& S, const std::vector<std::vector<int>>& exponents,
                                  const std::vector<Real>& amounts);

OrbitPoint act(const TorusElement& t, const OrbitPoint& x);

struct RayStep {
  Real param;
  std::vector<Real> amounts;  // per place of S
};

struct RaySchedule {
  std::vector<std::vector<int>> exponents;  // c_v per place, summing to zero
  std::vector<RayStep> steps;
};

/// Straight ray with amount direction[v]·t·scale[v] at step t = 0..steps.
RaySchedule straight_ray(const std::vector<Place>& S, int n, const std::vector<int>& direction, int steps);
/// Default exponent vector (1, 0, …, 0, -1).
std::vector<std::vector<int>> default_exponents(std::size_t places, int n);
/// Archimedean step length: log of the smallest S-prime, or log 2 without one.
Real archimedean_step(const std::vector<Place>& S);

struct TrajectoryRow {
  Real param;
  std::vector<Real> amounts;
  Real min_content;
  Real min_supnorm;
  std::string witness;  // content witness
};

struct TrajectoryReport {
  std::vector<TrajectoryRow> rows;
};

TrajectoryReport trajectory(const OrbitPoint& x, const RaySchedule& ray, const HeightWindow& w);

struct ClassifyThresholds {
  Real low{"1e-3"};
  Real high_fraction{"0.1"};
};

/// "diverging-trend", "bounded-below", "recurrent" or "inconclusive", read
/// from the content-systole column. Always empirical.
std::string classify_ray(const std::vector<Real>& systoles, const ClassifyThresholds& th = {});
std::string classify_ray(const TrajectoryReport& report, const ClassifyThresholds& th = {});

/// Amount grid for one active place: values[i] is s or k of column i.
struct PlaceGrid {
  std::size_t place;  // index into S
  std::vector<Real> values;
};

/// Default grid: i·archimedean_step for archimedean places and i for finite
/// places, i = -steps..steps.
std::vector<PlaceGrid> default_grid(const std::vector<Place>& S, const std::vector<std::size_t>& R, int steps);

struct SurveyCell {
  std::vector<std::size_t> index;  // position in each place grid
  std::vector<Real> amounts;       // per place of S
  SystoleResult systole;
  std::string witness;
};

struct SurveyRay {
  std::string name;  // e.g. "(+1,-1)" or "staircase(+1;+1)"
  std::vector<std::size_t> cells;
  std::string classification;
};

struct SurveyVerdict {
  std::string expected;  // "divergent", "non-divergent" or "none"
  std::string verdict;   // "consistent", "ANOMALY" or "no-prediction"
  std::vector<SurveyCell> cells;
  std::vector<SurveyRay> rays;
};

/// Systole heat map over the product grid and classification of the rays
/// from the zero cell: straight rays in every sign pattern, plus staircases
/// (one place first, then the other) when two places are active.
SurveyVerdict divergence_survey(const OrbitPoint& x, const std::vector<std::size_t>& R,
                                const std::vector<PlaceGrid>& grid, const HeightWindow& w,
                                const std::optional<std::string>& expected_override = std::nullopt,
                                Execution mode = Execution::Parallel);

/// x = π((u, 1, …, 1)) with u = (1 1; 0 1) at the first place of S.
OrbitPoint locally_divergent_example(const FieldPtr& field, const std::vector<Place>& S);

struct ExpandingElement {
  Place place;
  Rational tau;
  Rational base;                  // τ at archimedean places, p at finite places
  std::vector<Rational> exponents;  // t_i = base^{exponents_i}
  TorusElement torus;
};

/// Diagonal t at v with |t_i/t_j|_v >= τ for every position (i, j), 0-based.
ExpandingElement expanding_element(const std::vector<std::pair<int, int>>& positions, int n, const Rational& tau,
                                   const Place& v);

/// Exact check of |t_i/t_j|_v >= τ on every position.
bool verify_expansion(const ExpandingElement& t, const std::vector<std::pair<int, int>>& positions);

}  // namespace slab
