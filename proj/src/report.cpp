#include "slab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slab {

namespace {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json rational_json(const Rational& q) {
  if (den(q) == 1 && abs(num(q)) < BigInt(1) << 53) return num(q).convert_to<long long>();
  return to_string(q);
}

json element_json(const FieldElement& x) {
  if (x.is_rational()) return rational_json(x.coords()[0]);
  json coords = json::array();
  for (const auto& c : x.coords()) coords.push_back(rational_json(c));
  return coords;
}

json scalar_json(const LocalScalar& s, const Place& v) {
  json out = json::object();
  if (s.exact) out["exact"] = element_json(*s.exact);
  if (v.archimedean()) {
    out["re"] = real_json(s.approx.re);
    if (v.kind == PlaceKind::Complex || !s.approx.im.is_zero()) out["im"] = real_json(s.approx.im);
  }
  return out;
}

std::string point_text(const LatticePoint& z, int n, int d, const std::vector<std::int64_t>& primes) {
  return format_point(z, n, d, primes);
}

json place_labels(const std::vector<Place>& S) {
  json out = json::array();
  for (const auto& v : S) out.push_back(v.label());
  return out;
}

std::string place_axis(const Place& v) { return v.archimedean() ? "s" : "k"; }

}  // namespace

std::string emit_csv(const Csv& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << csv_field(table.header[i]);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
  return os.str();
}

std::string emit_json(const json& j) { return j.dump(2) + "\n"; }

std::string real_text(const Real& x) { return to_string(x, 17); }

json real_json(const Real& x) {
  const double d = x.convert_to<double>();
  if (!std::isfinite(d) || (d == 0 && !x.is_zero())) return real_text(x);
  return std::stod(real_text(x));
}

json field_json(const FieldPtr& field, const std::vector<Place>& S, const SUnitGroup& units) {
  json poly = json::array();
  for (const auto& c : field->min_poly_z()) poly.push_back(c.str());
  json places = json::array();
  for (const auto& v : S) {
    json p = {{"label", v.label()}};
    if (v.archimedean()) {
      p["kind"] = v.kind == PlaceKind::Real ? "real" : "complex";
      p["root"] = {real_json(v.root.re), real_json(v.root.im)};
    } else {
      p["kind"] = "finite";
      p["p"] = v.p.str();
      p["residue_degree"] = v.residue_degree;
      json factor = json::array();
      for (const auto& c : v.factor) factor.push_back(c.str());
      p["factor"] = factor;
    }
    places.push_back(p);
  }
  json gens = json::array();
  for (const auto& g : units.generators) gens.push_back(element_json(g));
  return {{"degree", field->degree()},
          {"min_poly", poly},
          {"discriminant", field->discriminant().str()},
          {"signature", {field->real_places(), field->complex_places()}},
          {"places", places},
          {"s_units", {{"rank", units.rank}, {"generators", gens}, {"torsion_order", units.torsion_order}}}};
}

json systole_json(const SystoleResult& s, const SLattice& lat) {
  const auto primes = s_primes(lat.places);
  const int d = lat.field->degree();
  return {{"places", place_labels(lat.places)},
          {"min_content", real_json(s.min_content)},
          {"content_witness", point_text(s.content_witness, lat.n, d, primes)},
          {"min_supnorm", real_json(s.min_supnorm)},
          {"supnorm_witness", point_text(s.supnorm_witness, lat.n, d, primes)},
          {"points", s.count}};
}

json mahler_json(const MahlerVerdict& m, const std::vector<SLattice>& lats, const std::vector<Real>& params,
                 const Real& radius) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    json e = systole_json(m.entries[i].systole, lats[i]);
    e.erase("places");
    e["param"] = real_json(params[i]);
    e["content_passes"] = m.entries[i].content_passes;
    e["supnorm_passes"] = m.entries[i].supnorm_passes;
    entries.push_back(e);
  }
  return {{"radius", real_json(radius)}, {"family_passes", m.family_passes}, {"verdict", m.verdict},
          {"entries", entries}};
}

json survey_json(const SurveyVerdict& v, const std::vector<Place>& S, const std::vector<std::size_t>& R) {
  json rays = json::array();
  for (const auto& r : v.rays) {
    json sys = json::array();
    for (auto c : r.cells) sys.push_back(real_json(v.cells[c].systole.min_content));
    rays.push_back({{"name", r.name}, {"classification", r.classification}, {"min_content", sys}});
  }
  json active = json::array();
  for (auto i : R) active.push_back(S[i].label());
  return {{"places", place_labels(S)}, {"active_places", active}, {"expected", v.expected},
          {"verdict", v.verdict}, {"cells", v.cells.size()}, {"rays", rays}, {"empirical", true}};
}

json nilpotent_json(const NilpotentSpan& span, const Real& radius) {
  auto mat = [](const std::vector<std::vector<FieldElement>>& m) {
    json out = json::array();
    for (const auto& row : m) {
      json r = json::array();
      for (const auto& x : row) r.push_back(element_json(x));
      out.push_back(r);
    }
    return out;
  };
  json gens = json::array(), basis = json::array();
  for (const auto& g : span.generators) gens.push_back(mat(g));
  for (const auto& b : span.basis) basis.push_back(mat(b));
  return {{"radius", real_json(radius)}, {"nilpotent", span.nilpotent}, {"generators", gens}, {"span", basis}};
}

json expanding_json(const ExpandingElement& t, const std::vector<std::pair<int, int>>& positions) {
  json exps = json::array(), pos = json::array();
  for (const auto& e : t.exponents) exps.push_back(rational_json(e));
  for (auto [i, j] : positions) pos.push_back({i, j});
  return {{"place", t.place.label()}, {"tau", rational_json(t.tau)},  {"base", rational_json(t.base)},
          {"exponents", exps},        {"positions", pos},               {"verified", verify_expansion(t, positions)}};
}

json spectrum_json(const ValueSpectrum& s, const DecomposableForm& f) {
  json out = {{"height", s.window.height},
              {"points", s.points},
              {"zeros", s.zeros},
              {"distinct", s.entries.size()},
              {"places", place_labels(f.places)}};
  out["bound"] = s.bound ? real_json(*s.bound) : json(nullptr);
  out["min_magnitude"] = s.min_magnitude() ? real_json(*s.min_magnitude()) : json(nullptr);
  out["min_gap"] = s.min_gap() ? real_json(*s.min_gap()) : json(nullptr);
  if (!f.label.empty()) out["label"] = f.label;
  return out;
}

json discreteness_json(const DiscretenessReport& r, const DecomposableForm& f) {
  const int d = f.field->degree();
  json clusters = json::array();
  for (const auto& c : r.clusters) {
    json members = json::array();
    for (auto k : c.members) {
      const auto& e = r.spectrum.entries[k];
      members.push_back({{"magnitude", real_json(e.magnitude)}, {"height", e.height},
                         {"witness", format_point(e.witness, f.n, d, {})}});
    }
    json per = json::array();
    for (auto x : c.per_window) per.push_back(x);
    clusters.push_back({{"center", real_json(c.center)}, {"members", members}, {"per_window", per}});
  }
  json radii = json::array();
  for (const auto& x : r.radii) radii.push_back(real_json(x));
  json out = {{"verdict", r.verdict},     {"prediction", r.prediction}, {"agreement", r.agreement},
              {"heights", r.heights},     {"radii", radii},             {"clusters", clusters},
              {"spectrum", spectrum_json(r.spectrum, f)}, {"empirical", true}};
  out["min_magnitude"] = r.min_magnitude ? real_json(*r.min_magnitude) : json(nullptr);
  out["min_witness"] = r.min_witness ? json(format_point(*r.min_witness, f.n, d, {})) : json(nullptr);
  if (r.reconstruction) out["reconstruction"] = reconstruction_json(*r.reconstruction, f);
  return out;
}

json reconstruction_json(const ReconstructionResult& r, const DecomposableForm& f) {
  json out = {{"status", status_name(r.status)}};
  if (!r.evidence.empty()) out["evidence"] = r.evidence;
  if (r.status == ReconstructionStatus::Reconstructed) {
    json g = json::array(), alpha = json::object();
    for (const auto& c : r.g) g.push_back(element_json(c));
    for (std::size_t v = 0; v < f.places.size(); ++v) alpha[f.places[v].label()] = scalar_json(r.alpha[v], f.places[v]);
    json mons = json::array();
    for (const auto& m : monomials(f.n, f.m)) mons.push_back(m);
    out["g"] = g;
    out["alpha"] = alpha;
    out["monomials"] = mons;
  }
  return out;
}

json norm_form_json(const DecomposableForm& f) {
  json coeffs = json::array(), mons = json::array(), factors = json::array();
  for (const auto& c : f.expansion[0]) coeffs.push_back(element_json(*c.exact));
  for (const auto& m : monomials(f.n, f.m)) mons.push_back(m);
  for (const auto& l : f.factors[0]) {
    json row = json::array();
    for (const auto& c : l) row.push_back({real_json(c.approx.re), real_json(c.approx.im)});
    factors.push_back(row);
  }
  return {{"coefficients", coeffs}, {"monomials", mons}, {"factors", factors}};
}

json littlewood_json(const LittlewoodResult& r, std::int64_t N) {
  return {{"N", N}, {"min_value", real_json(r.min_value)}, {"argmin", r.argmin}, {"records", r.records.size()}};
}

Csv trajectory_csv(const TrajectoryReport& t) {
  Csv out{{"param", "min_content", "min_supnorm", "witness"}, {}};
  for (const auto& r : t.rows) {
    out.rows.push_back({real_text(r.param), real_text(r.min_content), real_text(r.min_supnorm), r.witness});
  }
  return out;
}

Csv survey_csv(const SurveyVerdict& v, const std::vector<Place>& S, const std::vector<std::size_t>& R) {
  Csv out;
  std::vector<std::string> axes;
  for (auto i : R) axes.push_back(place_axis(S[i]));
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const bool repeated = std::count(axes.begin(), axes.end(), axes[a]) > 1;
    out.header.push_back(repeated ? axes[a] + std::to_string(a) : axes[a]);
  }
  for (const char* h : {"min_content", "min_supnorm", "witness"}) out.header.emplace_back(h);
  for (const auto& c : v.cells) {
    std::vector<std::string> row;
    for (auto i : R) row.push_back(real_text(c.amounts[i]));
    row.push_back(real_text(c.systole.min_content));
    row.push_back(real_text(c.systole.min_supnorm));
    row.push_back(c.witness);
    out.rows.push_back(std::move(row));
  }
  return out;
}

Csv spectrum_csv(const ValueSpectrum& s, const DecomposableForm& f) {
  Csv out{{"magnitude", "count", "witness"}, {}};
  for (const auto& e : s.entries) {
    out.rows.push_back({real_text(e.magnitude), std::to_string(e.count), format_point(e.witness, f.n, f.field->degree(), {})});
  }
  return out;
}

Csv littlewood_csv(const LittlewoodResult& r) {
  Csv out{{"n", "value"}, {}};
  for (const auto& x : r.records) out.rows.push_back({std::to_string(x.n), real_text(x.value)});
  return out;
}

}  // namespace slab
