#include "slab/config.hpp"
#include "slab/error.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace slab {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& block_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"systole", {"point", "exponents", "direction", "params", "from", "to", "steps"}},
      {"mahler", {"point", "exponents", "direction", "params", "from", "to", "steps", "radius"}},
      {"survey", {"point", "active_places", "grid", "expected"}},
      {"nilpotent", {"point", "radius"}},
      {"expanding", {"place", "positions", "tau"}},
      {"spectrum", {"form", "bound", "heights", "radius", "new_members"}},
      {"reconstruct", {"form"}},
      {"norm_form", {"basis"}},
      {"littlewood", {"alpha", "beta", "N"}},
  };
  return keys;
}

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + escape(key); }
std::string child(const std::string& pointer, std::size_t i) { return pointer + "/" + std::to_string(i); }

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& pointer) {
  if (!j.is_object()) schema_error(pointer, "expected an object");
  for (const auto& [k, _] : j.items()) {
    if (!allowed.count(k)) schema_error(child(pointer, k), "unknown key '" + k + "'");
  }
}

std::int64_t as_int(const json& j, const std::string& pointer, std::int64_t lo, std::int64_t hi) {
  if (!j.is_number_integer()) schema_error(pointer, "expected an integer");
  const auto x = j.get<std::int64_t>();
  if (x < lo || x > hi) schema_error(pointer, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

Rational as_rational(const json& j, const std::string& pointer) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s.find_first_of(".eE") == std::string::npos) return parse_rational(s);
    }
  } catch (const std::exception&) {
  }
  schema_error(pointer, "expected an integer or a 'p/q' string");
}

BigInt as_bigint(const json& j, const std::string& pointer) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  schema_error(pointer, "expected an integer");
}

std::vector<Rational> rational_vector(const json& j, const std::string& pointer) {
  if (!j.is_array()) schema_error(pointer, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_rational(j[i], child(pointer, i)));
  return out;
}

// √d as an element of K when K = Q(√d') with d' = d·k².
std::optional<FieldElement> sqrt_in_field(const FieldPtr& K, const BigInt& d) {
  if (K->degree() != 2) return std::nullopt;
  const auto& f = K->min_poly_z();
  if (f[1] != 0) return std::nullopt;
  const BigInt dp = -f[0];
  if (d == 0 || dp % d != 0) return std::nullopt;
  const BigInt q = dp / d;
  if (q <= 0) return std::nullopt;
  const BigInt k = sqrt(q);
  if (k * k != q) return std::nullopt;
  return FieldElement(K, {Rational(0), Rational(BigInt(1), k)});
}

// Principal value of a + b√d.
Complex surd_value(const Rational& a, const Rational& b, const BigInt& d) {
  const Real root = sqrt(abs(Real(d)));
  if (d < 0) return Complex(to_real(a), to_real(b) * root);
  return Complex(to_real(a) + to_real(b) * root);
}

std::vector<std::vector<LocalScalar>> coefficient_rows(const RunConfig& cfg, const json& rows, const Place& v,
                                                       const std::string& pointer) {
  if (!rows.is_array() || rows.empty()) schema_error(pointer, "expected a non-empty array of rows");
  std::vector<std::vector<LocalScalar>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto p = child(pointer, i);
    if (!rows[i].is_array() || rows[i].size() != rows[0].size()) schema_error(p, "rows must have equal length");
    std::vector<LocalScalar> row;
    for (std::size_t j = 0; j < rows[i].size(); ++j) row.push_back(parse_coefficient(cfg, rows[i][j], v, child(p, j)));
    out.push_back(std::move(row));
  }
  return out;
}

OrbitPoint anisotropic_point(const RunConfig& cfg) {
  if (!cfg.field->is_rational_field() || cfg.places.size() != 1 || cfg.n != 2) {
    throw Error(ErrorCode::ShapeMismatch, "the anisotropic point needs K = Q, S = {inf} and n = 2");
  }
  // rows (1, √2) and (-1, √2) scaled to determinant 1
  const Real s = sqrt(Real(2)), c = 1 / sqrt(2 * s);
  return {make_lattice(cfg.field, cfg.places, {numeric_matrix({{Complex(c), Complex(s * c)}, {Complex(-c), Complex(s * c)}})}),
          Provenance::Explicit};
}

template <class F>
auto surfaced(const std::string& pointer, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaError) throw;
    schema_error(pointer, e.what());
  }
}

}  // namespace

void schema_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::SchemaError, (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

RunConfig parse_config(const std::string& path_or_json) { return parse_config(read_config_json(path_or_json)); }

json read_config_json(const std::string& path_or_json) {
  std::string text = path_or_json;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(path_or_json);
    if (!in) throw Error(ErrorCode::SchemaError, "cannot read config '" + path_or_json + "'");
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("/: invalid JSON: ") + e.what());
  }
  return j;
}

RunConfig parse_config(const json& j) {
  std::set<std::string> top = {"min_poly", "integral_basis", "places", "finite_primes", "s_units", "precision",
                               "height",   "denom",          "cap",    "steps",         "n"};
  for (const auto& [k, _] : block_keys()) top.insert(k);
  only_keys(j, top, "");

  RunConfig cfg;
  if (!j.contains("min_poly")) schema_error("/min_poly", "required key missing");
  const auto& mp = j["min_poly"];
  if (!mp.is_array() || mp.empty()) schema_error("/min_poly", "expected a non-empty array");
  std::vector<BigInt> coeffs;
  for (std::size_t i = 0; i < mp.size(); ++i) coeffs.push_back(as_bigint(mp[i], child("/min_poly", i)));
  std::vector<std::vector<Rational>> basis;
  if (j.contains("integral_basis")) {
    const auto& b = j["integral_basis"];
    if (!b.is_array()) schema_error("/integral_basis", "expected an array");
    for (std::size_t i = 0; i < b.size(); ++i) basis.push_back(rational_vector(b[i], child("/integral_basis", i)));
  }
  cfg.field = surfaced("/min_poly", [&] { return create_field(coeffs, basis); });

  json primes = json::array();
  std::string primes_ptr = "/finite_primes";
  if (j.contains("places")) {
    only_keys(j["places"], {"archimedean", "finite_primes"}, "/places");
    if (j["places"].contains("archimedean") && j["places"]["archimedean"] != "all") {
      schema_error("/places/archimedean", "only \"all\" is supported");
    }
    if (j["places"].contains("finite_primes")) {
      if (j.contains("finite_primes")) schema_error("/places/finite_primes", "finite primes given twice");
      primes = j["places"]["finite_primes"];
      primes_ptr = "/places/finite_primes";
    }
  }
  if (j.contains("finite_primes")) primes = j["finite_primes"];
  if (!primes.is_array()) schema_error(primes_ptr, "expected an array");

  cfg.places = archimedean_places(cfg.field);
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto p_ptr = child(primes_ptr, i);
    const auto p = as_int(primes[i], p_ptr, 2, 1000000);
    if (std::find(cfg.finite_primes.begin(), cfg.finite_primes.end(), p) != cfg.finite_primes.end()) {
      schema_error(p_ptr, "repeated prime");
    }
    if (!cfg.finite_primes.empty() && p < cfg.finite_primes.back()) schema_error(p_ptr, "primes must ascend");
    cfg.finite_primes.push_back(p);
    auto above = surfaced(p_ptr, [&] { return finite_places(cfg.field, p); });
    cfg.places.insert(cfg.places.end(), above.begin(), above.end());
  }

  if (j.contains("s_units")) {
    const auto& u = j["s_units"];
    if (!u.is_array()) schema_error("/s_units", "expected an array");
    for (std::size_t i = 0; i < u.size(); ++i) {
      auto c = rational_vector(u[i], child("/s_units", i));
      if (static_cast<int>(c.size()) != cfg.field->degree()) schema_error(child("/s_units", i), "wrong length");
      cfg.s_units.emplace_back(cfg.field, std::move(c));
    }
  }

  if (j.contains("precision")) cfg.precision = static_cast<int>(as_int(j["precision"], "/precision", 17, kRealDigits));
  if (j.contains("height")) cfg.window.height = as_int(j["height"], "/height", 1, 1000000000);
  if (j.contains("denom")) cfg.window.denom = static_cast<int>(as_int(j["denom"], "/denom", 0, 60));
  if (j.contains("cap")) {
    if (!j["cap"].is_number() || !(j["cap"].get<double>() >= 1)) schema_error("/cap", "expected a number >= 1");
    cfg.window.cap = j["cap"].get<double>();
  }
  if (j.contains("steps")) cfg.steps = static_cast<int>(as_int(j["steps"], "/steps", 1, 100000));
  if (j.contains("n")) cfg.n = static_cast<int>(as_int(j["n"], "/n", 2, 4));

  for (const auto& [name, keys] : block_keys()) {
    if (!j.contains(name)) continue;
    only_keys(j[name], keys, "/" + name);
    cfg.blocks[name] = j[name];
  }
  return cfg;
}

std::size_t place_index(const RunConfig& cfg, const std::string& label, const std::string& pointer) {
  for (std::size_t v = 0; v < cfg.places.size(); ++v) {
    if (cfg.places[v].label() == label) return v;
  }
  schema_error(pointer, "no place labelled '" + label + "'");
}

LocalScalar parse_coefficient(const RunConfig& cfg, const json& c, const Place& v, const std::string& pointer) {
  const FieldPtr& K = cfg.field;
  auto exact_scalar = [&](const FieldElement& x) {
    return LocalScalar{v.archimedean() ? embed(x, v) : Complex(), x};
  };
  if (c.is_object()) {
    only_keys(c, {"a", "b", "d"}, pointer);
    for (const char* k : {"a", "b", "d"}) {
      if (!c.contains(k)) schema_error(child(pointer, k), "required key missing");
    }
    const Rational a = as_rational(c["a"], child(pointer, "a"));
    const Rational b = as_rational(c["b"], child(pointer, "b"));
    const BigInt d = as_bigint(c["d"], child(pointer, "d"));
    if (d == 0 || d == 1) schema_error(child(pointer, "d"), "d must not be 0 or 1");
    if (b == 0) return exact_scalar(FieldElement::from_rational(K, a));
    if (auto r = sqrt_in_field(K, d)) {
      return exact_scalar(FieldElement::from_rational(K, a) + FieldElement::from_rational(K, b) * *r);
    }
    if (!v.archimedean()) schema_error(pointer, "surd outside K has no value at a finite place");
    if (K->is_rational_field()) {
      auto F = surfaced(child(pointer, "d"), [&] { return create_field({-d, BigInt(0), BigInt(1)}); });
      return {surd_value(a, b, d), FieldElement(F, {a, b})};
    }
    return {surd_value(a, b, d), std::nullopt};
  }
  if (c.is_string()) {
    const auto s = c.get<std::string>();
    if (s.find_first_of(".eE") != std::string::npos) {
      if (!v.archimedean()) schema_error(pointer, "decimal coefficient has no value at a finite place");
      try {
        return {Complex(parse_real(s)), std::nullopt};
      } catch (const std::exception&) {
        schema_error(pointer, "invalid decimal '" + s + "'");
      }
    }
  }
  return exact_scalar(FieldElement::from_rational(K, as_rational(c, pointer)));
}

FieldElement parse_element(const RunConfig& cfg, const json& c, const std::string& pointer) {
  if (c.is_array()) {
    auto coords = rational_vector(c, pointer);
    if (static_cast<int>(coords.size()) != cfg.field->degree()) schema_error(pointer, "wrong number of coordinates");
    return FieldElement(cfg.field, std::move(coords));
  }
  const Place& v = cfg.places.front();
  auto x = parse_coefficient(cfg, c, v, pointer);
  if (!x.exact || x.exact->field() != cfg.field) schema_error(pointer, "expected an exact element of K");
  return *x.exact;
}

RealSpec parse_real_spec(const json& c, const std::string& pointer) {
  if (c.is_string()) {
    const auto s = c.get<std::string>();
    if (s == "pi") return {pi(), std::nullopt};
    if (s == "e") return {exp_real(Real(1)), std::nullopt};
    if (s.find_first_of(".eE") != std::string::npos) {
      try {
        return {parse_real(s), std::nullopt};
      } catch (const std::exception&) {
        schema_error(pointer, "invalid decimal '" + s + "'");
      }
    }
  }
  if (c.is_object()) {
    only_keys(c, {"a", "b", "d"}, pointer);
    const Rational a = as_rational(c.value("a", json(0)), child(pointer, "a"));
    const Rational b = as_rational(c.value("b", json(0)), child(pointer, "b"));
    const BigInt d = as_bigint(c.value("d", json(2)), child(pointer, "d"));
    if (d <= 0) schema_error(child(pointer, "d"), "a real surd needs d > 0");
    if (b == 0) return {to_real(a), a};
    return {surd_value(a, b, d).re, std::nullopt};
  }
  const Rational q = as_rational(c, pointer);
  return {to_real(q), q};
}

OrbitPoint parse_point(const RunConfig& cfg, const json& spec, const std::string& pointer) {
  return surfaced(pointer, [&]() -> OrbitPoint {
    if (spec.is_string()) {
      const auto s = spec.get<std::string>();
      if (s == "identity") return identity_point(cfg.field, cfg.places, cfg.n);
      if (s == "unipotent-pair") return locally_divergent_example(cfg.field, cfg.places);
      if (s == "anisotropic") return anisotropic_point(cfg);
      schema_error(pointer, "unknown point '" + s + "'");
    }
    if (spec.is_object() && spec.contains("rational")) {
      only_keys(spec, {"rational"}, pointer);
      const auto p = child(pointer, "rational");
      const auto& rows = spec["rational"];
      if (!rows.is_array()) schema_error(p, "expected an array of rows");
      std::vector<std::vector<FieldElement>> q;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array()) schema_error(child(p, i), "expected a row");
        std::vector<FieldElement> row;
        for (std::size_t k = 0; k < rows[i].size(); ++k) row.push_back(parse_element(cfg, rows[i][k], child(child(p, i), k)));
        q.push_back(std::move(row));
      }
      return rational_point(cfg.field, cfg.places, q);
    }
    if (spec.is_object() && spec.contains("matrices")) {
      only_keys(spec, {"matrices"}, pointer);
      const auto p = child(pointer, "matrices");
      const auto& m = spec["matrices"];
      if (!m.is_object()) schema_error(p, "expected an object keyed by place");
      std::vector<LocalMatrix> g(cfg.places.size());
      for (const auto& [label, rows] : m.items()) {
        const auto v = place_index(cfg, label, child(p, label));
        g[v] = coefficient_rows(cfg, rows, cfg.places[v], child(p, label));
      }
      for (std::size_t v = 0; v < g.size(); ++v) {
        if (g[v].empty()) schema_error(p, "missing matrix for place " + cfg.places[v].label());
      }
      return {make_lattice(cfg.field, cfg.places, std::move(g)), Provenance::Explicit};
    }
    schema_error(pointer, "expected a point name, {\"rational\": ...} or {\"matrices\": ...}");
  });
}

json point_spec_from_text(const std::string& text) {
  if (text.rfind("rational:", 0) == 0) {
    json rows = json::array();
    std::istringstream rs(text.substr(9));
    std::string row;
    while (std::getline(rs, row, ';')) {
      json r = json::array();
      std::istringstream es(row);
      std::string entry;
      while (std::getline(es, entry, ',')) r.push_back(entry);
      rows.push_back(r);
    }
    return {{"rational", rows}};
  }
  if (text.rfind("file:", 0) == 0) {
    std::ifstream in(text.substr(5));
    if (!in) throw Error(ErrorCode::SchemaError, "--point: cannot read '" + text.substr(5) + "'");
    try {
      return json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::SchemaError, std::string("--point: invalid JSON: ") + e.what());
    }
  }
  return text;
}

DecomposableForm parse_form(const RunConfig& cfg, const json& spec, const std::string& pointer) {
  if (spec.is_object() && spec.contains("probe")) {
    only_keys(spec, {"probe"}, pointer);
    const auto name = spec["probe"];
    if (name == "dependent-factor") return dependent_factor_probe();
    if (name == "indecomposable") return indecomposable_probe();
    schema_error(child(pointer, "probe"), "unknown probe");
  }
  only_keys(spec, {"places", "factors"}, pointer);
  std::vector<std::size_t> idx;
  if (spec.contains("places")) {
    const auto& pl = spec["places"];
    if (!pl.is_array() || pl.empty()) schema_error(child(pointer, "places"), "expected a non-empty array of labels");
    for (std::size_t i = 0; i < pl.size(); ++i) {
      const auto p = child(child(pointer, "places"), i);
      if (!pl[i].is_string()) schema_error(p, "expected a place label");
      idx.push_back(place_index(cfg, pl[i].get<std::string>(), p));
    }
  } else {
    for (std::size_t v = 0; v < cfg.places.size(); ++v) idx.push_back(v);
  }
  if (!spec.contains("factors")) schema_error(child(pointer, "factors"), "required key missing");
  const auto& fac = spec["factors"];
  const auto fp = child(pointer, "factors");
  std::vector<Place> S;
  std::vector<std::vector<LinearForm>> factors;
  for (auto v : idx) {
    const Place& pl = cfg.places[v];
    S.push_back(pl);
    if (fac.is_object()) {
      if (!fac.contains(pl.label())) schema_error(fp, "missing factors for place " + pl.label());
      factors.push_back(coefficient_rows(cfg, fac[pl.label()], pl, child(fp, pl.label())));
    } else {
      factors.push_back(coefficient_rows(cfg, fac, pl, fp));
    }
  }
  if (fac.is_object()) {
    for (const auto& [label, _] : fac.items()) {
      bool used = false;
      for (const auto& pl : S) used = used || pl.label() == label;
      if (!used) schema_error(child(fp, label), "place not in the form");
    }
  }
  return surfaced(pointer, [&] { return make_form(cfg.field, S, std::move(factors)); });
}

std::vector<PlaceGrid> parse_grid(const RunConfig& cfg, const std::vector<std::size_t>& R,
                                  const std::vector<std::string>& specs, const std::string& pointer) {
  if (specs.size() != R.size()) schema_error(pointer, "one grid per active place");
  std::vector<PlaceGrid> out;
  for (std::size_t a = 0; a < R.size(); ++a) {
    const auto p = child(pointer, a);
    std::vector<std::string> parts;
    std::istringstream is(specs[a]);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(part);
    PlaceGrid g{R[a], {}};
    try {
      if (parts.size() == 3) {
        const Real lo = parse_real(parts[0]), hi = parse_real(parts[1]);
        const int steps = std::stoi(parts[2]);
        if (steps < 1 || !(hi > lo)) schema_error(p, "expected lo < hi and steps >= 1");
        for (int i = 0; i <= steps; ++i) g.values.push_back(lo + (hi - lo) * i / steps);
        if (!cfg.places[R[a]].archimedean()) {
          for (const auto& x : g.values) {
            if (x != floor(x)) schema_error(p, "finite-place grids need integer values");
          }
        }
      } else if (parts.size() == 2) {
        const int lo = std::stoi(parts[0]), hi = std::stoi(parts[1]);
        if (hi <= lo) schema_error(p, "expected k1 < k2");
        for (int k = lo; k <= hi; ++k) g.values.emplace_back(k);
      } else {
        schema_error(p, "expected a:b:steps or k1:k2");
      }
    } catch (const std::logic_error&) {
      schema_error(p, "malformed grid '" + specs[a] + "'");
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace slab
