#pragma once

// Run configuration: schema validation with JSON-pointer errors, defaults,
// and the small spec languages for points, coefficients, forms and grids.

#include "slab/dynamics.hpp"
#include "slab/forms.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slab {

struct RunConfig {
  FieldPtr field;
  std::vector<Place> places;  // S: every archimedean place, then the finite ones
  std::vector<std::int64_t> finite_primes;
  std::vector<FieldElement> s_units;  // configured generators, possibly empty
  int precision = 50;
  HeightWindow window{50, 5, 1e8};
  int steps = 30;
  int n = 2;
  nlohmann::json blocks = nlohmann::json::object();  // subcommand blocks as given
};

/// Reads a file path or, when the text starts with '{', inline JSON.
nlohmann::json read_config_json(const std::string& path_or_json);
RunConfig parse_config(const std::string& path_or_json);
RunConfig parse_config(const nlohmann::json& j);

/// SchemaError carrying a JSON pointer.
[[noreturn]] void schema_error(const std::string& pointer, const std::string& what);

/// Position of the place with this label in S.
std::size_t place_index(const RunConfig& cfg, const std::string& label, const std::string& pointer);

/// "identity", "unipotent-pair", "anisotropic", {"rational": rows} or
/// {"matrices": {label: rows}}. Command-line forms "rational:1,1;0,1" and
/// "file:path" are translated by point_spec_from_text.
OrbitPoint parse_point(const RunConfig& cfg, const nlohmann::json& spec, const std::string& pointer);
nlohmann::json point_spec_from_text(const std::string& text);

/// Integer, "p/q", decimal string or surd {"a", "b", "d"} for a + b√d, seen
/// at the place v. Decimal and non-K surd values have no exact form.
LocalScalar parse_coefficient(const RunConfig& cfg, const nlohmann::json& c, const Place& v,
                              const std::string& pointer);
/// Exact element of K; rejects decimals.
FieldElement parse_element(const RunConfig& cfg, const nlohmann::json& c, const std::string& pointer);
RealSpec parse_real_spec(const nlohmann::json& c, const std::string& pointer);

/// {"places": [labels], "factors": rows or {label: rows}} or {"probe": name}.
DecomposableForm parse_form(const RunConfig& cfg, const nlohmann::json& spec, const std::string& pointer);

/// One grid per active place: "a:b:steps" (steps + 1 evenly spaced values)
/// or "k1:k2" (integers).
std::vector<PlaceGrid> parse_grid(const RunConfig& cfg, const std::vector<std::size_t>& R,
                                  const std::vector<std::string>& specs, const std::string& pointer);

}  // namespace slab
