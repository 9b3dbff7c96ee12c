#include "slab/cli.hpp"

#include "slab/config.hpp"
#include "slab/error.hpp"
#include "slab/report.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace slab {

using nlohmann::json;

namespace {

struct Artifacts {
  json report = json::object();
  std::optional<Csv> table;
  bool anomaly = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, sep)) out.push_back(part);
  return out;
}

json window_json(const HeightWindow& w) { return {{"height", w.height}, {"denom", w.denom}}; }

json block(const RunConfig& cfg, const std::string& name) {
  return cfg.blocks.contains(name) ? cfg.blocks[name] : json::object();
}

OrbitPoint point_of(const RunConfig& cfg, const json& b, const std::string& name, const CliOptions& opt) {
  if (opt.point) return parse_point(cfg, point_spec_from_text(*opt.point), "--point");
  return parse_point(cfg, b.value("point", json("identity")), "/" + name + "/point");
}

// Parameters and torus exponents of a systole sweep. Without explicit
// parameters the default straight ray with cfg.steps steps is used.
RaySchedule ray_of(const RunConfig& cfg, const json& b, const std::string& name) {
  const std::string ptr = "/" + name;
  const std::size_t P = cfg.places.size();
  std::vector<int> direction(P, 1);
  if (b.contains("direction")) {
    const auto& d = b["direction"];
    if (!d.is_array() || d.size() != P) schema_error(ptr + "/direction", "one integer per place");
    for (std::size_t v = 0; v < P; ++v) {
      if (!d[v].is_number_integer()) schema_error(ptr + "/direction/" + std::to_string(v), "expected an integer");
      direction[v] = d[v].get<int>();
    }
  }
  auto exponents = default_exponents(P, cfg.n);
  if (b.contains("exponents")) {
    const auto& e = b["exponents"];
    if (!e.is_array() || e.size() != P) schema_error(ptr + "/exponents", "one exponent vector per place");
    for (std::size_t v = 0; v < P; ++v) {
      const auto ev = ptr + "/exponents/" + std::to_string(v);
      if (!e[v].is_array() || e[v].size() != static_cast<std::size_t>(cfg.n)) schema_error(ev, "expected n integers");
      for (int i = 0; i < cfg.n; ++i) {
        if (!e[v][i].is_number_integer()) schema_error(ev + "/" + std::to_string(i), "expected an integer");
        exponents[v][i] = e[v][i].get<int>();
      }
    }
  }
  std::vector<Real> params;
  if (b.contains("params")) {
    const auto& p = b["params"];
    if (!p.is_array() || p.empty()) schema_error(ptr + "/params", "expected a non-empty array");
    for (std::size_t i = 0; i < p.size(); ++i) params.push_back(parse_real_spec(p[i], ptr + "/params/" + std::to_string(i)).value);
  } else if (b.contains("from") || b.contains("to")) {
    if (!b.contains("from") || !b.contains("to")) schema_error(ptr, "from and to go together");
    const Real lo = parse_real_spec(b["from"], ptr + "/from").value;
    const Real hi = parse_real_spec(b["to"], ptr + "/to").value;
    int steps = cfg.steps;
    if (b.contains("steps")) {
      if (!b["steps"].is_number_integer() || b["steps"].get<int>() < 1) schema_error(ptr + "/steps", "expected a positive integer");
      steps = b["steps"].get<int>();
    }
    for (int i = 0; i <= steps; ++i) params.push_back(lo + (hi - lo) * i / steps);
  } else {
    int steps = b.value("steps", cfg.steps);
    RaySchedule ray = straight_ray(cfg.places, cfg.n, direction, steps);
    ray.exponents = exponents;
    return ray;
  }
  RaySchedule ray{exponents, {}};
  for (const auto& t : params) {
    std::vector<Real> amounts;
    for (std::size_t v = 0; v < P; ++v) amounts.push_back(t * direction[v]);
    ray.steps.push_back({t, amounts});
  }
  return ray;
}

Artifacts field_info(const RunConfig& cfg) {
  auto units = s_unit_group(cfg.field, cfg.places, cfg.s_units);
  Artifacts a;
  a.report = field_json(cfg.field, cfg.places, units);
  a.report["balancing_constant"] = real_json(balancing_constant(cfg.field, cfg.places, units));
  return a;
}

Artifacts systole_cmd(const RunConfig& cfg, const CliOptions& opt) {
  const json b = block(cfg, "systole");
  const auto x = point_of(cfg, b, "systole", opt);
  const auto ray = ray_of(cfg, b, "systole");
  const auto report = trajectory(x, ray, cfg.window);
  Artifacts a;
  a.table = trajectory_csv(report);
  std::vector<Real> col;
  for (const auto& r : report.rows) col.push_back(r.min_content);
  a.report = {{"provenance", provenance_name(x.provenance)}, {"window", window_json(cfg.window)},
              {"steps", report.rows.size()}, {"empirical", true}};
  a.report["classification"] = col.size() >= 10 ? json(classify_ray(col)) : json(nullptr);
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"param", real_json(r.param)}, {"min_content", real_json(r.min_content)},
                    {"min_supnorm", real_json(r.min_supnorm)}, {"witness", r.witness}});
  }
  a.report["rows"] = rows;
  return a;
}

Artifacts mahler_cmd(const RunConfig& cfg, const CliOptions& opt) {
  const json b = block(cfg, "mahler");
  const auto x = point_of(cfg, b, "mahler", opt);
  const auto ray = ray_of(cfg, b, "mahler");
  const Real radius = b.contains("radius") ? parse_real_spec(b["radius"], "/mahler/radius").value : Real("0.05");
  std::vector<SLattice> lats;
  std::vector<Real> params;
  for (const auto& s : ray.steps) {
    lats.push_back(act(torus_from_exponents(cfg.places, ray.exponents, s.amounts), x).lattice);
    params.push_back(s.param);
  }
  const auto m = mahler_test(lats, radius, cfg.window);
  Artifacts a;
  a.report = mahler_json(m, lats, params, radius);
  a.report["window"] = window_json(cfg.window);
  Csv t{{"param", "min_content", "min_supnorm", "witness"}, {}};
  const auto primes = s_primes(cfg.places);
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& s = m.entries[i].systole;
    t.rows.push_back({real_text(params[i]), real_text(s.min_content), real_text(s.min_supnorm),
                      format_point(s.content_witness, cfg.n, cfg.field->degree(), primes)});
  }
  a.table = t;
  return a;
}

Artifacts survey_cmd(const RunConfig& cfg, const CliOptions& opt) {
  const json b = block(cfg, "survey");
  const auto x = point_of(cfg, b, "survey", opt);
  std::vector<std::size_t> R;
  if (opt.active_places) {
    for (const auto& l : split(*opt.active_places, ',')) R.push_back(place_index(cfg, l, "--active-places"));
  } else if (b.contains("active_places")) {
    const auto& ap = b["active_places"];
    if (!ap.is_array()) schema_error("/survey/active_places", "expected an array of labels");
    for (std::size_t i = 0; i < ap.size(); ++i) {
      const auto p = "/survey/active_places/" + std::to_string(i);
      if (!ap[i].is_string()) schema_error(p, "expected a place label");
      R.push_back(place_index(cfg, ap[i].get<std::string>(), p));
    }
  } else {
    for (std::size_t v = 0; v < cfg.places.size(); ++v) R.push_back(v);
  }
  std::vector<PlaceGrid> grid;
  if (opt.grid) {
    grid = parse_grid(cfg, R, split(*opt.grid, ','), "--grid");
  } else if (b.contains("grid")) {
    const auto& g = b["grid"];
    if (!g.is_array()) schema_error("/survey/grid", "expected an array of grid strings");
    std::vector<std::string> specs;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_string()) schema_error("/survey/grid/" + std::to_string(i), "expected a grid string");
      specs.push_back(g[i].get<std::string>());
    }
    grid = parse_grid(cfg, R, specs, "/survey/grid");
  } else {
    grid = default_grid(cfg.places, R, cfg.steps);
  }
  std::optional<std::string> expected;
  if (b.contains("expected")) {
    if (!b["expected"].is_string()) schema_error("/survey/expected", "expected a string");
    expected = b["expected"].get<std::string>();
  }
  const auto v = divergence_survey(x, R, grid, cfg.window, expected);
  Artifacts a;
  a.report = survey_json(v, cfg.places, R);
  a.report["provenance"] = provenance_name(x.provenance);
  a.report["window"] = window_json(cfg.window);
  a.table = survey_csv(v, cfg.places, R);
  a.anomaly = v.verdict == "ANOMALY";
  return a;
}

Artifacts nilpotent_cmd(const RunConfig& cfg, const CliOptions& opt) {
  const json b = block(cfg, "nilpotent");
  const auto x = point_of(cfg, b, "nilpotent", opt);
  const Real t = b.contains("radius") ? parse_real_spec(b["radius"], "/nilpotent/radius").value : Real("0.5");
  Artifacts a;
  a.report = nilpotent_json(nilpotent_span_check(x.lattice, t, cfg.window), t);
  a.report["window"] = window_json(cfg.window);
  return a;
}

Artifacts expanding_cmd(const RunConfig& cfg) {
  const json b = block(cfg, "expanding");
  const std::size_t v = b.contains("place") ? place_index(cfg, b["place"].get<std::string>(), "/expanding/place") : 0;
  std::vector<std::pair<int, int>> positions;
  const auto& pos = b.value("positions", json::array({json::array({0, 1})}));
  if (!pos.is_array()) schema_error("/expanding/positions", "expected an array of pairs");
  for (std::size_t i = 0; i < pos.size(); ++i) {
    const auto p = "/expanding/positions/" + std::to_string(i);
    if (!pos[i].is_array() || pos[i].size() != 2 || !pos[i][0].is_number_integer() || !pos[i][1].is_number_integer()) {
      schema_error(p, "expected [i, j]");
    }
    const int r = pos[i][0].get<int>(), c = pos[i][1].get<int>();
    if (r < 0 || c < 0 || r >= cfg.n || c >= cfg.n) schema_error(p, "position outside the matrix");
    positions.emplace_back(r, c);
  }
  RealSpec tau = b.contains("tau") ? parse_real_spec(b["tau"], "/expanding/tau") : RealSpec{Real(2), Rational(2)};
  if (!tau.exact) schema_error("/expanding/tau", "tau must be rational");
  Artifacts a;
  a.report = expanding_json(expanding_element(positions, cfg.n, *tau.exact, cfg.places[v]), positions);
  return a;
}

DecomposableForm form_of(const RunConfig& cfg, const json& b, const std::string& name) {
  if (!b.contains("form")) schema_error("/" + name + "/form", "required key missing");
  return parse_form(cfg, b["form"], "/" + name + "/form");
}

Artifacts spectrum_cmd(const RunConfig& cfg) {
  const json b = block(cfg, "spectrum");
  const auto f = form_of(cfg, b, "spectrum");
  std::optional<Real> bound;
  if (b.contains("bound")) bound = parse_real_spec(b["bound"], "/spectrum/bound").value;
  Artifacts a;
  if (b.contains("heights")) {
    const auto& hs = b["heights"];
    if (!hs.is_array()) schema_error("/spectrum/heights", "expected an array of heights");
    std::vector<std::int64_t> heights;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      if (!hs[i].is_number_integer() || hs[i].get<std::int64_t>() < 1) {
        schema_error("/spectrum/heights/" + std::to_string(i), "expected a positive integer");
      }
      heights.push_back(hs[i].get<std::int64_t>());
    }
    DiscretenessOptions o;
    if (bound) o.bound = *bound;
    if (b.contains("radius")) o.radius = parse_real_spec(b["radius"], "/spectrum/radius").value;
    if (b.contains("new_members")) o.new_members = b["new_members"].get<std::size_t>();
    const auto r = discreteness_report(f, heights, o);
    a.report = discreteness_json(r, f);
    a.table = spectrum_csv(r.spectrum, f);
    a.anomaly = r.agreement == "ANOMALY";
    return a;
  }
  const auto s = value_spectrum(f, {cfg.window.height, 0, cfg.window.cap}, bound);
  a.report = spectrum_json(s, f);
  a.table = spectrum_csv(s, f);
  return a;
}

Artifacts reconstruct_cmd(const RunConfig& cfg) {
  const json b = block(cfg, "reconstruct");
  const auto f = form_of(cfg, b, "reconstruct");
  Artifacts a;
  a.report = reconstruction_json(rationality_reconstruct(f), f);
  return a;
}

Artifacts norm_form_cmd(const RunConfig& cfg) {
  const json b = block(cfg, "norm_form");
  std::vector<FieldElement> basis;
  if (b.contains("basis")) {
    const auto& bs = b["basis"];
    if (!bs.is_array()) schema_error("/norm_form/basis", "expected an array of elements");
    for (std::size_t i = 0; i < bs.size(); ++i) basis.push_back(parse_element(cfg, bs[i], "/norm_form/basis/" + std::to_string(i)));
  } else {
    for (const auto& c : cfg.field->integral_basis()) basis.emplace_back(cfg.field, c);
  }
  Artifacts a;
  a.report = norm_form_json(norm_form(cfg.field, basis));
  return a;
}

Artifacts littlewood_cmd(const RunConfig& cfg) {
  const json b = block(cfg, "littlewood");
  const RealSpec alpha = b.contains("alpha") ? parse_real_spec(b["alpha"], "/littlewood/alpha")
                                             : parse_real_spec(json{{"b", 1}, {"d", 2}}, "/littlewood/alpha");
  const RealSpec beta = b.contains("beta") ? parse_real_spec(b["beta"], "/littlewood/beta")
                                           : parse_real_spec(json{{"b", 1}, {"d", 3}}, "/littlewood/beta");
  std::int64_t N = 1000000;
  if (b.contains("N")) {
    if (!b["N"].is_number_integer() || b["N"].get<std::int64_t>() < 1 || b["N"].get<std::int64_t>() > 1000000000) {
      schema_error("/littlewood/N", "expected an integer in [1, 10^9]");
    }
    N = b["N"].get<std::int64_t>();
  }
  const auto r = littlewood_scan(alpha, beta, N);
  Artifacts a;
  a.report = littlewood_json(r, N);
  a.table = littlewood_csv(r);
  return a;
}

json effective_config(const CliOptions& opt) {
  json j = opt.config.empty() ? json::object() : read_config_json(opt.config);
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "/: expected an object");
  if (opt.field) {
    json poly = json::array();
    for (const auto& c : split(*opt.field, ',')) poly.push_back(c);
    j["min_poly"] = poly;
  }
  if (opt.places) {
    json primes = json::array();
    for (const auto& p : split(*opt.places, ',')) {
      try {
        primes.push_back(std::stoll(p));
      } catch (const std::exception&) {
        throw Error(ErrorCode::SchemaError, "--places: '" + p + "' is not a prime");
      }
    }
    if (j.contains("places") && j["places"].is_object()) j["places"].erase("finite_primes");
    j["finite_primes"] = primes;
  }
  if (opt.precision) j["precision"] = *opt.precision;
  if (opt.height) j["height"] = *opt.height;
  if (opt.denom) j["denom"] = *opt.denom;
  if (!j.contains("min_poly")) j["min_poly"] = json::array({0, 1});
  return j;
}

Artifacts dispatch(const RunConfig& cfg, const CliOptions& opt) {
  const auto& s = opt.subcommand;
  if (s == "field-info") return field_info(cfg);
  if (s == "systole") return systole_cmd(cfg, opt);
  if (s == "mahler") return mahler_cmd(cfg, opt);
  if (s == "orbit-survey") return survey_cmd(cfg, opt);
  if (s == "nilpotent-check") return nilpotent_cmd(cfg, opt);
  if (s == "expanding") return expanding_cmd(cfg);
  if (s == "form-spectrum") return spectrum_cmd(cfg);
  if (s == "form-reconstruct") return reconstruct_cmd(cfg);
  if (s == "norm-form") return norm_form_cmd(cfg);
  if (s == "littlewood") return littlewood_cmd(cfg);
  throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + s + "'");
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << bytes;
}

}  // namespace

int run(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.format != "json" && opt.format != "csv" && opt.format != "both") {
      throw Error(ErrorCode::InvalidArgument, "--format must be json, csv or both");
    }
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
    const RunConfig cfg = parse_config(effective_config(opt));
    Artifacts a = dispatch(cfg, opt);
    a.report["subcommand"] = opt.subcommand;
    const bool want_json = opt.format != "csv";
    const bool want_csv = opt.format != "json" && a.table;
    if (opt.out) {
      std::filesystem::create_directories(*opt.out);
      const std::filesystem::path dir(*opt.out);
      if (want_json) write_file(dir / (opt.subcommand + ".json"), emit_json(a.report));
      if (want_csv) write_file(dir / (opt.subcommand + ".csv"), emit_csv(*a.table));
    } else if (opt.format == "csv") {
      if (!a.table) throw Error(ErrorCode::InvalidArgument, opt.subcommand + " has no CSV output");
      out << emit_csv(*a.table);
    } else {
      out << emit_json(a.report);
    }
    if (a.anomaly) {
      err << "ANOMALY: verdict contradicts the predicted outcome\n";
      return 2;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"S-arithmetic lattices, torus orbits and decomposable forms"};
  app.require_subcommand(1, 1);
  CliOptions opt;
  std::string threads_note;
  app.add_option("--config", opt.config, "config file or inline JSON");
  app.add_option("--out", opt.out, "directory for artifacts");
  app.add_option("--format", opt.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_option("--precision", opt.precision, "working precision in digits (at most 64)");
  app.add_option("--threads", opt.threads, "OpenMP worker count");
  app.add_option("--seed", opt.seed, "seed for randomized property suites");
  app.add_option("--field", opt.field, "minimal polynomial coefficients c0,c1,...,1");
  app.add_option("--places", opt.places, "finite primes of S, comma separated");
  app.add_option("--height", opt.height, "numerator height H");
  app.add_option("--denom", opt.denom, "denominator exponent E");
  for (const char* name : kSubcommands) {
    auto* sub = app.add_subcommand(name);
    if (std::string(name) == "orbit-survey" || std::string(name) == "systole" || std::string(name) == "mahler" ||
        std::string(name) == "nilpotent-check") {
      sub->add_option("--point", opt.point, "identity, unipotent-pair, anisotropic, rational:<rows> or file:<path>");
    }
    if (std::string(name) == "orbit-survey") {
      sub->add_option("--active-places", opt.active_places, "place labels, comma separated");
      sub->add_option("--grid", opt.grid, "a:b:steps or k1:k2 per active place, comma separated");
    }
    sub->fallthrough();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  opt.subcommand = app.get_subcommands().front()->get_name();
  return run(opt, out, err);
}

}  // namespace slab
