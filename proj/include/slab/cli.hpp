#pragma once

// Command-line front door: flag parsing, subcommand dispatch and artifact
// emission. Exit status 0 on success, 2 when a verdict contradicts the
// predicted outcome, 1 on any error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace slab {

struct CliOptions {
  std::string subcommand;
  std::string config;               // path or inline JSON; empty means {}
  std::optional<std::string> out;   // directory for <subcommand>.json / .csv
  std::string format = "both";      // json, csv or both
  std::optional<int> precision;
  int threads = 0;                  // 0 keeps the OpenMP default
  std::optional<std::uint64_t> seed;

  // overrides, mainly for orbit-survey
  std::optional<std::string> field;    // "c0,c1,...,1"
  std::optional<std::string> places;   // finite primes "2,3"
  std::optional<std::string> point;
  std::optional<std::string> active_places;  // labels "inf,2"
  std::optional<std::string> grid;           // one spec per active place, comma separated
  std::optional<std::int64_t> height;
  std::optional<int> denom;
};

inline constexpr const char* kSubcommands[] = {"field-info",      "systole",      "mahler",
                                               "orbit-survey",    "nilpotent-check", "expanding",
                                               "form-spectrum",   "form-reconstruct", "norm-form",
                                               "littlewood"};

/// Runs one subcommand; artifacts go to files under opt.out or to `out`,
/// diagnostics to `err`.
int run(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and calls run().
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace slab
