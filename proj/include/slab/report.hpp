#pragma once

// Byte-stable CSV and JSON serialization of module results. JSON objects
// have sorted keys; reals are written at 17 significant digits.

#include "slab/dynamics.hpp"
#include "slab/forms.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace slab {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string emit_csv(const Csv& table);
std::string emit_json(const nlohmann::json& j);

/// Real as a JSON number (17 significant digits) or, when outside the double
/// range, as a string.
nlohmann::json real_json(const Real& x);
std::string real_text(const Real& x);

nlohmann::json field_json(const FieldPtr& field, const std::vector<Place>& S, const SUnitGroup& units);
nlohmann::json systole_json(const SystoleResult& s, const SLattice& lat);
nlohmann::json mahler_json(const MahlerVerdict& m, const std::vector<SLattice>& lats, const std::vector<Real>& params,
                           const Real& radius);
nlohmann::json survey_json(const SurveyVerdict& v, const std::vector<Place>& S, const std::vector<std::size_t>& R);
nlohmann::json nilpotent_json(const NilpotentSpan& span, const Real& radius);
nlohmann::json expanding_json(const ExpandingElement& t, const std::vector<std::pair<int, int>>& positions);
nlohmann::json spectrum_json(const ValueSpectrum& s, const DecomposableForm& f);
nlohmann::json discreteness_json(const DiscretenessReport& r, const DecomposableForm& f);
nlohmann::json reconstruction_json(const ReconstructionResult& r, const DecomposableForm& f);
nlohmann::json norm_form_json(const DecomposableForm& f);
nlohmann::json littlewood_json(const LittlewoodResult& r, std::int64_t N);

/// param, min_content, min_supnorm, witness
Csv trajectory_csv(const TrajectoryReport& t);
/// one amount column per active place (s archimedean, k finite), then
/// min_content, min_supnorm, witness
Csv survey_csv(const SurveyVerdict& v, const std::vector<Place>& S, const std::vector<std::size_t>& R);
/// magnitude, count, witness
Csv spectrum_csv(const ValueSpectrum& s, const DecomposableForm& f);
/// n, value
Csv littlewood_csv(const LittlewoodResult& r);

}  // namespace slab
