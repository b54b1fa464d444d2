#pragma once

#include "daniell/stepsnd.hpp"
#include "daniell/types.hpp"

#include "json.hpp"

namespace daniell {

// Rationals travel as {"num": "...", "den": "..."} with decimal integer strings.
nlohmann::json rational_to_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

/// {lo, hi, lo_closed, hi_closed}, endpoints as rationals.
nlohmann::json interval_to_json(const Interval& iv);
Interval interval_from_json(const nlohmann::json& j);

/// Array of {lo, hi, lo_closed, hi_closed, coeff_num, coeff_den}.
nlohmann::json to_json(const StepFunction1D& f);
/// Canonicalizes; malformed input throws DomainError.
StepFunction1D step1d_from_json(const nlohmann::json& j);

/// {"axes": [interval...]}
nlohmann::json to_json(const Rectangle& r);
Rectangle rectangle_from_json(const nlohmann::json& j);

/// {"dim": d, "parts": [{"axes": [...], coeff_num, coeff_den}...]}
nlohmann::json to_json(const StepFunctionND& f);
StepFunctionND stepnd_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Enclosure& e);

}  // namespace daniell
