#pragma once

#include <json.hpp>

#include "jointlife/copulas.hpp"
#include "jointlife/dependence.hpp"
#include "jointlife/mortality_laws.hpp"
#include "jointlife/synthgen.hpp"

namespace jointlife {

// Key order is preserved so that written files are stable.
using Json = nlohmann::ordered_json;

// {"law": "gompertz", "A": ..., "B": ...}; parameter names as in
// parameter_names(). Readers throw InputError.
Json to_json(const LawParams& law);
LawParams law_from_json(const Json& j);

// {"family": "frank", "theta": 3.367}; parametric families only.
Json to_json(const CopulaModel& model);
CopulaModel copula_from_json(const Json& j);

Json to_json(const FitReport& report);
Json to_json(const FittedCopula& fitted);
Json to_json(const SpearmanResult& result);
Json to_json(const PqdTestResult& result);

Json to_json(const GenConfig& config);
// Missing keys keep their defaults.
GenConfig gen_config_from_json(const Json& j);

}  // namespace jointlife
