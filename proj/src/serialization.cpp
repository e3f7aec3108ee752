#include "jointlife/serialization.hpp"

#include <algorithm>
#include <cmath>

#include "jointlife/common.hpp"

namespace jointlife {

namespace {

double number(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw InputError("missing key '" + key + "'");
  if (!j.at(key).is_number()) throw InputError("key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string text(const Json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_string()) throw InputError("key '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

// JSON has no NaN; such values are written as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json to_json(const LawParams& law) {
  Json j;
  j["law"] = to_string(kind_of(law));
  const auto names = parameter_names(kind_of(law));
  const auto values = parameter_values(law);
  for (std::size_t i = 0; i < names.size(); ++i) j[names[i]] = values[i];
  return j;
}

LawParams law_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("a mortality law must be a JSON object");
  const LawKind kind = parse_law_kind(text(j, "law"));
  std::vector<double> values;
  for (const auto& name : parameter_names(kind)) values.push_back(number(j, name));
  LawParams law = make_law(kind, values);
  validate(law);
  return law;
}

Json to_json(const CopulaModel& model) {
  Json j;
  j["family"] = to_string(family_of(model));
  const double theta = parameter_of(model);
  if (!std::isnan(theta)) j["theta"] = theta;
  return j;
}

CopulaModel copula_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("a copula must be a JSON object");
  const CopulaFamily family = parse_copula_family(text(j, "family"));
  if (family == CopulaFamily::independent || family == CopulaFamily::comonotone) return make_parametric(family, 0.0);
  const std::string key = family == CopulaFamily::gaussian && j.contains("rho") ? "rho" : "theta";
  return make_parametric(family, number(j, key));
}

Json to_json(const FitReport& report) {
  Json j;
  j["params"] = to_json(report.params);
  j["loss"] = report.loss;
  j["iterations"] = report.iterations;
  j["evaluations"] = report.evaluations;
  j["converged"] = report.converged;
  j["at_boundary"] = report.at_boundary;
  Json residuals = Json::array();
  for (std::size_t i = 0; i < report.ages.size(); ++i)
    residuals.push_back(Json{{"age", report.ages[i]}, {"residual", report.residuals[i]}});
  j["residuals"] = residuals;
  return j;
}

Json to_json(const FittedCopula& fitted) {
  Json j;
  j["family"] = to_string(family_of(fitted.model));
  j["theta"] = number_or_null(parameter_of(fitted.model));
  j["loglik"] = fitted.loglik;
  j["n"] = fitted.n;
  j["at_boundary"] = fitted.at_boundary;
  return j;
}

Json to_json(const SpearmanResult& r) {
  return Json{{"rho", r.rho},   {"ci_low", r.ci_low},        {"ci_high", r.ci_high},
              {"level", r.level}, {"n", r.n}, {"resamples", r.resamples}};
}

Json to_json(const PqdTestResult& r) {
  return Json{{"hypothesis", to_string(r.hypothesis)},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"exceedances", r.exceedances},
              {"grid", r.grid},
              {"bootstraps", r.bootstraps},
              {"n", r.n}};
}

Json to_json(const GenConfig& c) {
  Json j;
  j["n_founders"] = c.n_founders;
  j["generations"] = c.generations;
  j["seed"] = c.seed;
  j["male_law"] = to_json(c.male_law);
  j["female_law"] = to_json(c.female_law);
  j["spouse_copula"] = to_json(c.spouse_copula);
  j["parent_child_copula"] = to_json(c.parent_child_copula);
  j["mean_children"] = c.mean_children;
  j["max_children"] = c.max_children;
  j["year_only_rate"] = c.year_only_rate;
  j["missing_rate"] = c.missing_rate;
  j["role_missing"] = Json::object();
  for (const auto& [k, v] : c.role_missing) j["role_missing"][k] = v;
  return j;
}

GenConfig gen_config_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("the generator config must be a JSON object");
  static const char* kKnown[] = {"n_founders",    "generations",    "seed",           "male_law",
                                 "female_law",    "spouse_copula",  "parent_child_copula", "mean_children",
                                 "max_children",  "year_only_rate", "missing_rate",   "role_missing"};
  for (const auto& [key, value] : j.items())
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown))
      throw InputError("unknown config key '" + key + "'");
  GenConfig c;
  auto count = [&](const char* key) -> std::int64_t {
    const double v = number(j, key);
    if (v != std::floor(v) || v < 0) throw InputError(std::string("key '") + key + "' must be a non-negative integer");
    return static_cast<std::int64_t>(v);
  };
  if (j.contains("n_founders")) c.n_founders = static_cast<std::size_t>(count("n_founders"));
  if (j.contains("generations")) c.generations = static_cast<int>(count("generations"));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw InputError("key 'seed' must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("male_law")) c.male_law = law_from_json(j.at("male_law"));
  if (j.contains("female_law")) c.female_law = law_from_json(j.at("female_law"));
  if (j.contains("spouse_copula")) c.spouse_copula = copula_from_json(j.at("spouse_copula"));
  if (j.contains("parent_child_copula")) c.parent_child_copula = copula_from_json(j.at("parent_child_copula"));
  if (j.contains("mean_children")) c.mean_children = number(j, "mean_children");
  if (j.contains("max_children")) c.max_children = static_cast<int>(count("max_children"));
  if (j.contains("year_only_rate")) c.year_only_rate = number(j, "year_only_rate");
  if (j.contains("missing_rate")) c.missing_rate = number(j, "missing_rate");
  if (j.contains("role_missing")) {
    const auto& rm = j.at("role_missing");
    if (!rm.is_object()) throw InputError("key 'role_missing' must be an object");
    for (const auto& [key, value] : rm.items()) {
      if (!value.is_number()) throw InputError("role_missing." + key + " must be a number");
      c.role_missing[key] = value.get<double>();
    }
  }
  c.validate();
  return c;
}

}  // namespace jointlife
