#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "jointlife/common.hpp"
#include "jointlife/copulas.hpp"
#include "jointlife/csv.hpp"
#include "jointlife/dependence.hpp"
#include "jointlife/family_data.hpp"
#include "jointlife/lifetable.hpp"
#include "jointlife/mortality_laws.hpp"
#include "jointlife/pricing.hpp"
#include "jointlife/random.hpp"
#include "jointlife/serialization.hpp"
#include "jointlife/synthgen.hpp"
#include "manifest.hpp"

namespace jointlife::cli {

namespace {

template <class Write>
std::string to_text(Write&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
}

Json summary_json(const BuildSummary& s) {
  Json dropped = Json::object();
  for (const auto& [rule, n] : s.dropped) dropped[rule] = n;
  return Json{{"candidates", s.candidates}, {"kept", s.kept}, {"dropped", dropped}};
}

std::optional<Sex> parse_optional_sex(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_sex(text);
}

// Lifetime pairs plus the birth year used for cohort buckets.
struct LoadedPairs {
  PairedLifetimes pairs;
  std::vector<int> cohort_year;
  std::string member;
};

LoadedPairs load_pairs(RunManifest& m, const fs::path& data, const std::string& kind, std::string member) {
  LoadedPairs out;
  if (kind == "couples") {
    if (!member.empty()) throw InputError("--member does not apply to couples");
    std::istringstream in(m.add_input(data / "couples.csv"));
    for (const auto& r : read_couples_csv(in)) {
      out.pairs.t1.push_back(r.t_f);
      out.pairs.t2.push_back(r.t_m);
      out.cohort_year.push_back(calendar_year(r.father_birth));
    }
    out.pairs.label1 = "husband";
    out.pairs.label2 = "wife";
  } else if (kind == "child_parents") {
    if (member.empty()) member = "father";
    if (member != "father" && member != "mother") throw InputError("--member must be father or mother");
    std::istringstream in(m.add_input(data / "child_parents.csv"));
    for (const auto& r : read_child_parents_csv(in)) {
      out.pairs.t1.push_back(r.t_c);
      out.pairs.t2.push_back(member == "father" ? r.t_f : r.t_m);
      out.cohort_year.push_back(calendar_year(r.child_birth));
    }
    out.pairs.label1 = "child";
    out.pairs.label2 = member;
  } else if (kind == "child_grandparents") {
    if (member.empty()) member = "gff";
    const auto slot = std::find(kGrandparentNames.begin(), kGrandparentNames.end(), member);
    if (slot == kGrandparentNames.end()) throw InputError("--member must be one of gff, gmf, gfm, gmm");
    const auto s = static_cast<std::size_t>(slot - kGrandparentNames.begin());
    std::istringstream in(m.add_input(data / "child_grandparents.csv"));
    for (const auto& r : read_child_grandparents_csv(in)) {
      if (!r.grandparents[s]) continue;
      out.pairs.t1.push_back(r.t_c);
      out.pairs.t2.push_back(r.grandparents[s]->age_at_death);
      out.cohort_year.push_back(calendar_year(r.child_birth));
    }
    out.pairs.label1 = "child";
    out.pairs.label2 = member;
  } else {
    throw InputError("--pairs must be couples, child_parents or child_grandparents");
  }
  out.member = member;
  return out;
}

CopulaModel copula_from_options(RunManifest& m, const PriceOptions& o) {
  if (!o.copula.empty()) {
    const Json j = parse_json(m.add_input(o.copula), o.copula);
    // Accepts a bare copula or the output of `dependence --stat copula-fit`.
    return copula_from_json(j.contains("best") ? j.at("best") : j);
  }
  if (o.family.empty()) throw InputError("joint products need --copula FILE or --family with --theta");
  const auto family = parse_copula_family(o.family);
  if (family == CopulaFamily::independent) return Independent{};
  if (family == CopulaFamily::comonotone) return Comonotone{};
  return make_parametric(family, o.theta);
}

std::string copula_label(const CopulaModel& c) {
  const double p = parameter_of(c);
  const std::string family = to_string(family_of(c));
  return std::isnan(p) ? family : family + "(" + format_double(p) + ")";
}

bool is_joint_product(const std::string& p) { return p == "joint" || p == "last" || p == "reversion" || p == "widow"; }

}  // namespace

int cmd_ingest(const Common& c, const IngestOptions& o) {
  RunManifest m("ingest", "ingest", c.out, c.force, c.seed);
  m.config() = Json{{"persons", o.persons}};
  m.claim({"couples.csv", "child_parents.csv", "child_grandparents.csv", "lifetable.csv", "ingest_summary.json"});

  std::istringstream in(m.add_input(o.persons));
  const auto persons = read_persons_csv(in);
  const auto couples = build_couples(persons);
  const auto parents = build_child_parents(persons);
  const auto grandparents = build_child_grandparents(persons);

  m.write("couples.csv", to_text([&](auto& s) { write_couples_csv(s, couples.rows); }));
  m.write("child_parents.csv", to_text([&](auto& s) { write_child_parents_csv(s, parents.rows); }));
  m.write("child_grandparents.csv", to_text([&](auto& s) { write_child_grandparents_csv(s, grandparents.rows); }));

  Json summary;
  summary["persons"] = persons.size();
  summary["couples"] = summary_json(couples.summary);
  summary["child_parents"] = summary_json(parents.summary);
  summary["child_grandparents"] = summary_json(grandparents.summary);
  summary["child_grandparents"]["all_four_known"] =
      std::count_if(grandparents.rows.begin(), grandparents.rows.end(), [](const auto& r) { return r.all_known(); });
  if (!parents.rows.empty()) {
    const auto table = conditional_table(parents.rows, Condition::none(0)).table;
    m.write("lifetable.csv", to_text([&](auto& s) { write_lifetable_csv(s, table); }));
    summary["lifetable"] = Json{{"source", "child_parents"}, {"n", parents.rows.size()}, {"e0", table.curtate_ex(0)}};
  } else {
    std::cerr << "warning: no child-parent rows; lifetable.csv not written\n";
  }
  m.write("ingest_summary.json", summary);
  m.finish();
  std::cout << "ingest: " << persons.size() << " persons, " << couples.rows.size() << " couples, "
            << parents.rows.size() << " child-parent rows, " << grandparents.rows.size() << " child-grandparent rows\n";
  return 0;
}

int cmd_fit_law(const Common& c, const FitLawOptions& o) {
  const LawKind kind = parse_law_kind(o.law);
  const std::string stem = "fit_" + to_string(kind);
  RunManifest m("fit-law", stem, c.out, c.force, c.seed);
  m.config() = Json{{"law", to_string(kind)}, {"table", o.table}, {"starts", o.starts}, {"min_age", o.min_age},
                    {"max_age", o.max_age}};
  m.claim({stem + ".json", stem + "_curve.csv"});
  if (o.starts < 1) throw InputError("--starts must be at least 1");

  std::istringstream in(m.add_input(o.table));
  const LifeTable table = read_lifetable_csv(in);
  std::vector<AgeObservation> data;
  for (const auto& obs : fit_observations(table))
    if (obs.age >= o.min_age && obs.age <= o.max_age) data.push_back(obs);
  const FitReport report = fit(kind, data, {.starts = o.starts, .seed = derive_seed(c.seed, "fit-law")});

  Json j;
  j["law"] = to_string(kind);
  j["ages_used"] = data.size();
  j["fit"] = to_json(report);
  m.write(stem + ".json", j);
  m.write(stem + "_curve.csv", to_text([&](auto& s) { write_fit_curve_csv(s, report.params, data, table.omega()); }));
  m.finish();

  std::cout << "fit-law: " << to_json(report.params).dump() << " loss " << format_double(report.loss) << "\n";
  for (const auto& name : report.at_boundary) std::cerr << "warning: parameter " << name << " is at a search bound\n";
  if (!report.converged) {
    std::cerr << "error: the simplex search did not converge within its evaluation budget\n";
    return 3;
  }
  return 0;
}

int cmd_dependence(const Common& c, const DependenceOptions& o) {
  if (o.stat != "spearman" && o.stat != "pqd" && o.stat != "copula-fit")
    throw InputError("--stat must be spearman, pqd or copula-fit");
  std::string stem = "dependence_" + o.pairs + (o.member.empty() ? "" : "_" + o.member) + "_" + o.stat;
  std::replace(stem.begin(), stem.end(), '-', '_');
  RunManifest m("dependence", stem, c.out, c.force, c.seed);
  Json cfg{{"data", o.data}, {"pairs", o.pairs}, {"member", o.member}, {"stat", o.stat}};

  std::vector<std::string> outputs{stem + ".json"};
  std::vector<CopulaFamily> families;
  if (o.stat == "spearman") {
    cfg["resamples"] = o.resamples;
    cfg["level"] = o.level;
    cfg["by_cohort"] = o.by_cohort;
    cfg["cohort_width"] = o.cohort_width;
    if (o.by_cohort) outputs.push_back(stem + "_cohorts.csv");
  } else if (o.stat == "pqd") {
    cfg["grid"] = o.grid;
    cfg["bootstraps"] = o.bootstraps;
    cfg["hypothesis"] = o.hypothesis;
  } else {
    for (const auto& f : o.families) {
      families.push_back(parse_copula_family(f));
      outputs.push_back(stem + "_" + to_string(families.back()) + "_density.csv");
    }
    cfg["families"] = o.families;
  }
  m.config() = cfg;
  m.claim(outputs);

  const auto loaded = load_pairs(m, o.data, o.pairs, o.member);
  Json j;
  j["pairs"] = o.pairs;
  j["labels"] = Json::array({loaded.pairs.label1, loaded.pairs.label2});
  j["n"] = loaded.pairs.size();
  j["stat"] = o.stat;

  if (o.stat == "spearman") {
    const auto r = spearman(loaded.pairs, o.resamples, derive_seed(c.seed, "dependence-spearman"), o.level);
    j["result"] = to_json(r);
    std::cout << "spearman: " << format_double(r.rho) << " [" << format_double(r.ci_low) << ", "
              << format_double(r.ci_high) << "] n=" << r.n << "\n";
    if (o.by_cohort) {
      const auto report = spearman_by_cohort(loaded.pairs, loaded.cohort_year, o.resamples,
                                             derive_seed(c.seed, "dependence-cohorts"), o.cohort_width);
      Json cohorts = Json::array();
      for (const auto& k : report.cohorts) {
        Json e = to_json(k.result);
        e["cohort"] = k.cohort;
        cohorts.push_back(e);
      }
      j["cohorts"] = cohorts;
      j["warnings"] = report.warnings;
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      m.write(stem + "_cohorts.csv", to_text([&](auto& s) { write_cohort_csv(s, report); }));
    }
  } else if (o.stat == "pqd") {
    QuadrantHypothesis h;
    if (o.hypothesis == "pqd") {
      h = QuadrantHypothesis::pqd;
    } else if (o.hypothesis == "nqd") {
      h = QuadrantHypothesis::nqd;
    } else {
      throw InputError("--hypothesis must be pqd or nqd");
    }
    const auto r = pqd_test(pseudo_observations(loaded.pairs),
                            {o.grid, o.bootstraps, derive_seed(c.seed, "dependence-pqd"), h});
    j["result"] = to_json(r);
    std::cout << o.hypothesis << " test: statistic " << format_double(r.statistic) << ", p-value "
              << format_double(r.p_value) << "\n";
  } else {
    const auto pseudo = pseudo_observations(loaded.pairs);
    Json fits = Json::array();
    std::optional<FittedCopula> best;
    for (auto family : families) {
      const auto f = fit_semiparametric(family, pseudo);
      fits.push_back(to_json(f));
      if (!best || f.loglik > best->loglik) best = f;
      m.write(stem + "_" + to_string(family) + "_density.csv",
              to_text([&](auto& s) { write_density_grid_csv(s, f.model); }));
      std::cout << to_string(family) << ": theta " << format_double(parameter_of(f.model)) << ", loglik "
                << format_double(f.loglik) << (f.at_boundary ? " (at bound)" : "") << "\n";
    }
    j["fits"] = fits;
    if (best) j["best"] = to_json(best->model);
  }
  m.write(stem + ".json", j);
  m.finish();
  return 0;
}

int cmd_price(const Common& c, const PriceOptions& o) {
  const int last_age = o.age_to.value_or(o.age);
  if (last_age < o.age) throw InputError("--age-to must not precede --age");
  if (o.horizon < 1) throw InputError("--horizon must be at least 1");
  const DiscountBasis basis(o.rate);
  const std::string stem = "price_" + o.product;
  RunManifest m("price", stem, c.out, c.force, c.seed);
  Json cfg{{"data", o.data}, {"product", o.product}, {"age", o.age}, {"age_to", last_age}, {"rate", o.rate},
           {"horizon", o.horizon}, {"min_risk_set", o.min_risk_set}};
  std::vector<PricingRow> rows;

  if (is_joint_product(o.product)) {
    cfg["copula"] = o.copula;
    cfg["family"] = o.family;
    cfg["theta"] = o.theta;
    cfg["gap"] = o.gap;
    m.config() = cfg;
    m.claim({stem + ".csv"});
    const CopulaModel copula = copula_from_options(m, o);
    validate(copula);
    std::istringstream in(m.add_input(fs::path(o.data) / "couples.csv"));
    const auto couples = read_couples_csv(in);
    if (couples.empty()) throw EmptyRiskSetError("couples", "no couples to build marginal tables from");
    std::vector<double> t_f, t_m;
    for (const auto& r : couples) {
      t_f.push_back(r.t_f);
      t_m.push_back(r.t_m);
    }
    const auto husband = LifeTable::from_ages_at_death(t_f), wife = LifeTable::from_ages_at_death(t_m);
    for (int x = o.age; x <= last_age; ++x) {
      const int xf = x + o.gap;
      if (x < 0 || xf < 0 || x > wife.omega() || xf > husband.omega())
        throw InputError("ages " + std::to_string(xf) + "/" + std::to_string(x) + " are outside the tables");
      if (husband.exposure()[xf] < o.min_risk_set || wife.exposure()[x] < o.min_risk_set) continue;
      const auto a = joint_annuities({husband, wife, copula, xf, x}, basis, o.horizon);
      const auto ind = joint_annuities({husband, wife, Independent{}, xf, x}, basis, o.horizon);
      auto pick = [&](const JointAnnuities& v) {
        if (o.product == "joint") return v.joint;
        if (o.product == "last") return v.last;
        return o.product == "reversion" ? v.reversion : v.widow;
      };
      const double value = pick(a), base = pick(ind);
      rows.push_back({x, copula_label(copula), o.product, value,
                      base != 0.0 ? std::optional(100.0 * (value / base - 1.0)) : std::nullopt});
    }
  } else {
    const Product product = parse_product(o.product);
    const auto sex = parse_optional_sex(o.sex);
    cfg["conditions"] = o.conditions;
    cfg["sex"] = o.sex;
    cfg["term"] = o.term;
    m.config() = cfg;
    m.claim({stem + ".csv"});
    const int term = product == Product::annuity || product == Product::whole_life ? o.horizon : o.term;

    std::vector<Condition> conditions;
    for (const auto& text : o.conditions) conditions.push_back(Condition::parse(text));
    std::istringstream in(m.add_input(fs::path(o.data) / "child_parents.csv"));
    const auto parents = read_child_parents_csv(in);
    std::vector<ChildGrandparentsRow> grandparents;
    if (std::any_of(conditions.begin(), conditions.end(),
                    [](const auto& k) { return k.kind == Condition::Kind::grandparents; })) {
      std::istringstream gin(m.add_input(fs::path(o.data) / "child_grandparents.csv"));
      grandparents = read_child_grandparents_csv(gin);
    }
    const auto baseline = conditional_table(parents, Condition::none(0), sex).table;
    for (const auto& cond : conditions) {
      const auto ct = cond.kind == Condition::Kind::grandparents ? conditional_table(grandparents, cond, sex)
                                                                 : conditional_table(parents, cond, sex);
      const std::string label = cond.label() + (sex ? " sex=" + to_string(*sex) : "");
      for (int x = o.age; x <= last_age; ++x) {
        if (x < ct.base_age() && last_age > o.age) continue;
        if (x >= 0 && x <= ct.table.omega() && ct.table.exposure()[x] < o.min_risk_set) continue;
        const auto p = conditional_product(ct, baseline, product, x, basis, term);
        rows.push_back({x, label, to_string(product), p.value, p.rel_diff_pct});
      }
    }
  }
  if (rows.empty()) throw EmptyRiskSetError(o.product, "no age satisfies the risk-set requirement");
  m.write(stem + ".csv", to_text([&](auto& s) { write_pricing_csv(s, rows); }));
  m.finish();
  std::cout << "price: " << rows.size() << " rows\n";
  return 0;
}

int cmd_simulate(const Common& c, const SimulateOptions& o) {
  GenConfig cfg;
  RunManifest m("simulate", "simulate", c.out, c.force, c.seed);
  if (!o.config.empty()) cfg = gen_config_from_json(parse_json(m.add_input(o.config), o.config));
  if (c.seed_given) cfg.seed = c.seed;
  cfg.validate();
  m.set_seed(cfg.seed);
  m.config() = to_json(cfg);
  m.claim({"persons.csv"});

  const auto persons = generate(cfg);
  m.write("persons.csv", to_text([&](auto& s) { write_persons_csv(s, persons); }));
  m.finish();
  std::cout << "simulate: " << persons.size() << " persons\n";
  return 0;
}

namespace {

int command_rank(const std::string& command) {
  static const char* kOrder[] = {"simulate", "ingest", "fit-law", "dependence", "price"};
  const auto it = std::find(std::begin(kOrder), std::end(kOrder), command);
  return static_cast<int>(it - std::begin(kOrder));
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Appends the data rows of a CSV, prefixed by a source column.
void append_rows(std::string& out, const std::string& source, const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    if (!line.empty()) out += source + "," + line + "\n";
}

std::string header_of(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

}  // namespace

int cmd_report(const Common& c, const ReportOptions& o) {
  const fs::path run(o.run);
  if (!fs::is_directory(run)) throw InputError(run.generic_string() + " is not a directory");
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(run)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("manifest_", 0) == 0 && ends_with(name, ".json") && name != manifest_name("report"))
      names.push_back(name);
  }
  std::sort(names.begin(), names.end());
  RunManifest m("report", "report", c.out, c.force, c.seed);
  m.config() = Json{{"run", o.run}};
  const std::vector<std::string> plots{"report_relative_difference.csv", "report_cohort_spearman.csv",
                                       "report_mortality_curves.csv"};
  std::vector<std::string> outputs = plots;
  outputs.push_back("report.json");
  m.claim(outputs);

  // Pipeline order, then file name.
  std::vector<std::pair<Json, std::string>> manifests;
  for (const auto& name : names) {
    Json j = parse_json(m.add_input(run / name), name);
    if (!j.contains("command") || !j.at("command").is_string() || !j.contains("outputs"))
      throw InputError(name + " is not a run manifest");
    manifests.emplace_back(std::move(j), name);
  }
  if (manifests.empty()) throw InputError("no run manifests in " + run.generic_string());
  std::stable_sort(manifests.begin(), manifests.end(), [](const auto& a, const auto& b) {
    return command_rank(a.first.at("command").template get<std::string>()) <
           command_rank(b.first.at("command").template get<std::string>());
  });

  Json report;
  report["tool_version"] = JOINTLIFE_VERSION;
  report["runs"] = Json::array();
  report["results"] = Json::object();
  std::string relative = "source,age,condition,product,value,rel_diff_pct\n";
  std::string cohorts = "source,cohort,rho,ci_low,ci_high,n\n";
  std::string curves = "source,age,mu_hat,mu_fit,qx_fit\n";

  for (const auto& [manifest, name] : manifests) {
    Json entry{{"manifest", name}, {"command", manifest.at("command")}, {"seed", manifest.at("seed")},
               {"config", manifest.at("config")}, {"outputs", Json::array()}};
    for (const auto& out : manifest.at("outputs")) {
      const std::string file = fs::path(out.at("path").get<std::string>()).filename().string();
      const std::string bytes = m.add_input(run / file);
      if (sha256_hex(bytes) != out.at("sha256").get<std::string>())
        throw InputError(file + " changed after " + name + " was written");
      entry["outputs"].push_back(file);
      if (ends_with(file, ".json")) {
        report["results"][file] = parse_json(bytes, file);
      } else if (file.rfind("price_", 0) == 0) {
        append_rows(relative, file, bytes);
      } else if (ends_with(file, "_cohorts.csv")) {
        append_rows(cohorts, file, bytes);
      } else if (ends_with(file, "_curve.csv") && header_of(bytes) == "age,mu_hat,mu_fit,qx_fit") {
        append_rows(curves, file, bytes);
      }
    }
    report["runs"].push_back(entry);
  }
  m.write(plots[0], relative);
  m.write(plots[1], cohorts);
  m.write(plots[2], curves);
  m.write("report.json", report);
  m.finish();
  std::cout << "report: " << manifests.size() << " runs\n";
  return 0;
}

}  // namespace jointlife::cli
