#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "commands.hpp"
#include "jointlife/common.hpp"

using namespace jointlife;
using namespace jointlife::cli;

int main(int argc, char** argv) {
  CLI::App app{"Joint-life mortality, dependence and pricing toolkit"};
  app.set_version_flag("--version", JOINTLIFE_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  std::size_t threads = 0;
  app.add_option("--seed", common.seed, "Root seed; every random stream is derived from it");
  app.add_option("--threads", threads, "Worker cap (default: JOINTLIFE_THREADS or all cores)")->check(CLI::PositiveNumber);
  app.add_flag("--force", common.force, "Overwrite existing outputs");
  app.add_option("-o,--out", common.out, "Output directory");

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build couple, child-parent and child-grandparent tables");
  ingest_cmd->add_option("--persons", ingest.persons, "Persons CSV")->required();

  FitLawOptions fit_law;
  auto* fit_cmd = app.add_subcommand("fit-law", "Fit a parametric mortality law to a life table");
  fit_cmd->add_option("--law", fit_law.law, "gompertz, beard, carriere or hp")->required();
  fit_cmd->add_option("--table", fit_law.table, "Life table CSV (age,qx[,lx...])")->required();
  fit_cmd->add_option("--starts", fit_law.starts, "Simplex multistarts");
  fit_cmd->add_option("--min-age", fit_law.min_age, "Youngest age used");
  fit_cmd->add_option("--max-age", fit_law.max_age, "Oldest age used");

  DependenceOptions dep;
  auto* dep_cmd = app.add_subcommand("dependence", "Rank correlation, quadrant test or copula fit");
  dep_cmd->add_option("--data", dep.data, "Directory written by ingest");
  dep_cmd->add_option("--pairs", dep.pairs, "couples, child_parents or child_grandparents");
  dep_cmd->add_option("--stat", dep.stat, "spearman, pqd or copula-fit");
  dep_cmd->add_option("--member", dep.member, "father/mother, or gff/gmf/gfm/gmm");
  dep_cmd->add_option("--family", dep.families, "Copula families to fit");
  dep_cmd->add_option("--grid", dep.grid, "Quadrant test grid size");
  dep_cmd->add_option("--bootstraps", dep.bootstraps, "Quadrant test replicates");
  dep_cmd->add_option("--resamples", dep.resamples, "Spearman bootstrap replicates");
  dep_cmd->add_option("--level", dep.level, "Confidence level");
  dep_cmd->add_option("--hypothesis", dep.hypothesis, "pqd or nqd");
  dep_cmd->add_flag("--by-cohort", dep.by_cohort, "Spearman per birth cohort");
  dep_cmd->add_option("--cohort-width", dep.cohort_width, "Cohort width in years");

  PriceOptions price;
  auto* price_cmd = app.add_subcommand("price", "Price single-life or joint-life products");
  price_cmd->add_option("--data", price.data, "Directory written by ingest");
  price_cmd->add_option("--product", price.product,
                        "annuity, whole, term, endowment, temporary, joint, last, reversion or widow");
  price_cmd->add_option("--age", price.age, "Issue age (wife's age for joint products)");
  price_cmd->add_option("--age-to", price.age_to, "Last issue age of a range");
  price_cmd->add_option("--condition", price.conditions, "Family-history condition, e.g. both_alive@30");
  price_cmd->add_option("--sex", price.sex, "Restrict to male or female children");
  price_cmd->add_option("--rate", price.rate, "Annual interest rate");
  price_cmd->add_option("--horizon", price.horizon, "Payment horizon in years");
  price_cmd->add_option("--term", price.term, "Contract term for term, endowment and temporary");
  price_cmd->add_option("--min-risk-set", price.min_risk_set, "Skip ages with fewer lives at risk");
  price_cmd->add_option("--copula", price.copula, "Copula JSON, or a copula-fit result");
  price_cmd->add_option("--family", price.family, "Copula family when --copula is not given");
  price_cmd->add_option("--theta", price.theta, "Copula parameter");
  price_cmd->add_option("--gap", price.gap, "Husband's age minus wife's age");

  SimulateOptions simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic genealogy");
  sim_cmd->add_option("--config", simulate.config, "Generator config JSON");

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Consolidate run outputs into a report");
  report_cmd->add_option("--run", report.run, "Directory holding the run manifests");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  common.seed_given = app.count("--seed") > 0;
  if (threads > 0) set_max_threads(threads);

  try {
    if (*ingest_cmd) return cmd_ingest(common, ingest);
    if (*fit_cmd) return cmd_fit_law(common, fit_law);
    if (*dep_cmd) return cmd_dependence(common, dep);
    if (*price_cmd) return cmd_price(common, price);
    if (*sim_cmd) return cmd_simulate(common, simulate);
    if (*report_cmd) return cmd_report(common, report);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const EmptyRiskSetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
