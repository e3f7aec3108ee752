#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jointlife::cli {

struct Common {
  std::uint64_t seed = 1;
  bool seed_given = false;
  bool force = false;
  std::string out = ".";
};

struct IngestOptions {
  std::string persons;
};

struct FitLawOptions {
  std::string law;
  std::string table;
  int starts = 8;
  int min_age = 0;
  int max_age = 200;
};

struct DependenceOptions {
  std::string data = ".";
  std::string pairs = "couples";
  std::string stat = "spearman";
  std::string member;
  std::vector<std::string> families{"clayton", "gumbel", "frank", "gaussian"};
  int grid = 500;
  int bootstraps = 5000;
  int resamples = 1000;
  double level = 0.95;
  std::string hypothesis = "pqd";
  bool by_cohort = false;
  int cohort_width = 10;
};

struct PriceOptions {
  std::string data = ".";
  std::string product = "annuity";
  int age = 30;
  std::optional<int> age_to;
  std::vector<std::string> conditions{"none"};
  std::string sex;
  double rate = 0.03;
  int horizon = 100;
  int term = 10;
  int min_risk_set = 0;
  std::string copula;  // JSON file
  std::string family;
  double theta = 0.0;
  int gap = 2;
};

struct SimulateOptions {
  std::string config;
};

struct ReportOptions {
  std::string run = ".";
};

int cmd_ingest(const Common& common, const IngestOptions& o);
int cmd_fit_law(const Common& common, const FitLawOptions& o);
int cmd_dependence(const Common& common, const DependenceOptions& o);
int cmd_price(const Common& common, const PriceOptions& o);
int cmd_simulate(const Common& common, const SimulateOptions& o);
int cmd_report(const Common& common, const ReportOptions& o);

}  // namespace jointlife::cli
