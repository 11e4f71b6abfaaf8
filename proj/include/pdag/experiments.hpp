#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdag/inference.hpp"
#include "pdag/io.hpp"
#include "pdag/simgen.hpp"
#include "pdag/solver.hpp"
#include "pdag/tuning.hpp"
#include "pdag/types.hpp"

namespace pdag {

enum class TestKind { Linkage, Pathway };

struct ExperimentConfig {
  GraphFamily::Kind family = GraphFamily::Kind::Random;
  int p = 10;
  int n = 200;
  int replications = 200;
  double alpha = 0.05;
  TestKind test = TestKind::Linkage;
  int f_size = 1;
  std::vector<double> alternative_values;  // empty: size-only experiment
  SolverConfig solver;
  int df_switch = 30;
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0: hardware concurrency

  void validate() const;
};

struct RepRecord {
  bool excluded = false;
  std::string error;
  double p_value = 1.0;
  double statistic = 0.0;
  double lr = 0.0;
  int df = 0;
  NullDist null_dist = NullDist::Degenerate;
  bool reject = false;
  bool exact_match = false;
  double hamming = 0.0;
  double oracle_p = 1.0;
};

struct CellReport {
  std::optional<double> alternative;  // nullopt for the null cell
  double rejection_rate = 0.0;
  int used = 0;
  int excluded = 0;
  std::vector<RepRecord> records;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellReport> cells;
  // accuracy experiments
  double exact_match_rate = 0.0;
  double hamming_accuracy = 0.0;
  // oracle comparison
  double clr_rejection_rate = 0.0;
  double oracle_rejection_rate = 0.0;
};

/// Size (null cell) and power (one cell per alternative value) rates.
ExperimentReport run_size_power(const ExperimentConfig& config);

/// Support-recovery agreement between fitted and true edge sets.
ExperimentReport run_accuracy(const ExperimentConfig& config);

/// Null-cell statistic samples for histogram export (plot-ready CSV).
ExperimentReport run_null_histogram(const ExperimentConfig& config);

/// Paired CLR / oracle likelihood-ratio rejection rates on null data.
ExperimentReport run_oracle_comparison(const ExperimentConfig& config);

Json report_to_json(const ExperimentReport& report);

/// Statistic samples plus the matching reference density, plot-ready.
void write_histogram_csv(const CellReport& cell, int df, TestKind kind, const std::string& path);

struct RealAnalysisRequest {
  std::vector<std::string> exclude_columns;
  std::vector<EdgeSet> linkage_targets;           // named below, resolved to indices
  std::vector<std::vector<int>> pathway_targets;  // node index lists
  CvGrid grid;
  SolverConfig solver;
  int df_switch = 30;
  bool run_cv = true;
};

struct RealAnalysisResult {
  CvSelection cv;
  FitResult fit;
  std::vector<TestResult> linkage_tests;
  std::vector<TestResult> pathway_tests;
  std::vector<std::string> names;
};

RealAnalysisResult analyze_real(const CountMatrix& counts, const RealAnalysisRequest& request);

}  // namespace pdag
