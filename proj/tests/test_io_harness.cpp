#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pdag/experiments.hpp"
#include "pdag/io.hpp"
#include "pdag/rng.hpp"
#include "pdag/sampling.hpp"
#include "pdag/simgen.hpp"
#include "test_util.hpp"

using namespace pdag;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ExperimentConfig quick_experiment() {
  ExperimentConfig config;
  config.p = 6;
  config.n = 120;
  config.replications = 8;
  config.solver.params.mu = 20.0;
  config.solver.params.tau = 0.3;
  config.solver.epsilon = 1e-3;
  config.solver.max_admm_iterations = 300;
  config.solver.max_dc_iterations = 15;
  config.solver.admm_tol = 3e-4;
  config.master_seed = 31;
  config.workers = 2;
  return config;
}

}  // namespace

TEST_CASE("counts CSV round trip") {
  CountMatrix counts = testutil::random_counts(12, 3, 4);
  std::string path = temp_path("pdag_counts.csv");
  write_counts_csv(counts, path);
  CountMatrix back = read_counts_csv(path);
  CHECK(back.values() == counts.values());
  CHECK(back.names() == counts.names());
  std::remove(path.c_str());
}

TEST_CASE("counts CSV error reporting") {
  CHECK_THROWS_AS(parse_counts_csv(""), Error);
  CHECK_THROWS_AS(parse_counts_csv("a,b,a\n1,2,3\n"), Error);  // duplicate header
  CHECK_THROWS_AS(parse_counts_csv("a,b\n1\n"), Error);        // ragged row
  CHECK_THROWS_AS(parse_counts_csv("a,b\n1,2.5\n"), Error);    // non-integer
  CHECK_THROWS_AS(parse_counts_csv("a,b\n1,-2\n"), Error);     // negative
  // declared non-count column is dropped
  CountMatrix kept = parse_counts_csv("a,b,c\n1,2.5,3\n0,9.1,2\n", {"b"});
  CHECK(kept.p() == 2);
  CHECK(kept.names()[0] == "a");
  CHECK(kept.names()[1] == "c");
  CHECK_THROWS_AS(parse_counts_csv("a,b\n1,2\n", {"zz"}), Error);
}

TEST_CASE("coef JSON round trip preserves orientation") {
  CoefMatrix coef = testutil::random_coef(4, 9);
  Json j = coef_to_json(coef);
  CHECK(j["p"] == 4);
  CoefMatrix back = coef_from_json(j);
  CHECK(back == coef);
  // row i, column j = effect of i on j
  CHECK(j["weights"][0][2].get<double>() == coef.weight(1, 3));
}

TEST_CASE("edge CSV format") {
  CoefMatrix coef(3);
  coef.set_weight(1, 2, -0.5);
  std::string path = temp_path("pdag_edges.csv");
  write_edges_csv(coef.support(), coef, path);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == "from,to,weight");
  CHECK(line == "1,2,-0.5");
  std::remove(path.c_str());
}

TEST_CASE("test result JSON carries the contract fields") {
  TestResult res;
  res.lr = 1.25;
  res.df = 2;
  res.statistic = 2.5;
  res.null_dist = NullDist::ChiSquare;
  res.p_value = 0.28;
  Json j = test_result_to_json(res);
  CHECK(j["lr"] == 1.25);
  CHECK(j["df"] == 2);
  CHECK(j["null"] == "chi2");
  CHECK(j["p_value"] == 0.28);
  CHECK(j.contains("h0_fit"));
  CHECK(j.contains("ha_fit"));
}

TEST_CASE("size experiment aggregates and excludes") {
  ExperimentConfig config = quick_experiment();
  ExperimentReport report = run_size_power(config);
  REQUIRE(report.cells.size() == 1);
  const CellReport& cell = report.cells[0];
  CHECK(cell.used + cell.excluded == config.replications);
  CHECK(cell.rejection_rate >= 0.0);
  CHECK(cell.rejection_rate <= 1.0);
  int count = 0;
  for (const RepRecord& r : cell.records)
    if (!r.excluded) ++count;
  CHECK(count == cell.used);
}

TEST_CASE("alpha = 1 rejects everything; p = 1 never rejects below it") {
  ExperimentConfig config = quick_experiment();
  config.replications = 4;
  config.alpha = 1.0;
  ExperimentReport report = run_size_power(config);
  CHECK(report.cells[0].rejection_rate == doctest::Approx(1.0));
  // p-value identically 1 cannot reject at alpha < 1
  for (const RepRecord& r : report.cells[0].records) {
    if (r.excluded) continue;
    if (r.p_value >= 1.0) CHECK((r.p_value <= 0.05) == false);
  }
}

TEST_CASE("reports are deterministic across worker counts") {
  ExperimentConfig config = quick_experiment();
  config.workers = 1;
  Json serial = report_to_json(run_size_power(config));
  config.workers = 3;
  Json parallel = report_to_json(run_size_power(config));
  CHECK(serial.dump() == parallel.dump());
}

TEST_CASE("accuracy experiment reports both agreement metrics") {
  ExperimentConfig config = quick_experiment();
  config.replications = 6;
  ExperimentReport report = run_accuracy(config);
  CHECK(report.exact_match_rate >= 0.0);
  CHECK(report.exact_match_rate <= 1.0);
  CHECK(report.hamming_accuracy >= 0.0);
  CHECK(report.hamming_accuracy <= 1.0);
  // identical edge sets count as agreement 1.0: replication with exact match
  // must contribute hamming 1.0
  for (const RepRecord& r : report.cells[0].records)
    if (!r.excluded && r.exact_match) CHECK(r.hamming == doctest::Approx(1.0));
}

TEST_CASE("histogram export carries one statistic per used replication") {
  ExperimentConfig config = quick_experiment();
  ExperimentReport report = run_null_histogram(config);
  const CellReport& cell = report.cells[0];
  std::string path = temp_path("pdag_hist.csv");
  write_histogram_csv(cell, 1, TestKind::Linkage, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  int stat_rows = 0;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != ',') ++stat_rows;
  CHECK(stat_rows == cell.used);
  std::remove(path.c_str());
}

TEST_CASE("oracle comparison produces paired rates") {
  ExperimentConfig config = quick_experiment();
  config.replications = 6;
  ExperimentReport report = run_oracle_comparison(config);
  CHECK(report.clr_rejection_rate >= 0.0);
  CHECK(report.clr_rejection_rate <= 1.0);
  CHECK(report.oracle_rejection_rate >= 0.0);
  CHECK(report.oracle_rejection_rate <= 1.0);
}

TEST_CASE("real-data analysis on a synthetic wide table") {
  // NBA-shaped file: 19 columns and 392 rows, two columns declared non-count
  const int p = 17, n = 392;
  CoefMatrix truth = gen_graph(GraphFamily::random(p), 5);
  CountMatrix sample = sample_dag(truth, n, 6);
  std::vector<std::string> names = sample.names();
  names.push_back("Minutes");
  names.push_back("GmSc");
  Matrix values(n, p + 2);
  values.leftCols(p) = sample.values();
  Rng rng(3);
  for (int h = 0; h < n; ++h) {
    values(h, p) = 30.0 + rng.next_double();      // non-integer columns
    values(h, p + 1) = 10.0 + rng.next_double();
  }
  std::string path = temp_path("pdag_real.csv");
  {
    std::ofstream out(path);
    for (int j = 0; j < p + 2; ++j) out << (j ? "," : "") << names[j];
    out << "\n";
    for (int h = 0; h < n; ++h) {
      for (int j = 0; j < p + 2; ++j) out << (j ? "," : "") << format_double(values(h, j));
      out << "\n";
    }
  }

  CHECK_THROWS_AS(read_counts_csv(path), Error);  // non-count columns present
  CountMatrix counts = read_counts_csv(path, {"Minutes", "GmSc"});
  CHECK(counts.p() == p);

  RealAnalysisRequest request;
  request.run_cv = false;
  request.solver.params.mu = 25.0;
  request.solver.params.tau = 0.3;
  request.solver.epsilon = 1e-3;
  request.solver.max_admm_iterations = 200;
  request.solver.max_dc_iterations = 10;
  request.solver.admm_tol = 5e-4;
  RealAnalysisResult result = analyze_real(counts, request);
  CHECK(is_acyclic(result.fit.edges, p));
  std::remove(path.c_str());
}
