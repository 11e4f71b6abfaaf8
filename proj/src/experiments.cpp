#include "pdag/experiments.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

#include "pdag/distributions.hpp"
#include "pdag/graph.hpp"
#include "pdag/sampling.hpp"

namespace pdag {

void ExperimentConfig::validate() const {
  if (replications < 1) throw Error::domain("ExperimentConfig: replications must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error::domain("ExperimentConfig: alpha must be in (0, 1]");
  if (p < 2 || n < 1) throw Error::domain("ExperimentConfig: need p >= 2, n >= 1");
  if (f_size < 1) throw Error::domain("ExperimentConfig: f_size must be >= 1");
  if (test == TestKind::Pathway && f_size >= p)
    throw Error::domain("ExperimentConfig: pathway length must be < p");
}

namespace {

GraphFamily family_of(const ExperimentConfig& config) {
  switch (config.family) {
    case GraphFamily::Kind::Random: return GraphFamily::random(config.p);
    case GraphFamily::Kind::Hub: return GraphFamily::hub(config.p);
    case GraphFamily::Kind::Chain: return GraphFamily::chain(config.p);
  }
  throw Error::domain("unknown graph family");
}

int worker_count(const ExperimentConfig& config) {
  if (config.workers > 0) return config.workers;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(rep, rng) for each replication on a worker pool; records land in a
/// preallocated vector so aggregation is independent of scheduling.
template <typename Fn>
std::vector<RepRecord> run_replications(const ExperimentConfig& config, std::uint64_t cell_salt,
                                        Fn&& fn) {
  std::vector<RepRecord> records(config.replications);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int rep = next.fetch_add(1);
      if (rep >= config.replications) break;
      Rng rng = Rng::stream(config.master_seed ^ cell_salt, static_cast<std::uint64_t>(rep));
      try {
        fn(rep, rng, records[rep]);
      } catch (const std::exception& e) {
        records[rep] = RepRecord{};
        records[rep].excluded = true;
        records[rep].error = e.what();
      }
    }
  };
  int workers = std::min(worker_count(config), config.replications);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

CellReport aggregate(std::vector<RepRecord> records, std::optional<double> alt) {
  CellReport cell;
  cell.alternative = alt;
  int rejections = 0;
  for (const RepRecord& r : records) {
    if (r.excluded) {
      ++cell.excluded;
      continue;
    }
    ++cell.used;
    if (r.reject) ++rejections;
  }
  cell.rejection_rate = cell.used > 0 ? static_cast<double>(rejections) / cell.used : 0.0;
  cell.records = std::move(records);
  return cell;
}

// Consecutive chain segment of f_size edges with a seeded start; the pathway
// design of the experiments.
PathwaySpec chain_segment(int p, int f_size, Rng& rng) {
  int max_start = p - f_size;  // 1-based start in [1, max_start]
  int start = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_start)));
  std::vector<int> nodes(f_size + 1);
  for (int t = 0; t <= f_size; ++t) nodes[t] = start + t;
  return PathwaySpec(nodes);
}

struct LinkageDraw {
  CoefMatrix truth;
  EdgeSet f;
};

// Graph + test-set draw for a linkage cell. Null cells draw F from testable
// zero entries so |D0| = |F| by design; power cells draw F from the support
// and move those weights to the alternative value.
LinkageDraw draw_linkage_instance(const ExperimentConfig& config, Rng& rng,
                                  std::optional<double> alt) {
  GraphFamily family = family_of(config);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::uint64_t graph_seed = rng.next_u64();
    std::uint64_t f_seed = rng.next_u64();
    CoefMatrix truth = gen_graph(family, graph_seed);
    if (!alt) {
      EdgeSet zeros;
      try {
        zeros = choose_testable_zero_set(truth, config.f_size, f_seed);
      } catch (const Error&) {
        continue;  // not enough candidates; redraw the graph
      }
      return {std::move(truth), std::move(zeros)};
    }
    if (static_cast<int>(truth.support().size()) < config.f_size) continue;
    EdgeSet f = choose_test_set(truth, TestSetMode::AltNonzeros, config.f_size, f_seed);
    CoefMatrix shifted = apply_alternative(truth, AlternativeSpec::fixed_value(f, *alt));
    return {std::move(shifted), std::move(f)};
  }
  throw Error::domain("draw_linkage_instance: could not draw a usable graph/test set");
}

CellReport run_linkage_cell(const ExperimentConfig& config, std::optional<double> alt,
                            std::uint64_t salt) {
  TestConfig test_config{config.solver, config.df_switch};
  auto records = run_replications(config, salt, [&](int, Rng& rng, RepRecord& rec) {
    LinkageDraw draw = draw_linkage_instance(config, rng, alt);
    CountMatrix counts = sample_dag(draw.truth, config.n, rng.next_u64());
    DesignMatrix design(counts);
    TestResult res = test_linkage(design, draw.f, test_config);
    rec.p_value = res.p_value;
    rec.statistic = res.statistic;
    rec.lr = res.lr;
    rec.df = res.df;
    rec.null_dist = res.null_dist;
    rec.reject = res.p_value <= config.alpha;
  });
  return aggregate(std::move(records), alt);
}

CellReport run_pathway_cell(const ExperimentConfig& config, std::optional<double> alt,
                            std::uint64_t salt) {
  TestConfig test_config{config.solver, config.df_switch};
  auto records = run_replications(config, salt, [&](int, Rng& rng, RepRecord& rec) {
    CoefMatrix base = gen_graph(GraphFamily::chain(config.p), 0);
    PathwaySpec path = chain_segment(config.p, config.f_size, rng);
    // Size design removes the pathway edges; power design sets them to alt.
    double value = alt ? *alt : 0.0;
    CoefMatrix truth = apply_alternative(base, AlternativeSpec::fixed_value(path.edges(), value));
    CountMatrix counts = sample_dag(truth, config.n, rng.next_u64());
    DesignMatrix design(counts);
    TestResult res = test_pathway(design, path, test_config);
    rec.p_value = res.p_value;
    rec.statistic = res.statistic;
    rec.lr = res.lr;
    rec.df = res.df;
    rec.null_dist = res.null_dist;
    rec.reject = res.p_value <= config.alpha;
  });
  return aggregate(std::move(records), alt);
}

CellReport run_cell(const ExperimentConfig& config, std::optional<double> alt, std::uint64_t salt) {
  return config.test == TestKind::Linkage ? run_linkage_cell(config, alt, salt)
                                          : run_pathway_cell(config, alt, salt);
}

}  // namespace

ExperimentReport run_size_power(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.cells.push_back(run_cell(config, std::nullopt, 0));
  std::uint64_t salt = 1;
  for (double alt : config.alternative_values)
    report.cells.push_back(run_cell(config, alt, salt++));
  return report;
}

ExperimentReport run_null_histogram(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  report.cells.push_back(run_cell(config, std::nullopt, 0));
  return report;
}

ExperimentReport run_accuracy(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  GraphFamily family = family_of(config);
  auto records = run_replications(config, 0x9c, [&](int, Rng& rng, RepRecord& rec) {
    CoefMatrix truth = gen_graph(family, rng.next_u64());
    CountMatrix counts = sample_dag(truth, config.n, rng.next_u64());
    DesignMatrix design(counts);
    FitResult fit_res = fit_ha_linkage(design, EdgeSet{}, config.solver);
    EdgeSet true_support = truth.support();
    rec.exact_match = fit_res.edges == true_support;
    int p = config.p;
    int mismatches = 0;
    for (int i = 1; i <= p; ++i)
      for (int j = 1; j <= p; ++j) {
        if (i == j) continue;
        if (fit_res.edges.contains({i, j}) != true_support.contains({i, j})) ++mismatches;
      }
    rec.hamming = 1.0 - static_cast<double>(mismatches) / (p * (p - 1));
    rec.reject = rec.exact_match;
  });
  CellReport cell = aggregate(std::move(records), std::nullopt);
  double hamming_total = 0.0;
  int exact = 0;
  for (const RepRecord& r : cell.records) {
    if (r.excluded) continue;
    hamming_total += r.hamming;
    if (r.exact_match) ++exact;
  }
  report.exact_match_rate = cell.used > 0 ? static_cast<double>(exact) / cell.used : 0.0;
  report.hamming_accuracy = cell.used > 0 ? hamming_total / cell.used : 0.0;
  report.cells.push_back(std::move(cell));
  return report;
}

ExperimentReport run_oracle_comparison(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.config = config;
  TestConfig test_config{config.solver, config.df_switch};
  auto records = run_replications(config, 0x04, [&](int, Rng& rng, RepRecord& rec) {
    LinkageDraw draw = draw_linkage_instance(config, rng, std::nullopt);
    CountMatrix counts = sample_dag(draw.truth, config.n, rng.next_u64());
    DesignMatrix design(counts);

    TestResult res = test_linkage(design, draw.f, test_config);
    rec.p_value = res.p_value;
    rec.statistic = res.statistic;
    rec.df = res.df;
    rec.reject = res.p_value <= config.alpha;

    EdgeSet e0 = draw.truth.support();
    double lr_or = oracle_linkage_lr(design, draw.f, e0);
    int df_or = static_cast<int>(estimate_D0(draw.f, e0, config.p).size());
    rec.oracle_p = df_or == 0 ? 1.0 : linkage_p_value(lr_or, df_or, config.df_switch);
  });
  CellReport cell = aggregate(std::move(records), std::nullopt);
  int clr_rej = 0, or_rej = 0;
  for (const RepRecord& r : cell.records) {
    if (r.excluded) continue;
    if (r.reject) ++clr_rej;
    if (r.oracle_p <= config.alpha) ++or_rej;
  }
  report.clr_rejection_rate = cell.used > 0 ? static_cast<double>(clr_rej) / cell.used : 0.0;
  report.oracle_rejection_rate = cell.used > 0 ? static_cast<double>(or_rej) / cell.used : 0.0;
  report.cells.push_back(std::move(cell));
  return report;
}

Json report_to_json(const ExperimentReport& report) {
  Json j;
  const ExperimentConfig& c = report.config;
  Json cfg;
  switch (c.family) {
    case GraphFamily::Kind::Random: cfg["family"] = "random"; break;
    case GraphFamily::Kind::Hub: cfg["family"] = "hub"; break;
    case GraphFamily::Kind::Chain: cfg["family"] = "chain"; break;
  }
  cfg["p"] = c.p;
  cfg["n"] = c.n;
  cfg["replications"] = c.replications;
  cfg["alpha"] = c.alpha;
  cfg["test"] = c.test == TestKind::Linkage ? "linkage" : "pathway";
  cfg["f_size"] = c.f_size;
  cfg["alternatives"] = c.alternative_values;
  cfg["tau"] = c.solver.params.tau;
  cfg["mu"] = c.solver.params.mu;
  cfg["rho"] = c.solver.rho;
  cfg["df_switch"] = c.df_switch;
  cfg["seed"] = c.master_seed;
  j["config"] = std::move(cfg);

  Json cells = Json::array();
  for (const CellReport& cell : report.cells) {
    Json jc;
    if (cell.alternative)
      jc["alternative"] = *cell.alternative;
    else
      jc["alternative"] = nullptr;
    jc["rejection_rate"] = cell.rejection_rate;
    jc["used"] = cell.used;
    jc["excluded"] = cell.excluded;
    Json stats = Json::array(), pvals = Json::array(), dfs = Json::array();
    for (const RepRecord& r : cell.records) {
      if (r.excluded) continue;
      stats.push_back(r.statistic);
      pvals.push_back(r.p_value);
      dfs.push_back(r.df);
    }
    jc["statistics"] = std::move(stats);
    jc["p_values"] = std::move(pvals);
    jc["dfs"] = std::move(dfs);
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  j["exact_match_rate"] = report.exact_match_rate;
  j["hamming_accuracy"] = report.hamming_accuracy;
  j["clr_rejection_rate"] = report.clr_rejection_rate;
  j["oracle_rejection_rate"] = report.oracle_rejection_rate;
  return j;
}

void write_histogram_csv(const CellReport& cell, int df, TestKind kind, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error::parse("cannot write " + path);
  out << "statistic,overlay_x,overlay_density\n";
  double xmax = 0.0;
  for (const RepRecord& r : cell.records)
    if (!r.excluded) xmax = std::max(xmax, r.statistic);
  xmax = std::max(xmax, 1.0) * 1.05;
  const int grid = 256;
  std::size_t row = 0;
  for (const RepRecord& r : cell.records) {
    if (r.excluded) continue;
    out << format_double(r.statistic);
    if (row < grid) {
      double x = xmax * (row + 0.5) / grid;
      double density = kind == TestKind::Linkage ? chi2_pdf(x, df) : min_chi2_pdf(x, df);
      out << "," << format_double(x) << "," << format_double(density);
    } else {
      out << ",,";
    }
    out << "\n";
    ++row;
  }
  for (; row < grid; ++row) {
    double x = xmax * (row + 0.5) / grid;
    double density = kind == TestKind::Linkage ? chi2_pdf(x, df) : min_chi2_pdf(x, df);
    out << "," << format_double(x) << "," << format_double(density) << "\n";
  }
}

RealAnalysisResult analyze_real(const CountMatrix& counts, const RealAnalysisRequest& request) {
  DesignMatrix design(counts);
  RealAnalysisResult result;
  result.names = counts.names();

  SolverConfig solver = request.solver;
  if (request.run_cv) {
    result.cv = cv_select(design, request.grid, solver);
    solver.params.mu = result.cv.mu;
    solver.params.tau = result.cv.tau;
  }
  result.fit = fit_ha_linkage(design, EdgeSet{}, solver);

  TestConfig test_config{solver, request.df_switch};
  for (const EdgeSet& f : request.linkage_targets) {
    if (f.empty()) throw Error::usage("analyze_real: empty linkage target");
    result.linkage_tests.push_back(test_linkage(design, f, test_config));
  }
  for (const std::vector<int>& nodes : request.pathway_targets)
    result.pathway_tests.push_back(test_pathway(design, PathwaySpec(nodes), test_config));
  return result;
}

}  // namespace pdag
