// Command-line surface for the Poisson DAG estimation and testing library:
// data simulation, constrained fits, linkage/pathway tests, cross-validation,
// the canned experiment suites, and real-data analysis.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pdag/experiments.hpp"
#include "pdag/graph.hpp"
#include "pdag/io.hpp"
#include "pdag/sampling.hpp"
#include "pdag/simgen.hpp"
#include "pdag/tuning.hpp"

using namespace pdag;

namespace {

namespace fs = std::filesystem;

double default_mu(int n) { return 2.0 * std::sqrt(static_cast<double>(n)); }

struct CommonOpts {
  double tau = 0.3;
  double mu = 0.0;  // 0: scale with the sample size
  double rho = 1.0;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out = ".";
  long admm_cap = 600;
  long dc_cap = 30;
  double admm_tol = 1e-4;
  double epsilon = 1e-4;
};

void add_solver_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--tau", opts.tau, "Indicator approximation scale");
  cmd->add_option("--mu", opts.mu, "Sparsity penalty (default scales with n)");
  cmd->add_option("--rho", opts.rho, "Initial augmented-Lagrangian penalty");
  cmd->add_option("--seed", opts.seed, "Master seed");
  cmd->add_option("--workers", opts.workers, "Worker threads (0 = hardware)");
  cmd->add_option("--out", opts.out, "Output directory");
  cmd->add_option("--admm-cap", opts.admm_cap, "ADMM iteration cap");
  cmd->add_option("--dc-cap", opts.dc_cap, "Outer-loop iteration cap");
  cmd->add_option("--admm-tol", opts.admm_tol, "ADMM residual tolerance (RMS)");
  cmd->add_option("--epsilon", opts.epsilon, "Outer-loop objective tolerance");
}

SolverConfig solver_config(const CommonOpts& opts, int n) {
  SolverConfig cfg;
  cfg.params.tau = opts.tau;
  cfg.params.mu = opts.mu > 0.0 ? opts.mu : default_mu(n);
  cfg.rho = opts.rho;
  cfg.epsilon = opts.epsilon;
  cfg.max_admm_iterations = opts.admm_cap;
  cfg.max_dc_iterations = opts.dc_cap;
  cfg.admm_tol = opts.admm_tol;
  return cfg;
}

GraphFamily::Kind parse_family(const std::string& name) {
  if (name == "random") return GraphFamily::Kind::Random;
  if (name == "hub") return GraphFamily::Kind::Hub;
  if (name == "chain") return GraphFamily::Kind::Chain;
  throw Error::usage("unknown family '" + name + "' (random|hub|chain)");
}

// "1->2;4->7" or "1,2;4,7"
EdgeSet parse_edge_list(const std::string& text) {
  EdgeSet edges;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto arrow = item.find("->");
    std::size_t split = arrow != std::string::npos ? arrow : item.find(',');
    std::size_t skip = arrow != std::string::npos ? 2 : 1;
    if (split == std::string::npos) throw Error::usage("bad edge '" + item + "'");
    edges.insert({std::stoi(item.substr(0, split)), std::stoi(item.substr(split + skip))});
  }
  if (edges.empty()) throw Error::usage("empty edge list");
  return edges;
}

// "1->2->5" or names resolved against a header
std::vector<int> parse_path_nodes(const std::string& text,
                                  const std::vector<std::string>* names = nullptr) {
  std::vector<int> nodes;
  std::string item;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto next = text.find("->", pos);
    item = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!item.empty()) {
      bool numeric = item.find_first_not_of("0123456789") == std::string::npos;
      if (numeric) {
        nodes.push_back(std::stoi(item));
      } else if (names) {
        auto it = std::find(names->begin(), names->end(), item);
        if (it == names->end()) throw Error::usage("unknown column '" + item + "'");
        nodes.push_back(static_cast<int>(it - names->begin()) + 1);
      } else {
        throw Error::usage("node '" + item + "' is not an index");
      }
    }
    if (next == std::string::npos) break;
    pos = next + 2;
  }
  if (nodes.size() < 2) throw Error::usage("path needs at least two nodes");
  return nodes;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw Error::usage("empty list");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void ensure_out_dir(const std::string& out) {
  if (!out.empty() && out != ".") fs::create_directories(out);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig config;
  if (j.contains("family")) config.family = parse_family(j["family"].get<std::string>());
  if (j.contains("p")) config.p = j["p"].get<int>();
  if (j.contains("n")) config.n = j["n"].get<int>();
  if (j.contains("replications")) config.replications = j["replications"].get<int>();
  if (j.contains("alpha")) config.alpha = j["alpha"].get<double>();
  if (j.contains("test"))
    config.test = j["test"].get<std::string>() == "pathway" ? TestKind::Pathway : TestKind::Linkage;
  if (j.contains("f_size")) config.f_size = j["f_size"].get<int>();
  if (j.contains("alternatives"))
    config.alternative_values = j["alternatives"].get<std::vector<double>>();
  if (j.contains("tau")) config.solver.params.tau = j["tau"].get<double>();
  if (j.contains("mu")) config.solver.params.mu = j["mu"].get<double>();
  if (j.contains("rho")) config.solver.rho = j["rho"].get<double>();
  if (j.contains("df_switch")) config.df_switch = j["df_switch"].get<int>();
  if (j.contains("seed")) config.master_seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) config.workers = j["workers"].get<int>();
  return config;
}

ExperimentConfig experiment_defaults(const CommonOpts& opts, int p, int n, int reps) {
  ExperimentConfig config;
  config.p = p;
  config.n = n;
  config.replications = reps;
  config.alpha = opts.alpha;
  config.solver = solver_config(opts, n);
  config.master_seed = opts.seed;
  config.workers = opts.workers;
  return config;
}

void write_report(const ExperimentReport& report, const std::string& dir,
                  const std::string& stem, double seconds) {
  write_json(report_to_json(report), join_path(dir, stem + "_report.json"));
  Json meta;
  meta["elapsed_seconds"] = seconds;
  write_json(meta, join_path(dir, stem + "_meta.json"));
}

int run_reproduce(const CommonOpts& opts, int table, int figure, int reps, bool full_scale,
                  const std::string& config_path) {
  ensure_out_dir(opts.out);
  auto start = std::chrono::steady_clock::now();
  auto elapsed = [&]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  if (!config_path.empty()) {
    ExperimentConfig config = config_from_json(read_json(config_path));
    if (config.solver.params.mu <= 0.0) config.solver.params.mu = default_mu(config.n);
    ExperimentReport report = run_size_power(config);
    write_report(report, opts.out, "custom", elapsed());
    return 0;
  }

  if (table == 1) {
    // Linkage size and power, |F| = 1 design.
    std::vector<std::pair<int, int>> cells = {{50, 500}};
    std::vector<GraphFamily::Kind> families = {GraphFamily::Kind::Random};
    if (full_scale) {
      cells = {{50, 500}, {100, 500}, {150, 100}};
      families = {GraphFamily::Kind::Random, GraphFamily::Kind::Hub};
    }
    for (GraphFamily::Kind family : families)
      for (auto [p, n] : cells) {
        ExperimentConfig config = experiment_defaults(opts, p, n, reps);
        config.family = family;
        config.test = TestKind::Linkage;
        config.f_size = 1;
        config.alternative_values = {-0.1, -0.3, -0.5};
        if (opts.mu <= 0.0) config.solver.params.mu = default_mu(n);
        ExperimentReport report = run_size_power(config);
        std::string stem = std::string("table1_") +
                           (family == GraphFamily::Kind::Random ? "random" : "hub") + "_p" +
                           std::to_string(p) + "_n" + std::to_string(n);
        write_report(report, opts.out, stem, elapsed());
        std::cout << stem << ": size " << report.cells[0].rejection_rate;
        for (std::size_t c = 1; c < report.cells.size(); ++c)
          std::cout << ", power(" << *report.cells[c].alternative << ") "
                    << report.cells[c].rejection_rate;
        std::cout << "\n";
      }
    return 0;
  }
  if (table == 2) {
    std::vector<std::pair<int, int>> cells = {{50, 500}};
    if (full_scale) cells = {{50, 500}, {100, 500}, {150, 100}};
    for (auto [p, n] : cells) {
      ExperimentConfig config = experiment_defaults(opts, p, n, reps);
      config.family = GraphFamily::Kind::Chain;
      config.test = TestKind::Pathway;
      config.f_size = 5;
      config.alternative_values = {-0.1, -0.3, -0.5};
      ExperimentReport report = run_size_power(config);
      std::string stem = "table2_chain_p" + std::to_string(p) + "_n" + std::to_string(n);
      write_report(report, opts.out, stem, elapsed());
      std::cout << stem << ": size " << report.cells[0].rejection_rate;
      for (std::size_t c = 1; c < report.cells.size(); ++c)
        std::cout << ", power(" << *report.cells[c].alternative << ") "
                  << report.cells[c].rejection_rate;
      std::cout << "\n";
    }
    return 0;
  }
  if (table == 3) {
    std::vector<std::pair<int, int>> cells = {{10, 200}};
    if (full_scale) cells = {{10, 200}, {30, 600}, {50, 1000}};
    for (GraphFamily::Kind family : {GraphFamily::Kind::Random, GraphFamily::Kind::Hub})
      for (auto [p, n] : cells) {
        ExperimentConfig config = experiment_defaults(opts, p, n, reps);
        config.family = family;
        ExperimentReport report = run_accuracy(config);
        std::string stem = std::string("table3_") +
                           (family == GraphFamily::Kind::Random ? "random" : "hub") + "_p" +
                           std::to_string(p) + "_n" + std::to_string(n);
        write_report(report, opts.out, stem, elapsed());
        std::cout << stem << ": exact " << report.exact_match_rate << ", hamming "
                  << report.hamming_accuracy << "\n";
      }
    return 0;
  }
  if (figure == 2 || figure == 3) {
    // Null distribution of the linkage statistic: |D0| = 1 (fig 2) or 30 (fig 3).
    int f_size = figure == 2 ? 1 : 30;
    int p = figure == 2 ? (full_scale ? 50 : 10) : 50;
    int n = figure == 2 ? (full_scale ? 500 : 200) : 500;
    ExperimentConfig config = experiment_defaults(opts, p, n, reps);
    config.test = TestKind::Linkage;
    config.f_size = f_size;
    ExperimentReport report = run_null_histogram(config);
    std::string stem = "figure" + std::to_string(figure);
    write_report(report, opts.out, stem, elapsed());
    write_histogram_csv(report.cells[0], f_size, TestKind::Linkage,
                        join_path(opts.out, stem + "_samples.csv"));
    return 0;
  }
  if (figure == 4) {
    ExperimentConfig config = experiment_defaults(opts, full_scale ? 50 : 10,
                                                  full_scale ? 500 : 300, reps);
    config.family = GraphFamily::Kind::Chain;
    config.test = TestKind::Pathway;
    config.f_size = 5;
    ExperimentReport report = run_null_histogram(config);
    write_report(report, opts.out, "figure4", elapsed());
    write_histogram_csv(report.cells[0], 5, TestKind::Pathway,
                        join_path(opts.out, "figure4_samples.csv"));
    return 0;
  }
  throw Error::usage("reproduce needs --table {1,2,3} or --figure {2,3,4}");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson DAG estimation and constrained likelihood-ratio tests"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic graph and data");
  CommonOpts sim_opts;
  std::string sim_family = "random";
  int sim_p = 10, sim_n = 200;
  sim->add_option("--family", sim_family, "random|hub|chain");
  sim->add_option("--p", sim_p, "Node count");
  sim->add_option("--n", sim_n, "Sample size");
  add_solver_flags(sim, sim_opts);

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Constrained maximum-likelihood fit");
  CommonOpts fit_opts;
  std::string fit_data;
  std::string fit_exclude;
  fit_cmd->add_option("--data", fit_data, "Counts CSV")->required();
  fit_cmd->add_option("--exclude", fit_exclude, "Comma-separated non-count columns");
  add_solver_flags(fit_cmd, fit_opts);

  // test-linkage
  auto* link_cmd = app.add_subcommand("test-linkage", "Constrained LR test for linkages");
  CommonOpts link_opts;
  std::string link_data, link_f, link_exclude;
  int link_df_switch = 30;
  link_cmd->add_option("--data", link_data, "Counts CSV")->required();
  link_cmd->add_option("--f", link_f, "Edges under test, e.g. '1->2;3->4'")->required();
  link_cmd->add_option("--exclude", link_exclude, "Comma-separated non-count columns");
  link_cmd->add_option("--df-switch", link_df_switch, "Chi-square to normal switch");
  add_solver_flags(link_cmd, link_opts);

  // test-pathway
  auto* path_cmd = app.add_subcommand("test-pathway", "Constrained LR test for a pathway");
  CommonOpts path_opts;
  std::string path_data, path_nodes, path_exclude;
  int path_df_switch = 30;
  path_cmd->add_option("--data", path_data, "Counts CSV")->required();
  path_cmd->add_option("--path", path_nodes, "Pathway, e.g. '1->2->5'")->required();
  path_cmd->add_option("--exclude", path_exclude, "Comma-separated non-count columns");
  path_cmd->add_option("--df-switch", path_df_switch, "Min-chi2 to generalized-Gamma switch");
  add_solver_flags(path_cmd, path_opts);

  // cv
  auto* cv_cmd = app.add_subcommand("cv", "Cross-validate (mu, tau)");
  CommonOpts cv_opts;
  std::string cv_data, cv_mu_grid = "", cv_tau_grid = "", cv_exclude;
  int cv_fold_count = 5;
  cv_cmd->add_option("--data", cv_data, "Counts CSV")->required();
  cv_cmd->add_option("--mu-grid", cv_mu_grid, "Comma-separated mu values");
  cv_cmd->add_option("--tau-grid", cv_tau_grid, "Comma-separated tau values");
  cv_cmd->add_option("--folds", cv_fold_count, "Fold count");
  cv_cmd->add_option("--exclude", cv_exclude, "Comma-separated non-count columns");
  add_solver_flags(cv_cmd, cv_opts);

  // reproduce
  auto* rep_cmd = app.add_subcommand("reproduce", "Run the canned experiment suites");
  CommonOpts rep_opts;
  int rep_table = 0, rep_figure = 0, rep_reps = 200;
  bool rep_full = false;
  std::string rep_config;
  rep_cmd->add_option("--table", rep_table, "Table number (1, 2 or 3)");
  rep_cmd->add_option("--figure", rep_figure, "Figure number (2, 3 or 4)");
  rep_cmd->add_option("--reps", rep_reps, "Replications per cell");
  rep_cmd->add_option("--alpha", rep_opts.alpha, "Significance level");
  rep_cmd->add_flag("--full-scale", rep_full, "Full-size cells (slow)");
  rep_cmd->add_option("--config", rep_config, "JSON experiment config");
  add_solver_flags(rep_cmd, rep_opts);

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "Real-data workflow: CV, fit, tests");
  CommonOpts an_opts;
  std::string an_data, an_exclude, an_linkage, an_pathway, an_mu_grid, an_tau_grid;
  bool an_no_cv = false;
  an_cmd->add_option("--data", an_data, "Counts CSV")->required();
  an_cmd->add_option("--exclude", an_exclude, "Comma-separated non-count columns");
  an_cmd->add_option("--linkage", an_linkage, "Linkage tests, e.g. '1->2;3->4'");
  an_cmd->add_option("--pathway", an_pathway, "Pathway test, e.g. 'Home->FTA->Win'");
  an_cmd->add_option("--mu-grid", an_mu_grid, "CV grid for mu");
  an_cmd->add_option("--tau-grid", an_tau_grid, "CV grid for tau");
  an_cmd->add_flag("--no-cv", an_no_cv, "Skip CV, use --mu/--tau directly");
  add_solver_flags(an_cmd, an_opts);

  try {
    app.parse(argc, argv);

    if (*sim) {
      ensure_out_dir(sim_opts.out);
      GraphFamily family{parse_family(sim_family), sim_p, 0.0, -0.5};
      CoefMatrix coef = gen_graph(family, sim_opts.seed);
      CountMatrix data = sample_dag(coef, sim_n, sim_opts.seed + 1);
      write_coef_json(coef, join_path(sim_opts.out, "graph.json"));
      write_edges_csv(coef.support(), coef, join_path(sim_opts.out, "edges.csv"));
      write_counts_csv(data, join_path(sim_opts.out, "data.csv"));
      std::cout << "wrote graph.json, edges.csv, data.csv to " << sim_opts.out << "\n";
      return 0;
    }
    if (*fit_cmd) {
      ensure_out_dir(fit_opts.out);
      CountMatrix counts = read_counts_csv(fit_data, parse_string_list(fit_exclude));
      DesignMatrix design(counts);
      FitResult result = fit_ha_linkage(design, EdgeSet{}, solver_config(fit_opts, counts.n()));
      write_json(fit_result_to_json(result), join_path(fit_opts.out, "fit.json"));
      write_edges_csv(result.edges, result.coef, join_path(fit_opts.out, "fit_edges.csv"));
      std::cout << "edges: " << result.edges.size() << ", log-likelihood " << result.log_lik
                << (result.converged ? "" : " (iteration cap reached)") << "\n";
      return 0;
    }
    if (*link_cmd) {
      ensure_out_dir(link_opts.out);
      CountMatrix counts = read_counts_csv(link_data, parse_string_list(link_exclude));
      DesignMatrix design(counts);
      TestConfig config{solver_config(link_opts, counts.n()), link_df_switch};
      TestResult result = test_linkage(design, parse_edge_list(link_f), config);
      write_json(test_result_to_json(result), join_path(link_opts.out, "test_linkage.json"));
      std::cout << "lr " << result.lr << ", statistic " << result.statistic << ", df "
                << result.df << ", null " << null_dist_name(result.null_dist) << ", p "
                << result.p_value << "\n";
      return 0;
    }
    if (*path_cmd) {
      ensure_out_dir(path_opts.out);
      CountMatrix counts = read_counts_csv(path_data, parse_string_list(path_exclude));
      DesignMatrix design(counts);
      TestConfig config{solver_config(path_opts, counts.n()), path_df_switch};
      PathwaySpec path(parse_path_nodes(path_nodes, &counts.names()));
      TestResult result = test_pathway(design, path, config);
      write_json(test_result_to_json(result), join_path(path_opts.out, "test_pathway.json"));
      std::cout << "lr " << result.lr << ", statistic " << result.statistic << ", df "
                << result.df << ", null " << null_dist_name(result.null_dist) << ", p "
                << result.p_value << "\n";
      return 0;
    }
    if (*cv_cmd) {
      ensure_out_dir(cv_opts.out);
      CountMatrix counts = read_counts_csv(cv_data, parse_string_list(cv_exclude));
      DesignMatrix design(counts);
      CvGrid grid;
      grid.mu_values = cv_mu_grid.empty() ? std::vector<double>{0.1, 0.5, 1, 5, 10}
                                          : parse_double_list(cv_mu_grid);
      grid.tau_values = cv_tau_grid.empty() ? std::vector<double>{0.005, 0.01, 0.05, 0.1}
                                            : parse_double_list(cv_tau_grid);
      grid.folds = cv_fold_count;
      grid.seed = cv_opts.seed;
      CvSelection sel = cv_select(design, grid, solver_config(cv_opts, counts.n()));
      Json j;
      j["mu"] = sel.mu;
      j["tau"] = sel.tau;
      write_json(j, join_path(cv_opts.out, "cv.json"));
      std::ofstream table(join_path(cv_opts.out, "cv_table.csv"));
      table << "mu,tau,fold,heldout_ll,total\n";
      for (const CvCell& cell : sel.table) {
        for (std::size_t l = 0; l < cell.fold_loglik.size(); ++l)
          table << format_double(cell.mu) << "," << format_double(cell.tau) << "," << l << ","
                << format_double(cell.fold_loglik[l]) << "," << format_double(cell.total) << "\n";
        if (!cell.valid)
          table << format_double(cell.mu) << "," << format_double(cell.tau) << ",invalid,,\n";
      }
      std::cout << "selected mu " << sel.mu << ", tau " << sel.tau << "\n";
      return 0;
    }
    if (*rep_cmd) {
      return run_reproduce(rep_opts, rep_table, rep_figure, rep_reps, rep_full, rep_config);
    }
    if (*an_cmd) {
      ensure_out_dir(an_opts.out);
      CountMatrix counts = read_counts_csv(an_data, parse_string_list(an_exclude));
      RealAnalysisRequest request;
      request.solver = solver_config(an_opts, counts.n());
      request.run_cv = !an_no_cv;
      request.grid.mu_values = an_mu_grid.empty()
                                   ? std::vector<double>{10, 20, 40, 80}
                                   : parse_double_list(an_mu_grid);
      request.grid.tau_values =
          an_tau_grid.empty() ? std::vector<double>{0.15, 0.3} : parse_double_list(an_tau_grid);
      request.grid.seed = an_opts.seed;
      if (!an_linkage.empty()) request.linkage_targets.push_back(parse_edge_list(an_linkage));
      if (!an_pathway.empty())
        request.pathway_targets.push_back(parse_path_nodes(an_pathway, &counts.names()));
      RealAnalysisResult result = analyze_real(counts, request);
      write_edges_csv(result.fit.edges, result.fit.coef,
                      join_path(an_opts.out, "network_edges.csv"));
      Json j;
      j["nodes"] = result.names;
      if (request.run_cv) {
        j["cv_mu"] = result.cv.mu;
        j["cv_tau"] = result.cv.tau;
      }
      j["fit"] = fit_result_to_json(result.fit);
      Json tests = Json::array();
      for (const TestResult& t : result.linkage_tests) tests.push_back(test_result_to_json(t));
      j["linkage_tests"] = std::move(tests);
      Json ptests = Json::array();
      for (const TestResult& t : result.pathway_tests) ptests.push_back(test_result_to_json(t));
      j["pathway_tests"] = std::move(ptests);
      write_json(j, join_path(an_opts.out, "analysis.json"));
      std::cout << "estimated network: " << result.fit.edges.size() << " edges\n";
      return 0;
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case Error::Kind::Usage:
      case Error::Kind::Parse:
      case Error::Kind::Domain:
      case Error::Kind::Dimension:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
