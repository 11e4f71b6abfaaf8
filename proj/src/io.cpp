#include "pdag/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pdag {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim whitespace and a possible trailing CR
    auto first = field.find_first_not_of(" \t\r");
    auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CountMatrix parse_counts_csv(const std::string& text, const std::vector<std::string>& exclude) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw Error::parse("counts CSV: empty input");
  std::vector<std::string> header = split_csv_line(line);
  if (header.empty()) throw Error::parse("counts CSV: empty header");
  {
    std::vector<std::string> sorted = header;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error::parse("counts CSV: duplicate header names");
  }

  std::vector<bool> keep(header.size(), true);
  for (const std::string& name : exclude) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw Error::usage("counts CSV: excluded column '" + name + "' not in header");
    keep[it - header.begin()] = false;
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (keep[c]) names.push_back(header[c]);

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw Error::parse("counts CSV: row " + std::to_string(lineno) + " has " +
                         std::to_string(fields.size()) + " fields, expected " +
                         std::to_string(header.size()));
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (!keep[c]) continue;
      char* end = nullptr;
      double v = std::strtod(fields[c].c_str(), &end);
      if (end == fields[c].c_str() || *end != '\0' || !std::isfinite(v) || v < 0.0 ||
          v != std::floor(v))
        throw Error::parse("counts CSV: row " + std::to_string(lineno) + ", column '" + header[c] +
                           "' is not a nonnegative integer (declare non-count columns excluded)");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error::parse("counts CSV: no data rows");
  Matrix values(rows.size(), names.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < names.size(); ++c) values(r, c) = rows[r][c];
  return CountMatrix(std::move(values), std::move(names));
}

CountMatrix read_counts_csv(const std::string& path, const std::vector<std::string>& exclude) {
  std::ifstream in(path);
  if (!in) throw Error::parse("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_counts_csv(buf.str(), exclude);
}

void write_counts_csv(const CountMatrix& counts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error::parse("cannot write " + path);
  for (int j = 0; j < counts.p(); ++j) out << (j ? "," : "") << counts.names()[j];
  out << "\n";
  for (int h = 0; h < counts.n(); ++h) {
    for (int j = 0; j < counts.p(); ++j)
      out << (j ? "," : "") << static_cast<long long>(counts.values()(h, j));
    out << "\n";
  }
}

Json coef_to_json(const CoefMatrix& coef) {
  Json j;
  j["p"] = coef.p();
  j["intercepts"] = std::vector<double>(coef.intercepts().data(),
                                        coef.intercepts().data() + coef.p());
  Json weights = Json::array();
  for (int i = 0; i < coef.p(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < coef.p(); ++k) row.push_back(coef.weights()(i, k));
    weights.push_back(std::move(row));
  }
  j["weights"] = std::move(weights);
  return j;
}

CoefMatrix coef_from_json(const Json& j) {
  int p = j.at("p").get<int>();
  auto intercepts = j.at("intercepts").get<std::vector<double>>();
  if (static_cast<int>(intercepts.size()) != p)
    throw Error::parse("coef JSON: intercepts length != p");
  Vector b0(p);
  for (int i = 0; i < p; ++i) b0[i] = intercepts[i];
  const Json& w = j.at("weights");
  if (static_cast<int>(w.size()) != p) throw Error::parse("coef JSON: weights must be p rows");
  Matrix weights(p, p);
  for (int i = 0; i < p; ++i) {
    if (static_cast<int>(w[i].size()) != p) throw Error::parse("coef JSON: weights row length != p");
    for (int k = 0; k < p; ++k) weights(i, k) = w[i][k].get<double>();
  }
  return CoefMatrix(std::move(b0), std::move(weights));
}

void write_coef_json(const CoefMatrix& coef, const std::string& path) {
  write_json(coef_to_json(coef), path);
}

CoefMatrix read_coef_json(const std::string& path) { return coef_from_json(read_json(path)); }

void write_edges_csv(const EdgeSet& edges, const CoefMatrix& coef, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error::parse("cannot write " + path);
  out << "from,to,weight\n";
  for (const Edge& e : edges)
    out << e.from << "," << e.to << "," << format_double(coef.weight(e.from, e.to)) << "\n";
}

Json fit_result_to_json(const FitResult& result) {
  Json j;
  j["coef"] = coef_to_json(result.coef);
  Json edges = Json::array();
  for (const Edge& e : result.edges) edges.push_back({e.from, e.to});
  j["edges"] = std::move(edges);
  j["objective_trace"] = result.objective_trace;
  j["converged"] = result.converged;
  j["dc_iterations"] = result.dc_iterations;
  j["admm_iterations"] = result.admm_iterations;
  j["primal_residual"] = result.primal_residual;
  j["dual_residual"] = result.dual_residual;
  j["log_lik"] = result.log_lik;
  return j;
}

Json test_result_to_json(const TestResult& result) {
  Json j;
  j["lr"] = result.lr;
  j["df"] = result.df;
  j["statistic"] = result.statistic;
  j["null"] = null_dist_name(result.null_dist);
  j["p_value"] = result.p_value;
  j["h0_fit_count"] = result.h0_fit_count;
  auto summarize = [](const FitResult& fr) {
    Json s;
    s["log_lik"] = fr.log_lik;
    s["edge_count"] = fr.edges.size();
    s["converged"] = fr.converged;
    s["dc_iterations"] = fr.dc_iterations;
    Json edges = Json::array();
    for (const Edge& e : fr.edges) edges.push_back({e.from, e.to});
    s["edges"] = std::move(edges);
    return s;
  };
  j["h0_fit"] = summarize(result.h0_fit);
  j["ha_fit"] = summarize(result.ha_fit);
  return j;
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error::parse("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::parse("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

}  // namespace pdag
