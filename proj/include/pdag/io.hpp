#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "pdag/inference.hpp"
#include "pdag/solver.hpp"
#include "pdag/types.hpp"

namespace pdag {

using Json = nlohmann::ordered_json;

/// CountMatrix CSV: header row of names, then integer counts, comma-separated.
CountMatrix read_counts_csv(const std::string& path, const std::vector<std::string>& exclude = {});
CountMatrix parse_counts_csv(const std::string& text, const std::vector<std::string>& exclude = {});
void write_counts_csv(const CountMatrix& counts, const std::string& path);

/// CoefMatrix JSON: {"p": int, "intercepts": [...], "weights": [[...]]},
/// weights row i, column j = effect of node i+1 on node j+1.
Json coef_to_json(const CoefMatrix& coef);
CoefMatrix coef_from_json(const Json& j);
void write_coef_json(const CoefMatrix& coef, const std::string& path);
CoefMatrix read_coef_json(const std::string& path);

/// Edge list CSV: from,to,weight (1-based indices).
void write_edges_csv(const EdgeSet& edges, const CoefMatrix& coef, const std::string& path);

Json fit_result_to_json(const FitResult& result);
Json test_result_to_json(const TestResult& result);

void write_json(const Json& j, const std::string& path);
Json read_json(const std::string& path);

std::string format_double(double v);

}  // namespace pdag
