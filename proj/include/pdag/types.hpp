#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdag {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Structured error with an optional (row, col) / node context.
class Error : public std::runtime_error {
 public:
  enum class Kind {
    Dimension,
    Overflow,
    Cycle,
    Domain,
    Convergence,
    Parse,
    Usage,
  };

  Error(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  Kind kind() const { return kind_; }

  static Error dimension(const std::string& msg) { return {Kind::Dimension, msg}; }
  static Error overflow(const std::string& msg) { return {Kind::Overflow, msg}; }
  static Error cycle(const std::string& msg) { return {Kind::Cycle, msg}; }
  static Error domain(const std::string& msg) { return {Kind::Domain, msg}; }
  static Error convergence(const std::string& msg) { return {Kind::Convergence, msg}; }
  static Error parse(const std::string& msg) { return {Kind::Parse, msg}; }
  static Error usage(const std::string& msg) { return {Kind::Usage, msg}; }

 private:
  Kind kind_;
};

/// Directed edge between 1-based node indices, tail -> head.
struct Edge {
  int from = 0;
  int to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Ordered, duplicate-free set of directed edges over nodes 1..p.
class EdgeSet {
 public:
  EdgeSet() = default;
  explicit EdgeSet(std::vector<Edge> edges);

  void insert(Edge e);
  bool contains(Edge e) const;
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  const std::vector<Edge>& edges() const { return edges_; }
  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  void validate(int p) const;  // indices in 1..p, no self loops

  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

 private:
  std::vector<Edge> edges_;  // kept sorted
};

/// n x p nonnegative integer observations with column names.
class CountMatrix {
 public:
  CountMatrix(Matrix values, std::vector<std::string> names);

  int n() const { return static_cast<int>(values_.rows()); }
  int p() const { return static_cast<int>(values_.cols()); }
  const Matrix& values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  Matrix values_;
  std::vector<std::string> names_;
};

/// n x (p+1) design matrix; column 0 is the constant 1.
class DesignMatrix {
 public:
  explicit DesignMatrix(const CountMatrix& counts);
  DesignMatrix(Matrix x, int p);  // pre-built, column 0 must be ones

  int n() const { return static_cast<int>(x_.rows()); }
  int p() const { return p_; }
  const Matrix& x() const { return x_; }

 private:
  Matrix x_;
  int p_ = 0;
};

/// Intercepts plus p x p adjacency weights; weights(i, j) is the effect of
/// node i+1 on node j+1 (log-mean units). Diagonal is identically zero.
class CoefMatrix {
 public:
  explicit CoefMatrix(int p);
  CoefMatrix(Vector intercepts, Matrix weights);

  int p() const { return static_cast<int>(intercepts_.size()); }
  const Vector& intercepts() const { return intercepts_; }
  const Matrix& weights() const { return weights_; }

  double intercept(int j) const { return intercepts_[j - 1]; }          // 1-based
  double weight(int i, int j) const { return weights_(i - 1, j - 1); }  // 1-based

  void set_intercept(int j, double v) { intercepts_[j - 1] = v; }
  void set_weight(int i, int j, double v);

  /// {(i, j) : weights(i, j) != 0}
  EdgeSet support() const;

  friend bool operator==(const CoefMatrix&, const CoefMatrix&) = default;

 private:
  Vector intercepts_;
  Matrix weights_;
};

/// Node list i1, ..., i_{|F|+1}; consecutive pairs form the pathway edges.
class PathwaySpec {
 public:
  explicit PathwaySpec(std::vector<int> nodes);

  const std::vector<int>& nodes() const { return nodes_; }
  std::size_t length() const { return nodes_.size() - 1; }
  EdgeSet edges() const;

 private:
  std::vector<int> nodes_;
};

}  // namespace pdag
