#include "pdag/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace pdag {

EdgeSet::EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

void EdgeSet::insert(Edge e) {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) edges_.insert(it, e);
}

bool EdgeSet::contains(Edge e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

void EdgeSet::validate(int p) const {
  for (const Edge& e : edges_) {
    if (e.from < 1 || e.from > p || e.to < 1 || e.to > p)
      throw Error::domain("edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                          ") out of range 1.." + std::to_string(p));
    if (e.from == e.to)
      throw Error::domain("self loop (" + std::to_string(e.from) + "," + std::to_string(e.to) + ")");
  }
}

CountMatrix::CountMatrix(Matrix values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (static_cast<int>(names_.size()) != values_.cols())
    throw Error::dimension("CountMatrix: " + std::to_string(names_.size()) + " names for " +
                           std::to_string(values_.cols()) + " columns");
  std::set<std::string> distinct(names_.begin(), names_.end());
  if (distinct.size() != names_.size()) throw Error::domain("CountMatrix: duplicate column names");
  for (int h = 0; h < values_.rows(); ++h)
    for (int j = 0; j < values_.cols(); ++j) {
      double v = values_(h, j);
      if (!(v >= 0.0) || v != std::floor(v) || !std::isfinite(v))
        throw Error::domain("CountMatrix: entry (" + std::to_string(h + 1) + "," +
                            std::to_string(j + 1) + ") is not a nonnegative integer");
    }
}

DesignMatrix::DesignMatrix(const CountMatrix& counts) : p_(counts.p()) {
  x_.resize(counts.n(), p_ + 1);
  x_.col(0).setOnes();
  x_.rightCols(p_) = counts.values();
}

DesignMatrix::DesignMatrix(Matrix x, int p) : x_(std::move(x)), p_(p) {
  if (x_.cols() != p_ + 1) throw Error::dimension("DesignMatrix: expected p+1 columns");
  if ((x_.col(0).array() != 1.0).any()) throw Error::domain("DesignMatrix: column 0 must be all ones");
}

CoefMatrix::CoefMatrix(int p) : intercepts_(Vector::Zero(p)), weights_(Matrix::Zero(p, p)) {
  if (p < 1) throw Error::dimension("CoefMatrix: p must be >= 1");
}

CoefMatrix::CoefMatrix(Vector intercepts, Matrix weights)
    : intercepts_(std::move(intercepts)), weights_(std::move(weights)) {
  const int p = static_cast<int>(intercepts_.size());
  if (weights_.rows() != p || weights_.cols() != p)
    throw Error::dimension("CoefMatrix: weights must be p x p");
  for (int j = 0; j < p; ++j)
    if (weights_(j, j) != 0.0)
      throw Error::domain("CoefMatrix: nonzero diagonal at node " + std::to_string(j + 1));
}

void CoefMatrix::set_weight(int i, int j, double v) {
  if (i == j && v != 0.0) throw Error::domain("CoefMatrix: cannot set diagonal weight");
  weights_(i - 1, j - 1) = v;
}

EdgeSet CoefMatrix::support() const {
  EdgeSet out;
  const int p = this->p();
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= p; ++j)
      if (i != j && weight(i, j) != 0.0) out.insert({i, j});
  return out;
}

PathwaySpec::PathwaySpec(std::vector<int> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw Error::domain("PathwaySpec: needs at least two nodes");
  std::set<int> distinct(nodes_.begin(), nodes_.end());
  if (distinct.size() != nodes_.size()) throw Error::domain("PathwaySpec: nodes along the path must be distinct");
}

EdgeSet PathwaySpec::edges() const {
  EdgeSet out;
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k) out.insert({nodes_[k], nodes_[k + 1]});
  return out;
}

}  // namespace pdag
