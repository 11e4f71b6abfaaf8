#include "pdag/likelihood.hpp"

#include <cmath>

namespace pdag {

namespace {

void check_dims(const DesignMatrix& data, const CoefMatrix& coef) {
  if (data.p() != coef.p())
    throw Error::dimension("likelihood: design p=" + std::to_string(data.p()) +
                           " vs coef p=" + std::to_string(coef.p()));
}

// Column j of coef as a (p+1)-vector aligned with design columns.
Vector column_coef(const CoefMatrix& coef, int j) {
  const int p = coef.p();
  Vector b(p + 1);
  b[0] = coef.intercepts()[j - 1];
  b.tail(p) = coef.weights().col(j - 1);
  return b;
}

}  // namespace

double node_log_likelihood(const DesignMatrix& data, const CoefMatrix& coef, int j) {
  check_dims(data, coef);
  const Matrix& x = data.x();
  Vector b = column_coef(coef, j);
  Vector eta = x * b;
  double ll = 0.0;
  for (int h = 0; h < data.n(); ++h) {
    if (eta[h] > kExpArgLimit)
      throw Error::overflow("log_likelihood: exp overflow at observation " + std::to_string(h + 1) +
                            ", node " + std::to_string(j));
    double count = x(h, j);
    ll += -std::exp(eta[h]) + count * eta[h] - std::lgamma(count + 1.0);
  }
  return ll;
}

double log_likelihood(const DesignMatrix& data, const CoefMatrix& coef) {
  double total = 0.0;
  for (int j = 1; j <= data.p(); ++j) total += node_log_likelihood(data, coef, j);
  return total;
}

double neg_likelihood_objective(const DesignMatrix& data, const CoefMatrix& coef) {
  check_dims(data, coef);
  const Matrix& x = data.x();
  double r = 0.0;
  for (int j = 1; j <= data.p(); ++j) {
    Vector eta = x * column_coef(coef, j);
    for (int h = 0; h < data.n(); ++h) {
      if (eta[h] > kExpArgLimit)
        throw Error::overflow("objective: exp overflow at observation " + std::to_string(h + 1) +
                              ", node " + std::to_string(j));
      r += std::exp(eta[h]) - x(h, j) * eta[h];
    }
  }
  return r;
}

Vector score(const DesignMatrix& data, const CoefMatrix& coef, int j) {
  check_dims(data, coef);
  const Matrix& x = data.x();
  Vector eta = x * column_coef(coef, j);
  Vector resid(data.n());
  for (int h = 0; h < data.n(); ++h) {
    if (eta[h] > kExpArgLimit)
      throw Error::overflow("score: exp overflow at observation " + std::to_string(h + 1) +
                            ", node " + std::to_string(j));
    resid[h] = x(h, j) - std::exp(eta[h]);
  }
  return x.transpose() * resid;
}

Matrix hessian(const DesignMatrix& data, const CoefMatrix& coef, int j) {
  check_dims(data, coef);
  const Matrix& x = data.x();
  Vector eta = x * column_coef(coef, j);
  Vector w(data.n());
  for (int h = 0; h < data.n(); ++h) {
    if (eta[h] > kExpArgLimit)
      throw Error::overflow("hessian: exp overflow at observation " + std::to_string(h + 1) +
                            ", node " + std::to_string(j));
    w[h] = std::exp(eta[h]);
  }
  return x.transpose() * w.asDiagonal() * x;
}

double hellinger_sq(const DesignMatrix& data, const CoefMatrix& a, const CoefMatrix& b) {
  check_dims(data, a);
  check_dims(data, b);
  const Matrix& x = data.x();
  const int p = data.p();
  Matrix eta_a(data.n(), p), eta_b(data.n(), p);
  for (int j = 1; j <= p; ++j) {
    eta_a.col(j - 1) = x * column_coef(a, j);
    eta_b.col(j - 1) = x * column_coef(b, j);
  }
  double acc = 0.0;
  for (int h = 0; h < data.n(); ++h) {
    double log_prod = 0.0;
    for (int j = 0; j < p; ++j) {
      double ha = 0.5 * eta_a(h, j), hb = 0.5 * eta_b(h, j);
      if (ha > kExpArgLimit || hb > kExpArgLimit)
        throw Error::overflow("hellinger_sq: exp overflow at observation " + std::to_string(h + 1));
      double diff = std::exp(ha) - std::exp(hb);
      log_prod += -0.5 * diff * diff;
    }
    acc += 1.0 - std::exp(log_prod);
  }
  return acc / data.n();
}

}  // namespace pdag
