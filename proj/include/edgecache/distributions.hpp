#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "edgecache/error.hpp"

namespace edgecache {

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Zipf popularity over ranks 1..n: p(f) = f^-delta / sum_j j^-delta.
template <class Scalar = double>
Vector<Scalar> zipf_pmf(Eigen::Index n, Scalar delta) {
  require(n >= 1, ErrorCode::EmptyLibrary, "zipf_pmf needs n >= 1");
  require(delta >= Scalar(0), ErrorCode::BadInput, "zipf skewness must be >= 0");
  Vector<Scalar> weights(n);
  for (Eigen::Index f = 0; f < n; ++f) {
    weights[f] = std::pow(static_cast<Scalar>(f + 1), -delta);
  }
  return weights / weights.sum();
}

/// Rank-ordered Zipf model for the stationary part of the library.
struct ZipfModel {
  Eigen::Index n = 0;
  double delta = 0.0;
  Eigen::VectorXd pmf;

  static ZipfModel make(Eigen::Index n, double delta) { return {n, delta, zipf_pmf(n, delta)}; }
};

/// Pareto law for the total request volume of a dynamic item.
/// Density beta * n_min^beta * v^-(beta+1) on v >= n_min.
class ParetoVolume {
 public:
  ParetoVolume(double beta, double n_min) : beta_(beta), n_min_(n_min) {
    require(beta > 1.0, ErrorCode::BadInput, "pareto shape must exceed 1");
    require(n_min > 0.0, ErrorCode::BadInput, "pareto scale must be positive");
  }

  double beta() const { return beta_; }
  double n_min() const { return n_min_; }
  double mean() const { return beta_ * n_min_ / (beta_ - 1.0); }
  double cdf(double v) const { return v < n_min_ ? 0.0 : 1.0 - std::pow(n_min_ / v, beta_); }

 private:
  double beta_;
  double n_min_;
};

/// Inverse-CDF draw: n_min * (1 - u)^(-1/beta).
inline double sample_pareto_volume(const ParetoVolume& model, double u) {
  require(u >= 0.0 && u < 1.0, ErrorCode::BadUniform, "uniform draw must lie in [0,1)");
  return model.n_min() * std::pow(1.0 - u, -1.0 / model.beta());
}

}  // namespace edgecache
