#pragma once

#include "flownet/types.hpp"

namespace flownet {

// Wraps (I - R^T) for a substochastic routing matrix R with spectral radius
// below 1: solves, the explicit inverse, and the net-inflow transform
// a = (I - R^T)^{-1} lambda used throughout the certificates.
class LeontiefOperator {
 public:
  // Throws Error(Numeric) if the spectral radius estimate is not below
  // 1 - 1e-9, or if the computed inverse fails its residual check. Validate
  // the network first for a structured report; this is the last line of
  // defense.
  static LeontiefOperator build(const Mat& routing);

  int size() const { return static_cast<int>(routing_.rows()); }
  const Mat& routing() const { return routing_; }
  const Mat& inverse() const { return inverse_; }
  double spectral_radius() const { return rho_; }

  // Solves (I - R^T) y = v by LU, not via the explicit inverse.
  Vec solve(const Vec& v) const;

  // g = L^T w with L = (I - R^T)^{-1}; these are the weighted column sums
  // that turn a sup over transformed inflow into a sup over raw inflow.
  Vec weighted_column_sums(const Vec& w) const;

 private:
  LeontiefOperator() = default;
  Mat routing_;
  Mat inverse_;
  Eigen::PartialPivLU<Mat> lu_;
  double rho_ = 0.0;
};

// a = (I - R^T)^{-1} lambda. Throws Error(Domain) if lambda has a negative
// entry or the wrong dimension.
Vec net_inflow_transform(const LeontiefOperator& op, const Vec& lambda);

}  // namespace flownet
