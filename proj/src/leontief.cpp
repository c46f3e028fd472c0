#include "flownet/leontief.hpp"

#include <cmath>
#include <sstream>

#include "flownet/error.hpp"
#include "flownet/graph.hpp"

namespace flownet {

LeontiefOperator LeontiefOperator::build(const Mat& routing) {
  if (routing.rows() != routing.cols())
    throw Error(ErrorKind::Structural, "routing matrix must be square");
  const int m = static_cast<int>(routing.rows());

  // The estimate is advisory when the iteration cannot settle (defective or
  // nilpotent matrices have no dominant-ratio limit); the residual check
  // below is the definitive singularity guard.
  SpectralEstimate rho = flownet::spectral_radius(routing);
  if (rho.value > 1.0 - 1e-9) {
    std::ostringstream msg;
    msg << "spectral radius estimate " << rho.value << " is not below 1; (I - R^T) is "
        << "singular or too close to it";
    throw Error(ErrorKind::Numeric, msg.str());
  }

  LeontiefOperator op;
  op.routing_ = routing;
  op.rho_ = rho.value;
  Mat system = Mat::Identity(m, m) - routing.transpose();
  op.lu_ = Eigen::PartialPivLU<Mat>(system);
  op.inverse_ = op.lu_.solve(Mat::Identity(m, m));
  double residual = (system * op.inverse_ - Mat::Identity(m, m)).cwiseAbs().maxCoeff();
  if (!std::isfinite(residual) || residual > 1e-6) {
    std::ostringstream msg;
    msg << "(I - R^T) is numerically singular (inverse residual " << residual
        << ", spectral radius estimate " << rho.value << ")";
    throw Error(ErrorKind::Numeric, msg.str());
  }
  return op;
}

Vec LeontiefOperator::solve(const Vec& v) const {
  if (v.size() != size())
    throw Error(ErrorKind::Structural, "vector length does not match the link count");
  return lu_.solve(v);
}

Vec LeontiefOperator::weighted_column_sums(const Vec& w) const {
  if (w.size() != size())
    throw Error(ErrorKind::Structural, "weight length does not match the link count");
  return inverse_.transpose() * w;
}

Vec net_inflow_transform(const LeontiefOperator& op, const Vec& lambda) {
  if (lambda.size() != op.size())
    throw Error(ErrorKind::Domain, "inflow vector length does not match the link count");
  for (int i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] >= 0.0)) {
      std::ostringstream msg;
      msg << "inflow must be nonnegative; entry " << i << " is " << lambda[i];
      throw Error(ErrorKind::Domain, msg.str());
    }
  }
  return op.solve(lambda);
}

}  // namespace flownet
