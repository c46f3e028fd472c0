#pragma once

#include <Eigen/Dense>

namespace flownet {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

}  // namespace flownet
