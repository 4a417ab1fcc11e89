#pragma once

#include <Eigen/Dense>

namespace cfw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace cfw
