#pragma once

#include <Eigen/Dense>

namespace rpmt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace rpmt
