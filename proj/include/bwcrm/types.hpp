#pragma once

#include <Eigen/Core>

namespace bwcrm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace bwcrm
