#pragma once

#include <Eigen/Dense>

namespace rqm {

using vector_t = Eigen::VectorXd;
// Row-major so that one sample is one contiguous row.
using matrix_t = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace rqm
