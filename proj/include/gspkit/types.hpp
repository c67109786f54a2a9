#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace gspkit {

using Index = Eigen::Index;
using Scalar = double;
using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// N x M collection of graph signals, one signal per column.
using SignalMatrix = Eigen::MatrixXd;

}  // namespace gspkit
