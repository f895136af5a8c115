#pragma once

#include <complex>

#include <Eigen/Dense>

namespace edgelq {

// All numerics are double precision; complex values are pairs of doubles.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

}  // namespace edgelq
