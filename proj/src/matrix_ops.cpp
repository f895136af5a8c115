#include "edgelq/matrix_ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace edgelq {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat expm(const Mat& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("expm: matrix must be square");
  }
  const Eigen::Index n = a.rows();
  const Mat id = Mat::Identity(n, n);

  // Scale until the 1-norm is at most 0.5.
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (norm1 * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Mat s = a * scale;

  // Diagonal Pade(6,6): p(s) / p(-s) with p(x) = sum c_k x^k.
  static const double c[7] = {1.0,        1.0 / 2.0,   5.0 / 44.0, 1.0 / 66.0,
                              1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};
  const Mat s2 = s * s;
  Mat even = c[0] * id + c[2] * s2;  // even powers
  Mat odd = c[1] * id + c[3] * s2;   // odd powers / s
  const Mat s4 = s2 * s2;
  even += c[4] * s4;
  odd += c[5] * s4;
  const Mat s6 = s4 * s2;
  even += c[6] * s6;
  const Mat odd_full = s * odd;
  const Mat num = even + odd_full;
  const Mat den = even - odd_full;

  Mat result = den.partialPivLu().solve(num);
  for (int k = 0; k < squarings; ++k) {
    result = result * result;
  }
  return result;
}

namespace {

int nullspace_from_singular_values(const Vec& sigma, Eigen::Index rows,
                                   Eigen::Index cols, double rel_tol,
                                   double* gap_out) {
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  if (smax == 0.0) {
    if (gap_out != nullptr) *gap_out = std::numeric_limits<double>::infinity();
    return static_cast<int>(std::min(rows, cols));
  }
  const double cut = rel_tol * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++rank;
  }
  if (gap_out != nullptr) {
    if (rank == 0 || rank == sigma.size()) {
      *gap_out = std::numeric_limits<double>::infinity();
    } else {
      *gap_out = sigma(rank - 1) / sigma(rank);
    }
  }
  return static_cast<int>(std::min(rows, cols)) - rank;
}

}  // namespace

int nullspace_dimension(const Mat& a, double rel_tol, double* gap_out) {
  Eigen::JacobiSVD<Mat> svd(a);
  return nullspace_from_singular_values(svd.singularValues(), a.rows(),
                                        a.cols(), rel_tol, gap_out);
}

int nullspace_dimension(const CMat& a, double rel_tol, double* gap_out) {
  Eigen::JacobiSVD<CMat> svd(a);
  return nullspace_from_singular_values(svd.singularValues(), a.rows(),
                                        a.cols(), rel_tol, gap_out);
}

}  // namespace edgelq
