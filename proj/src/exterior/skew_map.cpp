#include "calibkit/exterior.hpp"

#include <cmath>

namespace calib {

SkewMap::SkewMap(int n) : n_(n), upper_(Eigen::VectorXd::Zero(n * (n - 1) / 2)) {
  if (n < 0 || n > kMaxDim) throw DimensionError("ambient dimension must lie in [0, 16]");
}

std::size_t SkewMap::slot(int i, int j) const {
  // Row-major strict upper triangle, i < j.
  return static_cast<std::size_t>(i * n_ - i * (i + 1) / 2 + (j - i - 1));
}

SkewMap SkewMap::generator(int n, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n) throw DimensionError("bad generator indices");
  SkewMap t(n);
  if (i < j) {
    t.upper_(static_cast<Eigen::Index>(t.slot(i, j))) = 1.0;
  } else {
    t.upper_(static_cast<Eigen::Index>(t.slot(j, i))) = -1.0;
  }
  return t;
}

SkewMap SkewMap::from_matrix(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw DimensionError("skew map must be square");
  const int n = static_cast<int>(m.rows());
  if ((m + m.transpose()).cwiseAbs().maxCoeff() > tol * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("matrix is not skew-symmetric");
  }
  SkewMap t(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) t.upper_(static_cast<Eigen::Index>(t.slot(i, j))) = 0.5 * (m(i, j) - m(j, i));
  }
  return t;
}

SkewMap SkewMap::from_coords(int n, const Eigen::VectorXd& coords) {
  SkewMap t(n);
  if (coords.size() != t.upper_.size()) throw DimensionError("coordinate vector has wrong length");
  t.upper_ = coords;
  return t;
}

double SkewMap::operator()(int i, int j) const {
  if (i == j) return 0.0;
  return i < j ? upper_(static_cast<Eigen::Index>(slot(i, j))) : -upper_(static_cast<Eigen::Index>(slot(j, i)));
}

Eigen::MatrixXd SkewMap::matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const double v = upper_(static_cast<Eigen::Index>(slot(i, j)));
      m(i, j) = v;
      m(j, i) = -v;
    }
  }
  return m;
}

SkewMap operator+(const SkewMap& a, const SkewMap& b) {
  if (a.n_ != b.n_) throw DimensionError("skew map dimensions differ");
  SkewMap t(a.n_);
  t.upper_ = a.upper_ + b.upper_;
  return t;
}

SkewMap operator*(double s, const SkewMap& a) {
  SkewMap t(a.n_);
  t.upper_ = s * a.upper_;
  return t;
}

}  // namespace calib
