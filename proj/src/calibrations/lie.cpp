#include "calibkit/lie.hpp"

#include <cmath>
#include <stdexcept>

namespace calib {

namespace {

using cd = std::complex<double>;

// <X, Y> = -tr(XY), real for anti-Hermitian X, Y.
double su_inner(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) { return -(x * y).trace().real(); }

}  // namespace

Eigen::VectorXd LieAlgebraData::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < dim; ++j) {
      const double w = x(i) * y(j);
      if (w == 0.0) continue;
      for (int k = 0; k < dim; ++k) out(k) += w * c(i, j, k);
    }
  }
  return out;
}

Eigen::MatrixXd LieAlgebraData::ad(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd m(dim, dim);
  for (int j = 0; j < dim; ++j) m.col(j) = bracket(x, Eigen::VectorXd::Unit(dim, j));
  return m;
}

LieCheck check_lie_algebra(const LieAlgebraData& g) {
  LieCheck out;
  const int d = g.dim;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        out.antisymmetry = std::max(out.antisymmetry, std::abs(g.c(i, j, k) + g.c(j, i, k)));
        // <[x_i, x_j], x_k> + <x_j, [x_i, x_k]> = c^k_ij + c^j_ik
        out.invariance = std::max(out.invariance, std::abs(g.c(i, j, k) + g.c(i, k, j)));
      }
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          // [x_i,[x_j,x_k]] + [x_j,[x_k,x_i]] + [x_k,[x_i,x_j]], component l
          double s = 0.0;
          for (int m = 0; m < d; ++m) s += g.c(j, k, m) * g.c(i, m, l) + g.c(k, i, m) * g.c(j, m, l) + g.c(i, j, m) * g.c(k, m, l);
          out.jacobi = std::max(out.jacobi, std::abs(s));
        }
      }
    }
  }
  return out;
}

std::vector<Eigen::MatrixXcd> su_basis_matrices(int k) {
  if (k < 2 || k > 4) throw std::invalid_argument("su(k) supported for 2 <= k <= 4");
  const double r2 = 1.0 / std::sqrt(2.0);
  std::vector<Eigen::MatrixXcd> basis;
  for (int j = 0; j < k; ++j) {
    for (int l = j + 1; l < k; ++l) {
      Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(k, k);
      a(j, l) = r2;
      a(l, j) = -r2;
      basis.push_back(a);
      Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(k, k);
      s(j, l) = cd(0, r2);
      s(l, j) = cd(0, r2);
      basis.push_back(s);
    }
  }
  // Orthonormal traceless diagonals: H_r = (e_1 + .. + e_r - r e_{r+1}) / sqrt(r(r+1)).
  for (int r = 1; r < k; ++r) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(k, k);
    const double s = 1.0 / std::sqrt(static_cast<double>(r * (r + 1)));
    for (int i = 0; i < r; ++i) h(i, i) = cd(0, s);
    h(r, r) = cd(0, -r * s);
    basis.push_back(h);
  }
  return basis;
}

Eigen::VectorXd su_coordinates(const Eigen::MatrixXcd& m) {
  const int k = static_cast<int>(m.rows());
  const auto basis = su_basis_matrices(k);
  Eigen::VectorXd x(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) x(static_cast<Eigen::Index>(i)) = su_inner(m, basis[i]);
  return x;
}

LieAlgebraData su(int k) {
  const auto basis = su_basis_matrices(k);
  LieAlgebraData g;
  g.name = "su" + std::to_string(k);
  g.dim = static_cast<int>(basis.size());
  g.structure.assign(static_cast<std::size_t>(g.dim) * g.dim * g.dim, 0.0);
  for (int i = 0; i < g.dim; ++i) {
    for (int j = 0; j < g.dim; ++j) {
      const Eigen::MatrixXcd br = basis[i] * basis[j] - basis[j] * basis[i];
      for (int l = 0; l < g.dim; ++l) g.structure[(static_cast<std::size_t>(i) * g.dim + j) * g.dim + l] = su_inner(br, basis[l]);
    }
  }
  // Root su(2) in the (1,2) block; all roots of su(k) are Ad-conjugate.
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(k, k), s = a, h = a;
  a(0, 1) = 1.0;
  a(1, 0) = -1.0;
  s(0, 1) = cd(0, 1);
  s(1, 0) = cd(0, 1);
  h(0, 0) = cd(0, 1);
  h(1, 1) = cd(0, -1);
  g.highest_root_triple.resize(g.dim, 3);
  g.highest_root_triple.col(0) = su_coordinates(a);
  g.highest_root_triple.col(1) = su_coordinates(s);
  g.highest_root_triple.col(2) = su_coordinates(h);
  // The coroot-dual of e_1 - e_2 is diag(1, -1, 0..) of trace norm sqrt 2.
  g.highest_root_length = std::sqrt(2.0);
  return g;
}

LieAlgebraData lie_algebra_by_name(const std::string& name) {
  if (name == "su2") return su(2);
  if (name == "su3") return su(3);
  if (name == "su4") return su(4);
  throw std::invalid_argument("unknown Lie algebra '" + name + "' (expected su2, su3 or su4)");
}

Eigen::MatrixXd principal_su2_triple(int k) {
  // Spin j = (k-1)/2 irrep: J_z = diag(j, j-1, .., -j), J_+ raising.
  const double j = 0.5 * (k - 1);
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(k, k), jp = jz;
  for (int a = 0; a < k; ++a) jz(a, a) = j - a;
  for (int a = 1; a < k; ++a) {
    const double mval = j - a;  // |m> -> |m+1>
    jp(a - 1, a) = std::sqrt(j * (j + 1) - mval * (mval + 1));
  }
  const Eigen::MatrixXcd jx = 0.5 * (jp + jp.adjoint());
  const Eigen::MatrixXcd jy = cd(0, -0.5) * (jp - jp.adjoint());
  Eigen::MatrixXd out(k * k - 1, 3);
  out.col(0) = su_coordinates(cd(0, 1) * jx);
  out.col(1) = su_coordinates(cd(0, 1) * jy);
  out.col(2) = su_coordinates(cd(0, 1) * jz);
  return out;
}

}  // namespace calib
