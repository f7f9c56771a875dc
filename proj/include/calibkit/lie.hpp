#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace calib {

// Real Lie algebra with structure constants w.r.t. a basis that is
// orthonormal for an ad-invariant inner product:
//   [x_i, x_j] = sum_k c^k_{ij} x_k.
struct LieAlgebraData {
  std::string name;
  int dim = 0;
  std::vector<double> structure;  // c^k_{ij} at (i * dim + j) * dim + k
  // Coordinates of a basis of a highest-root su(2) (3 columns), when known.
  Eigen::MatrixXd highest_root_triple;
  // Length of a highest root for the chosen inner product, when known.
  double highest_root_length = 0.0;

  double c(int i, int j, int k) const { return structure[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }
  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  // ad(x) as a dim x dim matrix.
  Eigen::MatrixXd ad(const Eigen::VectorXd& x) const;
};

struct LieCheck {
  double antisymmetry = 0.0;  // max |c^k_ij + c^k_ji|
  double jacobi = 0.0;        // max Jacobi defect over basis triples
  double invariance = 0.0;    // max |<[x_i,x_j],x_k> + <x_j,[x_i,x_k]>|
};

LieCheck check_lie_algebra(const LieAlgebraData& g);

// su(k), 2 <= k <= 4, with <X, Y> = -tr(XY) and the orthonormal basis
//   (E_jl - E_lj)/sqrt2, i(E_jl + E_lj)/sqrt2 for j < l, then i*H_r
// with H_r an orthonormal basis of real traceless diagonals.
LieAlgebraData su(int k);
LieAlgebraData lie_algebra_by_name(const std::string& name);  // "su2", "su3", "su4"

// Basis matrices of su(k) in the order used by su(k).
std::vector<Eigen::MatrixXcd> su_basis_matrices(int k);
// Coordinates of an anti-Hermitian traceless matrix in that basis.
Eigen::VectorXd su_coordinates(const Eigen::MatrixXcd& m);

// Coordinates (3 columns) of the principal su(2): image of the irreducible
// k-dimensional representation.
Eigen::MatrixXd principal_su2_triple(int k);

}  // namespace calib
