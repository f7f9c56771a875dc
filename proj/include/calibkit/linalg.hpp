#pragma once

#include <vector>

#include <Eigen/Dense>

namespace calib::linalg {

// Thin QR with the sign convention diag(R) >= 0. Returns Q (rows x cols).
Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& a);

// Full n x n orthogonal completion: first p columns span the columns of
// `frame` (which must be orthonormal); the remaining ones come from the
// Householder Q and have a fixed sign: the entry of largest magnitude in
// each completing column is positive.
Eigen::MatrixXd orthogonal_completion(const Eigen::MatrixXd& frame);

// Numerical rank with singular values <= rel_cutoff * s_max discarded.
int rank(const Eigen::MatrixXd& a, double rel_cutoff);

// Orthonormal basis of the column space (left singular vectors above the
// cutoff).
Eigen::MatrixXd range_basis(const Eigen::MatrixXd& a, double rel_cutoff);

// Orthonormal basis of the null space (right singular vectors at or below
// the cutoff).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_cutoff);

// Spectral norm of P_A - P_B for two orthonormal bases of subspaces of the
// same ambient space; 1 if the dimensions differ (or one is empty and the
// other is not).
double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// exp of a skew-symmetric matrix.
Eigen::MatrixXd expm_skew(const Eigen::MatrixXd& theta);

}  // namespace calib::linalg
