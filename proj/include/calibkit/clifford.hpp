#pragma once

#include <array>

#include <Eigen/Dense>

#include "calibkit/exterior.hpp"

namespace calib {

// Real Cl(8) acting on pinors P = R^16 = S+ (+) S-. Generators are 4-fold
// Kronecker products of the 2x2 matrices {I, X, Z, E} with E = [[0,1],[-1,0]],
// all symmetric, so eps (the Euclidean inner product) makes them
// self-adjoint. The volume element gamma_1...gamma_8 is diag(I_8, -I_8);
// S+ is its +1 eigenspace.
struct CliffordModel {
  static constexpr int kDim = 8;
  static constexpr int kPinorDim = 16;
  using Mat16 = Eigen::Matrix<double, 16, 16>;

  std::array<Mat16, 8> gamma;
  Mat16 volume;
  Eigen::Matrix<double, 16, 8> s_plus;   // orthonormal basis of S+
  Eigen::Matrix<double, 16, 8> s_minus;  // orthonormal basis of S-

  // gamma_{i_1} ... gamma_{i_k} for the increasing indices of `m`.
  Mat16 product(Mask m) const;
  // Degree-k part of 16 (x o y) under Lambda V* = Cl(V) = End(P), where
  // (x o y)(z) = eps(y, z) x. The e^I coefficient is eps(x, gamma_I y).
  AltForm component(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int k) const;
};

CliffordModel build_clifford();

struct CliffordCheck {
  double anticommutator = 0.0;  // max |g_i g_j + g_j g_i - 2 delta_ij|
  double symmetry = 0.0;        // max |g_i - g_i^T|
  double volume_square = 0.0;   // max |vol^2 - I|
  int s_plus_dim = 0;
};

CliffordCheck check_clifford(const CliffordModel& cl);

}  // namespace calib
