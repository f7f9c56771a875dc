#pragma once

#include <Eigen/Dense>

#include "calibkit/exterior.hpp"

namespace calib {

// Oriented p-plane xi = e_1 ^ ... ^ e_p, stored as an n x p frame with
// orthonormal columns. Column order is the orientation.
class OrientedPlane {
 public:
  OrientedPlane() = default;
  // Throws unless frame^T frame = Id to `tol`.
  explicit OrientedPlane(Eigen::MatrixXd frame, double tol = 1e-10);

  // Orthonormalizes the columns (QR, diag(R) >= 0). Orientation of the
  // original column order is kept.
  static OrientedPlane orthonormalized(const Eigen::MatrixXd& columns);
  // span+(e_{i_1}, ..., e_{i_p}), 0-based.
  static OrientedPlane coordinate(int n, std::initializer_list<int> idx);
  static OrientedPlane coordinate(int n, std::span<const int> idx);

  int dim() const { return static_cast<int>(frame_.rows()); }
  int p() const { return static_cast<int>(frame_.cols()); }
  const Eigen::MatrixXd& frame() const { return frame_; }
  Eigen::VectorXd column(int a) const { return frame_.col(a); }

  // -xi: first column negated.
  OrientedPlane reversed() const;
  // g . xi for an orthogonal g.
  OrientedPlane transformed(const Eigen::MatrixXd& g) const;

  // Orthonormal basis of [xi]^perp, n x (n-p). Deterministic: Householder
  // QR of the frame; the last n-p columns of Q.
  Eigen::MatrixXd normal_frame() const;
  // [frame | normal_frame], an orthonormal basis adapted to xi.
  Eigen::MatrixXd adapted_frame() const;

 private:
  Eigen::MatrixXd frame_;
};

double orthonormality_defect(const Eigen::MatrixXd& frame);

}  // namespace calib
