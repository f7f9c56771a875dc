#include "calibkit/plane.hpp"

#include "calibkit/linalg.hpp"

namespace calib {

double orthonormality_defect(const Eigen::MatrixXd& frame) {
  const Eigen::MatrixXd g = frame.transpose() * frame - Eigen::MatrixXd::Identity(frame.cols(), frame.cols());
  return g.size() == 0 ? 0.0 : g.cwiseAbs().maxCoeff();
}

OrientedPlane::OrientedPlane(Eigen::MatrixXd frame, double tol) : frame_(std::move(frame)) {
  if (frame_.rows() > kMaxDim) throw DimensionError("ambient dimension exceeds 16");
  if (frame_.cols() > frame_.rows()) throw DimensionError("p exceeds n");
  if (orthonormality_defect(frame_) > tol) throw std::invalid_argument("frame columns are not orthonormal");
}

OrientedPlane OrientedPlane::orthonormalized(const Eigen::MatrixXd& columns) {
  return OrientedPlane(linalg::orthonormal_columns(columns));
}

OrientedPlane OrientedPlane::coordinate(int n, std::span<const int> idx) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= n) throw DimensionError("coordinate index out of range");
    f(idx[a], static_cast<Eigen::Index>(a)) = 1.0;
  }
  return OrientedPlane(std::move(f));
}

OrientedPlane OrientedPlane::coordinate(int n, std::initializer_list<int> idx) {
  std::vector<int> v(idx);
  return coordinate(n, std::span<const int>(v));
}

OrientedPlane OrientedPlane::reversed() const {
  Eigen::MatrixXd f = frame_;
  if (f.cols() > 0) f.col(0) *= -1.0;
  return OrientedPlane(std::move(f));
}

OrientedPlane OrientedPlane::transformed(const Eigen::MatrixXd& g) const {
  return OrientedPlane(g * frame_, 1e-8);
}

Eigen::MatrixXd OrientedPlane::normal_frame() const {
  return linalg::orthogonal_completion(frame_).rightCols(frame_.rows() - frame_.cols());
}

Eigen::MatrixXd OrientedPlane::adapted_frame() const { return linalg::orthogonal_completion(frame_); }

}  // namespace calib
