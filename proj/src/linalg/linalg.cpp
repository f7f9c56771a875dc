#include "calibkit/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace calib::linalg {

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::MatrixXd orthogonal_completion(const Eigen::MatrixXd& frame) {
  const Eigen::Index n = frame.rows(), p = frame.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  q.leftCols(p) = frame;
  for (Eigen::Index j = p; j < n; ++j) {
    Eigen::Index k;
    q.col(j).cwiseAbs().maxCoeff(&k);
    if (q(k, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

namespace {

Eigen::BDCSVD<Eigen::MatrixXd> svd_of(const Eigen::MatrixXd& a, unsigned opts) { return Eigen::BDCSVD<Eigen::MatrixXd>(a, opts); }

int count_above(const Eigen::VectorXd& s, double rel_cutoff) {
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rel_cutoff * s(0)) ++r;
  }
  return r;
}

}  // namespace

int rank(const Eigen::MatrixXd& a, double rel_cutoff) {
  if (a.size() == 0) return 0;
  return count_above(svd_of(a, 0).singularValues(), rel_cutoff);
}

Eigen::MatrixXd range_basis(const Eigen::MatrixXd& a, double rel_cutoff) {
  if (a.size() == 0) return Eigen::MatrixXd(a.rows(), 0);
  auto svd = svd_of(a, Eigen::ComputeThinU);
  const int r = count_above(svd.singularValues(), rel_cutoff);
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_cutoff) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  auto svd = svd_of(a, Eigen::ComputeFullV);
  const int r = count_above(svd.singularValues(), rel_cutoff);
  return svd.matrixV().rightCols(cols - r);
}

double subspace_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("subspaces live in different ambient spaces");
  if (a.cols() != b.cols()) return 1.0;
  if (a.cols() == 0) return 0.0;
  const Eigen::MatrixXd d = a * a.transpose() - b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd expm_skew(const Eigen::MatrixXd& theta) {
  const double nrm = theta.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (nrm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
  const Eigen::MatrixXd a = theta / std::ldexp(1.0, squarings);
  const Eigen::Index n = theta.rows();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 18; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

}  // namespace calib::linalg
