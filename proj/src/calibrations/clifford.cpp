#include "calibkit/clifford.hpp"

#include <string_view>

namespace calib {

namespace {

using Mat2 = Eigen::Matrix2d;
using Mat16 = CliffordModel::Mat16;

Mat2 factor(char c) {
  Mat2 m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case 'E': m << 0, 1, -1, 0; break;
    default: m.setIdentity(); break;
  }
  return m;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

Mat16 tensor(std::string_view word) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(1, 1);
  for (char c : word) m = kron(m, factor(c));
  return m;
}

// Eight pairwise anticommuting symmetric involutions. Each has X or E in
// the first slot, so it anticommutes with Z(x)I(x)I(x)I, which is their
// product.
constexpr std::string_view kGenerators[8] = {"XIII", "EIIE", "EIEX", "EXEZ", "EZEZ", "EEIZ", "EEXX", "EEZX"};

}  // namespace

Mat16 CliffordModel::product(Mask m) const {
  Mat16 out = Mat16::Identity();
  for (Mask mm = m; mm; mm &= mm - 1) out = out * gamma[__builtin_ctz(mm)];
  return out;
}

AltForm CliffordModel::component(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int k) const {
  if (x.size() != kPinorDim || y.size() != kPinorDim) throw DimensionError("pinors live in R^16");
  CoeffMap coeffs;
  for (Mask m : lex_masks(kDim, k)) {
    const double c = x.dot(product(m) * y);
    if (c != 0.0) coeffs.emplace(m, c);
  }
  return AltForm(kDim, k, std::move(coeffs));
}

CliffordModel build_clifford() {
  CliffordModel cl;
  for (int i = 0; i < 8; ++i) cl.gamma[i] = tensor(kGenerators[i]);
  cl.volume = cl.product(0xFF);
  cl.s_plus.setZero();
  cl.s_minus.setZero();
  int np = 0, nm = 0;
  for (int i = 0; i < 16; ++i) {
    // volume is diagonal with entries +-1
    if (cl.volume(i, i) > 0) cl.s_plus(i, np++) = 1.0;
    else cl.s_minus(i, nm++) = 1.0;
  }
  return cl;
}

CliffordCheck check_clifford(const CliffordModel& cl) {
  CliffordCheck out;
  for (int i = 0; i < 8; ++i) {
    out.symmetry = std::max(out.symmetry, (cl.gamma[i] - cl.gamma[i].transpose()).cwiseAbs().maxCoeff());
    for (int j = 0; j < 8; ++j) {
      Mat16 ac = cl.gamma[i] * cl.gamma[j] + cl.gamma[j] * cl.gamma[i];
      if (i == j) ac -= 2.0 * Mat16::Identity();
      out.anticommutator = std::max(out.anticommutator, ac.cwiseAbs().maxCoeff());
    }
  }
  out.volume_square = (cl.volume * cl.volume - Mat16::Identity()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat16> es(0.5 * (cl.volume + cl.volume.transpose()));
  for (int i = 0; i < 16; ++i) {
    if (es.eigenvalues()(i) > 0.5) ++out.s_plus_dim;
  }
  return out;
}

}  // namespace calib
