#pragma once

// Shared helpers for the test suites: random data and brute-force oracles
// that go through dense tensors instead of the sparse multi-index code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "calibkit/exterior.hpp"
#include "calibkit/plane.hpp"

namespace testsupport {

using calib::AltForm;

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

inline double gauss() {
  static std::normal_distribution<double> d(0.0, 1.0);
  return d(rng());
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline Eigen::VectorXd random_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss();
  return v;
}

inline Eigen::MatrixXd random_matrix(int r, int c) {
  Eigen::MatrixXd m(r, c);
  for (int j = 0; j < c; ++j)
    for (int i = 0; i < r; ++i) m(i, j) = gauss();
  return m;
}

inline AltForm random_form(int n, int p, double density = 1.0) {
  calib::CoeffMap m;
  for (calib::Mask k : calib::lex_masks(n, p)) {
    if (std::uniform_real_distribution<double>(0, 1)(rng()) <= density) m.emplace(k, gauss());
  }
  return AltForm(n, p, std::move(m));
}

inline calib::SkewMap random_skew(int n) {
  Eigen::MatrixXd a = random_matrix(n, n);
  return calib::SkewMap::from_matrix(a - a.transpose());
}

inline calib::OrientedPlane random_plane(int n, int p) { return calib::OrientedPlane::orthonormalized(random_matrix(n, p)); }

inline int perm_sign(const std::vector<int>& perm) {
  int s = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) s = -s;
  return s;
}

// phi(v_1..v_p) as the full contraction sum over all index tuples, using
// the permuted-tuple coefficient rule.
inline double dense_eval(const AltForm& a, const std::vector<Eigen::VectorXd>& vs) {
  const int n = a.dim(), p = a.degree();
  if (p == 0) return a.at(0);
  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  double total = 0.0;
  while (true) {
    double prod = a.coefficient(idx);
    if (prod != 0.0) {
      for (int k = 0; k < p; ++k) prod *= vs[static_cast<std::size_t>(k)](idx[static_cast<std::size_t>(k)]);
      total += prod;
    }
    int pos = p - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == n) idx[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return total;
}

inline double dense_eval(const AltForm& a, const Eigen::MatrixXd& frame) {
  std::vector<Eigen::VectorXd> vs;
  for (Eigen::Index j = 0; j < frame.cols(); ++j) vs.push_back(frame.col(j));
  return dense_eval(a, vs);
}

// (a ^ b)(v_1..v_{p+q}) = 1/(p! q!) sum_sigma sgn(sigma) a(v_sigma..) b(v_sigma..).
inline double wedge_oracle(const AltForm& a, const AltForm& b, const std::vector<Eigen::VectorXd>& vs) {
  const int p = a.degree(), q = b.degree();
  std::vector<int> perm(static_cast<std::size_t>(p + q));
  std::iota(perm.begin(), perm.end(), 0);
  double total = 0.0, fp = 1.0, fq = 1.0;
  for (int k = 2; k <= p; ++k) fp *= k;
  for (int k = 2; k <= q; ++k) fq *= k;
  do {
    std::vector<Eigen::VectorXd> va, vb;
    for (int k = 0; k < p; ++k) va.push_back(vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]);
    for (int k = p; k < p + q; ++k) vb.push_back(vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]);
    total += perm_sign(perm) * dense_eval(a, va) * dense_eval(b, vb);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / (fp * fq);
}

// Coefficients of a form recovered by evaluating the oracle on basis tuples.
inline AltForm form_from_oracle(int n, int p, const std::function<double(const std::vector<Eigen::VectorXd>&)>& f) {
  calib::CoeffMap m;
  for (calib::Mask k : calib::lex_masks(n, p)) {
    std::vector<Eigen::VectorXd> vs;
    for (int i : calib::mask::indices(k)) vs.push_back(Eigen::VectorXd::Unit(n, i));
    const double c = f(vs);
    if (std::abs(c) > 1e-13) m.emplace(k, c);
  }
  return AltForm(n, p, std::move(m));
}

}  // namespace testsupport
