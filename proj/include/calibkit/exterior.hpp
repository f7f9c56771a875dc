#pragma once

// Exterior algebra over R^n with the standard orthonormal metric.
//
// A strictly increasing multi-index i_1 < ... < i_p is stored as a bitmask
// (bit i set <=> index i present, 0-based). Coefficients follow the
// convention phi = sum_{I increasing} phi_I e^I, so phi(e_{i_1},...,e_{i_p})
// equals the stored coefficient and a permuted tuple picks up the sign of
// the permutation. Orientation is e^1 ^ ... ^ e^n.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace calib {

inline constexpr int kMaxDim = 16;

using Mask = std::uint32_t;
using VectorN = Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace mask {

inline int count(Mask m) { return __builtin_popcount(m); }

// Indices of the set bits in increasing order.
std::vector<int> indices(Mask m);

// Mask for the given indices; throws if an index repeats or is out of range.
Mask from_indices(std::span<const int> idx, int n);

// Sign that sorts `idx` into increasing order; 0 if an index repeats.
int sort_sign(std::span<const int> idx);

// Sign of e^A ^ e^B = sign * e^{A|B} for disjoint A, B; 0 if they meet.
int wedge_sign(Mask a, Mask b);

// Lexicographic order of the increasing index tuples (valid for equal sizes).
struct LexLess {
  bool operator()(Mask a, Mask b) const {
    const Mask d = a ^ b;
    if (d == 0) return false;
    return (a & (d & (~d + 1))) != 0;
  }
};

}  // namespace mask

using CoeffMap = std::map<Mask, double, mask::LexLess>;

class AltForm {
 public:
  AltForm() = default;
  AltForm(int n, int p);
  // Entries with |c| == 0 are dropped. Every key must have exactly p bits
  // below n.
  AltForm(int n, int p, CoeffMap coeffs);

  // Single basis term c * e^{idx}; idx 0-based, strictly increasing.
  static AltForm basis(int n, std::span<const int> idx, double c = 1.0);
  static AltForm basis(int n, std::initializer_list<int> idx, double c = 1.0) {
    std::vector<int> v(idx);
    return basis(n, v, c);
  }
  static AltForm constant(int n, double c);
  static AltForm volume(int n);

  int dim() const { return n_; }
  int degree() const { return p_; }
  const CoeffMap& terms() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool is_zero(double tol = 0.0) const;

  // Coefficient of an arbitrary index tuple (0-based), with the permutation
  // sign applied; zero if an index repeats.
  double coefficient(std::span<const int> idx) const;
  double coefficient(std::initializer_list<int> idx) const {
    std::vector<int> v(idx);
    return coefficient(v);
  }
  double at(Mask m) const;

  // Coordinates in the lexicographically ordered basis of Lambda^p.
  Eigen::VectorXd to_vector() const;
  static AltForm from_vector(int n, int p, const Eigen::VectorXd& v, double drop_below = 0.0);

  AltForm pruned(double tol) const;

  friend AltForm operator+(const AltForm& a, const AltForm& b);
  friend AltForm operator-(const AltForm& a, const AltForm& b);
  friend AltForm operator*(double s, const AltForm& a);
  friend AltForm operator-(const AltForm& a) { return -1.0 * a; }

 private:
  int n_ = 0;
  int p_ = 0;
  CoeffMap coeffs_;
};

// Max-abs coefficient difference.
double distance(const AltForm& a, const AltForm& b);
bool approx_equal(const AltForm& a, const AltForm& b, double tol = 1e-9);

// <a, b> in the metric where the e^I (I increasing) are orthonormal.
double inner(const AltForm& a, const AltForm& b);
double norm(const AltForm& a);

AltForm wedge(const AltForm& a, const AltForm& b);
AltForm hodge_star(const AltForm& a);
AltForm interior(const VectorN& v, const AltForm& a);

// Number of increasing p-subsets of {0..n-1}, and their masks in lex order.
std::size_t binomial(int n, int p);
const std::vector<Mask>& lex_masks(int n, int p);
std::size_t lex_rank(int n, int p, Mask m);

// Element of o(n): skew-symmetric n x n matrix, stored as its strict upper
// triangle. (i, j) entry theta^i_j, i.e. theta e_j = sum_i theta(i, j) e_i.
class SkewMap {
 public:
  SkewMap() = default;
  explicit SkewMap(int n);

  // e_i (x) e^j - e_j (x) e^i
  static SkewMap generator(int n, int i, int j);
  static SkewMap from_matrix(const Eigen::MatrixXd& m, double tol = 1e-12);
  // Coordinates w.r.t. the generators (i<j) in lexicographic order.
  static SkewMap from_coords(int n, const Eigen::VectorXd& coords);

  int dim() const { return n_; }
  double operator()(int i, int j) const;
  Eigen::MatrixXd matrix() const;
  Eigen::VectorXd coords() const { return upper_; }

  friend SkewMap operator+(const SkewMap& a, const SkewMap& b);
  friend SkewMap operator*(double s, const SkewMap& a);

 private:
  int n_ = 0;
  Eigen::VectorXd upper_;
  std::size_t slot(int i, int j) const;
};

// Derivation action: (theta.a)(v_1..v_p) = sum_a a(v_1, .., theta v_a, .., v_p).
AltForm so_action(const SkewMap& theta, const AltForm& a);

}  // namespace calib
