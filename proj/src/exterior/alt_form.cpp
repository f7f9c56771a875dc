#include "calibkit/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

namespace calib {

namespace mask {

std::vector<int> indices(Mask m) {
  std::vector<int> out;
  out.reserve(count(m));
  while (m) {
    out.push_back(__builtin_ctz(m));
    m &= m - 1;
  }
  return out;
}

Mask from_indices(std::span<const int> idx, int n) {
  Mask m = 0;
  for (int i : idx) {
    if (i < 0 || i >= n) throw DimensionError("index " + std::to_string(i) + " out of range for n=" + std::to_string(n));
    const Mask bit = Mask{1} << i;
    if (m & bit) throw std::invalid_argument("repeated index " + std::to_string(i));
    m |= bit;
  }
  return m;
}

int sort_sign(std::span<const int> idx) {
  int inversions = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = i + 1; j < idx.size(); ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) ++inversions;
    }
  }
  return (inversions & 1) ? -1 : 1;
}

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int crossings = 0;
  for (Mask bb = b; bb; bb &= bb - 1) {
    const int j = __builtin_ctz(bb);
    crossings += count(a & ~((Mask{2} << j) - 1));
  }
  return (crossings & 1) ? -1 : 1;
}

}  // namespace mask

namespace {

void check_same_dim(const AltForm& a, const AltForm& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

void accumulate(CoeffMap& m, Mask key, double c) {
  auto [it, inserted] = m.try_emplace(key, c);
  if (!inserted) it->second += c;
}

}  // namespace

AltForm::AltForm(int n, int p) : n_(n), p_(p) {
  if (n < 0 || n > kMaxDim) throw DimensionError("ambient dimension must lie in [0, 16]");
  if (p < 0 || p > n) throw DimensionError("degree must lie in [0, n]");
}

AltForm::AltForm(int n, int p, CoeffMap coeffs) : AltForm(n, p) {
  const Mask full = n == 32 ? ~Mask{0} : ((Mask{1} << n) - 1);
  for (auto& [m, c] : coeffs) {
    if (mask::count(m) != p || (m & ~full)) throw DimensionError("multi-index does not match (n, p)");
    if (c != 0.0) coeffs_.emplace(m, c);
  }
}

AltForm AltForm::basis(int n, std::span<const int> idx, double c) {
  for (std::size_t i = 1; i < idx.size(); ++i) {
    if (idx[i] <= idx[i - 1]) throw std::invalid_argument("basis multi-index must be strictly increasing");
  }
  CoeffMap m;
  m.emplace(mask::from_indices(idx, n), c);
  return AltForm(n, static_cast<int>(idx.size()), std::move(m));
}

AltForm AltForm::constant(int n, double c) {
  CoeffMap m;
  m.emplace(Mask{0}, c);
  return AltForm(n, 0, std::move(m));
}

AltForm AltForm::volume(int n) {
  CoeffMap m;
  m.emplace((Mask{1} << n) - 1, 1.0);
  return AltForm(n, n, std::move(m));
}

bool AltForm::is_zero(double tol) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [tol](const auto& kv) { return std::abs(kv.second) <= tol; });
}

double AltForm::at(Mask m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double AltForm::coefficient(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != p_) throw DimensionError("index tuple length differs from degree");
  const int s = mask::sort_sign(idx);
  if (s == 0) return 0.0;
  return s * at(mask::from_indices(idx, n_));
}

Eigen::VectorXd AltForm::to_vector() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(binomial(n_, p_)));
  for (const auto& [m, c] : coeffs_) v(static_cast<Eigen::Index>(lex_rank(n_, p_, m))) = c;
  return v;
}

AltForm AltForm::from_vector(int n, int p, const Eigen::VectorXd& v, double drop_below) {
  const auto& masks = lex_masks(n, p);
  if (static_cast<std::size_t>(v.size()) != masks.size()) throw DimensionError("coordinate vector has wrong length");
  CoeffMap m;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const double c = v(static_cast<Eigen::Index>(i));
    if (std::abs(c) > drop_below) m.emplace(masks[i], c);
  }
  return AltForm(n, p, std::move(m));
}

AltForm AltForm::pruned(double tol) const {
  CoeffMap m;
  for (const auto& [k, c] : coeffs_) {
    if (std::abs(c) > tol) m.emplace(k, c);
  }
  return AltForm(n_, p_, std::move(m));
}

AltForm operator+(const AltForm& a, const AltForm& b) {
  check_same_dim(a, b);
  if (a.degree() != b.degree()) throw DimensionError("cannot add forms of different degree");
  CoeffMap m = a.terms();
  for (const auto& [k, c] : b.terms()) accumulate(m, k, c);
  return AltForm(a.dim(), a.degree(), std::move(m));
}

AltForm operator-(const AltForm& a, const AltForm& b) { return a + (-1.0) * b; }

AltForm operator*(double s, const AltForm& a) {
  CoeffMap m;
  for (const auto& [k, c] : a.terms()) m.emplace(k, s * c);
  return AltForm(a.dim(), a.degree(), std::move(m));
}

double distance(const AltForm& a, const AltForm& b) {
  check_same_dim(a, b);
  if (a.degree() != b.degree()) return std::max(norm(a), norm(b)) + 1.0;
  double d = 0.0;
  for (const auto& [k, c] : a.terms()) d = std::max(d, std::abs(c - b.at(k)));
  for (const auto& [k, c] : b.terms()) {
    if (!a.terms().count(k)) d = std::max(d, std::abs(c));
  }
  return d;
}

bool approx_equal(const AltForm& a, const AltForm& b, double tol) {
  return a.dim() == b.dim() && a.degree() == b.degree() && distance(a, b) <= tol;
}

double inner(const AltForm& a, const AltForm& b) {
  check_same_dim(a, b);
  if (a.degree() != b.degree()) return 0.0;
  double s = 0.0;
  for (const auto& [k, c] : a.terms()) s += c * b.at(k);
  return s;
}

double norm(const AltForm& a) { return std::sqrt(inner(a, a)); }

AltForm wedge(const AltForm& a, const AltForm& b) {
  check_same_dim(a, b);
  const int n = a.dim();
  const int q = a.degree() + b.degree();
  if (q > n) return AltForm(n, n);  // zero; the degree is clamped at n
  CoeffMap m;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      const int s = mask::wedge_sign(ka, kb);
      if (s != 0) accumulate(m, ka | kb, s * ca * cb);
    }
  }
  return AltForm(n, q, std::move(m));
}

AltForm hodge_star(const AltForm& a) {
  const int n = a.dim();
  const Mask full = (Mask{1} << n) - 1;
  CoeffMap m;
  for (const auto& [k, c] : a.terms()) {
    const Mask comp = full & ~k;
    m.emplace(comp, mask::wedge_sign(k, comp) * c);
  }
  return AltForm(n, n - a.degree(), std::move(m));
}

AltForm interior(const VectorN& v, const AltForm& a) {
  if (v.size() != a.dim()) throw DimensionError("vector length differs from form dimension");
  if (a.degree() == 0) throw DimensionError("interior product of a 0-form is undefined");
  CoeffMap m;
  for (const auto& [k, c] : a.terms()) {
    int pos = 0;
    for (Mask kk = k; kk; kk &= kk - 1, ++pos) {
      const int i = __builtin_ctz(kk);
      if (v(i) == 0.0) continue;
      const double s = (pos & 1) ? -1.0 : 1.0;
      accumulate(m, k & ~(Mask{1} << i), s * v(i) * c);
    }
  }
  return AltForm(a.dim(), a.degree() - 1, std::move(m));
}

std::size_t binomial(int n, int p) {
  if (p < 0 || p > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= p; ++i) r = r * static_cast<std::size_t>(n - p + i) / static_cast<std::size_t>(i);
  return r;
}

namespace {

struct MaskTable {
  std::vector<Mask> masks;
  std::unordered_map<Mask, std::size_t> rank;
};

const MaskTable& mask_table(int n, int p) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, MaskTable> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace({n, p});
  if (inserted) {
    MaskTable& t = it->second;
    for (Mask m = 0; m < (Mask{1} << n); ++m) {
      if (mask::count(m) == p) t.masks.push_back(m);
    }
    std::sort(t.masks.begin(), t.masks.end(), mask::LexLess{});
    for (std::size_t i = 0; i < t.masks.size(); ++i) t.rank.emplace(t.masks[i], i);
  }
  return it->second;
}

}  // namespace

const std::vector<Mask>& lex_masks(int n, int p) { return mask_table(n, p).masks; }

std::size_t lex_rank(int n, int p, Mask m) { return mask_table(n, p).rank.at(m); }

AltForm so_action(const SkewMap& theta, const AltForm& a) {
  if (theta.dim() != a.dim()) throw DimensionError("skew map and form dimensions differ");
  const int n = a.dim();
  const Eigen::MatrixXd t = theta.matrix();
  CoeffMap m;
  for (const auto& [k, c] : a.terms()) {
    for (Mask kk = k; kk; kk &= kk - 1) {
      const int ia = __builtin_ctz(kk);
      const Mask rest = k & ~(Mask{1} << ia);
      for (int j = 0; j < n; ++j) {
        const double w = t(ia, j);
        if (w == 0.0 || (rest & (Mask{1} << j))) continue;
        // Moving j from slot of ia to its sorted place crosses the elements
        // of `rest` strictly between ia and j.
        const int lo = std::min(ia, j), hi = std::max(ia, j);
        const Mask between = ((Mask{1} << hi) - 1) & ~((Mask{2} << lo) - 1);
        const double s = (mask::count(rest & between) & 1) ? -1.0 : 1.0;
        accumulate(m, rest | (Mask{1} << j), s * w * c);
      }
    }
  }
  return AltForm(n, a.degree(), std::move(m));
}

}  // namespace calib
