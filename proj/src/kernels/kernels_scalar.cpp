#include <array>
#include <cmath>
#include <utility>

#include "calibkit/kernels.hpp"

namespace calib::kernels {

TermTable TermTable::build(const AltForm& form) {
  TermTable tt;
  tt.n = form.dim();
  tt.p = form.degree();
  tt.terms = form.size();
  tt.padded = (tt.terms + 3) / 4 * 4;
  tt.rows.assign(static_cast<std::size_t>(tt.p) * tt.padded, 0);
  tt.coeff.assign(tt.padded, 0.0);
  std::size_t t = 0;
  for (const auto& [m, c] : form.terms()) {
    int r = 0;
    for (Mask mm = m; mm; mm &= mm - 1, ++r) {
      tt.rows[static_cast<std::size_t>(r) * tt.padded + t] = __builtin_ctz(mm);
    }
    tt.coeff[t] = c;
    ++t;
  }
  return tt;
}

namespace {

using Small = std::array<double, kMaxDim * kMaxDim>;

// Determinant of the k x k row-major matrix in `a` (destroyed), by LU with
// partial pivoting.
double lu_det(Small& a, int k) {
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    double best = std::abs(a[c * k + c]);
    for (int r = c + 1; r < k; ++r) {
      const double v = std::abs(a[r * k + c]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
      det = -det;
    }
    const double d = a[c * k + c];
    det *= d;
    for (int r = c + 1; r < k; ++r) {
      const double f = a[r * k + c] / d;
      if (f == 0.0) continue;
      for (int j = c + 1; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
    }
  }
  return det;
}

// Gathers F[I_t, :] into row-major p x p storage.
void gather(const TermTable& tt, std::size_t t, const double* frame, int ld, Small& m) {
  const int p = tt.p;
  for (int r = 0; r < p; ++r) {
    const int row = tt.rows[static_cast<std::size_t>(r) * tt.padded + t];
    for (int b = 0; b < p; ++b) m[r * p + b] = frame[row + b * ld];
  }
}

double minor_det(const Small& m, int p, int skip_r, int skip_b) {
  Small sub;
  const int k = p - 1;
  int rr = 0;
  for (int r = 0; r < p; ++r) {
    if (r == skip_r) continue;
    int cc = 0;
    for (int b = 0; b < p; ++b) {
      if (b == skip_b) continue;
      sub[rr * k + cc] = m[r * p + b];
      ++cc;
    }
    ++rr;
  }
  return lu_det(sub, k);
}

}  // namespace

double eval_scalar(const TermTable& tt, const double* frame, int ld) {
  const int p = tt.p;
  double sum = 0.0;
  Small m;
  for (std::size_t t = 0; t < tt.terms; ++t) {
    gather(tt, t, frame, ld, m);
    sum += tt.coeff[t] * lu_det(m, p);
  }
  return sum;
}

double eval_grad_scalar(const TermTable& tt, const double* frame, int ld, double* grad) {
  const int p = tt.p;
  for (int b = 0; b < p; ++b) {
    for (int k = 0; k < tt.n; ++k) grad[k + b * ld] = 0.0;
  }
  double sum = 0.0;
  Small m;
  for (std::size_t t = 0; t < tt.terms; ++t) {
    gather(tt, t, frame, ld, m);
    const double c = tt.coeff[t];
    for (int r = 0; r < p; ++r) {
      const int row = tt.rows[static_cast<std::size_t>(r) * tt.padded + t];
      for (int b = 0; b < p; ++b) {
        const double sgn = ((r + b) & 1) ? -1.0 : 1.0;
        grad[row + b * ld] += c * sgn * minor_det(m, p, r, b);
      }
    }
    Small lu = m;
    sum += c * lu_det(lu, p);
  }
  return sum;
}

}  // namespace calib::kernels
