// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <array>

#include "calibkit/kernels.hpp"

namespace calib::kernels {

namespace {

struct V4 {
  __m256d v;
};

inline V4 operator+(V4 a, V4 b) { return {_mm256_add_pd(a.v, b.v)}; }
inline V4 operator-(V4 a, V4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
inline V4 operator*(V4 a, V4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
inline V4 operator-(V4 a) { return {_mm256_xor_pd(a.v, _mm256_set1_pd(-0.0))}; }
inline V4 fmsub(V4 a, V4 b, V4 c) { return {_mm256_fmsub_pd(a.v, b.v, c.v)}; }  // a*b - c

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

template <int P>
using Lanes = std::array<V4, P * P>;  // row-major P x P, one matrix per lane

template <int P>
inline void load_minors(const TermTable& tt, std::size_t t, const double* frame, int ld, Lanes<P>& m) {
  for (int r = 0; r < P; ++r) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(&tt.rows[static_cast<std::size_t>(r) * tt.padded + t]));
    for (int b = 0; b < P; ++b) m[r * P + b].v = _mm256_i32gather_pd(frame + b * ld, idx, 8);
  }
}

inline V4 det2(V4 a, V4 b, V4 c, V4 d) { return fmsub(a, d, b * c); }

template <int P>
inline V4 det(const Lanes<P>& m);

template <>
inline V4 det<1>(const Lanes<1>& m) {
  return m[0];
}

template <>
inline V4 det<2>(const Lanes<2>& m) {
  return det2(m[0], m[1], m[2], m[3]);
}

template <>
inline V4 det<3>(const Lanes<3>& m) {
  return m[0] * det2(m[4], m[5], m[7], m[8]) - m[1] * det2(m[3], m[5], m[6], m[8]) + m[2] * det2(m[3], m[4], m[6], m[7]);
}

template <>
inline V4 det<4>(const Lanes<4>& m) {
  // Laplace expansion along the first two rows.
  const V4 s01 = det2(m[0], m[1], m[4], m[5]);
  const V4 s02 = det2(m[0], m[2], m[4], m[6]);
  const V4 s03 = det2(m[0], m[3], m[4], m[7]);
  const V4 s12 = det2(m[1], m[2], m[5], m[6]);
  const V4 s13 = det2(m[1], m[3], m[5], m[7]);
  const V4 s23 = det2(m[2], m[3], m[6], m[7]);
  const V4 c23 = det2(m[10], m[11], m[14], m[15]);
  const V4 c13 = det2(m[9], m[11], m[13], m[15]);
  const V4 c12 = det2(m[9], m[10], m[13], m[14]);
  const V4 c03 = det2(m[8], m[11], m[12], m[15]);
  const V4 c02 = det2(m[8], m[10], m[12], m[14]);
  const V4 c01 = det2(m[8], m[9], m[12], m[13]);
  return s01 * c23 - s02 * c13 + s03 * c12 + s12 * c03 - s13 * c02 + s23 * c01;
}

// cof[r * P + b] = d det / d m[r][b]
template <int P>
inline void cofactors(const Lanes<P>& m, Lanes<P>& cof);

template <>
inline void cofactors<1>(const Lanes<1>&, Lanes<1>& cof) {
  cof[0].v = _mm256_set1_pd(1.0);
}

template <>
inline void cofactors<2>(const Lanes<2>& m, Lanes<2>& cof) {
  cof[0] = m[3];
  cof[1] = -m[2];
  cof[2] = -m[1];
  cof[3] = m[0];
}

template <>
inline void cofactors<3>(const Lanes<3>& m, Lanes<3>& cof) {
  for (int r = 0; r < 3; ++r) {
    const int r1 = (r + 1) % 3, r2 = (r + 2) % 3;
    for (int b = 0; b < 3; ++b) {
      const int b1 = (b + 1) % 3, b2 = (b + 2) % 3;
      cof[r * 3 + b] = det2(m[r1 * 3 + b1], m[r1 * 3 + b2], m[r2 * 3 + b1], m[r2 * 3 + b2]);
    }
  }
}

template <>
inline void cofactors<4>(const Lanes<4>& m, Lanes<4>& cof) {
  for (int r = 0; r < 4; ++r) {
    for (int b = 0; b < 4; ++b) {
      Lanes<3> sub;
      int rr = 0;
      for (int i = 0; i < 4; ++i) {
        if (i == r) continue;
        int cc = 0;
        for (int j = 0; j < 4; ++j) {
          if (j == b) continue;
          sub[rr * 3 + cc] = m[i * 4 + j];
          ++cc;
        }
        ++rr;
      }
      const V4 d = det<3>(sub);
      cof[r * 4 + b] = ((r + b) & 1) ? -d : d;
    }
  }
}

template <int P>
double eval_fixed(const TermTable& tt, const double* frame, int ld) {
  __m256d acc = _mm256_setzero_pd();
  Lanes<P> m;
  for (std::size_t t = 0; t < tt.padded; t += 4) {
    load_minors<P>(tt, t, frame, ld, m);
    const __m256d c = _mm256_loadu_pd(&tt.coeff[t]);
    acc = _mm256_fmadd_pd(c, det<P>(m).v, acc);
  }
  return hsum(acc);
}

template <int P>
double eval_grad_fixed(const TermTable& tt, const double* frame, int ld, double* grad) {
  for (int b = 0; b < P; ++b) {
    for (int k = 0; k < tt.n; ++k) grad[k + b * ld] = 0.0;
  }
  __m256d acc = _mm256_setzero_pd();
  Lanes<P> m;
  Lanes<P> cof;
  alignas(32) double buf[4];
  for (std::size_t t = 0; t < tt.padded; t += 4) {
    load_minors<P>(tt, t, frame, ld, m);
    const __m256d c = _mm256_loadu_pd(&tt.coeff[t]);
    acc = _mm256_fmadd_pd(c, det<P>(m).v, acc);
    cofactors<P>(m, cof);
    for (int r = 0; r < P; ++r) {
      const std::int32_t* rows = &tt.rows[static_cast<std::size_t>(r) * tt.padded + t];
      for (int b = 0; b < P; ++b) {
        // Lanes may share a row index, so the scatter is serial.
        _mm256_store_pd(buf, _mm256_mul_pd(c, cof[r * P + b].v));
        double* col = grad + b * ld;
        col[rows[0]] += buf[0];
        col[rows[1]] += buf[1];
        col[rows[2]] += buf[2];
        col[rows[3]] += buf[3];
      }
    }
  }
  return hsum(acc);
}

}  // namespace

double eval_avx2(const TermTable& tt, const double* frame, int ld) {
  switch (tt.p) {
    case 1: return eval_fixed<1>(tt, frame, ld);
    case 2: return eval_fixed<2>(tt, frame, ld);
    case 3: return eval_fixed<3>(tt, frame, ld);
    case 4: return eval_fixed<4>(tt, frame, ld);
    default: return eval_scalar(tt, frame, ld);
  }
}

double eval_grad_avx2(const TermTable& tt, const double* frame, int ld, double* grad) {
  switch (tt.p) {
    case 1: return eval_grad_fixed<1>(tt, frame, ld, grad);
    case 2: return eval_grad_fixed<2>(tt, frame, ld, grad);
    case 3: return eval_grad_fixed<3>(tt, frame, ld, grad);
    case 4: return eval_grad_fixed<4>(tt, frame, ld, grad);
    default: return eval_grad_scalar(tt, frame, ld, grad);
  }
}

}  // namespace calib::kernels
