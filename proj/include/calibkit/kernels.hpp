#pragma once

// Inner loops of form evaluation.
//
// A p-form with T stored terms is evaluated on an n x p frame F as
//   phi(F) = sum_t c_t det F[I_t, :],
// and its derivative with respect to F is the cofactor sum
//   dphi/dF(k, b) = sum_{t : k = I_t[r]} c_t cof_{r b}(F[I_t, :]).
// Frames are column-major with leading dimension `ld` (>= n).
//
// Two implementations exist: a scalar reference (LU minors, any p) and an
// AVX2 variant that processes four terms per lane group with closed-form
// minors for p <= 4 (falling back to the reference otherwise). The variant
// is chosen once at runtime from CPUID; CALIBKIT_ISA=scalar forces the
// reference.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "calibkit/exterior.hpp"

namespace calib::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

// Structure-of-arrays term table, padded to a multiple of 4 terms. Padding
// terms have coefficient 0 and row index 0.
struct TermTable {
  int n = 0;
  int p = 0;
  std::size_t terms = 0;
  std::size_t padded = 0;
  std::vector<std::int32_t> rows;  // rows[r * padded + t] = r-th index of term t
  std::vector<double> coeff;

  static TermTable build(const AltForm& form);
};

double eval_scalar(const TermTable& tt, const double* frame, int ld);
double eval_grad_scalar(const TermTable& tt, const double* frame, int ld, double* grad);

#if defined(CALIBKIT_HAVE_AVX2)
double eval_avx2(const TermTable& tt, const double* frame, int ld);
double eval_grad_avx2(const TermTable& tt, const double* frame, int ld, double* grad);
#endif

// Best ISA supported by this CPU and build.
Isa detected_isa();
Isa active_isa();
// Throws std::runtime_error if `isa` is not supported here.
void set_active_isa(Isa isa);

// Dispatched entry points. `grad` is overwritten (n x p, leading dim ld).
double eval(const TermTable& tt, const double* frame, int ld);
double eval_grad(const TermTable& tt, const double* frame, int ld, double* grad);

}  // namespace calib::kernels
