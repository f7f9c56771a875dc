#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "calibkit/kernels.hpp"

namespace calib::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(CALIBKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("CALIBKIT_ISA");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
  static const bool avx2 = cpu_has_avx2();
  return avx2 ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) throw std::runtime_error("AVX2 kernels are not available on this machine");
  current().store(isa, std::memory_order_relaxed);
}

double eval(const TermTable& tt, const double* frame, int ld) {
#if defined(CALIBKIT_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return eval_avx2(tt, frame, ld);
#endif
  return eval_scalar(tt, frame, ld);
}

double eval_grad(const TermTable& tt, const double* frame, int ld, double* grad) {
#if defined(CALIBKIT_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return eval_grad_avx2(tt, frame, ld, grad);
#endif
  return eval_grad_scalar(tt, frame, ld, grad);
}

}  // namespace calib::kernels
