#include "bigm/simd/kernels.hpp"

#include <algorithm>

namespace bigm::simd {
namespace {

void extend_i64(std::int64_t* data, std::size_t len, std::int64_t c) {
  for (std::size_t i = 0; i < len; ++i) data[len + i] = data[i] + c;
}

void sum_i64(std::int64_t* dst, const std::int64_t* a, const std::int64_t* b, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] + b[i];
}

void minmax_i64(const std::int64_t* data, std::size_t len, std::int64_t* mn, std::int64_t* mx) {
  std::int64_t lo = data[0];
  std::int64_t hi = data[0];
  for (std::size_t i = 1; i < len; ++i) {
    lo = std::min(lo, data[i]);
    hi = std::max(hi, data[i]);
  }
  *mn = lo;
  *mx = hi;
}

void extend_f64(double* data, std::size_t len, double c) {
  for (std::size_t i = 0; i < len; ++i) data[len + i] = data[i] + c;
}

void sum_f64(double* dst, const double* a, const double* b, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) dst[i] = a[i] + b[i];
}

void phase_mul(cplx* amps, const double* re, const double* im, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    const double ar = amps[i].real();
    const double ai = amps[i].imag();
    amps[i] = cplx(ar * re[i] - ai * im[i], ar * im[i] + ai * re[i]);
  }
}

void rx(cplx* amps, std::size_t dim, unsigned qubit, double c, double s) {
  const std::size_t stride = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      // c*a + i*s*b
      amps[i] = cplx(c * a0.real() - s * a1.imag(), c * a0.imag() + s * a1.real());
      amps[i + stride] = cplx(c * a1.real() - s * a0.imag(), c * a1.imag() + s * a0.real());
    }
  }
}

double norm2(const cplx* amps, std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += std::norm(amps[i]);
  return acc;
}

void probabilities(const cplx* amps, double* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = std::norm(amps[i]);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::scalar, "scalar", extend_i64, sum_i64, minmax_i64, extend_f64,
                         sum_f64,     phase_mul, rx,       norm2,   probabilities};
  return k;
}

}  // namespace bigm::simd
