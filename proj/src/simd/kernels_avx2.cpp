#include "bigm/simd/kernels.hpp"

#if defined(BIGM_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>

// Only the kernels below are compiled for AVX2; everything else in this
// translation unit (and any inline function pulled in by the headers above)
// keeps the baseline ISA, so nothing AVX2-only leaks into shared code.
#pragma GCC push_options
#pragma GCC target("avx2,fma")

namespace bigm::simd {
namespace {

void extend_i64(std::int64_t* data, std::size_t len, std::int64_t c) {
  const __m256i cv = _mm256_set1_epi64x(c);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(data + len + i), _mm256_add_epi64(v, cv));
  }
  for (; i < len; ++i) data[len + i] = data[i] + c;
}

void sum_i64(std::int64_t* dst, const std::int64_t* a, const std::int64_t* b, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_add_epi64(va, vb));
  }
  for (; i < len; ++i) dst[i] = a[i] + b[i];
}

void minmax_i64(const std::int64_t* data, std::size_t len, std::int64_t* mn, std::int64_t* mx) {
  std::int64_t lo = data[0];
  std::int64_t hi = data[0];
  std::size_t i = 0;
  if (len >= 4) {
    __m256i vlo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data));
    __m256i vhi = vlo;
    for (i = 4; i + 4 <= len; i += 4) {
      const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
      vlo = _mm256_blendv_epi8(vlo, v, _mm256_cmpgt_epi64(vlo, v));
      vhi = _mm256_blendv_epi8(vhi, v, _mm256_cmpgt_epi64(v, vhi));
    }
    alignas(32) std::int64_t l[4];
    alignas(32) std::int64_t h[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(l), vlo);
    _mm256_store_si256(reinterpret_cast<__m256i*>(h), vhi);
    lo = *std::min_element(l, l + 4);
    hi = *std::max_element(h, h + 4);
  }
  for (; i < len; ++i) {
    lo = std::min(lo, data[i]);
    hi = std::max(hi, data[i]);
  }
  *mn = lo;
  *mx = hi;
}

void extend_f64(double* data, std::size_t len, double c) {
  const __m256d cv = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(data + len + i, _mm256_add_pd(_mm256_loadu_pd(data + i), cv));
  }
  for (; i < len; ++i) data[len + i] = data[i] + c;
}

void sum_f64(double* dst, const double* a, const double* b, std::size_t len) {
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  for (; i < len; ++i) dst[i] = a[i] + b[i];
}

// Two complex<double> per register, interleaved (re, im, re, im).
void phase_mul(cplx* amps, const double* re, const double* im, std::size_t len) {
  auto* p = reinterpret_cast<double*>(amps);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d v = _mm256_loadu_pd(p + 2 * i);
    const __m128d r = _mm_loadu_pd(re + i);
    const __m128d m = _mm_loadu_pd(im + i);
    const __m256d rr = _mm256_set_m128d(_mm_unpackhi_pd(r, r), _mm_unpacklo_pd(r, r));
    const __m256d mm = _mm256_set_m128d(_mm_unpackhi_pd(m, m), _mm_unpacklo_pd(m, m));
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    _mm256_storeu_pd(p + 2 * i, _mm256_addsub_pd(_mm256_mul_pd(v, rr), _mm256_mul_pd(swapped, mm)));
  }
  for (; i < len; ++i) {
    const double ar = amps[i].real();
    const double ai = amps[i].imag();
    amps[i] = cplx(ar * re[i] - ai * im[i], ar * im[i] + ai * re[i]);
  }
}

void rx(cplx* amps, std::size_t dim, unsigned qubit, double c, double s) {
  auto* p = reinterpret_cast<double*>(amps);
  const __m256d cv = _mm256_set1_pd(c);
  // i*s*(re, im) = (-s*im, s*re)
  const __m256d sv = _mm256_set_pd(s, -s, s, -s);
  if (qubit == 0) {
    // The pair (a0, a1) sits in one register.
    for (std::size_t i = 0; i < dim; i += 2) {
      const __m256d v = _mm256_loadu_pd(p + 2 * i);
      const __m256d partner = _mm256_permute2f128_pd(v, v, 0x01);
      const __m256d rot = _mm256_permute_pd(partner, 0b0101);
      _mm256_storeu_pd(p + 2 * i, _mm256_fmadd_pd(cv, v, _mm256_mul_pd(sv, rot)));
    }
    return;
  }
  const std::size_t stride = std::size_t{1} << qubit;
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; i += 2) {
      double* lo = p + 2 * i;
      double* hi = p + 2 * (i + stride);
      const __m256d a0 = _mm256_loadu_pd(lo);
      const __m256d a1 = _mm256_loadu_pd(hi);
      const __m256d r0 = _mm256_fmadd_pd(cv, a0, _mm256_mul_pd(sv, _mm256_permute_pd(a1, 0b0101)));
      const __m256d r1 = _mm256_fmadd_pd(cv, a1, _mm256_mul_pd(sv, _mm256_permute_pd(a0, 0b0101)));
      _mm256_storeu_pd(lo, r0);
      _mm256_storeu_pd(hi, r1);
    }
  }
}

double norm2(const cplx* amps, std::size_t len) {
  const auto* p = reinterpret_cast<const double*>(amps);
  const std::size_t n = 2 * len;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(p + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) total += p[i] * p[i];
  return total;
}

void probabilities(const cplx* amps, double* out, std::size_t len) {
  const auto* p = reinterpret_cast<const double*>(amps);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0b11011000));
  }
  for (; i < len; ++i) out[i] = std::norm(amps[i]);
}

}  // namespace
}  // namespace bigm::simd

#pragma GCC pop_options

namespace bigm::simd {

const Kernels* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  static const Kernels k{Isa::avx2, "avx2", extend_i64, sum_i64, minmax_i64, extend_f64,
                         sum_f64,   phase_mul, rx,       norm2,   probabilities};
  return supported ? &k : nullptr;
}

}  // namespace bigm::simd

#else

namespace bigm::simd {
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace bigm::simd

#endif
