#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops shared by the enumeration and statevector code.
// Each entry has a scalar reference implementation; an AVX2 variant is
// compiled on x86-64 and selected at runtime when the CPU supports it.
// The two are checked against each other in tests/test_kernels.cpp.

namespace bigm::simd {

enum class Isa { scalar, avx2 };

using cplx = std::complex<double>;

struct Kernels {
  Isa isa;
  std::string_view name;

  // data[len + i] = data[i] + c  for i < len
  void (*extend_i64)(std::int64_t* data, std::size_t len, std::int64_t c);
  // dst[i] = a[i] + b[i]  (dst may alias a or b)
  void (*sum_i64)(std::int64_t* dst, const std::int64_t* a, const std::int64_t* b, std::size_t len);
  // Writes min and max of a non-empty range.
  void (*minmax_i64)(const std::int64_t* data, std::size_t len, std::int64_t* mn, std::int64_t* mx);

  void (*extend_f64)(double* data, std::size_t len, double c);
  void (*sum_f64)(double* dst, const double* a, const double* b, std::size_t len);

  // amps[i] *= (re[i] + i*im[i])
  void (*phase_mul)(cplx* amps, const double* re, const double* im, std::size_t len);
  // Applies cos(b) I + i sin(b) X on `qubit`, with c = cos(b), s = sin(b).
  void (*rx)(cplx* amps, std::size_t dim, unsigned qubit, double c, double s);
  // sum_i |amps[i]|^2
  double (*norm2)(const cplx* amps, std::size_t len);
  // out[i] = |amps[i]|^2
  void (*probabilities)(const cplx* amps, double* out, std::size_t len);
};

const Kernels& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const Kernels* avx2_kernels();

// Kernels used by the library. Defaults to the widest supported ISA; the
// BIGM_SIMD environment variable ("scalar" or "avx2") overrides the choice.
const Kernels& active();

// Forces a variant for the rest of the process. Returns false (and leaves
// the selection unchanged) if it is unavailable.
bool select(Isa isa);

}  // namespace bigm::simd
