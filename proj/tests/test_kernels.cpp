#include <doctest.h>

#include <random>

#include "bigm/simd/kernels.hpp"

using namespace bigm::simd;

namespace {

// Lengths around the vector width, including ragged tails.
const std::size_t kLengths[] = {1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 64, 1000};

}  // namespace

TEST_CASE("scalar kernels are always available") {
  CHECK(scalar_kernels().isa == Isa::scalar);
  CHECK(select(Isa::scalar));
  CHECK(active().isa == Isa::scalar);
  if (avx2_kernels()) {
    CHECK(select(Isa::avx2));
    CHECK(active().isa == Isa::avx2);
  } else {
    CHECK_FALSE(select(Isa::avx2));
  }
}

TEST_CASE("avx2 kernels match the scalar reference") {
  const Kernels* v = avx2_kernels();
  if (!v) {
    MESSAGE("AVX2 unavailable on this CPU; equivalence not exercised");
    return;
  }
  const Kernels& s = scalar_kernels();
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<std::int64_t> iv(-1000000, 1000000);
  std::normal_distribution<double> dv;

  for (std::size_t len : kLengths) {
    std::vector<std::int64_t> a(2 * len), b(2 * len);
    for (std::size_t i = 0; i < len; ++i) a[i] = b[i] = iv(rng);
    const std::int64_t c = iv(rng);
    s.extend_i64(a.data(), len, c);
    v->extend_i64(b.data(), len, c);
    CHECK(a == b);

    std::vector<std::int64_t> x(len), y(len), d1(len), d2(len);
    for (std::size_t i = 0; i < len; ++i) x[i] = iv(rng), y[i] = iv(rng);
    s.sum_i64(d1.data(), x.data(), y.data(), len);
    v->sum_i64(d2.data(), x.data(), y.data(), len);
    CHECK(d1 == d2);

    std::int64_t mn1, mx1, mn2, mx2;
    s.minmax_i64(x.data(), len, &mn1, &mx1);
    v->minmax_i64(x.data(), len, &mn2, &mx2);
    CHECK(mn1 == mn2);
    CHECK(mx1 == mx2);

    std::vector<double> fa(2 * len), fb(2 * len), fx(len), fy(len), fd1(len), fd2(len);
    for (std::size_t i = 0; i < len; ++i) fa[i] = fb[i] = dv(rng), fx[i] = dv(rng), fy[i] = dv(rng);
    s.extend_f64(fa.data(), len, 0.75);
    v->extend_f64(fb.data(), len, 0.75);
    CHECK(fa == fb);
    s.sum_f64(fd1.data(), fx.data(), fy.data(), len);
    v->sum_f64(fd2.data(), fx.data(), fy.data(), len);
    CHECK(fd1 == fd2);

    std::vector<cplx> p(len), q;
    std::vector<double> re(len), im(len);
    for (std::size_t i = 0; i < len; ++i) p[i] = {dv(rng), dv(rng)}, re[i] = dv(rng), im[i] = dv(rng);
    q = p;
    s.phase_mul(p.data(), re.data(), im.data(), len);
    v->phase_mul(q.data(), re.data(), im.data(), len);
    for (std::size_t i = 0; i < len; ++i) CHECK(std::abs(p[i] - q[i]) < 1e-14);

    CHECK(s.norm2(p.data(), len) == doctest::Approx(v->norm2(p.data(), len)).epsilon(1e-13));
    std::vector<double> pr1(len), pr2(len);
    s.probabilities(p.data(), pr1.data(), len);
    v->probabilities(p.data(), pr2.data(), len);
    for (std::size_t i = 0; i < len; ++i) CHECK(pr1[i] == doctest::Approx(pr2[i]).epsilon(1e-14));
  }

  for (unsigned n = 1; n <= 7; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> p(dim);
    for (auto& z : p) z = {dv(rng), dv(rng)};
    for (unsigned qubit = 0; qubit < n; ++qubit) {
      auto a = p, b = p;
      s.rx(a.data(), dim, qubit, std::cos(0.3), std::sin(0.3));
      v->rx(b.data(), dim, qubit, std::cos(0.3), std::sin(0.3));
      for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-14);
    }
  }
}

TEST_CASE("scalar rx is the expected rotation") {
  std::vector<cplx> amp{{1, 0}, {0, 0}};
  scalar_kernels().rx(amp.data(), 2, 0, std::cos(0.4), std::sin(0.4));
  CHECK(amp[0].real() == doctest::Approx(std::cos(0.4)));
  CHECK(amp[1].imag() == doctest::Approx(std::sin(0.4)));
}
