#include <doctest.h>

#include <random>

#include "bigm/instances.hpp"
#include "bigm/penalty.hpp"
#include "bigm/spectrum.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace bigm;

namespace {

Lcbo two_var() { return Lcbo::make(IntMatrix::diagonal(std::vector<std::int64_t>{-2, -1}), IntMatrix(1, 2, {1, 1}), {1}); }

double naive_ising(const IsingHamiltonian& h, std::uint64_t idx) {
  double e = h.constant;
  auto z = [&](std::size_t i) { return ((idx >> i) & 1) ? -1.0 : 1.0; };
  for (std::size_t i = 0; i < h.n; ++i) e += h.h[i] * z(i);
  for (const auto& c : h.J) e += c.value * z(c.i) * z(c.j);
  return e;
}

}  // namespace

TEST_CASE("ising_encode examples") {
  const Qubo x{1, IntMatrix(1, 1, {1}), 0, 1};
  const IsingHamiltonian a = ising_encode(x);
  CHECK(a.h[0] == doctest::Approx(-0.5));
  CHECK(a.constant == doctest::Approx(0.5));
  CHECK(a.J.empty());
  CHECK(a.energy({0}) == doctest::Approx(0.0));
  CHECK(a.energy({1}) == doctest::Approx(1.0));

  const IsingHamiltonian z = ising_encode(Qubo{3, IntMatrix(3, 3), 0, 1});
  CHECK(z.constant == 0.0);
  CHECK(z.J.empty());
  for (double v : z.h) CHECK(v == 0.0);

  const IsingHamiltonian p = ising_encode(Qubo{2, IntMatrix(2, 2, {0, 1, 0, 0}), 0, 1});
  REQUIRE(p.J.size() == 1);
  CHECK(p.J[0].value == doctest::Approx(0.25));
  CHECK(p.h[0] == doctest::Approx(-0.25));
  CHECK(p.h[1] == doctest::Approx(-0.25));
  CHECK(p.constant == doctest::Approx(0.25));
}

TEST_CASE("property: Ising diagonal equals the QUBO on every bitstring") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + t % 14;
    Lcbo l = testing_util::random_lcbo(rng, n, 1 + t % 2);
    if (t % 3 == 0) l = Lcbo::make(l.Q(), l.A(), l.b(), {}, 7);
    const auto o = oracle::from(l);
    for (std::int64_t M : {0, 5}) {
      const IsingHamiltonian h = ising_hamiltonian(l, M);
      const auto diag = h.diagonal();
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        const auto bits = oracle::bits(i, n);
        const double expect = static_cast<double>(o.f(bits) + M * o.pen(bits)) / static_cast<double>(l.scale());
        INFO("t=" << t << " n=" << n << " M=" << M << " i=" << i);
        REQUIRE(diag[i] == doctest::Approx(expect).epsilon(1e-12));
        REQUIRE(naive_ising(h, i) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("provenance labels") {
  CHECK(ising_hamiltonian(two_var(), 3).provenance == "combined(3)");
}

TEST_CASE("full_spectrum examples") {
  const SpectrumReport a = full_spectrum(two_var(), 2);
  CHECK(a.E0 == -2.0);
  CHECK(a.E1 == -1.0);
  CHECK(a.Emax == 2.0);
  CHECK(a.deltaM == doctest::Approx(0.25));
  CHECK(a.groundDegeneracy == 1);
  CHECK(a.EmaxF == 0.0);
  CHECK(a.EmaxC == 1.0);
  CHECK(a.normHc == 1.0);

  const SpectrumReport b = full_spectrum(two_var(), 4);
  CHECK(b.Emax == 4.0);
  CHECK(b.deltaM == doctest::Approx(1.0 / 6.0));

  const SpectrumReport c = full_spectrum(two_var(), 0);
  CHECK(c.E0 < -2.0);
}

TEST_CASE("property: spectrum agrees with sorted oracle energies") {
  std::mt19937_64 rng(52);
  for (int t = 0; t < 30; ++t) {
    const Lcbo l = testing_util::random_lcbo(rng, 2 + t % 10, 2);
    for (std::int64_t M : {1, 4, 13}) {
      const auto e = oracle::energies(oracle::from(l), M);
      const SpectrumReport r = full_spectrum(l, M);
      CHECK(r.e0Int == e.front());
      CHECK(r.emaxInt == e.back());
      const auto it = std::upper_bound(e.begin(), e.end(), e.front());
      if (it != e.end()) {
        CHECK(r.e1Int == *it);
        CHECK(r.deltaM == doctest::Approx(double(*it - e.front()) / double(e.back() - e.front())));
      }
      CHECK(r.groundDegeneracy == static_cast<std::uint64_t>(std::count(e.begin(), e.end(), e.front())));
      CHECK(r.E0 <= r.E1);
      CHECK(r.E1 <= r.Emax);
    }
  }
}

TEST_CASE("delta0 examples") {
  CHECK(delta0(two_var()) == doctest::Approx(1.0));
  CHECK_FALSE(delta0(Lcbo::make(IntMatrix(2, 2), IntMatrix(1, 2, {1, 1}), {1})));
  // Partitions of {a, b}: {A}, {B, C} with costs 4 and 1 + 2.
  const Lcbo spp = Lcbo::make(IntMatrix::diagonal(std::vector<std::int64_t>{4, 1, 2}),
                              IntMatrix(2, 3, {1, 1, 0, 1, 0, 1}), {1, 1});
  // Feasible values: {A} = 4, {B, C} = 3. Only two partitions, so Delta0 = 1.
  CHECK(delta0(spp) == doctest::Approx(1.0));
  const Lcbo spp3 = Lcbo::make(IntMatrix::diagonal(std::vector<std::int64_t>{4, 1, 2, 7}),
                               IntMatrix(2, 4, {1, 1, 0, 0, 1, 0, 1, 0}), {1, 1});
  // Partitions: {A} = 4, {B, C} = 3; D never helps (column of zeros, cost 7 added): 11, 10.
  CHECK(delta0(spp3) == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("check_observation3 examples") {
  const SpectrumReport a = check_observation3(two_var(), 2, 1);
  CHECK(a.exact);
  CHECK(a.deltaWithinGap);
  CHECK(a.boundIHolds);
  CHECK(a.boundIIHolds);
  CHECK(a.boundIIIHolds);
  CHECK(*a.mStar == 2);
  CHECK(a.E1 - a.E0 == 1.0);

  const SpectrumReport b = check_observation3(two_var(), 20, 1);
  CHECK(b.deltaM == doctest::Approx(1.0 / 22.0));
  CHECK(b.boundIIHolds);
  CHECK(b.boundIIIHolds);
  CHECK(b.boundIIICorrectedHolds);

  const SpectrumReport c = check_observation3(two_var(), 1, 1);
  CHECK_FALSE(c.exact);
}

TEST_CASE("property: observation 3 holds on exact reformulations") {
  std::mt19937_64 rng(53);
  int tested = 0;
  for (int t = 0; t < 80; ++t) {
    const Lcbo l = t % 2 ? testing_util::random_lcbo(rng, 3 + t % 9, 1 + t % 2) : gen_sparse_lcbo(6 + t % 7, 5, 900 + t);
    const std::int64_t mStar = optimal_m(l, 1);
    for (std::int64_t M : {mStar, mStar + 1, 2 * mStar + 3, m_ell1(l, 1)}) {
      const SpectrumReport r = check_observation3(l, M, 1);
      REQUIRE(r.exact);
      if (!r.deltaWithinGap) continue;
      ++tested;
      CHECK(r.boundIHolds);
      CHECK(r.boundIIHolds);
      CHECK(r.boundIIICorrectedHolds);
    }
  }
  CHECK(tested > 100);
}
