#include <doctest.h>

#include <random>

#include "bigm/enumerate.hpp"
#include "bigm/error.hpp"
#include "bigm/model.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace bigm;

namespace {

Lcbo two_var() { return Lcbo::make(IntMatrix::diagonal(std::vector<std::int64_t>{-2, -1}), IntMatrix(1, 2, {1, 1}), {1}); }

}  // namespace

TEST_CASE("objective_value on small forms") {
  const Lcbo l = two_var();
  CHECK(objective_value(l, {0, 0}) == 0);
  CHECK(objective_value(l, {1, 1}) == -3);
  const Lcbo l2 = Lcbo::make(IntMatrix(2, 2, {2, -1, 0, 3}), IntMatrix(0, 2), {});
  CHECK(objective_value(l2, {1, 1}) == 4);
  CHECK_THROWS_AS(objective_value(l, {1}), DimensionError);
}

TEST_CASE("lower-triangular entries fold onto the upper triangle") {
  const Lcbo l = Lcbo::make(IntMatrix(2, 2, {1, 3, 4, 2}), IntMatrix(0, 2), {});
  CHECK(l.Q()(0, 1) == 7);
  CHECK(l.Q()(1, 0) == 0);
  CHECK(objective_value(l, {1, 1}) == 10);
}

TEST_CASE("linear vector is added to the diagonal") {
  const std::vector<std::int64_t> lin{5, -4};
  const Lcbo l = Lcbo::make(IntMatrix(2, 2), IntMatrix(0, 2), {}, lin);
  CHECK(objective_value(l, {1, 0}) == 5);
  CHECK(objective_value(l, {1, 1}) == 1);
}

TEST_CASE("constructor validates shapes") {
  CHECK_THROWS_AS(Lcbo::make(IntMatrix(2, 3), IntMatrix(0, 2), {}), DimensionError);
  CHECK_THROWS_AS(Lcbo::make(IntMatrix(2, 2), IntMatrix(1, 3), {0}), DimensionError);
  CHECK_THROWS_AS(Lcbo::make(IntMatrix(2, 2), IntMatrix(1, 2), {}), DimensionError);
  CHECK_THROWS_AS(Lcbo::make(IntMatrix(2, 2), IntMatrix(0, 2), {}, {}, 0), InvalidArgument);
}

TEST_CASE("penalty_value") {
  const Lcbo l = two_var();
  CHECK(penalty_value(l, {1, 0}) == 0);
  CHECK(penalty_value(l, {1, 1}) == 1);
  CHECK(penalty_value(l, {0, 0}) == 1);
  CHECK(is_feasible(l, {0, 1}));
}

TEST_CASE("qubo_from_lcbo examples") {
  const Lcbo l = two_var();
  const Qubo q0 = qubo_from_lcbo(l, 0);
  CHECK(q0.Qp == l.Q());
  CHECK(q0.offset == 0);
  const Qubo q2 = qubo_from_lcbo(l, 2);
  CHECK(q2.value({1, 1}) == -1);
  CHECK(q2.value({0, 0}) == 2);
  CHECK(q2.offset == 2);
}

TEST_CASE("qubo overflow is detected") {
  const Lcbo l = Lcbo::make(IntMatrix(1, 1), IntMatrix(1, 1, {1}), {std::int64_t{1} << 40});
  CHECK_THROWS_AS(qubo_from_lcbo(l, std::int64_t{1} << 40), OverflowError);
}

TEST_CASE("brute_force_solve examples") {
  const BruteForceReport r = brute_force_solve(two_var());
  CHECK(r.xStar == Assignment{1, 0});
  CHECK(r.fStar == -2);
  REQUIRE(r.xStar1);
  CHECK(*r.xStar1 == Assignment{0, 1});
  CHECK(*r.fStar1 == -1);
  CHECK(r.fMinUnconstrained == -3);
  CHECK(r.fMaxUnconstrained == 0);
  CHECK(r.feasibleCount == 2);

  const BruteForceReport one = brute_force_solve(Lcbo::make(IntMatrix(1, 1), IntMatrix(1, 1, {1}), {1}));
  CHECK(one.xStar == Assignment{1});
  CHECK(one.fStar == 0);
  CHECK_FALSE(one.xStar1);
}

TEST_CASE("brute_force_solve errors") {
  CHECK_THROWS_AS(brute_force_solve(Lcbo::make(IntMatrix(2, 2), IntMatrix(1, 2, {1, 1}), {5})), InfeasibleError);
  CHECK_THROWS_AS(brute_force_solve(Lcbo::make(IntMatrix(30, 30), IntMatrix(0, 30), {})), LimitError);
}

TEST_CASE("bitstrings and indices round-trip") {
  const Assignment x{1, 0, 1, 1};
  CHECK(to_bitstring(x) == "1011");
  CHECK(from_bitstring("1011") == x);
  CHECK(assignment_index(x) == 13);
  CHECK(assignment_from_index(13, 4) == x);
  CHECK_THROWS_AS(from_bitstring("10a"), InvalidArgument);
}

TEST_CASE("property: qubo equals f + M pen on every point") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + t % 9;
    const Lcbo l = testing_util::random_lcbo(rng, n, 1 + t % 3);
    const auto o = oracle::from(l);
    for (std::int64_t M : {0, 1, 3, 17}) {
      const Qubo q = qubo_from_lcbo(l, M);
      const auto table = qubo_table(q);
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        const auto bits = oracle::bits(i, n);
        const std::int64_t expect = o.f(bits) + M * o.pen(bits);
        REQUIRE(q.value(assignment_from_index(i, n)) == expect);
        REQUIRE(table[i] == expect);
      }
    }
  }
}

TEST_CASE("property: unfeasible points have penalty at least one") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 3 + t % 6;
    const Lcbo l = testing_util::random_lcbo(rng, n, 2);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
      const auto x = assignment_from_index(i, n);
      const auto p = penalty_value(l, x);
      CHECK((p == 0 || p >= 1));
      CHECK((p == 0) == (oracle::from(l).pen(oracle::bits(i, n)) == 0));
    }
  }
}

TEST_CASE("property: brute force agrees with the naive oracle") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + t % 12;
    const Lcbo l = testing_util::random_lcbo(rng, n, 1 + t % 2);
    const auto o = oracle::solve(oracle::from(l));
    const BruteForceReport r = brute_force_solve(l);
    CHECK(r.fStar == o.fStar);
    CHECK(objective_value(l, r.xStar) == r.fStar);
    CHECK(is_feasible(l, r.xStar));
    CHECK(r.fStar1 == o.fStar1);
    if (r.xStar1) CHECK(objective_value(l, *r.xStar1) == *r.fStar1);
    CHECK(r.feasibleCount == o.feasibleCount);
    CHECK(r.fMaxFeasible == o.fMaxFeasible);
    CHECK(r.fMinUnconstrained == o.fMin);
    CHECK(r.fMaxUnconstrained == o.fMax);
  }
}

TEST_CASE("block enumerator matches the full table across block sizes") {
  std::mt19937_64 rng(14);
  const Lcbo l = testing_util::random_lcbo(rng, 11, 2);
  const Qubo f = objective_form(l), p = penalty_form(l);
  const auto o = oracle::from(l);
  for (unsigned bb : {1u, 3u, 6u, 16u}) {
    BlockEnumerator en({&f, &p}, bb);
    std::uint64_t seen = 0;
    en.run([&](std::uint64_t base, std::span<const std::span<const std::int64_t>> v) {
      for (std::size_t k = 0; k < v[0].size(); ++k) {
        const auto bits = oracle::bits(base + k, 11);
        REQUIRE(v[0][k] == o.f(bits));
        REQUIRE(v[1][k] == o.pen(bits));
        ++seen;
      }
    });
    CHECK(seen == 2048);
  }
}
