#include <doctest.h>

#include <random>
#include <set>

#include "bigm/error.hpp"
#include "bigm/gadgets.hpp"
#include "bigm/instances.hpp"
#include "oracles.hpp"

using namespace bigm;

namespace {

QuadConstraint linear_con(std::vector<std::int64_t> l, std::int64_t b) {
  const std::size_t n = l.size();
  return {IntMatrix(n, n), std::move(l), b};
}

oracle::IntProgram to_oracle(const PolyIntProgram& p) {
  oracle::IntProgram o;
  o.Q = oracle::dense(p.Q);
  o.L = p.L;
  o.U = p.upperBounds;
  for (const auto& c : p.equalities) o.cons.push_back({oracle::dense(c.q), c.l, c.b, false});
  for (const auto& c : p.inequalities) o.cons.push_back({oracle::dense(c.q), c.l, c.b, true});
  return o;
}

// Brute-force optimum of the Lcbo, or empty if it has no feasible point.
std::optional<std::int64_t> lcbo_optimum(const Lcbo& l) {
  const auto s = oracle::solve(oracle::from(l));
  if (!s.feasible) return std::nullopt;
  return s.fStar;
}

}  // namespace

TEST_CASE("inequalities_to_equalities") {
  PolyIntProgram p = PolyIntProgram::empty(2, {1, 1});
  p.inequalities.push_back(linear_con({1, 1}, 1));
  std::vector<VariableMap::Slack> slacks;
  const PolyIntProgram out = inequalities_to_equalities(p, &slacks);
  CHECK(out.nVars == 3);
  CHECK(out.inequalities.empty());
  REQUIRE(out.equalities.size() == 1);
  CHECK(out.equalities[0].l == std::vector<std::int64_t>{1, 1, -1});
  CHECK(out.equalities[0].b == 1);
  CHECK(out.upperBounds[2] == 1);
  REQUIRE(slacks.size() == 1);
  CHECK(slacks[0].bound == 1);

  PolyIntProgram q = PolyIntProgram::empty(1, {1});
  q.inequalities.push_back(linear_con({2}, 0));
  CHECK(inequalities_to_equalities(q).upperBounds[1] == 2);

  PolyIntProgram none = PolyIntProgram::empty(2, {3, 1});
  none.equalities.push_back(linear_con({1, 2}, 3));
  CHECK(inequalities_to_equalities(none) == none);

  PolyIntProgram bad = PolyIntProgram::empty(1, {1});
  bad.inequalities.push_back(linear_con({1}, 5));
  CHECK_THROWS_AS(inequalities_to_equalities(bad), InfeasibleError);
}

TEST_CASE("slack_upper_bound") {
  const std::vector<std::int64_t> box{1, 1};
  CHECK(slack_upper_bound(IntMatrix(2, 2), std::vector<std::int64_t>{1, 1}, 1, box) == 1);
  CHECK(slack_upper_bound(IntMatrix(2, 2), std::vector<std::int64_t>{0, 0}, 0, box) == 0);
  CHECK(slack_upper_bound(IntMatrix(2, 2, {1, 0, 0, 0}), std::vector<std::int64_t>{0, 0}, 0, box) == 1);
}

TEST_CASE("expansion coefficients") {
  CHECK(expansion_coefficients(7, ExpansionScheme::bounded) == std::vector<std::int64_t>{1, 2, 4});
  CHECK(expansion_coefficients(7, ExpansionScheme::powersOfTwo) == std::vector<std::int64_t>{1, 2, 4});
  CHECK(expansion_coefficients(1, ExpansionScheme::bounded) == std::vector<std::int64_t>{1});
  CHECK(expansion_coefficients(5, ExpansionScheme::bounded) == std::vector<std::int64_t>{1, 2, 2});
  CHECK(expansion_coefficients(0, ExpansionScheme::bounded).empty());
  CHECK_THROWS_AS(expansion_coefficients(-1, ExpansionScheme::bounded), InvalidArgument);
}

TEST_CASE("property: bounded expansion is onto exactly 0..U") {
  for (std::int64_t U = 0; U <= 40; ++U) {
    const auto c = expansion_coefficients(U, ExpansionScheme::bounded);
    std::set<std::int64_t> reach;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << c.size()); ++m) {
      std::int64_t v = 0;
      for (std::size_t k = 0; k < c.size(); ++k) {
        if ((m >> k) & 1) v += c[k];
      }
      reach.insert(v);
    }
    CHECK(reach.size() == static_cast<std::size_t>(U + 1));
    CHECK(*reach.begin() == 0);
    CHECK(*reach.rbegin() == U);
  }
}

TEST_CASE("binary_expand decodes within bounds") {
  PolyIntProgram p = PolyIntProgram::empty(3, {5, 1, 0});
  p.L = {1, 1, 1};
  auto [bin, map] = binary_expand(p);
  CHECK(bin.nVars == 4);
  CHECK(map.integerBits[2].empty());
  for (std::uint64_t i = 0; i < 16; ++i) {
    const auto y = map.decode(assignment_from_index(i, 4));
    CHECK(y[0] >= 0);
    CHECK(y[0] <= 5);
    CHECK(y[2] == 0);
  }
}

TEST_CASE("linearization penalty on all triples") {
  const std::int64_t p = 7;
  CHECK(linearization_penalty(p, true, true, true) == 0);
  CHECK(linearization_penalty(p, true, true, false) == p);
  CHECK(linearization_penalty(p, false, false, true) == 3 * p);
  for (int m = 0; m < 8; ++m) {
    const bool a = m & 1, b = m & 2, w = m & 4;
    const auto v = linearization_penalty(p, a, b, w);
    if (w == (a && b)) {
      CHECK(v == 0);
    } else {
      CHECK(v >= p);
    }
  }
  PolyIntProgram q = PolyIntProgram::empty(2, {1, 1});
  CHECK_THROWS_AS(linearize_quadratic_constraints(q, 0), InvalidArgument);
}

TEST_CASE("linearize replaces products with fresh binaries") {
  PolyIntProgram p = PolyIntProgram::empty(2, {1, 1});
  QuadConstraint c{IntMatrix(2, 2, {0, 1, 0, 0}), {0, 0}, 1};
  p.equalities.push_back(c);
  auto [lin, products] = linearize_quadratic_constraints(p, 5);
  REQUIRE(products.size() == 1);
  CHECK(products[0].w == 2);
  CHECK(lin.equalities[0].l == std::vector<std::int64_t>{0, 0, 1});
  CHECK(lin.equalities[0].q == IntMatrix(3, 3));
}

TEST_CASE("gadgetize: binary linear program only folds L") {
  PolyIntProgram p = PolyIntProgram::empty(2, {1, 1});
  p.Q = IntMatrix(2, 2, {0, 3, 0, 0});
  p.L = {-2, 4};
  p.equalities.push_back(linear_con({1, 1}, 1));
  auto [l, map] = gadgetize(p, 1);
  CHECK(l.n() == 2);
  CHECK(l.Q() == IntMatrix(2, 2, {-2, 3, 0, 4}));
  CHECK(l.A() == IntMatrix(1, 2, {1, 1}));
  CHECK(map.products.empty());
}

TEST_CASE("gadgetize: two-asset portfolio with w = 1") {
  ReturnStats st{{0.1, 0.2}, {{0.01, 0.0}, {0.0, 0.01}}};
  const PortfolioSpec ps = make_portfolio_spec(st, 1.0, 1);
  auto [l, map] = gadgetize(portfolio_program(ps), 1);
  CHECK(l.n() == 2);
  CHECK(l.m() == 1);
  CHECK(l.A() == IntMatrix(1, 2, {1, 1}));
  CHECK(l.b() == std::vector<std::int64_t>{1});
}

TEST_CASE("gadgetize: inequality plus U = 3 integer") {
  PolyIntProgram p = PolyIntProgram::empty(2, {3, 1});
  p.Q = IntMatrix(2, 2, {1, -2, 0, 0});
  p.L = {-4, 1};
  p.inequalities.push_back(linear_con({1, 2}, 2));
  auto [l, map] = gadgetize(p, 1);
  const auto direct = oracle::int_optimum(to_oracle(p));
  REQUIRE(direct);
  CHECK(lcbo_optimum(l) == direct);
}

TEST_CASE("property: random gadgetization round-trips") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> coef(-3, 3), ub(1, 7), nv(1, 3), small(-1, 2);
  int checked = 0;
  for (int t = 0; t < 80; ++t) {
    const std::size_t n = nv(rng);
    std::vector<std::int64_t> U(n);
    for (auto& u : U) u = ub(rng);
    PolyIntProgram p = PolyIntProgram::empty(n, U);
    for (std::size_t i = 0; i < n; ++i) {
      p.L[i] = coef(rng);
      for (std::size_t j = i; j < n; ++j) p.Q(i, j) = coef(rng);
    }
    QuadConstraint ineq{IntMatrix(n, n), std::vector<std::int64_t>(n), 0};
    for (std::size_t i = 0; i < n; ++i) {
      ineq.l[i] = small(rng);
      if (n > 1 && i + 1 < n) ineq.q(i, i + 1) = small(rng) > 1 ? 1 : 0;
    }
    ineq.b = 1;
    p.inequalities.push_back(ineq);
    const auto direct = oracle::int_optimum(to_oracle(p));
    if (!direct) continue;
    auto [l, map] = gadgetize(p, 1);
    if (l.n() > 20) continue;
    CHECK(lcbo_optimum(l) == direct);
    ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("encode then decode returns the original values") {
  PolyIntProgram p = PolyIntProgram::empty(2, {6, 3});
  p.inequalities.push_back(linear_con({1, 1}, 2));
  auto [l, map] = gadgetize(p, 1);
  for (std::int64_t a = 0; a <= 6; ++a) {
    for (std::int64_t b = 0; b <= 3; ++b) {
      const std::vector<std::int64_t> y{a, b};
      if (a + b < 2) {
        CHECK_THROWS_AS(map.encode(y), InvalidArgument);
        continue;
      }
      const Assignment x = map.encode(y);
      CHECK(is_feasible(l, x));
      const auto back = map.decode(x);
      CHECK(back[0] == a);
      CHECK(back[1] == b);
      CHECK(back[2] == a + b - 2);
      CHECK(objective_value(l, x) == p.objective(y));
    }
  }
}
