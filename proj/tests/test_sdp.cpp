#include <doctest.h>

#include <algorithm>
#include <random>

#include "bigm/error.hpp"
#include "bigm/instances.hpp"
#include "bigm/sdp.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace bigm;

namespace {

Lcbo unconstrained(IntMatrix Q) {
  const std::size_t n = Q.rows();
  return Lcbo::make(std::move(Q), IntMatrix(0, n), {});
}

}  // namespace

TEST_CASE("build_relaxation layout") {
  const SdpProblem a = build_relaxation(unconstrained(IntMatrix(1, 1, {-1})));
  REQUIRE(a.dim() == 2);
  CHECK(a.Qtilde(0, 0) == 0.0);
  CHECK(a.Qtilde(0, 1) == -0.5);
  CHECK(a.Qtilde(1, 0) == -0.5);
  CHECK(a.Qtilde(1, 1) == 0.0);

  CHECK(build_relaxation(unconstrained(IntMatrix(3, 3))).Qtilde.isZero());

  const SdpProblem b = build_relaxation(unconstrained(IntMatrix::diagonal(std::vector<std::int64_t>{-2, -1})));
  CHECK(b.Qtilde(0, 0) == 0.0);
  CHECK(b.Qtilde(0, 1) == -1.0);
  CHECK(b.Qtilde(0, 2) == -0.5);

  const SdpProblem c = build_relaxation(unconstrained(IntMatrix(2, 2, {0, 4, 0, 0})));
  CHECK(c.Qtilde(1, 2) == 2.0);
  CHECK(c.Qtilde(2, 1) == 2.0);
  CHECK(c.enforceY11);
  CHECK_FALSE(build_relaxation(unconstrained(IntMatrix(2, 2)), true).enforceY11);
}

TEST_CASE("solve examples") {
  const SdpResult a = solve(build_relaxation(unconstrained(IntMatrix(1, 1, {-1}))));
  CHECK(a.status == SdpStatus::converged);
  CHECK(a.primalValue == doctest::Approx(-1.0).epsilon(1e-5));

  const SdpResult z = solve(build_relaxation(unconstrained(IntMatrix(3, 3))));
  CHECK(z.primalValue == doctest::Approx(0.0));

  const SdpResult d = solve(build_relaxation(unconstrained(IntMatrix::diagonal(std::vector<std::int64_t>{-2, -1}))));
  CHECK(d.primalValue == doctest::Approx(-3.0).epsilon(1e-5));
  CHECK(d.certifiedLowerBound <= d.primalValue + 1e-6);
}

TEST_CASE("certified_lower_bound examples") {
  const Lcbo d = unconstrained(IntMatrix::diagonal(std::vector<std::int64_t>{-2, -1}));
  CHECK(certified_lower_bound(d, solve(build_relaxation(d))) == -3);
  const Lcbo pos = unconstrained(IntMatrix(2, 2, {1, 3, 0, 2}));
  CHECK(certified_lower_bound(pos, solve(build_relaxation(pos))) == 0);
  CHECK(trivial_lower_bound(Lcbo::make(IntMatrix(2, 2, {-1, -4, 0, 2}), IntMatrix(0, 2), {})) == -5);
}

TEST_CASE("a failed solve degrades to the trivial bound") {
  const Lcbo l = unconstrained(IntMatrix(2, 2, {-1, -4, 0, 2}));
  SdpResult bogus;
  bogus.status = SdpStatus::failed;
  bogus.certifiedLowerBound = 100.0;
  CHECK(certified_lower_bound(l, bogus) == -5);
}

TEST_CASE("property: certified bound never exceeds the unconstrained minimum") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 80; ++t) {
    const std::size_t n = 2 + t % 13;
    const Lcbo l = t % 2 ? testing_util::random_lcbo(rng, n, 1, 10) : gen_sparse_lcbo(n, std::min<std::size_t>(5, n), 4000 + t);
    const SdpResult r = solve(build_relaxation(l));
    const auto bound = certified_lower_bound(l, r);
    CHECK(bound <= oracle::solve(oracle::from(l)).fMin);
    CHECK(bound >= trivial_lower_bound(l));
  }
}

TEST_CASE("property: enforcing Y00 = 1 never weakens a converged bound") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 20; ++t) {
    const Lcbo l = testing_util::random_lcbo(rng, 3 + t % 6, 1, 6);
    const SdpResult tight = solve(build_relaxation(l));
    const SdpResult loose = solve(build_relaxation(l, true));
    if (tight.status == SdpStatus::converged && loose.status == SdpStatus::converged) {
      CHECK(tight.primalValue >= loose.primalValue - 1e-4);
      CHECK(certified_lower_bound(l, tight) >= certified_lower_bound(l, loose));
    }
  }
}

TEST_CASE("PSD projection is idempotent and clips negative eigenvalues") {
  Eigen::MatrixXd m(3, 3);
  m << 2, 1, 0, 1, -1, 0.5, 0, 0.5, 1;
  const Eigen::MatrixXd p = project_psd(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  CHECK((project_psd(p) - p).norm() < 1e-10);
  const Eigen::MatrixXd psd = Eigen::MatrixXd::Identity(4, 4) * 0.3 + Eigen::MatrixXd::Ones(4, 4) * 0.1;
  CHECK((project_psd(psd) - psd).norm() < 1e-10);
}

TEST_CASE("result matrix is symmetric PSD and satisfies the lifting constraints") {
  const Lcbo l = gen_sparse_lcbo(10, 5, 77);
  const SdpResult r = solve(build_relaxation(l));
  REQUIRE(r.status == SdpStatus::converged);
  CHECK((r.Y - r.Y.transpose()).norm() < 1e-8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.Y);
  CHECK(es.eigenvalues().minCoeff() >= -1e-5);
  CHECK(r.Y(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
  for (Eigen::Index i = 1; i < r.Y.rows(); ++i) CHECK(std::abs(r.Y(0, i) - r.Y(i, i)) < 1e-5);
  CHECK(r.primalResidual < 1e-6);
  CHECK(r.dualResidual < 1e-6);
}

TEST_CASE("residuals trend downwards") {
  // Median over instances of residual(10k) / residual(k) must not exceed 1.
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Lcbo l = gen_sparse_lcbo(12, 5, 500 + seed);
    SdpConfig cfg;
    cfg.recordHistory = true;
    const SdpResult r = solve(build_relaxation(l), cfg);
    const std::size_t k = 10;
    if (r.history.size() <= 10 * k) continue;
    const auto res = [&](std::size_t i) { return std::max(r.history[i - 1].primal, r.history[i - 1].dual); };
    ratios.push_back(res(10 * k) / std::max(res(k), 1e-300));
  }
  REQUIRE(ratios.size() >= 6);
  std::sort(ratios.begin(), ratios.end());
  CHECK(ratios[ratios.size() / 2] <= 1.0);
}

TEST_CASE("solver reports maxIter without throwing") {
  SdpConfig cfg;
  cfg.maxIter = 3;
  const Lcbo l = gen_sparse_lcbo(12, 5, 1);
  const SdpResult r = solve(build_relaxation(l), cfg);
  CHECK(r.status == SdpStatus::maxIter);
  CHECK(r.iterations == 3);
  CHECK(certified_lower_bound(l, r) <= oracle::solve(oracle::from(l)).fMin);
}

TEST_CASE("acceleration reaches the plain iteration's optimum in fewer iterations") {
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Lcbo l = gen_sparse_lcbo(12, 5, 900 + seed);
    SdpConfig plain;
    plain.andersonMemory = 0;
    const SdpResult a = solve(build_relaxation(l), plain);
    const SdpResult b = solve(build_relaxation(l));
    REQUIRE(a.status == SdpStatus::converged);
    REQUIRE(b.status == SdpStatus::converged);
    const double scale = 1.0 + std::abs(a.primalValue);
    CHECK(std::abs(a.primalValue - b.primalValue) < 1e-3 * scale);
    CHECK(std::abs(a.certifiedLowerBound - b.certifiedLowerBound) < 1e-3 * scale);
    ratios.push_back(static_cast<double>(b.iterations) / static_cast<double>(a.iterations));
  }
  std::sort(ratios.begin(), ratios.end());
  CHECK(ratios[ratios.size() / 2] < 1.0);
}

TEST_CASE("solver rejects a non-positive penalty parameter") {
  SdpConfig cfg;
  cfg.rho = 0.0;
  CHECK_THROWS_AS(solve(build_relaxation(unconstrained(IntMatrix(1, 1, {-1}))), cfg), InvalidArgument);
}
