#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bigm/gadgets.hpp"
#include "bigm/model.hpp"

namespace bigm {

struct PriceHistory {
  std::vector<std::string> assets;
  // (T+1) rows, one column per asset; all prices positive.
  std::vector<std::vector<double>> prices;
  std::string interval = "monthly";

  std::size_t steps() const { return prices.empty() ? 0 : prices.size() - 1; }
};

// Expected returns and covariance of per-step returns, before the
// partition-number rescaling, rounded to the 1e-4 grid.
struct ReturnStats {
  std::vector<double> mu;
  std::vector<std::vector<double>> sigma;
};

// Markowitz instance  minimize -mu^T x + gamma x^T Sigma x,  sum x = 2^w - 1.
// Stored on the integer grid: muTilde and gammaSigmaTilde are in units of
// 1/scale (before dividing by 2^w - 1 and (2^w - 1)^2 respectively).
struct PortfolioSpec {
  std::vector<std::int64_t> muTilde;
  std::vector<std::vector<std::int64_t>> gammaSigmaTilde;
  double gamma = 1.0;
  unsigned w = 1;
  std::int64_t scale = 10000;

  std::size_t assets() const { return muTilde.size(); }
  std::int64_t budget() const { return (std::int64_t{1} << w) - 1; }
  // mu = muTilde / (scale (2^w - 1)) etc., as real numbers.
  std::vector<double> mu() const;
  std::vector<std::vector<double>> sigma() const;

  // Objective in units of 1/(scale (2^w-1)^2):
  //   -(2^w-1) muTilde^T x + x^T (gamma SigmaTilde) x
  std::int64_t objective_int(std::span<const std::int64_t> x) const;
  double objective(std::span<const std::int64_t> x) const;
  std::int64_t grid_scale() const;
  void validate() const;
};

// From real-valued returns and covariance (before rescaling by 2^w - 1).
PortfolioSpec make_portfolio_spec(const ReturnStats& stats, double gamma, unsigned w, std::int64_t scale = 10000);

inline constexpr int kGeneratorRetries = 100;

// Sparse random LCBO: m = max(n/5, 1) rows, at most s nonzeros per row of Q
// (upper-triangular storage) and exactly min(s, n) per row of A. Nonzeros in
// {-10..10}\{0}, b in {-5..5}. Resampled until feasible.
Lcbo gen_sparse_lcbo(std::size_t n, std::size_t s, std::uint64_t seed);

// Set partitioning: A in {0,1}^{m x n} with Bernoulli(density) entries,
// b = 1, costs in {1..10} on the diagonal. Resampled until a partition exists.
Lcbo gen_spp(std::size_t nSubsets, std::size_t mElements, double density, std::uint64_t seed);

ReturnStats compute_returns_mu_sigma(const PriceHistory& history);

// Header row of tickers (first column is a date label and ignored), then one
// row of prices per step. Rows with missing values are rejected.
PriceHistory read_price_csv(std::istream& in);

// Geometric random walk with per-asset drift and volatility, for synthetic
// benchmark data when no price file is given.
PriceHistory synthetic_price_history(std::size_t assets, std::size_t steps, std::uint64_t seed);

// Random PortfolioSpec drawn from a synthetic 24-step price history.
PortfolioSpec gen_portfolio_spec(std::size_t assets, unsigned w, double gamma, std::uint64_t seed);

// Integer program (one bounded integer per asset) and its binary Lcbo.
PolyIntProgram portfolio_program(const PortfolioSpec& spec);
std::pair<Lcbo, VariableMap> build_portfolio_lcbo(const PortfolioSpec& spec);

// Allocates the 2^w - 1 units one at a time to the asset that lowers the
// objective most (lowest index on ties).
std::vector<std::int64_t> greedy_portfolio(const PortfolioSpec& spec);

struct FeasibleSearch {
  std::optional<Assignment> point;
  std::uint64_t nodes = 0;
};

// Depth-first search over x_0, x_1, ... (value 1 tried first) with interval
// pruning on every constraint, followed by feasibility-preserving single-bit
// improvement. `nodeBudget` counts leaves and pruned subtrees, so a budget of
// 2^n always suffices for a feasible instance.
FeasibleSearch find_feasible_search(const Lcbo& lcbo, std::uint64_t nodeBudget);
std::optional<Assignment> find_feasible(const Lcbo& lcbo, std::uint64_t nodeBudget);

}  // namespace bigm
