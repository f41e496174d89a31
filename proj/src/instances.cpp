#include "bigm/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "bigm/error.hpp"

namespace bigm {
namespace {

std::int64_t nonzero_coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 19);
  const int k = pick(rng);
  return k < 10 ? k - 10 : k - 9;
}

std::vector<std::size_t> sample_columns(std::mt19937_64& rng, std::size_t first, std::size_t last, std::size_t count) {
  std::vector<std::size_t> cols(last - first);
  std::iota(cols.begin(), cols.end(), first);
  count = std::min(count, cols.size());
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, cols.size() - 1);
    std::swap(cols[i], cols[pick(rng)]);
  }
  cols.resize(count);
  std::sort(cols.begin(), cols.end());
  return cols;
}

std::uint64_t generator_node_budget(std::size_t n) {
  return std::uint64_t{1} << std::min<std::size_t>(n, 20);
}

double round_grid(double v, double scale) { return std::round(v * scale) / scale; }

}  // namespace

Lcbo gen_sparse_lcbo(std::size_t n, std::size_t s, std::uint64_t seed) {
  if (n == 0 || s < 1 || s > n) throw InvalidArgument("sparse generator needs 1 <= s <= n");
  const std::size_t m = std::max<std::size_t>(n / 5, 1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> rhs(-5, 5);
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    IntMatrix Q(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : sample_columns(rng, i, n, s)) Q(i, j) = nonzero_coefficient(rng);
    }
    IntMatrix A(m, n);
    std::vector<std::int64_t> b(m);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j : sample_columns(rng, 0, n, s)) A(r, j) = nonzero_coefficient(rng);
      b[r] = rhs(rng);
    }
    Lcbo lcbo = Lcbo::make(std::move(Q), std::move(A), std::move(b));
    if (find_feasible(lcbo, generator_node_budget(n))) return lcbo;
  }
  throw LimitError("no feasible sparse instance within the retry budget");
}

Lcbo gen_spp(std::size_t nSubsets, std::size_t mElements, double density, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("density must lie in (0, 1]");
  if (nSubsets == 0 || mElements == 0) throw InvalidArgument("SPP needs at least one subset and one element");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution member(density);
  std::uniform_int_distribution<std::int64_t> cost(1, 10);
  for (int attempt = 0; attempt < kGeneratorRetries; ++attempt) {
    IntMatrix A(mElements, nSubsets);
    for (std::size_t r = 0; r < mElements; ++r) {
      for (std::size_t j = 0; j < nSubsets; ++j) A(r, j) = member(rng) ? 1 : 0;
    }
    std::vector<std::int64_t> c(nSubsets);
    for (auto& v : c) v = cost(rng);
    Lcbo lcbo = Lcbo::make(IntMatrix::diagonal(c), std::move(A), std::vector<std::int64_t>(mElements, 1));
    if (find_feasible(lcbo, generator_node_budget(nSubsets))) return lcbo;
  }
  throw LimitError("no partitionable SPP instance within the retry budget");
}

ReturnStats compute_returns_mu_sigma(const PriceHistory& history) {
  const std::size_t T = history.steps();
  if (T < 1) throw InvalidArgument("price history needs at least two rows");
  const std::size_t N = history.prices.front().size();
  std::vector<std::vector<double>> r(T, std::vector<double>(N));
  for (std::size_t t = 1; t <= T; ++t) {
    if (history.prices[t].size() != N || history.prices[t - 1].size() != N) {
      throw DimensionError("price rows differ in length");
    }
    for (std::size_t a = 0; a < N; ++a) {
      const double prev = history.prices[t - 1][a];
      if (prev == 0.0) throw InvalidArgument("zero price encountered");
      r[t - 1][a] = (history.prices[t][a] - prev) / prev;
    }
  }
  ReturnStats s;
  s.mu.assign(N, 0.0);
  s.sigma.assign(N, std::vector<double>(N, 0.0));
  for (std::size_t a = 0; a < N; ++a) {
    double acc = 0.0;
    for (std::size_t t = 0; t < T; ++t) acc += r[t][a];
    s.mu[a] = acc / static_cast<double>(T);
  }
  // With a single return the sample covariance is undefined; it is left at zero.
  if (T >= 2) {
    for (std::size_t a = 0; a < N; ++a) {
      for (std::size_t b = a; b < N; ++b) {
        double acc = 0.0;
        for (std::size_t t = 0; t < T; ++t) acc += (r[t][a] - s.mu[a]) * (r[t][b] - s.mu[b]);
        s.sigma[a][b] = s.sigma[b][a] = round_grid(acc / static_cast<double>(T - 1), 1e4);
      }
    }
  }
  for (double& m : s.mu) m = round_grid(m, 1e4);
  return s;
}

PriceHistory read_price_csv(std::istream& in) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(std::remove_if(cell.begin(), cell.end(), [](char ch) { return ch == '\r' || ch == ' ' || ch == '"'; }),
                 cell.end());
      cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };

  PriceHistory h;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("price CSV is empty");
  const auto header = split(line);
  if (header.size() < 2) throw InvalidArgument("price CSV needs a date column and at least one asset");
  h.assets.assign(header.begin() + 1, header.end());

  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    std::vector<double> row;
    bool complete = cells.size() == header.size();
    for (std::size_t c = 1; complete && c < cells.size(); ++c) {
      if (cells[c].empty()) {
        complete = false;
        break;
      }
      try {
        row.push_back(std::stod(cells[c]));
      } catch (const std::exception&) {
        throw InvalidArgument("unparsable price '" + cells[c] + "'");
      }
      if (!(row.back() > 0.0)) throw InvalidArgument("prices must be positive");
    }
    if (complete) h.prices.push_back(std::move(row));
  }
  if (h.prices.size() < 2) throw InvalidArgument("price CSV needs at least two complete rows");
  return h;
}

PriceHistory synthetic_price_history(std::size_t assets, std::size_t steps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> drift(-0.005, 0.025);
  std::uniform_real_distribution<double> vol(0.03, 0.12);
  std::uniform_real_distribution<double> beta(0.2, 1.2);
  std::uniform_real_distribution<double> start(20.0, 200.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  PriceHistory h;
  std::vector<double> mu(assets), sd(assets), b(assets);
  std::vector<double> price(assets);
  for (std::size_t a = 0; a < assets; ++a) {
    h.assets.push_back("A" + std::to_string(a));
    mu[a] = drift(rng);
    sd[a] = vol(rng);
    b[a] = beta(rng);
    price[a] = start(rng);
  }
  h.prices.push_back(price);
  for (std::size_t t = 0; t < steps; ++t) {
    const double market = 0.04 * gauss(rng);
    for (std::size_t a = 0; a < assets; ++a) {
      const double ret = mu[a] + b[a] * market + sd[a] * gauss(rng);
      price[a] = std::max(0.01, price[a] * (1.0 + ret));
    }
    h.prices.push_back(price);
  }
  return h;
}

std::vector<double> PortfolioSpec::mu() const {
  std::vector<double> out;
  for (std::int64_t v : muTilde) out.push_back(static_cast<double>(v) / (static_cast<double>(scale) * budget()));
  return out;
}

std::vector<std::vector<double>> PortfolioSpec::sigma() const {
  const double denom = static_cast<double>(scale) * gamma * static_cast<double>(budget() * budget());
  std::vector<std::vector<double>> out;
  for (const auto& row : gammaSigmaTilde) {
    std::vector<double> r;
    for (std::int64_t v : row) r.push_back(gamma == 0.0 ? 0.0 : static_cast<double>(v) / denom);
    out.push_back(std::move(r));
  }
  return out;
}

void PortfolioSpec::validate() const {
  const std::size_t n = muTilde.size();
  if (n == 0) throw InvalidArgument("portfolio needs at least one asset");
  if (w < 1 || w > 20) throw InvalidArgument("partition number must lie in [1, 20]");
  if (gammaSigmaTilde.size() != n) throw DimensionError("covariance must be N x N");
  for (const auto& row : gammaSigmaTilde) {
    if (row.size() != n) throw DimensionError("covariance must be N x N");
  }
  if (gamma < 0) throw InvalidArgument("risk aversion must be non-negative");
  if (scale < 1) throw InvalidArgument("scale must be at least 1");
}

std::int64_t PortfolioSpec::grid_scale() const { return checked::mul(scale, checked::mul(budget(), budget())); }

std::int64_t PortfolioSpec::objective_int(std::span<const std::int64_t> x) const {
  const std::size_t n = assets();
  if (x.size() != n) throw DimensionError("portfolio vector has the wrong length");
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total = checked::sub(total, checked::mul(checked::mul(budget(), muTilde[i]), x[i]));
    for (std::size_t j = 0; j < n; ++j) {
      total = checked::add(total, checked::mul(gammaSigmaTilde[i][j], checked::mul(x[i], x[j])));
    }
  }
  return total;
}

double PortfolioSpec::objective(std::span<const std::int64_t> x) const {
  return static_cast<double>(objective_int(x)) / static_cast<double>(grid_scale());
}

PortfolioSpec make_portfolio_spec(const ReturnStats& stats, double gamma, unsigned w, std::int64_t scale) {
  PortfolioSpec spec;
  spec.gamma = gamma;
  spec.w = w;
  spec.scale = scale;
  const double s = static_cast<double>(scale);
  for (double m : stats.mu) spec.muTilde.push_back(std::llround(m * s));
  for (const auto& row : stats.sigma) {
    std::vector<std::int64_t> r;
    for (double v : row) r.push_back(std::llround(gamma * v * s));
    spec.gammaSigmaTilde.push_back(std::move(r));
  }
  spec.validate();
  return spec;
}

PortfolioSpec gen_portfolio_spec(std::size_t assets, unsigned w, double gamma, std::uint64_t seed) {
  return make_portfolio_spec(compute_returns_mu_sigma(synthetic_price_history(assets, 24, seed)), gamma, w);
}

PolyIntProgram portfolio_program(const PortfolioSpec& spec) {
  spec.validate();
  const std::size_t n = spec.assets();
  PolyIntProgram p = PolyIntProgram::empty(n, std::vector<std::int64_t>(n, spec.budget()));
  p.scale = spec.grid_scale();
  for (std::size_t i = 0; i < n; ++i) {
    p.L[i] = checked::mul(-spec.budget(), spec.muTilde[i]);
    for (std::size_t j = 0; j < n; ++j) p.Q(i, j) = spec.gammaSigmaTilde[i][j];
  }
  QuadConstraint budget{IntMatrix(n, n), std::vector<std::int64_t>(n, 1), spec.budget()};
  p.equalities.push_back(std::move(budget));
  return p;
}

std::pair<Lcbo, VariableMap> build_portfolio_lcbo(const PortfolioSpec& spec) {
  // Only linear constraints and no inequalities: gadgetization reduces to
  // binary expansion plus folding the linear term onto the diagonal.
  return gadgetize(portfolio_program(spec), 1);
}

std::vector<std::int64_t> greedy_portfolio(const PortfolioSpec& spec) {
  spec.validate();
  const std::size_t n = spec.assets();
  std::vector<std::int64_t> x(n, 0);
  for (std::int64_t unit = 0; unit < spec.budget(); ++unit) {
    std::size_t bestAsset = 0;
    std::int64_t bestValue = 0;
    for (std::size_t k = 0; k < n; ++k) {
      ++x[k];
      const std::int64_t v = spec.objective_int(x);
      --x[k];
      if (k == 0 || v < bestValue) {
        bestAsset = k;
        bestValue = v;
      }
    }
    ++x[bestAsset];
  }
  return x;
}

FeasibleSearch find_feasible_search(const Lcbo& lcbo, std::uint64_t nodeBudget) {
  if (nodeBudget == 0) throw InvalidArgument("node budget must be positive");
  const std::size_t n = lcbo.n();
  const std::size_t m = lcbo.m();
  const IntMatrix& A = lcbo.A();

  // Reachable range of sum_{j >= d} A_rj x_j, indexed [d * m + r].
  std::vector<std::int64_t> lo((n + 1) * m, 0), hi((n + 1) * m, 0);
  for (std::size_t d = n; d-- > 0;) {
    for (std::size_t r = 0; r < m; ++r) {
      const std::int64_t a = A(r, d);
      lo[d * m + r] = checked::add(lo[(d + 1) * m + r], std::min<std::int64_t>(a, 0));
      hi[d * m + r] = checked::add(hi[(d + 1) * m + r], std::max<std::int64_t>(a, 0));
    }
  }

  FeasibleSearch out;
  Assignment x(n, 0);
  std::vector<std::int64_t> need(lcbo.b());  // b - A x over the fixed prefix

  auto viable = [&](std::size_t d) {
    for (std::size_t r = 0; r < m; ++r) {
      if (need[r] < lo[d * m + r] || need[r] > hi[d * m + r]) return false;
    }
    return true;
  };

  // Explicit stack of (depth, next value to try); value 2 means exhausted.
  std::vector<std::uint8_t> next(n + 1, 1);
  bool found = false;
  std::size_t d = 0;
  if (!viable(0)) {
    out.nodes = 1;
    return out;
  }
  if (n == 0) {
    out.nodes = 1;
    out.point = x;
    return out;
  }
  next[0] = 1;
  while (true) {
    if (out.nodes >= nodeBudget) break;
    if (next[d] == 2) {
      // Backtrack: undo x_{d-1}.
      if (d == 0) break;
      --d;
      if (x[d]) {
        for (std::size_t r = 0; r < m; ++r) need[r] += A(r, d);
        x[d] = 0;
      }
      continue;
    }
    const std::uint8_t v = next[d];
    next[d] = v == 1 ? 0 : 2;
    x[d] = v;
    if (v) {
      for (std::size_t r = 0; r < m; ++r) need[r] -= A(r, d);
    }
    if (!viable(d + 1)) {
      ++out.nodes;
      if (v) {
        for (std::size_t r = 0; r < m; ++r) need[r] += A(r, d);
        x[d] = 0;
      }
      continue;
    }
    if (d + 1 == n) {
      ++out.nodes;
      found = true;
      break;
    }
    ++d;
    next[d] = 1;
  }
  if (!found) return out;

  // Greedy descent over single flips that keep Ax = b.
  std::int64_t fx = objective_value(lcbo, x);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      bool keeps = true;
      for (std::size_t r = 0; r < m && keeps; ++r) keeps = A(r, i) == 0;
      if (!keeps) continue;
      x[i] ^= 1;
      const std::int64_t fy = objective_value(lcbo, x);
      if (fy < fx) {
        fx = fy;
        improved = true;
      } else {
        x[i] ^= 1;
      }
    }
  }
  out.point = std::move(x);
  return out;
}

std::optional<Assignment> find_feasible(const Lcbo& lcbo, std::uint64_t nodeBudget) {
  return find_feasible_search(lcbo, nodeBudget).point;
}

}  // namespace bigm
