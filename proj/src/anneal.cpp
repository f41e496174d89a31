#include "bigm/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bigm/enumerate.hpp"
#include "bigm/error.hpp"
#include "bigm/simd/kernels.hpp"

namespace bigm {
namespace {

void require_simulable(std::size_t n, std::size_t limit) {
  if (n > limit) {
    throw LimitError("statevector of " + std::to_string(n) + " qubits exceeds the limit of " + std::to_string(limit));
  }
}

}  // namespace

Statevector Statevector::uniform(std::size_t n) {
  require_simulable(n, 30);
  Statevector s;
  s.n_ = n;
  const std::size_t dim = std::size_t{1} << n;
  s.amps_.assign(dim, cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  return s;
}

Statevector Statevector::basis(std::size_t n, std::uint64_t index) {
  require_simulable(n, 30);
  Statevector s;
  s.n_ = n;
  s.amps_.assign(std::size_t{1} << n, cplx(0.0, 0.0));
  if (index >= s.amps_.size()) throw InvalidArgument("basis index out of range");
  s.amps_[index] = 1.0;
  return s;
}

double Statevector::norm() const { return std::sqrt(simd::active().norm2(amps_.data(), amps_.size())); }

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  simd::active().probabilities(amps_.data(), p.data(), p.size());
  return p;
}

void AnnealConfig::validate() const {
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  if (!(totalTime >= 0.0) || !std::isfinite(totalTime)) throw InvalidArgument("total time must be finite and >= 0");
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
}

Statevector trotter_evolve(const IsingHamiltonian& ising, const AnnealConfig& config, std::size_t limit) {
  require_simulable(ising.n, limit);
  const std::vector<double> diag = ising.diagonal();
  return trotter_evolve(diag, ising.n, config, limit);
}

Statevector trotter_evolve(std::span<const double> energies, std::size_t n, const AnnealConfig& config,
                           std::size_t limit) {
  config.validate();
  require_simulable(n, limit);
  if (energies.size() != (std::size_t{1} << n)) throw DimensionError("energy table must have 2^n entries");

  Statevector psi = Statevector::uniform(n);
  const auto& kern = simd::active();
  const double dt = config.totalTime / static_cast<double>(config.steps);
  std::vector<double> re(energies.size()), im(energies.size());
  auto amps = psi.amplitudes();
  for (std::size_t k = 1; k <= config.steps; ++k) {
    const double s = (static_cast<double>(k) - 0.5) / static_cast<double>(config.steps);
    // exp(-i dt s H_P)
    for (std::size_t i = 0; i < energies.size(); ++i) {
      const double phase = dt * s * energies[i];
      re[i] = std::cos(phase);
      im[i] = -std::sin(phase);
    }
    kern.phase_mul(amps.data(), re.data(), im.data(), amps.size());
    // exp(-i dt (1 - s) H_0) = prod_q exp(i dt (1 - s) X_q)
    const double b = dt * (1.0 - s);
    const double c = std::cos(b), sn = std::sin(b);
    for (unsigned q = 0; q < n; ++q) kern.rx(amps.data(), amps.size(), q, c, sn);
  }
  return psi;
}

Counts sample(const Statevector& psi, std::size_t shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  const std::vector<double> p = psi.probabilities();
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = acc += p[i];

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> hits(p.size(), 0);
  for (std::size_t s = 0; s < shots; ++s) {
    // 53-bit uniform in [0, total)
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= p.size()) idx = p.size() - 1;
    // Skip zero-probability entries that share the cumulative value.
    while (p[idx] == 0.0 && idx + 1 < p.size()) ++idx;
    ++hits[idx];
  }
  Counts counts;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i]) counts[to_bitstring(assignment_from_index(i, psi.n()))] = hits[i];
  }
  return counts;
}

double success_probability(const Counts& counts, const Assignment& xStar) {
  std::uint64_t total = 0;
  for (const auto& [bits, c] : counts) total += c;
  if (total == 0) return 0.0;
  const auto it = counts.find(to_bitstring(xStar));
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
}

std::optional<double> approximation_ratio(const Lcbo& lcbo, const BruteForceReport& bf, const Assignment& x) {
  if (!is_feasible(lcbo, x)) return std::nullopt;
  if (bf.fMaxFeasible == bf.fStar) return std::nullopt;
  return static_cast<double>(objective_value(lcbo, x) - bf.fMaxFeasible) /
         static_cast<double>(bf.fStar - bf.fMaxFeasible);
}

RunResult run_anneal(const Lcbo& lcbo, std::int64_t M, const AnnealConfig& config) {
  config.validate();
  require_simulable(lcbo.n(), kSimulatorLimit);
  const BruteForceReport bf = brute_force_solve(lcbo);
  const std::vector<std::int64_t> f = qubo_table(objective_form(lcbo));
  const std::vector<std::int64_t> pen = qubo_table(penalty_form(lcbo));

  const IsingHamiltonian H = ising_hamiltonian(lcbo, M);
  const Statevector psi = trotter_evolve(H, config);
  const std::vector<double> prob = psi.probabilities();

  RunResult r;
  r.shots = config.shots;
  r.steps = config.steps;
  r.totalTime = config.totalTime;
  r.counts = sample(psi, config.shots, config.seed);

  const bool ratioDefined = bf.fMaxFeasible != bf.fStar;
  auto ratio = [&](std::int64_t fx) {
    return static_cast<double>(fx - bf.fMaxFeasible) / static_cast<double>(bf.fStar - bf.fMaxFeasible);
  };

  double feasibleMass = 0.0, ratioMass = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (pen[i] != 0) continue;
    feasibleMass += prob[i];
    if (f[i] == bf.fStar) r.exactSuccessProbability += prob[i];
    if (ratioDefined) ratioMass += prob[i] * ratio(f[i]);
  }
  if (ratioDefined && feasibleMass > 0) r.exactAvgApproxRatio = ratioMass / feasibleMass;

  std::uint64_t feasibleShots = 0, optimalShots = 0;
  double ratioSum = 0.0;
  for (const auto& [bits, c] : r.counts) {
    const std::uint64_t idx = assignment_index(from_bitstring(bits));
    if (pen[idx] != 0) continue;
    feasibleShots += c;
    if (f[idx] == bf.fStar) optimalShots += c;
    if (ratioDefined) ratioSum += static_cast<double>(c) * ratio(f[idx]);
  }
  const auto shots = static_cast<double>(config.shots);
  r.successProbability = static_cast<double>(optimalShots) / shots;
  r.feasibleFraction = static_cast<double>(feasibleShots) / shots;
  if (ratioDefined && feasibleShots > 0) r.avgApproxRatio = ratioSum / static_cast<double>(feasibleShots);
  return r;
}

std::optional<double> random_feasible_baseline(const Lcbo& lcbo) {
  const BruteForceReport bf = brute_force_solve(lcbo);
  if (bf.fMaxFeasible == bf.fStar) return std::nullopt;
  const Qubo f = objective_form(lcbo);
  const Qubo pen = penalty_form(lcbo);
  double sum = 0.0;
  BlockEnumerator e({&f, &pen});
  e.run([&](std::uint64_t, std::span<const std::span<const std::int64_t>> v) {
    for (std::size_t i = 0; i < v[0].size(); ++i) {
      if (v[1][i] == 0) sum += static_cast<double>(v[0][i] - bf.fMaxFeasible);
    }
  });
  return sum / static_cast<double>(bf.feasibleCount) / static_cast<double>(bf.fStar - bf.fMaxFeasible);
}

std::size_t steps_for_budget(const IsingHamiltonian& ising, std::size_t twoQubitBudget) {
  const std::size_t perStep = std::max<std::size_t>(ising.J.size(), 1);
  return std::max<std::size_t>(twoQubitBudget / perStep, 1);
}

}  // namespace bigm
