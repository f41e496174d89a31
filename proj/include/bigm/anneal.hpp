#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bigm/model.hpp"
#include "bigm/spectrum.hpp"

namespace bigm {

inline constexpr std::size_t kSimulatorLimit = 20;

class Statevector {
 public:
  using cplx = std::complex<double>;

  static Statevector uniform(std::size_t n);
  static Statevector basis(std::size_t n, std::uint64_t index);

  std::size_t n() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  double norm() const;
  std::vector<double> probabilities() const;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> amps_;
};

// Linear interpolation H(s) = (1 - s) H0 + s HP with H0 = -sum X_i,
// sampled at the step midpoints s_k = (k - 1/2) / steps.
struct AnnealConfig {
  double totalTime = 100.0;
  std::size_t steps = 10;
  std::size_t shots = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

// First-order Trotter evolution from the uniform superposition. Energies are
// used as given: no rescaling, so the penalty weight sets the physical scale.
Statevector trotter_evolve(const IsingHamiltonian& ising, const AnnealConfig& config,
                           std::size_t limit = kSimulatorLimit);
Statevector trotter_evolve(std::span<const double> energies, std::size_t n, const AnnealConfig& config,
                           std::size_t limit = kSimulatorLimit);

// Bitstring (character i = x_i) -> count.
using Counts = std::map<std::string, std::uint64_t>;

Counts sample(const Statevector& psi, std::size_t shots, std::uint64_t seed);

double success_probability(const Counts& counts, const Assignment& xStar);

// (f(x) - f(x_max)) / (f(x*) - f(x_max)) with x_max the worst feasible point;
// empty for unfeasible x or when all feasible values coincide.
std::optional<double> approximation_ratio(const Lcbo& lcbo, const BruteForceReport& bf, const Assignment& x);

struct RunResult {
  Counts counts;
  std::size_t shots = 0;
  // Fraction of shots landing on an optimal feasible point.
  double successProbability = 0.0;
  // Count-weighted mean over feasible outcomes; empty if none was feasible.
  std::optional<double> avgApproxRatio;
  double feasibleFraction = 0.0;
  // The same quantities from the exact final distribution.
  double exactSuccessProbability = 0.0;
  std::optional<double> exactAvgApproxRatio;
  std::size_t steps = 0;
  double totalTime = 0.0;
};

RunResult run_anneal(const Lcbo& lcbo, std::int64_t M, const AnnealConfig& config);

// Expected approximation ratio of a uniformly random feasible point.
std::optional<double> random_feasible_baseline(const Lcbo& lcbo);

// Trotter steps affordable under a two-qubit gate budget: one ZZ phase per
// nonzero coupling per step. At least one step.
std::size_t steps_for_budget(const IsingHamiltonian& ising, std::size_t twoQubitBudget);

}  // namespace bigm
