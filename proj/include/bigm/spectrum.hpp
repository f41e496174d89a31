#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bigm/model.hpp"

namespace bigm {

// Diagonal Hamiltonian  constant + sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j
// whose eigenvalue on |x> equals the QUBO value at x (divided by scale),
// under x_i = (1 - z_i) / 2.
struct IsingHamiltonian {
  struct Coupling {
    std::size_t i;
    std::size_t j;
    double value;
  };
  std::size_t n = 0;
  std::vector<double> h;
  std::vector<Coupling> J;  // i < j, nonzero only
  double constant = 0.0;
  // "objective", "constraint" or "combined(M)".
  std::string provenance;

  double energy(const Assignment& x) const;
  // Energies of all 2^n basis states, index bit i = x_i.
  std::vector<double> diagonal() const;
};

IsingHamiltonian ising_encode(const Qubo& qubo, std::string provenance = "combined");
// H_f + M H_c for an instance.
IsingHamiltonian ising_hamiltonian(const Lcbo& lcbo, std::int64_t M);

struct SpectrumReport {
  std::int64_t M = 0;
  // Exact energies on the integer grid; the doubles below divide by scale.
  std::int64_t e0Int = 0;
  std::int64_t e1Int = 0;
  std::int64_t emaxInt = 0;
  double E0 = 0.0;
  double E1 = 0.0;
  double Emax = 0.0;
  std::uint64_t groundDegeneracy = 0;
  double deltaM = 0.0;
  std::optional<double> delta0;
  double EmaxF = 0.0;
  double EmaxC = 0.0;
  double normHc = 0.0;

  // Filled by check_observation3.
  std::optional<std::int64_t> fStar;
  std::optional<std::int64_t> mStar;
  bool exact = false;
  bool deltaWithinGap = false;
  bool boundIHolds = false;
  bool boundIIHolds = false;
  bool boundIIIHolds = false;
  double boundIIIRhs = 0.0;
  // Same ratio against ((M - M*) normHc + delta) / (EmaxF - E0), which
  // follows from exactness at M* without assuming unit penalties.
  bool boundIIICorrectedHolds = false;
};

SpectrumReport full_spectrum(const Lcbo& lcbo, std::int64_t M, std::size_t limit = kDefaultBruteForceLimit);

// (f(x*_1) - f(x*)) / (max feasible f - f(x*)); empty when undefined.
std::optional<double> delta0(const Lcbo& lcbo, std::size_t limit = kDefaultBruteForceLimit);

// Spectrum plus the three checks on exact reformulations. Preconditions
// (exactness, delta <= delta*) are recorded, not thrown; the bound flags are
// only meaningful when both hold.
SpectrumReport check_observation3(const Lcbo& lcbo, std::int64_t M, std::int64_t delta,
                                  std::size_t limit = kDefaultBruteForceLimit);

}  // namespace bigm
