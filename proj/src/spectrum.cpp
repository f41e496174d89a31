#include "bigm/spectrum.hpp"

#include <algorithm>
#include <limits>

#include "bigm/enumerate.hpp"
#include "bigm/error.hpp"
#include "bigm/penalty.hpp"
#include "bigm/simd/kernels.hpp"

namespace bigm {
namespace {

struct Extremes {
  __int128 e0 = 0, e1 = 0, emax = 0;
  bool hasE1 = false;
  std::uint64_t degeneracy = 0;
  std::int64_t fMax = 0;
  std::int64_t penMax = 0;
};

Extremes scan(const Lcbo& lcbo, std::int64_t M, std::size_t limit) {
  require_enumerable(lcbo.n(), limit);
  const Qubo f = objective_form(lcbo);
  const Qubo pen = penalty_form(lcbo);
  Extremes x;
  x.e0 = std::numeric_limits<__int128>::max();
  x.emax = std::numeric_limits<__int128>::min();
  x.fMax = std::numeric_limits<std::int64_t>::min();
  x.penMax = 0;
  const __int128 m = M;
  BlockEnumerator e({&f, &pen});
  const auto& kern = simd::active();
  e.run([&](std::uint64_t, std::span<const std::span<const std::int64_t>> v) {
    const auto fv = v[0];
    const auto pv = v[1];
    std::int64_t lo, hi;
    kern.minmax_i64(fv.data(), fv.size(), &lo, &hi);
    x.fMax = std::max(x.fMax, hi);
    kern.minmax_i64(pv.data(), pv.size(), &lo, &hi);
    x.penMax = std::max(x.penMax, hi);
    for (std::size_t i = 0; i < fv.size(); ++i) {
      const __int128 E = fv[i] + m * pv[i];
      x.emax = std::max(x.emax, E);
      if (E < x.e0) {
        if (x.degeneracy > 0) {
          x.e1 = x.e0;
          x.hasE1 = true;
        }
        x.e0 = E;
        x.degeneracy = 1;
      } else if (E == x.e0) {
        ++x.degeneracy;
      } else if (!x.hasE1 || E < x.e1) {
        x.e1 = E;
        x.hasE1 = true;
      }
    }
  });
  return x;
}

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw OverflowError("energy exceeds the 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

double IsingHamiltonian::energy(const Assignment& x) const {
  if (x.size() != n) throw DimensionError("assignment length differs from the qubit count");
  auto z = [&](std::size_t i) { return x[i] ? -1.0 : 1.0; };
  double e = constant;
  for (std::size_t i = 0; i < n; ++i) e += h[i] * z(i);
  for (const auto& c : J) e += c.value * z(c.i) * z(c.j);
  return e;
}

std::vector<double> IsingHamiltonian::diagonal() const {
  if (n >= 40) throw LimitError("diagonal too large to materialize");
  // Setting x_k = 1 on top of lower bits x (higher bits still 0) changes the energy by
  //   -2 h_k - 2 sum_{j!=k} J_jk + 4 sum_{j<k} J_jk x_j,
  // a linear function of the lower bits.
  std::vector<std::vector<double>> lower(n);
  std::vector<double> base(n);
  for (std::size_t k = 0; k < n; ++k) {
    lower[k].assign(k, 0.0);
    base[k] = -2.0 * h[k];
  }
  double e0 = constant;
  for (double v : h) e0 += v;
  for (const auto& c : J) {
    const std::size_t lo = std::min(c.i, c.j), hi = std::max(c.i, c.j);
    lower[hi][lo] += 4.0 * c.value;
    base[hi] -= 2.0 * c.value;
    base[lo] -= 2.0 * c.value;
    e0 += c.value;
  }
  std::vector<double> out(std::size_t{1} << n);
  out[0] = e0;
  const auto& kern = simd::active();
  std::vector<double> delta;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t half = std::size_t{1} << k;
    delta.resize(half);
    linear_table(delta, base[k], lower[k]);
    kern.sum_f64(out.data() + half, out.data(), delta.data(), half);
  }
  return out;
}

IsingHamiltonian ising_encode(const Qubo& qubo, std::string provenance) {
  IsingHamiltonian H;
  H.n = qubo.n;
  H.h.assign(qubo.n, 0.0);
  H.provenance = std::move(provenance);
  const double s = static_cast<double>(qubo.scale);
  double constant = static_cast<double>(qubo.offset);
  std::vector<std::vector<double>> J(qubo.n, std::vector<double>(qubo.n, 0.0));
  for (std::size_t i = 0; i < qubo.n; ++i) {
    for (std::size_t j = 0; j < qubo.n; ++j) {
      const auto q = static_cast<double>(qubo.Qp(i, j));
      if (q == 0.0) continue;
      if (i == j) {
        // q x = q/2 - (q/2) z
        constant += 0.5 * q;
        H.h[i] -= 0.5 * q;
      } else {
        // q x_i x_j = q/4 (1 - z_i - z_j + z_i z_j)
        constant += 0.25 * q;
        H.h[i] -= 0.25 * q;
        H.h[j] -= 0.25 * q;
        J[std::min(i, j)][std::max(i, j)] += 0.25 * q;
      }
    }
  }
  H.constant = constant / s;
  for (double& v : H.h) v /= s;
  for (std::size_t i = 0; i < qubo.n; ++i) {
    for (std::size_t j = i + 1; j < qubo.n; ++j) {
      if (J[i][j] != 0.0) H.J.push_back({i, j, J[i][j] / s});
    }
  }
  return H;
}

IsingHamiltonian ising_hamiltonian(const Lcbo& lcbo, std::int64_t M) {
  return ising_encode(qubo_from_lcbo(lcbo, M), "combined(" + std::to_string(M) + ")");
}

SpectrumReport full_spectrum(const Lcbo& lcbo, std::int64_t M, std::size_t limit) {
  if (M < 0) throw InvalidArgument("M must be non-negative");
  const Extremes x = scan(lcbo, M, limit);
  const double s = static_cast<double>(lcbo.scale());
  SpectrumReport r;
  r.M = M;
  r.e0Int = narrow(x.e0);
  r.e1Int = narrow(x.hasE1 ? x.e1 : x.e0);
  r.emaxInt = narrow(x.emax);
  r.E0 = static_cast<double>(r.e0Int) / s;
  r.E1 = static_cast<double>(r.e1Int) / s;
  r.Emax = static_cast<double>(r.emaxInt) / s;
  r.groundDegeneracy = x.degeneracy;
  if (r.emaxInt > r.e0Int) {
    r.deltaM = static_cast<double>(r.e1Int - r.e0Int) / static_cast<double>(r.emaxInt - r.e0Int);
  }
  r.EmaxF = static_cast<double>(x.fMax) / s;
  r.EmaxC = static_cast<double>(x.penMax);
  r.normHc = r.EmaxC;
  try {
    r.delta0 = delta0(lcbo, limit);
  } catch (const InfeasibleError&) {
  }
  return r;
}

std::optional<double> delta0(const Lcbo& lcbo, std::size_t limit) {
  const BruteForceReport bf = brute_force_solve(lcbo, limit);
  if (!bf.fStar1 || bf.fMaxFeasible == bf.fStar) return std::nullopt;
  return static_cast<double>(*bf.fStar1 - bf.fStar) / static_cast<double>(bf.fMaxFeasible - bf.fStar);
}

SpectrumReport check_observation3(const Lcbo& lcbo, std::int64_t M, std::int64_t delta, std::size_t limit) {
  const BruteForceReport bf = brute_force_solve(lcbo, limit);
  SpectrumReport r = full_spectrum(lcbo, M, limit);
  r.fStar = bf.fStar;
  r.mStar = optimal_m(lcbo, delta, limit);
  r.exact = M >= *r.mStar;
  r.deltaWithinGap = !bf.fStar1 || delta <= *bf.fStar1 - bf.fStar;

  r.boundIHolds = r.e0Int == bf.fStar;
  r.boundIIHolds = !r.delta0 || r.deltaM <= *r.delta0 + 1e-12;

  const double s = static_cast<double>(lcbo.scale());
  const double spread = r.EmaxF - r.E0;
  const double mReal = static_cast<double>(M) / s;
  const double mStarReal = static_cast<double>(*r.mStar) / s;
  const double deltaReal = static_cast<double>(delta) / s;
  r.boundIIIRhs = spread > 0 ? (mReal * r.normHc - mStarReal) / spread : 0.0;
  const double corrected = spread > 0 ? ((mReal - mStarReal) * r.normHc + deltaReal) / spread : 0.0;

  // Delta0 / DeltaM; with DeltaM = 0 the ratio is unbounded and any bound holds.
  std::optional<double> ratio;
  if (r.delta0 && r.deltaM > 0) ratio = *r.delta0 / r.deltaM;
  auto holds = [&](double rhs) {
    if (!(rhs > 0) || !r.delta0) return true;
    if (!ratio) return true;
    return *ratio >= rhs * (1 - 1e-12);
  };
  r.boundIIIHolds = holds(r.boundIIIRhs);
  r.boundIIICorrectedHolds = holds(corrected);
  return r;
}

}  // namespace bigm
