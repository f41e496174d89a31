#include "bigm/penalty.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "bigm/enumerate.hpp"
#include "bigm/error.hpp"
#include "bigm/gadgets.hpp"
#include "bigm/instances.hpp"

namespace bigm {
namespace {

// Everything the exactness questions need from one enumeration: the feasible
// optimum, and for every penalty level the smallest objective reached there.
struct Profile {
  std::int64_t fStar = std::numeric_limits<std::int64_t>::max();
  bool feasible = false;
  std::map<std::int64_t, std::int64_t> minByPenalty;
};

Profile profile(const Lcbo& lcbo, std::size_t limit) {
  require_enumerable(lcbo.n(), limit);
  const Qubo f = objective_form(lcbo);
  const Qubo pen = penalty_form(lcbo);
  Profile p;
  BlockEnumerator e({&f, &pen});
  e.run([&](std::uint64_t, std::span<const std::span<const std::int64_t>> v) {
    const auto fv = v[0];
    const auto pv = v[1];
    for (std::size_t i = 0; i < fv.size(); ++i) {
      if (pv[i] == 0) {
        p.feasible = true;
        p.fStar = std::min(p.fStar, fv[i]);
      } else {
        auto [it, inserted] = p.minByPenalty.try_emplace(pv[i], fv[i]);
        if (!inserted && fv[i] < it->second) it->second = fv[i];
      }
    }
  });
  if (!p.feasible) throw InfeasibleError("instance has no feasible point");
  return p;
}

void require_delta(std::int64_t delta) {
  if (delta <= 0) throw InvalidArgument("delta must be positive");
}

std::int64_t quad_value(const IntMatrix& Q, const Assignment& x) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < Q.rows(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < Q.cols(); ++j) {
      if (x[j]) total = checked::add(total, Q(i, j));
    }
  }
  return total;
}

}  // namespace

std::int64_t m_ell1(const Lcbo& lcbo, std::int64_t delta) {
  require_delta(delta);
  std::int64_t total = delta;
  for (std::int64_t v : lcbo.Q().data()) total = checked::add(total, checked::abs(v));
  return total;
}

std::int64_t m_from_bounds(std::int64_t fFeas, std::int64_t fUncLower, std::int64_t delta) {
  require_delta(delta);
  if (fUncLower > fFeas) throw InvalidArgument("lower bound exceeds the feasible value");
  return checked::add(checked::sub(fFeas, fUncLower), delta);
}

PenaltyReport m_sdp(const Lcbo& lcbo, std::int64_t delta, const MSdpOptions& opts) {
  require_delta(delta);
  PenaltyReport r;
  r.delta = delta;
  r.mEll1 = m_ell1(lcbo, delta);

  if (opts.feasibleHint && opts.feasibleHint->size() == lcbo.n() && is_feasible(lcbo, *opts.feasibleHint)) {
    r.feasiblePointUsed = *opts.feasibleHint;
    r.feasibleStrategy = "hint";
  } else {
    FeasibleSearch s = find_feasible_search(lcbo, opts.nodeBudget);
    r.feasibleNodes = s.nodes;
    if (!s.point) {
      if (s.nodes >= opts.nodeBudget) throw LimitError("no feasible point within the node budget");
      throw InfeasibleError("instance has no feasible point");
    }
    r.feasiblePointUsed = std::move(*s.point);
    r.feasibleStrategy = "dfs";
  }
  r.fFeas = objective_value(lcbo, r.feasiblePointUsed);

  const SdpResult sdp = solve(build_relaxation(lcbo), opts.sdp);
  r.sdpStatus = sdp.status;
  r.sdpIterations = sdp.iterations;
  const std::int64_t trivial = trivial_lower_bound(lcbo);
  r.sdpCertifiedBound = certified_lower_bound(lcbo, sdp);
  r.sdpPrimalResidual = sdp.primalResidual;
  r.sdpDualResidual = sdp.dualResidual;
  r.fUncLower = std::min(r.sdpCertifiedBound, r.fFeas);
  r.sdpFallback = r.fUncLower == trivial &&
                  (!std::isfinite(sdp.certifiedLowerBound) || sdp.certifiedLowerBound < static_cast<double>(trivial) + 1);
  r.mSdp = m_from_bounds(r.fFeas, r.fUncLower, delta);
  return r;
}

bool is_exact_reformulation(const Lcbo& lcbo, std::int64_t M, std::int64_t delta, std::size_t limit) {
  require_delta(delta);
  if (M < 0) throw InvalidArgument("M must be non-negative");
  const Profile p = profile(lcbo, limit);
  const __int128 target = static_cast<__int128>(p.fStar) + delta;
  for (const auto& [pen, minF] : p.minByPenalty) {
    if (static_cast<__int128>(minF) + static_cast<__int128>(M) * pen < target) return false;
  }
  return true;
}

std::int64_t optimal_m(const Lcbo& lcbo, std::int64_t delta, std::size_t limit) {
  require_delta(delta);
  const Profile p = profile(lcbo, limit);
  const std::int64_t target = checked::add(p.fStar, delta);
  std::int64_t best = 0;
  for (const auto& [pen, minF] : p.minByPenalty) {
    best = std::max(best, ceil_div(checked::sub(target, minF), pen));
  }
  return best;
}

HardnessInstance build_hardness_instance(const IntMatrix& Q, std::int64_t a, std::int64_t delta, std::size_t k) {
  require_delta(delta);
  const std::size_t n = Q.rows();
  if (Q.cols() != n) throw DimensionError("objective matrix must be square");
  if (n == 0 || n > kHardnessMaxVars) throw InvalidArgument("hardness construction supports 1 to 4 variables");
  if (k < 1 || k > n) throw InvalidArgument("Hamming weight k must lie in [1, n]");
  const std::int64_t f0 = 0;
  if (f0 <= a) throw InvalidArgument("requires f(0) > a; decide f(0) <= a directly");

  std::int64_t ell1 = delta;
  for (std::int64_t v : Q.data()) ell1 = checked::add(ell1, checked::abs(v));
  const std::int64_t alpha = checked::add(ell1, checked::sub(f0, a));
  const auto nn = static_cast<std::int64_t>(n);
  const auto kk = static_cast<std::int64_t>(k);
  const std::int64_t c = checked::mul(alpha, nn * nn * nn + 1);

  // Variables: x_0..x_{n-1}, then p and m in {0..n}.
  const std::size_t P = n, Mv = n + 1;
  std::vector<std::int64_t> bounds(n, 1);
  bounds.push_back(nn);
  bounds.push_back(nn);
  PolyIntProgram pip = PolyIntProgram::empty(n + 2, bounds);
  auto addQ = [&](std::size_t i, std::size_t j, std::int64_t v) { pip.Q(i, j) = checked::add(pip.Q(i, j), v); };
  auto addL = [&](std::size_t i, std::int64_t v) { pip.L[i] = checked::add(pip.L[i], v); };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) addQ(i, j, Q(i, j));
  }
  // alpha |x| (p + m)
  for (std::size_t i = 0; i < n; ++i) {
    addQ(i, P, alpha);
    addQ(i, Mv, alpha);
  }
  // c (p - m - |x| + k)^2 without the constant c k^2
  addQ(P, P, c);
  addQ(Mv, Mv, c);
  addQ(P, Mv, checked::mul(-2, c));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) addQ(i, j, c);
    addQ(P, i, checked::mul(-2, c));
    addQ(Mv, i, checked::mul(2, c));
    addL(i, checked::mul(-2, checked::mul(c, kk)));
  }
  addL(P, checked::mul(2, checked::mul(c, kk)));
  addL(Mv, checked::mul(-2, checked::mul(c, kk)));

  // M = (f(0) - a) / k is made integral by scaling the objective (and delta) by k.
  for (std::size_t i = 0; i < n + 2; ++i) {
    pip.L[i] = checked::mul(pip.L[i], kk);
    for (std::size_t j = 0; j < n + 2; ++j) pip.Q(i, j) = checked::mul(pip.Q(i, j), kk);
  }
  for (std::size_t i = 0; i < n; ++i) {
    QuadConstraint zero{IntMatrix(n + 2, n + 2), std::vector<std::int64_t>(n + 2, 0), 0};
    zero.l[i] = 1;
    pip.equalities.push_back(std::move(zero));
  }

  HardnessInstance out;
  out.lcbo = gadgetize(pip, delta).first;
  out.M = checked::sub(f0, a);
  out.delta = checked::mul(delta, kk);
  out.alpha = alpha;
  return out;
}

bool decide_f_via_pm(const IntMatrix& Q, std::int64_t a, std::int64_t delta) {
  const std::size_t n = Q.rows();
  if (quad_value(Q, Assignment(n, 0)) <= a) return true;
  for (std::size_t k = 1; k <= n; ++k) {
    const HardnessInstance h = build_hardness_instance(Q, a, delta, k);
    if (!is_exact_reformulation(h.lcbo, h.M, h.delta)) return true;
  }
  return false;
}

}  // namespace bigm
