#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bigm/model.hpp"
#include "bigm/sdp.hpp"

namespace bigm {

struct PenaltyReport {
  std::int64_t mEll1 = 0;
  std::int64_t mSdp = 0;
  std::optional<std::int64_t> mOptimal;
  std::int64_t delta = 1;
  std::int64_t fFeas = 0;
  std::int64_t fUncLower = 0;
  Assignment feasiblePointUsed;
  // "dfs" or "hint" (a caller-supplied point such as the portfolio greedy).
  std::string feasibleStrategy;
  std::uint64_t feasibleNodes = 0;
  SdpStatus sdpStatus = SdpStatus::failed;
  std::size_t sdpIterations = 0;
  // certified_lower_bound of the solve, before capping at fFeas.
  std::int64_t sdpCertifiedBound = 0;
  double sdpPrimalResidual = 0.0;
  double sdpDualResidual = 0.0;
  // True when fUncLower is the trivial bound because the SDP bound was weaker or unusable.
  bool sdpFallback = false;
};

// sum |Q_ij| + delta
std::int64_t m_ell1(const Lcbo& lcbo, std::int64_t delta);

// fFeas - fUncLower + delta
std::int64_t m_from_bounds(std::int64_t fFeas, std::int64_t fUncLower, std::int64_t delta);

struct MSdpOptions {
  std::uint64_t nodeBudget = std::uint64_t{1} << 22;
  SdpConfig sdp;
  std::optional<Assignment> feasibleHint;
};

// Feasible point (hint if given and feasible, otherwise depth-first search)
// plus the certified SDP bound on the unconstrained minimum. mOptimal stays empty.
PenaltyReport m_sdp(const Lcbo& lcbo, std::int64_t delta, const MSdpOptions& opts = {});

// f(x*) + delta <= f(x) + M ||Ax - b||^2 for every unfeasible x.
bool is_exact_reformulation(const Lcbo& lcbo, std::int64_t M, std::int64_t delta,
                            std::size_t limit = kDefaultBruteForceLimit);

// Smallest integer M >= 0 for which is_exact_reformulation holds.
std::int64_t optimal_m(const Lcbo& lcbo, std::int64_t delta, std::size_t limit = kDefaultBruteForceLimit);

// Threshold-hardness construction for an unconstrained x^T Q x over n <= 4
// variables: the instance is trivially constrained to x = 0, and a penalty
// weight decides whether min over |x| = k of f lies at or below `a`.
struct HardnessInstance {
  Lcbo lcbo;
  // Weight to test; the objective is multiplied by k so that it is integral.
  std::int64_t M = 0;
  std::int64_t delta = 1;
  std::int64_t alpha = 0;
};

inline constexpr std::size_t kHardnessMaxVars = 4;

HardnessInstance build_hardness_instance(const IntMatrix& Q, std::int64_t a, std::int64_t delta, std::size_t k);

// Is min f <= a? Decided through one exactness query per Hamming weight.
bool decide_f_via_pm(const IntMatrix& Q, std::int64_t a, std::int64_t delta = 1);

}  // namespace bigm
