#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string_view>
#include <vector>

#include "bigm/model.hpp"

namespace bigm {

// Lifted relaxation of min f(x) over {0,1}^n:
//   minimize <Qtilde, Y>  s.t.  Y PSD,  Y_0i = Y_ii,  entries in [0,1],  Y_00 = 1
// with Qtilde = [[0, L^T/2], [L/2, Qsym]], L = diag(Q) and Qsym the
// symmetrized off-diagonal part of Q.
struct SdpProblem {
  Eigen::MatrixXd Qtilde;
  bool enforceY11 = true;
  bool boxConstraints = true;

  std::size_t dim() const { return static_cast<std::size_t>(Qtilde.rows()); }
};

struct SdpConfig {
  double tol = 1e-6;
  std::size_t maxIter = 50000;
  double relaxation = 1.6;
  double rho = 0.1;
  bool adaptiveRho = true;
  // Anderson acceleration history length; 0 gives plain ADMM.
  std::size_t andersonMemory = 10;
  // Keep per-iteration residuals in SdpResult::history.
  bool recordHistory = false;
};

enum class SdpStatus { converged, maxIter, failed };
std::string_view to_string(SdpStatus s);

struct SdpResult {
  Eigen::MatrixXd Y;
  double primalValue = 0.0;
  // Dual bound: no point of the relaxation (hence no binary point) has a
  // smaller objective, up to floating-point rounding of the final evaluation.
  double certifiedLowerBound = 0.0;
  double primalResidual = 0.0;
  double dualResidual = 0.0;
  std::size_t iterations = 0;
  SdpStatus status = SdpStatus::failed;
  struct Sample {
    double primal;
    double dual;
  };
  std::vector<Sample> history;
};

// `paperFaithful` drops Y_00 = 1 (the plain form of the relaxation).
SdpProblem build_relaxation(const Lcbo& lcbo, bool paperFaithful = false);

// Over-relaxed ADMM between the PSD cone (eigenvalue clipping) and the
// affine/box set, with safeguarded Anderson acceleration of the iterates.
// Never throws on non-convergence; check `status`. Every evaluation of the
// splitting map counts as one iteration.
SdpResult solve(const SdpProblem& sdp, const SdpConfig& config = {});

// Projection onto the PSD cone by clipping negative eigenvalues.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m);

// Sum of the negative entries of Q: f(x) >= this for every binary x.
std::int64_t trivial_lower_bound(const Lcbo& lcbo);

// max(trivial bound, SDP dual bound) rounded up to the integer grid. Valid
// for any result status; a failed solve degrades to the trivial bound.
std::int64_t certified_lower_bound(const Lcbo& lcbo, const SdpResult& result);

}  // namespace bigm
