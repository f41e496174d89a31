#include "bigm/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bigm/error.hpp"

namespace bigm {
namespace {

using Eigen::MatrixXd;

struct EntryRange {
  double lo;
  double hi;
};

// Bounds every feasible Y obeys entrywise. With the box constraints they are
// explicit; without them, Y_00 = 1 plus PSD still pins diagonals to [0,1]
// and off-diagonals to [-1,1].
struct Ranges {
  EntryRange corner;
  EntryRange linked;    // Y_0i = Y_ii
  EntryRange coupling;  // Y_ij, 1 <= i < j
  double maxTrace;
};

Ranges feasible_ranges(const SdpProblem& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double d = static_cast<double>(p.dim());
  if (p.boxConstraints) {
    return {p.enforceY11 ? EntryRange{1, 1} : EntryRange{0, 1}, {0, 1}, {0, 1}, d};
  }
  if (p.enforceY11) return {{1, 1}, {0, 1}, {-1, 1}, d};
  return {{0, inf}, {-inf, inf}, {-inf, inf}, inf};
}

// Euclidean projection onto the linear/box constraint set (symmetric matrices).
void project_affine(const SdpProblem& p, MatrixXd& x) {
  const auto d = static_cast<Eigen::Index>(p.dim());
  if (p.enforceY11) {
    x(0, 0) = 1.0;
  } else if (p.boxConstraints) {
    x(0, 0) = std::clamp(x(0, 0), 0.0, 1.0);
  }
  for (Eigen::Index i = 1; i < d; ++i) {
    double t = (x(0, i) + x(i, 0) + x(i, i)) / 3.0;
    if (p.boxConstraints) t = std::clamp(t, 0.0, 1.0);
    x(0, i) = x(i, 0) = x(i, i) = t;
  }
  for (Eigen::Index i = 1; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      double t = 0.5 * (x(i, j) + x(j, i));
      if (p.boxConstraints) t = std::clamp(t, 0.0, 1.0);
      x(i, j) = x(j, i) = t;
    }
  }
}

// min over the constraint set (PSD dropped) of <g, Y>, using the entry ranges.
double linear_minimum(const MatrixXd& g, const Ranges& r) {
  auto term = [](double coeff, EntryRange range) {
    if (coeff == 0.0) return 0.0;
    return coeff > 0 ? coeff * range.lo : coeff * range.hi;
  };
  const auto d = g.rows();
  double total = term(g(0, 0), r.corner);
  for (Eigen::Index i = 1; i < d; ++i) total += term(g(0, i) + g(i, 0) + g(i, i), r.linked);
  for (Eigen::Index i = 1; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) total += term(g(i, j) + g(j, i), r.coupling);
  }
  return total;
}

}  // namespace

std::string_view to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::converged: return "converged";
    case SdpStatus::maxIter: return "maxIter";
    case SdpStatus::failed: return "failed";
  }
  return "failed";
}

SdpProblem build_relaxation(const Lcbo& lcbo, bool paperFaithful) {
  const auto n = static_cast<Eigen::Index>(lcbo.n());
  SdpProblem p;
  p.Qtilde = MatrixXd::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lin = static_cast<double>(lcbo.Q()(i, i));
    p.Qtilde(0, i + 1) = p.Qtilde(i + 1, 0) = 0.5 * lin;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double q = 0.5 * static_cast<double>(lcbo.Q()(i, j));
      p.Qtilde(i + 1, j + 1) = p.Qtilde(j + 1, i + 1) = q;
    }
  }
  p.enforceY11 = !paperFaithful;
  return p;
}

MatrixXd project_psd(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

SdpResult solve(const SdpProblem& sdp, const SdpConfig& config) {
  if (!(config.tol > 0)) throw InvalidArgument("SDP tolerance must be positive");
  if (!(config.rho > 0)) throw InvalidArgument("SDP penalty parameter must be positive");
  if (sdp.dim() < 1 || sdp.Qtilde.cols() != sdp.Qtilde.rows()) throw DimensionError("SDP data must be square");

  const auto d = static_cast<Eigen::Index>(sdp.dim());
  const Ranges ranges = feasible_ranges(sdp);
  SdpResult res;

  const double cnorm = sdp.Qtilde.norm();
  MatrixXd z = MatrixXd::Identity(d, d) / static_cast<double>(d);
  z(0, 0) += 1.0;
  project_affine(sdp, z);
  if (cnorm == 0.0) {
    res.Y = z;
    res.status = SdpStatus::converged;
    return res;
  }
  const MatrixXd c = sdp.Qtilde / cnorm;

  // Scaled-form ADMM on  min <c,X> + I_affine(X) + I_psd(Z)  s.t. X = Z,
  // viewed as a fixed-point map (z, u) -> (z', u') and Anderson-accelerated.
  MatrixXd u = MatrixXd::Zero(d, d);
  MatrixXd x(d, d);
  MatrixXd zNext(d, d), uNext(d, d), v(d, d);
  double rho = config.rho;
  const double alpha = config.relaxation;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(d);

  std::size_t it = 0;
  auto sweep = [&](const MatrixXd& zIn, const MatrixXd& uIn, MatrixXd& zOut, MatrixXd& uOut) {
    ++it;
    x = zIn - uIn - c / rho;
    project_affine(sdp, x);
    v = alpha * x + (1.0 - alpha) * zIn + uIn;
    es.compute(v);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const MatrixXd& vecs = es.eigenvectors();
    // Eigenvalues come sorted ascending; rebuild the smaller spectral part.
    Eigen::Index neg = 0;
    while (neg < d && lam(neg) < 0.0) ++neg;
    if (neg <= d - neg) {
      const auto vn = vecs.leftCols(neg);
      uOut.noalias() = vn * lam.head(neg).asDiagonal() * vn.transpose();
      zOut = v - uOut;
    } else {
      const auto vp = vecs.rightCols(d - neg);
      zOut.noalias() = vp * lam.tail(d - neg).asDiagonal() * vp.transpose();
      uOut = v - zOut;
    }
    res.primalResidual = (x - zOut).norm();
    res.dualResidual = rho * (zOut - zIn).norm();
    if (config.recordHistory) res.history.push_back({res.primalResidual, res.dualResidual});
  };
  auto finite = [&] { return std::isfinite(res.primalResidual) && std::isfinite(res.dualResidual); };
  auto done = [&] { return res.primalResidual < config.tol && res.dualResidual < config.tol; };

  // Anderson (type II) state over the stacked vector (z, u).
  const Eigen::Index len = 2 * d * d;
  const auto mem = static_cast<Eigen::Index>(config.andersonMemory);
  MatrixXd dF(len, std::max<Eigen::Index>(mem, 1)), dG(len, std::max<Eigen::Index>(mem, 1));
  MatrixXd gram(std::max<Eigen::Index>(mem, 1), std::max<Eigen::Index>(mem, 1));
  Eigen::VectorXd fPrev(len), gPrev(len), f(len), g(len);
  Eigen::Index stored = 0, head = 0;
  bool havePrev = false;
  auto stack = [d](const MatrixXd& a, const MatrixXd& b, Eigen::VectorXd& out) {
    out.head(d * d) = Eigen::Map<const Eigen::VectorXd>(a.data(), d * d);
    out.tail(d * d) = Eigen::Map<const Eigen::VectorXd>(b.data(), d * d);
  };
  auto reset = [&] {
    stored = head = 0;
    havePrev = false;
  };

  res.status = SdpStatus::maxIter;
  MatrixXd zAcc(d, d), uAcc(d, d), zTry(d, d), uTry(d, d), xPlain(d, d);
  std::size_t nextAdapt = 25;
  while (it < config.maxIter) {
    sweep(z, u, zNext, uNext);
    if (!finite()) {
      res.status = SdpStatus::failed;
      break;
    }
    if (done()) {
      z = zNext;
      u = uNext;
      res.status = SdpStatus::converged;
      break;
    }

    bool accelerated = false;
    if (mem > 0 && it < config.maxIter) {
      stack(z, u, f);
      stack(zNext, uNext, g);
      const Eigen::VectorXd r = g - f;
      if (havePrev) {
        dF.col(head) = r - fPrev;
        dG.col(head) = g - gPrev;
        stored = std::min(stored + 1, mem);
        for (Eigen::Index k = 0; k < stored; ++k) gram(head, k) = gram(k, head) = dF.col(head).dot(dF.col(k));
        head = (head + 1) % mem;
      }
      fPrev = r;
      gPrev = g;
      havePrev = true;
      if (stored > 0) {
        const auto F = dF.leftCols(stored);
        MatrixXd h = gram.topLeftCorner(stored, stored);
        h.diagonal().array() += 1e-10 * h.trace() + 1e-300;
        const Eigen::VectorXd gamma = h.ldlt().solve(F.transpose() * r);
        const Eigen::VectorXd acc = g - dG.leftCols(stored) * gamma;
        zAcc = Eigen::Map<const MatrixXd>(acc.data(), d, d);
        uAcc = Eigen::Map<const MatrixXd>(acc.data() + d * d, d, d);
        zAcc = 0.5 * (zAcc + zAcc.transpose()).eval();
        uAcc = 0.5 * (uAcc + uAcc.transpose()).eval();
        // Keep the extrapolated point only if its own step is shorter.
        const double plainStep = r.norm();
        const double plainPrimal = res.primalResidual, plainDual = res.dualResidual;
        xPlain = x;
        sweep(zAcc, uAcc, zTry, uTry);
        const double accStep = std::sqrt((zTry - zAcc).squaredNorm() + (uTry - uAcc).squaredNorm());
        if (finite() && accStep < plainStep) {
          z = zTry;
          u = uTry;
          accelerated = true;
          if (done()) {
            res.status = SdpStatus::converged;
            break;
          }
        } else {
          x = xPlain;
          res.primalResidual = plainPrimal;
          res.dualResidual = plainDual;
          reset();
        }
      }
    }
    if (!accelerated) {
      z = zNext;
      u = uNext;
    }

    if (config.adaptiveRho && it >= nextAdapt) {
      nextAdapt = it + 25;
      double scale = 1.0;
      if (res.primalResidual > 10.0 * res.dualResidual) {
        scale = 2.0;
      } else if (res.dualResidual > 10.0 * res.primalResidual) {
        scale = 0.5;
      }
      if (scale != 1.0) {
        rho *= scale;
        u /= scale;
        reset();
      }
    }
  }
  res.iterations = it;
  res.Y = x;
  res.primalValue = (sdp.Qtilde.cwiseProduct(x)).sum();

  if (res.status == SdpStatus::failed) {
    res.certifiedLowerBound = -std::numeric_limits<double>::infinity();
    return res;
  }

  // Any PSD S gives  <c,Y> >= min_affine <c - S, Y>  on the feasible set.
  // S = -rho * u is PSD by construction (u is the negative spectral part);
  // its smallest eigenvalue is re-checked to absorb reconstruction error.
  MatrixXd s = -rho * u;
  s = 0.5 * (s + s.transpose());
  es.compute(s, Eigen::EigenvaluesOnly);
  const double lamMin = es.eigenvalues().minCoeff();
  double bound = linear_minimum(c - s, ranges);
  if (lamMin < 0.0) bound += lamMin * ranges.maxTrace;
  res.certifiedLowerBound = std::isfinite(bound) ? bound * cnorm : -std::numeric_limits<double>::infinity();
  return res;
}

std::int64_t trivial_lower_bound(const Lcbo& lcbo) {
  std::int64_t total = 0;
  for (std::int64_t v : lcbo.Q().data()) {
    if (v < 0) total = checked::add(total, v);
  }
  return total;
}

std::int64_t certified_lower_bound(const Lcbo& lcbo, const SdpResult& result) {
  const std::int64_t trivial = trivial_lower_bound(lcbo);
  if (result.status == SdpStatus::failed || !std::isfinite(result.certifiedLowerBound)) return trivial;
  double absSum = 0.0;
  for (std::int64_t v : lcbo.Q().data()) absSum += std::abs(static_cast<double>(v));
  // Slack for rounding in the final floating-point evaluation.
  const double margin = 1e-9 * (1.0 + absSum);
  const double sdpBound = std::ceil(result.certifiedLowerBound - margin);
  if (sdpBound <= static_cast<double>(trivial)) return trivial;
  if (sdpBound >= 9.0e18) return trivial;
  return std::max(trivial, static_cast<std::int64_t>(sdpBound));
}

}  // namespace bigm
