#include "bigm/model.hpp"

#include <algorithm>
#include <limits>

#include "bigm/enumerate.hpp"
#include "bigm/error.hpp"
#include "bigm/simd/kernels.hpp"

namespace bigm {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw DimensionError("matrix data does not match its shape");
}

IntMatrix IntMatrix::diagonal(std::span<const std::int64_t> d) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Assignment assignment_from_index(std::uint64_t index, std::size_t n) {
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((index >> i) & 1U);
  return x;
}

std::uint64_t assignment_index(const Assignment& x) {
  if (x.size() > 64) throw LimitError("assignment wider than 64 bits has no index");
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) idx |= std::uint64_t{1} << i;
  }
  return idx;
}

std::string to_bitstring(const Assignment& x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? '1' : '0';
  return s;
}

Assignment from_bitstring(const std::string& bits) {
  Assignment x(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw InvalidArgument("bitstring may only contain 0 and 1");
    x[i] = bits[i] == '1';
  }
  return x;
}

Lcbo Lcbo::make(IntMatrix Q, IntMatrix A, std::vector<std::int64_t> b, std::span<const std::int64_t> linear,
                std::int64_t scale) {
  const std::size_t n = Q.rows();
  if (Q.cols() != n) throw DimensionError("Q must be square");
  if (A.rows() > 0 && A.cols() != n) throw DimensionError("A must have n columns");
  if (A.rows() == 0) A = IntMatrix(0, n);
  if (b.size() != A.rows()) throw DimensionError("b must have one entry per constraint");
  if (!linear.empty() && linear.size() != n) throw DimensionError("linear term must have n entries");
  if (scale < 1) throw InvalidArgument("scale must be at least 1");

  IntMatrix upper(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t r = std::min(i, j);
      const std::size_t c = std::max(i, j);
      upper(r, c) = checked::add(upper(r, c), Q(i, j));
    }
    if (!linear.empty()) upper(i, i) = checked::add(upper(i, i), linear[i]);
  }

  Lcbo out;
  out.Q_ = std::move(upper);
  out.A_ = std::move(A);
  out.b_ = std::move(b);
  out.scale_ = scale;
  return out;
}

std::int64_t Qubo::value(const Assignment& x) const {
  if (x.size() != n) throw DimensionError("assignment length differs from QUBO size");
  std::int64_t total = offset;
  for (std::size_t i = 0; i < n; ++i) {
    if (!x[i]) continue;
    for (std::size_t j = i; j < n; ++j) {
      if (x[j]) total = checked::add(total, Qp(i, j));
    }
  }
  return total;
}

namespace {

void check_length(const Lcbo& lcbo, const Assignment& x) {
  if (x.size() != lcbo.n()) throw DimensionError("assignment length differs from instance size");
}

}  // namespace

std::int64_t objective_value(const Lcbo& lcbo, const Assignment& x) {
  check_length(lcbo, x);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < lcbo.n(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = i; j < lcbo.n(); ++j) {
      if (x[j]) total = checked::add(total, lcbo.Q()(i, j));
    }
  }
  return total;
}

std::int64_t penalty_value(const Lcbo& lcbo, const Assignment& x) {
  check_length(lcbo, x);
  std::int64_t total = 0;
  for (std::size_t r = 0; r < lcbo.m(); ++r) {
    std::int64_t residual = checked::sub(0, lcbo.b()[r]);
    for (std::size_t j = 0; j < lcbo.n(); ++j) {
      if (x[j]) residual = checked::add(residual, lcbo.A()(r, j));
    }
    total = checked::add(total, checked::mul(residual, residual));
  }
  return total;
}

bool is_feasible(const Lcbo& lcbo, const Assignment& x) { return penalty_value(lcbo, x) == 0; }

Qubo objective_form(const Lcbo& lcbo) { return Qubo{lcbo.n(), lcbo.Q(), 0, lcbo.scale()}; }

Qubo penalty_form(const Lcbo& lcbo) {
  const std::size_t n = lcbo.n();
  Qubo q{n, IntMatrix(n, n), 0, lcbo.scale()};
  for (std::size_t r = 0; r < lcbo.m(); ++r) {
    const auto row = lcbo.A().row(r);
    const std::int64_t br = lcbo.b()[r];
    // (a.x - b)^2 = sum_j (a_j^2 - 2 b a_j) x_j + sum_{j<k} 2 a_j a_k x_j x_k + b^2
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] == 0) continue;
      const std::int64_t d = checked::sub(checked::mul(row[j], row[j]), checked::mul(2, checked::mul(br, row[j])));
      q.Qp(j, j) = checked::add(q.Qp(j, j), d);
      for (std::size_t k = j + 1; k < n; ++k) {
        if (row[k] == 0) continue;
        q.Qp(j, k) = checked::add(q.Qp(j, k), checked::mul(2, checked::mul(row[j], row[k])));
      }
    }
    q.offset = checked::add(q.offset, checked::mul(br, br));
  }
  return q;
}

Qubo qubo_from_lcbo(const Lcbo& lcbo, std::int64_t M) {
  if (M < 0) throw InvalidArgument("penalty weight must be non-negative");
  Qubo q = penalty_form(lcbo);
  for (std::size_t i = 0; i < lcbo.n(); ++i) {
    for (std::size_t j = i; j < lcbo.n(); ++j) {
      q.Qp(i, j) = checked::add(lcbo.Q()(i, j), checked::mul(M, q.Qp(i, j)));
    }
  }
  q.offset = checked::mul(M, q.offset);
  return q;
}

void require_enumerable(std::size_t n, std::size_t limit) {
  if (n > limit) {
    throw LimitError("instance has " + std::to_string(n) + " variables, enumeration limit is " +
                     std::to_string(limit));
  }
}

BruteForceReport brute_force_solve(const Lcbo& lcbo, std::size_t limit) {
  require_enumerable(lcbo.n(), limit);
  const Qubo f = objective_form(lcbo);
  const Qubo pen = penalty_form(lcbo);

  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max();
  std::int64_t best = kNone;
  std::uint64_t bestIdx = 0;
  std::int64_t second = kNone;
  std::uint64_t secondIdx = 0;
  std::int64_t worst = std::numeric_limits<std::int64_t>::min();
  std::uint64_t feasible = 0;
  std::int64_t umin = kNone;
  std::int64_t umax = std::numeric_limits<std::int64_t>::min();

  BlockEnumerator e({&f, &pen});
  const auto& kern = simd::active();
  e.run([&](std::uint64_t base, std::span<const std::span<const std::int64_t>> v) {
    const auto fv = v[0];
    const auto pv = v[1];
    std::int64_t lo, hi;
    kern.minmax_i64(fv.data(), fv.size(), &lo, &hi);
    umin = std::min(umin, lo);
    umax = std::max(umax, hi);
    for (std::size_t i = 0; i < fv.size(); ++i) {
      if (pv[i] != 0) continue;
      ++feasible;
      const std::int64_t val = fv[i];
      worst = std::max(worst, val);
      if (val < best) {
        if (best != kNone) {
          second = best;
          secondIdx = bestIdx;
        }
        best = val;
        bestIdx = base + i;
      } else if (val > best && val < second) {
        second = val;
        secondIdx = base + i;
      }
    }
  });

  if (feasible == 0) throw InfeasibleError("instance has no feasible point");

  BruteForceReport r;
  r.xStar = assignment_from_index(bestIdx, lcbo.n());
  r.fStar = best;
  if (second != kNone) {
    r.xStar1 = assignment_from_index(secondIdx, lcbo.n());
    r.fStar1 = second;
  }
  r.feasibleCount = feasible;
  r.fMaxFeasible = worst;
  r.fMinUnconstrained = umin;
  r.fMaxUnconstrained = umax;
  return r;
}

}  // namespace bigm
