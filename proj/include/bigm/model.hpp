#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bigm {

// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data);

  static IntMatrix diagonal(std::span<const std::int64_t> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const std::int64_t> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<std::int64_t>& data() const { return data_; }

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

// Binary assignment x in {0,1}^n, one byte per variable.
using Assignment = std::vector<std::uint8_t>;

// Bit i of the index is x_i.
Assignment assignment_from_index(std::uint64_t index, std::size_t n);
std::uint64_t assignment_index(const Assignment& x);
// Character i is x_i, e.g. "10" means x_0 = 1, x_1 = 0.
std::string to_bitstring(const Assignment& x);
Assignment from_bitstring(const std::string& bits);

// Linearly-constrained binary quadratic optimization:
//   minimize x^T Q x  subject to  A x = b,  x in {0,1}^n.
// Linear terms live on the diagonal of Q. Q is stored upper-triangular
// (lower entries are folded onto the upper triangle at construction), which
// leaves x^T Q x unchanged. Objective values are integers; `scale` is the
// fixed-point denominator that maps them back to real values.
class Lcbo {
 public:
  Lcbo() = default;

  // `linear`, when non-empty, is added onto the diagonal of Q.
  static Lcbo make(IntMatrix Q, IntMatrix A, std::vector<std::int64_t> b,
                   std::span<const std::int64_t> linear = {}, std::int64_t scale = 1);

  std::size_t n() const { return Q_.rows(); }
  std::size_t m() const { return A_.rows(); }
  const IntMatrix& Q() const { return Q_; }
  const IntMatrix& A() const { return A_; }
  const std::vector<std::int64_t>& b() const { return b_; }
  std::int64_t scale() const { return scale_; }

  bool operator==(const Lcbo&) const = default;

 private:
  IntMatrix Q_;
  IntMatrix A_;
  std::vector<std::int64_t> b_;
  std::int64_t scale_ = 1;
};

// Unconstrained form x^T Qp x + offset with Qp upper-triangular.
struct Qubo {
  std::size_t n = 0;
  IntMatrix Qp;
  std::int64_t offset = 0;
  std::int64_t scale = 1;

  std::int64_t value(const Assignment& x) const;
  bool operator==(const Qubo&) const = default;
};

struct BruteForceReport {
  Assignment xStar;
  std::int64_t fStar = 0;
  std::optional<Assignment> xStar1;
  std::optional<std::int64_t> fStar1;
  std::uint64_t feasibleCount = 0;
  std::int64_t fMaxFeasible = 0;
  std::int64_t fMinUnconstrained = 0;
  std::int64_t fMaxUnconstrained = 0;
};

inline constexpr std::size_t kDefaultBruteForceLimit = 24;

std::int64_t objective_value(const Lcbo& lcbo, const Assignment& x);
// ||Ax - b||^2
std::int64_t penalty_value(const Lcbo& lcbo, const Assignment& x);
bool is_feasible(const Lcbo& lcbo, const Assignment& x);

Qubo qubo_from_lcbo(const Lcbo& lcbo, std::int64_t M);
// The objective alone as a Qubo (M = 0).
Qubo objective_form(const Lcbo& lcbo);
// ||Ax - b||^2 expanded into a Qubo (x_i^2 = x_i folded onto the diagonal).
Qubo penalty_form(const Lcbo& lcbo);

BruteForceReport brute_force_solve(const Lcbo& lcbo, std::size_t limit = kDefaultBruteForceLimit);

// Checks that the instance fits the enumeration limit, throws LimitError otherwise.
void require_enumerable(std::size_t n, std::size_t limit);

}  // namespace bigm
