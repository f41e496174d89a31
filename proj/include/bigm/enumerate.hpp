#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bigm/model.hpp"

namespace bigm {

// Evaluates one or more quadratic forms on every point of {0,1}^n, a block
// of 2^L consecutive indices at a time. Within a block the values are built
// by doubling (value[x | 2^j] = value[x] + coefficient), so the inner loops
// are plain vector additions that run on the active SIMD kernels.
//
// The callback receives the first index of the block and one span of values
// per form; block k covers indices [k * 2^L, (k + 1) * 2^L). Blocks are
// visited in increasing index order.
class BlockEnumerator {
 public:
  using Callback = std::function<void(std::uint64_t base, std::span<const std::span<const std::int64_t>> values)>;

  explicit BlockEnumerator(std::vector<const Qubo*> forms, unsigned blockBits = 16);

  void run(const Callback& cb) const;

  std::size_t n() const { return n_; }
  unsigned block_bits() const { return low_; }

 private:
  std::vector<const Qubo*> forms_;
  std::size_t n_ = 0;
  unsigned low_ = 0;
  std::vector<std::vector<std::int64_t>> lowTables_;
};

// value[x] = base + sum_j coeffs[j] * x_j for x < 2^coeffs.size()
void linear_table(std::span<std::int64_t> out, std::int64_t base, std::span<const std::int64_t> coeffs);
void linear_table(std::span<double> out, double base, std::span<const double> coeffs);

// Full table of a Qubo over all 2^n points. Intended for n up to ~24.
std::vector<std::int64_t> qubo_table(const Qubo& q);

}  // namespace bigm
