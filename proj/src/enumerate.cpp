#include "bigm/enumerate.hpp"

#include <algorithm>

#include "bigm/error.hpp"
#include "bigm/simd/kernels.hpp"

namespace bigm {
namespace {

// Bound on |value| over the cube; every partial sum built while enumerating
// is a form value on some sub-cube, so it is bounded by the same quantity.
void check_form_bound(const Qubo& q) {
  std::int64_t total = checked::abs(q.offset);
  for (std::int64_t v : q.Qp.data()) total = checked::add(total, checked::abs(v));
}

// Table of the form restricted to the low `bits` variables (offset excluded).
std::vector<std::int64_t> low_table(const Qubo& q, unsigned bits) {
  const auto& k = simd::active();
  std::vector<std::int64_t> out(std::size_t{1} << bits, 0);
  std::vector<std::int64_t> field(out.size() / 2 + 1, 0);
  std::vector<std::int64_t> coeffs;
  for (unsigned var = 0; var < bits; ++var) {
    const std::size_t half = std::size_t{1} << var;
    coeffs.assign(var, 0);
    for (unsigned j = 0; j < var; ++j) coeffs[j] = q.Qp(j, var);
    linear_table(std::span(field.data(), half), q.Qp(var, var), coeffs);
    k.sum_i64(out.data() + half, out.data(), field.data(), half);
  }
  return out;
}

}  // namespace

void linear_table(std::span<std::int64_t> out, std::int64_t base, std::span<const std::int64_t> coeffs) {
  const auto& k = simd::active();
  out[0] = base;
  for (std::size_t j = 0; j < coeffs.size(); ++j) k.extend_i64(out.data(), std::size_t{1} << j, coeffs[j]);
}

void linear_table(std::span<double> out, double base, std::span<const double> coeffs) {
  const auto& k = simd::active();
  out[0] = base;
  for (std::size_t j = 0; j < coeffs.size(); ++j) k.extend_f64(out.data(), std::size_t{1} << j, coeffs[j]);
}

BlockEnumerator::BlockEnumerator(std::vector<const Qubo*> forms, unsigned blockBits) : forms_(std::move(forms)) {
  if (forms_.empty()) throw InvalidArgument("BlockEnumerator needs at least one form");
  n_ = forms_.front()->n;
  for (const Qubo* q : forms_) {
    if (q->n != n_) throw DimensionError("forms passed to BlockEnumerator differ in size");
    if (n_ >= 63) throw LimitError("enumeration width above 62 variables");
    check_form_bound(*q);
  }
  low_ = static_cast<unsigned>(std::min<std::size_t>(n_, blockBits));
  for (const Qubo* q : forms_) lowTables_.push_back(low_table(*q, low_));
}

void BlockEnumerator::run(const Callback& cb) const {
  const auto& k = simd::active();
  const std::size_t blockLen = std::size_t{1} << low_;
  const std::size_t highBits = n_ - low_;
  const std::uint64_t prefixes = std::uint64_t{1} << highBits;

  std::vector<std::vector<std::int64_t>> blocks(forms_.size(), std::vector<std::int64_t>(blockLen));
  std::vector<std::span<const std::int64_t>> views(forms_.size());
  std::vector<std::int64_t> cross(low_);
  std::vector<std::int64_t> scratch(blockLen);

  for (std::uint64_t h = 0; h < prefixes; ++h) {
    for (std::size_t f = 0; f < forms_.size(); ++f) {
      const Qubo& q = *forms_[f];
      // Contribution of the fixed high bits, and their coupling into the low ones.
      std::int64_t base = q.offset;
      std::fill(cross.begin(), cross.end(), 0);
      for (std::size_t a = 0; a < highBits; ++a) {
        if (((h >> a) & 1U) == 0) continue;
        const std::size_t va = low_ + a;
        base += q.Qp(va, va);
        for (std::size_t b = a + 1; b < highBits; ++b) {
          if ((h >> b) & 1U) base += q.Qp(va, low_ + b);
        }
        for (unsigned j = 0; j < low_; ++j) cross[j] += q.Qp(j, va);
      }
      linear_table(scratch, base, cross);
      k.sum_i64(blocks[f].data(), scratch.data(), lowTables_[f].data(), blockLen);
      views[f] = blocks[f];
    }
    cb(h << low_, views);
  }
}

std::vector<std::int64_t> qubo_table(const Qubo& q) {
  require_enumerable(q.n, 30);
  std::vector<std::int64_t> out(std::size_t{1} << q.n);
  BlockEnumerator e({&q});
  e.run([&](std::uint64_t base, std::span<const std::span<const std::int64_t>> v) {
    std::copy(v[0].begin(), v[0].end(), out.begin() + static_cast<std::ptrdiff_t>(base));
  });
  return out;
}

}  // namespace bigm
