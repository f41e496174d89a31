#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bigm/model.hpp"

namespace bigm {

// y^T q y + l^T y  (compared against b)
struct QuadConstraint {
  IntMatrix q;
  std::vector<std::int64_t> l;
  std::int64_t b = 0;

  std::int64_t lhs(std::span<const std::int64_t> y) const;
  bool operator==(const QuadConstraint&) const = default;
};

// Quadratically constrained quadratic program over bounded integers:
//   minimize y^T Q y + L^T y
//   s.t.     equalities:    y^T q_i y + l_i^T y  = b_i
//            inequalities:  y^T q_i y + l_i^T y >= b_i
//            0 <= y_i <= upperBounds_i,  y integer
struct PolyIntProgram {
  std::size_t nVars = 0;
  IntMatrix Q;
  std::vector<std::int64_t> L;
  std::vector<QuadConstraint> equalities;
  std::vector<QuadConstraint> inequalities;
  std::vector<std::int64_t> upperBounds;
  std::int64_t scale = 1;

  // Empty program with zero objective over `nVars` variables.
  static PolyIntProgram empty(std::size_t nVars, std::vector<std::int64_t> upperBounds);

  void validate() const;
  std::int64_t objective(std::span<const std::int64_t> y) const;
  bool satisfies(std::span<const std::int64_t> y) const;
  bool operator==(const PolyIntProgram&) const = default;
};

enum class ExpansionScheme {
  // Coefficients 1, 2, ..., 2^(K-2), U - (2^(K-1) - 1): exactly {0..U}.
  bounded,
  // Pure powers of two 1, 2, ..., 2^(K-1); may represent values above U.
  powersOfTwo,
};

// Where each integer variable of a program ended up after gadgetization.
struct VariableMap {
  struct Term {
    std::size_t binary;
    std::int64_t coefficient;
    bool operator==(const Term&) const = default;
  };
  struct Slack {
    std::size_t variable;    // integer variable index of z_i
    std::size_t constraint;  // index into the original inequality list
    std::int64_t bound;      // u_i
    QuadConstraint source;   // the inequality z_i absorbs
    bool operator==(const Slack&) const = default;
  };
  struct Product {
    std::size_t w;
    std::size_t i;
    std::size_t j;
    bool operator==(const Product&) const = default;
  };

  std::size_t originalVars = 0;
  std::vector<std::vector<Term>> integerBits;  // one entry per integer variable, slacks last
  std::vector<Slack> slacks;
  std::vector<Product> products;
  std::size_t binaryCount = 0;

  // Values of all integer variables (original and slack).
  std::vector<std::int64_t> decode(const Assignment& x) const;
  // Encodes values of the original variables. Slack values are derived from
  // their inequalities and product bits are set to x_i x_j.
  Assignment encode(std::span<const std::int64_t> y) const;
};

// Interval-arithmetic upper bound on y^T q y + l^T y - b over the box.
std::int64_t slack_upper_bound(const IntMatrix& q, std::span<const std::int64_t> l, std::int64_t b,
                               std::span<const std::int64_t> bounds);

// Step 1: each inequality becomes an equality with a fresh slack variable
// 0 <= z <= u appended after the existing variables.
PolyIntProgram inequalities_to_equalities(const PolyIntProgram& pip, std::vector<VariableMap::Slack>* slacks = nullptr);

// Step 2: integer variables become weighted sums of binaries.
std::pair<PolyIntProgram, VariableMap> binary_expand(const PolyIntProgram& pip,
                                                     ExpansionScheme scheme = ExpansionScheme::bounded);

// Coefficients used for an integer variable with the given upper bound.
std::vector<std::int64_t> expansion_coefficients(std::int64_t upper, ExpansionScheme scheme);

// Step 3: every product x_i x_j inside a constraint is replaced by a fresh
// binary w_ij, and p (3w + x_i x_j - 2 x_i w - 2 x_j w) joins the objective.
std::pair<PolyIntProgram, std::vector<VariableMap::Product>> linearize_quadratic_constraints(
    const PolyIntProgram& pip, std::int64_t p);

// The w-consistency term above, for one triple.
std::int64_t linearization_penalty(std::int64_t p, bool xi, bool xj, bool w);

struct GadgetOptions {
  ExpansionScheme scheme = ExpansionScheme::bounded;
  // Overrides the automatic choice (objective spread + delta) when set.
  std::int64_t productPenalty = 0;
};

// Steps 1-4 composed: the result is an Lcbo whose objective equals the
// program objective on every encoded feasible point.
std::pair<Lcbo, VariableMap> gadgetize(const PolyIntProgram& pip, std::int64_t delta, const GadgetOptions& opts = {});

}  // namespace bigm
