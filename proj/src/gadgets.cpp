#include "bigm/gadgets.hpp"

#include <bit>
#include <map>

#include "bigm/error.hpp"

namespace bigm {
namespace {

std::int64_t quad_form(const IntMatrix& q, std::span<const std::int64_t> l, std::span<const std::int64_t> y) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    if (y[i] == 0) continue;
    for (std::size_t j = 0; j < q.cols(); ++j) {
      if (q(i, j) != 0 && y[j] != 0) total = checked::add(total, checked::mul(q(i, j), checked::mul(y[i], y[j])));
    }
  }
  for (std::size_t i = 0; i < l.size(); ++i) total = checked::add(total, checked::mul(l[i], y[i]));
  return total;
}

IntMatrix pad(const IntMatrix& m, std::size_t n) {
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

std::vector<std::int64_t> pad(const std::vector<std::int64_t>& v, std::size_t n) {
  std::vector<std::int64_t> out(v);
  out.resize(n, 0);
  return out;
}

void check_shape(const QuadConstraint& c, std::size_t n, const char* what) {
  if (c.q.rows() != n || c.q.cols() != n || c.l.size() != n) {
    throw DimensionError(std::string(what) + " constraint does not match the variable count");
  }
}

// Writes `value` in the expansion given by `coeffs` (see expansion_coefficients).
void decompose(std::int64_t value, std::span<const std::int64_t> coeffs, std::span<const VariableMap::Term> terms,
               Assignment& x) {
  const std::size_t k = coeffs.size();
  if (k == 0) {
    if (value != 0) throw InvalidArgument("value outside the variable's range");
    return;
  }
  std::int64_t rest = value;
  const std::int64_t lowMax = (std::int64_t{1} << (k - 1)) - 1;
  if (rest > lowMax) {
    rest -= coeffs[k - 1];
    x[terms[k - 1].binary] = 1;
  }
  if (rest < 0 || rest > lowMax) throw InvalidArgument("value outside the variable's range");
  for (std::size_t b = 0; b + 1 < k; ++b) x[terms[b].binary] = static_cast<std::uint8_t>((rest >> b) & 1);
}

}  // namespace

std::int64_t QuadConstraint::lhs(std::span<const std::int64_t> y) const { return quad_form(q, l, y); }

PolyIntProgram PolyIntProgram::empty(std::size_t nVars, std::vector<std::int64_t> upperBounds) {
  PolyIntProgram p;
  p.nVars = nVars;
  p.Q = IntMatrix(nVars, nVars);
  p.L.assign(nVars, 0);
  p.upperBounds = std::move(upperBounds);
  p.validate();
  return p;
}

void PolyIntProgram::validate() const {
  if (Q.rows() != nVars || Q.cols() != nVars) throw DimensionError("objective matrix must be nVars x nVars");
  if (L.size() != nVars) throw DimensionError("linear objective must have nVars entries");
  if (upperBounds.size() != nVars) throw DimensionError("one upper bound per variable required");
  for (std::int64_t u : upperBounds) {
    if (u < 0) throw InvalidArgument("upper bounds must be non-negative");
  }
  for (const auto& c : equalities) check_shape(c, nVars, "equality");
  for (const auto& c : inequalities) check_shape(c, nVars, "inequality");
  if (scale < 1) throw InvalidArgument("scale must be at least 1");
}

std::int64_t PolyIntProgram::objective(std::span<const std::int64_t> y) const {
  if (y.size() != nVars) throw DimensionError("point has the wrong number of variables");
  return quad_form(Q, L, y);
}

bool PolyIntProgram::satisfies(std::span<const std::int64_t> y) const {
  if (y.size() != nVars) throw DimensionError("point has the wrong number of variables");
  for (std::size_t i = 0; i < nVars; ++i) {
    if (y[i] < 0 || y[i] > upperBounds[i]) return false;
  }
  for (const auto& c : equalities) {
    if (c.lhs(y) != c.b) return false;
  }
  for (const auto& c : inequalities) {
    if (c.lhs(y) < c.b) return false;
  }
  return true;
}

std::int64_t slack_upper_bound(const IntMatrix& q, std::span<const std::int64_t> l, std::int64_t b,
                               std::span<const std::int64_t> bounds) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    for (std::size_t j = 0; j < q.cols(); ++j) {
      if (q(i, j) > 0) total = checked::add(total, checked::mul(q(i, j), checked::mul(bounds[i], bounds[j])));
    }
  }
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] > 0) total = checked::add(total, checked::mul(l[i], bounds[i]));
  }
  return checked::sub(total, b);
}

PolyIntProgram inequalities_to_equalities(const PolyIntProgram& pip, std::vector<VariableMap::Slack>* slacks) {
  pip.validate();
  const std::size_t n = pip.nVars;
  const std::size_t total = n + pip.inequalities.size();

  PolyIntProgram out;
  out.nVars = total;
  out.Q = pad(pip.Q, total);
  out.L = pad(pip.L, total);
  out.upperBounds = pad(pip.upperBounds, total);
  out.scale = pip.scale;
  for (const auto& c : pip.equalities) out.equalities.push_back({pad(c.q, total), pad(c.l, total), c.b});

  for (std::size_t i = 0; i < pip.inequalities.size(); ++i) {
    const auto& c = pip.inequalities[i];
    const std::int64_t u = slack_upper_bound(c.q, c.l, c.b, pip.upperBounds);
    if (u < 0) throw InfeasibleError("inequality " + std::to_string(i) + " cannot hold anywhere in the box");
    QuadConstraint eq{pad(c.q, total), pad(c.l, total), c.b};
    eq.l[n + i] = -1;
    out.equalities.push_back(std::move(eq));
    out.upperBounds[n + i] = u;
    if (slacks != nullptr) slacks->push_back({n + i, i, u, c});
  }
  return out;
}

std::vector<std::int64_t> expansion_coefficients(std::int64_t upper, ExpansionScheme scheme) {
  if (upper < 0) throw InvalidArgument("upper bound must be non-negative");
  const int k = std::bit_width(static_cast<std::uint64_t>(upper));
  std::vector<std::int64_t> coeffs;
  for (int b = 0; b + 1 < k; ++b) coeffs.push_back(std::int64_t{1} << b);
  if (k > 0) {
    coeffs.push_back(scheme == ExpansionScheme::bounded ? upper - ((std::int64_t{1} << (k - 1)) - 1)
                                                        : std::int64_t{1} << (k - 1));
  }
  return coeffs;
}

std::pair<PolyIntProgram, VariableMap> binary_expand(const PolyIntProgram& pip, ExpansionScheme scheme) {
  pip.validate();
  if (!pip.inequalities.empty()) throw InvalidArgument("binary_expand expects inequalities to be removed first");

  VariableMap map;
  map.originalVars = pip.nVars;
  map.integerBits.resize(pip.nVars);
  std::size_t next = 0;
  for (std::size_t i = 0; i < pip.nVars; ++i) {
    for (std::int64_t a : expansion_coefficients(pip.upperBounds[i], scheme)) map.integerBits[i].push_back({next++, a});
  }
  map.binaryCount = next;

  auto expand_quad = [&](const IntMatrix& q, const std::vector<std::int64_t>& l) {
    IntMatrix qn(next, next);
    std::vector<std::int64_t> ln(next, 0);
    for (std::size_t i = 0; i < pip.nVars; ++i) {
      for (const auto& ti : map.integerBits[i]) {
        ln[ti.binary] = checked::add(ln[ti.binary], checked::mul(l[i], ti.coefficient));
        for (std::size_t j = 0; j < pip.nVars; ++j) {
          if (q(i, j) == 0) continue;
          for (const auto& tj : map.integerBits[j]) {
            const std::int64_t c = checked::mul(q(i, j), checked::mul(ti.coefficient, tj.coefficient));
            qn(ti.binary, tj.binary) = checked::add(qn(ti.binary, tj.binary), c);
          }
        }
      }
    }
    return std::pair{std::move(qn), std::move(ln)};
  };

  PolyIntProgram out;
  out.nVars = next;
  std::tie(out.Q, out.L) = expand_quad(pip.Q, pip.L);
  for (const auto& c : pip.equalities) {
    auto [q, l] = expand_quad(c.q, c.l);
    out.equalities.push_back({std::move(q), std::move(l), c.b});
  }
  out.upperBounds.assign(next, 1);
  out.scale = pip.scale;
  return {std::move(out), std::move(map)};
}

std::int64_t linearization_penalty(std::int64_t p, bool xi, bool xj, bool w) {
  const std::int64_t a = xi, b = xj, c = w;
  return p * (3 * c + a * b - 2 * a * c - 2 * b * c);
}

std::pair<PolyIntProgram, std::vector<VariableMap::Product>> linearize_quadratic_constraints(const PolyIntProgram& pip,
                                                                                             std::int64_t p) {
  pip.validate();
  if (p <= 0) throw InvalidArgument("linearization penalty p must be positive");
  if (!pip.inequalities.empty()) throw InvalidArgument("linearization expects equality constraints only");
  for (std::int64_t u : pip.upperBounds) {
    if (u > 1) throw InvalidArgument("linearization expects binary variables");
  }
  const std::size_t n = pip.nVars;

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pairs;
  for (const auto& c : pip.equalities) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (checked::add(c.q(i, j), c.q(j, i)) != 0) pairs.emplace(std::pair{i, j}, 0);
      }
    }
  }
  std::size_t next = n;
  std::vector<VariableMap::Product> products;
  for (auto& [key, w] : pairs) {
    w = next++;
    products.push_back({w, key.first, key.second});
  }

  PolyIntProgram out;
  out.nVars = next;
  out.Q = pad(pip.Q, next);
  out.L = pad(pip.L, next);
  out.upperBounds = pad(pip.upperBounds, next);
  out.scale = pip.scale;
  for (std::size_t k = n; k < next; ++k) out.upperBounds[k] = 1;

  for (const auto& c : pip.equalities) {
    QuadConstraint lin{IntMatrix(next, next), pad(c.l, next), c.b};
    for (std::size_t i = 0; i < n; ++i) {
      lin.l[i] = checked::add(lin.l[i], c.q(i, i));
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::int64_t coeff = checked::add(c.q(i, j), c.q(j, i));
        if (coeff != 0) {
          const std::size_t w = pairs.at({i, j});
          lin.l[w] = checked::add(lin.l[w], coeff);
        }
      }
    }
    out.equalities.push_back(std::move(lin));
  }

  for (const auto& pr : products) {
    out.L[pr.w] = checked::add(out.L[pr.w], checked::mul(3, p));
    out.Q(pr.i, pr.j) = checked::add(out.Q(pr.i, pr.j), p);
    out.Q(pr.i, pr.w) = checked::add(out.Q(pr.i, pr.w), checked::mul(-2, p));
    out.Q(pr.j, pr.w) = checked::add(out.Q(pr.j, pr.w), checked::mul(-2, p));
  }
  return {std::move(out), std::move(products)};
}

std::pair<Lcbo, VariableMap> gadgetize(const PolyIntProgram& pip, std::int64_t delta, const GadgetOptions& opts) {
  if (delta <= 0) throw InvalidArgument("delta must be positive");
  std::vector<VariableMap::Slack> slacks;
  const PolyIntProgram step1 = inequalities_to_equalities(pip, &slacks);
  auto [step2, map] = binary_expand(step1, opts.scheme);
  map.originalVars = pip.nVars;
  map.slacks = std::move(slacks);

  std::int64_t p = opts.productPenalty;
  if (p <= 0) {
    // Any inconsistent w costs at least p, which exceeds the objective's spread.
    std::int64_t spread = 0;
    for (std::int64_t v : step2.Q.data()) spread = checked::add(spread, checked::abs(v));
    for (std::int64_t v : step2.L) spread = checked::add(spread, checked::abs(v));
    p = checked::add(spread, delta);
  }
  auto [step3, products] = linearize_quadratic_constraints(step2, p);
  map.products = std::move(products);
  map.binaryCount = step3.nVars;

  // Step 4: x_i^2 = x_i moves L onto the diagonal.
  const std::size_t n = step3.nVars;
  IntMatrix A(step3.equalities.size(), n);
  std::vector<std::int64_t> b;
  for (std::size_t r = 0; r < step3.equalities.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) A(r, j) = step3.equalities[r].l[j];
    b.push_back(step3.equalities[r].b);
  }
  Lcbo lcbo = Lcbo::make(step3.Q, std::move(A), std::move(b), step3.L, step3.scale);
  return {std::move(lcbo), std::move(map)};
}

std::vector<std::int64_t> VariableMap::decode(const Assignment& x) const {
  if (x.size() != binaryCount) throw DimensionError("assignment length differs from the binary count");
  std::vector<std::int64_t> y(integerBits.size(), 0);
  for (std::size_t i = 0; i < integerBits.size(); ++i) {
    for (const auto& t : integerBits[i]) {
      if (x[t.binary]) y[i] += t.coefficient;
    }
  }
  return y;
}

Assignment VariableMap::encode(std::span<const std::int64_t> y) const {
  if (y.size() != originalVars) throw DimensionError("encode expects one value per original variable");
  Assignment x(binaryCount, 0);
  auto write = [&](std::size_t var, std::int64_t value) {
    std::vector<std::int64_t> coeffs;
    for (const auto& t : integerBits[var]) coeffs.push_back(t.coefficient);
    decompose(value, coeffs, integerBits[var], x);
  };
  for (std::size_t i = 0; i < originalVars; ++i) write(i, y[i]);
  for (const auto& s : slacks) {
    const std::int64_t z = checked::sub(s.source.lhs(y), s.source.b);
    if (z < 0 || z > s.bound) throw InvalidArgument("point violates an inequality; no slack value exists");
    write(s.variable, z);
  }
  for (const auto& pr : products) x[pr.w] = x[pr.i] & x[pr.j];
  return x;
}

}  // namespace bigm
