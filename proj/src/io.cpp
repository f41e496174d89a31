#include "bigm/io.hpp"

#include <istream>

#include "bigm/error.hpp"

namespace bigm {
namespace {

json triplets(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0) out.push_back({i, j, m(i, j)});
    }
  }
  return out;
}

IntMatrix from_triplets(const json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array of [i, j, value] triplets");
  IntMatrix m(rows, cols);
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) throw InvalidArgument(std::string(what) + " entries must be [i, j, value]");
    const auto i = t[0].get<std::int64_t>();
    const auto k = t[1].get<std::int64_t>();
    if (i < 0 || k < 0 || static_cast<std::size_t>(i) >= rows || static_cast<std::size_t>(k) >= cols) {
      throw DimensionError(std::string(what) + " index out of range");
    }
    m(i, k) = checked::add(m(i, k), t[2].get<std::int64_t>());
  }
  return m;
}

json dense(const IntMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(std::vector<std::int64_t>(m.row(i).begin(), m.row(i).end()));
  return out;
}

IntMatrix from_dense(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) throw DimensionError(std::string(what) + " must be " + std::to_string(n) + " rows");
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = j[i].get<std::vector<std::int64_t>>();
    if (row.size() != n) throw DimensionError(std::string(what) + " rows must have " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = row[k];
  }
  return m;
}

json constraint_json(const QuadConstraint& c) { return {{"q", dense(c.q)}, {"l", c.l}, {"b", c.b}}; }

QuadConstraint constraint_from(const json& j, std::size_t n) {
  QuadConstraint c;
  c.q = j.contains("q") ? from_dense(j.at("q"), n, "q") : IntMatrix(n, n);
  c.l = j.value("l", std::vector<std::int64_t>(n, 0));
  if (c.l.size() != n) throw DimensionError("constraint l must have nVars entries");
  c.b = j.at("b").get<std::int64_t>();
  return c;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const Lcbo& lcbo) {
  return {{"n", lcbo.n()}, {"m", lcbo.m()}, {"scale", lcbo.scale()},
          {"Q", triplets(lcbo.Q())}, {"A", triplets(lcbo.A())}, {"b", lcbo.b()}};
}

json to_json(const InstanceFile& inst) {
  json j = to_json(inst.lcbo);
  if (!inst.cls.empty()) j["class"] = inst.cls;
  if (inst.feasibleHint) j["feasibleHint"] = to_bitstring(*inst.feasibleHint);
  return j;
}

InstanceFile instance_from_json(const json& j) {
  return guarded([&] {
    if (!j.is_object()) throw InvalidArgument("instance must be a JSON object");
    const auto n = j.at("n").get<std::size_t>();
    const auto b = j.value("b", std::vector<std::int64_t>{});
    const auto m = j.value("m", b.size());
    if (b.size() != m) throw DimensionError("b must have m entries");
    InstanceFile inst;
    inst.lcbo = Lcbo::make(from_triplets(j.at("Q"), n, n, "Q"), from_triplets(j.value("A", json::array()), m, n, "A"),
                           b, {}, j.value("scale", std::int64_t{1}));
    inst.cls = j.value("class", std::string{});
    if (j.contains("feasibleHint")) {
      inst.feasibleHint = from_bitstring(j.at("feasibleHint").get<std::string>());
      if (inst.feasibleHint->size() != n) throw DimensionError("feasibleHint must have n characters");
    }
    return inst;
  });
}

InstanceFile read_instance(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
  return instance_from_json(j);
}

json to_json(const PolyIntProgram& pip) {
  json eq = json::array(), ineq = json::array();
  for (const auto& c : pip.equalities) eq.push_back(constraint_json(c));
  for (const auto& c : pip.inequalities) ineq.push_back(constraint_json(c));
  return {{"nVars", pip.nVars}, {"Q", dense(pip.Q)},       {"L", pip.L},
          {"equalities", eq},   {"inequalities", ineq},   {"upperBounds", pip.upperBounds},
          {"scale", pip.scale}};
}

PolyIntProgram program_from_json(const json& j) {
  return guarded([&] {
    const auto n = j.at("nVars").get<std::size_t>();
    PolyIntProgram p = PolyIntProgram::empty(n, j.at("upperBounds").get<std::vector<std::int64_t>>());
    if (j.contains("Q")) p.Q = from_dense(j.at("Q"), n, "Q");
    if (j.contains("L")) p.L = j.at("L").get<std::vector<std::int64_t>>();
    for (const auto& c : j.value("equalities", json::array())) p.equalities.push_back(constraint_from(c, n));
    for (const auto& c : j.value("inequalities", json::array())) p.inequalities.push_back(constraint_from(c, n));
    p.scale = j.value("scale", std::int64_t{1});
    p.validate();
    return p;
  });
}

json to_json(const VariableMap& map) {
  json vars = json::array();
  for (std::size_t i = 0; i < map.integerBits.size(); ++i) {
    json bits = json::array();
    for (const auto& t : map.integerBits[i]) bits.push_back({{"binary", t.binary}, {"coefficient", t.coefficient}});
    vars.push_back({{"variable", i}, {"slack", i >= map.originalVars}, {"bits", bits}});
  }
  json products = json::array();
  for (const auto& p : map.products) products.push_back({{"w", p.w}, {"i", p.i}, {"j", p.j}});
  json slacks = json::array();
  for (const auto& s : map.slacks) {
    slacks.push_back({{"variable", s.variable}, {"constraint", s.constraint}, {"bound", s.bound}});
  }
  return {{"originalVars", map.originalVars}, {"binaryCount", map.binaryCount},
          {"integers", vars}, {"slacks", slacks}, {"products", products}};
}

json to_json(const PenaltyReport& r) {
  return {{"mEll1", r.mEll1},
          {"mSdp", r.mSdp},
          {"mOptimal", r.mOptimal ? json(*r.mOptimal) : json(nullptr)},
          {"delta", r.delta},
          {"fFeas", r.fFeas},
          {"fUncLower", r.fUncLower},
          {"feasiblePointUsed", to_bitstring(r.feasiblePointUsed)},
          {"feasibleStrategy", r.feasibleStrategy},
          {"feasibleNodes", r.feasibleNodes},
          {"sdpStatus", std::string(to_string(r.sdpStatus))},
          {"sdpIterations", r.sdpIterations},
          {"sdpCertifiedBound", r.sdpCertifiedBound},
          {"sdpPrimalResidual", r.sdpPrimalResidual},
          {"sdpDualResidual", r.sdpDualResidual},
          {"sdpFallback", r.sdpFallback}};
}

json to_json(const SpectrumReport& r) {
  json j = {{"M", r.M},
            {"E0", r.E0},
            {"E1", r.E1},
            {"Emax", r.Emax},
            {"groundDegeneracy", r.groundDegeneracy},
            {"deltaM", r.deltaM},
            {"delta0", optional_json(r.delta0)},
            {"EmaxF", r.EmaxF},
            {"EmaxC", r.EmaxC},
            {"normHc", r.normHc}};
  if (r.mStar) {
    j["observation3"] = {{"fStar", *r.fStar},
                         {"mStar", *r.mStar},
                         {"exact", r.exact},
                         {"deltaWithinGap", r.deltaWithinGap},
                         {"bound_i_holds", r.boundIHolds},
                         {"bound_ii_holds", r.boundIIHolds},
                         {"bound_iii_holds", r.boundIIIHolds},
                         {"bound_iii_rhs", r.boundIIIRhs},
                         {"bound_iii_corrected_holds", r.boundIIICorrectedHolds}};
  }
  return j;
}

json to_json(const RunResult& r) {
  json counts = json::object();
  for (const auto& [bits, c] : r.counts) counts[bits] = c;
  return {{"shots", r.shots},
          {"steps", r.steps},
          {"totalTime", r.totalTime},
          {"successProbability", r.successProbability},
          {"avgApproxRatio", optional_json(r.avgApproxRatio)},
          {"feasibleFraction", r.feasibleFraction},
          {"exactSuccessProbability", r.exactSuccessProbability},
          {"exactAvgApproxRatio", optional_json(r.exactAvgApproxRatio)},
          {"xMax", "worst feasible point"},
          {"counts", counts}};
}

json to_json(const BruteForceReport& r) {
  return {{"xStar", to_bitstring(r.xStar)},
          {"fStar", r.fStar},
          {"xStar1", r.xStar1 ? json(to_bitstring(*r.xStar1)) : json(nullptr)},
          {"fStar1", r.fStar1 ? json(*r.fStar1) : json(nullptr)},
          {"feasibleCount", r.feasibleCount},
          {"fMaxFeasible", r.fMaxFeasible},
          {"fMinUnconstrained", r.fMinUnconstrained},
          {"fMaxUnconstrained", r.fMaxUnconstrained}};
}

json to_json(const IsingHamiltonian& h) {
  json J = json::array();
  for (const auto& c : h.J) J.push_back({c.i, c.j, c.value});
  return {{"n", h.n}, {"h", h.h}, {"J", J}, {"constant", h.constant}, {"provenance", h.provenance}};
}

json sdp_summary(const SdpResult& r, std::int64_t certified) {
  return {{"status", std::string(to_string(r.status))},
          {"iterations", r.iterations},
          {"primalValue", r.primalValue},
          {"dualBound", std::isfinite(r.certifiedLowerBound) ? json(r.certifiedLowerBound) : json(nullptr)},
          {"certifiedLowerBound", certified},
          {"primalResidual", r.primalResidual},
          {"dualResidual", r.dualResidual}};
}

}  // namespace bigm
