#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "bigm/anneal.hpp"
#include "bigm/gadgets.hpp"
#include "bigm/instances.hpp"
#include "bigm/model.hpp"
#include "bigm/penalty.hpp"
#include "bigm/sdp.hpp"
#include "bigm/spectrum.hpp"

namespace bigm {

using json = nlohmann::ordered_json;

// Instance file: {"n", "m", "scale", "Q": [[i, j, v], ...], "A": [[r, j, v], ...], "b": [...]}
// with sparse triplets (Q upper-triangular), plus optional "class" and a
// "feasibleHint" bitstring.
struct InstanceFile {
  Lcbo lcbo;
  std::string cls;
  std::optional<Assignment> feasibleHint;
};

json to_json(const Lcbo& lcbo);
json to_json(const InstanceFile& inst);
InstanceFile instance_from_json(const json& j);
InstanceFile read_instance(std::istream& in);

json to_json(const PolyIntProgram& pip);
PolyIntProgram program_from_json(const json& j);

json to_json(const VariableMap& map);
json to_json(const PenaltyReport& r);
json to_json(const SpectrumReport& r);
json to_json(const RunResult& r);
json to_json(const BruteForceReport& r);
json to_json(const IsingHamiltonian& h);
json sdp_summary(const SdpResult& r, std::int64_t certified);

}  // namespace bigm
