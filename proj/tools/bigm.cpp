#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bigm/anneal.hpp"
#include "bigm/bench.hpp"
#include "bigm/error.hpp"
#include "bigm/gadgets.hpp"
#include "bigm/instances.hpp"
#include "bigm/io.hpp"
#include "bigm/penalty.hpp"
#include "bigm/sdp.hpp"
#include "bigm/spectrum.hpp"

using namespace bigm;

namespace {

enum Exit { kOk = 0, kUsage = 2, kInfeasible = 3, kLimit = 4 };

int report_error(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}, {"exitCode", code}}.dump() << '\n';
  return code;
}

InstanceFile load_instance(const std::string& path) {
  if (path == "-") return read_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_instance(in);
}

json load_json(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw InvalidArgument("cannot open '" + path + "'");
    in = &file;
  }
  try {
    return json::parse(*in);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw InvalidArgument("cannot write '" + out + "'");
  f << j.dump(2) << '\n';
}

std::int64_t parse_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw InvalidArgument(std::string(what) + " must be an integer, got '" + s + "'");
  return v;
}

// "6..14" or "6,8,10"
std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const auto lo = parse_int(s.substr(0, dots), "size");
    const auto hi = parse_int(s.substr(dots + 2), "size");
    if (lo < 1 || hi < lo) throw InvalidArgument("size range must be lo..hi with 1 <= lo <= hi");
    for (auto n = lo; n <= hi; ++n) out.push_back(static_cast<std::size_t>(n));
    return out;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto v = parse_int(part, "size");
    if (v < 1) throw InvalidArgument("sizes must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw InvalidArgument("no sizes given");
  return out;
}

struct MChoice {
  std::int64_t M = 0;
  std::string recipe;
  std::optional<PenaltyReport> report;
};

MChoice resolve_m(const InstanceFile& inst, const std::string& spec, std::int64_t delta, const MSdpOptions& base) {
  MChoice c;
  c.recipe = spec;
  if (spec == "ell1") {
    c.M = m_ell1(inst.lcbo, delta);
  } else if (spec == "sdp") {
    MSdpOptions opts = base;
    if (inst.feasibleHint) opts.feasibleHint = inst.feasibleHint;
    c.report = m_sdp(inst.lcbo, delta, opts);
    c.M = c.report->mSdp;
  } else if (spec == "optimal") {
    c.M = optimal_m(inst.lcbo, delta);
  } else {
    c.M = parse_int(spec, "--M");
    c.recipe = "value";
    if (c.M < 0) throw InvalidArgument("--M must be non-negative");
  }
  return c;
}

json qubo_json(const Qubo& q) {
  json Q = json::array();
  for (std::size_t i = 0; i < q.n; ++i) {
    for (std::size_t j = i; j < q.n; ++j) {
      if (q.Qp(i, j) != 0) Q.push_back({i, j, q.Qp(i, j)});
    }
  }
  return {{"n", q.n}, {"Q", Q}, {"offset", q.offset}, {"scale", q.scale}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalty-weight selection and spectral diagnostics for constrained binary quadratic problems"};
  app.require_subcommand(1);

  std::string out;
  std::int64_t delta = 1;
  std::uint64_t seed = 0;
  std::uint64_t nodeBudget = std::uint64_t{1} << 22;
  std::size_t maxIter = SdpConfig{}.maxIter;
  double tol = SdpConfig{}.tol;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an instance (sparse, spp or portfolio)");
  std::string genClass;
  std::size_t genN = 10, genS = 5, genM = 0;
  double genDensity = 0.25, genGamma = 1.0;
  unsigned genW = 3;
  std::string pricesPath;
  gen->add_option("class", genClass, "Instance class")->required()->check(CLI::IsMember({"sparse", "spp", "portfolio"}));
  gen->add_option("--n", genN, "Variables (sparse), subsets (spp) or assets (portfolio)");
  gen->add_option("--s", genS, "Row sparsity (sparse)");
  gen->add_option("--m", genM, "Elements to cover (spp); default max(2, n/2)");
  gen->add_option("--density", genDensity, "Membership probability (spp)");
  gen->add_option("--gamma", genGamma, "Risk aversion (portfolio)");
  gen->add_option("--w", genW, "Partition number (portfolio)");
  gen->add_option("--prices", pricesPath, "Price CSV (portfolio); synthetic prices when omitted");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--out", out, "Output file (default stdout)");

  // reformulate
  auto* reform = app.add_subcommand("reformulate", "Choose M and emit the penalty report");
  std::string instPath, recipe = "sdp";
  bool emitQubo = false;
  reform->add_option("instance", instPath, "Instance JSON ('-' for stdin)")->required();
  reform->add_option("--recipe", recipe, "ell1, sdp or optimal")->check(CLI::IsMember({"ell1", "sdp", "optimal"}));
  reform->add_option("--delta", delta, "Required gap (scale units)");
  reform->add_option("--node-budget", nodeBudget, "Feasible-point search budget");
  reform->add_option("--max-iter", maxIter, "SDP iteration cap");
  reform->add_flag("--qubo", emitQubo, "Include the penalized QUBO");
  reform->add_option("--out", out, "Output file (default stdout)");

  // sdp-bound
  auto* sdpCmd = app.add_subcommand("sdp-bound", "Certified lower bound on the unconstrained minimum");
  bool paperFaithful = false;
  sdpCmd->add_option("instance", instPath, "Instance JSON")->required();
  sdpCmd->add_option("--tol", tol, "Residual tolerance");
  sdpCmd->add_option("--max-iter", maxIter, "Iteration cap");
  sdpCmd->add_flag("--no-corner", paperFaithful, "Drop the Y_00 = 1 constraint");
  sdpCmd->add_option("--out", out, "Output file (default stdout)");

  // spectrum
  auto* specCmd = app.add_subcommand("spectrum", "Exhaustive spectrum of H_f + M H_c");
  std::string mSpec = "sdp";
  specCmd->add_option("instance", instPath, "Instance JSON")->required();
  specCmd->add_option("--M", mSpec, "Integer value, or ell1 / sdp / optimal");
  specCmd->add_option("--delta", delta, "Gap used by the recipes and the checks");
  specCmd->add_option("--out", out, "Output file (default stdout)");

  // anneal
  auto* annealCmd = app.add_subcommand("anneal", "Trotterized adiabatic statevector run");
  AnnealConfig cfg;
  std::size_t budget = 0;
  std::string histogram;
  annealCmd->add_option("instance", instPath, "Instance JSON")->required();
  annealCmd->add_option("--M", mSpec, "Integer value, or ell1 / sdp / optimal");
  annealCmd->add_option("--delta", delta, "Gap used by the recipes");
  annealCmd->add_option("--time", cfg.totalTime, "Total evolution time");
  annealCmd->add_option("--steps", cfg.steps, "Trotter steps");
  annealCmd->add_option("--shots", cfg.shots, "Measurement shots");
  annealCmd->add_option("--seed", cfg.seed, "Sampling seed");
  annealCmd->add_option("--two-qubit-budget", budget, "Derive --steps from a ZZ gate budget");
  annealCmd->add_option("--histogram", histogram, "Histogram CSV path");
  annealCmd->add_option("--out", out, "Output file (default stdout)");

  // bench
  auto* benchCmd = app.add_subcommand("bench", "Batch benchmark, one CSV row per instance");
  BenchSpec bs;
  std::string sizes = "6..14";
  std::size_t seedCount = 50;
  std::uint64_t seedStart = 0;
  bs.threads = default_thread_count();
  benchCmd->add_option("--class", bs.cls, "sparse, spp or portfolio")->check(CLI::IsMember({"sparse", "spp", "portfolio"}));
  benchCmd->add_option("--sizes", sizes, "lo..hi or a comma list (portfolio: binaries N*w)");
  benchCmd->add_option("--seeds", seedCount, "Seeds per size");
  benchCmd->add_option("--seed-start", seedStart, "First seed");
  benchCmd->add_option("--s", bs.sparsity, "Row sparsity (sparse)");
  benchCmd->add_option("--m", bs.sppElements, "Elements (spp)");
  benchCmd->add_option("--density", bs.density, "Membership probability (spp)");
  benchCmd->add_option("--w", bs.w, "Partition number (portfolio)");
  benchCmd->add_option("--gamma", bs.gamma, "Risk aversion (portfolio)");
  benchCmd->add_option("--delta", bs.delta, "Required gap");
  benchCmd->add_option("--limit", bs.bruteForceLimit, "Largest n with gap columns");
  benchCmd->add_option("--threads", bs.threads, "Workers (default BIGM_THREADS or all cores)");
  benchCmd->add_flag("--timings", bs.timings, "Add wall-clock columns (breaks byte-identical output)");
  benchCmd->add_option("--out", out, "Output CSV (default stdout)");

  // gadgetize
  auto* gadCmd = app.add_subcommand("gadgetize", "Reduce a quadratically constrained integer program to an instance");
  std::string scheme = "bounded";
  std::int64_t productPenalty = 0;
  gadCmd->add_option("program", instPath, "Program JSON")->required();
  gadCmd->add_option("--delta", delta, "Gap for the product penalty");
  gadCmd->add_option("--scheme", scheme, "bounded or pow2")->check(CLI::IsMember({"bounded", "pow2"}));
  gadCmd->add_option("--product-penalty", productPenalty, "Override the linearization weight");
  gadCmd->add_option("--out", out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kUsage);
  }

  try {
    if (delta <= 0) throw InvalidArgument("--delta must be positive");

    if (*gen) {
      InstanceFile inst;
      inst.cls = genClass;
      if (genClass == "sparse") {
        inst.lcbo = gen_sparse_lcbo(genN, genS, seed);
      } else if (genClass == "spp") {
        inst.lcbo = gen_spp(genN, genM ? genM : std::max<std::size_t>(2, genN / 2), genDensity, seed);
      } else {
        PriceHistory h;
        if (!pricesPath.empty()) {
          std::ifstream in(pricesPath);
          if (!in) throw InvalidArgument("cannot open '" + pricesPath + "'");
          h = read_price_csv(in);
          if (gen->count("--n") && genN < h.assets.size()) {
            h.assets.resize(genN);
            for (auto& row : h.prices) row.resize(genN);
          }
        } else {
          h = synthetic_price_history(genN, 24, seed);
        }
        const PortfolioSpec ps = make_portfolio_spec(compute_returns_mu_sigma(h), genGamma, genW);
        auto [lcbo, map] = build_portfolio_lcbo(ps);
        inst.lcbo = std::move(lcbo);
        inst.feasibleHint = map.encode(greedy_portfolio(ps));
      }
      emit(to_json(inst), out);
    } else if (*reform) {
      const InstanceFile inst = load_instance(instPath);
      MSdpOptions opts;
      opts.nodeBudget = nodeBudget;
      opts.sdp.maxIter = maxIter;
      json j;
      std::int64_t M = 0;
      if (recipe == "sdp") {
        if (inst.feasibleHint) opts.feasibleHint = inst.feasibleHint;
        const PenaltyReport r = m_sdp(inst.lcbo, delta, opts);
        M = r.mSdp;
        j = to_json(r);
      } else if (recipe == "ell1") {
        M = m_ell1(inst.lcbo, delta);
        j = {{"mEll1", M}, {"delta", delta}};
      } else {
        M = optimal_m(inst.lcbo, delta);
        j = {{"mOptimal", M}, {"mEll1", m_ell1(inst.lcbo, delta)}, {"delta", delta}};
      }
      j["recipe"] = recipe;
      j["M"] = M;
      if (emitQubo) j["qubo"] = qubo_json(qubo_from_lcbo(inst.lcbo, M));
      emit(j, out);
    } else if (*sdpCmd) {
      const InstanceFile inst = load_instance(instPath);
      SdpConfig sc;
      sc.tol = tol;
      sc.maxIter = maxIter;
      const SdpResult r = solve(build_relaxation(inst.lcbo, paperFaithful), sc);
      json j = sdp_summary(r, certified_lower_bound(inst.lcbo, r));
      j["trivialLowerBound"] = trivial_lower_bound(inst.lcbo);
      emit(j, out);
    } else if (*specCmd) {
      const InstanceFile inst = load_instance(instPath);
      const MChoice m = resolve_m(inst, mSpec, delta, {});
      json j = to_json(check_observation3(inst.lcbo, m.M, delta));
      j["recipe"] = m.recipe;
      emit(j, out);
    } else if (*annealCmd) {
      const InstanceFile inst = load_instance(instPath);
      const MChoice m = resolve_m(inst, mSpec, delta, {});
      if (budget > 0) cfg.steps = steps_for_budget(ising_hamiltonian(inst.lcbo, m.M), budget);
      const RunResult r = run_anneal(inst.lcbo, m.M, cfg);
      json j = to_json(r);
      j["M"] = m.M;
      j["recipe"] = m.recipe;
      emit(j, out);
      if (!histogram.empty()) {
        std::ofstream h(histogram);
        if (!h) throw InvalidArgument("cannot write '" + histogram + "'");
        const BruteForceReport bf = brute_force_solve(inst.lcbo);
        h << "bitstring,count,feasible,objective,approxRatio\r\n";
        for (const auto& [bits, c] : r.counts) {
          const Assignment x = from_bitstring(bits);
          const auto ar = approximation_ratio(inst.lcbo, bf, x);
          h << bits << ',' << c << ',' << (is_feasible(inst.lcbo, x) ? "true" : "false") << ','
            << objective_value(inst.lcbo, x) << ',' << (ar ? std::to_string(*ar) : "") << "\r\n";
        }
      }
    } else if (*benchCmd) {
      bs.sizes = parse_sizes(sizes);
      for (std::size_t i = 0; i < seedCount; ++i) bs.seeds.push_back(seedStart + i);
      if (bs.threads == 0) throw InvalidArgument("--threads must be positive");
      const auto rows = run_bench(bs);
      if (out.empty() || out == "-") {
        write_bench_csv(std::cout, rows, bs.timings);
      } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw InvalidArgument("cannot write '" + out + "'");
        write_bench_csv(f, rows, bs.timings);
      }
    } else if (*gadCmd) {
      const PolyIntProgram pip = program_from_json(load_json(instPath));
      GadgetOptions go;
      go.scheme = scheme == "pow2" ? ExpansionScheme::powersOfTwo : ExpansionScheme::bounded;
      go.productPenalty = productPenalty;
      auto [lcbo, map] = gadgetize(pip, delta, go);
      json j = to_json(InstanceFile{lcbo, "gadgetized", std::nullopt});
      j["variableMap"] = to_json(map);
      emit(j, out);
    }
  } catch (const InfeasibleError& e) {
    return report_error(e.kind(), e.what(), kInfeasible);
  } catch (const LimitError& e) {
    return report_error(e.kind(), e.what(), kLimit);
  } catch (const OverflowError& e) {
    return report_error(e.kind(), e.what(), kLimit);
  } catch (const Error& e) {
    return report_error(e.kind(), e.what(), kUsage);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
  return kOk;
}
