#include "bigm/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "bigm/error.hpp"
#include "bigm/instances.hpp"
#include "bigm/penalty.hpp"
#include "bigm/spectrum.hpp"

namespace bigm {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return fmt(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

BenchmarkRow bench_instance(const BenchSpec& spec, std::size_t n, std::uint64_t seed) {
  BenchmarkRow row;
  row.cls = spec.cls;
  row.n = n;
  row.seed = seed;
  row.instanceId = spec.cls + "-" + std::to_string(n) + "-" + std::to_string(seed);
  const auto t0 = Clock::now();
  try {
    Lcbo lcbo;
    MSdpOptions opts;
    if (spec.cls == "sparse") {
      lcbo = gen_sparse_lcbo(n, std::min(spec.sparsity, n), seed);
    } else if (spec.cls == "spp") {
      const std::size_t m = spec.sppElements ? spec.sppElements : std::max<std::size_t>(2, n / 2);
      lcbo = gen_spp(n, m, spec.density, seed);
    } else if (spec.cls == "portfolio") {
      if (spec.w == 0 || n % spec.w != 0) throw InvalidArgument("portfolio size must be a multiple of w");
      const PortfolioSpec ps = gen_portfolio_spec(n / spec.w, spec.w, spec.gamma, seed);
      auto [l, map] = build_portfolio_lcbo(ps);
      lcbo = std::move(l);
      opts.feasibleHint = map.encode(greedy_portfolio(ps));
    } else {
      throw InvalidArgument("unknown instance class '" + spec.cls + "'");
    }

    const auto tSdp = Clock::now();
    const PenaltyReport rep = m_sdp(lcbo, spec.delta, opts);
    row.sdpSeconds = seconds_since(tSdp);
    row.mEll1 = rep.mEll1;
    row.mSdp = rep.mSdp;
    row.sdpIterations = rep.sdpIterations;
    row.sdpStatus = std::string(to_string(rep.sdpStatus)) + (rep.sdpFallback ? "+fallback" : "");
    row.feasibleStrategy = rep.feasibleStrategy;

    if (lcbo.n() <= spec.bruteForceLimit) {
      row.mOptimal = optimal_m(lcbo, spec.delta, spec.bruteForceLimit);
      const SpectrumReport ell1 = full_spectrum(lcbo, rep.mEll1, spec.bruteForceLimit);
      const SpectrumReport sdp = full_spectrum(lcbo, rep.mSdp, spec.bruteForceLimit);
      row.delta0 = sdp.delta0;
      row.deltaEll1 = ell1.deltaM;
      row.deltaSdp = sdp.deltaM;
      if (ell1.deltaM > 0) row.gapRatio = sdp.deltaM / ell1.deltaM;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.totalSeconds = seconds_since(t0);
  return row;
}

std::vector<BenchmarkRow> run_bench(const BenchSpec& spec) {
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t n : spec.sizes) {
    for (std::uint64_t s : spec.seeds) jobs.emplace_back(n, s);
  }
  std::vector<BenchmarkRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) rows[i] = bench_instance(spec, jobs[i].first, jobs[i].second);
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(spec.threads, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool timings) {
  out << "instanceId,class,n,seed,mEll1,mSdp,mOptimal,delta0,deltaEll1,deltaSdp,gapRatio,sdpIterations,sdpStatus,"
         "feasibleStrategy";
  if (timings) out << ",sdpSeconds,totalSeconds";
  out << ",error\r\n";
  for (const auto& r : rows) {
    out << csv_field(r.instanceId) << ',' << csv_field(r.cls) << ',' << r.n << ',' << r.seed << ',' << opt(r.mEll1)
        << ',' << opt(r.mSdp) << ',' << opt(r.mOptimal) << ',' << opt(r.delta0) << ',' << opt(r.deltaEll1) << ','
        << opt(r.deltaSdp) << ',' << opt(r.gapRatio) << ',' << opt(r.sdpIterations) << ',' << csv_field(r.sdpStatus)
        << ',' << csv_field(r.feasibleStrategy);
    if (timings) out << ',' << fmt(r.sdpSeconds) << ',' << fmt(r.totalSeconds);
    out << ',' << csv_field(r.error) << "\r\n";
  }
}

std::size_t default_thread_count() {
  if (const char* env = std::getenv("BIGM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bigm
