#include "liouville/walker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/series.hpp"

namespace liouville {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// splitmix64; one independent stream per sample so the estimate is a pure
// function of (graph, config) and never of scheduling.
struct SplitMix {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }
  // in (0, 1]; never 0, so -log is finite
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
};

SplitMix stream_for(std::uint64_t seed, std::uint64_t index) {
  return SplitMix{mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                  mix64(index * 0x94d049bb133111ebULL + 0xbf58476d1ce4e5b9ULL)};
}

struct WalkTables {
  std::vector<double> rate;        // (1/m) * sum b, jump rate of the walk
  std::vector<double> cum;         // per-vertex running edge-weight sums (CSR layout)
  std::vector<std::size_t> first;  // segment offsets into cum
  std::vector<char> absorbing;
};

WalkTables build_tables(const FiniteGraph& g, const std::vector<char>& absorbing) {
  const std::size_t n = g.vertex_count();
  WalkTables t;
  t.absorbing = absorbing;
  t.rate.resize(n);
  t.first.resize(n + 1, 0);
  for (VertexId v = 0; v < n; ++v) t.first[v + 1] = t.first[v] + g.neighbors(v).size();
  t.cum.resize(t.first[n]);
  for (VertexId v = 0; v < n; ++v) {
    double run = 0.0;
    std::size_t k = t.first[v];
    for (const Edge& e : g.neighbors(v)) { run += e.weight; t.cum[k++] = run; }
    t.rate[v] = run / g.measure(v);
  }
  return t;
}

// The truncated picture is only faithful if every frontier vertex the walk can
// touch is absorbing; otherwise trajectories would need edges we do not have.
void check_absorbing_covers_frontier(const FiniteGraph& g, VertexId start,
                                     const std::vector<char>& absorbing, double t_max) {
  if (absorbing[start]) return;
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> queue{start};
  seen[start] = 1;
  bool touches_absorbing = false;
  while (!queue.empty()) {
    VertexId v = queue.back();
    queue.pop_back();
    if (g.is_frontier(v))
      throw SpecError("walk from '" + g.label(start) + "' can reach non-absorbing frontier vertex '" +
                      g.label(v) + "'; its edges are incomplete");
    for (const Edge& e : g.neighbors(v)) {
      if (absorbing[e.to]) { touches_absorbing = true; continue; }
      if (!seen[e.to]) { seen[e.to] = 1; queue.push_back(e.to); }
    }
  }
  if (!touches_absorbing && !(t_max < std::numeric_limits<double>::infinity()))
    throw SpecError("no absorbing vertex is reachable and t_max is infinite; the walk never ends");
}

struct SampleResult {
  double time = 0.0;
  bool absorbed = false;
};

SampleResult run_one(const FiniteGraph& g, const WalkTables& t, VertexId start,
                     double t_max, SplitMix rng) {
  VertexId v = start;
  double clock = 0.0;
  while (!t.absorbing[v]) {
    clock += -std::log(rng.uniform()) / t.rate[v];
    if (clock > t_max) return {t_max, false};  // censored: still alive at t_max
    const std::size_t lo = t.first[v], hi = t.first[v + 1];
    const double pick = rng.uniform() * t.cum[hi - 1];
    const std::size_t k =
        std::lower_bound(t.cum.begin() + lo, t.cum.begin() + hi, pick) - t.cum.begin();
    v = g.neighbors(v)[std::min(k, hi - 1) - lo].to;
  }
  return {clock, true};
}

int thread_count(std::int64_t n_samples) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("LIOUVILLE_LAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::min<long>(hw, std::min<long>(v, 64));
  }
  const int by_work = static_cast<int>(n_samples / 4096) + 1;
  return std::max(1, std::min(hw, by_work));
}

// Runs all samples (chunked over threads) and leaves results in sample order,
// so any later reduction is independent of the thread count.
std::vector<SampleResult> run_all(const FiniteGraph& g, const WalkTables& t, VertexId start,
                                  double t_max, std::int64_t n, std::uint64_t seed) {
  std::vector<SampleResult> out(static_cast<std::size_t>(n));
  const int workers = thread_count(n);
  auto body = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i)
      out[static_cast<std::size_t>(i)] =
          run_one(g, t, start, t_max, stream_for(seed, static_cast<std::uint64_t>(i)));
  };
  if (workers == 1) {
    body(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk, hi = std::min<std::int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace

WalkStats simulate_exit(const FiniteGraph& g, const WalkConfig& cfg) {
  if (cfg.n_samples < 1) throw SpecError("n_samples must be >= 1");
  if (!(cfg.t_max > 0)) throw SpecError("t_max must be positive");
  const VertexId start = g.vertex(cfg.start);
  std::vector<char> absorbing(g.vertex_count(), 0);
  if (cfg.absorbing.empty()) throw SpecError("absorbing set is empty");
  for (const std::string& label : cfg.absorbing) absorbing[g.vertex(label)] = 1;
  check_absorbing_covers_frontier(g, start, absorbing, cfg.t_max);

  WalkStats stats;
  if (absorbing[start]) {  // absorbed immediately, exit time 0
    stats.count_absorbed = cfg.n_samples;
    return stats;
  }
  const WalkTables tables = build_tables(g, absorbing);
  const std::vector<SampleResult> res =
      run_all(g, tables, start, cfg.t_max, cfg.n_samples, cfg.seed);

  CompensatedSum sum;
  for (const SampleResult& r : res) {
    if (r.absorbed) { sum.add(r.time); ++stats.count_absorbed; }
    else ++stats.count_censored;
  }
  if (stats.count_absorbed == 0) return stats;
  stats.mean = sum.value() / static_cast<double>(stats.count_absorbed);
  CompensatedSum sq;
  for (const SampleResult& r : res)
    if (r.absorbed) { const double d = r.time - stats.mean; sq.add(d * d); }
  if (stats.count_absorbed > 1)
    stats.variance = sq.value() / static_cast<double>(stats.count_absorbed - 1);
  stats.std_error = std::sqrt(stats.variance / static_cast<double>(stats.count_absorbed));
  return stats;
}

SurvivalEstimate survival_probability(const FiniteGraph& g, const std::string& x0_label,
                                      std::int64_t R, double t, std::int64_t n,
                                      std::uint64_t seed) {
  if (n < 1) throw SpecError("n must be >= 1");
  if (t < 0) throw SpecError("t must be >= 0");
  if (R < 1) throw SpecError("R must be >= 1");
  const VertexId x0 = g.vertex(x0_label);
  const SphereDecomposition dec = sphere_decompose(g);
  std::vector<char> absorbing(g.vertex_count(), 0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (dec.radius[v] >= R) absorbing[v] = 1;
  if (absorbing[x0]) throw SpecError("start vertex '" + x0_label + "' lies outside B_" +
                                     std::to_string(R - 1));
  check_absorbing_covers_frontier(g, x0, absorbing, t);

  SurvivalEstimate est;
  est.n_samples = n;
  if (t == 0.0) {  // nothing has moved yet
    est.probability = 1.0;
    return est;
  }
  const WalkTables tables = build_tables(g, absorbing);
  const std::vector<SampleResult> res = run_all(g, tables, x0, t, n, seed);
  std::int64_t alive = 0;
  for (const SampleResult& r : res)
    if (!r.absorbed) ++alive;  // censored at t means still inside B_R
  const double p = static_cast<double>(alive) / static_cast<double>(n);
  est.probability = p;
  est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return est;
}

}  // namespace liouville
