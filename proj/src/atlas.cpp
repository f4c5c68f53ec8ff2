// Behavior-map computation and signature extraction.

#include "atlas/atlas.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <set>
#include <sstream>
#include <thread>

#include "atlas/errors.hpp"
#include "atlas/perception.hpp"
#include "atlas/planner.hpp"

namespace atlas {

void validate_grid(const GridSpec& spec) {
  auto check_axis = [](const std::vector<double>& v, const char* name, double lo_ok,
                       double hi_ok, bool hi_inclusive) {
    if (v.size() < 3)
      throw ValidationError(std::string("grid: ") + name + " axis needs at least 3 samples");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const bool in_range = v[i] >= lo_ok && (hi_inclusive ? v[i] <= hi_ok : v[i] < hi_ok);
      if (!in_range)
        throw ValidationError(std::string("grid: ") + name + " sample out of range");
      if (i > 0 && !(v[i] > v[i - 1]))
        throw ValidationError(std::string("grid: ") + name +
                              " samples must be strictly increasing");
    }
  };
  check_axis(spec.gamma_samples, "gamma", 0.0, 1.0, /*hi_inclusive=*/false);
  check_axis(spec.p_samples, "p", 0.0, 1.0, /*hi_inclusive=*/true);
}

namespace {

std::vector<double> linspace(int count, double lo, double hi) {
  if (count < 3) throw ValidationError("grid: axis needs at least 3 samples");
  if (!(lo < hi)) throw ValidationError("grid: axis range must satisfy lo < hi");
  std::vector<double> v(count);
  const double span = hi - lo;
  for (int i = 0; i < count; ++i) v[i] = lo + span * i / (count - 1);
  // Pin the endpoints so ranges like p_hi = 1.0 are hit exactly.
  v.front() = lo;
  v.back() = hi;
  return v;
}

int env_thread_cap() {
  const char* env = std::getenv("ATLAS_THREADS");
  if (env == nullptr) return 0;
  char* end = nullptr;
  const long cap = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || cap < 1) return 0;  // malformed: ignore
  return static_cast<int>(cap);
}

std::string format_cell(double gamma, double p) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(gamma=%.6g, p=%.6g)", gamma, p);
  return buf;
}

// Run-length encodes an edge's label sequence, dropping runs shorter than
// min_run by merging them into the preceding run.
int count_switches(const std::vector<int>& seq, int min_run) {
  std::vector<std::pair<int, int>> runs;  // label, length
  for (int label : seq) {
    if (!runs.empty() && runs.back().first == label) {
      ++runs.back().second;
    } else {
      runs.push_back({label, 1});
    }
  }
  if (min_run > 1) {
    std::vector<std::pair<int, int>> kept;
    for (const auto& run : runs) {
      if (run.second < min_run && !kept.empty()) continue;  // absorb short run
      if (!kept.empty() && kept.back().first == run.first) {
        kept.back().second += run.second;
      } else {
        kept.push_back(run);
      }
    }
    runs.swap(kept);
  }
  return runs.empty() ? 0 : static_cast<int>(runs.size()) - 1;
}

}  // namespace

int resolve_thread_count(int requested, int num_jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  const int cap = env_thread_cap();
  if (cap > 0) n = std::min(n, cap);
  return std::min(n, std::max(1, num_jobs));
}

GridSpec make_grid(int gamma_count, double gamma_lo, double gamma_hi, int p_count,
                   double p_lo, double p_hi) {
  GridSpec spec;
  spec.gamma_samples = linspace(gamma_count, gamma_lo, gamma_hi);
  spec.p_samples = linspace(p_count, p_lo, p_hi);
  validate_grid(spec);
  return spec;
}

GridSpec default_grid(int resolution) {
  return make_grid(resolution, kDefaultGammaLo, kDefaultGammaHi, resolution, kDefaultPLo,
                   kDefaultPHi);
}

BehaviorMap compute_behavior_map(const World& world, const GridSpec& spec,
                                 const SolveOptions& options) {
  validate_grid(spec);
  if (!(options.tol > 0.0)) throw ValidationError("solve options: tol must be positive");
  if (options.max_iter < 1) throw ValidationError("solve options: max_iter must be >= 1");

  BehaviorMap map;
  map.spec = spec;
  map.world_id = world.id;
  map.palette = label_names(world);

  const int gamma_count = spec.gamma_count();
  const int p_count = spec.p_count();
  const int num_cells = gamma_count * p_count;
  map.labels.assign(static_cast<std::size_t>(num_cells), -1);

  const int num_threads = resolve_thread_count(options.threads, num_cells);
  std::vector<std::vector<std::string>> failures(num_threads);

  // Each cell is solved cold (V = 0 start), so a cell's label depends only
  // on its own coordinates — never on neighbors, sweep order, or thread
  // partition. That makes serial and parallel runs byte-identical and
  // coarser grids exact subsamples of finer ones.
  auto run_chunk = [&](int chunk, int lo, int hi) {
    for (int cell = lo; cell < hi; ++cell) {
      const int ig = cell % gamma_count;
      const int ip = cell / gamma_count;
      const Traits traits{spec.gamma_samples[ig], spec.p_samples[ip]};
      try {
        const UserMdp mdp = build_user_mdp(world, traits);
        const ValueIterationResult vi = value_iteration(mdp, options.tol, options.max_iter);
        if (!vi.converged) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), "residual %.3e", vi.residual);
          failures[chunk].push_back(format_cell(traits.gamma, traits.p) +
                                    ": value iteration did not converge (" + buf + ")");
          continue;
        }
        const Policy policy = extract_policy(mdp, vi.values);
        map.labels[static_cast<std::size_t>(cell)] = classify_behavior(world, policy).index;
      } catch (const std::exception& e) {
        failures[chunk].push_back(format_cell(traits.gamma, traits.p) + ": " + e.what());
      }
    }
  };

  if (num_threads == 1) {
    run_chunk(0, 0, num_cells);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(num_threads);
    for (int t = 0; t < num_threads; ++t) {
      const int lo = static_cast<int>(static_cast<long long>(num_cells) * t / num_threads);
      const int hi = static_cast<int>(static_cast<long long>(num_cells) * (t + 1) / num_threads);
      workers.emplace_back(run_chunk, t, lo, hi);
    }
    for (std::thread& w : workers) w.join();
  }

  std::vector<std::string> all_failures;
  for (const auto& chunk : failures)
    all_failures.insert(all_failures.end(), chunk.begin(), chunk.end());
  if (!all_failures.empty()) {
    std::ostringstream msg;
    msg << "behavior map failed on " << all_failures.size() << " cell(s):";
    const std::size_t shown = std::min<std::size_t>(all_failures.size(), 5);
    for (std::size_t i = 0; i < shown; ++i) msg << "\n  " << all_failures[i];
    if (all_failures.size() > shown)
      msg << "\n  ... and " << all_failures.size() - shown << " more";
    throw PipelineError(msg.str());
  }
  return map;
}

std::array<int, 4> edge_switch_counts(const BehaviorMap& map, int min_run_length) {
  if (min_run_length < 1)
    throw ValidationError("edge_switch_counts: min_run_length must be >= 1");
  const int gc = map.spec.gamma_count();
  const int pc = map.spec.p_count();

  auto cell_label = [&](int ig, int ip) { return map.label_at(ig, ip); };
  auto require_task_label = [&](int ig, int ip) {
    const int label = cell_label(ig, ip);
    if (label >= 0 && label < static_cast<int>(map.palette.size()) &&
        map.palette[label] == "wander")
      throw PipelineError("map edge cell " +
                          format_cell(map.spec.gamma_samples[ig], map.spec.p_samples[ip]) +
                          " is labeled \"wander\"; edge switch counts are undefined");
    return label;
  };

  // Walk counterclockwise: bottom, right, top, left. Each edge sequence
  // includes both of its corner cells; switch counting compares consecutive
  // cells within one edge, so a change at a corner lands on the edge that
  // is being entered there.
  std::array<std::vector<int>, 4> edges;
  for (int ig = 0; ig < gc; ++ig) edges[0].push_back(require_task_label(ig, 0));
  for (int ip = 0; ip < pc; ++ip) edges[1].push_back(require_task_label(gc - 1, ip));
  for (int ig = gc - 1; ig >= 0; --ig) edges[2].push_back(require_task_label(ig, pc - 1));
  for (int ip = pc - 1; ip >= 0; --ip) edges[3].push_back(require_task_label(0, ip));

  std::array<int, 4> counts{0, 0, 0, 0};
  for (int e = 0; e < 4; ++e) {
    // The first comparison of an edge spans its entry corner, so start the
    // run sequence at that corner cell.
    counts[e] = count_switches(edges[e], min_run_length);
  }
  return counts;
}

EquivalenceSignature signature(const BehaviorMap& map, int min_run_length) {
  EquivalenceSignature sig;
  sig.edge_switches = edge_switch_counts(map, min_run_length);
  const std::set<int> distinct(map.labels.begin(), map.labels.end());
  sig.num_behaviors = static_cast<int>(distinct.size());
  return sig;
}

bool check_equivalent(const EquivalenceSignature& a, const EquivalenceSignature& b) {
  return a == b;
}

TopologyReport interior_topology_report(const BehaviorMap& map) {
  TopologyReport report;
  const int gc = map.spec.gamma_count();
  const int pc = map.spec.p_count();
  std::vector<char> seen(map.labels.size(), 0);

  for (int start = 0; start < gc * pc; ++start) {
    if (seen[start]) continue;
    const int label = map.labels[static_cast<std::size_t>(start)];
    bool touches_edge = false;
    std::deque<int> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const int cell = queue.front();
      queue.pop_front();
      const int ig = cell % gc;
      const int ip = cell / gc;
      if (ig == 0 || ig == gc - 1 || ip == 0 || ip == pc - 1) touches_edge = true;
      const int neighbors[4][2] = {{ig - 1, ip}, {ig + 1, ip}, {ig, ip - 1}, {ig, ip + 1}};
      for (const auto& n : neighbors) {
        if (n[0] < 0 || n[0] >= gc || n[1] < 0 || n[1] >= pc) continue;
        const int ncell = n[1] * gc + n[0];
        if (seen[ncell] || map.labels[static_cast<std::size_t>(ncell)] != label) continue;
        seen[ncell] = 1;
        queue.push_back(ncell);
      }
    }
    ++report.components_per_label[label];
    if (!touches_edge) ++report.interior_loops;
  }

  if (report.interior_loops > 0)
    report.warnings.push_back(std::to_string(report.interior_loops) +
                              " interior region(s) touch no map edge; the edge signature "
                              "does not describe them");
  try {
    const std::array<int, 4> counts = edge_switch_counts(map);
    const int total = counts[0] + counts[1] + counts[2] + counts[3];
    if (total >= 4)
      report.warnings.push_back(
          "edge switch total is " + std::to_string(total) +
          "; with 4 or more switches there is more than one valid way to connect the "
          "boundary vertices");
  } catch (const PipelineError&) {
    report.warnings.push_back("wander label on a map edge; switch counts unavailable");
  }
  return report;
}

std::string signature_json(const std::string& world_id, const EquivalenceSignature& sig) {
  std::ostringstream out;
  out << "{\"world\":\"" << world_id << "\",\"num_behaviors\":" << sig.num_behaviors
      << ",\"edge_switches\":[" << sig.edge_switches[0] << ',' << sig.edge_switches[1] << ','
      << sig.edge_switches[2] << ',' << sig.edge_switches[3] << "]}";
  return out.str();
}

}  // namespace atlas
