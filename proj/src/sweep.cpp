// Perturbation sweeps over world constructors.

#include "atlas/sweep.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "atlas/errors.hpp"

namespace atlas {

namespace {

std::string cell_description(const SweepAxes& axes, const std::vector<double>& values) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (i > 0) out << ", ";
    out << axes[i].first << "=" << values[i];
  }
  out << "}";
  return out.str();
}

}  // namespace

SweepReport perturbation_sweep(WorldKind kind, const WorldParams& base,
                               const SweepAxes& varied, const GridSpec& spec,
                               const SolveOptions& options, int cell_cap) {
  validate_grid(spec);
  long long num_cells = 1;
  for (const auto& [name, values] : varied) {
    if (values.empty())
      throw ValidationError("sweep: axis \"" + name + "\" has no values");
    num_cells *= static_cast<long long>(values.size());
    if (num_cells > cell_cap)
      throw ValidationError("sweep: Cartesian product exceeds the cell cap (" +
                            std::to_string(cell_cap) + ")");
  }

  SweepReport report;
  report.world_id = to_string(kind);
  report.axes = varied;
  report.cells.resize(static_cast<std::size_t>(num_cells));

  // Enumerate the product with the last axis varying fastest.
  for (long long cell = 0; cell < num_cells; ++cell) {
    std::vector<double> values(varied.size());
    long long rest = cell;
    for (std::size_t i = varied.size(); i-- > 0;) {
      const auto& axis_values = varied[i].second;
      values[i] = axis_values[rest % axis_values.size()];
      rest /= static_cast<long long>(axis_values.size());
    }
    report.cells[static_cast<std::size_t>(cell)].values = std::move(values);
  }

  // Cells are independent; parallelize across cells and keep each cell's
  // map computation single-threaded so assembly stays positional.
  SolveOptions cell_options = options;
  cell_options.threads = 1;
  auto run_cell = [&](SweepCell& cell) {
    try {
      WorldParams params = base;
      for (std::size_t i = 0; i < varied.size(); ++i)
        set_param(params, varied[i].first, cell.values[i]);
      const World world = make_world(kind, params);
      const BehaviorMap map = compute_behavior_map(world, spec, cell_options);
      cell.sig = signature(map);
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  const int num_threads =
      resolve_thread_count(options.threads, static_cast<int>(report.cells.size()));
  if (num_threads <= 1) {
    for (SweepCell& cell : report.cells) run_cell(cell);
  } else {
    std::vector<std::thread> workers;
    const int total = static_cast<int>(report.cells.size());
    for (int t = 0; t < num_threads; ++t) {
      const int lo = static_cast<int>(static_cast<long long>(total) * t / num_threads);
      const int hi = static_cast<int>(static_cast<long long>(total) * (t + 1) / num_threads);
      workers.emplace_back([&, lo, hi] {
        for (int i = lo; i < hi; ++i) run_cell(report.cells[static_cast<std::size_t>(i)]);
      });
    }
    for (std::thread& w : workers) w.join();
  }

  // Verdict, modal signature, failure list.
  bool all_ok = true;
  bool all_equal = true;
  std::vector<std::pair<EquivalenceSignature, int>> tally;
  for (const SweepCell& cell : report.cells) {
    if (!cell.ok) {
      all_ok = false;
      report.failures.push_back("cell " + cell_description(report.axes, cell.values) + ": " +
                                cell.error);
      continue;
    }
    auto it = std::find_if(tally.begin(), tally.end(),
                           [&](const auto& entry) { return entry.first == cell.sig; });
    if (it == tally.end()) {
      tally.push_back({cell.sig, 1});
    } else {
      ++it->second;
    }
  }
  if (tally.size() > 1) all_equal = false;
  if (!tally.empty()) {
    auto best = tally.begin();
    for (auto it = tally.begin(); it != tally.end(); ++it)
      if (it->second > best->second) best = it;
    report.modal = best->first;
  }
  report.verdict = all_ok && all_equal && !tally.empty();
  return report;
}

CompositionResult composition_experiment(WorldKind kind, const WorldParams& params,
                                         const GridSpec& spec, const SolveOptions& options) {
  const World world = make_composite(kind, params);
  CompositionResult result;
  result.map = compute_behavior_map(world, spec, options);
  result.sig = signature(result.map);
  result.topology = interior_topology_report(result.map);
  return result;
}

SweepPreset sweep_preset(WorldKind kind) {
  SweepPreset preset;
  preset.base = default_params(kind);
  switch (kind) {
    case WorldKind::kBigSmall:
      // The published robustness study fixes height 7 and the big reward at
      // 300, then varies width and the small/big reward ratio.
      preset.base.height = 7;
      preset.base.reward_big = 300.0;
      preset.varied = {{"width", {4, 5, 6, 7, 8}}, {"reward-ratio", {0.17, 0.33, 0.67}}};
      break;
    case WorldKind::kCliff:
      // Width 10 with a cheap goal detaches the risky region from the
      // bottom edge at this trait domain, so the preset stops at width 8.
      preset.varied = {{"width", {6, 8}}, {"height", {3, 4, 5}}, {"reward-goal", {50, 100}}};
      break;
    case WorldKind::kWall:
      // The through-wall band only stays interior on the bottom edge for a
      // narrow penalty/height band; these four combinations all sit in it.
      preset.varied = {{"height", {5, 6}}, {"reward-wall", {-20, -30}}};
      break;
    case WorldKind::kChain:
      preset.varied = {{"length", {4, 5, 6}}, {"reward-disengage", {5, 10, 20}}};
      break;
    case WorldKind::kRiverSwim:
      preset.varied = {{"length", {6, 7, 8}}, {"reward-right", {50, 100}}};
      break;
    case WorldKind::kGamblersV1:
    case WorldKind::kGamblersV2:
      preset.varied = {{"length", {6, 7, 8}}, {"reward-goal", {100, 200}}};
      break;
    case WorldKind::kCafe:
    case WorldKind::kCafeThreeWay:
      preset.varied = {{"reward-donut", {40, 50, 60}}};
      break;
    case WorldKind::kCliffDisengage:
      preset.varied = {{"width", {6, 8, 10}}, {"reward-disengage", {5, 10, 20}}};
      break;
  }
  return preset;
}

}  // namespace atlas
