// Path crossings and crossing-preserving strategy transfer.

#include "atlas/intervention.hpp"

#include <algorithm>
#include <cmath>

#include "atlas/errors.hpp"

namespace atlas {

namespace {

int nearest_index(double coord, int count) {
  const int idx = static_cast<int>(std::lround(coord * (count - 1)));
  return std::clamp(idx, 0, count - 1);
}

int label_at_point(const BehaviorMap& map, double x, double y) {
  const int ig = nearest_index(x, map.spec.gamma_count());
  const int ip = nearest_index(y, map.spec.p_count());
  return map.label_at(ig, ip);
}

// Normalized positions (ascending) of the label changes along one grid
// line: a change between cells i and i+1 sits at (i + 0.5) / (count - 1).
std::vector<double> switch_positions(const std::vector<int>& line) {
  std::vector<double> positions;
  const int n = static_cast<int>(line.size());
  for (int i = 0; i + 1 < n; ++i)
    if (line[i] != line[i + 1]) positions.push_back((i + 0.5) / (n - 1));
  return positions;
}

std::vector<int> bottom_edge(const BehaviorMap& map) {
  std::vector<int> line(map.spec.gamma_count());
  for (int ig = 0; ig < map.spec.gamma_count(); ++ig) line[ig] = map.label_at(ig, 0);
  return line;
}

std::vector<int> left_edge(const BehaviorMap& map) {
  std::vector<int> line(map.spec.p_count());
  for (int ip = 0; ip < map.spec.p_count(); ++ip) line[ip] = map.label_at(0, ip);
  return line;
}

// Piecewise-linear bijection of [0,1] mapping src anchor positions onto dst
// anchor positions (equal counts; both strictly inside (0,1)).
double reparameterize(double x, const std::vector<double>& src_anchors,
                      const std::vector<double>& dst_anchors) {
  std::vector<double> xs{0.0}, ys{0.0};
  xs.insert(xs.end(), src_anchors.begin(), src_anchors.end());
  ys.insert(ys.end(), dst_anchors.begin(), dst_anchors.end());
  xs.push_back(1.0);
  ys.push_back(1.0);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (x <= xs[k] || k + 1 == xs.size()) {
      const double span = xs[k] - xs[k - 1];
      const double t = span > 0.0 ? (x - xs[k - 1]) / span : 0.0;
      return std::clamp(ys[k - 1] + t * (ys[k] - ys[k - 1]), 0.0, 1.0);
    }
  }
  return x;
}

}  // namespace

void validate_path(const InterventionPath& path) {
  if (path.waypoints.size() < 2)
    throw ValidationError("path: at least 2 waypoints required");
  for (const auto& [x, y] : path.waypoints) {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
      throw ValidationError("path: waypoint outside the unit square");
  }
}

CrossingReport path_crossings(const BehaviorMap& map, const InterventionPath& path,
                              int samples_per_segment) {
  validate_path(path);
  if (samples_per_segment < 2)
    throw ValidationError("path_crossings: samples_per_segment must be >= 2");

  // Uniform sampling of every segment; the shared waypoint between two
  // consecutive segments is emitted once.
  std::vector<std::pair<double, double>> samples;
  for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
    const auto [x0, y0] = path.waypoints[seg];
    const auto [x1, y1] = path.waypoints[seg + 1];
    const int first = seg == 0 ? 0 : 1;
    for (int i = first; i <= samples_per_segment; ++i) {
      const double t = static_cast<double>(i) / samples_per_segment;
      samples.push_back({x0 + t * (x1 - x0), y0 + t * (y1 - y0)});
    }
  }

  CrossingReport report;
  int prev_label = -1;
  std::pair<double, double> prev_point{0.0, 0.0};
  for (const auto& point : samples) {
    const int label = label_at_point(map, point.first, point.second);
    if (report.labels_sequence.empty()) {
      report.labels_sequence.push_back(label);
    } else if (label != prev_label) {
      report.labels_sequence.push_back(label);
      report.crossing_points.push_back(
          {0.5 * (prev_point.first + point.first), 0.5 * (prev_point.second + point.second)});
    }
    prev_label = label;
    prev_point = point;
  }
  report.crossings = static_cast<int>(report.crossing_points.size());
  return report;
}

InterventionPath transfer_strategy(const BehaviorMap& src, const InterventionPath& path,
                                   const BehaviorMap& dst) {
  validate_path(path);
  const EquivalenceSignature src_sig = signature(src);
  const EquivalenceSignature dst_sig = signature(dst);
  if (!check_equivalent(src_sig, dst_sig))
    throw NotEquivalentError("transfer_strategy: maps " + src.world_id + " and " +
                             dst.world_id + " are not equivalent");

  const int required = path_crossings(src, path).crossings;

  // Align the axes so that edge switch positions coincide, then verify.
  const std::vector<double> src_gamma = switch_positions(bottom_edge(src));
  const std::vector<double> dst_gamma = switch_positions(bottom_edge(dst));
  const std::vector<double> src_p = switch_positions(left_edge(src));
  const std::vector<double> dst_p = switch_positions(left_edge(dst));

  if (src_gamma.size() == dst_gamma.size() && src_p.size() == dst_p.size()) {
    InterventionPath mapped;
    for (const auto& [x, y] : path.waypoints)
      mapped.waypoints.push_back(
          {reparameterize(x, src_gamma, dst_gamma), reparameterize(y, src_p, dst_p)});
    if (path_crossings(dst, mapped).crossings == required) return mapped;
  }

  // Fallback: axis-parallel scan. Constant-p rows first, then constant-gamma
  // columns, in grid order for determinism.
  const int pc = dst.spec.p_count();
  for (int ip = 0; ip < pc; ++ip) {
    const double y = static_cast<double>(ip) / (pc - 1);
    InterventionPath candidate{{{0.0, y}, {1.0, y}}};
    if (path_crossings(dst, candidate).crossings == required) return candidate;
  }
  const int gc = dst.spec.gamma_count();
  for (int ig = 0; ig < gc; ++ig) {
    const double x = static_cast<double>(ig) / (gc - 1);
    InterventionPath candidate{{{x, 0.0}, {x, 1.0}}};
    if (path_crossings(dst, candidate).crossings == required) return candidate;
  }
  throw PipelineError(
      "transfer_strategy: fallback exhausted; no axis-parallel path in " + dst.world_id +
      " has the required crossing count (" + std::to_string(required) + ")");
}

}  // namespace atlas
