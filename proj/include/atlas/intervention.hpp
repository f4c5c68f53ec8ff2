// Intervention paths over behavior maps: crossing counts and
// crossing-preserving transfer between equivalent maps.
#pragma once

#include <utility>
#include <vector>

#include "atlas/atlas.hpp"

namespace atlas {

// Piecewise-linear path through the trait square in normalized coordinates:
// x spans the gamma axis and y the p axis, each mapped affinely onto [0, 1].
// Consecutive waypoints form one intervention step (delta-gamma, delta-p).
struct InterventionPath {
  std::vector<std::pair<double, double>> waypoints;
};

// Throws ValidationError unless the path has >= 2 waypoints, all inside the
// unit square.
void validate_path(const InterventionPath& path);

struct CrossingReport {
  int crossings = 0;
  // Normalized (x, y) midpoints of the sample intervals where the label
  // changed.
  std::vector<std::pair<double, double>> crossing_points;
  // Run-compressed label sequence along the path; crossings + 1 entries.
  std::vector<int> labels_sequence;
};

// Samples each segment uniformly (samples_per_segment intervals), reads the
// nearest-cell label at every sample, and counts label changes. Throws
// ValidationError on a malformed path or samples_per_segment < 2.
CrossingReport path_crossings(const BehaviorMap& map, const InterventionPath& path,
                              int samples_per_segment = 256);

// Transfers a path from src to dst preserving its crossing count. Requires
// equivalent signatures (else NotEquivalentError). The primary strategy
// reparameterizes each axis piecewise-linearly so that edge switch
// positions coincide (gamma anchored on the bottom edge, p on the left
// edge); the result is verified with path_crossings. If verification fails,
// an axis-parallel search over dst rows and columns finds a path with the
// required crossing count; PipelineError if that search is exhausted.
InterventionPath transfer_strategy(const BehaviorMap& src, const InterventionPath& path,
                                   const BehaviorMap& dst);

}  // namespace atlas
