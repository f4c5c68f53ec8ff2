// Intervention paths: crossing counts, label sequences, and
// crossing-preserving transfer between equivalent maps.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "doctest.h"

#include "atlas/atlas.hpp"
#include "atlas/errors.hpp"
#include "atlas/intervention.hpp"

using atlas::BehaviorMap;
using atlas::CrossingReport;
using atlas::InterventionPath;

namespace {

BehaviorMap synthetic_map(int n, const std::function<int(int, int)>& label_of,
                          std::vector<std::string> palette = {"A", "B", "C"}) {
  BehaviorMap m;
  m.spec = atlas::make_grid(n, 0.3, 0.99, n, 0.55, 1.0);
  m.world_id = "synthetic";
  m.palette = std::move(palette);
  m.labels.resize(static_cast<std::size_t>(n) * n);
  for (int ip = 0; ip < n; ++ip)
    for (int ig = 0; ig < n; ++ig)
      m.labels[static_cast<std::size_t>(ip) * n + ig] = label_of(ig, ip);
  return m;
}

// Vertical boundary: label 1 from column `first_b` rightward.
BehaviorMap vertical_map(int n, int first_b) {
  return synthetic_map(n, [first_b](int ig, int) { return ig >= first_b ? 1 : 0; });
}

InterventionPath line(double x0, double y0, double x1, double y1) {
  return InterventionPath{{{x0, y0}, {x1, y1}}};
}

}  // namespace

// ==== validation ============================================================

TEST_CASE("paths need two waypoints inside the unit square") {
  CHECK_THROWS_AS(atlas::validate_path(InterventionPath{{{0.5, 0.5}}}),
                  atlas::ValidationError);
  CHECK_THROWS_AS(atlas::validate_path(line(0.0, 0.5, 1.2, 0.5)),
                  atlas::ValidationError);
  CHECK_THROWS_AS(atlas::validate_path(line(-0.1, 0.5, 0.9, 0.5)),
                  atlas::ValidationError);
  CHECK_NOTHROW(atlas::validate_path(line(0.0, 0.0, 1.0, 1.0)));
}

TEST_CASE("crossing sampler rejects bad inputs") {
  const BehaviorMap m = vertical_map(11, 6);
  CHECK_THROWS_AS(atlas::path_crossings(m, InterventionPath{{{0.5, 0.5}}}),
                  atlas::ValidationError);
  CHECK_THROWS_AS(atlas::path_crossings(m, line(0.0, 0.5, 1.0, 0.5), 1),
                  atlas::ValidationError);
}

// ==== crossings =============================================================

TEST_CASE("a horizontal path through a vertical boundary crosses once") {
  const BehaviorMap m = vertical_map(11, 6);  // boundary at x = 0.55
  const CrossingReport report = atlas::path_crossings(m, line(0.05, 0.9, 0.95, 0.9));
  CHECK(report.crossings == 1);
  CHECK(report.labels_sequence == std::vector<int>{0, 1});
  REQUIRE(report.crossing_points.size() == 1);
  CHECK(report.crossing_points[0].first == doctest::Approx(0.55).epsilon(0.05));
  CHECK(report.crossing_points[0].second == 0.9);
}

TEST_CASE("a path that stays inside one region never crosses") {
  const BehaviorMap m = vertical_map(11, 6);
  const CrossingReport report = atlas::path_crossings(m, line(0.0, 0.5, 0.3, 0.5));
  CHECK(report.crossings == 0);
  CHECK(report.crossing_points.empty());
  CHECK(report.labels_sequence == std::vector<int>{0});
}

TEST_CASE("crossing count, points, and label runs stay consistent") {
  const BehaviorMap m = synthetic_map(
      11, [](int ig, int ip) { return ig - ip >= 5 ? 1 : 0; });
  const std::vector<InterventionPath> paths = {
      line(0.0, 0.0, 1.0, 0.0), line(0.0, 0.0, 1.0, 1.0),
      line(0.9, 0.05, 0.9, 0.95),
      InterventionPath{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}}};
  for (const InterventionPath& path : paths) {
    const CrossingReport report = atlas::path_crossings(m, path);
    CHECK(report.crossings == static_cast<int>(report.crossing_points.size()));
    CHECK(report.crossings == static_cast<int>(report.labels_sequence.size()) - 1);
  }
}

TEST_CASE("walking the bottom edge reproduces the bottom switch count") {
  const BehaviorMap diag = synthetic_map(
      11, [](int ig, int ip) { return ig - ip >= 5 ? 1 : 0; });
  const std::array<int, 4> counts = atlas::edge_switch_counts(diag);
  const CrossingReport bottom = atlas::path_crossings(diag, line(0.0, 0.0, 1.0, 0.0));
  CHECK(bottom.crossings == counts[0]);
  const CrossingReport right = atlas::path_crossings(diag, line(1.0, 0.0, 1.0, 1.0));
  CHECK(right.crossings == counts[1]);
}

TEST_CASE("reversing a path reverses the labels and keeps the count") {
  const BehaviorMap m = vertical_map(11, 6);
  const InterventionPath fwd = line(0.05, 0.9, 0.95, 0.9);
  InterventionPath rev = fwd;
  std::reverse(rev.waypoints.begin(), rev.waypoints.end());
  const CrossingReport a = atlas::path_crossings(m, fwd);
  const CrossingReport b = atlas::path_crossings(m, rev);
  CHECK(a.crossings == b.crossings);
  std::vector<int> reversed = b.labels_sequence;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(a.labels_sequence == reversed);
}

TEST_CASE("doubling the sample density does not change a clean crossing") {
  const BehaviorMap m = vertical_map(11, 6);
  const InterventionPath path = line(0.05, 0.9, 0.95, 0.9);
  CHECK(atlas::path_crossings(m, path, 256).crossings == 1);
  CHECK(atlas::path_crossings(m, path, 512).crossings == 1);
  CHECK(atlas::path_crossings(m, path, 7).crossings == 1);
}

TEST_CASE("segment junctions are sampled once") {
  const BehaviorMap m = vertical_map(11, 6);
  // The junction sits exactly on the boundary column; a double sample there
  // would fabricate an extra run.
  const InterventionPath bent{{{0.0, 0.5}, {0.55, 0.5}, {1.0, 0.5}}};
  const CrossingReport report = atlas::path_crossings(m, bent);
  CHECK(report.crossings == 1);
  CHECK(report.labels_sequence == std::vector<int>{0, 1});
}

TEST_CASE("samples map to the nearest grid cell") {
  const BehaviorMap m = vertical_map(11, 6);
  // Cells sit at x = k/10; the label flips between x = 0.54 (cell 5) and
  // x = 0.56 (cell 6).
  CHECK(atlas::path_crossings(m, line(0.54, 0.0, 0.56, 0.0)).crossings == 1);
  CHECK(atlas::path_crossings(m, line(0.0, 0.0, 0.04, 0.0)).crossings == 0);
}

// ==== transfer ==============================================================

TEST_CASE("transfer onto the same map is the identity") {
  const BehaviorMap m = vertical_map(11, 6);
  const InterventionPath path = line(0.05, 0.9, 0.95, 0.9);
  const InterventionPath mapped = atlas::transfer_strategy(m, path, m);
  REQUIRE(mapped.waypoints.size() == path.waypoints.size());
  for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
    CHECK(mapped.waypoints[i].first ==
          doctest::Approx(path.waypoints[i].first).epsilon(1e-12));
    CHECK(mapped.waypoints[i].second ==
          doctest::Approx(path.waypoints[i].second).epsilon(1e-12));
  }
}

TEST_CASE("transfer aligns the boundary position across equivalent maps") {
  const BehaviorMap src = vertical_map(11, 6);  // boundary at x = 0.55
  const BehaviorMap dst = vertical_map(11, 3);  // boundary at x = 0.25
  const InterventionPath path = line(0.05, 0.9, 0.95, 0.9);
  const InterventionPath mapped = atlas::transfer_strategy(src, path, dst);
  CHECK(atlas::path_crossings(dst, mapped).crossings == 1);
  // The start point moves with the compressed left region.
  CHECK(mapped.waypoints[0].first < 0.05);
  CHECK(mapped.waypoints[0].second == 0.9);
}

TEST_CASE("transfer between maps with different signatures is refused") {
  const BehaviorMap src = vertical_map(11, 6);  // [1,0,1,0]
  const BehaviorMap dst = synthetic_map(
      11, [](int ig, int ip) { return ig - ip >= 5 ? 1 : 0; });  // [1,1,0,0]
  CHECK_THROWS_AS(
      atlas::transfer_strategy(src, line(0.05, 0.9, 0.95, 0.9), dst),
      atlas::NotEquivalentError);
}

TEST_CASE("transfer falls back to an axis-parallel scan when needed") {
  const BehaviorMap src = vertical_map(11, 6);
  // Same signature as src, but the row at y = 0.9 (p index 9) zigzags so the
  // reparameterized horizontal path picks up three crossings and fails
  // verification. All four edges stay clean.
  const BehaviorMap dst = synthetic_map(11, [](int ig, int ip) {
    if (ip == 9 && ig >= 2 && ig < 4) return 1;
    if (ip == 9 && ig >= 4 && ig < 6) return 0;
    return ig >= 6 ? 1 : 0;
  });
  REQUIRE(atlas::check_equivalent(atlas::signature(src), atlas::signature(dst)));
  const InterventionPath path = line(0.05, 0.9, 0.95, 0.9);
  REQUIRE(atlas::path_crossings(dst, path).crossings == 3);

  const InterventionPath mapped = atlas::transfer_strategy(src, path, dst);
  CHECK(atlas::path_crossings(dst, mapped).crossings == 1);
  // The fallback returns a full axis-parallel line.
  REQUIRE(mapped.waypoints.size() == 2);
  CHECK(mapped.waypoints[0].second == mapped.waypoints[1].second);
}
