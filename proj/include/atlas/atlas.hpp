// Behavior maps over the trait square, equivalence signatures via edge
// switch counting, and interior-topology diagnostics.
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "atlas/behavior.hpp"
#include "atlas/world.hpp"

namespace atlas {

// Shipped default axis domain. Endpoints were tuned so that every default
// world shows its full behavior structure inside the window: smaller gamma
// drowns the far-goal value gradient in solver tolerance, and p at or below
// 1/2 makes "alternate outcomes more likely than intended" pathologies
// dominate. See docs for the per-world switch positions these bounds clear.
inline constexpr double kDefaultGammaLo = 0.30;
inline constexpr double kDefaultGammaHi = 0.99;
inline constexpr double kDefaultPLo = 0.55;
inline constexpr double kDefaultPHi = 1.0;

// Sample axes for a behavior map. Both vectors strictly increasing, >= 3
// points; gamma within [0, 1), p within [0, 1].
struct GridSpec {
  std::vector<double> gamma_samples;
  std::vector<double> p_samples;

  int gamma_count() const { return static_cast<int>(gamma_samples.size()); }
  int p_count() const { return static_cast<int>(p_samples.size()); }
};

// Throws ValidationError when the spec violates the invariants above.
void validate_grid(const GridSpec& spec);

// Evenly spaced samples with the endpoints pinned exactly. A grid of
// resolution 2k+1 over the same range is an exact point subset of one of
// resolution 4k+1, so coarse maps subsample fine ones bit-identically.
GridSpec make_grid(int gamma_count, double gamma_lo, double gamma_hi, int p_count,
                   double p_lo, double p_hi);

// Square grid over the shipped default domain.
GridSpec default_grid(int resolution = 101);

// Dense classification of the trait square. labels is p-index major:
// labels[ip * gamma_count + ig].
struct BehaviorMap {
  GridSpec spec;
  std::vector<int> labels;
  std::string world_id;
  std::vector<std::string> palette;  // label index -> name

  int label_at(int ig, int ip) const {
    return labels[static_cast<std::size_t>(ip) * spec.gamma_count() + ig];
  }
};

struct SolveOptions {
  double tol = 1e-10;     // value-iteration stopping residual per cell
  int max_iter = 100000;  // per-cell sweep cap
  int threads = 0;        // 0 = one per hardware thread; ATLAS_THREADS caps
};

// Worker count actually used for a batch of `num_jobs` independent jobs:
// `requested` (or hardware concurrency when 0), capped by the ATLAS_THREADS
// environment variable and by the job count.
int resolve_thread_count(int requested, int num_jobs);

// Classifies every grid point: build_user_mdp -> value_iteration ->
// extract_policy -> classify_behavior. Cells are independent jobs over a
// worker pool with positional assembly, so the result is byte-identical
// for any thread count. Throws PipelineError with per-cell diagnostics if
// any cell fails to converge.
BehaviorMap compute_behavior_map(const World& world, const GridSpec& spec,
                                 const SolveOptions& options = {});

// Behavior count plus edge switch counts, counterclockwise from the bottom
// edge: [bottom, right, top, left].
struct EquivalenceSignature {
  int num_behaviors = 0;
  std::array<int, 4> edge_switches{0, 0, 0, 0};

  bool operator==(const EquivalenceSignature&) const = default;
};

// Counts label changes along the map boundary walked counterclockwise:
// bottom (gamma ascending at the lowest p), right (p ascending), top
// (gamma descending), left (p descending). A change at a corner cell is
// attributed to the edge being entered. min_run_length > 1 drops shorter
// label runs before counting (off by default). Throws PipelineError if any
// edge cell is labeled "wander".
std::array<int, 4> edge_switch_counts(const BehaviorMap& map, int min_run_length = 1);

// Pairs the distinct-label count with the edge switch counts.
EquivalenceSignature signature(const BehaviorMap& map, int min_run_length = 1);

// Two worlds are equivalent iff their signatures match exactly.
bool check_equivalent(const EquivalenceSignature& a, const EquivalenceSignature& b);

struct TopologyReport {
  std::map<int, int> components_per_label;  // label index -> 4-connected regions
  int interior_loops = 0;                   // regions touching no map edge
  std::vector<std::string> warnings;
};

// 4-connected component analysis of the label grid. Emits warnings when
// interior regions exist or the edge switch total reaches 4, both of which
// make the signature an incomplete topology description.
TopologyReport interior_topology_report(const BehaviorMap& map);

std::string signature_json(const std::string& world_id, const EquivalenceSignature& sig);

}  // namespace atlas
