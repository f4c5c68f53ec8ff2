// Parameter-perturbation sweeps and composition experiments.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "atlas/atlas.hpp"
#include "atlas/world.hpp"

namespace atlas {

// Ordered list of (parameter name, values to sweep); the Cartesian product
// enumerates cells with the last axis varying fastest.
using SweepAxes = std::vector<std::pair<std::string, std::vector<double>>>;

struct SweepCell {
  std::vector<double> values;  // one value per axis, aligned with SweepReport::axes
  bool ok = false;
  EquivalenceSignature sig;    // valid when ok
  std::string error;           // constructor or pipeline failure when !ok
};

struct SweepReport {
  std::string world_id;
  SweepAxes axes;
  std::vector<SweepCell> cells;
  bool verdict = false;             // every cell ok and all signatures equal
  EquivalenceSignature modal;       // most frequent signature (first-seen on ties)
  std::vector<std::string> failures;
};

// Constructs a world per Cartesian cell (base params + the cell's varied
// values, applied in axis order), computes its behavior map and signature.
// Constructor and per-cell pipeline errors are recorded in the cell, not
// thrown. Throws ValidationError if the product exceeds cell_cap.
SweepReport perturbation_sweep(WorldKind kind, const WorldParams& base,
                               const SweepAxes& varied, const GridSpec& spec,
                               const SolveOptions& options = {}, int cell_cap = 200);

struct CompositionResult {
  BehaviorMap map;
  EquivalenceSignature sig;
  TopologyReport topology;
};

// Full pipeline on a composite world; sig.num_behaviors carries the
// distinct-label count. Errors propagate.
CompositionResult composition_experiment(WorldKind kind, const WorldParams& params,
                                         const GridSpec& spec,
                                         const SolveOptions& options = {});

struct SweepPreset {
  WorldParams base;
  SweepAxes varied;
};

// The frozen per-world perturbation grid ("paper-b"). Every preset keeps
// each world inside its equivalence class at the shipped axis domain.
SweepPreset sweep_preset(WorldKind kind);

}  // namespace atlas
