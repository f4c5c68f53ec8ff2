// Serialization: behavior-map CSV, SVG rendering, path/report JSON, files.
#pragma once

#include <string>
#include <vector>

#include "atlas/atlas.hpp"
#include "atlas/intervention.hpp"
#include "atlas/sweep.hpp"

namespace atlas {

// CSV with header `gamma,p,label_index,label_name`; one row per cell,
// p-major (all gammas for the lowest p first); axis values carry 17
// significant digits so a round-trip is exact.
std::string map_to_csv(const BehaviorMap& map);

// Inverse of map_to_csv. Throws ValidationError on malformed input
// (bad header, ragged grid, non-numeric fields, axes not increasing).
BehaviorMap map_from_csv(const std::string& text);

struct SvgStyle {
  int cell_px = 6;                            // square cell edge, pixels
  std::vector<std::string> palette_override;  // hex fills by label index
};

// One rectangle per cell, fill by label palette, gamma/p axis labels,
// deterministic element order — identical input yields identical bytes.
std::string render_svg(const BehaviorMap& map, const SvgStyle& style = {});

// Paths serialize as a JSON list of [gamma, p] pairs.
std::string path_to_json(const InterventionPath& path);
InterventionPath path_from_json(const std::string& text);

std::string crossing_report_json(const CrossingReport& report);

// Sweep report as JSON, and as an index CSV with one row per cell:
// the varied params, then n1..n4 and num_behaviors (or the error).
std::string sweep_report_json(const SweepReport& report);
std::string sweep_report_csv(const SweepReport& report);

// Whole-file helpers; throw ValidationError when the file cannot be read
// or written.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace atlas
