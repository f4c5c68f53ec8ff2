// Map CSV, SVG rendering, JSON reports, and file helpers.

#include "atlas/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "atlas/errors.hpp"

namespace atlas {

namespace {

using json = nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string::size_type begin = 0;
  while (true) {
    const auto end = line.find(sep, begin);
    if (end == std::string::npos) {
      fields.push_back(line.substr(begin));
      break;
    }
    fields.push_back(line.substr(begin, end - begin));
    begin = end + 1;
  }
  return fields;
}

double parse_double(const std::string& text, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ValidationError(std::string("map CSV: malformed ") + what + " value: " + text);
  return v;
}

long parse_int(const std::string& text, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw ValidationError(std::string("map CSV: malformed ") + what + " value: " + text);
  return v;
}

json signature_to_json_value(const EquivalenceSignature& sig) {
  return json{{"num_behaviors", sig.num_behaviors},
              {"edge_switches", {sig.edge_switches[0], sig.edge_switches[1],
                                 sig.edge_switches[2], sig.edge_switches[3]}}};
}

}  // namespace

std::string map_to_csv(const BehaviorMap& map) {
  std::ostringstream out;
  out << "gamma,p,label_index,label_name\n";
  const int gc = map.spec.gamma_count();
  const int pc = map.spec.p_count();
  for (int ip = 0; ip < pc; ++ip) {
    for (int ig = 0; ig < gc; ++ig) {
      const int label = map.label_at(ig, ip);
      out << fmt17(map.spec.gamma_samples[ig]) << ',' << fmt17(map.spec.p_samples[ip]) << ','
          << label << ',' << map.palette[static_cast<std::size_t>(label)] << '\n';
    }
  }
  return out.str();
}

BehaviorMap map_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("map CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "gamma,p,label_index,label_name")
    throw ValidationError("map CSV: unexpected header: " + line);

  struct Row {
    double gamma, p;
    int label;
    std::string name;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 4)
      throw ValidationError("map CSV: expected 4 fields, got " +
                            std::to_string(fields.size()) + ": " + line);
    Row row;
    row.gamma = parse_double(fields[0], "gamma");
    row.p = parse_double(fields[1], "p");
    row.label = static_cast<int>(parse_int(fields[2], "label_index"));
    row.name = fields[3];
    if (row.label < 0) throw ValidationError("map CSV: negative label index");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("map CSV: no data rows");

  // The gamma axis is the row prefix up to the first change of p.
  std::size_t gc = 1;
  while (gc < rows.size() && rows[gc].p == rows[0].p) ++gc;
  if (rows.size() % gc != 0)
    throw ValidationError("map CSV: ragged grid (rows not a multiple of the gamma count)");
  const std::size_t pc = rows.size() / gc;

  BehaviorMap map;
  for (std::size_t ig = 0; ig < gc; ++ig)
    map.spec.gamma_samples.push_back(rows[ig].gamma);
  for (std::size_t ip = 0; ip < pc; ++ip) map.spec.p_samples.push_back(rows[ip * gc].p);

  map.labels.resize(rows.size());
  int max_label = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& row = rows[i];
    if (row.gamma != map.spec.gamma_samples[i % gc] || row.p != map.spec.p_samples[i / gc])
      throw ValidationError("map CSV: inconsistent axis values at data row " +
                            std::to_string(i + 1));
    map.labels[i] = row.label;
    max_label = std::max(max_label, row.label);
  }
  map.palette.assign(static_cast<std::size_t>(max_label) + 1, "");
  for (const Row& row : rows) {
    std::string& name = map.palette[static_cast<std::size_t>(row.label)];
    if (name.empty()) {
      name = row.name;
    } else if (name != row.name) {
      throw ValidationError("map CSV: label index " + std::to_string(row.label) +
                            " maps to two names: " + name + " and " + row.name);
    }
  }
  for (std::size_t i = 0; i < map.palette.size(); ++i)
    if (map.palette[i].empty()) map.palette[i] = "label-" + std::to_string(i);

  validate_grid(map.spec);
  return map;
}

std::string render_svg(const BehaviorMap& map, const SvgStyle& style) {
  const int gc = map.spec.gamma_count();
  const int pc = map.spec.p_count();
  const int cell = style.cell_px > 0 ? style.cell_px : 6;
  const int ml = 46, mr = 10, mt = 10, mb = 36;
  const int plot_w = gc * cell;
  const int plot_h = pc * cell;
  const int width = ml + plot_w + mr;
  const int height = mt + plot_h + mb;

  auto fill_for = [&](int label) -> std::string {
    if (static_cast<std::size_t>(label) < style.palette_override.size())
      return style.palette_override[static_cast<std::size_t>(label)];
    return label_color(label, map.palette[static_cast<std::size_t>(label)]);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  out << "<g shape-rendering=\"crispEdges\">\n";
  for (int ip = 0; ip < pc; ++ip) {
    for (int ig = 0; ig < gc; ++ig) {
      const int x = ml + ig * cell;
      const int y = mt + (pc - 1 - ip) * cell;  // p grows upward
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
          << cell << "\" fill=\"" << fill_for(map.label_at(ig, ip)) << "\"/>\n";
    }
  }
  out << "</g>\n";

  const char* font = " font-family=\"monospace\" font-size=\"11\" fill=\"#000000\"";
  out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << mt + plot_h + 30
      << "\" text-anchor=\"middle\"" << font << ">&#947;</text>\n";
  out << "<text x=\"12\" y=\"" << mt + plot_h / 2 << "\" text-anchor=\"middle\"" << font
      << ">p</text>\n";
  out << "<text x=\"" << ml << "\" y=\"" << mt + plot_h + 14 << "\" text-anchor=\"start\""
      << font << ">" << fmt_short(map.spec.gamma_samples.front()) << "</text>\n";
  out << "<text x=\"" << ml + plot_w << "\" y=\"" << mt + plot_h + 14
      << "\" text-anchor=\"end\"" << font << ">" << fmt_short(map.spec.gamma_samples.back())
      << "</text>\n";
  out << "<text x=\"" << ml - 4 << "\" y=\"" << mt + plot_h << "\" text-anchor=\"end\"" << font
      << ">" << fmt_short(map.spec.p_samples.front()) << "</text>\n";
  out << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\"" << font
      << ">" << fmt_short(map.spec.p_samples.back()) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string path_to_json(const InterventionPath& path) {
  json j = json::array();
  for (const auto& [x, y] : path.waypoints) j.push_back({x, y});
  return j.dump();
}

InterventionPath path_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("path JSON parse error: ") + e.what());
  }
  if (!j.is_array()) throw ValidationError("path JSON: expected a list of [gamma, p] pairs");
  InterventionPath path;
  for (const json& point : j) {
    if (!point.is_array() || point.size() != 2 || !point[0].is_number() ||
        !point[1].is_number())
      throw ValidationError("path JSON: each waypoint must be a [gamma, p] number pair");
    path.waypoints.push_back({point[0].get<double>(), point[1].get<double>()});
  }
  validate_path(path);
  return path;
}

std::string crossing_report_json(const CrossingReport& report) {
  json points = json::array();
  for (const auto& [x, y] : report.crossing_points) points.push_back({x, y});
  json j{{"crossings", report.crossings},
         {"crossing_points", points},
         {"labels_sequence", report.labels_sequence}};
  return j.dump(2);
}

std::string sweep_report_json(const SweepReport& report) {
  json axes = json::array();
  for (const auto& [name, values] : report.axes)
    axes.push_back(json{{"name", name}, {"values", values}});
  json cells = json::array();
  for (const SweepCell& cell : report.cells) {
    json c{{"values", cell.values}, {"ok", cell.ok}};
    if (cell.ok) {
      c["signature"] = signature_to_json_value(cell.sig);
    } else {
      c["error"] = cell.error;
    }
    cells.push_back(std::move(c));
  }
  json j{{"world", report.world_id},
         {"axes", axes},
         {"cells", cells},
         {"verdict", report.verdict},
         {"modal_signature", signature_to_json_value(report.modal)},
         {"failures", report.failures}};
  return j.dump(2);
}

std::string sweep_report_csv(const SweepReport& report) {
  std::ostringstream out;
  for (const auto& [name, values] : report.axes) {
    (void)values;
    out << name << ',';
  }
  out << "n1,n2,n3,n4,num_behaviors,error\n";
  for (const SweepCell& cell : report.cells) {
    for (double v : cell.values) out << fmt_short(v) << ',';
    if (cell.ok) {
      out << cell.sig.edge_switches[0] << ',' << cell.sig.edge_switches[1] << ','
          << cell.sig.edge_switches[2] << ',' << cell.sig.edge_switches[3] << ','
          << cell.sig.num_behaviors << ",\n";
    } else {
      out << ",,,,," << cell.error << '\n';
    }
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace atlas
