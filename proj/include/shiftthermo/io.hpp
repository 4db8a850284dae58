#pragma once

// JSON graph / potential specs, path and point syntax, and TSV tables.
//
// Graph spec:     {"kind": "Ladder" | "ZRay" | "ExplicitFinite" | "CoreWithInwardRays" | "WeightedFullShift",
//                  "params": {...}}
//   ExplicitFinite      "edges": [[id, source, range], ...]
//   CoreWithInwardRays  "core_edges": [[id, source, range], ...], "rays": R, "ray_targets": [v, ...] (optional)
//   WeightedFullShift   "symbols": n
// Potential spec: {"depth": k, "table": {"e1 ... ek": value, ...}}
//             or  {"family_rule": {"constant": t} | {"up": t, "down": t} | {"edges": {"id": t}}
//                                | {"core_edges": {"id": t}, "ray_levels": [t1, t2, ...]}}
// with an optional "truncation_variation". Values are numbers or strings "log(x)".
//
// Paths are whitespace-separated edge labels; "[v]" is the empty path at v.
// Points are "prefix | loop" or "prefix | ray" (greedy ray), prefix possibly "[v]".

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "shiftthermo/potential.hpp"
#include "shiftthermo/pressure.hpp"
#include "shiftthermo/symbolic.hpp"

namespace shiftthermo::io {

std::string read_file(const std::string& path);

GraphModel parse_graph(std::string_view json_text);
Potential parse_potential(std::string_view json_text, const GraphModel& g);

FinitePath parse_path(const GraphModel& g, std::string_view text);
std::string format_path(const GraphModel& g, const FinitePath& p);
BasePoint parse_point(const GraphModel& g, std::string_view text);
std::string format_point(const GraphModel& g, const BasePoint& x);

// Shortest round-trip decimal form, so reports are byte-stable.
std::string format_double(double v);

// Rows "path<TAB>log10_value", in path order.
void write_measure_tsv(std::ostream& os, const GraphModel& g, const CylinderMeasure& m);
CylinderMeasure read_measure_tsv(std::string_view text, const GraphModel& g);

// Header "beta<TAB>p_lo<TAB>p_est<TAB>p_hi<TAB>N".
void write_pressure_header(std::ostream& os);
void write_pressure_row(std::ostream& os, double beta, const PressureEstimate& p);

}  // namespace shiftthermo::io
