#include "shiftthermo/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace shiftthermo::io {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      bad("unknown key \"" + key + "\" in " + where);
    }
  }
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where + " must be an integer");
  return v.get<std::int64_t>();
}

std::vector<Edge> parse_edges(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be an array of [id, source, range]");
  std::vector<Edge> out;
  for (const auto& t : v) {
    if (!t.is_array() || t.size() != 3) bad(where + " entries must be [id, source, range]");
    out.push_back({as_int(t[0], where), as_int(t[1], where), as_int(t[2], where)});
  }
  return out;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad("not a number: \"" + std::string(s) + "\"");
  return v;
}

double as_value(const json& v, const std::string& where) {
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad(where + " must be finite");
    return x;
  }
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.size() > 5 && s.starts_with("log(") && s.back() == ')') {
      const double x = parse_number(std::string_view(s).substr(4, s.size() - 5));
      if (!(x > 0.0)) bad(where + ": log of a nonpositive number");
      return std::log(x);
    }
  }
  bad(where + " must be a number or \"log(x)\"");
}

std::string normalized_kind(std::string s) {
  std::string out;
  for (char c : s) {
    if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GraphModel parse_graph(std::string_view json_text) {
  const json doc = parse_json(json_text);
  only_keys(doc, {"kind", "params"}, "graph spec");
  if (!doc.contains("kind") || !doc["kind"].is_string()) bad("graph spec needs a string \"kind\"");
  const json params = doc.value("params", json::object());
  const auto kind_name = normalized_kind(doc["kind"].get<std::string>());
  std::optional<GraphKind> kind;
  for (auto k : {GraphKind::ExplicitFinite, GraphKind::Ladder, GraphKind::CoreWithInwardRays, GraphKind::ZRay,
                 GraphKind::WeightedFullShift}) {
    if (normalized_kind(std::string(to_string(k))) == kind_name) kind = k;
  }
  if (!kind) bad("unknown graph kind \"" + doc["kind"].get<std::string>() + "\"");
  switch (*kind) {
    case GraphKind::Ladder:
      only_keys(params, {}, "Ladder params");
      return GraphModel::ladder();
    case GraphKind::ZRay:
      only_keys(params, {}, "ZRay params");
      return GraphModel::z_ray();
    case GraphKind::ExplicitFinite:
      only_keys(params, {"edges"}, "ExplicitFinite params");
      if (!params.contains("edges")) bad("ExplicitFinite needs \"edges\"");
      return GraphModel::explicit_finite(parse_edges(params["edges"], "edges"));
    case GraphKind::WeightedFullShift: {
      only_keys(params, {"symbols"}, "WeightedFullShift params");
      if (!params.contains("symbols")) bad("WeightedFullShift needs \"symbols\"");
      const auto n = as_int(params["symbols"], "symbols");
      if (n < 1 || n > 1'000'000) bad("symbols out of range");
      return GraphModel::weighted_full_shift(static_cast<int>(n));
    }
    case GraphKind::CoreWithInwardRays: {
      only_keys(params, {"core_edges", "rays", "ray_targets"}, "CoreWithInwardRays params");
      if (!params.contains("core_edges") || !params.contains("rays")) {
        bad("CoreWithInwardRays needs \"core_edges\" and \"rays\"");
      }
      const auto rays = as_int(params["rays"], "rays");
      if (rays < 0 || rays > 1'000'000) bad("rays out of range");
      std::vector<VertexId> targets;
      if (params.contains("ray_targets")) {
        if (!params["ray_targets"].is_array()) bad("ray_targets must be an array");
        for (const auto& t : params["ray_targets"]) targets.push_back(as_int(t, "ray_targets"));
      }
      return GraphModel::core_with_inward_rays(parse_edges(params["core_edges"], "core_edges"),
                                               static_cast<int>(rays), targets);
    }
  }
  bad("unreachable graph kind");
}

Potential parse_potential(std::string_view json_text, const GraphModel& g) {
  const json doc = parse_json(json_text);
  only_keys(doc, {"depth", "table", "family_rule", "truncation_variation"}, "potential spec");
  const bool has_table = doc.contains("table"), has_rule = doc.contains("family_rule");
  if (has_table == has_rule) bad("potential spec needs exactly one of \"table\" and \"family_rule\"");
  Potential phi = Potential::constant(0.0);
  if (has_table) {
    if (!doc.contains("depth")) bad("a table potential needs \"depth\"");
    const auto k = as_int(doc["depth"], "depth");
    if (k < 1 || k > static_cast<std::int64_t>(kMaxPotentialDepth)) bad("depth must lie in 1..8");
    if (!doc["table"].is_object()) bad("table must be an object");
    std::map<std::vector<EdgeId>, double> values;
    for (const auto& [key, value] : doc["table"].items()) {
      std::vector<EdgeId> word;
      for (auto tok : split_ws(key)) {
        const auto e = g.parse_edge_label(tok);
        if (!e) bad("unknown edge \"" + std::string(tok) + "\" in table key");
        word.push_back(*e);
      }
      if (word.size() != static_cast<std::size_t>(k)) bad("table key \"" + key + "\" does not have depth edges");
      FinitePath::from_edges(g, word);
      values[word] = as_value(value, "table value");
    }
    phi = Potential::table(static_cast<std::size_t>(k), std::move(values));
  } else {
    const auto& rule = doc["family_rule"];
    if (doc.contains("depth") && as_int(doc["depth"], "depth") != 1) bad("family rules have depth 1");
    if (!rule.is_object()) bad("family_rule must be an object");
    if (rule.contains("constant")) {
      only_keys(rule, {"constant"}, "family_rule");
      phi = Potential::constant(as_value(rule["constant"], "constant"));
    } else if (rule.contains("up") || rule.contains("down")) {
      only_keys(rule, {"up", "down"}, "family_rule");
      if (!rule.contains("up") || !rule.contains("down")) bad("family_rule needs both \"up\" and \"down\"");
      phi = Potential::ladder_up_down(as_value(rule["up"], "up"), as_value(rule["down"], "down"));
    } else if (rule.contains("edges")) {
      only_keys(rule, {"edges"}, "family_rule");
      if (!rule["edges"].is_object()) bad("edges must be an object");
      std::map<EdgeId, double> values;
      for (const auto& [key, value] : rule["edges"].items()) {
        const auto e = g.parse_edge_label(key);
        if (!e) bad("unknown edge \"" + key + "\"");
        values[*e] = as_value(value, "edge value");
      }
      phi = Potential::edge_values(std::move(values));
    } else if (rule.contains("core_edges")) {
      only_keys(rule, {"core_edges", "ray_levels"}, "family_rule");
      if (!rule["core_edges"].is_object()) bad("core_edges must be an object");
      std::map<EdgeId, double> values;
      for (const auto& [key, value] : rule["core_edges"].items()) {
        const auto e = g.parse_edge_label(key);
        if (!e) bad("unknown edge \"" + key + "\"");
        values[*e] = as_value(value, "core edge value");
      }
      std::vector<double> levels;
      if (rule.contains("ray_levels")) {
        if (!rule["ray_levels"].is_array()) bad("ray_levels must be an array");
        for (const auto& v : rule["ray_levels"]) levels.push_back(as_value(v, "ray level"));
      }
      phi = Potential::core_ray(std::move(values), std::move(levels));
    } else {
      bad("family_rule needs one of constant, up/down, edges, core_edges");
    }
  }
  if (doc.contains("truncation_variation")) {
    const double tv = as_value(doc["truncation_variation"], "truncation_variation");
    if (tv < 0.0) bad("truncation_variation must be nonnegative");
    phi.truncation_variation = tv;
  }
  phi.validate(g);
  return phi;
}

FinitePath parse_path(const GraphModel& g, std::string_view text) {
  text = trim(text);
  if (text.size() >= 3 && text.front() == '[' && text.back() == ']') {
    const auto inner = text.substr(1, text.size() - 2);
    VertexId v = 0;
    const auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
    if (ec != std::errc() || ptr != inner.data() + inner.size()) bad("bad vertex in \"" + std::string(text) + "\"");
    if (!g.has_vertex(v)) bad("no vertex " + std::to_string(v));
    return FinitePath::vertex(v);
  }
  std::vector<EdgeId> edges;
  for (auto tok : split_ws(text)) {
    const auto e = g.parse_edge_label(tok);
    if (!e) bad("unknown edge \"" + std::string(tok) + "\"");
    edges.push_back(*e);
  }
  if (edges.empty()) bad("empty path; write [v] for a vertex cylinder");
  return FinitePath::from_edges(g, std::move(edges));
}

std::string format_path(const GraphModel& g, const FinitePath& p) {
  if (p.empty()) return "[" + std::to_string(p.source()) + "]";
  std::string out;
  for (EdgeId e : p.edges()) {
    if (!out.empty()) out.push_back(' ');
    out += g.edge_label(e);
  }
  return out;
}

BasePoint parse_point(const GraphModel& g, std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos) bad("a point is \"prefix | loop\" or \"prefix | ray\"");
  const auto head = trim(text.substr(0, bar));
  const auto tail = trim(text.substr(bar + 1));
  const FinitePath prefix = parse_path(g, head);
  if (tail == "ray") return BasePoint::greedy_ray(g, prefix);
  return BasePoint::periodic(g, prefix, parse_path(g, tail));
}

std::string format_point(const GraphModel& g, const BasePoint& x) {
  const std::string tail = x.tail() == BasePoint::Tail::GreedyRay ? "ray" : format_path(g, x.loop());
  return format_path(g, x.prefix()) + " | " + tail;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_measure_tsv(std::ostream& os, const GraphModel& g, const CylinderMeasure& m) {
  for (const auto& [mu, lv] : m.log_values()) {
    os << format_path(g, mu) << '\t' << format_double(lv == kLogZero ? lv : lv / std::log(10.0)) << '\n';
  }
}

CylinderMeasure read_measure_tsv(std::string_view text, const GraphModel& g) {
  std::vector<std::pair<FinitePath, double>> rows;
  std::size_t depth = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) bad("measure line " + std::to_string(line_no) + " has no tab");
    const auto p = parse_path(g, line.substr(0, tab));
    const auto vs = trim(line.substr(tab + 1));
    const double v = vs == "-inf" ? kLogZero : parse_number(vs);
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) bad("bad measure value on line " + std::to_string(line_no));
    depth = std::max(depth, p.length());
    rows.emplace_back(p, v);
  }
  CylinderMeasure m(depth);
  std::set<FinitePath> seen;
  for (const auto& [p, v] : rows) {
    if (!seen.insert(p).second) bad("duplicate cylinder " + format_path(g, p));
    m.set_log(p, v == kLogZero ? kLogZero : v * std::log(10.0));
  }
  return m;
}

void write_pressure_header(std::ostream& os) { os << "beta\tp_lo\tp_est\tp_hi\tN\n"; }

void write_pressure_row(std::ostream& os, double beta, const PressureEstimate& p) {
  os << format_double(beta) << '\t' << format_double(p.lo) << '\t' << format_double(p.point) << '\t'
     << format_double(p.hi) << '\t' << p.N << '\n';
}

}  // namespace shiftthermo::io
