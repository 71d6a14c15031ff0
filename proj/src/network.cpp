// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dbp/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dbp/error.hpp"
#include "dbp/strings.hpp"

namespace dbp {

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kJunction: return "junction";
    case NodeKind::kReservoir: return "reservoir";
    case NodeKind::kTank: return "tank";
  }
  return "junction";
}

std::string_view DiagnosticKindName(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kUnreachableJunction: return "unreachable node";
    case DiagnosticKind::kIsolatedByClosedPipe: return "isolated node";
    case DiagnosticKind::kRequiresUnsupportedLink: return "requires pump/valve";
    case DiagnosticKind::kZeroDemand: return "zero-demand network";
  }
  return "unknown";
}

void Network::Reindex() {
  node_index_.clear();
  pipe_index_.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i) node_index_[nodes[i].id] = i;
  for (std::size_t i = 0; i < pipes.size(); ++i) pipe_index_[pipes[i].id] = i;
}

std::optional<std::size_t> Network::FindNode(std::string_view id) const {
  auto it = node_index_.find(std::string(id));
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Network::FindPipe(std::string_view id) const {
  auto it = pipe_index_.find(std::string(id));
  if (it == pipe_index_.end()) return std::nullopt;
  return it->second;
}

const Node& Network::node(std::string_view id) const {
  auto idx = FindNode(id);
  if (!idx) {
    throw Error(ErrorCode::kUnknownNode, "unknown node '" + std::string(id) + "'");
  }
  return nodes[*idx];
}

std::size_t Network::JunctionCount() const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.kind == NodeKind::kJunction;
  return n;
}

bool Network::operator==(const Network& o) const {
  return title == o.title && nodes == o.nodes && pipes == o.pipes &&
         unsupported_elements == o.unsupported_elements &&
         bulk_coeff == o.bulk_coeff && reaction_order == o.reaction_order &&
         quality_timestep == o.quality_timestep &&
         extra_options == o.extra_options && extra_times == o.extra_times &&
         extra_reactions == o.extra_reactions &&
         opaque_sections == o.opaque_sections;
}

namespace {

struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
  std::string text;  // comment-stripped, trimmed
};

const std::set<std::string> kKnownSections = {
    "TITLE",  "JUNCTIONS",   "RESERVOIRS", "TANKS",     "PIPES",
    "PUMPS",  "VALVES",      "DEMANDS",    "COORDINATES", "QUALITY",
    "REACTIONS", "OPTIONS",  "TIMES",      "END"};

double NumberField(const Row& row, std::size_t i, const char* what) {
  auto v = ParseDouble(row.fields.at(i));
  if (!v) {
    throw ParseError(ErrorCode::kMalformedRow, row.line,
                     std::string("non-numeric ") + what + " '" +
                         row.fields[i] + "'");
  }
  return *v;
}

void RequireFieldCount(const Row& row, std::size_t lo, std::size_t hi,
                       const char* section) {
  const std::size_t n = row.fields.size();
  if (n < lo || n > hi) {
    std::ostringstream msg;
    msg << "[" << section << "] row has " << n << " fields, expected ";
    if (lo == hi) {
      msg << lo;
    } else {
      msg << lo << ".." << hi;
    }
    throw ParseError(ErrorCode::kMalformedRow, row.line, msg.str());
  }
}

// Flow-unit factor to L/s. US customary units are rejected.
double FlowUnitFactor(const std::string& units, std::size_t line) {
  if (units == "LPS") return 1.0;
  if (units == "LPM") return 1.0 / 60.0;
  if (units == "MLD") return 1.0e6 / 86400.0;
  if (units == "CMH") return 1000.0 / 3600.0;
  if (units == "CMD") return 1000.0 / 86400.0;
  throw ParseError(ErrorCode::kUnsupportedUnits, line,
                   "flow units '" + units + "' are not supported (SI only)");
}

// Accepts "H:MM", "H:MM:SS", decimal hours, or "<value> <unit>".
double ParseDuration(const std::vector<std::string>& tokens, std::size_t line) {
  if (tokens.empty()) {
    throw ParseError(ErrorCode::kMalformedRow, line, "missing duration");
  }
  const std::string& t = tokens[0];
  if (t.find(':') != std::string::npos) {
    double total = 0.0;
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string piece;
    while (std::getline(ss, piece, ':')) {
      auto v = ParseDouble(piece);
      if (!v) throw ParseError(ErrorCode::kMalformedRow, line, "bad clock time '" + t + "'");
      parts.push_back(*v);
    }
    if (parts.size() < 2 || parts.size() > 3) {
      throw ParseError(ErrorCode::kMalformedRow, line, "bad clock time '" + t + "'");
    }
    total = parts[0] * 3600.0 + parts[1] * 60.0;
    if (parts.size() == 3) total += parts[2];
    return total;
  }
  auto v = ParseDouble(t);
  if (!v) throw ParseError(ErrorCode::kMalformedRow, line, "bad duration '" + t + "'");
  std::string unit = tokens.size() > 1 ? ToUpper(tokens[1]) : "HOURS";
  if (unit.rfind("SEC", 0) == 0) return *v;
  if (unit.rfind("MIN", 0) == 0) return *v * 60.0;
  if (unit.rfind("HOUR", 0) == 0) return *v * 3600.0;
  if (unit.rfind("DAY", 0) == 0) return *v * 86400.0;
  throw ParseError(ErrorCode::kMalformedRow, line, "unknown time unit '" + tokens[1] + "'");
}

}  // namespace

Network ParseInp(std::string_view text) {
  // Pass 1: split into sections so that section order does not matter.
  std::map<std::string, std::vector<Row>> sections;
  std::vector<std::string> section_order;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto semi = raw.find(';'); semi != std::string_view::npos) {
      raw = raw.substr(0, semi);
    }
    std::string_view trimmed = Trim(raw);
    if (trimmed.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (trimmed.front() == '[') {
      auto close = trimmed.find(']');
      if (close == std::string_view::npos) {
        throw ParseError(ErrorCode::kMalformedRow, line_no, "unterminated section header");
      }
      current = ToUpper(Trim(trimmed.substr(1, close - 1)));
      if (!sections.count(current)) section_order.push_back(current);
      sections[current];
      continue;
    }
    if (current.empty()) {
      throw ParseError(ErrorCode::kMalformedRow, line_no, "data before first section header");
    }
    sections[current].push_back(Row{line_no, SplitWhitespace(trimmed), std::string(trimmed)});
    if (nl == text.size()) break;
  }

  if (!sections.count("JUNCTIONS")) {
    throw ParseError(ErrorCode::kMissingSection, 0, "missing [JUNCTIONS] section");
  }
  if (!sections.count("PIPES")) {
    throw ParseError(ErrorCode::kMissingSection, 0, "missing [PIPES] section");
  }

  Network net;
  std::map<std::string, std::size_t> node_line;

  // [OPTIONS] first: units affect how demands are read.
  double flow_factor = 1.0;
  for (const Row& row : sections["OPTIONS"]) {
    const std::string key = ToUpper(row.fields[0]);
    if (key == "UNITS") {
      RequireFieldCount(row, 2, 2, "OPTIONS");
      flow_factor = FlowUnitFactor(ToUpper(row.fields[1]), row.line);
    } else if (key == "HEADLOSS") {
      RequireFieldCount(row, 2, 2, "OPTIONS");
      if (ToUpper(row.fields[1]) != "H-W") {
        throw ParseError(ErrorCode::kUnsupportedUnits, row.line,
                         "only Hazen-Williams (H-W) headloss is supported");
      }
    } else {
      net.extra_options.push_back(row.text);
    }
  }

  auto add_node = [&](Node node, std::size_t line) {
    if (node_line.count(node.id)) {
      throw ParseError(ErrorCode::kDuplicateId, line, "duplicate node id '" + node.id + "'");
    }
    node_line[node.id] = line;
    net.nodes.push_back(std::move(node));
  };

  for (const Row& row : sections["JUNCTIONS"]) {
    RequireFieldCount(row, 2, 4, "JUNCTIONS");
    Node n;
    n.id = row.fields[0];
    n.kind = NodeKind::kJunction;
    n.elevation = NumberField(row, 1, "elevation");
    if (row.fields.size() > 2) n.base_demand = NumberField(row, 2, "demand") * flow_factor;
    if (n.base_demand < 0.0) {
      throw ParseError(ErrorCode::kMalformedRow, row.line, "negative demand at '" + n.id + "'");
    }
    if (row.fields.size() > 3) n.pattern = row.fields[3];
    add_node(std::move(n), row.line);
  }
  for (const Row& row : sections["RESERVOIRS"]) {
    RequireFieldCount(row, 2, 3, "RESERVOIRS");
    Node n;
    n.id = row.fields[0];
    n.kind = NodeKind::kReservoir;
    n.head = NumberField(row, 1, "head");
    n.elevation = n.head;
    if (row.fields.size() > 2) n.pattern = row.fields[2];
    add_node(std::move(n), row.line);
  }
  for (const Row& row : sections["TANKS"]) {
    RequireFieldCount(row, 7, 8, "TANKS");
    Node n;
    n.id = row.fields[0];
    n.kind = NodeKind::kTank;
    n.elevation = NumberField(row, 1, "elevation");
    TankGeometry g;
    g.initial_level = NumberField(row, 2, "initial level");
    g.min_level = NumberField(row, 3, "min level");
    g.max_level = NumberField(row, 4, "max level");
    g.diameter = NumberField(row, 5, "diameter");
    g.min_volume = NumberField(row, 6, "min volume");
    if (row.fields.size() > 7) g.volume_curve = row.fields[7];
    n.head = n.elevation + g.initial_level;
    n.tank = g;
    add_node(std::move(n), row.line);
  }
  net.Reindex();

  const bool has_fixed_head = std::any_of(
      net.nodes.begin(), net.nodes.end(), [](const Node& n) { return n.fixed_head(); });
  if (net.JunctionCount() == 0) {
    throw ParseError(ErrorCode::kMissingSection, 0, "no junctions defined");
  }
  if (!has_fixed_head) {
    throw ParseError(ErrorCode::kMissingSection, 0,
                     "no fixed-head node: [RESERVOIRS] or [TANKS] required");
  }

  auto require_node = [&](const std::string& id, const Row& row, const char* what) {
    if (!net.FindNode(id)) {
      throw ParseError(ErrorCode::kDanglingReference, row.line,
                       std::string(what) + " references unknown node '" + id + "'");
    }
  };

  std::set<std::string> link_ids;
  for (const Row& row : sections["PIPES"]) {
    RequireFieldCount(row, 6, 8, "PIPES");
    Pipe p;
    p.id = row.fields[0];
    p.from = row.fields[1];
    p.to = row.fields[2];
    require_node(p.from, row, "pipe");
    require_node(p.to, row, "pipe");
    if (p.from == p.to) {
      throw ParseError(ErrorCode::kMalformedRow, row.line, "pipe '" + p.id + "' has identical endpoints");
    }
    p.length = NumberField(row, 3, "length");
    p.diameter = NumberField(row, 4, "diameter");
    p.roughness = NumberField(row, 5, "roughness");
    if (p.length <= 0 || p.diameter <= 0 || p.roughness <= 0) {
      throw ParseError(ErrorCode::kMalformedRow, row.line,
                       "pipe '" + p.id + "' needs positive length, diameter and roughness");
    }
    if (row.fields.size() > 6) p.minor_loss = NumberField(row, 6, "minor loss");
    if (row.fields.size() > 7) {
      const std::string st = ToUpper(row.fields[7]);
      if (st == "CLOSED") {
        p.status = LinkStatus::kClosed;
      } else if (st == "CV") {
        p.check_valve = true;
      } else if (st != "OPEN") {
        throw ParseError(ErrorCode::kMalformedRow, row.line, "unknown pipe status '" + row.fields[7] + "'");
      }
    }
    if (!link_ids.insert(p.id).second) {
      throw ParseError(ErrorCode::kDuplicateId, row.line, "duplicate link id '" + p.id + "'");
    }
    net.pipes.push_back(std::move(p));
  }
  for (const char* sec : {"PUMPS", "VALVES"}) {
    for (const Row& row : sections[sec]) {
      RequireFieldCount(row, 3, 64, sec);
      UnsupportedLink u;
      u.section = sec;
      u.id = row.fields[0];
      u.from = row.fields[1];
      u.to = row.fields[2];
      require_node(u.from, row, sec == std::string("PUMPS") ? "pump" : "valve");
      require_node(u.to, row, sec == std::string("PUMPS") ? "pump" : "valve");
      u.fields.assign(row.fields.begin() + 3, row.fields.end());
      if (!link_ids.insert(u.id).second) {
        throw ParseError(ErrorCode::kDuplicateId, row.line, "duplicate link id '" + u.id + "'");
      }
      net.unsupported_elements.push_back(std::move(u));
    }
  }
  net.Reindex();

  // [DEMANDS] rows replace the junction's base demand; several rows for one
  // junction are summed.
  std::set<std::string> demand_seen;
  for (const Row& row : sections["DEMANDS"]) {
    RequireFieldCount(row, 2, 3, "DEMANDS");
    require_node(row.fields[0], row, "demand");
    Node& n = net.nodes[*net.FindNode(row.fields[0])];
    if (n.kind != NodeKind::kJunction) {
      throw ParseError(ErrorCode::kMalformedRow, row.line, "demand on non-junction '" + n.id + "'");
    }
    const double d = NumberField(row, 1, "demand") * flow_factor;
    if (d < 0.0) throw ParseError(ErrorCode::kMalformedRow, row.line, "negative demand");
    if (demand_seen.insert(n.id).second) n.base_demand = 0.0;
    n.base_demand += d;
  }
  for (const Row& row : sections["COORDINATES"]) {
    RequireFieldCount(row, 3, 3, "COORDINATES");
    require_node(row.fields[0], row, "coordinate");
    net.nodes[*net.FindNode(row.fields[0])].coord =
        Coord{NumberField(row, 1, "x"), NumberField(row, 2, "y")};
  }
  for (const Row& row : sections["QUALITY"]) {
    RequireFieldCount(row, 2, 2, "QUALITY");
    require_node(row.fields[0], row, "quality");
    const double q = NumberField(row, 1, "initial quality");
    if (q < 0) throw ParseError(ErrorCode::kMalformedRow, row.line, "negative initial quality");
    net.nodes[*net.FindNode(row.fields[0])].initial_quality = q;
  }
  for (const Row& row : sections["REACTIONS"]) {
    const std::string k0 = ToUpper(row.fields[0]);
    const std::string k1 = row.fields.size() > 1 ? ToUpper(row.fields[1]) : "";
    if (k0 == "ORDER" && k1 == "BULK") {
      RequireFieldCount(row, 3, 3, "REACTIONS");
      net.reaction_order = NumberField(row, 2, "reaction order");
      if (net.reaction_order < 0) {
        throw ParseError(ErrorCode::kMalformedRow, row.line, "negative reaction order");
      }
    } else if (k0 == "GLOBAL" && k1 == "BULK") {
      RequireFieldCount(row, 3, 3, "REACTIONS");
      // File convention: 1/day, negative for decay.
      const double per_day = NumberField(row, 2, "bulk coefficient");
      if (per_day > 0) {
        throw ParseError(ErrorCode::kMalformedRow, row.line,
                         "positive (growth) bulk coefficient is not supported");
      }
      net.bulk_coeff = -per_day / 24.0;
    } else {
      net.extra_reactions.push_back(row.text);
    }
  }
  for (const Row& row : sections["TIMES"]) {
    if (row.fields.size() >= 3 && ToUpper(row.fields[0]) == "QUALITY" &&
        ToUpper(row.fields[1]) == "TIMESTEP") {
      net.quality_timestep = ParseDuration({row.fields.begin() + 2, row.fields.end()}, row.line);
    } else {
      net.extra_times.push_back(row.text);
    }
  }
  for (const Row& row : sections["TITLE"]) net.title.push_back(row.text);
  for (const std::string& name : section_order) {
    if (kKnownSections.count(name)) continue;
    OpaqueSection sec{name, {}};
    for (const Row& row : sections[name]) sec.lines.push_back(row.text);
    net.opaque_sections.push_back(std::move(sec));
  }
  net.Reindex();
  return net;
}

Network ReadInpFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open network file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseInp(ss.str());
}

namespace {

// Chooses the file value whose conversion back to 1/hour reproduces
// bulk_coeff bit for bit.
double BulkPerDay(double per_hour) {
  double d = -per_hour * 24.0;
  if (-d / 24.0 == per_hour) return d;
  for (int step = 1; step <= 4; ++step) {
    double up = d, down = d;
    for (int i = 0; i < step; ++i) {
      up = std::nextafter(up, INFINITY);
      down = std::nextafter(down, -INFINITY);
    }
    if (-up / 24.0 == per_hour) return up;
    if (-down / 24.0 == per_hour) return down;
  }
  return d;
}

std::string ClockTime(double seconds) {
  const long long s = std::llround(seconds);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%lld:%02lld:%02lld", s / 3600, (s / 60) % 60, s % 60);
  return buf;
}

}  // namespace

std::string WriteInp(const Network& net) {
  std::ostringstream out;
  const auto num = [](double v) { return FormatDouble(v); };

  out << "[TITLE]\n";
  for (const auto& t : net.title) out << t << "\n";

  out << "\n[JUNCTIONS]\n;ID\tElev\tDemand\tPattern\n";
  for (const auto& n : net.nodes) {
    if (n.kind != NodeKind::kJunction) continue;
    out << n.id << "\t" << num(n.elevation) << "\t" << num(n.base_demand);
    if (!n.pattern.empty()) out << "\t" << n.pattern;
    out << "\n";
  }
  out << "\n[RESERVOIRS]\n;ID\tHead\tPattern\n";
  for (const auto& n : net.nodes) {
    if (n.kind != NodeKind::kReservoir) continue;
    out << n.id << "\t" << num(n.head);
    if (!n.pattern.empty()) out << "\t" << n.pattern;
    out << "\n";
  }
  out << "\n[TANKS]\n;ID\tElev\tInitLvl\tMinLvl\tMaxLvl\tDiam\tMinVol\tVolCurve\n";
  for (const auto& n : net.nodes) {
    if (n.kind != NodeKind::kTank) continue;
    TankGeometry g;
    if (n.tank) {
      g = *n.tank;
    } else {
      g.initial_level = n.head - n.elevation;
    }
    out << n.id << "\t" << num(n.elevation) << "\t" << num(g.initial_level) << "\t"
        << num(g.min_level) << "\t" << num(g.max_level) << "\t" << num(g.diameter)
        << "\t" << num(g.min_volume);
    if (!g.volume_curve.empty()) out << "\t" << g.volume_curve;
    out << "\n";
  }
  out << "\n[PIPES]\n;ID\tNode1\tNode2\tLength\tDiameter\tRoughness\tMinorLoss\tStatus\n";
  for (const auto& p : net.pipes) {
    const char* status = p.status == LinkStatus::kClosed ? "Closed" : (p.check_valve ? "CV" : "Open");
    out << p.id << "\t" << p.from << "\t" << p.to << "\t" << num(p.length) << "\t"
        << num(p.diameter) << "\t" << num(p.roughness) << "\t" << num(p.minor_loss)
        << "\t" << status << "\n";
  }
  for (const char* sec : {"PUMPS", "VALVES"}) {
    out << "\n[" << sec << "]\n";
    for (const auto& u : net.unsupported_elements) {
      if (u.section != sec) continue;
      out << u.id << "\t" << u.from << "\t" << u.to;
      for (const auto& f : u.fields) out << "\t" << f;
      out << "\n";
    }
  }
  out << "\n[COORDINATES]\n;Node\tX\tY\n";
  for (const auto& n : net.nodes) {
    if (n.coord) out << n.id << "\t" << num(n.coord->x) << "\t" << num(n.coord->y) << "\n";
  }
  out << "\n[QUALITY]\n";
  for (const auto& n : net.nodes) {
    if (n.initial_quality != 0.0) out << n.id << "\t" << num(n.initial_quality) << "\n";
  }
  out << "\n[REACTIONS]\nOrder Bulk " << num(net.reaction_order) << "\n"
      << "Global Bulk " << num(BulkPerDay(net.bulk_coeff)) << "\n";
  for (const auto& r : net.extra_reactions) out << r << "\n";
  out << "\n[OPTIONS]\nUnits LPS\nHeadloss H-W\n";
  for (const auto& o : net.extra_options) out << o << "\n";
  out << "\n[TIMES]\nQuality Timestep " << ClockTime(net.quality_timestep) << "\n";
  for (const auto& t : net.extra_times) out << t << "\n";
  for (const auto& sec : net.opaque_sections) {
    out << "\n[" << sec.name << "]\n";
    for (const auto& l : sec.lines) out << l << "\n";
  }
  out << "\n[END]\n";
  return out.str();
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> PipeAdjacency(
    const Network& net, bool open_only) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(net.nodes.size());
  for (std::size_t k = 0; k < net.pipes.size(); ++k) {
    const Pipe& p = net.pipes[k];
    if (open_only && p.status == LinkStatus::kClosed) continue;
    const std::size_t a = *net.FindNode(p.from);
    const std::size_t b = *net.FindNode(p.to);
    adj[a].emplace_back(b, k);
    adj[b].emplace_back(a, k);
  }
  return adj;
}

namespace {

std::vector<char> ReachableFromFixedHeads(
    const Network& net,
    const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj) {
  std::vector<char> seen(net.nodes.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (net.nodes[i].fixed_head()) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (auto [v, k] : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

std::vector<Diagnostic> ValidateNetwork(const Network& net) {
  std::vector<Diagnostic> out;
  const auto open_adj = PipeAdjacency(net, true);
  auto all_adj = PipeAdjacency(net, false);
  const auto open_seen = ReachableFromFixedHeads(net, open_adj);
  const auto any_seen = ReachableFromFixedHeads(net, all_adj);
  for (const auto& u : net.unsupported_elements) {
    const std::size_t a = *net.FindNode(u.from);
    const std::size_t b = *net.FindNode(u.to);
    all_adj[a].emplace_back(b, SIZE_MAX);
    all_adj[b].emplace_back(a, SIZE_MAX);
  }
  const auto with_links = ReachableFromFixedHeads(net, all_adj);

  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (open_seen[i]) continue;
    const Node& n = net.nodes[i];
    if (any_seen[i]) {
      out.push_back({DiagnosticKind::kIsolatedByClosedPipe, n.id,
                     "node '" + n.id + "' is reachable only through a closed pipe"});
    } else if (with_links[i]) {
      out.push_back({DiagnosticKind::kRequiresUnsupportedLink, n.id,
                     "node '" + n.id + "' is supplied only through a pump or valve"});
    } else {
      out.push_back({DiagnosticKind::kUnreachableJunction, n.id,
                     "node '" + n.id + "' is not connected to any reservoir or tank"});
    }
  }
  const bool any_demand = std::any_of(net.nodes.begin(), net.nodes.end(), [](const Node& n) {
    return n.kind == NodeKind::kJunction && n.base_demand > 0.0;
  });
  if (!any_demand) {
    out.push_back({DiagnosticKind::kZeroDemand, "", "no junction has a positive demand"});
  }
  return out;
}

}  // namespace dbp
