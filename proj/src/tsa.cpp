#include "etcabs/tsa.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace etcabs {

namespace {

using json = nlohmann::ordered_json;

// Outward rounding with a one-nano-tick nudge so exactly-representable
// products do not fall to the wrong side.
long floor_ticks(double seconds, long scale) {
  return static_cast<long>(std::floor(seconds * scale + 1e-9));
}
long ceil_ticks(double seconds, long scale) {
  return static_cast<long>(std::ceil(seconds * scale - 1e-9));
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string export_xml(const TimedSafetyAutomaton& t) {
  std::ostringstream o;
  const size_t q = t.location_names.size();
  o << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<nta>\n"
    << "  <declaration>clock " << t.clock << ";</declaration>\n"
    << "  <template>\n    <name>Abstraction</name>\n";
  for (size_t i = 0; i < q; ++i) {
    o << "    <location id=\"id" << i + 1 << "\">\n      <name>"
      << t.location_names[i] << "</name>\n"
      << "      <label kind=\"invariant\">"
      << xml_escape(t.clock + " <= " + std::to_string(t.invariants[i]))
      << "</label>\n    </location>\n";
  }
  const bool dispatch = t.initial == 0;
  if (dispatch) {
    o << "    <location id=\"id0\">\n      <name>Init</name>\n"
      << "      <committed/>\n    </location>\n";
  }
  o << "    <init ref=\"id" << (dispatch ? 0 : t.initial) << "\"/>\n";
  if (dispatch) {
    for (size_t i = 0; i < q; ++i) {
      o << "    <transition>\n      <source ref=\"id0\"/>\n"
        << "      <target ref=\"id" << i + 1 << "\"/>\n"
        << "      <label kind=\"assignment\">" << t.clock
        << " = 0</label>\n    </transition>\n";
    }
  }
  for (const TsaEdge& e : t.edges) {
    o << "    <transition>\n      <source ref=\"id" << e.source << "\"/>\n"
      << "      <target ref=\"id" << e.target << "\"/>\n"
      << "      <label kind=\"guard\">"
      << xml_escape(t.clock + " >= " + std::to_string(e.guard_lo) + " && " +
                    t.clock + " <= " + std::to_string(e.guard_hi))
      << "</label>\n"
      << "      <label kind=\"assignment\">" << t.clock
      << " = 0</label>\n    </transition>\n";
  }
  o << "  </template>\n  <system>system Abstraction;</system>\n</nta>\n";
  return o.str();
}

std::string export_dot(const TimedSafetyAutomaton& t) {
  std::ostringstream o;
  o << "digraph abstraction {\n  rankdir=LR;\n";
  for (size_t i = 0; i < t.location_names.size(); ++i) {
    o << "  " << t.location_names[i] << " [label=\"" << t.location_names[i]
      << "\\nc <= " << t.invariants[i] << "\"";
    if (t.initial == static_cast<int>(i) + 1) o << ", penwidth=2";
    o << "];\n";
  }
  for (const TsaEdge& e : t.edges) {
    o << "  " << t.location_names[e.source - 1] << " -> "
      << t.location_names[e.target - 1] << " [label=\"[" << e.guard_lo << ","
      << e.guard_hi << "]\"];\n";
  }
  o << "}\n";
  return o.str();
}

std::string export_json(const TimedSafetyAutomaton& t) {
  json j;
  j["locations"] = t.location_names;
  j["invariants"] = t.invariants;
  j["initial"] = t.initial;
  j["clock"] = t.clock;
  j["time_scale"] = t.time_scale;
  json es = json::array();
  for (const TsaEdge& e : t.edges)
    es.push_back({{"source", e.source},
                  {"target", e.target},
                  {"guard_lo", e.guard_lo},
                  {"guard_hi", e.guard_hi},
                  {"action", e.action}});
  j["edges"] = es;
  return j.dump(2);
}

}  // namespace

TimedSafetyAutomaton assemble(const std::vector<RegionTiming>& timings,
                              const EdgeSet& edge_set, int initial_region,
                              long time_scale) {
  if (time_scale < 1) throw EtcabsError("assemble: time_scale must be >= 1");
  const int q = static_cast<int>(timings.size());
  TimedSafetyAutomaton t;
  t.time_scale = time_scale;
  t.initial = initial_region;
  if (initial_region < 0 || initial_region > q)
    throw EtcabsError("assemble: initial region out of range");
  t.location_names.resize(q);
  t.invariants.resize(q);
  std::vector<long> guard_lo(q);
  for (const RegionTiming& rt : timings) {
    if (rt.index < 1 || rt.index > q)
      throw EtcabsError("assemble: timing for unknown region " +
                        std::to_string(rt.index));
    t.location_names[rt.index - 1] = "R" + std::to_string(rt.index);
    guard_lo[rt.index - 1] = floor_ticks(rt.tau_lo, time_scale);
    t.invariants[rt.index - 1] = ceil_ticks(rt.tau_hi, time_scale);
  }
  for (auto [s, d] : edge_set) {
    if (s < 1 || s > q || d < 1 || d > q)
      throw EtcabsError("assemble: edge references unknown region");
    TsaEdge e;
    e.source = s;
    e.target = d;
    e.guard_lo = guard_lo[s - 1];
    e.guard_hi = t.invariants[s - 1];
    t.edges.push_back(e);
  }
  return t;
}

std::string export_tsa(const TimedSafetyAutomaton& tsa,
                       const std::string& format) {
  if (format == "uppaal-xml") return export_xml(tsa);
  if (format == "json") return export_json(tsa);
  if (format == "dot") return export_dot(tsa);
  throw EtcabsError("export_tsa: unsupported format '" + format + "'");
}

TimedSafetyAutomaton import_tsa_json(const std::string& document) {
  json j = json::parse(document);
  TimedSafetyAutomaton t;
  t.location_names = j.at("locations").get<std::vector<std::string>>();
  t.invariants = j.at("invariants").get<std::vector<long>>();
  t.initial = j.at("initial").get<int>();
  t.clock = j.at("clock").get<std::string>();
  t.time_scale = j.at("time_scale").get<long>();
  for (const json& e : j.at("edges")) {
    TsaEdge edge;
    edge.source = e.at("source").get<int>();
    edge.target = e.at("target").get<int>();
    edge.guard_lo = e.at("guard_lo").get<long>();
    edge.guard_hi = e.at("guard_hi").get<long>();
    edge.action = e.at("action").get<std::string>();
    t.edges.push_back(edge);
  }
  return t;
}

bool accepts(const TimedSafetyAutomaton& tsa,
             const std::vector<int>& region_sequence,
             const std::vector<double>& dwell_seconds) {
  if (region_sequence.empty()) return true;
  if (region_sequence.size() != dwell_seconds.size() + 1) return false;
  if (tsa.initial != 0 && region_sequence.front() != tsa.initial) return false;
  for (size_t k = 0; k < dwell_seconds.size(); ++k) {
    const int s = region_sequence[k];
    const int d = region_sequence[k + 1];
    const double ticks = dwell_seconds[k] * tsa.time_scale;
    bool ok = false;
    for (const TsaEdge& e : tsa.edges) {
      if (e.source != s || e.target != d) continue;
      // one-tick slack absorbs quantization of the measured dwell
      if (ticks >= e.guard_lo - 1 && ticks <= e.guard_hi + 1) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace etcabs
