#ifndef ETCABS_TSA_HPP_
#define ETCABS_TSA_HPP_

#include <string>
#include <vector>

#include "etcabs/reach.hpp"
#include "etcabs/regional_bounds.hpp"
#include "etcabs/types.hpp"

namespace etcabs {

/// A single-clock timed safety automaton over the region locations. Guards
/// and invariants are natural numbers of clock ticks; quantization rounds
/// outward (floor on the lower guard, ceil on the upper / invariant) so the
/// real timing interval is contained in the quantized one.
struct TsaEdge {
  int source = 0;  // region index, 1-based
  int target = 0;
  long guard_lo = 0;
  long guard_hi = 0;
  std::string action = "*";
  // every edge resets the clock: c := 0
};

struct TimedSafetyAutomaton {
  std::vector<std::string> location_names;  // "R1".."Rq", index 0-based
  std::vector<long> invariants;             // per-location c <= inv
  int initial = 0;       // 1-based region index; 0 = unconstrained initial
  std::string clock = "c";
  long time_scale = 1000;
  std::vector<TsaEdge> edges;
};

/// initial_region 0 means the initial state was not pinned; exports then
/// emit a committed dispatcher location with an outgoing edge to every
/// region.
TimedSafetyAutomaton assemble(const std::vector<RegionTiming>& timings,
                              const EdgeSet& edge_set, int initial_region,
                              long time_scale);

/// format: "uppaal-xml", "json" or "dot". Deterministic byte output.
std::string export_tsa(const TimedSafetyAutomaton& tsa,
                       const std::string& format);

/// Parse-back of the json export.
TimedSafetyAutomaton import_tsa_json(const std::string& document);

/// Checks that the location/dwell sequence of a sampled trace is an
/// accepted run: consecutive locations connected by an edge whose guard
/// admits the quantized dwell, within a one-tick slack on each side.
bool accepts(const TimedSafetyAutomaton& tsa,
             const std::vector<int>& region_sequence,
             const std::vector<double>& dwell_seconds);

}  // namespace etcabs

#endif
