#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "strata/graph.hpp"

namespace strata {

// JSONL edit-event streams.  One object per line:
//   {"op":"add_vertex","id":7}
//   {"op":"add_edge","id":12,"u":7,"v":3}
//   {"op":"remove_edge","id":12}
//   {"op":"remove_vertex","id":7}
// plus an optional "t" (seconds of simulation time; the event applies once the
// clock reaches it).  Events without "t" apply in file order, one per step.

std::vector<EditEvent> parse_events(std::istream& in, const std::string& origin);
std::vector<EditEvent> load_events(const std::string& path);

std::string event_to_jsonl(const EditEvent& ev);
void write_events(std::ostream& out, const std::vector<EditEvent>& events);

// Applies one event to the graph (explicit ids).  Errors from the graph are
// rethrown as-is; callers add stream context.
void apply_event(Graph& g, const EditEvent& ev);

}  // namespace strata
