#include "strata/events.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace strata {

using nlohmann::json;

namespace {

EditEvent parse_one(const json& j, const std::string& where) {
    if (!j.is_object()) throw error(where + ": event must be a JSON object");
    if (!j.contains("op") || !j["op"].is_string())
        throw error(where + ": missing string field \"op\"");
    std::string op = j["op"].get<std::string>();

    auto get_id = [&](const char* field) -> std::int64_t {
        if (!j.contains(field) || !j[field].is_number_integer())
            throw error(where + ": missing integer field \"" + field + "\"");
        return j[field].get<std::int64_t>();
    };

    EditEvent ev;
    if (op == "add_vertex") {
        ev.kind = EditKind::AddVertex;
        ev.id = get_id("id");
    } else if (op == "remove_vertex") {
        ev.kind = EditKind::RemoveVertex;
        ev.id = get_id("id");
    } else if (op == "add_edge") {
        ev.kind = EditKind::AddEdge;
        ev.id = get_id("id");
        ev.u = get_id("u");
        ev.v = get_id("v");
    } else if (op == "remove_edge") {
        ev.kind = EditKind::RemoveEdge;
        ev.id = get_id("id");
    } else {
        throw error(where + ": unknown op \"" + op + "\"");
    }
    if (j.contains("t")) {
        if (!j["t"].is_number()) throw error(where + ": field \"t\" must be a number");
        ev.has_time = true;
        ev.time = j["t"].get<double>();
    }
    return ev;
}

}  // namespace

std::vector<EditEvent> parse_events(std::istream& in, const std::string& origin) {
    std::vector<EditEvent> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // allow blank lines
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string where = origin + ":" + std::to_string(lineno);
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw error(where + ": malformed JSON");
        out.push_back(parse_one(j, where));
    }
    return out;
}

std::vector<EditEvent> load_events(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open event file: " + path);
    return parse_events(in, path);
}

std::string event_to_jsonl(const EditEvent& ev) {
    json j;
    switch (ev.kind) {
        case EditKind::AddVertex: j["op"] = "add_vertex"; j["id"] = ev.id; break;
        case EditKind::RemoveVertex: j["op"] = "remove_vertex"; j["id"] = ev.id; break;
        case EditKind::AddEdge:
            j["op"] = "add_edge";
            j["id"] = ev.id;
            j["u"] = ev.u;
            j["v"] = ev.v;
            break;
        case EditKind::RemoveEdge: j["op"] = "remove_edge"; j["id"] = ev.id; break;
    }
    if (ev.has_time) j["t"] = ev.time;
    return j.dump();
}

void write_events(std::ostream& out, const std::vector<EditEvent>& events) {
    for (const EditEvent& ev : events) out << event_to_jsonl(ev) << '\n';
}

void apply_event(Graph& g, const EditEvent& ev) {
    switch (ev.kind) {
        case EditKind::AddVertex: g.add_vertex(ev.id); break;
        case EditKind::RemoveVertex: g.remove_vertex(ev.id); break;
        case EditKind::AddEdge: g.add_edge(ev.id, ev.u, ev.v); break;
        case EditKind::RemoveEdge: g.remove_edge(ev.id); break;
    }
}

}  // namespace strata
