#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "strata/events.hpp"
#include "strata/graph.hpp"
#include "strata/scenarios.hpp"

using namespace strata;

namespace {

struct StreamStats {
    int vertices = 0, edges = 0;
    Graph graph;
};

StreamStats replay(const std::vector<EditEvent>& evs) {
    StreamStats st;
    for (const auto& ev : evs) {
        apply_event(st.graph, ev);
        if (ev.kind == EditKind::AddVertex) ++st.vertices;
        if (ev.kind == EditKind::AddEdge) ++st.edges;
    }
    return st;
}

std::multiset<std::pair<VertexId, VertexId>> edge_pairs(const std::vector<EditEvent>& evs) {
    std::multiset<std::pair<VertexId, VertexId>> out;
    for (const auto& ev : evs)
        if (ev.kind == EditKind::AddEdge) out.insert(std::minmax(ev.u, ev.v));
    return out;
}

}  // namespace

TEST_CASE("cube scenario: counts for degenerate and regular sizes") {
    auto one = replay(scenario_cube(1));
    CHECK(one.vertices == 1);
    CHECK(one.edges == 0);

    auto two = replay(scenario_cube(2));
    CHECK(two.vertices == 8);
    CHECK(two.edges == 12);

    auto ten = replay(scenario_cube(10));
    CHECK(ten.vertices == 1000);
    CHECK(ten.edges == 2700);  // 3 axes * n^2 * (n-1)
}

TEST_CASE("cube scenario: lattice degree histogram") {
    auto st = replay(scenario_cube(3));
    std::map<int, int> hist;
    for (VertexId v : st.graph.vertex_ids_sorted()) ++hist[st.graph.degree(v)];
    CHECK(hist[3] == 8);   // corners
    CHECK(hist[4] == 12);  // edge midpoints
    CHECK(hist[5] == 6);   // face centres
    CHECK(hist[6] == 1);   // body centre
}

TEST_CASE("cube scenario: everything arrives at time zero, vertices before edges") {
    const auto evs = scenario_cube(3);
    bool seen_edge = false;
    for (const auto& ev : evs) {
        CHECK(ev.has_time);
        CHECK(ev.time == 0.0);
        if (ev.kind == EditKind::AddEdge) seen_edge = true;
        if (ev.kind == EditKind::AddVertex) CHECK(!seen_edge);
    }
}

TEST_CASE("random-pair scenario: edge probability endpoints") {
    const int n = 20;
    auto all = replay(scenario_gnp(n, 1.0, 10.0, 42));
    CHECK(all.vertices == n);
    CHECK(all.edges == n * (n - 1) / 2);

    auto none = replay(scenario_gnp(n, 1e-12, 10.0, 42));
    CHECK(none.vertices == n);
    CHECK(none.edges == 0);
}

TEST_CASE("random-pair scenario: a pair's trigger does not depend on the threshold") {
    // The same seed must grow the same graph, just truncated at a lower
    // threshold, so the sparse edge set nests inside the denser one.
    const auto lo = edge_pairs(scenario_gnp(30, 0.2, 5.0, 7));
    const auto hi = edge_pairs(scenario_gnp(30, 0.4, 5.0, 7));
    CHECK(lo.size() < hi.size());
    CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
}

TEST_CASE("random-pair scenario: times are sorted and scale with the threshold") {
    const auto evs = scenario_gnp(50, 0.3, 8.0, 3);
    double last = -1.0;
    for (const auto& ev : evs) {
        CHECK(ev.has_time);
        CHECK(ev.time >= last);
        CHECK(ev.time <= 8.0);
        last = ev.time;
    }
}

TEST_CASE("random-pair scenario: connectivity is dense above and sparse below the giant threshold") {
    const int n = 500;
    auto fraction = [&](double p) {
        auto st = replay(scenario_gnp(n, p, 1.0, 11));
        test::UnionFind uf;
        for (VertexId v : st.graph.vertex_ids_sorted()) uf.add(v);
        for (const auto& [id, ed] : st.graph.edges()) uf.unite(ed.u, ed.v);
        return double(uf.largest()) / n;
    };
    CHECK(fraction(3.0 / n) > 0.5);
    CHECK(fraction(0.5 / n) < 0.05);
}

TEST_CASE("tree scenario: a search tree is a tree") {
    auto one = replay(scenario_tree(1, 4.0, 9));
    CHECK(one.vertices == 1);
    CHECK(one.edges == 0);

    const auto evs = scenario_tree(1023, 4.0, 9);
    auto st = replay(evs);
    CHECK(st.vertices == 1023);
    CHECK(st.edges == st.vertices - 1);

    test::UnionFind uf;
    bool cycle = false;
    for (const auto& ev : evs) {
        if (ev.kind != EditKind::AddEdge) continue;
        uf.add(ev.u);
        uf.add(ev.v);
        if (uf.find(ev.u) == uf.find(ev.v)) cycle = true;
        uf.unite(ev.u, ev.v);
    }
    CHECK(!cycle);
    CHECK(uf.largest() == 1022 + 1);
}

TEST_CASE("tree scenario: insertions accelerate over the run") {
    const auto evs = scenario_tree(256, 6.0, 1);
    std::vector<double> vertex_times;
    for (const auto& ev : evs) {
        CHECK(ev.has_time);
        if (ev.kind == EditKind::AddVertex) vertex_times.push_back(ev.time);
    }
    REQUIRE(vertex_times.size() == 256);
    CHECK(vertex_times.front() == 0.0);
    CHECK(vertex_times.back() == doctest::Approx(6.0 * std::sqrt(255.0 / 256.0)).epsilon(1e-12));
    for (std::size_t k = 1; k < vertex_times.size(); ++k)
        CHECK(vertex_times[k] > vertex_times[k - 1]);
    // sqrt growth: later arrivals are closer together
    const double first_gap = vertex_times[1] - vertex_times[0];
    const double last_gap = vertex_times.back() - vertex_times[vertex_times.size() - 2];
    CHECK(last_gap < first_gap);
}

TEST_CASE("randomized scenarios replay identically per seed and differ across seeds") {
    auto dump = [](const std::vector<EditEvent>& evs) {
        std::string s;
        for (const auto& ev : evs) s += event_to_jsonl(ev) + '\n';
        return s;
    };
    CHECK(dump(scenario_gnp(40, 0.25, 5.0, 5)) == dump(scenario_gnp(40, 0.25, 5.0, 5)));
    CHECK(dump(scenario_gnp(40, 0.25, 5.0, 5)) != dump(scenario_gnp(40, 0.25, 5.0, 6)));
    CHECK(dump(scenario_tree(64, 5.0, 5)) == dump(scenario_tree(64, 5.0, 5)));
    CHECK(dump(scenario_tree(64, 5.0, 5)) != dump(scenario_tree(64, 5.0, 6)));
}
