#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "strata/engine.hpp"
#include "strata/scenarios.hpp"

using namespace strata;

namespace {

EditEvent vertex_at(VertexId id, double t) {
    EditEvent ev;
    ev.kind = EditKind::AddVertex;
    ev.id = id;
    ev.has_time = true;
    ev.time = t;
    return ev;
}

EditEvent edge_at(EdgeId id, VertexId u, VertexId v, double t) {
    EditEvent ev;
    ev.kind = EditKind::AddEdge;
    ev.id = id;
    ev.u = u;
    ev.v = v;
    ev.has_time = true;
    ev.time = t;
    return ev;
}

std::vector<nlohmann::json> parse_frames(const std::string& jsonl) {
    std::vector<nlohmann::json> out;
    std::istringstream in(jsonl);
    std::string line;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        if (j.contains("frame")) out.push_back(std::move(j));
    }
    return out;
}

std::set<VertexId> frame_ids(const nlohmann::json& frame) {
    std::set<VertexId> ids;
    for (const auto& row : frame.at("vertices")) ids.insert(row.at(0).get<VertexId>());
    return ids;
}

}  // namespace

TEST_CASE("an empty stream yields a header and an immediate stop") {
    RunConfig rc;
    rc.levels = 2;
    std::ostringstream out;
    Engine e(rc);
    const auto rep = e.run(&out);
    CHECK(rep.steps == 0);
    CHECK(rep.frames_written == 0);
    CHECK(rep.vertices == 0);
    const auto lines = out.str();
    CHECK(lines.starts_with("{\"header\":"));
    CHECK(lines.find('\n') == lines.size() - 1);  // single line
}

TEST_CASE("a lone edge relaxes to the two-body rest separation") {
    RunConfig rc;
    rc.levels = 1;
    rc.integrator = "rk4";
    rc.dt = 0.01;
    rc.max_steps = 20000;
    Engine e(rc);
    e.queue_events({vertex_at(0, 0.0), vertex_at(1, 0.0), edge_at(0, 0, 1, 0.0)});
    const auto rep = e.run(nullptr);
    CHECK(rep.settled);

    const auto wp = e.world_positions(0);
    REQUIRE(wp.size() == 2);
    const double rstar = test::two_body_equilibrium(
        rc.physics.spring_k, rc.physics.repulsion_f0, rc.physics.softening);
    CHECK((wp[0] - wp[1]).norm() == doctest::Approx(rstar).epsilon(5e-3));
}

TEST_CASE("frames track the live vertex set through removals") {
    RunConfig rc;
    rc.levels = 2;
    rc.dt = 0.01;
    rc.frame_stride = 1;
    rc.max_steps = 30;
    Engine e(rc);
    EditEvent gone;
    gone.kind = EditKind::RemoveVertex;
    gone.id = 2;
    gone.has_time = true;
    gone.time = 0.1;
    e.queue_events({vertex_at(0, 0.0), vertex_at(1, 0.0), vertex_at(2, 0.0),
                    edge_at(0, 0, 1, 0.0), edge_at(1, 1, 2, 0.0), gone});
    std::ostringstream out;
    e.run(&out);

    const auto frames = parse_frames(out.str());
    REQUIRE(!frames.empty());
    CHECK(frame_ids(frames.front()) == std::set<VertexId>{0, 1, 2});
    CHECK(frame_ids(frames.back()) == std::set<VertexId>{0, 1});
    for (const auto& f : frames)
        for (const auto& row : f.at("vertices")) CHECK(row.size() == 4);
}

TEST_CASE("a timed edit shows up in the frame of the step it lands on") {
    RunConfig rc;
    rc.levels = 1;
    rc.dt = 0.01;
    rc.frame_stride = 1;
    rc.max_steps = 12;
    Engine e(rc);
    e.queue_events({vertex_at(0, 0.0), vertex_at(1, 0.0), edge_at(0, 0, 1, 0.0),
                    vertex_at(2, 0.045), edge_at(1, 1, 2, 0.045)});
    std::ostringstream out;
    e.run(&out);

    const auto frames = parse_frames(out.str());
    for (const auto& f : frames) {
        const bool has2 = frame_ids(f).contains(2);
        CHECK(has2 == (f.at("frame").get<long>() >= 5));
    }
}

TEST_CASE("standing edits drain one per step") {
    RunConfig rc;
    rc.levels = 1;
    rc.dt = 0.01;
    rc.frame_stride = 1;
    rc.max_steps = 6;
    Engine e(rc);
    std::vector<EditEvent> evs;
    for (VertexId v = 0; v < 4; ++v) {
        EditEvent ev;
        ev.kind = EditKind::AddVertex;
        ev.id = v;
        evs.push_back(ev);  // no timestamp
    }
    e.queue_events(evs);
    std::ostringstream out;
    e.run(&out);

    const auto frames = parse_frames(out.str());
    REQUIRE(frames.size() >= 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(frames[k].at("vertices").size() == std::min<std::size_t>(k + 1, 4));
}

TEST_CASE("identical configurations emit byte-identical frame streams") {
    auto run_once = [] {
        RunConfig rc;
        rc.levels = 3;
        rc.integrator = "rk4";
        rc.dt = 0.02;
        rc.seed = 99;
        rc.random_init = true;
        rc.init_radius = 3.0;
        rc.frame_stride = 10;
        rc.max_steps = 300;
        Engine e(rc);
        e.queue_events(scenario_gnp(40, 0.08, 1.0, 7));
        std::ostringstream out;
        e.run(&out);
        return out.str();
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("surviving vertices keep their world positions across a rebuild") {
    RunConfig rc;
    rc.levels = 3;
    rc.integrator = "rk4";
    rc.dt = 0.02;
    rc.seed = 5;
    rc.random_init = true;
    rc.init_radius = 4.0;
    Engine e(rc);
    e.queue_events(scenario_cube(3));
    e.apply_all_pending();
    e.sync_structure();
    for (int k = 0; k < 50; ++k) e.step();

    const auto ids = e.graph(0).vertex_ids_sorted();
    const auto before = e.world_positions(0);

    EditEvent ev;
    ev.kind = EditKind::AddVertex;
    ev.id = 1000;
    e.queue_events({ev});
    e.apply_all_pending();
    e.sync_structure();  // forces a layout rebuild around the new vertex

    const auto after_ids = e.graph(0).vertex_ids_sorted();
    const auto after = e.world_positions(0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        std::size_t j = 0;
        while (after_ids[j] != ids[i]) ++j;
        CHECK((after[j] - before[i]).norm() < 1e-9);
    }
}

TEST_CASE("re-randomizing positions unsettles the layout and it settles again") {
    // Single level: drag acts on world velocity directly, so the force residual
    // is driven to zero.  (With a fit frame attached the system can lock into a
    // rigid drift whose fitting acceleration balances a small residual force.)
    RunConfig rc;
    rc.levels = 1;
    rc.integrator = "rk4";
    rc.dt = 0.01;
    rc.max_steps = 30000;
    rc.check_equilibrium = true;
    rc.equilibrium_tol = 1e-4;
    Engine e(rc);
    e.queue_events(scenario_cube(2));
    const auto first = e.run(nullptr);
    CHECK(first.equilibrium_pass);
    const double settled_v = first.potential;

    e.randomize_positions(1234);
    const double disturbed_v = e.evaluator().potential(e.state(), 0, true);
    CHECK(disturbed_v > settled_v * 1.02);

    const auto second = e.run(nullptr);
    CHECK(second.equilibrium_pass);
    CHECK(second.potential < disturbed_v);
}

TEST_CASE("between steps no vertex moves farther than dt times the observed speed") {
    RunConfig rc;
    rc.levels = 1;
    rc.integrator = "euler";
    rc.dt = 0.01;
    rc.seed = 17;
    rc.random_init = true;
    rc.init_radius = 3.0;
    Engine e(rc);
    e.queue_events(scenario_cube(3));
    e.apply_all_pending();
    e.sync_structure();
    for (int k = 0; k < 150; ++k) {
        const auto before = e.world_positions(0);
        const double speed = e.max_world_speed(0);
        e.step();
        const auto after = e.world_positions(0);
        for (std::size_t i = 0; i < before.size(); ++i)
            CHECK((after[i] - before[i]).norm() <= rc.dt * speed + 1e-12);
    }
}

TEST_CASE("single- and multi-level runs start from the same scatter") {
    auto initial = [](int levels) {
        RunConfig rc;
        rc.levels = levels;
        rc.seed = 31;
        rc.random_init = true;
        rc.init_radius = 5.0;
        Engine e(rc);
        e.queue_events(scenario_cube(3));
        e.apply_all_pending();
        e.sync_structure();
        return e.world_positions(0);
    };
    const auto a = initial(1);
    const auto b = initial(3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).norm() < 1e-12);
}
