#include "strata/engine.hpp"

#include <algorithm>
#include <cmath>

#include "strata/error.hpp"
#include "strata/hashing.hpp"

namespace strata {

void RunConfig::validate() const {
    if (levels < 1) throw error("levels must be >= 1");
    if (integrator != "euler" && integrator != "rk4")
        throw error("integrator must be 'euler' or 'rk4', got '" + integrator + "'");
    if (!(dt > 0.0)) throw error("dt must be positive");
    if (max_steps < 0) throw error("max_steps must be >= 0");
    if (frame_stride < 1) throw error("frame_stride must be >= 1");
    if (!(init_radius > 0.0)) throw error("init_radius must be positive");
    if (!(equilibrium_tol > 0.0)) throw error("equilibrium tolerance must be positive");
    if (!(settle_speed > 0.0) || settle_window < 1)
        throw error("settle threshold must be positive and window >= 1");
    physics.validate();
}

nlohmann::json RunReport::to_json() const {
    nlohmann::json j;
    j["steps"] = steps;
    j["time"] = time;
    j["events_applied"] = events_applied;
    j["frames_written"] = frames_written;
    j["settled"] = settled;
    j["vertices"] = vertices;
    j["edges"] = edges;
    j["potential"] = potential;
    j["kinetic"] = kinetic;
    if (equilibrium_checked) {
        j["equilibrium_pass"] = equilibrium_pass;
        j["max_gradient"] = max_gradient;
    }
    return j;
}

Engine::Engine(RunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    graphs_.resize(cfg_.levels);
    for (int i = 0; i + 1 < cfg_.levels; ++i)
        coarseners_.push_back(
            std::make_unique<Coarsener>(graphs_[i + 1], level_seed(cfg_.seed, i)));
}

void Engine::queue_events(std::vector<EditEvent> evs) {
    pending_.insert(pending_.end(), evs.begin(), evs.end());
}

long Engine::apply_due(double now) {
    long applied = 0;
    bool untimed_used = false;
    while (!pending_.empty()) {
        const EditEvent ev = pending_.front();
        if (ev.has_time) {
            if (ev.time > now + 1e-9) break;
        } else {
            if (untimed_used) break;
            untimed_used = true;
        }
        pending_.pop_front();
        apply_one(ev);
        ++applied;
    }
    return applied;
}

void Engine::apply_all_pending() {
    while (!pending_.empty()) {
        const EditEvent ev = pending_.front();
        pending_.pop_front();
        apply_one(ev);
    }
}

void Engine::apply_one(const EditEvent& ev) {
    apply_event(graphs_[0], ev);
    ++events_applied_;
    dirty_ = true;
}

void Engine::sync_structure() {
    if (!dirty_ && built_) return;
    for (int i = 0; i + 1 < cfg_.levels; ++i) coarseners_[i]->sync(graphs_[i]);
    rebuild(false, 0);
    dirty_ = false;
}

Vec3 Engine::scatter_point(std::uint64_t salt, int level, VertexId id,
                           double radius) const {
    // Keyed only by (seed, salt, level, id): two runs that share a seed see the
    // same initial scatter for the finest level no matter how many levels they
    // simulate.
    const std::uint64_t k =
        mix64(cfg_.seed ^ salt, 0x5ca77e4ULL + static_cast<std::uint64_t>(level),
              static_cast<std::uint64_t>(id));
    const Vec3 dir = unit_direction(mix64(k, 1), cfg_.physics.dim);
    const double u = unit_double(mix64(k, 2));
    return (radius * std::pow(u, 1.0 / cfg_.physics.dim)) * dir;
}

void Engine::rebuild(bool force_random, std::uint64_t salt) {
    const int L = cfg_.levels;
    const double phi = cfg_.physics.time_dilation;
    const int dim = cfg_.physics.dim;

    struct PosVel {
        Vec3 pos{0.0, 0.0, 0.0}, vel{0.0, 0.0, 0.0};
    };

    // World coordinates of everything that survives, by id.
    std::vector<std::unordered_map<VertexId, PosVel>> snap(L);
    if (built_ && !force_random) {
        for (int l = 0; l < L; ++l) {
            const auto wp = eval_->world_positions(state_, l);
            const auto wv = eval_->world_velocities(state_, l);
            snap[l].reserve(wp.size());
            for (int i = 0; i < static_cast<int>(wp.size()); ++i)
                snap[l][layout_.levels[l].ids[i]] = {wp[i], wv[i]};
        }
    }

    // Frames persist across structural changes; a forced re-scatter resets them.
    struct FrameVals {
        Mat3 a = Mat3::identity(), ad = Mat3::zero();
        Vec3 b{0.0, 0.0, 0.0}, bd{0.0, 0.0, 0.0};
    };
    std::vector<FrameVals> frames(std::max(0, L - 1));
    if (built_ && !force_random) {
        for (int l = 0; l + 1 < L; ++l) {
            frames[l].a = get9(&state_[layout_.alpha_off(l)]);
            frames[l].ad = get9(&state_[layout_.alphadot_off(l)]);
            frames[l].b = get3(&state_[layout_.beta_off(l)]);
            frames[l].bd = get3(&state_[layout_.betadot_off(l)]);
        }
    }

    StateLayout nl;
    for (int l = 0; l < L; ++l) nl.add_level(graphs_[l].vertex_ids_sorted());
    nl.finalize();

    std::vector<LevelTopology> topo(L);
    for (int l = 0; l < L; ++l) {
        std::vector<EdgeId> eids;
        eids.reserve(graphs_[l].num_edges());
        for (const auto& [eid, e] : graphs_[l].edges()) eids.push_back(eid);
        std::sort(eids.begin(), eids.end());
        topo[l].edges.reserve(eids.size());
        const auto& slot = nl.levels[l].slot_of;
        for (EdgeId eid : eids) {
            const auto& e = graphs_[l].edge(eid);
            topo[l].edges.push_back({slot.at(e.u), slot.at(e.v)});
        }
        if (l + 1 < L) {
            topo[l].parent.resize(nl.count(l));
            const auto& up = nl.levels[l + 1].slot_of;
            for (int i = 0; i < nl.count(l); ++i) {
                const VertexId p = coarseners_[l]->parent(nl.levels[l].ids[i]);
                const auto it = up.find(p);
                STRATA_CHECK(it != up.end(), "coarse image missing from its level");
                topo[l].parent[i] = it->second;
            }
        }
    }

    // Pick target world coordinates for every vertex, finest level first so a
    // merged pair can average its members.
    std::vector<std::vector<PosVel>> target(L);
    const bool scatter = force_random || (!built_ && cfg_.random_init);
    for (int l = 0; l < L; ++l) {
        const int n = nl.count(l);
        target[l].resize(n);
        for (int i = 0; i < n; ++i) {
            const VertexId id = nl.levels[l].ids[i];
            if (const auto it = snap[l].find(id); it != snap[l].end()) {
                target[l][i] = it->second;
                continue;
            }
            if (l > 0) {
                const auto mem = coarseners_[l - 1]->members(id);
                PosVel acc;
                for (VertexId m : mem) {
                    const auto& t = target[l - 1][nl.levels[l - 1].slot_of.at(m)];
                    acc.pos += t.pos;
                    acc.vel += t.vel;
                }
                const double inv = 1.0 / static_cast<double>(mem.size());
                target[l][i] = {inv * acc.pos, inv * acc.vel};
                continue;
            }
            if (scatter) {
                target[l][i].pos = scatter_point(salt, l, id, cfg_.init_radius);
                continue;
            }
            // Fresh vertex mid-run: centroid of its surviving neighbours (or
            // the origin), nudged so coincident arrivals separate.
            std::vector<VertexId> nbs;
            for (const auto& [nb, eid] : graphs_[l].adjacency(id)) nbs.push_back(nb);
            std::sort(nbs.begin(), nbs.end());
            Vec3 c{0.0, 0.0, 0.0};
            int cnt = 0;
            for (VertexId nb : nbs) {
                if (const auto it = snap[l].find(nb); it != snap[l].end()) {
                    c += it->second.pos;
                    ++cnt;
                }
            }
            if (cnt > 0) c = (1.0 / cnt) * c;
            c += 1e-2 * unit_direction(
                            mix64(cfg_.seed, 0x71773ULL + static_cast<std::uint64_t>(l),
                                  static_cast<std::uint64_t>(id)),
                            dim);
            target[l][i].pos = c;
        }
    }

    // Realize the targets: the coarsest level stores them directly, finer
    // levels store the displacement from the frame's image of the parent, so
    // every world position and velocity is preserved exactly.
    std::vector<double> ns(nl.total, 0.0);
    for (int l = 0; l + 1 < L; ++l) {
        put9(&ns[nl.alpha_off(l)], frames[l].a);
        put9(&ns[nl.alphadot_off(l)], frames[l].ad);
        put3(&ns[nl.beta_off(l)], frames[l].b);
        put3(&ns[nl.betadot_off(l)], frames[l].bd);
    }
    {
        const int top = L - 1;
        for (int i = 0; i < nl.count(top); ++i) {
            put3(&ns[nl.pos_off(top, i)], target[top][i].pos);
            put3(&ns[nl.vel_off(top, i)], target[top][i].vel);
        }
    }
    for (int l = L - 2; l >= 0; --l) {
        const FrameVals& f = frames[l];
        for (int i = 0; i < nl.count(l); ++i) {
            const PosVel& y = target[l + 1][topo[l].parent[i]];
            const Vec3 delta = target[l][i].pos - f.a * y.pos - f.b;
            const Vec3 delta_dot =
                target[l][i].vel - f.bd - f.ad * y.pos - phi * (f.a * y.vel);
            put3(&ns[nl.pos_off(l, i)], delta);
            put3(&ns[nl.vel_off(l, i)], delta_dot);
        }
    }

    layout_ = std::move(nl);
    state_ = std::move(ns);
    eval_ = std::make_unique<Evaluator>(&layout_, std::move(topo), cfg_.physics,
                                        cfg_.theta);
    deriv_ = [this](std::span<const double> s, std::span<double> ds) {
        eval_->derivatives(s, ds);
    };
    namer_ = [this](std::size_t i) { return layout_.describe(i); };
    for (auto& c : coarseners_) c->clear_reparented();
    settle_count_ = 0;
    built_ = true;
}

void Engine::randomize_positions(std::uint64_t salt) {
    sync_structure();
    rebuild(true, salt);
}

void Engine::step() {
    sync_structure();
    if (cfg_.integrator == "rk4")
        rk4_step(deriv_, state_, cfg_.dt, scratch_, namer_);
    else
        euler_step(deriv_, state_, cfg_.dt, scratch_, namer_);
    time_ += cfg_.dt;
    ++steps_;
    const double sp = layout_.count(0) > 0 ? eval_->max_world_speed(state_, 0) : 0.0;
    settle_count_ = (sp < cfg_.settle_speed) ? settle_count_ + 1 : 0;
}

std::vector<Vec3> Engine::world_positions(int level) {
    sync_structure();
    return eval_->world_positions(state_, level);
}

double Engine::max_world_speed(int level) {
    sync_structure();
    if (layout_.count(level) == 0) return 0.0;
    return eval_->max_world_speed(state_, level);
}

void Engine::write_header(std::ostream& out) const {
    nlohmann::ordered_json h;
    h["levels"] = cfg_.levels;
    h["integrator"] = cfg_.integrator;
    h["dt"] = cfg_.dt;
    h["theta"] = cfg_.theta;
    h["time_dilation"] = cfg_.physics.time_dilation;
    h["dim"] = cfg_.physics.dim;
    h["seed"] = cfg_.seed;
    nlohmann::ordered_json j;
    j["header"] = std::move(h);
    out << j.dump() << '\n';
}

void Engine::write_frame(std::ostream& out, long frame_index) {
    sync_structure();
    nlohmann::ordered_json j;
    j["frame"] = frame_index;
    j["t"] = time_;
    const int n = layout_.count(0);
    nlohmann::ordered_json verts = nlohmann::ordered_json::array();
    double pot = 0.0, kin = 0.0;
    if (n > 0) {
        const auto wp = eval_->world_positions(state_, 0);
        for (int i = 0; i < n; ++i)
            verts.push_back({layout_.levels[0].ids[i], wp[i].x, wp[i].y, wp[i].z});
        pot = eval_->potential(state_, 0, false);
        kin = eval_->kinetic(state_, 0);
    }
    j["vertices"] = std::move(verts);
    j["V"] = pot;
    j["T"] = kin;
    out << j.dump() << '\n';
}

RunReport Engine::run(std::ostream* frames) {
    RunReport rep;
    if (frames) write_header(*frames);

    long eq_last_check = -cfg_.settle_window;
    bool eq_pass = false, eq_checked = false;
    double max_grad = -1.0;

    for (long k = 0;; ++k) {
        apply_due(time_);
        sync_structure();
        const bool stream_done = pending_.empty();
        if (stream_done && graphs_[0].num_vertices() == 0) break;
        // Once the stream ends, either stop at settledness or keep running
        // until the exact gradient passes (the layout can reach a force
        // equilibrium while still translating, so the gradient check is not
        // gated on speed).
        if (stream_done && cfg_.check_equilibrium &&
            steps_ - eq_last_check >= cfg_.settle_window) {
            eq_last_check = steps_;
            const auto r = eval_->equilibrium_check(state_, cfg_.equilibrium_tol);
            eq_checked = true;
            max_grad = r.max_gradient;
            if (r.pass) {
                eq_pass = true;
                break;
            }
        }
        if (stream_done && !cfg_.check_equilibrium && settled()) break;
        if (frames && k % cfg_.frame_stride == 0) {
            write_frame(*frames, k);
            ++rep.frames_written;
        }
        if (steps_ >= cfg_.max_steps) break;
        step();
    }

    rep.steps = steps_;
    rep.time = time_;
    rep.events_applied = events_applied_;
    rep.settled = settled();
    rep.equilibrium_checked = eq_checked;
    rep.equilibrium_pass = eq_pass;
    rep.max_gradient = max_grad;
    rep.vertices = graphs_[0].num_vertices();
    rep.edges = graphs_[0].num_edges();
    if (built_ && layout_.count(0) > 0) {
        rep.potential = eval_->potential(state_, 0, false);
        rep.kinetic = eval_->kinetic(state_, 0);
    }
    return rep;
}

}  // namespace strata
