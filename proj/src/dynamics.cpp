#include "strata/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "strata/error.hpp"

namespace strata {

Evaluator::Evaluator(const StateLayout* layout, std::vector<LevelTopology> topology,
                     const PhysicsParams& phys, double theta)
    : layout_(layout), topo_(std::move(topology)), phys_(phys), theta_(theta) {
    phys_.validate();
    const int L = layout_->num_levels();
    STRATA_CHECK(static_cast<int>(topo_.size()) == L,
                 "one topology entry per level required");
    wpos_.resize(L);
    wvel_.resize(L);
    wacc_.resize(L);
    force_.resize(L);
    for (int l = 0; l < L; ++l) {
        const int n = layout_->count(l);
        wpos_[l].resize(n);
        wvel_[l].resize(n);
        wacc_[l].resize(n);
        force_[l].resize(n);
        for (const auto& e : topo_[l].edges) {
            STRATA_CHECK(e[0] >= 0 && e[0] < n && e[1] >= 0 && e[1] < n && e[0] != e[1],
                         "edge slot out of range");
        }
        if (l + 1 < L) {
            STRATA_CHECK(static_cast<int>(topo_[l].parent.size()) == n,
                         "parent slot required for every vertex below the coarsest level");
            const int m = layout_->count(l + 1);
            for (int p : topo_[l].parent)
                STRATA_CHECK(p >= 0 && p < m, "parent slot out of range");
        }
    }
}

void Evaluator::compute_worlds(std::span<const double> s) {
    const int L = layout_->num_levels();
    {
        const int top = L - 1;
        for (int i = 0; i < layout_->count(top); ++i)
            wpos_[top][i] = get3(&s[layout_->pos_off(top, i)]);
    }
    for (int l = L - 2; l >= 0; --l) {
        const Mat3 alpha = get9(&s[layout_->alpha_off(l)]);
        const Vec3 beta = get3(&s[layout_->beta_off(l)]);
        for (int i = 0; i < layout_->count(l); ++i) {
            const Vec3 delta = get3(&s[layout_->pos_off(l, i)]);
            wpos_[l][i] = delta + alpha * wpos_[l + 1][topo_[l].parent[i]] + beta;
        }
    }
}

void Evaluator::compute_world_vels(std::span<const double> s) {
    const int L = layout_->num_levels();
    const double phi = phys_.time_dilation;
    {
        const int top = L - 1;
        for (int i = 0; i < layout_->count(top); ++i)
            wvel_[top][i] = get3(&s[layout_->vel_off(top, i)]);
    }
    for (int l = L - 2; l >= 0; --l) {
        const Mat3 alpha = get9(&s[layout_->alpha_off(l)]);
        const Mat3 alpha_dot = get9(&s[layout_->alphadot_off(l)]);
        const Vec3 beta_dot = get3(&s[layout_->betadot_off(l)]);
        for (int i = 0; i < layout_->count(l); ++i) {
            const int p = topo_[l].parent[i];
            const Vec3 delta_dot = get3(&s[layout_->vel_off(l, i)]);
            wvel_[l][i] =
                delta_dot + beta_dot + alpha_dot * wpos_[l + 1][p] + phi * (alpha * wvel_[l + 1][p]);
        }
    }
}

void Evaluator::accumulate_forces(std::span<const double> s, int level) {
    const int n = layout_->count(level);
    auto& F = force_[level];
    std::fill(F.begin(), F.end(), Vec3{0.0, 0.0, 0.0});
    const auto& X = wpos_[level];

    const double k = phys_.spring_k;
    for (const auto& e : topo_[level].edges) {
        const Vec3 pull = k * (X[e[0]] - X[e[1]]);
        F[e[0]] -= pull;
        F[e[1]] += pull;
    }

    if (phys_.repulsion_f0 > 0.0 && n > 1) {
        const RepulsionLaw law{phys_.repulsion_f0, phys_.softening, phys_.dim};
        if (theta_ <= 0.0) {
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    const Vec3 f = BarnesHutTree::pair_force(X[i], X[j], i, j, law);
                    F[i] += f;
                    F[j] -= f;
                }
            }
        } else {
            tree_.build(X);
            for (int i = 0; i < n; ++i) F[i] += tree_.repulsion(i, theta_, law);
        }
    }

    const double d = phys_.damping;
    if (d > 0.0) {
        // Drag acts on the integrated quantity: world velocity at the coarsest
        // level, displacement velocity below it.
        for (int i = 0; i < n; ++i) F[i] -= d * get3(&s[layout_->vel_off(level, i)]);
    }

    if (level == 0 && phys_.gravity != 0.0) {
        const Vec3 g = phys_.gravity * phys_.gravity_dir;
        for (const auto& e : topo_[level].edges) {
            F[e[1]] += g;
            F[e[0]] -= g;
        }
    }
}

void Evaluator::derivatives(std::span<const double> s, std::span<double> ds) {
    STRATA_CHECK(s.size() == layout_->total && ds.size() == layout_->total,
                 "state size does not match layout");
    std::fill(ds.begin(), ds.end(), 0.0);
    const int L = layout_->num_levels();
    const double phi = phys_.time_dilation;
    compute_worlds(s);

    for (int l = L - 1; l >= 0; --l) {
        accumulate_forces(s, l);
        const int n = layout_->count(l);
        const auto& F = force_[l];

        if (l == L - 1) {
            for (int i = 0; i < n; ++i) {
                const Vec3 v = get3(&s[layout_->vel_off(l, i)]);
                put3(&ds[layout_->pos_off(l, i)], v);
                put3(&ds[layout_->vel_off(l, i)], F[i]);
                wvel_[l][i] = v;
                wacc_[l][i] = F[i];
            }
            continue;
        }

        const Mat3 alpha = get9(&s[layout_->alpha_off(l)]);
        const Mat3 alpha_dot = get9(&s[layout_->alphadot_off(l)]);
        const Vec3 beta_dot = get3(&s[layout_->betadot_off(l)]);

        // Frame equations of motion: the fit residual drives alpha and beta
        // toward the least-squares projection of this level onto its parent.
        // An empty level leaves its frame inert.
        Mat3 alpha_acc = Mat3::zero();
        Vec3 beta_acc{0.0, 0.0, 0.0};
        if (n > 0) {
            for (int i = 0; i < n; ++i) {
                const Vec3 delta = get3(&s[layout_->pos_off(l, i)]);
                const Vec3& Y = wpos_[l + 1][topo_[l].parent[i]];
                alpha_acc += outer(delta, Y) + outer(Y, delta);
                beta_acc += delta;
            }
            const double inv_n = 1.0 / static_cast<double>(n);
            alpha_acc *= inv_n;
            alpha_acc += -phys_.frame_damping_alpha * alpha_dot;
            beta_acc = inv_n * beta_acc - phys_.frame_damping_beta * beta_dot;
        }

        put9(&ds[layout_->alpha_off(l)], alpha_dot);
        put9(&ds[layout_->alphadot_off(l)], alpha_acc);
        put3(&ds[layout_->beta_off(l)], beta_dot);
        put3(&ds[layout_->betadot_off(l)], beta_acc);

        for (int i = 0; i < n; ++i) {
            const int p = topo_[l].parent[i];
            const Vec3& Y = wpos_[l + 1][p];
            const Vec3& Y_dot = wvel_[l + 1][p];
            const Vec3& Y_acc = wacc_[l + 1][p];

            // Pseudoforce: the acceleration the moving frame would impart,
            // with the parent's velocity and acceleration contributions slowed
            // by phi and phi^2.
            const Vec3 pf = beta_acc + alpha_acc * Y + (2.0 * phi) * (alpha_dot * Y_dot) +
                            (phi * phi) * (alpha * Y_acc);

            const Vec3 delta_dot = get3(&s[layout_->vel_off(l, i)]);
            put3(&ds[layout_->pos_off(l, i)], delta_dot);
            put3(&ds[layout_->vel_off(l, i)], F[i] - pf);

            wvel_[l][i] = delta_dot + beta_dot + alpha_dot * Y + phi * (alpha * Y_dot);
            wacc_[l][i] = F[i];
        }
    }
}

std::vector<Vec3> Evaluator::world_positions(std::span<const double> s, int level) {
    STRATA_CHECK(s.size() == layout_->total, "state size does not match layout");
    compute_worlds(s);
    return wpos_[level];
}

std::vector<Vec3> Evaluator::world_velocities(std::span<const double> s, int level) {
    STRATA_CHECK(s.size() == layout_->total, "state size does not match layout");
    compute_worlds(s);
    compute_world_vels(s);
    return wvel_[level];
}

double Evaluator::max_world_speed(std::span<const double> s, int level) {
    compute_worlds(s);
    compute_world_vels(s);
    double best = 0.0;
    for (const Vec3& v : wvel_[level]) best = std::max(best, v.norm());
    return best;
}

double Evaluator::potential(std::span<const double> s, int level, bool exact) {
    compute_worlds(s);
    const auto& X = wpos_[level];
    const int n = layout_->count(level);

    double v = 0.0;
    for (const auto& e : topo_[level].edges)
        v += 0.5 * phys_.spring_k * (X[e[0]] - X[e[1]]).norm2();

    if (phys_.repulsion_f0 > 0.0 && n > 1) {
        const RepulsionLaw law{phys_.repulsion_f0, phys_.softening, phys_.dim};
        if (exact || theta_ <= 0.0) {
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    v += law.f0 / (law.softening + (X[i] - X[j]).norm());
        } else {
            tree_.build(X);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += tree_.potential_sum(i, theta_, law);
            v += 0.5 * sum;  // every unordered pair was visited from both ends
        }
    }
    return v;
}

double Evaluator::kinetic(std::span<const double> s, int level) {
    compute_worlds(s);
    compute_world_vels(s);
    double t = 0.0;
    for (const Vec3& v : wvel_[level]) t += 0.5 * v.norm2();
    return t;
}

EquilibriumReport Evaluator::equilibrium_check(std::span<const double> s, double tol) {
    compute_worlds(s);
    const auto& X = wpos_[0];
    const int n = layout_->count(0);
    const RepulsionLaw law{phys_.repulsion_f0, phys_.softening, phys_.dim};

    std::vector<Vec3> grad(n, Vec3{0.0, 0.0, 0.0});
    for (const auto& e : topo_[0].edges) {
        const Vec3 pull = phys_.spring_k * (X[e[0]] - X[e[1]]);
        grad[e[0]] += pull;
        grad[e[1]] -= pull;
    }
    if (phys_.repulsion_f0 > 0.0) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const Vec3 f = BarnesHutTree::pair_force(X[i], X[j], i, j, law);
                grad[i] -= f;  // gradient is minus the force
                grad[j] += f;
            }
        }
    }

    EquilibriumReport rep;
    rep.tolerance = tol;
    for (int i = 0; i < n; ++i) {
        const double g = grad[i].norm();
        if (g > rep.max_gradient) {
            rep.max_gradient = g;
            rep.worst_vertex = layout_->levels[0].ids[i];
        }
    }
    rep.pass = rep.max_gradient <= tol;
    return rep;
}

}  // namespace strata
