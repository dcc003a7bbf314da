#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "strata/error.hpp"

namespace strata {

// ds := f(s); both spans have the state's size.
using DerivFn = std::function<void(std::span<const double>, std::span<double>)>;
// Optional: flat index -> human-readable component name for diagnostics.
using ComponentNamer = std::function<std::string(std::size_t)>;

namespace detail {

inline void check_finite(std::span<const double> v, const ComponentNamer& namer) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            std::string what = "non-finite derivative at ";
            what += namer ? namer(i) : ("component " + std::to_string(i));
            throw internal_error(what);
        }
    }
}

}  // namespace detail

// Reused across steps to avoid reallocating stage buffers.
struct StepScratch {
    std::vector<double> k1, k2, k3, k4, tmp;
    void resize(std::size_t n) {
        k1.resize(n);
        k2.resize(n);
        k3.resize(n);
        k4.resize(n);
        tmp.resize(n);
    }
};

inline void euler_step(const DerivFn& f, std::span<double> s, double dt,
                       StepScratch& scr, const ComponentNamer& namer = {}) {
    const std::size_t n = s.size();
    scr.resize(n);
    f(s, scr.k1);
    detail::check_finite(scr.k1, namer);
    for (std::size_t i = 0; i < n; ++i) s[i] += dt * scr.k1[i];
}

inline void rk4_step(const DerivFn& f, std::span<double> s, double dt,
                     StepScratch& scr, const ComponentNamer& namer = {}) {
    const std::size_t n = s.size();
    scr.resize(n);
    auto& [k1, k2, k3, k4, tmp] = scr;

    f(s, k1);
    detail::check_finite(k1, namer);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
    f(tmp, k2);
    detail::check_finite(k2, namer);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
    f(tmp, k3);
    detail::check_finite(k3, namer);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + dt * k3[i];
    f(tmp, k4);
    detail::check_finite(k4, namer);

    const double w = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
        s[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace strata
