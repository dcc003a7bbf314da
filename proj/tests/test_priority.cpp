#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "strata/priority.hpp"

using namespace strata;

TEST_CASE("priority is deterministic and endpoint-order blind") {
    const Priority p1 = edge_priority(42, 3, 17);
    const Priority p2 = edge_priority(42, 17, 3);
    CHECK(p1 == p2);
    CHECK(p1.a == 3);
    CHECK(p1.b == 17);
    CHECK(edge_priority(43, 3, 17).value != p1.value);
}

TEST_CASE("1e5 edges get pairwise distinct order positions") {
    std::vector<Priority> ps;
    ps.reserve(100000);
    for (VertexId i = 0; i < 100000; ++i) ps.push_back(edge_priority(7, i, i + 100000));
    std::vector<double> vals;
    vals.reserve(ps.size());
    for (const auto& p : ps) vals.push_back(p.value);
    std::sort(vals.begin(), vals.end());
    CHECK(std::adjacent_find(vals.begin(), vals.end()) == vals.end());
}

TEST_CASE("dominates is a strict total order even with injected ties") {
    const Priority x{0.5, 1, 2};
    const Priority y{0.5, 1, 3};
    CHECK(dominates(x, y));
    CHECK(!dominates(y, x));
    CHECK(!dominates(x, x));

    const Priority hi{0.9, 7, 8};
    CHECK(dominates(hi, x));
    CHECK(!dominates(x, hi));
}

TEST_CASE("priority values pass a Kolmogorov-Smirnov uniformity check") {
    // KS statistic against U[0,1); 1.63/sqrt(n) is the 1% critical value.
    const int n = 100000;
    std::vector<double> vals;
    vals.reserve(n);
    for (VertexId i = 0; i < n; ++i) vals.push_back(edge_priority(12345, i, i + 1).value);
    std::sort(vals.begin(), vals.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(vals[i] - lo), std::abs(vals[i] - hi)});
    }
    CHECK(d <= 1.63 / std::sqrt(static_cast<double>(n)));
}
