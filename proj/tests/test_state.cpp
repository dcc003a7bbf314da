#include <doctest.h>

#include <string>
#include <vector>

#include "strata/state.hpp"

using namespace strata;

TEST_CASE("layout packs frames and vertex blocks with no gaps") {
    StateLayout l;
    l.add_level({2, 5, 9, 11});  // finest: 4 vertices
    l.add_level({100, 104});     // middle: 2 vertices
    l.add_level({200});          // coarsest: 1 vertex
    l.finalize();

    CHECK(l.num_levels() == 3);
    CHECK(l.count(0) == 4);
    CHECK(!l.coarsest(0));
    CHECK(l.coarsest(2));

    // level 0: frame [0,24) + 4*6 doubles
    CHECK(l.alpha_off(0) == 0);
    CHECK(l.alphadot_off(0) == 9);
    CHECK(l.beta_off(0) == 18);
    CHECK(l.betadot_off(0) == 21);
    CHECK(l.pos_off(0, 0) == 24);
    CHECK(l.vel_off(0, 0) == 27);
    CHECK(l.pos_off(0, 3) == 24 + 18);

    // level 1 frame starts right after level 0's vertices
    CHECK(l.alpha_off(1) == 48);
    CHECK(l.pos_off(1, 0) == 72);
    // coarsest level has vertices only
    CHECK(l.pos_off(2, 0) == 84);
    CHECK(l.total == 90);

    CHECK(l.levels[0].slot_of.at(9) == 2);
    CHECK(l.levels[2].slot_of.at(200) == 0);
}

TEST_CASE("single-level layout has no frame block") {
    StateLayout l;
    l.add_level({0, 1, 2});
    l.finalize();
    CHECK(!l.levels[0].has_frame);
    CHECK(l.pos_off(0, 0) == 0);
    CHECK(l.total == 18);
}

TEST_CASE("vector and matrix views round-trip through the flat buffer") {
    std::vector<double> buf(12, 0.0);
    put3(&buf[0], {1.5, -2.0, 0.25});
    CHECK(get3(&buf[0]).y == -2.0);
    add3(&buf[0], {0.5, 2.0, 0.75});
    CHECK(get3(&buf[0]).x == 2.0);
    CHECK(get3(&buf[0]).z == 1.0);

    Mat3 m = Mat3::identity();
    m(0, 1) = 7.0;
    put9(&buf[3], m);
    const Mat3 back = get9(&buf[3]);
    CHECK(back(0, 1) == 7.0);
    CHECK(back(2, 2) == 1.0);
}

TEST_CASE("describe names every component of the flat state") {
    StateLayout l;
    l.add_level({42, 43});
    l.add_level({77});
    l.finalize();

    CHECK(l.describe(0) == "level 0 frame alpha[0][0]");
    CHECK(l.describe(10) == "level 0 frame alpha_dot[0][1]");
    CHECK(l.describe(18) == "level 0 frame beta.x");
    CHECK(l.describe(23) == "level 0 frame beta_dot.z");
    CHECK(l.describe(24) == "level 0 vertex 42 pos.x");
    CHECK(l.describe(28) == "level 0 vertex 42 vel.y");
    CHECK(l.describe(30) == "level 0 vertex 43 pos.x");
    CHECK(l.describe(36) == "level 1 vertex 77 pos.x");
    CHECK(l.describe(41) == "level 1 vertex 77 vel.z");
    CHECK(l.describe(999).find("out of range") != std::string::npos);
}
