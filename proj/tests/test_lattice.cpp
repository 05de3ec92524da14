#include <doctest.h>

#include <sstream>

#include "sftlab/lattice.hpp"

using namespace sftlab;

TEST_CASE("canonical site order is row-major from the top") {
    Volume v = Volume::box({0, 0}, {1, 1});
    REQUIRE(v.size() == 4);
    CHECK(v[0] == Site{0, 1});
    CHECK(v[1] == Site{1, 1});
    CHECK(v[2] == Site{0, 0});
    CHECK(v[3] == Site{1, 0});
}

TEST_CASE("volume basics") {
    Volume v({{0, 0}, {1, 0}, {0, 0}});  // dedup
    CHECK(v.size() == 2);
    CHECK(v.contains({1, 0}));
    CHECK(!v.contains({2, 0}));
    CHECK(v.index_of({9, 9}) == -1);
    Volume t = v.translated({3, 4});
    CHECK(t.contains({4, 4}));
    CHECK(make_box(2).size() == 25);
    CHECK(make_box(2).is_rectangle());
}

TEST_CASE("boundary rings") {
    Volume v = make_box(1);
    Volume b1 = boundary(v, 1, Metric::Linf);
    CHECK(b1.size() == 16);
    Volume l1 = boundary(v, 1, Metric::L1);
    CHECK(l1.size() == 12);
    for (Site s : l1.sites()) CHECK(!v.contains(s));
}

TEST_CASE("alphabet lookups") {
    Alphabet a({"x", "o"});
    CHECK(a.index("o") == 1);
    CHECK(a.name(0) == "x");
    CHECK_THROWS_AS((void)a.index("zz"), UnknownSymbol);
}

TEST_CASE("patch compose and shift") {
    Alphabet a({"0", "1"});
    Patch p(Volume({{0, 0}}), {1});
    Patch q(Volume({{1, 0}}), {0});
    Patch c = compose(p, q);
    CHECK(c.at({0, 0}) == 1);
    CHECK(c.at({1, 0}) == 0);
    CHECK_THROWS_AS(compose(p, p), OverlappingVolumes);
    Patch s = shift(p, {2, 2});
    CHECK(s.at({2, 2}) == 1);
}

TEST_CASE("patch text round trip") {
    Alphabet a({"x", "o"});
    Patch p(Volume::box({-1, 0}, {0, 1}), {0, 1, 1, 0});
    std::string txt = patch_to_text(p, a);
    Patch back = patch_from_text(txt, a);
    CHECK(back == p);
}

TEST_CASE("window contains origin") {
    CHECK(cross_window().contains_origin());
    CHECK(cross_window().offsets.size() == 5);
}
