#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "finsheaf/corpus.hpp"
#include "finsheaf/finspace.hpp"

using namespace finsheaf;

TEST_CASE("circle model: order, opens, chains") {
    SpacePtr x = corpus::pseudocircle();
    CHECK(x->size() == 4);
    std::size_t a = x->point_index("a"), c = x->point_index("c"), d = x->point_index("d");
    CHECK(x->leq(a, c));
    CHECK(x->leq(a, d));
    CHECK(!x->leq(c, d));
    CHECK(x->strictly_less(a, c));
    CHECK(!x->strictly_less(a, a));

    // opens: {}, {a}, {b}, {a,b}, {a,b,c}, {a,b,d}, X
    auto opens = x->enumerate_opens();
    CHECK(opens.size() == 7);
    CHECK(opens.front() == 0);
    CHECK(opens.back() == x->whole());
    for (std::size_t i = 0; i + 1 < opens.size(); ++i) {
        auto sz = [&](FiniteSpace::Mask m) { return x->mask_points(m).size(); };
        CHECK(sz(opens[i]) <= sz(opens[i + 1]));
    }
    for (auto m : opens) CHECK(x->is_open(m));
    CHECK(!x->is_open(FiniteSpace::bit(c))); // {c} is not down-closed

    CHECK(x->minimal_open(c) == (FiniteSpace::bit(x->point_index("a")) |
                                 FiniteSpace::bit(x->point_index("b")) | FiniteSpace::bit(c)));
    CHECK(x->minimal_open(a) == FiniteSpace::bit(a));

    CHECK(x->chains(0).size() == 4);
    CHECK(x->chains(1).size() == 4); // a<c, a<d, b<c, b<d
    CHECK(x->chains(2).empty());
    CHECK(x->height() == 1);
}

TEST_CASE("sphere model has height two") {
    SpacePtr x = corpus::sphere6();
    CHECK(x->size() == 6);
    CHECK(x->height() == 2);
    CHECK(x->chains(2).size() == 8);
    CHECK(x->enumerate_opens().size() > 7);
}

TEST_CASE("construction validates input") {
    CHECK_THROWS_WITH_AS(FiniteSpace({"p", "q"}, {{"p", "q"}, {"q", "p"}}),
                         doctest::Contains("NotAntisymmetric"), Error);
    CHECK_THROWS_WITH_AS(FiniteSpace({"p"}, {{"p", "r"}}),
                         doctest::Contains("UnknownPoint"), Error);
    FiniteSpace x({"p", "q"}, {});
    CHECK_THROWS_WITH_AS(x.point_index("z"), doctest::Contains("UnknownPoint"), Error);
}

TEST_CASE("transitive closure is taken") {
    FiniteSpace x({"p", "q", "r"}, {{"p", "q"}, {"q", "r"}});
    CHECK(x.leq(x.point_index("p"), x.point_index("r")));
    CHECK(x.height() == 2);
}

TEST_CASE("open enumeration respects the cap") {
    // antichain of 6 points: 2^6 opens
    FiniteSpace x({"p0", "p1", "p2", "p3", "p4", "p5"}, {});
    CHECK(x.enumerate_opens().size() == 64);
    CHECK_THROWS_WITH_AS(x.enumerate_opens(10), doctest::Contains("TooManyOpens"), Error);
}
