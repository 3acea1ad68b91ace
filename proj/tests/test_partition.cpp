#include "doctest.h"
#include "qtsf/partition.hpp"
#include "test_util.hpp"

using namespace qtsf;

TEST_CASE("partition basics") {
    Partition lam({4, 3, 1});
    CHECK(lam.boxes() == 8);
    CHECK(lam.part(0) == 4);
    CHECK(lam.part(5) == 0);
    CHECK(lam.conjugate() == Partition({3, 2, 2, 1}));
    CHECK(lam.conjugate().conjugate() == lam);
    CHECK(lam.col_height(0) == 3);
    CHECK(lam.col_height(3) == 1);
    CHECK(lam.col_height(7) == 0);
    CHECK(lam.has_box({2, 1}));
    CHECK_FALSE(lam.has_box({3, 1}));
    CHECK(Partition({3, 0, 0}) == Partition({3}));  // trailing zeros trimmed
    CHECK_THROWS_AS(Partition({1, 2}), UsageError);
    CHECK_THROWS_AS(Partition({2, -1}), UsageError);
}

TEST_CASE("box weights and contents") {
    Box b{1, 2};
    CHECK(b.content() == -1);
    CHECK(b.weight2() == QTMono{2, -4});
    CHECK(b.weight() == QTRational::mono(2, -4));
    CHECK(Box{0, 0}.weight() == QTRational(1));
}

TEST_CASE("arm and leg lengths") {
    Partition lam({4, 3, 1});
    CHECK(arm_leg(lam, {0, 0}) == std::pair<int, int>{3, 2});
    CHECK(arm_leg(lam, {1, 1}) == std::pair<int, int>{1, 0});
    CHECK(arm_leg(lam, {0, 2}) == std::pair<int, int>{0, 0});
    CHECK(arm_leg(lam, {3, 0}) == std::pair<int, int>{0, 0});
    CHECK_THROWS_AS(arm_leg(lam, {3, 1}), UsageError);
}

TEST_CASE("corners in content order") {
    Corners c = corners(Partition({4, 3, 1}));
    CHECK(c.inner == std::vector<Box>{{0, 3}, {1, 2}, {3, 1}, {4, 0}});
    CHECK(c.outer == std::vector<Box>{{1, 3}, {3, 2}, {4, 1}});

    Corners e = corners(Partition::empty());
    CHECK(e.inner == std::vector<Box>{{0, 0}});
    CHECK(e.outer.empty());

    Corners one = corners(Partition({1}));
    CHECK(one.inner == std::vector<Box>{{0, 1}, {1, 0}});
    CHECK(one.outer == std::vector<Box>{{1, 1}});
}

TEST_CASE("containment and dominance") {
    CHECK(containment_leq(Partition({2, 1}), Partition({3, 1})));
    CHECK_FALSE(containment_leq(Partition({2, 2}), Partition({3, 1})));
    CHECK(containment_leq(Partition::empty(), Partition({1})));

    CHECK(dominance_leq(Partition({2, 2}), Partition({3, 1})));
    CHECK(dominance_leq(Partition({3, 1}), Partition({4})));
    CHECK_FALSE(dominance_leq(Partition({3, 1}), Partition({2, 2})));
    // incomparable pair
    CHECK_FALSE(dominance_leq(Partition({3, 1, 1, 1}), Partition({2, 2, 2})));
    CHECK_FALSE(dominance_leq(Partition({2, 2, 2}), Partition({3, 1, 1, 1})));
    CHECK_THROWS_AS(dominance_leq(Partition({2}), Partition({1})), UsageError);
}

TEST_CASE("enumeration order") {
    auto p4 = enumerate_partitions(4);
    REQUIRE(p4.size() == 5);
    CHECK(p4[0] == Partition({4}));
    CHECK(p4[1] == Partition({3, 1}));
    CHECK(p4[2] == Partition({2, 2}));
    CHECK(p4[3] == Partition({2, 1, 1}));
    CHECK(p4[4] == Partition({1, 1, 1, 1}));
    CHECK(enumerate_partitions(0).size() == 1);

    auto over = enumerate_over(Partition({1}), 2);
    CHECK(over == std::vector<Partition>{Partition({3}), Partition({2, 1}),
                                         Partition({1, 1, 1})});
}

TEST_CASE("skew shapes") {
    SkewShape sh(Partition({2, 1}), Partition({3, 3, 1}));
    CHECK(sh.size() == 4);
    auto bs = sh.boxes();
    CHECK(bs == std::vector<Box>{{2, 0}, {1, 1}, {2, 1}, {0, 2}});
    CHECK(sh.has_box({2, 0}));
    CHECK_FALSE(sh.has_box({0, 0}));
    CHECK_THROWS_AS(SkewShape(Partition({2, 2}), Partition({3, 1})), UsageError);

    SkewShape whole(Partition::empty(), Partition({2, 2}));
    CHECK(content_sum(whole) == 0);
    CHECK(same_diag_pairs(whole) == 1);
    SkewShape skew(Partition({1}), Partition({3, 2}));
    // boxes (1,0),(2,0),(0,1),(1,1): contents 1,2,-1,0
    CHECK(content_sum(skew) == 2);
    CHECK(same_diag_pairs(skew) == 0);
}

TEST_CASE("min and max statistics") {
    // lambda = (2,1): legs sum 1, arms sum 1
    CHECK(min_stat(Partition({2, 1})) == -1);
    CHECK(max_stat(Partition({2, 1})) == 4);
    CHECK(min_stat(Partition::empty()) == 0);
    CHECK(max_stat(Partition::empty()) == 0);
    // hook (3,1,1): arm sum 3, leg sum 3
    CHECK(min_stat(Partition({3, 1, 1})) == -3);
    CHECK(max_stat(Partition({3, 1, 1})) == 8);
}
