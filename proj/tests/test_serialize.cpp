#include <random>
#include <string>

#include "doctest.h"
#include "qtsf/errors.hpp"
#include "qtsf/serialize.hpp"
#include "test_util.hpp"

using namespace qtsf;

TEST_CASE("rational to_string basic forms") {
    CHECK(to_string(QTRational(0)) == "0");
    CHECK(to_string(QTRational(1)) == "1");
    CHECK(to_string(QTRational(-5)) == "-5");
    CHECK(to_string(QTRational(Rat("3/4"))) == "3/4");
    CHECK(to_string(QTRational::q()) == "q^{1}");
    CHECK(to_string(QTRational::t()) == "t^{1}");
    CHECK(to_string(QTRational::s()) == "q^{-1/2}t^{1/2}");
    CHECK(to_string(QTRational::q() - QTRational::t()) == "q^{1} - t^{1}");
    CHECK(to_string(QTRational::mono(4, -1, Rat(-3, 4))) == "-3/4q^{2}t^{-1/2}");
    // 1/(1-q) is stored with denominator q - 1 and numerator -1.
    CHECK(to_string(QTRational(1) / (QTRational(1) - QTRational::q())) ==
          "(-1) / (q^{1} - 1)");
}

TEST_CASE("rational parsing accepts non-canonical spellings") {
    QTRational v = (QTRational(1) - QTRational::q() * QTRational::t().inv()) /
                   (QTRational(1) - QTRational::t());
    CHECK(parse_rational("(1 - q^{1}t^{-1}) / (1 - t^{1})") == v);
    CHECK(to_string(v) == "(q^{1}t^{-1} - 1) / (t^{1} - 1)");
    CHECK(parse_rational(to_string(v)) == v);

    // Bare q/t mean exponent one; repeated factors accumulate; whitespace free.
    CHECK(parse_rational("qt") == QTRational::q() * QTRational::t());
    CHECK(parse_rational("q^{1/2}q^{1/2}") == QTRational::q());
    CHECK(parse_rational("2q - q - q") == QTRational(0));
    CHECK(parse_rational(" ( q )  ") == QTRational::q());
    CHECK(parse_rational("3 / 4") == QTRational(Rat("3/4")));
    CHECK(parse_rational("+q") == QTRational::q());
}

TEST_CASE("rational parse errors") {
    CHECK_THROWS_AS(parse_rational(""), UsageError);
    CHECK_THROWS_AS(parse_rational("q +"), UsageError);
    CHECK_THROWS_AS(parse_rational("x"), UsageError);
    CHECK_THROWS_AS(parse_rational("q^{1/3}"), UsageError);
    CHECK_THROWS_AS(parse_rational("q^{2"), UsageError);
    CHECK_THROWS_AS(parse_rational("(q"), UsageError);
    CHECK_THROWS_AS(parse_rational("(q) / t"), UsageError);
    CHECK_THROWS_AS(parse_rational("q t junk"), UsageError);
    CHECK_THROWS_AS(parse_rational("(1) / (0)"), MathError);
}

TEST_CASE("partition and skew shape strings") {
    CHECK(to_string(Partition({4, 3, 1})) == "[4,3,1]");
    CHECK(to_string(Partition()) == "[]");
    CHECK(parse_partition("[4,3,1]") == Partition({4, 3, 1}));
    CHECK(parse_partition(" [ 4 , 3 , 1 ] ") == Partition({4, 3, 1}));
    CHECK(parse_partition("[]") == Partition());
    CHECK_THROWS_AS(parse_partition("[3,"), UsageError);
    CHECK_THROWS_AS(parse_partition("3]"), UsageError);
    CHECK_THROWS_AS(parse_partition("[3,a]"), UsageError);
    CHECK_THROWS_AS(parse_partition("[1,3]"), UsageError);  // not weakly decreasing

    SkewShape sh = parse_skew("[4,3,1]/[2,1]");
    CHECK(sh.outer == Partition({4, 3, 1}));
    CHECK(sh.inner == Partition({2, 1}));
    CHECK(to_string(sh) == "[4,3,1]/[2,1]");
    CHECK(parse_skew("[2]").inner == Partition());
    CHECK(parse_skew("[2]/[]").outer == Partition({2}));
    CHECK_THROWS_AS(parse_skew("[1]/[2]"), UsageError);  // inner not contained
}

TEST_CASE("json layout matches the frozen conventions") {
    // Anchor used elsewhere in the suite: the [1,1] coefficient of a frozen
    // Macdonald polynomial equals (1+q)(1-t)/(1-qt).
    QTRational v = (QTRational(1) + QTRational::q()) * (QTRational(1) - QTRational::t()) /
                   (QTRational(1) - QTRational::q() * QTRational::t());
    CHECK(to_json(v) == testutil::expected()["macdonald_P"]["[2]"]["[1,1]"]);
    CHECK(rational_from_json(to_json(v)) == v);

    CHECK(to_json(QTRational(0)) == nlohmann::json({{"num", nlohmann::json::array()},
                                                    {"den", {{0, 0, "1"}}}}));

    Ribbon r({{0, 1}, {0, 0}});
    CHECK(to_json(r) == nlohmann::json({{0, 1}, {0, 0}}));  // path order, head first
}

TEST_CASE("randomized round trips") {
    std::mt19937 rng(20260825);
    std::uniform_int_distribution<int> exp2(-5, 5), nterm(1, 4), coef(-6, 6);
    auto rand_poly = [&]() {
        std::vector<QTPoly::Term> ts;
        int n = nterm(rng);
        for (int i = 0; i < n; ++i)
            ts.push_back({{exp2(rng), exp2(rng)}, Rat(coef(rng)) / (1 + (i % 3))});
        return QTPoly::from_terms(std::move(ts));
    };
    int done = 0;
    while (done < 60) {
        QTPoly num = rand_poly(), den = rand_poly();
        if (den.is_zero()) continue;
        QTRational v(num, den);
        CAPTURE(to_string(v));
        CHECK(parse_rational(to_string(v)) == v);
        CHECK(rational_from_json(to_json(v)) == v);
        ++done;
    }
}
