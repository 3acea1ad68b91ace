#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qtsf/errors.hpp"
#include "qtsf/serialize.hpp"
#include "qtsf/symfunc.hpp"
#include "test_util.hpp"

using namespace qtsf;
using testutil::expected;
using testutil::part_of;

namespace {

SymFunc p_unit(const Partition& la) { return SymFunc::unit(Basis::PowerSum, la); }

QTRational one_minus(const QTRational& v) { return QTRational(1) - v; }

const QTRational Q = QTRational::q();
const QTRational T = QTRational::t();

// Shared across test cases so the Macdonald tables are built only once.
SymAlgebra& A6() {
    static SymAlgebra a(6);
    return a;
}

SymAlgebra& A5() {
    static SymAlgebra a(5);
    return a;
}

}  // namespace

TEST_CASE("z factors") {
    CHECK(z_of(Partition()) == 1);
    CHECK(z_of(Partition({1})) == 1);
    CHECK(z_of(Partition({2})) == 2);
    CHECK(z_of(Partition({1, 1})) == 2);
    CHECK(z_of(Partition({2, 1})) == 2);
    CHECK(z_of(Partition({2, 2})) == 8);
    CHECK(z_of(Partition({3, 1, 1})) == 6);
}

TEST_CASE("symfunc container arithmetic") {
    SymFunc f = p_unit(Partition({2})) + p_unit(Partition({1, 1})) * QTRational(3);
    CHECK(f.coeff(Partition({2})) == QTRational(1));
    CHECK(f.coeff(Partition({1, 1})) == QTRational(3));
    CHECK(f.coeff(Partition({3})).is_zero());
    CHECK(f.max_degree() == 2);
    CHECK((f - f).is_zero());
    CHECK(SymFunc::zero(Basis::Schur) == SymFunc::zero(Basis::PowerSum));
    CHECK(SymFunc::unit(Basis::Schur, Partition({1})) !=
          SymFunc::unit(Basis::PowerSum, Partition({1})));
    CHECK_THROWS_AS(SymFunc::one(Basis::Schur) + SymFunc::one(Basis::PowerSum), UsageError);
    // Adding zero never complains about bases.
    CHECK(SymFunc::one(Basis::Schur) + SymFunc::zero() == SymFunc::one(Basis::Schur));
}

TEST_CASE("classical basis conversions") {
    SymAlgebra& A = A6();
    for (int k = 1; k <= 4; ++k) {
        std::vector<int> ones(k, 1);
        CHECK(A.convert(SymFunc::unit(Basis::Elementary, Partition({k})), Basis::Schur) ==
              SymFunc::unit(Basis::Schur, Partition(ones)));
    }
    CHECK(A.convert(p_unit(Partition({2})), Basis::Schur) ==
          SymFunc::unit(Basis::Schur, Partition({2})) -
              SymFunc::unit(Basis::Schur, Partition({1, 1})));
    // m = p = e = h = s for a single box.
    for (Basis b : {Basis::Monomial, Basis::Elementary, Basis::Homogeneous, Basis::Schur})
        CHECK(A.convert(SymFunc::unit(b, Partition({1})), Basis::PowerSum) ==
              p_unit(Partition({1})));

    // Hand expansions.
    CHECK(A.convert(SymFunc::unit(Basis::Homogeneous, Partition({2})), Basis::Monomial) ==
          SymFunc::unit(Basis::Monomial, Partition({2})) +
              SymFunc::unit(Basis::Monomial, Partition({1, 1})));
    CHECK(A.convert(SymFunc::unit(Basis::Elementary, Partition({2})), Basis::Monomial) ==
          SymFunc::unit(Basis::Monomial, Partition({1, 1})));
    SymFunc s21 = A.convert(SymFunc::unit(Basis::Schur, Partition({2, 1})), Basis::PowerSum);
    CHECK(s21.coeff(Partition({1, 1, 1})) == QTRational(Rat("1/3")));
    CHECK(s21.coeff(Partition({3})) == QTRational(Rat("-1/3")));
    CHECK(s21.coeff(Partition({2, 1})).is_zero());
}

TEST_CASE("round trips through every basis") {
    SymAlgebra& A = A5();
    // A deliberately inhomogeneous function with fractional coefficients.
    SymFunc f = p_unit(Partition({3, 1})) * (Q / (T + QTRational(2))) +
                p_unit(Partition({2})) * QTRational(Rat("-7/3")) + SymFunc::one() +
                p_unit(Partition({1, 1, 1, 1})) * T;
    for (Basis b : {Basis::Monomial, Basis::PowerSum, Basis::Elementary, Basis::Homogeneous,
                    Basis::Schur, Basis::MacP, Basis::MacM}) {
        SymFunc g = A.convert(f, b);
        CHECK(A.convert(g, Basis::PowerSum) == f);
        // A second hop between non-power bases.
        SymFunc h = A.convert(g, b == Basis::Schur ? Basis::MacM : Basis::Schur);
        CHECK(A.convert(h, Basis::PowerSum) == f);
    }
    SymAlgebra tight(3);
    CHECK_THROWS_AS(tight.convert(f, Basis::Monomial), UsageError);
}

TEST_CASE("schur expansions match the frozen table") {
    SymAlgebra& A = A6();
    for (const auto& [la_str, row] : expected()["schur_m"].items()) {
        SymFunc m = A.convert(SymFunc::unit(Basis::Schur, part_of(la_str)), Basis::Monomial);
        CHECK(m.coeffs().size() == row.size());
        for (const auto& [mu_str, val] : row.items()) {
            CHECK(m.coeff(part_of(mu_str)) ==
                  QTRational(testutil::rat_of(val.get<std::string>())));
        }
    }
}

TEST_CASE("hall inner product") {
    SymAlgebra& A = A5();
    CHECK(A.hall_inner(p_unit(Partition({1})), p_unit(Partition({1}))) == QTRational(1));
    CHECK(A.hall_inner(p_unit(Partition({2})), p_unit(Partition({1, 1}))).is_zero());
    for (const auto& la : enumerate_partitions(4))
        CHECK(A.hall_inner(p_unit(la), p_unit(la)) == QTRational(z_of(la)));
    for (int d = 1; d <= 4; ++d)
        for (const auto& la : enumerate_partitions(d))
            for (const auto& mu : enumerate_partitions(d)) {
                QTRational v = A.hall_inner(SymFunc::unit(Basis::Schur, la),
                                            SymFunc::unit(Basis::Schur, mu));
                CHECK(v == (la == mu ? QTRational(1) : QTRational(0)));
            }
}

TEST_CASE("macdonald inner product and P basis") {
    SymAlgebra& A = A6();
    CHECK(A.macdonald_inner(p_unit(Partition({1})), p_unit(Partition({1}))) ==
          one_minus(Q) / one_minus(T));
    CHECK(A.macdonald_inner(p_unit(Partition({2})), p_unit(Partition({1, 1}))).is_zero());

    CHECK(A.macdonald_P(Partition({1})) == SymFunc::unit(Basis::Monomial, Partition({1})));
    for (int k = 2; k <= 4; ++k) {
        std::vector<int> ones(k, 1);
        CHECK(A.macdonald_P(Partition(ones)) ==
              SymFunc::unit(Basis::Monomial, Partition(ones)));
    }
    SymFunc P2 = A.macdonald_P(Partition({2}));
    CHECK(P2.coeff(Partition({2})) == QTRational(1));
    CHECK(P2.coeff(Partition({1, 1})) ==
          (QTRational(1) + Q) * one_minus(T) / one_minus(Q * T));
    CHECK(A.macdonald_inner(SymFunc::unit(Basis::MacP, Partition({2})),
                            SymFunc::unit(Basis::MacP, Partition({1, 1})))
              .is_zero());
}

TEST_CASE("macdonald P matches the frozen table") {
    SymAlgebra& A = A6();
    for (const auto& [la_str, row] : expected()["macdonald_P"].items()) {
        SymFunc P = A.macdonald_P(part_of(la_str));
        CHECK(P.coeffs().size() == row.size());
        for (const auto& [mu_str, val] : row.items())
            CHECK(to_json(P.coeff(part_of(mu_str))) == val);
    }
}

TEST_CASE("macdonald orthogonality and triangularity") {
    SymAlgebra& A = A5();
    for (int d = 1; d <= 5; ++d) {
        auto parts = enumerate_partitions(d);
        for (const auto& la : parts) {
            SymFunc P = A.macdonald_P(la);
            CHECK(P.coeff(la) == QTRational(1));
            for (const auto& [mu, c] : P.coeffs()) CHECK(dominance_leq(mu, la));
            for (const auto& mu : parts)
                if (mu != la)
                    CHECK(A.macdonald_inner(SymFunc::unit(Basis::MacP, la),
                                            SymFunc::unit(Basis::MacP, mu))
                              .is_zero());
        }
    }
}

TEST_CASE("q=t specialization of P is Schur") {
    SymAlgebra& A = A5();
    for (int d = 1; d <= 4; ++d)
        for (const auto& la : enumerate_partitions(d)) {
            SymFunc P = A.macdonald_P(la);
            SymFunc s = A.convert(SymFunc::unit(Basis::Schur, la), Basis::Monomial);
            for (const auto& mu : enumerate_partitions(d)) {
                // q = t = u^2 for a couple of exact sample points.
                for (Rat u : {Rat(2), Rat(Rat(3) / 5)}) {
                    CHECK(P.coeff(mu).eval(u, u) == s.coeff(mu).eval(u, u));
                }
            }
        }
}

TEST_CASE("macdonald M normalization") {
    SymAlgebra& A = A5();
    CHECK(SymAlgebra::macdonald_M_scale(Partition()) == QTRational(1));
    CHECK(SymAlgebra::macdonald_M_scale(Partition({1})) == one_minus(Q));
    CHECK(SymAlgebra::macdonald_M_scale(Partition({1, 1})) ==
          (QTRational::mono(0, -2) - Q) * one_minus(Q));
    SymFunc M11 = A.macdonald_M(Partition({1, 1}));
    SymFunc P11 = A.macdonald_P(Partition({1, 1}));
    CHECK(M11 == P11 * ((QTRational::mono(0, -2) - Q) * one_minus(Q)).inv());
    // Conversion between MacP and MacM is the diagonal rescaling.
    SymFunc f = SymFunc::unit(Basis::MacP, Partition({2, 1}));
    SymFunc g = A.convert(f, Basis::MacM);
    CHECK(g.coeff(Partition({2, 1})) == SymAlgebra::macdonald_M_scale(Partition({2, 1})));
}

TEST_CASE("nabla") {
    SymAlgebra& A = A5();
    CHECK(SymAlgebra::nabla_eigenvalue(Partition({1})) == QTRational(1));
    CHECK(SymAlgebra::nabla_eigenvalue(Partition({2})) == Q);
    CHECK(SymAlgebra::nabla_eigenvalue(Partition({1, 1})) == QTRational::mono(0, -2));
    CHECK(SymAlgebra::nabla_eigenvalue(Partition({3, 1})) == QTRational::mono(6, -2));

    CHECK(A.nabla(SymFunc::unit(Basis::MacM, Partition({1}))) ==
          SymFunc::unit(Basis::MacM, Partition({1})));
    CHECK(A.nabla(SymFunc::unit(Basis::MacM, Partition({2}))) ==
          SymFunc::unit(Basis::MacM, Partition({2})) * Q);
    SymFunc f = p_unit(Partition({2, 1})) + p_unit(Partition({1})) * T;
    CHECK(A.convert(A.nabla(A.nabla(f, 1), -1), Basis::PowerSum) == f);
    CHECK(A.convert(A.nabla(f, 0), Basis::PowerSum) == f);
}

TEST_CASE("norm phi") {
    SymAlgebra& A = A5();
    for (const auto& la : enumerate_partitions(4)) CHECK(A.norm_phi(p_unit(la)) == QTRational(1));
    CHECK(A.norm_phi(SymFunc::one()) == QTRational(1));
    CHECK(A.norm_phi(SymFunc::unit(Basis::Elementary, Partition({2}))).is_zero());
    CHECK(A.norm_phi(SymFunc::unit(Basis::Elementary, Partition({3}))).is_zero());
    CHECK(A.norm_phi(SymFunc::unit(Basis::Homogeneous, Partition({2}))) == QTRational(1));
}

TEST_CASE("multiplication") {
    SymAlgebra& A = A5();
    CHECK(A.multiply(p_unit(Partition({1})), p_unit(Partition({1}))) ==
          p_unit(Partition({1, 1})));
    SymFunc s1 = SymFunc::unit(Basis::Schur, Partition({1}));
    CHECK(A.convert(A.multiply(s1, s1), Basis::Schur) ==
          SymFunc::unit(Basis::Schur, Partition({2})) +
              SymFunc::unit(Basis::Schur, Partition({1, 1})));
    SymAlgebra tight(1);
    CHECK_THROWS_AS(tight.multiply(p_unit(Partition({1})), p_unit(Partition({1}))),
                    UsageError);
}

TEST_CASE("adjoint of multiplication") {
    SymAlgebra& A = A5();
    SymFunc one = SymFunc::one();
    SymFunc p1 = p_unit(Partition({1}));
    CHECK(A.macdonald_inner(A.multiply(p1, one), p1) ==
          A.macdonald_inner(one, A.adjoint_mult(p1, p1)));
    CHECK(A.adjoint_mult(p1, p_unit(Partition({1, 1}))) ==
          p1 * (QTRational(2) * one_minus(Q) / one_minus(T)));

    // <h f, g> = <f, h^dagger g> for a few mixed test functions.
    SymFunc f = p_unit(Partition({2})) + p_unit(Partition({1, 1})) * Q;
    SymFunc g = p_unit(Partition({2, 2})) + p_unit(Partition({3, 1})) * T +
                p_unit(Partition({2, 1, 1})) * QTRational(Rat("5/7"));
    for (const SymFunc& h :
         {p_unit(Partition({2})), SymFunc::unit(Basis::Elementary, Partition({2})),
          SymFunc::unit(Basis::Schur, Partition({2, 1}))}) {
        CHECK(A.macdonald_inner(A.multiply(h, f), g) ==
              A.macdonald_inner(f, A.adjoint_mult(h, g)));
    }
}

TEST_CASE("macdonald disk cache") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() /
                   ("qtsf_cache_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    SymFunc fresh21, fresh31;
    {
        SymAlgebra plain(4);
        fresh21 = plain.macdonald_P(Partition({2, 1}));
        fresh31 = plain.macdonald_P(Partition({3, 1}));
    }
    {
        SymAlgebra A(4, dir.string());
        CHECK_FALSE(A.cache_verify());  // nothing there yet
        A.cache_build(4);
        std::string msg;
        CHECK(A.cache_verify(&msg));
        CHECK(msg == "ok");
    }
    {
        SymAlgebra B(4, dir.string());
        CHECK(B.cache_verify());
        CHECK(B.macdonald_P(Partition({2, 1})) == fresh21);
        CHECK(B.macdonald_P(Partition({3, 1})) == fresh31);
        CHECK(B.macdonald_inner(SymFunc::unit(Basis::MacP, Partition({3, 1})),
                                SymFunc::unit(Basis::MacP, Partition({2, 2})))
                  .is_zero());
    }
    {
        // Tamper with one byte inside the entries payload.
        fs::path file = dir / "macdonald_cache.json";
        std::ifstream in(file);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        in.close();
        auto pos = text.find("\"[1]\"");
        REQUIRE(pos != std::string::npos);
        text[pos + 2] = '9';
        std::ofstream out(file);
        out << text;
        out.close();
        SymAlgebra C(4, dir.string());
        std::string msg;
        CHECK_FALSE(C.cache_verify(&msg));
        CHECK(msg == "checksum mismatch");
        CHECK_THROWS_AS(C.macdonald_P(Partition({2, 1})), UsageError);
        C.cache_clear();
        CHECK_FALSE(fs::exists(file));
        CHECK(C.macdonald_P(Partition({2, 1})) == fresh21);  // transparent rebuild
    }
    fs::remove_all(dir);
}
