#pragma once

// Exact arithmetic in the field of rational functions of q and t, with
// half-integer exponents.  Exponents are stored doubled (an exponent a of q is
// stored as the integer 2a), so the square root s of t/q is an ordinary
// monomial.  Equivalently, everything is a polynomial computation in the
// variables Q = q^(1/2) and T = t^(1/2); the doubled exponents are the honest
// integer exponents of Q and T.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qtsf/errors.hpp"

namespace qtsf {

using Rat = mpq_class;

// x^e for rational x and integer (possibly negative) e.
Rat pow_rat(const Rat& x, long e);

struct QTMono {
    int qe2 = 0;  // doubled exponent of q
    int te2 = 0;  // doubled exponent of t
    friend auto operator<=>(const QTMono&, const QTMono&) = default;
    QTMono operator+(const QTMono& o) const { return {qe2 + o.qe2, te2 + o.te2}; }
    QTMono operator-(const QTMono& o) const { return {qe2 - o.qe2, te2 - o.te2}; }
};

// Laurent polynomial in q, t (equivalently ordinary polynomial in Q, T when
// all doubled exponents are non-negative).  Terms are kept sorted strictly
// descending by (qe2, te2) lexicographically, with no zero coefficients.
class QTPoly {
  public:
    using Term = std::pair<QTMono, Rat>;

    QTPoly() = default;
    static QTPoly zero() { return {}; }
    static QTPoly one() { return mono(0, 0, 1); }
    static QTPoly mono(int qe2, int te2, Rat c);
    static QTPoly from_terms(std::vector<Term> terms);  // any order, merges dups

    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_mono() const { return t_.size() == 1; }
    bool is_one() const;
    std::size_t size() const { return t_.size(); }

    // Leading (lexicographically greatest) term.  Requires nonzero.
    const Term& lead() const;

    friend bool operator==(const QTPoly&, const QTPoly&) = default;

    QTPoly operator-() const;
    QTPoly operator+(const QTPoly& o) const;
    QTPoly operator-(const QTPoly& o) const;
    QTPoly operator*(const QTPoly& o) const;
    QTPoly& operator+=(const QTPoly& o) { return *this = *this + o; }
    QTPoly& operator-=(const QTPoly& o) { return *this = *this - o; }
    QTPoly& operator*=(const QTPoly& o) { return *this = *this * o; }

    QTPoly mul_scalar(const Rat& c) const;
    QTPoly mul_mono(const QTMono& m) const;  // shift all exponents

    // Componentwise minimum / maximum of exponents over all terms.
    QTMono min_exps() const;
    QTMono max_exps() const;

    // Diagonal degrees, doubled: max/min over terms of (qe2 + te2).
    int deg_se2() const;
    int deg_nw2() const;
    QTPoly hd() const;  // sum of terms attaining deg_se2
    QTPoly ld() const;  // sum of terms attaining deg_nw2

    // Substitute Q = u, T = v (that is q = u^2, t = v^2).
    Rat eval(const Rat& u, const Rat& v) const;

  private:
    std::vector<Term> t_;
};

// Exact quotient a / b of true polynomials; throws MathError if not divisible.
QTPoly divexact(const QTPoly& a, const QTPoly& b);

// Gcd of two true polynomials (all doubled exponents >= 0), normalized so its
// lexicographically greatest monomial has coefficient +1.  gcd(0, b) = b.
QTPoly gcd_poly(const QTPoly& a, const QTPoly& b);

// Element of Q(q, t), always in canonical form:
//   * den != 0 and gcd(num, den) = 1 as polynomials in Q, T;
//   * den is a true polynomial whose componentwise minimal exponents are 0
//     (any monomial content is moved into num, which may be Laurent);
//   * the lexicographically greatest monomial of den (ordered by qe2 then
//     te2) has coefficient +1.
// Equality of values is therefore structural equality of representations.
class QTRational {
  public:
    QTRational() : num_(QTPoly::zero()), den_(QTPoly::one()) {}
    QTRational(long v) : QTRational(Rat(v)) {}
    QTRational(const Rat& v);
    QTRational(QTPoly n, QTPoly d);  // normalizes

    static QTRational from_poly(QTPoly n);
    static QTRational mono(int qe2, int te2, Rat c = 1);
    static QTRational q() { return mono(2, 0); }
    static QTRational t() { return mono(0, 2); }
    static QTRational s() { return mono(-1, 1); }  // sqrt(t/q)

    const QTPoly& num() const { return num_; }
    const QTPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_mono() const { return num_.is_mono() && den_.is_one(); }

    friend bool operator==(const QTRational&, const QTRational&) = default;

    QTRational operator-() const;
    QTRational operator+(const QTRational& o) const;
    QTRational operator-(const QTRational& o) const;
    QTRational operator*(const QTRational& o) const;
    QTRational operator/(const QTRational& o) const;
    QTRational& operator+=(const QTRational& o) { return *this = *this + o; }
    QTRational& operator-=(const QTRational& o) { return *this = *this - o; }
    QTRational& operator*=(const QTRational& o) { return *this = *this * o; }
    QTRational& operator/=(const QTRational& o) { return *this = *this / o; }

    QTRational inv() const;
    QTRational pow(long e) const;

    // Diagonal degrees (doubled).  Defined for nonzero values; the value for
    // a quotient is the difference of the numerator and denominator values.
    int deg_se2() const;
    int deg_nw2() const;
    // Highest/lowest-degree part.  Requires a Laurent polynomial (den a
    // monomial); throws MathError otherwise.
    QTRational hd() const;
    QTRational ld() const;
    // Ratio convention hd(num)/hd(den): agrees with hd() on Laurent
    // polynomials and is multiplicative in general.
    QTRational hd_ratio() const;
    QTRational ld_ratio() const;
    bool is_laurent() const { return den_.is_mono(); }

    // Substitute Q = u, T = v (doubled substitution: q = u^2, t = v^2).
    Rat eval(const Rat& u, const Rat& v) const;

  private:
    void normalize();
    QTPoly num_, den_;
};

}  // namespace qtsf
