#pragma once

// Univariate rational functions in an auxiliary variable (written eps below),
// with coefficients in an exact ring C — either QTRational (symbolic q, t) or
// plain rationals (randomized numeric checks).  Denominators are kept as
// lists of factors with multiplicities, never expanded: sums take factor-wise
// common denominators, and the only cancellation ever required is stripping
// powers of (eps - 1) by synthetic division when taking the limit at 1.  The
// same machinery serves for limits at infinity (degree and leading
// coefficient), where the auxiliary variable plays the role of a scaling
// parameter.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "qtsf/errors.hpp"

namespace qtsf {

template <class C>
C c_pow(C base, long e) {
    C acc(1);
    bool invert = e < 0;
    unsigned long n = invert ? -(unsigned long)e : (unsigned long)e;
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    if (invert) return C(1) / acc;
    return acc;
}

template <class C>
class EpsPoly {
  public:
    EpsPoly() = default;
    explicit EpsPoly(C constant) {
        if (!(constant == C(0))) c_.push_back(std::move(constant));
    }
    static EpsPoly zero() { return {}; }
    static EpsPoly one() { return EpsPoly(C(1)); }
    // c * eps^d
    static EpsPoly term(C c, int d) {
        EpsPoly p;
        if (c == C(0)) return p;
        p.c_.assign(d + 1, C(0));
        p.c_[d] = std::move(c);
        return p;
    }
    static EpsPoly from_coeffs(std::vector<C> c) {
        EpsPoly p;
        p.c_ = std::move(c);
        p.trim();
        return p;
    }

    const std::vector<C>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return (int)c_.size() - 1; }  // -1 for zero
    const C& lead() const {
        if (c_.empty()) throw MathError("lead of zero eps-polynomial");
        return c_.back();
    }

    friend bool operator==(const EpsPoly& a, const EpsPoly& b) { return a.c_ == b.c_; }

    EpsPoly operator-() const {
        EpsPoly r = *this;
        for (auto& x : r.c_) x = C(0) - x;
        return r;
    }
    EpsPoly operator+(const EpsPoly& o) const {
        EpsPoly r = *this;
        if (o.c_.size() > r.c_.size()) r.c_.resize(o.c_.size(), C(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) r.c_[i] = r.c_[i] + o.c_[i];
        r.trim();
        return r;
    }
    EpsPoly operator-(const EpsPoly& o) const { return *this + (-o); }
    EpsPoly operator*(const EpsPoly& o) const {
        if (is_zero() || o.is_zero()) return zero();
        EpsPoly r;
        r.c_.assign(c_.size() + o.c_.size() - 1, C(0));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == C(0)) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
        }
        r.trim();
        return r;
    }
    EpsPoly mul_scalar(const C& s) const {
        if (s == C(0)) return zero();
        EpsPoly r = *this;
        for (auto& x : r.c_) x = x * s;
        return r;
    }

    C eval_one() const {
        C acc(0);
        for (const auto& x : c_) acc = acc + x;
        return acc;
    }

    // Quotient by (eps - 1); available iff eval_one() == 0.
    std::optional<EpsPoly> div_eps_minus_one() const {
        if (is_zero()) return *this;
        std::vector<C> q(c_.size() - 1, C(0));
        C carry = c_.back();
        for (int i = (int)c_.size() - 2; i >= 0; --i) {
            q[i] = carry;
            carry = carry + c_[i];
        }
        if (!(carry == C(0))) return std::nullopt;
        return from_coeffs(std::move(q));
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == C(0)) c_.pop_back();
    }
    std::vector<C> c_;
};

template <class C>
class EpsRat {
  public:
    using Poly = EpsPoly<C>;
    using Factor = std::pair<Poly, int>;  // factor, multiplicity >= 1

    EpsRat() = default;
    explicit EpsRat(C constant) : num_(Poly(std::move(constant))) {}
    explicit EpsRat(Poly p) : num_(std::move(p)) {}
    static EpsRat zero() { return {}; }
    static EpsRat one() { return EpsRat(C(1)); }

    const Poly& num() const { return num_; }
    const std::vector<Factor>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    EpsRat operator-() const {
        EpsRat r = *this;
        r.num_ = -r.num_;
        return r;
    }

    EpsRat operator*(const EpsRat& o) const {
        if (is_zero() || o.is_zero()) return zero();
        EpsRat r;
        r.num_ = num_ * o.num_;
        r.den_ = den_;
        for (const auto& [f, m] : o.den_) r.push_den(f, m);
        return r;
    }
    EpsRat& operator*=(const EpsRat& o) { return *this = *this * o; }

    EpsRat mul_poly(const Poly& p) const {
        EpsRat r = *this;
        r.num_ = r.num_ * p;
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }
    EpsRat mul_scalar(const C& s) const {
        EpsRat r = *this;
        r.num_ = r.num_.mul_scalar(s);
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }
    // Divide by a polynomial factor (kept factored, normalized monic in eps).
    EpsRat div_poly(Poly p, int mult = 1) const {
        if (p.is_zero()) throw MathError("eps division by zero");
        if (mult < 0) throw MathError("eps division with negative multiplicity");
        EpsRat r = *this;
        if (r.is_zero() || mult == 0) return r;
        r.push_den(std::move(p), mult);
        return r;
    }

    EpsRat operator+(const EpsRat& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        EpsRat r;
        // union of factors with max multiplicities
        r.den_ = den_;
        for (const auto& [f, m] : o.den_) {
            auto it = r.find(f);
            if (it == r.den_.end())
                r.den_.push_back({f, m});
            else
                it->second = std::max(it->second, m);
        }
        Poly left = num_, right = o.num_;
        for (const auto& [f, m] : r.den_) {
            int ma = mult_of(f), mb = o.mult_of(f);
            for (int i = 0; i < m - ma; ++i) left = left * f;
            for (int i = 0; i < m - mb; ++i) right = right * f;
        }
        r.num_ = left + right;
        if (r.num_.is_zero()) r.den_.clear();
        return r;
    }
    EpsRat operator-(const EpsRat& o) const { return *this + (-o); }
    EpsRat& operator+=(const EpsRat& o) { return *this = *this + o; }

    // Exact limit as eps -> 1.  Cancels matching powers of (eps - 1) between
    // numerator and denominator; throws PoleAtTarget if a pole survives.
    C limit_at_one() const {
        if (is_zero()) return C(0);
        long stripped = 0;
        C den_val(1);
        for (const auto& [f, m] : den_) {
            Poly g = f;
            while (g.eval_one() == C(0)) {
                auto gq = g.div_eps_minus_one();
                if (!gq) throw MathError("eps factor not divisible by (eps-1)");
                g = *gq;
                stripped += m;
            }
            den_val = den_val * c_pow(g.eval_one(), m);
        }
        Poly n = num_;
        for (long i = 0; i < stripped; ++i) {
            auto nq = n.div_eps_minus_one();
            if (!nq) throw PoleAtTarget("pole at eps = 1");
            n = *nq;
        }
        return n.eval_one() / den_val;
    }

    // Degree and leading coefficient as eps -> infinity.
    long deg_inf() const {
        if (is_zero()) throw MathError("deg_inf of zero");
        long d = num_.degree();
        for (const auto& [f, m] : den_) d -= (long)f.degree() * m;
        return d;
    }
    C lead_inf() const {
        if (is_zero()) throw MathError("lead_inf of zero");
        C l = num_.lead();
        for (const auto& [f, m] : den_) l = l / c_pow(f.lead(), (long)m);
        return l;
    }

  private:
    typename std::vector<Factor>::iterator find(const Poly& f) {
        return std::find_if(den_.begin(), den_.end(),
                            [&](const Factor& x) { return x.first == f; });
    }
    int mult_of(const Poly& f) const {
        for (const auto& [g, m] : den_)
            if (g == f) return m;
        return 0;
    }
    void push_den(Poly f, int mult) {
        if (f.degree() == 0) {  // constant factor: fold into the numerator
            num_ = num_.mul_scalar(C(1) / c_pow(f.lead(), (long)mult));
            return;
        }
        const C& lc = f.lead();
        if (!(lc == C(1))) {
            num_ = num_.mul_scalar(C(1) / c_pow(lc, (long)mult));
            f = f.mul_scalar(C(1) / lc);
        }
        auto it = find(f);
        if (it == den_.end())
            den_.push_back({std::move(f), mult});
        else
            it->second += mult;
    }
    Poly num_;
    std::vector<Factor> den_;
};

}  // namespace qtsf
