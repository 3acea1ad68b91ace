#include "qtsf/rational.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <map>
#include <optional>

namespace qtsf {

Rat pow_rat(const Rat& x, long e) {
    if (e == 0) return 1;
    if (x == 0) {
        if (e < 0) throw MathError("pow_rat: 0 to a negative power");
        return 0;
    }
    Rat base = e < 0 ? Rat(1) / x : x;
    unsigned long n = e < 0 ? -(unsigned long)e : (unsigned long)e;
    Rat acc = 1;
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

// --------------------------------------------------------------------------
// QTPoly
// --------------------------------------------------------------------------

QTPoly QTPoly::mono(int qe2, int te2, Rat c) {
    QTPoly p;
    if (c != 0) p.t_.push_back({{qe2, te2}, std::move(c)});
    return p;
}

QTPoly QTPoly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return b.first < a.first; });
    QTPoly p;
    for (auto& [m, c] : terms) {
        if (!p.t_.empty() && p.t_.back().first == m) {
            p.t_.back().second += c;
            if (p.t_.back().second == 0) p.t_.pop_back();
        } else if (c != 0) {
            p.t_.push_back({m, std::move(c)});
        }
    }
    return p;
}

bool QTPoly::is_one() const {
    return t_.size() == 1 && t_[0].first == QTMono{0, 0} && t_[0].second == 1;
}

const QTPoly::Term& QTPoly::lead() const {
    if (t_.empty()) throw MathError("lead of zero polynomial");
    return t_.front();
}

QTPoly QTPoly::operator-() const {
    QTPoly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
}

QTPoly QTPoly::operator+(const QTPoly& o) const {
    QTPoly r;
    r.t_.reserve(t_.size() + o.t_.size());
    std::size_t i = 0, j = 0;
    while (i < t_.size() && j < o.t_.size()) {
        if (t_[i].first == o.t_[j].first) {
            Rat c = t_[i].second + o.t_[j].second;
            if (c != 0) r.t_.push_back({t_[i].first, std::move(c)});
            ++i, ++j;
        } else if (o.t_[j].first < t_[i].first) {
            r.t_.push_back(t_[i++]);
        } else {
            r.t_.push_back(o.t_[j++]);
        }
    }
    while (i < t_.size()) r.t_.push_back(t_[i++]);
    while (j < o.t_.size()) r.t_.push_back(o.t_[j++]);
    return r;
}

QTPoly QTPoly::operator-(const QTPoly& o) const { return *this + (-o); }

QTPoly QTPoly::operator*(const QTPoly& o) const {
    if (is_zero() || o.is_zero()) return zero();
    if (o.is_mono()) {
        QTPoly r = mul_mono(o.t_[0].first);
        return r.mul_scalar(o.t_[0].second);
    }
    if (is_mono()) return o * *this;
    std::map<QTMono, Rat> acc;
    for (const auto& [ma, ca] : t_)
        for (const auto& [mb, cb] : o.t_) acc[ma + mb] += ca * cb;
    QTPoly r;
    r.t_.reserve(acc.size());
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
        if (it->second != 0) r.t_.push_back({it->first, it->second});
    return r;
}

QTPoly QTPoly::mul_scalar(const Rat& c) const {
    if (c == 0) return zero();
    QTPoly r = *this;
    for (auto& [m, cc] : r.t_) cc *= c;
    return r;
}

QTPoly QTPoly::mul_mono(const QTMono& m) const {
    QTPoly r = *this;
    for (auto& [mm, c] : r.t_) mm = mm + m;
    return r;
}

QTMono QTPoly::min_exps() const {
    if (t_.empty()) throw MathError("min_exps of zero polynomial");
    QTMono m = t_[0].first;
    for (const auto& [mm, c] : t_) {
        m.qe2 = std::min(m.qe2, mm.qe2);
        m.te2 = std::min(m.te2, mm.te2);
    }
    return m;
}

QTMono QTPoly::max_exps() const {
    if (t_.empty()) throw MathError("max_exps of zero polynomial");
    QTMono m = t_[0].first;
    for (const auto& [mm, c] : t_) {
        m.qe2 = std::max(m.qe2, mm.qe2);
        m.te2 = std::max(m.te2, mm.te2);
    }
    return m;
}

int QTPoly::deg_se2() const {
    if (t_.empty()) throw MathError("deg_se of zero");
    int d = t_[0].first.qe2 + t_[0].first.te2;
    for (const auto& [m, c] : t_) d = std::max(d, m.qe2 + m.te2);
    return d;
}

int QTPoly::deg_nw2() const {
    if (t_.empty()) throw MathError("deg_nw of zero");
    int d = t_[0].first.qe2 + t_[0].first.te2;
    for (const auto& [m, c] : t_) d = std::min(d, m.qe2 + m.te2);
    return d;
}

QTPoly QTPoly::hd() const {
    int d = deg_se2();
    QTPoly r;
    for (const auto& tm : t_)
        if (tm.first.qe2 + tm.first.te2 == d) r.t_.push_back(tm);
    return r;
}

QTPoly QTPoly::ld() const {
    int d = deg_nw2();
    QTPoly r;
    for (const auto& tm : t_)
        if (tm.first.qe2 + tm.first.te2 == d) r.t_.push_back(tm);
    return r;
}

Rat QTPoly::eval(const Rat& u, const Rat& v) const {
    Rat acc = 0;
    for (const auto& [m, c] : t_) acc += c * pow_rat(u, m.qe2) * pow_rat(v, m.te2);
    return acc;
}

// --------------------------------------------------------------------------
// divexact (multivariate, lex leading-term elimination)
// --------------------------------------------------------------------------

QTPoly divexact(const QTPoly& a, const QTPoly& b) {
    if (b.is_zero()) throw MathError("divexact by zero");
    if (a.is_zero()) return QTPoly::zero();
    if (b.is_one()) return a;
    if (b.is_mono()) {
        const auto& [bm, bc] = b.terms()[0];
        return a.mul_mono({-bm.qe2, -bm.te2}).mul_scalar(Rat(1) / bc);
    }
    QTPoly r = a;
    std::vector<QTPoly::Term> quot;
    const auto& [bm, bc] = b.lead();
    while (!r.is_zero()) {
        const auto& [rm, rc] = r.lead();
        QTMono d = rm - bm;
        if (d.qe2 < 0 || d.te2 < 0) throw MathError("divexact: not divisible");
        Rat c = rc / bc;
        quot.push_back({d, c});
        r -= b.mul_mono(d).mul_scalar(c);
    }
    return QTPoly::from_terms(std::move(quot));
}

// --------------------------------------------------------------------------
// bivariate gcd: primitive polynomial remainder sequences over the integers,
// in the variable Q with coefficients in Z[T].  Working over Z with content
// removal at every step keeps coefficient growth polynomial, where a naive
// remainder sequence over the rationals explodes.
// --------------------------------------------------------------------------

namespace {

using Int = mpz_class;
using ZU = std::vector<Int>;  // index = T exponent; trailing zeros trimmed
using ZB = std::vector<ZU>;   // index = Q exponent, value = T-polynomial

void zu_trim(ZU& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int zu_deg(const ZU& p) { return (int)p.size() - 1; }  // -1 for zero

bool zu_is_one(const ZU& p) { return p.size() == 1 && p[0] == 1; }

Int zu_int_content(const ZU& p) {  // >= 0; 0 only for the zero polynomial
    Int g = 0;
    for (const auto& x : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

// Divide by the integer content and make the leading coefficient positive.
void zu_make_primitive(ZU& p) {
    if (p.empty()) return;
    Int g = zu_int_content(p);
    if (sgn(p.back()) < 0) g = -g;
    if (g == 1) return;
    for (auto& x : p) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

ZU zu_mul(const ZU& a, const ZU& b) {
    if (a.empty() || b.empty()) return {};
    ZU r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

ZU zu_sub(const ZU& a, const ZU& b) {
    ZU r = a;
    if (b.size() > r.size()) r.resize(b.size(), Int(0));
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    zu_trim(r);
    return r;
}

// Exact quotient in Z[T]; requires that b divides a.
ZU zu_divexact(ZU a, const ZU& b) {
    if (b.empty()) throw MathError("zu_divexact by zero");
    if (a.empty()) return {};
    ZU q(a.size() - b.size() + 1, Int(0));
    while (!a.empty() && zu_deg(a) >= zu_deg(b)) {
        Int f;
        mpz_divexact(f.get_mpz_t(), a.back().get_mpz_t(), b.back().get_mpz_t());
        int sh = zu_deg(a) - zu_deg(b);
        q[sh] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + sh] -= b[i] * f;
        zu_trim(a);
    }
    if (!a.empty()) throw MathError("zu_divexact: not divisible");
    return q;
}

// Pseudo-remainder in the T variable: a is scaled by powers of lead(b), which
// only changes the gcd by a content the caller strips.
ZU zu_prem(ZU a, const ZU& b) {
    const Int& lb = b.back();
    while (!a.empty() && zu_deg(a) >= zu_deg(b)) {
        Int la = a.back();
        int sh = zu_deg(a) - zu_deg(b);
        for (auto& x : a) x *= lb;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + sh] -= b[i] * la;
        zu_trim(a);
    }
    return a;
}

// Gcd in Z[T] including the integer content, leading coefficient positive.
ZU zu_gcd(ZU a, ZU b) {
    auto pos_lead = [](ZU p) {
        if (!p.empty() && sgn(p.back()) < 0)
            for (auto& x : p) x = -x;
        return p;
    };
    if (a.empty()) return pos_lead(std::move(b));
    if (b.empty()) return pos_lead(std::move(a));
    Int c;
    mpz_gcd(c.get_mpz_t(), zu_int_content(a).get_mpz_t(),
            zu_int_content(b).get_mpz_t());
    zu_make_primitive(a);
    zu_make_primitive(b);
    if (zu_deg(a) == 0 || zu_deg(b) == 0) return ZU{c};
    if (zu_deg(a) < zu_deg(b)) std::swap(a, b);
    while (!b.empty()) {
        ZU r = zu_prem(a, b);
        zu_make_primitive(r);
        a = std::move(b);
        b = std::move(r);
    }
    if (c != 1)
        for (auto& x : a) x *= c;
    return a;
}

void zb_trim(ZB& p) {
    while (!p.empty() && p.back().empty()) p.pop_back();
}

int zb_deg(const ZB& p) { return (int)p.size() - 1; }

// Scale by the lcm of the coefficient denominators (a rational unit, so the
// gcd is unchanged up to the final normalization).
ZB zb_of(const QTPoly& p) {
    Int l = 1;
    for (const auto& [m, c] : p.terms())
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    ZB r;
    for (const auto& [m, c] : p.terms()) {
        if ((int)r.size() <= m.qe2) r.resize(m.qe2 + 1);
        ZU& u = r[m.qe2];
        if ((int)u.size() <= m.te2) u.resize(m.te2 + 1, Int(0));
        u[m.te2] = c.get_num() * (l / c.get_den());
    }
    for (auto& u : r) zu_trim(u);
    zb_trim(r);
    return r;
}

QTPoly from_zb(const ZB& p) {
    std::vector<QTPoly::Term> terms;
    for (int i = 0; i < (int)p.size(); ++i)
        for (int j = 0; j < (int)p[i].size(); ++j)
            if (p[i][j] != 0) terms.push_back({{i, j}, Rat(p[i][j])});
    return QTPoly::from_terms(std::move(terms));
}

// Full content: gcd in Z[T] of all the Q-coefficients.
ZU zb_content(const ZB& p) {
    ZU g;
    for (const auto& u : p) {
        if (u.empty()) continue;
        g = zu_gcd(std::move(g), u);
        if (zu_is_one(g)) break;
    }
    return g;
}

ZB zb_divexact_zu(ZB p, const ZU& c) {
    if (zu_is_one(c)) return p;
    for (auto& u : p)
        if (!u.empty()) u = zu_divexact(std::move(u), c);
    return p;
}

// Pseudo-remainder in the Q variable; content is stripped by the caller.
ZB zb_prem(ZB a, const ZB& b) {
    const ZU& lb = b.back();
    while (!a.empty() && zb_deg(a) >= zb_deg(b)) {
        ZU la = a.back();
        int sh = zb_deg(a) - zb_deg(b);
        // a = a*lb - b*la*Q^sh
        for (auto& u : a) u = zu_mul(u, lb);
        for (int i = 0; i < (int)b.size(); ++i)
            a[i + sh] = zu_sub(a[i + sh], zu_mul(b[i], la));
        zb_trim(a);
    }
    return a;
}

Int zu_eval(const ZU& p, long tau) {
    Int r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * tau + *it;
    return r;
}

int zb_deg_t(const ZB& p) {
    int d = 0;
    for (const auto& u : p) d = std::max(d, zu_deg(u));
    return d;
}

// Substitute an integer for T: the result is a polynomial in Q alone,
// reusing the ZU layout with the index read as the Q exponent.
ZU zb_eval_t(const ZB& p, long tau) {
    ZU r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = zu_eval(p[i], tau);
    zu_trim(r);
    return r;
}

using QU = std::vector<Rat>;  // univariate over the rationals, index = T exp

Rat qu_eval(const QU& p, long tau) {
    Rat r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * tau + *it;
    return r;
}

// Divisibility test by lex leading-term elimination with a work budget, so a
// wrong candidate cannot send the remainder into exponential coefficient
// growth.  A true divisor finishes within the budget: every step emits one
// quotient term, and quotient monomials live in the dividend's exponent box.
bool qt_divides_bounded(const QTPoly& a, const QTPoly& b) {
    QTMono da = a.max_exps();
    long budget = (long)(da.qe2 + 1) * (da.te2 + 1) + 16;
    std::size_t max_terms = 8 * a.terms().size() + 256;
    QTPoly r = a;
    const auto& [bm, bc] = b.lead();
    while (!r.is_zero()) {
        const auto& [rm, rc] = r.lead();
        QTMono d = rm - bm;
        if (d.qe2 < 0 || d.te2 < 0) return false;
        if (--budget < 0 || r.terms().size() > max_terms) return false;
        r -= b.mul_mono(d).mul_scalar(rc / bc);
    }
    return true;
}

// Modular bivariate gcd (Brown): evaluate T at distinct integers, take
// univariate gcds over Q, and rebuild the T-dependence by Newton
// interpolation, correcting leading coefficients with gcd(lc A, lc B).
// Inputs must be nonzero and free of Z[T] content.  Returns the gcd of the
// primitive parts up to a rational unit, or nullopt when the point budget
// runs out (degenerate inputs), in which case the caller falls back to the
// remainder sequence.  The payoff over the remainder sequence is that
// coprime inputs -- the overwhelmingly common case -- are detected with a
// single cheap univariate gcd, and nontrivial gcds never suffer
// pseudo-remainder coefficient swell.
std::optional<QTPoly> zb_gcd_modular(const ZB& A, const ZB& B) {
    ZU gamma = zu_gcd(A.back(), B.back());
    const int bound = std::min(zb_deg_t(A), zb_deg_t(B)) + zu_deg(gamma) + 2;
    const long budget = 2L * (zb_deg_t(A) + zb_deg_t(B)) + 16;

    int dq = INT_MAX;          // gcd degree in Q seen so far
    std::vector<QU> G;         // interpolated coefficients, index = Q exp
    QU M{Rat(1)};              // prod (T - tau_j) over accepted points
    int npts = 0;
    QTPoly pa, pb;
    bool ab_built = false;

    for (long step = 0; step < budget; ++step) {
        long tau = (step % 2 == 0) ? step / 2 + 1 : -(step / 2 + 1);
        if (zu_eval(A.back(), tau) == 0 || zu_eval(B.back(), tau) == 0) continue;
        ZU g = zu_gcd(zb_eval_t(A, tau), zb_eval_t(B, tau));
        zu_make_primitive(g);
        if (zu_deg(g) == 0) return QTPoly::one();
        if (zu_deg(g) > dq) continue;  // unlucky point, image too large
        if (zu_deg(g) < dq) {          // previous points were all unlucky
            dq = zu_deg(g);
            G.assign(dq + 1, QU{});
            M = {Rat(1)};
            npts = 0;
        }
        Int gam = zu_eval(gamma, tau);  // nonzero: gamma divides lc A
        bool settled = npts > 0;
        std::vector<Rat> diff(dq + 1);
        for (int i = 0; i <= dq; ++i) {
            diff[i] = Rat(gam * g[i]) / Rat(g.back()) - qu_eval(G[i], tau);
            if (diff[i] != 0) settled = false;
        }
        if (!settled) {
            Rat mval = qu_eval(M, tau);
            for (int i = 0; i <= dq; ++i) {
                if (diff[i] == 0) continue;
                Rat c = diff[i] / mval;
                if (G[i].size() < M.size()) G[i].resize(M.size(), Rat(0));
                for (std::size_t j = 0; j < M.size(); ++j) G[i][j] += c * M[j];
            }
        }
        // M *= (T - tau)
        M.insert(M.begin(), Rat(0));
        for (std::size_t j = 0; j + 1 < M.size(); ++j) M[j] -= Rat(tau) * M[j + 1];
        ++npts;
        if (settled || npts > bound) {
            // clear denominators, strip content, and verify by trial division
            Int l = 1;
            for (const auto& u : G)
                for (const auto& c : u)
                    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
            ZB W(G.size());
            for (std::size_t i = 0; i < G.size(); ++i) {
                W[i].resize(G[i].size());
                for (std::size_t j = 0; j < G[i].size(); ++j)
                    W[i][j] = G[i][j].get_num() * (l / G[i][j].get_den());
                zu_trim(W[i]);
            }
            zb_trim(W);
            if (W.empty()) continue;
            W = zb_divexact_zu(std::move(W), zb_content(W));
            QTPoly cand = from_zb(W);
            // The inputs carry no monomial factor, so neither can the gcd;
            // also, divexact's monomial fast path would not verify
            // divisibility.  Reject such candidates outright.
            QTMono cm = cand.min_exps();
            if (cm.qe2 == 0 && cm.te2 == 0 && !cand.is_mono()) {
                // cheap screen at a fresh point before the bivariate division
                long pre = 65537;
                while (zu_eval(A.back(), pre) == 0 || zu_eval(W.back(), pre) == 0)
                    ++pre;
                ZU w_pre = zb_eval_t(W, pre);
                if (!zu_prem(zb_eval_t(A, pre), w_pre).empty() ||
                    !zu_prem(zb_eval_t(B, pre), w_pre).empty())
                    continue;
                if (!ab_built) {
                    pa = from_zb(A);
                    pb = from_zb(B);
                    ab_built = true;
                }
                if (qt_divides_bounded(pa, cand) && qt_divides_bounded(pb, cand))
                    return cand;
            }
        }
    }
    return std::nullopt;
}

}  // namespace

QTPoly gcd_poly(const QTPoly& a, const QTPoly& b) {
    auto norm_lead = [](QTPoly p) {
        if (p.is_zero()) return p;
        Rat lc = p.lead().second;
        return p.mul_scalar(Rat(1) / lc);
    };
    if (a.is_zero()) return norm_lead(b);
    if (b.is_zero()) return norm_lead(a);
    if (a.is_mono() || b.is_mono()) {
        QTMono ma = a.min_exps(), mb = b.min_exps();
        return QTPoly::mono(std::min(ma.qe2, mb.qe2), std::min(ma.te2, mb.te2), 1);
    }
    // common monomial factor
    QTMono ma = a.min_exps(), mb = b.min_exps();
    QTMono common{std::min(ma.qe2, mb.qe2), std::min(ma.te2, mb.te2)};

    ZB A = zb_of(a.mul_mono({-ma.qe2, -ma.te2}));
    ZB B = zb_of(b.mul_mono({-mb.qe2, -mb.te2}));
    ZU ca = zb_content(A), cb = zb_content(B);
    ZU cg = zu_gcd(ca, cb);
    A = zb_divexact_zu(std::move(A), ca);
    B = zb_divexact_zu(std::move(B), cb);
    if (zb_deg(A) < zb_deg(B)) std::swap(A, B);
    QTPoly result;
    if (auto g = zb_gcd_modular(A, B)) {
        result = std::move(*g);
    } else {
        // primitive remainder sequence fallback
        while (!B.empty()) {
            ZB R = zb_prem(std::move(A), B);
            if (!R.empty()) R = zb_divexact_zu(std::move(R), zb_content(R));
            A = std::move(B);
            B = std::move(R);
        }
        // A is the gcd of the primitive parts: each step preserved primitivity.
        result = from_zb(A);
    }
    if (zu_deg(cg) > 0) {
        // multiply back the content gcd (a polynomial in T alone); a constant
        // content is a unit over the rationals and is dropped.
        std::vector<QTPoly::Term> ct;
        for (int j = 0; j < (int)cg.size(); ++j)
            if (cg[j] != 0) ct.push_back({{0, j}, Rat(cg[j])});
        result = result * QTPoly::from_terms(std::move(ct));
    }
    result = result.mul_mono(common);
    return norm_lead(result);
}

// --------------------------------------------------------------------------
// QTRational
// --------------------------------------------------------------------------

QTRational::QTRational(const Rat& v) : num_(QTPoly::mono(0, 0, v)), den_(QTPoly::one()) {}

QTRational::QTRational(QTPoly n, QTPoly d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero()) throw MathError("division by zero polynomial");
    normalize();
}

QTRational QTRational::from_poly(QTPoly n) { return QTRational(std::move(n), QTPoly::one()); }

QTRational QTRational::mono(int qe2, int te2, Rat c) {
    return from_poly(QTPoly::mono(qe2, te2, std::move(c)));
}

void QTRational::normalize() {
    if (num_.is_zero()) {
        den_ = QTPoly::one();
        return;
    }
    // make den a true polynomial with min exponents 0
    QTMono md = den_.min_exps();
    if (md.qe2 != 0 || md.te2 != 0) {
        den_ = den_.mul_mono({-md.qe2, -md.te2});
        num_ = num_.mul_mono({-md.qe2, -md.te2});
    }
    if (!den_.is_one()) {
        QTMono mn = num_.min_exps();
        QTPoly num0 = num_.mul_mono({-mn.qe2, -mn.te2});
        QTPoly g = gcd_poly(num0, den_);
        if (!g.is_one()) {
            num0 = divexact(num0, g);
            den_ = divexact(den_, g);
        }
        QTMono md2 = den_.min_exps();
        if (md2.qe2 != 0 || md2.te2 != 0) {
            den_ = den_.mul_mono({-md2.qe2, -md2.te2});
            mn = mn - md2;
        }
        num_ = num0.mul_mono(mn);
    }
    Rat lc = den_.lead().second;
    if (lc != 1) {
        den_ = den_.mul_scalar(Rat(1) / lc);
        num_ = num_.mul_scalar(Rat(1) / lc);
    }
}

QTRational QTRational::operator-() const {
    QTRational r = *this;
    r.num_ = -r.num_;
    return r;
}

QTRational QTRational::operator+(const QTRational& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        QTPoly n = num_ + o.num_;
        if (n.is_zero()) return QTRational();
        if (den_.is_one()) return from_poly(std::move(n));
        return QTRational(std::move(n), den_);
    }
    // Unequal canonical denominators: reduce against gcd(den, o.den) only.
    // Any prime shared by the sum's numerator and denominator must divide
    // that gcd, because each operand is reduced and den/g, o.den/g are
    // coprime, so the quadratic-size gcd of the naive cross product is
    // never needed.
    QTPoly g = den_.is_one() || o.den_.is_one() ? QTPoly::one()
                                                : gcd_poly(den_, o.den_);
    QTRational r;
    if (g.is_one()) {
        r.num_ = num_ * o.den_ + o.num_ * den_;
        r.den_ = den_ * o.den_;
        return r;
    }
    QTPoly da = divexact(den_, g), db = divexact(o.den_, g);
    QTPoly t = num_ * db + o.num_ * da;
    if (t.is_zero()) return QTRational();
    QTMono mt = t.min_exps();
    QTPoly t0 = t.mul_mono({-mt.qe2, -mt.te2});
    QTPoly g2 = gcd_poly(t0, g);
    if (g2.is_one()) {
        r.num_ = std::move(t);
        r.den_ = den_ * db;
    } else {
        r.num_ = divexact(t0, g2).mul_mono(mt);
        r.den_ = divexact(g, g2) * da * db;
    }
    return r;
}

QTRational QTRational::operator-(const QTRational& o) const { return *this + (-o); }

QTRational QTRational::operator*(const QTRational& o) const {
    if (is_zero() || o.is_zero()) return QTRational();
    if (is_one()) return o;
    if (o.is_one()) return *this;
    // Cross-cancel before multiplying.  Each operand is reduced, so after
    // cancelling gcd(num, o.den) and gcd(o.num, den) the product is reduced
    // as well, and no gcd of the full-size product is required.
    QTMono ma = num_.min_exps();
    QTPoly na = num_.mul_mono({-ma.qe2, -ma.te2});
    QTMono mb = o.num_.min_exps();
    QTPoly nb = o.num_.mul_mono({-mb.qe2, -mb.te2});
    QTPoly da = den_, db = o.den_;
    if (!db.is_one() && !na.is_mono()) {
        QTPoly g = gcd_poly(na, db);
        if (!g.is_one()) {
            na = divexact(na, g);
            db = divexact(db, g);
        }
    }
    if (!da.is_one() && !nb.is_mono()) {
        QTPoly g = gcd_poly(nb, da);
        if (!g.is_one()) {
            nb = divexact(nb, g);
            da = divexact(da, g);
        }
    }
    QTRational r;
    r.num_ = (na * nb).mul_mono(ma + mb);
    r.den_ = da * db;
    return r;
}

QTRational QTRational::operator/(const QTRational& o) const {
    if (o.is_zero()) throw MathError("division by zero");
    if (is_zero()) return QTRational();
    return *this * o.inv();
}

QTRational QTRational::inv() const {
    if (is_zero()) throw MathError("inverse of zero");
    // num and den are coprime already; swap them and restore the canonical
    // denominator shape (true polynomial, minimal exponents 0, +1 lead).
    QTMono mn = num_.min_exps();
    QTRational r;
    r.den_ = num_.mul_mono({-mn.qe2, -mn.te2});
    r.num_ = den_.mul_mono({-mn.qe2, -mn.te2});
    Rat lc = r.den_.lead().second;
    if (lc != 1) {
        r.den_ = r.den_.mul_scalar(Rat(1) / lc);
        r.num_ = r.num_.mul_scalar(Rat(1) / lc);
    }
    return r;
}

QTRational QTRational::pow(long e) const {
    if (e == 0) return QTRational(1);
    QTRational base = e < 0 ? inv() : *this;
    unsigned long n = e < 0 ? -(unsigned long)e : (unsigned long)e;
    QTRational acc(1);
    while (n) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

int QTRational::deg_se2() const {
    if (is_zero()) throw MathError("deg_se of zero");
    return num_.deg_se2() - den_.deg_se2();
}

int QTRational::deg_nw2() const {
    if (is_zero()) throw MathError("deg_nw of zero");
    return num_.deg_nw2() - den_.deg_nw2();
}

QTRational QTRational::hd() const {
    if (is_zero()) throw MathError("hd of zero");
    if (!is_laurent()) throw MathError("hd requires a Laurent polynomial");
    return QTRational(num_.hd(), den_);
}

QTRational QTRational::ld() const {
    if (is_zero()) throw MathError("ld of zero");
    if (!is_laurent()) throw MathError("ld requires a Laurent polynomial");
    return QTRational(num_.ld(), den_);
}

QTRational QTRational::hd_ratio() const {
    if (is_zero()) throw MathError("hd of zero");
    return QTRational(num_.hd(), den_.hd());
}

QTRational QTRational::ld_ratio() const {
    if (is_zero()) throw MathError("ld of zero");
    return QTRational(num_.ld(), den_.ld());
}

Rat QTRational::eval(const Rat& u, const Rat& v) const {
    Rat d = den_.eval(u, v);
    if (d == 0) throw MathError("eval: pole at the requested point");
    return num_.eval(u, v) / d;
}

}  // namespace qtsf
