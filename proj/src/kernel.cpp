#include "qtsf/kernel.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <utility>

#include "qtsf/eps.hpp"
#include "qtsf/errors.hpp"

namespace qtsf {

namespace {

long floor_div(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

int gcd_pos(int a, int b) { return std::gcd(a < 0 ? -a : a, b); }

Rat rat_pow(const Rat& x, long e) {
    if (e == 0) return 1;
    if (x == 0) {
        if (e < 0) throw MathError("zero to a negative power");
        return 0;
    }
    Rat acc = 1, base = x;
    unsigned long k = e < 0 ? -(unsigned long)e : (unsigned long)e;
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    if (e < 0) acc = Rat(1) / acc;
    return acc;
}

// ---------------------------------------------------------------------------
// generic term engine over a coefficient field C (QTRational or Rat)
// ---------------------------------------------------------------------------

// Accumulates one pre-symmetrization term as an exact rational function of
// the auxiliary variable: a scalar * eps^shift, a numerator polynomial, and
// a list of denominator factors.  Binomial factors arrive as
// a*eps^da + b*eps^db; the minimal exponent is normalized away into `shift`.
template <class C>
class TermBuilder {
  public:
    using EP = EpsPoly<C>;

    bool dead() const { return dead_; }

    void mul_mono(C c, long d) {
        if (dead_) return;
        if (c == C(0)) {
            dead_ = true;
            return;
        }
        scalar_ = scalar_ * c;
        shift_ += d;
    }

    void mul_binom_num(C a, int da, C b, int db) {
        if (dead_) return;
        EP p = make(std::move(a), da, std::move(b), db, shift_);
        if (p.is_zero()) {
            dead_ = true;
            return;
        }
        num_ = num_ * p;
    }

    // Multi-term numerator factor (the geometric sum of the P core).
    void mul_poly_num(const std::vector<std::pair<C, int>>& terms) {
        if (dead_) return;
        int lo = terms.front().second, hi = lo;
        for (const auto& [c, d] : terms) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        std::vector<C> cs(hi - lo + 1, C(0));
        for (const auto& [c, d] : terms) cs[d - lo] = cs[d - lo] + c;
        shift_ += lo;
        EP p = EP::from_coeffs(std::move(cs));
        if (p.is_zero()) {
            dead_ = true;
            return;
        }
        num_ = num_ * p;
    }

    void mul_binom_den(C a, int da, C b, int db) {
        if (dead_) return;
        long neg = 0;
        EP p = make(std::move(a), da, std::move(b), db, neg);
        shift_ -= neg;
        if (p.is_zero())
            throw PoleAtTarget(
                "kernel denominator factor vanishes identically at the point");
        dens_.push_back(std::move(p));
    }

    EpsRat<C> build() && {
        if (dead_) return EpsRat<C>::zero();
        EpsRat<C> r(num_.mul_scalar(scalar_));
        if (shift_ > 0)
            r = r.mul_poly(EP::term(C(1), (int)shift_));
        else if (shift_ < 0)
            r = r.div_poly(EP::term(C(1), 1), (int)-shift_);
        for (auto& f : dens_) r = r.div_poly(std::move(f), 1);
        return r;
    }

  private:
    // a*eps^da + b*eps^db as eps^s * p with p(0) != 0; s accumulates into io.
    static EP make(C a, int da, C b, int db, long& io) {
        if (da == db) {
            io += da;
            return EP(a + b);
        }
        int s = std::min(da, db);
        io += s;
        std::vector<C> cs(std::max(da, db) - s + 1, C(0));
        cs[da - s] = std::move(a);
        cs[db - s] = std::move(b);
        return EP::from_coeffs(std::move(cs));
    }

    bool dead_ = false;
    C scalar_{1};
    long shift_ = 0;
    EP num_ = EP::one();
    std::vector<EP> dens_;
};

// Balanced pairwise accumulation keeps intermediate common denominators
// shallow; the association order is fixed, so results are deterministic.
template <class C>
class Accum {
  public:
    void add(EpsRat<C> x) {
        for (std::size_t i = 0;; ++i) {
            if (i == slots_.size()) {
                slots_.push_back(std::move(x));
                return;
            }
            if (!slots_[i]) {
                slots_[i] = std::move(x);
                return;
            }
            x = *slots_[i] + x;
            slots_[i].reset();
        }
    }
    EpsRat<C> total() && {
        EpsRat<C> r = EpsRat<C>::zero();
        for (auto& s : slots_)
            if (s) r = r + *s;
        return r;
    }

  private:
    std::vector<std::optional<EpsRat<C>>> slots_;
};

// ---------------------------------------------------------------------------
// truncated series in delta = eps - 1
//
// A limit at eps = 1 only needs each term's Laurent coefficients for
// delta^{order}..delta^0, so instead of carrying exact rational functions of
// eps we expand every factor as a short power series around delta = 0.  A
// factor sum_i c_i eps^{d_i} has delta^j coefficient sum_i c_i binom(d_i, j),
// and its valuation is bounded by its number of terms, so both the valuation
// and the truncated unit part are cheap to read off.
// ---------------------------------------------------------------------------

// Valuation at delta = 0 of sum_i c_i (1+delta)^{d_i} over distinct d_i with
// c_i != 0, or -1 when the sum is identically zero.  A nonzero sum with T
// terms cannot vanish to order T: the falling-factorial matrix over distinct
// exponents is invertible.
template <class C>
int entries_val(const std::vector<std::pair<C, long>>& entries) {
    const int T = (int)entries.size();
    for (int j = 0; j < T; ++j) {
        C s(0);
        for (const auto& [c, d] : entries) {
            Rat bc = 1;
            for (int i = 1; i <= j; ++i) {
                bc *= d - (i - 1);
                bc /= i;
            }
            if (bc != 0) s = s + c * C(bc);
        }
        if (!(s == C(0))) return j;
    }
    return -1;
}

// First L coefficients of the unit part u(delta), where the factor equals
// delta^val * u(delta) with u(0) != 0.
template <class C>
std::vector<C> unit_series(const std::vector<std::pair<C, long>>& entries, int val,
                           int L) {
    std::vector<C> u(L, C(0));
    for (const auto& [c, d] : entries) {
        Rat bc = 1;  // binom(d, j), stepped from j = val
        for (int j = 1; j <= val; ++j) {
            bc *= d - (j - 1);
            bc /= j;
        }
        for (int j = 0; j < L; ++j) {
            if (bc != 0) u[j] = u[j] + c * C(bc);
            bc *= d - (val + j);
            bc /= val + j + 1;
        }
    }
    return u;
}

// a := a * b, truncated to a.size() coefficients.
template <class C>
void ts_mul(std::vector<C>& a, const std::vector<C>& b) {
    const int L = (int)a.size();
    std::vector<C> r(L, C(0));
    for (int i = 0; i < L; ++i) {
        if (a[i] == C(0)) continue;
        for (int j = 0; i + j < L; ++j) {
            if (b[j] == C(0)) continue;
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    a = std::move(r);
}

// Power series inverse of d (with d[0] != 0), to d.size() coefficients.
template <class C>
std::vector<C> ts_inv(const std::vector<C>& d) {
    const int L = (int)d.size();
    std::vector<C> r(L, C(0));
    C lead = C(1) / d[0];
    r[0] = lead;
    for (int i = 1; i < L; ++i) {
        C s(0);
        for (int j = 1; j <= i; ++j)
            if (!(d[j] == C(0))) s = s + d[j] * r[i - j];
        r[i] = C(0) - s * lead;
    }
    return r;
}

// One pre-symmetrization term, recorded factor by factor.  Valuations are
// computed on arrival, so the term's total order at delta = 0 is known before
// any series is materialized; window() then expands just the coefficients
// delta^{order}..delta^0 that can survive in the symmetrized sum.  Monomial
// factors fold into a scalar prefactor, keeping the series coefficients small.
template <class C>
class SeriesTerm {
  public:
    bool dead() const { return dead_; }
    long order() const { return ord_; }

    void mul_mono(C c, long d) {
        if (dead_) return;
        if (c == C(0)) {
            dead_ = true;
            return;
        }
        scalar_ = scalar_ * c;
        sdeg_ += d;
    }

    void mul_binom_num(C a, int da, C b, int db) {
        if (dead_) return;
        push(true, binom_entries(std::move(a), da, std::move(b), db));
    }

    void mul_poly_num(const std::vector<std::pair<C, int>>& terms) {
        if (dead_) return;
        int lo = terms.front().second, hi = lo;
        for (const auto& [c, d] : terms) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        std::vector<C> cs(hi - lo + 1, C(0));
        for (const auto& [c, d] : terms) cs[d - lo] = cs[d - lo] + c;
        std::vector<std::pair<C, long>> e;
        for (int i = 0; i <= hi - lo; ++i)
            if (!(cs[i] == C(0))) e.push_back({std::move(cs[i]), lo + i});
        push(true, std::move(e));
    }

    void mul_binom_den(C a, int da, C b, int db) {
        if (dead_) return;
        push(false, binom_entries(std::move(a), da, std::move(b), db));
    }

    // Exact coefficients of delta^{order}..delta^0; empty when the term
    // cannot contribute at or below delta^0.
    std::vector<C> window() const {
        if (dead_ || ord_ > 0) return {};
        const int L = (int)(1 - ord_);
        std::vector<C> acc = unit_series(
            std::vector<std::pair<C, long>>{{scalar_, sdeg_}}, 0, L);
        for (const auto& f : num_) ts_mul(acc, unit_series(f.entries, f.val, L));
        if (!den_.empty()) {
            std::vector<C> den(L, C(0));
            den[0] = C(1);
            for (const auto& f : den_) ts_mul(den, unit_series(f.entries, f.val, L));
            ts_mul(acc, ts_inv(den));
        }
        return acc;
    }

  private:
    struct Factor {
        std::vector<std::pair<C, long>> entries;
        int val;
    };

    static std::vector<std::pair<C, long>> binom_entries(C a, int da, C b, int db) {
        std::vector<std::pair<C, long>> e;
        if (da == db) {
            C s = a + b;
            if (!(s == C(0))) e.push_back({std::move(s), da});
        } else {
            if (!(a == C(0))) e.push_back({std::move(a), da});
            if (!(b == C(0))) e.push_back({std::move(b), db});
        }
        return e;
    }

    void push(bool numerator, std::vector<std::pair<C, long>> e) {
        if (e.empty()) {
            if (numerator) {
                dead_ = true;
                return;
            }
            throw PoleAtTarget(
                "kernel denominator factor vanishes identically at the point");
        }
        if (e.size() == 1) {  // monomial factor: fold into the prefactor
            auto& [c, d] = e.front();
            if (numerator) {
                scalar_ = scalar_ * c;
                sdeg_ += d;
            } else {
                scalar_ = scalar_ / c;
                sdeg_ -= d;
            }
            return;
        }
        int v = entries_val(e);
        if (v < 0) {
            if (numerator) {
                dead_ = true;
                return;
            }
            throw PoleAtTarget(
                "kernel denominator factor vanishes identically at the point");
        }
        if (numerator) {
            ord_ += v;
            num_.push_back({std::move(e), v});
        } else {
            ord_ -= v;
            den_.push_back({std::move(e), v});
        }
    }

    bool dead_ = false;
    C scalar_{1};
    long sdeg_ = 0;  // eps exponent carried by monomial factors
    long ord_ = 0;
    std::vector<Factor> num_, den_;
};

// acc[i] accumulates the delta^{-i} coefficient of the symmetrized sum.
template <class C>
void add_window(std::vector<C>& acc, const SeriesTerm<C>& st) {
    if (st.dead() || st.order() > 0) return;
    std::vector<C> win = st.window();  // delta^{order} .. delta^0
    if (acc.size() < win.size()) acc.resize(win.size(), C(0));
    for (std::size_t j = 0; j < win.size(); ++j)
        if (!(win[j] == C(0))) {
            std::size_t i = win.size() - 1 - j;
            acc[i] = acc[i] + win[j];
        }
}

// The summed negative-degree coefficients must cancel; delta^0 is the limit.
template <class C>
C finish_limit(std::vector<C> acc) {
    for (std::size_t i = 1; i < acc.size(); ++i)
        if (!(acc[i] == C(0)))
            throw PoleAtTarget("kernel sum has a pole at the evaluation point");
    return acc.empty() ? C(0) : std::move(acc[0]);
}

// Shared evaluator: precomputed pair tables over the site list, one method
// per symmetrization term.  Sites are (weight value, auxiliary exponent).
template <class C>
class Engine {
  public:
    Engine(const ShuffleKernel& kernel, std::vector<C> weights, std::vector<int> groups,
           C qv, C tv)
        : K_(kernel),
          q_(std::move(qv)),
          t_(std::move(tv)),
          w_(std::move(weights)),
          g_(std::move(groups)) {
        const int S = (int)w_.size();  // sites available (>= slots)
        const int N = K_.vars();
        rexp_.resize(N + 1);
        for (int i = 1; i <= N; ++i) rexp_[i] = staircase_exp(K_.m, K_.n, i);
        wpow_.assign(S, std::vector<C>(N + 1, C(1)));
        for (int s = 0; s < S; ++s)
            for (int i = 1; i <= N; ++i)
                if (rexp_[i]) wpow_[s][i] = c_pow(w_[s], rexp_[i]);
        neg_ratio_.assign(S, std::vector<C>(S, C(0)));
        neg_ratio_q_.assign(S, std::vector<C>(S, C(0)));
        neg_chain_.assign(S, std::vector<C>(S, C(0)));
        for (int a = 0; a < S; ++a)
            for (int b = 0; b < S; ++b) {
                if (a == b) continue;
                C r = w_[a] / w_[b];
                neg_ratio_q_[a][b] = C(0) - r * q_;
                neg_chain_[a][b] = C(0) - r * t_ / q_;
                neg_ratio_[a][b] = C(0) - std::move(r);
            }
        core_inv_.resize(K_.k);
        for (int i = 1; i < K_.k; ++i)
            core_inv_[i] = C(1) / (q_ * c_pow(t_, i - 1));
    }

    const ShuffleKernel& kernel() const { return K_; }
    const C& q() const { return q_; }
    const C& t() const { return t_; }

    // [(1-t)(1-q)/(t-q)]^N divided by the sigma-independent core constants.
    C const_scale() const {
        const int N = K_.vars(), k = K_.k;
        C pref = c_pow((C(1) - t_) * (C(1) - q_) / (t_ - q_), N);
        if (K_.family == KernelFamily::E) {
            C tfact(1);
            for (int x = 1; x <= k; ++x) tfact = tfact * (c_pow(t_, 1 - x) - t_);
            return pref / tfact;
        }
        return pref / (C(1) - c_pow(t_, k));
    }

    // Emit the factors of one arrangement (slot p <- site idx[p]) into a
    // sink, omitting the prefactor and the sigma-independent constants.
    template <class Sink>
    void emit_term(std::span<const int> idx, Sink& tb) const {
        const int N = K_.vars(), k = K_.k, n = K_.n;
        for (int p = 0; p < N; ++p)
            if (rexp_[p + 1])
                tb.mul_mono(wpow_[idx[p]][p + 1], (long)g_[idx[p]] * rexp_[p + 1]);
        for (int p = 0; p + 1 < N; ++p) {
            int a = idx[p], b = idx[p + 1];
            tb.mul_binom_den(C(1), 0, neg_chain_[a][b], g_[a] - g_[b]);
        }
        if (K_.family == KernelFamily::E) {
            for (int i = 1; i < k && !tb.dead(); ++i) {
                int a = idx[i * n - 1], b = idx[i * n];
                tb.mul_binom_num(C(1), 0, C(0) - w_[a] / w_[b] * core_inv_[i],
                                 g_[a] - g_[b]);
            }
        } else {
            std::vector<std::pair<C, int>> geo;
            geo.reserve(k);
            C coeff(1);
            int d = 0;
            geo.push_back({coeff, d});
            for (int i = 1; i < k; ++i) {
                int a = idx[i * n - 1], b = idx[i * n];
                coeff = coeff * t_ / q_ * w_[a] / w_[b];
                d += g_[a] - g_[b];
                geo.push_back({coeff, d});
            }
            tb.mul_poly_num(geo);
        }
        for (int pa = 0; pa < N && !tb.dead(); ++pa)
            for (int pb = pa + 1; pb < N; ++pb) {
                emit_omega(idx[pa], idx[pb], tb);
                if (tb.dead()) break;
            }
    }

    // The pairing factors for site a ordered before site b.
    template <class Sink>
    void emit_omega(int a, int b, Sink& tb) const {
        int d = g_[a] - g_[b];
        tb.mul_binom_num(C(1), 0, neg_ratio_q_[a][b], d);
        tb.mul_binom_num(t_, 0, neg_ratio_[a][b], d);
        if (tb.dead()) return;
        tb.mul_binom_den(C(1), 0, neg_ratio_[a][b], d);
        tb.mul_binom_den(t_, 0, neg_ratio_q_[a][b], d);
    }

    // The term for one arrangement as an exact rational function of eps.
    EpsRat<C> term(const std::vector<int>& idx) const {
        TermBuilder<C> tb;
        emit_term(idx, tb);
        return std::move(tb).build();
    }

    // Sum of term() over all arrangements of the given site indices.
    EpsRat<C> sum_over(std::vector<int> idx) const {
        check_arity(idx.size());
        std::sort(idx.begin(), idx.end());
        Accum<C> acc;
        do
            acc.add(term(idx));
        while (std::next_permutation(idx.begin(), idx.end()));
        return std::move(acc).total();
    }

    // Value at eps = 1 of the sum over all arrangements, via truncated
    // series in delta = eps - 1; per-term poles must cancel across the sum.
    C sum_limit(std::vector<int> idx) const {
        check_arity(idx.size());
        std::sort(idx.begin(), idx.end());
        std::vector<C> acc;
        do {
            SeriesTerm<C> st;
            emit_term(idx, st);
            add_window(acc, st);
        } while (std::next_permutation(idx.begin(), idx.end()));
        return finish_limit(std::move(acc));
    }

    // Value at eps = 1 of a single arrangement term (no cancellation partner).
    C term_limit(const std::vector<int>& idx) const {
        SeriesTerm<C> st;
        emit_term(std::span<const int>(idx), st);
        std::vector<C> acc;
        add_window(acc, st);
        return finish_limit(std::move(acc));
    }

  private:
    void check_arity(std::size_t got) const {
        if ((int)got != K_.vars())
            throw UsageError("kernel arity mismatch: " + K_.descriptor() + " needs " +
                             std::to_string(K_.vars()) + " boxes, got " +
                             std::to_string(got));
    }

    ShuffleKernel K_;
    C q_, t_;
    std::vector<C> w_;
    std::vector<int> g_;
    std::vector<int> rexp_;                     // 1-based staircase exponents
    std::vector<std::vector<C>> wpow_;          // [site][slot] w^rexp
    std::vector<std::vector<C>> neg_ratio_;     // -(w_a / w_b)
    std::vector<std::vector<C>> neg_ratio_q_;   // -(w_a / w_b) q
    std::vector<std::vector<C>> neg_chain_;     // -(w_a / w_b) t / q
    std::vector<C> core_inv_;                   // 1 / (q t^{i-1})
};

Engine<QTRational> symbolic_engine(const ShuffleKernel& kernel, const EvaluationPoint& pt) {
    std::vector<QTRational> w;
    std::vector<int> g;
    for (const auto& b : pt.boxes()) {
        w.push_back(QTRational::mono(b.weight.qe2, b.weight.te2));
        g.push_back(b.group);
    }
    return {kernel, std::move(w), std::move(g), QTRational::q(), QTRational::t()};
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

Rat factorial(int n) {
    Rat r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

Rat rand_rat(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    int a = 0;
    while (a == 0) a = num(rng);
    Rat r(a, den(rng));
    r.canonicalize();
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// ShuffleKernel, staircase, omega
// ---------------------------------------------------------------------------

ShuffleKernel::ShuffleKernel(KernelFamily fam, int kk, int mm, int nn)
    : family(fam), k(kk), m(mm), n(nn) {
    if (k < 1) throw UsageError("kernel multiplicity k must be >= 1");
    if (n < 1) throw UsageError("kernel slope denominator n must be >= 1");
    if (gcd_pos(m, n) != 1)
        throw UsageError("kernel slope " + std::to_string(m) + "/" + std::to_string(n) +
                         " is not in lowest terms");
}

std::string ShuffleKernel::descriptor() const {
    std::string f = family == KernelFamily::P ? "P" : "E";
    return f + "[k=" + std::to_string(k) + ",m=" + std::to_string(m) +
           ",n=" + std::to_string(n) + "]";
}

ShuffleKernel ShuffleKernel::parse(const std::string& text) {
    char fam = 0;
    int k = 0, m = 0, n = 0;
    if (std::sscanf(text.c_str(), "%c[k=%d,m=%d,n=%d]", &fam, &k, &m, &n) != 4 ||
        (fam != 'P' && fam != 'E'))
        throw UsageError("bad kernel descriptor: " + text);
    ShuffleKernel K(fam == 'P' ? KernelFamily::P : KernelFamily::E, k, m, n);
    if (K.descriptor() != text) throw UsageError("bad kernel descriptor: " + text);
    return K;
}

int staircase_exp(int m, int n, int i) {
    if (n < 1 || i < 1) throw UsageError("staircase_exp needs n >= 1, i >= 1");
    return (int)(ceil_div((long)m * i, n) - ceil_div((long)m * (i - 1), n));
}

QTRational omega_qt(const QTRational& x) {
    QTRational one(1), q = QTRational::q(), t = QTRational::t();
    QTRational den = (one - x) * (t - x * q);
    if (den.is_zero()) throw MathError("omega evaluated at a pole");
    return (one - x * q) * (t - x) / den;
}

// ---------------------------------------------------------------------------
// EvaluationPoint
// ---------------------------------------------------------------------------

EvaluationPoint EvaluationPoint::from_boxes(std::vector<EvalBox> boxes) {
    std::vector<QTMono> ws;
    for (const auto& b : boxes) ws.push_back(b.weight);
    std::sort(ws.begin(), ws.end());
    if (std::adjacent_find(ws.begin(), ws.end()) != ws.end())
        throw UsageError("evaluation point has two boxes with equal weight");
    EvaluationPoint pt;
    pt.b_ = std::move(boxes);
    return pt;
}

EvaluationPoint EvaluationPoint::from_rows(
    const std::vector<std::pair<QTMono, int>>& rows) {
    std::vector<EvalBox> bs;
    for (int r = 0; r < (int)rows.size(); ++r) {
        const auto& [base, len] = rows[r];
        if (len < 0) throw UsageError("evaluation row with negative length");
        for (int j = 0; j < len; ++j)
            bs.push_back({QTMono{base.qe2 + 2 * j, base.te2}, r});
    }
    return from_boxes(std::move(bs));
}

EvaluationPoint EvaluationPoint::from_skew(const SkewShape& shape) {
    std::vector<EvalBox> bs;
    for (const auto& b : shape.boxes()) bs.push_back({b.weight2(), b.y});
    return from_boxes(std::move(bs));
}

EvaluationPoint EvaluationPoint::single_row(int length, QTMono base) {
    return from_rows({{base, length}});
}

EvaluationPoint EvaluationPoint::inverted() const {
    std::vector<EvalBox> bs = b_;
    for (auto& b : bs) b.weight = QTMono{-b.weight.qe2, -b.weight.te2};
    return from_boxes(std::move(bs));
}

EvaluationPoint EvaluationPoint::scaled(const QTMono& c) const {
    std::vector<EvalBox> bs = b_;
    for (auto& b : bs) b.weight = b.weight + c;
    return from_boxes(std::move(bs));
}

EvaluationPoint EvaluationPoint::regrouped(std::vector<int> groups) const {
    if (groups.size() != b_.size())
        throw UsageError("regrouped: group count does not match box count");
    std::vector<EvalBox> bs = b_;
    for (std::size_t i = 0; i < bs.size(); ++i) bs[i].group = groups[i];
    return from_boxes(std::move(bs));
}

// ---------------------------------------------------------------------------
// evaluation entry points
// ---------------------------------------------------------------------------

QTRational kernel_term(const ShuffleKernel& kernel, const std::vector<QTMono>& u) {
    if ((int)u.size() != kernel.vars())
        throw UsageError("kernel_term: arrangement size mismatch for " +
                         kernel.descriptor());
    std::vector<QTRational> w;
    for (const auto& m : u) w.push_back(QTRational::mono(m.qe2, m.te2));
    Engine<QTRational> eng(kernel, std::move(w), std::vector<int>(u.size(), 0),
                           QTRational::q(), QTRational::t());
    return eng.term_limit(iota_vec(kernel.vars())) * eng.const_scale();
}

QTRational sym_evaluate(const ShuffleKernel& kernel, const EvaluationPoint& pt) {
    if (pt.size() != kernel.vars())
        throw UsageError("sym_evaluate: " + kernel.descriptor() + " needs " +
                         std::to_string(kernel.vars()) + " boxes, got " +
                         std::to_string(pt.size()));
    Engine<QTRational> eng = symbolic_engine(kernel, pt);
    return eng.sum_limit(iota_vec(pt.size())) * eng.const_scale();
}

QTRational eval_hook(int k, int m, int n, int l) {
    if (k < 1 || n < 1 || gcd_pos(m, n) != 1)
        throw UsageError("eval_hook: bad kernel parameters");
    if (l < 1 || l > k * n) throw UsageError("eval_hook: l out of range");
    QTRational one(1), total(0);
    for (int i = 0; i < n; ++i) {
        long qe = 0, te = 0;
        for (int j = 1; j <= n * k - l; ++j) qe += floor_div((long)m * j + i, n);
        for (int j = 1; j <= l - 1; ++j) te += ceil_div((long)m * j - i, n);
        total += QTRational::mono((int)(2 * qe), (int)(-2 * te));
    }
    QTRational val =
        total * (one - QTRational::mono(-2 * k, 0)) / (one - QTRational::mono(-2, 2));
    for (int i = 1; i <= n * k - l; ++i)
        val = val * (one - QTRational::mono(-2 * i, 0)) /
              (one - QTRational::mono(-2 * (i + 1), 2));
    for (int i = 1; i <= l - 1; ++i)
        val = val * (one - QTRational::mono(0, 2 * i)) /
              (one - QTRational::mono(-2, 2 * (i + 1)));
    return val;
}

QTRational phi_norm_kernel(const ShuffleKernel& kernel) {
    const int N = kernel.vars(), M = kernel.degree();
    QTRational v = sym_evaluate(kernel, EvaluationPoint::single_row(N));
    v = v * QTRational::mono(-(M * N - M + N - kernel.k), 0);
    QTRational one(1), t = QTRational::t();
    for (int i = 1; i <= N; ++i)
        v = v * (t - QTRational::mono(2 * i, 0)) / (one - QTRational::mono(2 * i, 0));
    return v;
}

QTRational coproduct_limit(const ShuffleKernel& kernel, int l,
                           const EvaluationPoint& left, const EvaluationPoint& right) {
    if (l <= 0 || l >= kernel.k)
        throw UsageError("coproduct_limit: l must satisfy 0 < l < k");
    if (left.size() != l * kernel.n || right.size() != (kernel.k - l) * kernel.n)
        throw UsageError("coproduct_limit: part sizes must be l*n and (k-l)*n");
    std::vector<QTRational> w;
    std::vector<int> g;
    for (const auto& b : left.boxes()) {
        w.push_back(QTRational::mono(b.weight.qe2, b.weight.te2));
        g.push_back(1);  // xi-scaled part
    }
    for (const auto& b : right.boxes()) {
        w.push_back(QTRational::mono(b.weight.qe2, b.weight.te2));
        g.push_back(0);
    }
    Engine<QTRational> eng(kernel, std::move(w), std::move(g), QTRational::q(),
                           QTRational::t());
    EpsRat<QTRational> F = eng.sum_over(iota_vec(kernel.vars()));
    if (F.is_zero()) return QTRational(0);
    long target = (long)kernel.m * l;
    long d = F.deg_inf();
    if (d > target) throw MathError("coproduct_limit: scaling limit diverges");
    if (d < target) return QTRational(0);
    return F.lead_inf() * eng.const_scale();
}

bool invert_check(const ShuffleKernel& kernel, const EvaluationPoint& pt) {
    ShuffleKernel mirror(kernel.family, kernel.k, -kernel.m, kernel.n);
    return sym_evaluate(kernel, pt.inverted()) == sym_evaluate(mirror, pt);
}

QTRational shuffle_product_eval(const ShuffleKernel& a, const ShuffleKernel& b,
                                const EvaluationPoint& pt) {
    const int NA = a.vars(), NB = b.vars(), N = NA + NB;
    if (pt.size() != N)
        throw UsageError("shuffle_product_eval: point must carry " +
                         std::to_string(N) + " boxes");
    std::vector<QTRational> w;
    std::vector<int> g;
    for (const auto& box : pt.boxes()) {
        w.push_back(QTRational::mono(box.weight.qe2, box.weight.te2));
        g.push_back(box.group);
    }
    Engine<QTRational> engA(a, w, g, QTRational::q(), QTRational::t());
    Engine<QTRational> engB(b, w, g, QTRational::q(), QTRational::t());
    QTRational t = QTRational::t();
    Accum<QTRational> acc;
    std::vector<int> comb(NA);
    std::iota(comb.begin(), comb.end(), 0);
    while (true) {
        std::vector<int> rest;
        {
            std::vector<bool> in(N, false);
            for (int i : comb) in[i] = true;
            for (int i = 0; i < N; ++i)
                if (!in[i]) rest.push_back(i);
        }
        EpsRat<QTRational> va = engA.sum_over(comb);
        EpsRat<QTRational> vb = engB.sum_over(rest);
        TermBuilder<QTRational> cross;
        for (int i : comb)
            for (int j : rest) {
                QTRational r = w[i] / w[j];
                int d = g[i] - g[j];
                cross.mul_binom_num(QTRational(1), 0, -(r * QTRational::q()), d);
                cross.mul_binom_num(t, 0, -r, d);
                cross.mul_binom_den(QTRational(1), 0, -r, d);
                cross.mul_binom_den(t, 0, -(r * QTRational::q()), d);
            }
        acc.add(va * vb * std::move(cross).build());
        int i = NA - 1;
        while (i >= 0 && comb[i] == N - NA + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < NA; ++j) comb[j] = comb[j - 1] + 1;
    }
    EpsRat<QTRational> F = std::move(acc).total();
    QTRational lim = F.limit_at_one();
    lim = lim * engA.const_scale() * engB.const_scale();
    return lim * QTRational(factorial(NA) * factorial(NB));
}

// ---------------------------------------------------------------------------
// wheel check (numeric): clear the wheel denominator per term and evaluate
// ---------------------------------------------------------------------------

namespace {

// Value of r = R * prod_{i != j} (t z_i - q z_j) at numeric weights, where R
// is the symmetrized kernel without its constant prefactors.  Within each
// term, every ordered pair consumes one wheel factor through the omega
// denominator (t - xq) and one more when adjacent in the chain, so all
// remaining denominators -- the (1 - z_a/z_b) factors -- are nonzero at any
// point with pairwise distinct coordinates.  No regularization is needed.
Rat wheel_numerator_value(const ShuffleKernel& K, const Rat& q0, const Rat& t0,
                          const std::vector<Rat>& z, bool corrupt) {
    const int N = K.vars(), k = K.k, n = K.n;
    std::vector<int> rexp(N + 1);
    for (int i = 1; i <= N; ++i) rexp[i] = staircase_exp(K.m, K.n, i);
    // tables over ordered site pairs
    std::vector<std::vector<Rat>> wheel(N, std::vector<Rat>(N, Rat(0)));
    std::vector<std::vector<Rat>> pairc(N, std::vector<Rat>(N, Rat(0)));
    std::vector<std::vector<Rat>> chainc(N, std::vector<Rat>(N, Rat(0)));
    std::vector<std::vector<Rat>> corec(k, std::vector<Rat>());
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a == b) continue;
            wheel[a][b] = t0 * z[a] - q0 * z[b];
            Rat x = z[a] / z[b];
            if (x == 1) throw MathError("wheel sample has equal coordinates");
            // omega numerator, the (1-x) denominator, and the consumed
            // (t - xq) replaced by its cofactor z_b.  A corrupted run bumps
            // the numerator exponent (1 - qx) -> (1 - q^2 x), which genuinely
            // spoils the cancellation at wheel points.
            Rat qnum = corrupt ? q0 * q0 : q0;
            pairc[a][b] = (1 - qnum * x) * (t0 - x) / (1 - x) * z[b];
            // chain factor replaced by its cofactor -q z_b
            chainc[a][b] = -q0 * z[b];
        }
    std::vector<std::vector<Rat>> powz(N, std::vector<Rat>(N + 1, Rat(1)));
    for (int s = 0; s < N; ++s)
        for (int i = 1; i <= N; ++i)
            if (rexp[i]) powz[s][i] = rat_pow(z[s], rexp[i]);
    for (int i = 1; i < k; ++i) {
        corec[i].assign(N * N, Rat(0));
        Rat inv = Rat(1) / (q0 * rat_pow(t0, i - 1));
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                if (a != b) corec[i][a * N + b] = 1 - z[a] / z[b] * inv;
    }
    std::vector<int> idx = iota_vec(N);
    std::vector<std::vector<bool>> used(N, std::vector<bool>(N));
    Rat total = 0;
    do {
        for (auto& row : used) std::fill(row.begin(), row.end(), false);
        Rat v = 1;
        for (int p = 0; p < N; ++p)
            if (rexp[p + 1]) v *= powz[idx[p]][p + 1];
        bool zero = false;
        if (K.family == KernelFamily::E) {
            for (int i = 1; i < k; ++i) {
                const Rat& f = corec[i][idx[i * n - 1] * N + idx[i * n]];
                if (f == 0) {
                    zero = true;
                    break;
                }
                v *= f;
            }
        } else {
            Rat geo = 1, run = 1;
            for (int i = 1; i < k; ++i) {
                run *= t0 / q0 * z[idx[i * n - 1]] / z[idx[i * n]];
                geo += run;
            }
            if (geo == 0) zero = true;
            v *= geo;
        }
        if (!zero) {
            for (int p = 0; p + 1 < N; ++p) {
                int a = idx[p], b = idx[p + 1];
                v *= chainc[a][b];
                used[a][b] = true;
            }
            for (int pa = 0; pa < N && !zero; ++pa)
                for (int pb = pa + 1; pb < N; ++pb) {
                    int a = idx[pa], b = idx[pb];
                    if (pairc[a][b] == 0) {
                        zero = true;
                        break;
                    }
                    v *= pairc[a][b];
                    used[b][a] = true;  // consumed (t z_b - q z_a)
                }
        }
        if (!zero) {
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    if (i != j && !used[i][j]) v *= wheel[i][j];
            total += v;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
    return total;
}

}  // namespace

bool wheel_check(const ShuffleKernel& kernel, unsigned seed, int trials, bool corrupt) {
    const int N = kernel.vars();
    if (N < 3) return true;
    std::mt19937 rng(seed);
    auto draw_scalar = [&rng]() {
        Rat v;
        do
            v = rand_rat(rng);
        while (v == 0 || v == 1 || v == -1);
        return v;
    };
    for (int trial = 0; trial < trials; ++trial) {
        for (int pattern = 0; pattern < 2; ++pattern) {
            for (int attempt = 0;; ++attempt) {
                if (attempt > 200) throw MathError("wheel_check: sampling failed");
                Rat q0 = draw_scalar(), t0 = draw_scalar();
                if (q0 == t0) continue;
                Rat a = draw_scalar();
                std::vector<Rat> z;
                if (pattern == 0)
                    z = {a, a / q0, a * t0 / q0};  // ratios {q, 1/t, t/q}
                else
                    z = {a, a / t0, a * q0 / t0};  // ratios {t, 1/q, q/t}
                while ((int)z.size() < N) z.push_back(draw_scalar());
                std::set<Rat> distinct(z.begin(), z.end());
                if ((int)distinct.size() != N || distinct.count(0)) continue;
                Rat r = wheel_numerator_value(kernel, q0, t0, z, corrupt);
                if (!(r == 0)) return false;
                break;
            }
        }
    }
    return true;
}

std::pair<long, bool> xi_degree_sample(const ShuffleKernel& kernel, unsigned seed,
                                       int scaled) {
    const int N = kernel.vars();
    if (scaled < 0 || scaled > N)
        throw UsageError("xi_degree_sample: scaled count out of range");
    std::mt19937 rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        Rat q0, t0;
        do
            q0 = rand_rat(rng);
        while (q0 == 0 || q0 == 1 || q0 == -1);
        do
            t0 = rand_rat(rng);
        while (t0 == 0 || t0 == 1 || t0 == -1 || t0 == q0);
        std::vector<Rat> z;
        std::set<Rat> seen;
        while ((int)z.size() < N) {
            Rat v = rand_rat(rng);
            if (v != 0 && seen.insert(v).second) z.push_back(v);
        }
        std::vector<int> order = iota_vec(N);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<int> g(N, 0);
        for (int i = 0; i < scaled; ++i) g[order[i]] = 1;
        try {
            Engine<Rat> eng(kernel, z, g, q0, t0);
            EpsRat<Rat> F = eng.sum_over(iota_vec(N));
            if (F.is_zero()) return {0, true};
            return {F.deg_inf(), false};
        } catch (const PoleAtTarget&) {
            continue;  // degenerate draw; resample
        }
    }
    throw MathError("xi_degree_sample: no nondegenerate sample found");
}

}  // namespace qtsf
