#include "qtsf/symfunc.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <utility>

#include "json.hpp"
#include "qtsf/errors.hpp"
#include "qtsf/ribbon.hpp"
#include "qtsf/serialize.hpp"

namespace qtsf {

std::string basis_name(Basis b) {
    switch (b) {
        case Basis::Monomial: return "m";
        case Basis::PowerSum: return "p";
        case Basis::Elementary: return "e";
        case Basis::Homogeneous: return "h";
        case Basis::Schur: return "s";
        case Basis::MacP: return "P";
        case Basis::MacM: return "M";
    }
    return "?";
}

Rat z_of(const Partition& la) {
    Rat z = 1;
    const auto& p = la.parts();
    for (std::size_t i = 0; i < p.size();) {
        std::size_t j = i;
        while (j < p.size() && p[j] == p[i]) ++j;
        long mult = static_cast<long>(j - i);
        for (long c = 2; c <= mult; ++c) z *= c;
        for (long c = 0; c < mult; ++c) z *= p[i];
        i = j;
    }
    return z;
}

// --------------------------------------------------------------------------
// SymFunc
// --------------------------------------------------------------------------

SymFunc::SymFunc(Basis b, std::map<Partition, QTRational> coeffs) : basis_(b) {
    for (auto& [la, c] : coeffs)
        if (!c.is_zero()) c_.emplace(la, std::move(c));
}

SymFunc SymFunc::unit(Basis b, const Partition& la) {
    return SymFunc(b, {{la, QTRational(1)}});
}

SymFunc SymFunc::one(Basis b) { return unit(b, Partition()); }

int SymFunc::max_degree() const {
    int d = 0;
    for (const auto& [la, c] : c_) d = std::max(d, la.boxes());
    return d;
}

QTRational SymFunc::coeff(const Partition& la) const {
    auto it = c_.find(la);
    return it == c_.end() ? QTRational(0) : it->second;
}

SymFunc SymFunc::operator-() const {
    SymFunc r = *this;
    for (auto& [la, c] : r.c_) c = -c;
    return r;
}

SymFunc& SymFunc::operator+=(const SymFunc& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) {
        *this = o;
        return *this;
    }
    if (basis_ != o.basis_)
        throw UsageError("cannot add symmetric functions in bases " + basis_name(basis_) +
                         " and " + basis_name(o.basis_));
    for (const auto& [la, c] : o.c_) {
        auto it = c_.find(la);
        if (it == c_.end()) {
            c_.emplace(la, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) c_.erase(it);
        }
    }
    return *this;
}

SymFunc& SymFunc::operator-=(const SymFunc& o) { return *this += -o; }

SymFunc SymFunc::operator+(const SymFunc& o) const {
    SymFunc r = *this;
    r += o;
    return r;
}

SymFunc SymFunc::operator-(const SymFunc& o) const {
    SymFunc r = *this;
    r -= o;
    return r;
}

SymFunc SymFunc::operator*(const QTRational& c) const {
    SymFunc r;
    r.basis_ = basis_;
    if (c.is_zero()) return r;
    for (const auto& [la, v] : c_) r.c_.emplace(la, v * c);
    return r;
}

bool operator==(const SymFunc& a, const SymFunc& b) {
    if (a.c_ != b.c_) return false;
    return a.c_.empty() || a.basis_ == b.basis_;
}

// --------------------------------------------------------------------------
// SymAlgebra internals
// --------------------------------------------------------------------------

namespace {

using PMap = std::map<Partition, QTRational>;  // coefficients on p_lambda
using RMap = std::map<Partition, Rat>;
using Mat = std::vector<std::vector<Rat>>;

Partition union_parts(const Partition& a, const Partition& b) {
    std::vector<int> v = a.parts();
    v.insert(v.end(), b.parts().begin(), b.parts().end());
    std::sort(v.rbegin(), v.rend());
    return Partition(std::move(v));
}

void raxpy(RMap& dst, const Rat& c, const Partition& la) {
    Rat& slot = dst[la];
    slot += c;
    if (slot == 0) dst.erase(la);
}

// dst += c * src (p-basis linear combination).
void paxpy(PMap& dst, const QTRational& c, const PMap& src) {
    if (c.is_zero()) return;
    for (const auto& [la, v] : src) {
        auto it = dst.find(la);
        if (it == dst.end()) {
            dst.emplace(la, v * c);
        } else {
            it->second += v * c;
            if (it->second.is_zero()) dst.erase(it);
        }
    }
}

Mat invert(Mat a) {
    const std::size_t n = a.size();
    Mat inv(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw MathError("singular transition matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rat d = a[col][col];
        for (auto& x : a[col]) x /= d;
        for (auto& x : inv[col]) x /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat f = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

// m_mu * p_k expanded in the monomial basis: add k to one copy of a distinct
// part value v of mu (v = 0 appends a new part); the coefficient is the
// multiplicity of v + k in the result.
RMap mul_m_pk(const RMap& m, int k) {
    RMap out;
    for (const auto& [mu, c] : m) {
        std::vector<int> vals = mu.parts();
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        vals.push_back(0);
        for (int v : vals) {
            std::vector<int> nu = mu.parts();
            if (v == 0) {
                nu.push_back(k);
            } else {
                *std::find(nu.begin(), nu.end(), v) += k;
            }
            std::sort(nu.rbegin(), nu.rend());
            long mult = std::count(nu.begin(), nu.end(), v + k);
            raxpy(out, c * mult, Partition(std::move(nu)));
        }
    }
    return out;
}

// (1 - q^k) / (1 - t^k)
QTRational pk_weight(int k) {
    static std::mutex mu;
    static std::map<int, QTRational> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it == cache.end()) {
        QTRational w = (QTRational(1) - QTRational::mono(2 * k, 0)) /
                       (QTRational(1) - QTRational::mono(0, 2 * k));
        it = cache.emplace(k, std::move(w)).first;
    }
    return it->second;
}

QTRational qt_weight(const Partition& la) {
    static std::mutex mu;
    static std::map<Partition, QTRational> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(la);
    if (it == cache.end()) {
        QTRational w{z_of(la)};
        for (int part : la.parts()) w *= pk_weight(part);
        it = cache.emplace(la, std::move(w)).first;
    }
    return it->second;
}

QTRational inner_diag(const PMap& a, const PMap& b, bool qt) {
    QTRational acc(0);
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            QTRational w = qt ? qt_weight(ia->first) : QTRational(z_of(ia->first));
            acc += ia->second * ib->second * w;
            ++ia;
            ++ib;
        }
    }
    return acc;
}

QTPoly one_minus_pow(int k, bool qvar) {
    return QTPoly::from_terms(
        {{{0, 0}, Rat(1)}, {{qvar ? 2 * k : 0, qvar ? 0 : 2 * k}, Rat(-1)}});
}

// Universal denominator for the q,t weights of all partitions of at most D
// boxes: (1 - t^k) divides it with multiplicity floor(D / k).
const QTPoly& qt_lambda_poly(int D) {
    static std::mutex mu;
    static std::map<int, QTPoly> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(D);
    if (it == cache.end()) {
        QTPoly L = QTPoly::one();
        for (int k = 1; k <= D; ++k)
            for (int r = 0; r < D / k; ++r) L *= one_minus_pow(k, false);
        it = cache.emplace(D, std::move(L)).first;
    }
    return it->second;
}

// qt_weight(nu) written over the universal denominator:
//   z_nu * prod(1 - q^{nu_i}) * (Lambda_D / prod(1 - t^{nu_i})).
QTPoly qt_weight_num(const Partition& nu, int D) {
    static std::mutex mu;
    static std::map<std::pair<int, Partition>, QTPoly> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(D, nu);
    auto it = cache.find(key);
    if (it == cache.end()) {
        QTPoly w = QTPoly::mono(0, 0, z_of(nu));
        QTPoly td = QTPoly::one();
        for (int part : nu.parts()) {
            w *= one_minus_pow(part, true);
            td *= one_minus_pow(part, false);
        }
        w *= divexact(qt_lambda_poly(D), td);
        it = cache.emplace(std::move(key), std::move(w)).first;
    }
    return it->second;
}

// <a, b> with the q,t weights, accumulated over one common polynomial
// denominator per side.  Reduction happens once at the very end, so a sum
// that cancels (orthogonal vectors) never reaches a gcd at all.
QTRational inner_qt_poly(const PMap& a, const PMap& b) {
    std::vector<const Partition*> sup;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end() && ib != b.end();) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            sup.push_back(&ia->first);
            ++ia, ++ib;
        }
    }
    if (sup.empty()) return QTRational(0);
    int D = 0;
    for (const Partition* nu : sup) D = std::max(D, nu->boxes());
    auto commonize = [&sup](const PMap& f, std::vector<QTPoly>& num) {
        QTPoly den = QTPoly::one();
        for (const Partition* nu : sup) {
            const QTPoly& d = f.at(*nu).den();
            den = den * divexact(d, gcd_poly(den, d));  // lcm
        }
        for (const Partition* nu : sup) {
            const QTRational& c = f.at(*nu);
            num.push_back(c.num() * divexact(den, c.den()));
        }
        return den;
    };
    std::vector<QTPoly> na, nb;
    QTPoly da = commonize(a, na);
    QTPoly db = commonize(b, nb);
    QTPoly S;
    for (std::size_t i = 0; i < sup.size(); ++i)
        S += na[i] * nb[i] * qt_weight_num(*sup[i], D);
    if (S.is_zero()) return QTRational(0);
    return QTRational(std::move(S), da * db * qt_lambda_poly(D));
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string checksum_of(const nlohmann::json& entries) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a(entries.dump())));
    return buf;
}

struct ClassicalTables {
    std::vector<Partition> parts;  // descending lex
    std::map<Partition, int> idx;
    Mat p2m, m2p, s2p, p2s, e2p, p2e, h2p, p2h;
};

constexpr int kCacheFormatVersion = 1;

}  // namespace

struct SymAlgebra::Impl {
    int bound;
    std::string cache_dir;
    mutable std::mutex mtx;

    std::map<int, ClassicalTables> classical;
    std::vector<RMap> ek, hk;  // e_k / h_k in the p-basis
    std::map<std::pair<std::vector<int>, std::vector<int>>, Rat> chi_memo;

    struct MacDeg {
        std::vector<PMap> P_m, P_p;  // indexed like ClassicalTables::parts
        std::vector<QTRational> norm;
    };
    std::map<int, MacDeg> mac;
    bool cache_loaded = false;
    nlohmann::json cache_entries;  // null when absent

    Impl(int b, std::string dir) : bound(b), cache_dir(std::move(dir)) {
        if (b < 0) throw UsageError("degree bound must be nonnegative");
    }

    void check_degree(int d) const {
        if (d > bound)
            throw UsageError("degree " + std::to_string(d) + " above configured bound " +
                             std::to_string(bound));
    }

    // ---- classical transition tables -------------------------------------

    void ensure_eh() {
        if (!ek.empty()) return;
        ek.resize(bound + 1);
        hk.resize(bound + 1);
        ek[0] = {{Partition(), Rat(1)}};
        hk[0] = ek[0];
        for (int k = 1; k <= bound; ++k) {
            RMap e, h;
            for (int i = 1; i <= k; ++i) {
                Partition pi({i});
                for (const auto& [mu, c] : ek[k - i])
                    raxpy(e, i % 2 ? c : Rat(-c), union_parts(mu, pi));
                for (const auto& [mu, c] : hk[k - i]) raxpy(h, c, union_parts(mu, pi));
            }
            for (auto& [mu, c] : e) c /= k;
            for (auto& [mu, c] : h) c /= k;
            ek[k] = std::move(e);
            hk[k] = std::move(h);
        }
    }

    std::vector<std::pair<Partition, int>> strip_removals(const Partition& la, int k) {
        std::vector<std::pair<Partition, int>> out;
        for (const auto& kappa : enumerate_partitions(la.boxes() - k)) {
            if (!containment_leq(kappa, la)) continue;
            auto rib = try_ribbon(SkewShape(kappa, la).boxes());
            if (rib) out.push_back({kappa, rib->height()});
        }
        return out;
    }

    // Murnaghan-Nakayama character value chi^la_mu.
    Rat chi(const Partition& la, std::vector<int> mu) {
        if (la.boxes() == 0) return 1;
        auto key = std::make_pair(la.parts(), mu);
        auto it = chi_memo.find(key);
        if (it != chi_memo.end()) return it->second;
        int k = mu.front();
        std::vector<int> rest(mu.begin() + 1, mu.end());
        Rat sum = 0;
        for (const auto& [kappa, ht] : strip_removals(la, k)) {
            Rat term = chi(kappa, rest);
            if (ht % 2) term = -term;
            sum += term;
        }
        chi_memo.emplace(std::move(key), sum);
        return sum;
    }

    RMap product_in_p(const std::vector<RMap>& factors) {
        RMap acc = {{Partition(), Rat(1)}};
        for (const auto& f : factors) {
            RMap next;
            for (const auto& [la, ca] : acc)
                for (const auto& [mu, cb] : f) raxpy(next, ca * cb, union_parts(la, mu));
            acc = std::move(next);
        }
        return acc;
    }

    const ClassicalTables& ensure_classical(int d) {
        check_degree(d);
        auto it = classical.find(d);
        if (it != classical.end()) return it->second;
        ensure_eh();
        ClassicalTables T;
        T.parts = enumerate_partitions(d);
        const std::size_t n = T.parts.size();
        for (std::size_t i = 0; i < n; ++i) T.idx[T.parts[i]] = static_cast<int>(i);
        auto row_of = [&](const RMap& v) {
            std::vector<Rat> row(n, Rat(0));
            for (const auto& [la, c] : v) row[T.idx.at(la)] = c;
            return row;
        };
        // p -> m by iterating the monomial multiplication rule.
        for (const auto& la : T.parts) {
            RMap mv = {{Partition(), Rat(1)}};
            for (int k : la.parts()) mv = mul_m_pk(mv, k);
            T.p2m.push_back(row_of(mv));
        }
        T.m2p = invert(T.p2m);
        // Schur in p via characters.
        for (const auto& la : T.parts) {
            std::vector<Rat> row(n, Rat(0));
            for (std::size_t j = 0; j < n; ++j)
                row[j] = chi(la, T.parts[j].parts()) / z_of(T.parts[j]);
            T.s2p.push_back(std::move(row));
        }
        T.p2s = invert(T.s2p);
        // Elementary / homogeneous products.
        for (const auto& la : T.parts) {
            std::vector<RMap> ef, hf;
            for (int k : la.parts()) {
                ef.push_back(ek[k]);
                hf.push_back(hk[k]);
            }
            T.e2p.push_back(row_of(product_in_p(ef)));
            T.h2p.push_back(row_of(product_in_p(hf)));
        }
        T.p2e = invert(T.e2p);
        T.p2h = invert(T.h2p);
        return classical.emplace(d, std::move(T)).first->second;
    }

    // ---- Macdonald orthogonalization -------------------------------------

    std::string cache_path() const {
        return cache_dir.empty() ? std::string() : cache_dir + "/macdonald_cache.json";
    }

    // Load and validate the cache file once; afterwards cache_entries is the
    // "entries" object (or null when no usable file is configured/present).
    void load_cache() {
        if (cache_loaded) return;
        cache_entries = nullptr;
        std::string path = cache_path();
        std::ifstream in;
        if (!path.empty()) in.open(path);
        if (path.empty() || !in.good()) {  // absent: transparent rebuild
            cache_loaded = true;
            return;
        }
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception&) {
            throw UsageError("macdonald cache is not valid JSON: " + path);
        }
        if (!j.is_object() || j.value("format_version", -1) != kCacheFormatVersion)
            throw UsageError("macdonald cache has an unsupported format version: " + path);
        if (!j.contains("entries") || !j["entries"].is_object() ||
            j.value("checksum", "") != checksum_of(j["entries"]))
            throw UsageError("macdonald cache checksum mismatch: " + path);
        cache_entries = j["entries"];
        cache_loaded = true;
    }

    bool mac_from_cache(int d, const ClassicalTables& T, MacDeg& M) {
        load_cache();
        if (!cache_entries.is_object()) return false;
        auto it = cache_entries.find(std::to_string(d));
        if (it == cache_entries.end()) return false;
        for (const auto& [la_str, expansion] : it->items()) {
            int pos = T.idx.at(parse_partition(la_str));
            PMap fm, fp;
            for (const auto& [mu_str, val_str] : expansion.items()) {
                Partition mu = parse_partition(mu_str);
                QTRational c = parse_rational(val_str.get<std::string>());
                fm.emplace(mu, c);
                const auto& row = T.m2p[T.idx.at(mu)];
                for (std::size_t jcol = 0; jcol < row.size(); ++jcol)
                    if (row[jcol] != 0) paxpy(fp, c * QTRational(row[jcol]), {{T.parts[jcol], QTRational(1)}});
            }
            M.P_m[pos] = std::move(fm);
            M.P_p[pos] = fp;
            M.norm[pos] = inner_diag(fp, fp, true);
        }
        for (const auto& fm : M.P_m)
            if (fm.empty()) return false;  // incomplete degree: recompute
        return true;
    }

    const MacDeg& ensure_mac(int d) {
        check_degree(d);
        auto found = mac.find(d);
        if (found != mac.end()) return found->second;
        const ClassicalTables& T = ensure_classical(d);
        const std::size_t n = T.parts.size();
        MacDeg M;
        M.P_m.resize(n);
        M.P_p.resize(n);
        M.norm.resize(n, QTRational(0));
        if (!mac_from_cache(d, T, M)) {
            // Gram-Schmidt in ascending lex order of the indexing partition:
            // P_la = m_la minus its projections onto all earlier P_mu.
            for (std::size_t step = 0; step < n; ++step) {
                std::size_t pos = n - 1 - step;  // parts is descending lex
                const Partition& la = T.parts[pos];
                PMap fm = {{la, QTRational(1)}};
                PMap fp0;  // p-coordinates of m_la; the coefficients are
                           // plain rationals, which keeps the inner products
                           // below cheap
                const auto& row = T.m2p[pos];
                for (std::size_t j = 0; j < n; ++j)
                    if (row[j] != 0) fp0.emplace(T.parts[j], QTRational(row[j]));
                // The earlier P are pairwise orthogonal, so each projection
                // coefficient may be taken against the original m_la rather
                // than the partially reduced vector; subtracting everything
                // in one sweep avoids compounding denominators.
                std::vector<QTRational> proj(n);
                for (std::size_t prev = pos + 1; prev < n; ++prev)
                    proj[prev] = inner_diag(fp0, M.P_p[prev], true) / M.norm[prev];
                PMap fp = fp0;
                for (std::size_t prev = pos + 1; prev < n; ++prev) {
                    if (!proj[prev].is_zero()) {
                        paxpy(fm, -proj[prev], M.P_m[prev]);
                        paxpy(fp, -proj[prev], M.P_p[prev]);
                    }
                }
                // <P, P> = <P, m_la> because P is orthogonal to the rest of
                // the expansion of m_la.
                M.norm[pos] = inner_diag(fp, fp0, true);
                M.P_m[pos] = std::move(fm);
                M.P_p[pos] = std::move(fp);
            }
        }
        return mac.emplace(d, std::move(M)).first->second;
    }

    // ---- conversions ------------------------------------------------------

    PMap to_p(const SymFunc& f) {
        PMap out;
        for (const auto& [la, c] : f.coeffs()) {
            int d = la.boxes();
            check_degree(d);
            switch (f.basis()) {
                case Basis::PowerSum: {
                    paxpy(out, c, {{la, QTRational(1)}});
                    break;
                }
                case Basis::Monomial:
                case Basis::Schur:
                case Basis::Elementary:
                case Basis::Homogeneous: {
                    const ClassicalTables& T = ensure_classical(d);
                    const Mat& m = f.basis() == Basis::Monomial     ? T.m2p
                                   : f.basis() == Basis::Schur      ? T.s2p
                                   : f.basis() == Basis::Elementary ? T.e2p
                                                                    : T.h2p;
                    const auto& row = m[T.idx.at(la)];
                    for (std::size_t j = 0; j < row.size(); ++j)
                        if (row[j] != 0) paxpy(out, c * QTRational(row[j]), {{T.parts[j], QTRational(1)}});
                    break;
                }
                case Basis::MacP:
                case Basis::MacM: {
                    const ClassicalTables& T = ensure_classical(d);
                    const MacDeg& M = ensure_mac(d);
                    QTRational scale = c;
                    if (f.basis() == Basis::MacM) scale = scale / macdonald_M_scale(la);
                    paxpy(out, scale, M.P_p[T.idx.at(la)]);
                    break;
                }
            }
        }
        return out;
    }

    // Slice a p-basis map by homogeneous degree.
    std::map<int, PMap> by_degree(const PMap& g) {
        std::map<int, PMap> out;
        for (const auto& [la, c] : g) out[la.boxes()].emplace(la, c);
        return out;
    }

    SymFunc from_p(const PMap& g, Basis target) {
        if (target == Basis::PowerSum) return SymFunc(Basis::PowerSum, g);
        std::map<Partition, QTRational> res;
        for (auto& [d, slice] : by_degree(g)) {
            const ClassicalTables& T = ensure_classical(d);
            if (target == Basis::MacP || target == Basis::MacM) {
                const MacDeg& M = ensure_mac(d);
                // Express in monomial coordinates, then back-substitute against
                // the unitriangular P_la = m_la + (dominance-lower terms),
                // scanning indices in descending lex order.
                PMap mc;
                for (const auto& [la, c] : slice) {
                    const auto& row = T.p2m[T.idx.at(la)];
                    for (std::size_t j = 0; j < row.size(); ++j)
                        if (row[j] != 0) paxpy(mc, c * QTRational(row[j]), {{T.parts[j], QTRational(1)}});
                }
                for (std::size_t i = 0; i < T.parts.size(); ++i) {
                    auto it = mc.find(T.parts[i]);
                    if (it == mc.end()) continue;
                    QTRational a = it->second;
                    paxpy(mc, -a, M.P_m[i]);
                    if (target == Basis::MacM) a *= macdonald_M_scale(T.parts[i]);
                    res.emplace(T.parts[i], a);
                }
                if (!mc.empty()) throw MathError("macdonald back-substitution residue");
            } else {
                const Mat& m = target == Basis::Monomial     ? T.p2m
                               : target == Basis::Schur      ? T.p2s
                               : target == Basis::Elementary ? T.p2e
                                                             : T.p2h;
                std::vector<QTRational> acc(T.parts.size(), QTRational(0));
                for (const auto& [la, c] : slice) {
                    const auto& row = m[T.idx.at(la)];
                    for (std::size_t j = 0; j < row.size(); ++j)
                        if (row[j] != 0) acc[j] += c * QTRational(row[j]);
                }
                for (std::size_t j = 0; j < acc.size(); ++j)
                    if (!acc[j].is_zero()) res.emplace(T.parts[j], acc[j]);
            }
        }
        return SymFunc(target, std::move(res));
    }
};

// --------------------------------------------------------------------------
// SymAlgebra public interface
// --------------------------------------------------------------------------

SymAlgebra::SymAlgebra(int degree_bound, std::string cache_dir)
    : impl_(std::make_unique<Impl>(degree_bound, std::move(cache_dir))) {}

SymAlgebra::~SymAlgebra() = default;

int SymAlgebra::degree_bound() const { return impl_->bound; }

SymFunc SymAlgebra::convert(const SymFunc& f, Basis target) const {
    std::lock_guard lock(impl_->mtx);
    return impl_->from_p(impl_->to_p(f), target);
}

SymFunc SymAlgebra::multiply(const SymFunc& f, const SymFunc& g) const {
    std::lock_guard lock(impl_->mtx);
    PMap a = impl_->to_p(f), b = impl_->to_p(g), out;
    for (const auto& [la, ca] : a)
        for (const auto& [mu, cb] : b) {
            Partition nu = union_parts(la, mu);
            impl_->check_degree(nu.boxes());
            paxpy(out, ca * cb, {{std::move(nu), QTRational(1)}});
        }
    return SymFunc(Basis::PowerSum, std::move(out));
}

QTRational SymAlgebra::hall_inner(const SymFunc& f, const SymFunc& g) const {
    std::lock_guard lock(impl_->mtx);
    return inner_diag(impl_->to_p(f), impl_->to_p(g), false);
}

QTRational SymAlgebra::macdonald_inner(const SymFunc& f, const SymFunc& g) const {
    std::lock_guard lock(impl_->mtx);
    return inner_qt_poly(impl_->to_p(f), impl_->to_p(g));
}

SymFunc SymAlgebra::macdonald_P(const Partition& la) const {
    std::lock_guard lock(impl_->mtx);
    const ClassicalTables& T = impl_->ensure_classical(la.boxes());
    const auto& M = impl_->ensure_mac(la.boxes());
    return SymFunc(Basis::Monomial, M.P_m[T.idx.at(la)]);
}

SymFunc SymAlgebra::macdonald_M(const Partition& la) const {
    return macdonald_P(la) * macdonald_M_scale(la).inv();
}

QTRational SymAlgebra::macdonald_norm(const Partition& la) const {
    std::lock_guard lock(impl_->mtx);
    const ClassicalTables& T = impl_->ensure_classical(la.boxes());
    return impl_->ensure_mac(la.boxes()).norm[T.idx.at(la)];
}

QTRational SymAlgebra::macdonald_M_scale(const Partition& la) {
    QTRational prod(1);
    for (const Box& b : SkewShape(Partition(), la).boxes()) {
        auto [arm, leg] = arm_leg(la, b);
        prod *= QTRational::mono(0, -2 * leg) - QTRational::mono(2 * (arm + 1), 0);
    }
    return prod;
}

QTRational SymAlgebra::nabla_eigenvalue(const Partition& la) {
    int sx = 0, sy = 0;
    for (const Box& b : SkewShape(Partition(), la).boxes()) {
        sx += b.x;
        sy += b.y;
    }
    return QTRational::mono(2 * sx, -2 * sy);
}

SymFunc SymAlgebra::nabla(const SymFunc& f, long r) const {
    SymFunc inM;
    {
        std::lock_guard lock(impl_->mtx);
        inM = impl_->from_p(impl_->to_p(f), Basis::MacM);
    }
    std::map<Partition, QTRational> out;
    for (const auto& [la, c] : inM.coeffs()) out.emplace(la, c * nabla_eigenvalue(la).pow(r));
    return SymFunc(Basis::MacM, std::move(out));
}

QTRational SymAlgebra::norm_phi(const SymFunc& f) const {
    std::lock_guard lock(impl_->mtx);
    QTRational acc(0);
    for (const auto& [la, c] : impl_->to_p(f)) acc += c;
    return acc;
}

SymFunc SymAlgebra::adjoint_mult(const SymFunc& f, const SymFunc& g) const {
    std::lock_guard lock(impl_->mtx);
    PMap a = impl_->to_p(f), b = impl_->to_p(g), out;
    for (const auto& [la, ca] : a)
        for (const auto& [mu, cb] : b) {
            std::vector<int> rem = mu.parts();
            QTRational scal = ca * cb;
            bool ok = true;
            for (int k : la.parts()) {
                auto it = std::find(rem.begin(), rem.end(), k);
                if (it == rem.end()) {
                    ok = false;
                    break;
                }
                long mult = std::count(rem.begin(), rem.end(), k);
                scal *= QTRational(mult * k) * pk_weight(k);
                rem.erase(it);
            }
            if (ok) paxpy(out, scal, {{Partition(std::move(rem)), QTRational(1)}});
        }
    return SymFunc(Basis::PowerSum, std::move(out));
}

std::string SymAlgebra::cache_file() const { return impl_->cache_path(); }

void SymAlgebra::cache_build(int up_to_degree) const {
    std::lock_guard lock(impl_->mtx);
    if (impl_->cache_dir.empty()) throw UsageError("no cache directory configured");
    impl_->check_degree(up_to_degree);
    nlohmann::json entries = nlohmann::json::object();
    for (int d = 1; d <= up_to_degree; ++d) {
        const ClassicalTables& T = impl_->ensure_classical(d);
        const auto& M = impl_->ensure_mac(d);
        nlohmann::json deg = nlohmann::json::object();
        for (std::size_t i = 0; i < T.parts.size(); ++i) {
            nlohmann::json expansion = nlohmann::json::object();
            for (const auto& [mu, c] : M.P_m[i]) expansion[to_string(mu)] = to_string(c);
            deg[to_string(T.parts[i])] = std::move(expansion);
        }
        entries[std::to_string(d)] = std::move(deg);
    }
    nlohmann::json file = {{"format_version", kCacheFormatVersion},
                           {"checksum", checksum_of(entries)},
                           {"entries", entries}};
    std::filesystem::create_directories(impl_->cache_dir);
    std::ofstream outf(impl_->cache_path());
    if (!outf.good()) throw UsageError("cannot write cache file " + impl_->cache_path());
    outf << file.dump(1) << "\n";
    // Reload lazily on next use.
    impl_->cache_loaded = false;
}

bool SymAlgebra::cache_verify(std::string* message) const {
    std::lock_guard lock(impl_->mtx);
    auto set = [&](const std::string& m) {
        if (message) *message = m;
    };
    if (impl_->cache_dir.empty()) {
        set("no cache directory configured");
        return false;
    }
    std::ifstream in(impl_->cache_path());
    if (!in.good()) {
        set("cache file missing: " + impl_->cache_path());
        return false;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        set(std::string("invalid JSON: ") + e.what());
        return false;
    }
    if (!j.is_object() || j.value("format_version", -1) != kCacheFormatVersion) {
        set("unsupported format version");
        return false;
    }
    if (!j.contains("entries") || !j["entries"].is_object()) {
        set("missing entries");
        return false;
    }
    if (j.value("checksum", "") != checksum_of(j["entries"])) {
        set("checksum mismatch");
        return false;
    }
    set("ok");
    return true;
}

void SymAlgebra::cache_clear() const {
    std::lock_guard lock(impl_->mtx);
    if (impl_->cache_dir.empty()) return;
    std::error_code ec;
    std::filesystem::remove(impl_->cache_path(), ec);
    impl_->cache_loaded = false;
    impl_->cache_entries = nullptr;
}

}  // namespace qtsf
