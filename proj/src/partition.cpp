#include "qtsf/partition.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace qtsf {

Partition::Partition(std::vector<int> parts) : p_(std::move(parts)) {
    while (!p_.empty() && p_.back() == 0) p_.pop_back();
    for (std::size_t i = 0; i < p_.size(); ++i) {
        if (p_[i] <= 0) throw UsageError("partition parts must be positive");
        if (i && p_[i] > p_[i - 1]) throw UsageError("partition parts must decrease");
    }
}

int Partition::boxes() const { return std::accumulate(p_.begin(), p_.end(), 0); }

Partition Partition::conjugate() const {
    if (p_.empty()) return {};
    std::vector<int> c(p_[0], 0);
    for (int v : p_)
        for (int x = 0; x < v; ++x) c[x]++;
    return Partition(std::move(c));
}

int Partition::col_height(int x) const {
    int h = 0;
    while (h < rows() && p_[h] > x) ++h;
    return h;
}

SkewShape::SkewShape(Partition mu, Partition lambda)
    : inner(std::move(mu)), outer(std::move(lambda)) {
    if (!containment_leq(inner, outer))
        throw UsageError("skew shape requires inner contained in outer");
}

std::vector<Box> SkewShape::boxes() const {
    std::vector<Box> out;
    for (int y = 0; y < outer.rows(); ++y)
        for (int x = inner.part(y); x < outer.part(y); ++x) out.push_back({x, y});
    return out;
}

std::pair<int, int> arm_leg(const Partition& lambda, const Box& b) {
    if (!lambda.has_box(b)) throw UsageError("arm_leg: box outside diagram");
    int arm = lambda.part(b.y) - 1 - b.x;
    int leg = lambda.col_height(b.x) - 1 - b.y;
    return {arm, leg};
}

Corners corners(const Partition& lambda) {
    Corners c;
    int rows = lambda.rows();
    for (int y = 0; y < rows; ++y)
        if (y == 0 || lambda.part(y - 1) > lambda.part(y))
            c.inner.push_back({lambda.part(y), y});
    c.inner.push_back({0, rows});
    for (int y = 0; y < rows; ++y)
        if (lambda.part(y) > lambda.part(y + 1))
            c.outer.push_back({lambda.part(y), y + 1});
    auto by_content = [](const Box& a, const Box& b) { return a.content() < b.content(); };
    std::sort(c.inner.begin(), c.inner.end(), by_content);
    std::sort(c.outer.begin(), c.outer.end(), by_content);
    return c;
}

bool containment_leq(const Partition& mu, const Partition& lambda) {
    for (int i = 0; i < mu.rows(); ++i)
        if (mu.part(i) > lambda.part(i)) return false;
    return true;
}

bool dominance_leq(const Partition& mu, const Partition& lambda) {
    if (mu.boxes() != lambda.boxes())
        throw UsageError("dominance comparison requires equal sizes");
    long sm = 0, sl = 0;
    int n = std::max(mu.rows(), lambda.rows());
    for (int i = 0; i < n; ++i) {
        sm += mu.part(i);
        sl += lambda.part(i);
        if (sm > sl) return false;
    }
    return true;
}

namespace {
void gen_parts(int n, int cap, std::vector<int>& cur, std::vector<Partition>& out) {
    if (n == 0) {
        out.push_back(Partition(cur));
        return;
    }
    for (int first = std::min(n, cap); first >= 1; --first) {
        cur.push_back(first);
        gen_parts(n - first, first, cur, out);
        cur.pop_back();
    }
}
}  // namespace

std::vector<Partition> enumerate_partitions(int n) {
    if (n < 0) throw UsageError("enumerate_partitions: negative size");
    std::vector<Partition> out;
    std::vector<int> cur;
    gen_parts(n, n, cur, out);
    return out;
}

std::vector<Partition> enumerate_over(const Partition& mu, int n) {
    if (n < 0) throw UsageError("enumerate_over: negative size");
    std::vector<Partition> out;
    for (auto& lam : enumerate_partitions(mu.boxes() + n))
        if (containment_leq(mu, lam)) out.push_back(lam);
    return out;
}

long content_sum(const SkewShape& sh) {
    long o = 0;
    for (const Box& b : sh.boxes()) o += b.content();
    return o;
}

long same_diag_pairs(const SkewShape& sh) {
    std::map<int, long> cnt;
    for (const Box& b : sh.boxes()) cnt[b.content()]++;
    long pairs = 0;
    for (auto& [o, k] : cnt) pairs += k * (k - 1) / 2;
    return pairs;
}

long min_stat(const Partition& lambda) {
    long s = 0;
    for (const Box& b : SkewShape(Partition::empty(), lambda).boxes())
        s += arm_leg(lambda, b).second;
    return -s;
}

long max_stat(const Partition& lambda) {
    long s = 0;
    for (const Box& b : SkewShape(Partition::empty(), lambda).boxes())
        s += arm_leg(lambda, b).first;
    return lambda.boxes() + s;
}

}  // namespace qtsf
