#include "qtsf/ribbon.hpp"

#include "qtsf/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qtsf {

namespace {

// Sort boxes into path order and check that they form an n-ribbon; returns
// nullopt instead of throwing so enumeration code can use it as a filter.
std::optional<std::vector<Box>> ribbon_path(std::vector<Box> boxes) {
    if (boxes.empty()) return std::nullopt;
    std::sort(boxes.begin(), boxes.end(), [](const Box& a, const Box& b) {
        return a.content() < b.content();
    });
    for (std::size_t i = 0; i + 1 < boxes.size(); ++i) {
        const Box &cur = boxes[i], &nxt = boxes[i + 1];
        bool east = nxt.x == cur.x + 1 && nxt.y == cur.y;
        bool south = nxt.x == cur.x && nxt.y == cur.y - 1;
        if (!east && !south) return std::nullopt;
    }
    return boxes;
}

Box nw_most(const std::set<Box>& cells) {
    Box best = *cells.begin();
    for (const Box& b : cells)
        if (b.y > best.y || (b.y == best.y && b.x < best.x)) best = b;
    return best;
}

// Repeatedly peel the ribbon that starts at the northwest-most remaining box
// and hugs the outer boundary: from (x, y) it steps east to (x+1, y) when that
// box remains and (x+1, y+1) does not, and south to (x, y-1) otherwise.
std::optional<std::vector<Ribbon>> peel_tiling(std::set<Box> cells, int n) {
    std::vector<Ribbon> out;
    while (!cells.empty()) {
        std::vector<Box> path{nw_most(cells)};
        for (int i = 1; i < n; ++i) {
            Box cur = path.back();
            Box east{cur.x + 1, cur.y};
            Box next = cells.count(east) && !cells.count({cur.x + 1, cur.y + 1})
                           ? east
                           : Box{cur.x, cur.y - 1};
            if (!cells.count(next)) return std::nullopt;
            path.push_back(next);
        }
        for (const Box& b : path) cells.erase(b);
        out.emplace_back(std::move(path));
    }
    return out;
}

std::set<Box> box_set(const SkewShape& sh) {
    auto v = sh.boxes();
    return {v.begin(), v.end()};
}

SkewShape transpose(const SkewShape& sh) {
    return {sh.inner.conjugate(), sh.outer.conjugate()};
}

Ribbon transpose(const Ribbon& r) {
    std::vector<Box> b;
    for (const Box& p : r.boxes()) b.push_back({p.y, p.x});
    return Ribbon(std::move(b));
}

// All east/south paths of n boxes inside 'cells' starting at 'start'.
void paths_from(const std::set<Box>& cells, std::vector<Box>& path, int n,
                std::vector<std::vector<Box>>& out) {
    if ((int)path.size() == n) {
        out.push_back(path);
        return;
    }
    Box cur = path.back();
    for (Box next : {Box{cur.x + 1, cur.y}, Box{cur.x, cur.y - 1}}) {
        if (!cells.count(next)) continue;
        path.push_back(next);
        paths_from(cells, path, n, out);
        path.pop_back();
    }
}

void tilings_rec(std::set<Box>& cells, int n, std::vector<Ribbon>& acc,
                 std::vector<std::vector<Ribbon>>& out) {
    if (cells.empty()) {
        out.push_back(acc);
        return;
    }
    // In any tiling, the ribbon through the northwest-most cell starts there.
    std::vector<std::vector<Box>> paths;
    std::vector<Box> seed{nw_most(cells)};
    paths_from(cells, seed, n, paths);
    for (auto& p : paths) {
        for (const Box& b : p) cells.erase(b);
        acc.emplace_back(p);
        tilings_rec(cells, n, acc, out);
        acc.pop_back();
        for (const Box& b : p) cells.insert(b);
    }
}

// All partitions kappa with lo contained in kappa contained in hi.
void intermediates_rec(const Partition& lo, const Partition& hi, int row,
                       int floor_above, std::vector<int>& acc,
                       std::vector<Partition>& out) {
    if (row < 0) {
        std::vector<int> parts(acc.rbegin(), acc.rend());
        out.push_back(Partition(std::move(parts)));
        return;
    }
    for (int v = std::max(lo.part(row), floor_above); v <= hi.part(row); ++v) {
        acc.push_back(v);
        intermediates_rec(lo, hi, row - 1, v, acc, out);
        acc.pop_back();
    }
}

std::vector<Partition> intermediates(const Partition& lo, const Partition& hi) {
    std::vector<Partition> out;
    std::vector<int> acc;
    intermediates_rec(lo, hi, hi.rows() - 1, 0, acc, out);
    return out;
}

void chains_rec(const Partition& cur, const Partition& outer, int n,
                int layers_left, std::vector<std::vector<Ribbon>>& layers,
                std::vector<RibbonTableau>& out) {
    if (layers_left == 0) {
        if (cur == outer) out.push_back({layers});
        return;
    }
    for (const Partition& next : intermediates(cur, outer)) {
        int step = next.boxes() - cur.boxes();
        if (step % n || (outer.boxes() - next.boxes()) % n) continue;
        std::vector<Ribbon> layer;
        if (step > 0) {
            auto cover = cover_vertical_strip(SkewShape(cur, next), n);
            if (!cover) continue;
            layer = std::move(*cover);
        }
        layers.push_back(std::move(layer));
        chains_rec(next, outer, n, layers_left - 1, layers, out);
        layers.pop_back();
    }
}

}  // namespace

Ribbon::Ribbon(std::vector<Box> boxes) {
    auto path = ribbon_path(std::move(boxes));
    if (!path) throw UsageError("ribbon boxes must form a connected east/south path");
    boxes_ = std::move(*path);
}

std::optional<Ribbon> try_ribbon(std::vector<Box> boxes) {
    auto path = ribbon_path(std::move(boxes));
    if (!path) return std::nullopt;
    return Ribbon(std::move(*path));
}

int Ribbon::height() const { return head().y - tail().y; }

int Ribbon::width() const { return tail().x - head().x; }

int ribbon_height(const Ribbon& r) { return r.height(); }

bool next_to(const Ribbon& a, const Ribbon& b) {
    std::set<Box> bs(b.boxes().begin(), b.boxes().end());
    // Shared edges keyed by (diagonal coordinate, -row); true marks vertical.
    std::vector<std::pair<std::pair<int, int>, bool>> edges;
    for (const Box& p : a.boxes()) {
        int c = p.content();
        if (bs.count({p.x + 1, p.y})) edges.push_back({{2 * c + 1, -p.y}, true});
        if (bs.count({p.x - 1, p.y})) edges.push_back({{2 * c - 1, -p.y}, true});
        if (bs.count({p.x, p.y + 1})) edges.push_back({{2 * c - 1, -p.y - 1}, false});
        if (bs.count({p.x, p.y - 1})) edges.push_back({{2 * c + 1, -p.y}, false});
    }
    if (edges.empty()) return false;
    return std::min_element(edges.begin(), edges.end())->second;
}

std::optional<std::vector<Ribbon>> cover_vertical_strip(const SkewShape& sh, int n) {
    if (n <= 0) throw UsageError("cover_vertical_strip: n must be positive");
    if (sh.size() % n) return std::nullopt;
    auto tiling = peel_tiling(box_set(sh), n);
    if (!tiling) return std::nullopt;
    for (std::size_t i = 0; i < tiling->size(); ++i)
        for (std::size_t j = i + 1; j < tiling->size(); ++j)
            if (next_to((*tiling)[i], (*tiling)[j])) return std::nullopt;
    return tiling;
}

std::optional<std::vector<Ribbon>> cover_horizontal_strip(const SkewShape& sh, int n) {
    auto cover = cover_vertical_strip(transpose(sh), n);
    if (!cover) return std::nullopt;
    std::vector<Ribbon> out;
    for (const Ribbon& r : *cover) out.push_back(transpose(r));
    return out;
}

std::vector<std::vector<Ribbon>> all_tilings(const SkewShape& sh, int n) {
    if (n <= 0) throw UsageError("all_tilings: n must be positive");
    if (sh.size() % n) return {};
    auto cells = box_set(sh);
    std::vector<std::vector<Ribbon>> out;
    std::vector<Ribbon> acc;
    tilings_rec(cells, n, acc, out);
    return out;
}

bool bubble_game(const SkewShape& sh, int n) {
    if (n <= 0) throw UsageError("bubble_game: n must be positive");
    std::map<int, std::pair<long, long>> rows;  // y -> [lo, hi)
    for (int y = 0; y < sh.outer.rows(); ++y) {
        long lo = sh.inner.part(y), hi = sh.outer.part(y);
        if (lo < hi) rows[y] = {lo, hi};
    }
    while (!rows.empty()) {
        auto top = std::prev(rows.end());
        int y = top->first;
        long a1 = top->second.first, a2 = top->second.second;
        if (a2 - a1 > n) return false;
        if (a2 - a1 == n) {
            rows.erase(top);
            continue;
        }
        rows.erase(top);
        // Slide the strip down, merging with resident strips, until it either
        // reaches exactly n boxes (remove it and restart from the top) or the
        // game is lost.
        for (;;) {
            auto below = rows.lower_bound(y);
            if (below == rows.begin()) return false;  // stuck at the bottom
            --below;
            long d = y - below->first;
            a1 -= d;
            a2 -= d;
            auto [b1, b2] = below->second;
            long lo = std::min(a1, b1), hi = std::max(a2, b2);
            if (hi - lo > (a2 - a1) + (b2 - b1)) return false;  // gap in the span
            long o1 = std::max(a1, b1), o2 = std::min(a2, b2);
            if (o1 < o2)
                below->second = {o1, o2};  // overlap stays put
            else
                rows.erase(below);
            y -= (int)d;
            a1 = lo;
            a2 = hi;
            if (a2 - a1 > n) return false;
            if (a2 - a1 == n) break;
        }
    }
    return true;
}

std::vector<Ribbon> RibbonTableau::ribbons() const {
    std::vector<Ribbon> out;
    for (const auto& layer : layers) out.insert(out.end(), layer.begin(), layer.end());
    return out;
}

std::vector<int> RibbonTableau::layer_sizes() const {
    std::vector<int> out;
    for (const auto& layer : layers) out.push_back((int)layer.size());
    return out;
}

int RibbonTableau::total_height() const {
    int h = 0;
    for (const auto& layer : layers)
        for (const Ribbon& r : layer) h += r.height();
    return h;
}

std::vector<RibbonTableau> enumerate_ribbon_tableaux(const SkewShape& sh, int n,
                                                     int num_layers) {
    if (n <= 0) throw UsageError("enumerate_ribbon_tableaux: n must be positive");
    if (num_layers < 0) throw UsageError("enumerate_ribbon_tableaux: negative layers");
    if (sh.size() % n) return {};
    std::vector<RibbonTableau> out;
    std::vector<std::vector<Ribbon>> layers;
    chains_rec(sh.inner, sh.outer, n, num_layers, layers, out);
    return out;
}

std::vector<Ribbon> normalize_tiling(std::vector<Ribbon> tiling) {
    std::sort(tiling.begin(), tiling.end());
    return tiling;
}

std::vector<std::vector<Ribbon>> tableau_tilings(const SkewShape& sh, int n) {
    if (n <= 0) throw UsageError("tableau_tilings: n must be positive");
    if (sh.size() % n) return {};
    // Memoized walk over single-ribbon additions from the inner shape up.
    std::map<std::vector<int>, std::vector<std::vector<Ribbon>>> memo;
    auto rec = [&](auto&& self, const Partition& kappa)
        -> const std::vector<std::vector<Ribbon>>& {
        auto it = memo.find(kappa.parts());
        if (it != memo.end()) return it->second;
        std::vector<std::vector<Ribbon>> res;
        if (kappa == sh.outer) {
            res.push_back({});
        } else {
            std::set<std::vector<Ribbon>> seen;
            for (const Partition& next : intermediates(kappa, sh.outer)) {
                if (next.boxes() != kappa.boxes() + n) continue;
                auto step = ribbon_path(SkewShape(kappa, next).boxes());
                if (!step) continue;
                Ribbon rib(*step);
                for (const auto& rest : self(self, next)) {
                    auto tiling = rest;
                    tiling.push_back(rib);
                    seen.insert(normalize_tiling(std::move(tiling)));
                }
            }
            res.assign(seen.begin(), seen.end());
        }
        return memo.emplace(kappa.parts(), std::move(res)).first->second;
    };
    return rec(rec, sh.inner);
}

int CollapseGraph::components() const {
    int v = (int)tilings.size();
    std::vector<int> parent(v);
    for (int i = 0; i < v; ++i) parent[i] = i;
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    int roots = 0;
    for (int i = 0; i < v; ++i)
        if (find(i) == i) roots++;
    return roots;
}

bool CollapseGraph::connected() const { return components() <= 1; }

CollapseGraph collapse_graph(const SkewShape& sh, int n) {
    CollapseGraph g;
    g.tilings = tableau_tilings(sh, n);
    auto boxes_of = [](const std::vector<Ribbon>& ribs) {
        std::vector<Box> out;
        for (const Ribbon& r : ribs)
            out.insert(out.end(), r.boxes().begin(), r.boxes().end());
        std::sort(out.begin(), out.end());
        return out;
    };
    auto total_ht = [](const std::vector<Ribbon>& ribs) {
        int h = 0;
        for (const Ribbon& r : ribs) h += r.height();
        return h;
    };
    for (std::size_t i = 0; i < g.tilings.size(); ++i) {
        for (std::size_t j = i + 1; j < g.tilings.size(); ++j) {
            std::vector<Ribbon> d1, d2;
            std::set_difference(g.tilings[i].begin(), g.tilings[i].end(),
                                g.tilings[j].begin(), g.tilings[j].end(),
                                std::back_inserter(d1));
            std::set_difference(g.tilings[j].begin(), g.tilings[j].end(),
                                g.tilings[i].begin(), g.tilings[i].end(),
                                std::back_inserter(d2));
            if (d1.size() != 2 || d2.size() != 2) continue;
            if (boxes_of(d1) != boxes_of(d2)) continue;
            if (std::abs(total_ht(d1) - total_ht(d2)) != 2) continue;
            g.edges.push_back({(int)i, (int)j});
        }
    }
    return g;
}

std::optional<std::vector<Ribbon>> minimal_tableau(const SkewShape& sh, int n) {
    if (n <= 0) throw UsageError("minimal_tableau: n must be positive");
    if (sh.size() % n) return std::nullopt;
    return peel_tiling(box_set(sh), n);
}

}  // namespace qtsf
