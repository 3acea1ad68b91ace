#pragma once

#include "qtsf/partition.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace qtsf {

// An n-ribbon: a connected set of n boxes containing exactly one box on each
// of n consecutive diagonals.  Boxes are stored in path order from the
// northwest end to the southeast end: contents increase by one along the path
// and every step moves either east (x+1, y) or south (x, y-1).
class Ribbon {
public:
    Ribbon() = default;
    explicit Ribbon(std::vector<Box> boxes);

    const std::vector<Box>& boxes() const { return boxes_; }
    int size() const { return static_cast<int>(boxes_.size()); }
    // Number of rows spanned minus one (the number of south steps).
    int height() const;
    // Number of columns spanned minus one (the number of east steps).
    int width() const;
    Box head() const { return boxes_.front(); }  // northwest end
    Box tail() const { return boxes_.back(); }   // southeast end

    bool operator==(const Ribbon&) const = default;
    auto operator<=>(const Ribbon&) const = default;

private:
    std::vector<Box> boxes_;
};

int ribbon_height(const Ribbon& r);

// The boxes as a ribbon if they form one, nullopt otherwise.
std::optional<Ribbon> try_ribbon(std::vector<Box> boxes);

// Two disjoint ribbons are "next to" each other when they share at least one
// unit edge and, among all shared edges ordered along the common boundary
// (southwest to northeast), the first one is vertical.  Shared edges are
// keyed by (diagonal coordinate, -row): a vertical edge between boxes (x, y)
// and (x+1, y) gets key (2(x-y)+1, -y); a horizontal edge between boxes
// (x, y) and (x, y+1) gets key (2(x-y)-1, -y-1).
bool next_to(const Ribbon& a, const Ribbon& b);

// A vertical strip of n-ribbons is a tiling in which no two ribbons are next
// to each other.  Any skew shape admits at most one such cover; it is found
// by repeatedly peeling the ribbon that starts at the northwest-most box and
// traces the outer boundary.  Returns the ribbons in peel order (the ribbon
// containing the northwest-most box first), or nullopt when no cover exists.
std::optional<std::vector<Ribbon>> cover_vertical_strip(const SkewShape& sh, int n);

// Horizontal counterpart, defined by transposing the shape, covering with a
// vertical strip, and transposing the resulting ribbons back.
std::optional<std::vector<Ribbon>> cover_horizontal_strip(const SkewShape& sh, int n);

// All tilings of the skew shape into n-ribbons (no strip condition).
std::vector<std::vector<Ribbon>> all_tilings(const SkewShape& sh, int n);

// Bubble game on the rows of a skew shape.  Repeatedly: if the topmost strip
// has more than n boxes the game is lost, if it has exactly n boxes it is
// removed, and otherwise it slides diagonally southwest onto the next
// nonempty row below.  When a slid strip lands on a resident strip, the two
// are re-read as the spanning interval (which keeps sliding) and the
// overlap interval (which stays put); spans longer than n, spans with a gap,
// and strips stuck at the bottom with fewer than n boxes lose.  The game is
// won when every box has been removed.  Winning is equivalent to the shape
// being coverable by a vertical strip of n-ribbons.
bool bubble_game(const SkewShape& sh, int n);

// A ribbon tableau: a chain of partitions from the inner shape to the outer
// shape in which every step adds a (possibly empty) vertical strip of
// n-ribbons.  layers[0] is the innermost step.
struct RibbonTableau {
    std::vector<std::vector<Ribbon>> layers;

    std::vector<Ribbon> ribbons() const;          // all ribbons, layer by layer
    std::vector<int> layer_sizes() const;         // ribbons per layer
    int total_height() const;                     // sum of ribbon heights
};

// All ribbon tableaux of the given shape with exactly num_layers layers.
// Layers may be empty.
std::vector<RibbonTableau> enumerate_ribbon_tableaux(const SkewShape& sh, int n,
                                                     int num_layers);

// Canonical form of a tiling: boxes within each ribbon in path order, ribbons
// sorted lexicographically.
std::vector<Ribbon> normalize_tiling(std::vector<Ribbon> tiling);

// The distinct tilings that arise from at least one ribbon tableau of the
// shape, i.e. tilings whose ribbons can be added one at a time through
// partition shapes.  Tilings are returned in normalized form.
std::vector<std::vector<Ribbon>> tableau_tilings(const SkewShape& sh, int n);

// Graph on the tableau tilings of a shape: two tilings are joined by an edge
// when they differ in exactly two ribbons, those ribbons cover the same boxes,
// and the two total heights differ by exactly two.
struct CollapseGraph {
    std::vector<std::vector<Ribbon>> tilings;
    std::vector<std::pair<int, int>> edges;  // index pairs into tilings, i < j

    int components() const;
    bool connected() const;
};

CollapseGraph collapse_graph(const SkewShape& sh, int n);

// The tiling produced by repeatedly peeling the boundary-tracing ribbon that
// starts at the northwest-most remaining box.  Absent exactly when the shape
// has no ribbon tiling at all.
std::optional<std::vector<Ribbon>> minimal_tableau(const SkewShape& sh, int n);

}  // namespace qtsf
