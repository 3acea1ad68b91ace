#pragma once

// Partitions, boxes, skew shapes, and their combinatorial statistics.
//
// Boxes are addressed by the coordinates (x, y) of their southwest corner,
// x growing east and y growing north, with the partition anchored at the
// origin: row y of the Young diagram of lambda holds boxes (0, y) ...
// (lambda_y - 1, y).  The weight of a box is chi = q^x t^(-y) and its
// content is o = x - y.

#include <string>
#include <utility>
#include <vector>

#include "qtsf/errors.hpp"
#include "qtsf/rational.hpp"

namespace qtsf {

struct Box {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const Box&, const Box&) = default;
    int content() const { return x - y; }
    // chi as a monomial with doubled exponents (2x, -2y)
    QTMono weight2() const { return {2 * x, -2 * y}; }
    QTRational weight() const { return QTRational::mono(2 * x, -2 * y); }
};

class Partition {
  public:
    Partition() = default;
    explicit Partition(std::vector<int> parts);
    static Partition empty() { return {}; }

    const std::vector<int>& parts() const { return p_; }
    int rows() const { return (int)p_.size(); }
    int part(int i) const { return i >= 0 && i < rows() ? p_[i] : 0; }  // 0-based
    int boxes() const;                                                 // |lambda|
    bool is_empty() const { return p_.empty(); }
    bool has_box(const Box& b) const {
        return b.x >= 0 && b.y >= 0 && b.x < part(b.y);
    }

    Partition conjugate() const;
    // row lengths of the conjugate, i.e. column heights
    int col_height(int x) const;

    friend auto operator<=>(const Partition&, const Partition&) = default;

  private:
    std::vector<int> p_;
};

struct SkewShape {
    Partition inner;  // mu
    Partition outer;  // lambda
    SkewShape() = default;
    SkewShape(Partition mu, Partition lambda);
    int size() const { return outer.boxes() - inner.boxes(); }
    std::vector<Box> boxes() const;  // rows bottom-up, x ascending
    bool has_box(const Box& b) const {
        return outer.has_box(b) && !inner.has_box(b);
    }
    friend bool operator==(const SkewShape&, const SkewShape&) = default;
};

// arm and leg lengths of a box inside lambda
std::pair<int, int> arm_leg(const Partition& lambda, const Box& b);

// Inner corners = positions where a box can be added; outer corners =
// positions diagonally adjacent (x+1, y+1) to removable boxes (x, y).
// Both listed southwest to northeast (ascending content).
struct Corners {
    std::vector<Box> inner;
    std::vector<Box> outer;
};
Corners corners(const Partition& lambda);

bool containment_leq(const Partition& mu, const Partition& lambda);
// dominance; requires |mu| = |lambda|
bool dominance_leq(const Partition& mu, const Partition& lambda);

// All partitions of n, in deterministic descending-lex order:
// (n), (n-1,1), ..., (1^n).
std::vector<Partition> enumerate_partitions(int n);
// All lambda containing mu with |lambda \ mu| = n, in the enumeration order
// of partitions of |mu| + n.
std::vector<Partition> enumerate_over(const Partition& mu, int n);

// sum of contents over the shape
long content_sum(const SkewShape& sh);
// number of unordered pairs of distinct boxes with equal content
long same_diag_pairs(const SkewShape& sh);
// min_lambda = -sum of legs; max_lambda = |lambda| + sum of arms
long min_stat(const Partition& lambda);
long max_stat(const Partition& lambda);

}  // namespace qtsf
