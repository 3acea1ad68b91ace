#pragma once

// Slope-m/n shuffle kernels P_k and E_k, realized as exact evaluators: the
// kernels never exist as expanded polynomials, only as symmetrized sums of
// rational-function terms evaluated at finite sets of box weights.
//
// An evaluation point is a list of boxes, each carrying a monomial weight
// w = q^x t^(-y) and a regularization group.  Before symmetrizing, every
// weight in group g is deformed by eps^g; the N!-term sum is assembled as an
// exact rational function of eps over Q(q, t) and the value is the limit at
// eps = 1 (removable factors of eps - 1 cancel; a surviving pole raises
// PoleAtTarget).  Any injective assignment of groups to rows yields the same
// limit.  The same machinery, with the auxiliary variable read as a scaling
// parameter xi at infinity, yields coproduct leading terms and degree scans.

#include <string>
#include <utility>
#include <vector>

#include "qtsf/partition.hpp"
#include "qtsf/rational.hpp"

namespace qtsf {

enum class KernelFamily { P, E };

// Descriptor of one kernel: family, multiplicity k >= 1, slope m/n with
// n >= 1 and gcd(m, n) = 1 (m may be negative or zero with n = 1).
struct ShuffleKernel {
    KernelFamily family;
    int k;
    int m;
    int n;

    ShuffleKernel(KernelFamily family, int k, int m, int n);

    int vars() const { return k * n; }    // number of variables N
    int degree() const { return k * m; }  // total degree M

    // "E[k=2,m=1,n=2]"
    std::string descriptor() const;
    static ShuffleKernel parse(const std::string& text);

    friend bool operator==(const ShuffleKernel&, const ShuffleKernel&) = default;
};

// Staircase exponent r_{m/n}(i) = ceil(mi/n) - ceil(m(i-1)/n), 1-based i.
int staircase_exp(int m, int n, int i);

// omega(x) = (1 - xq)(t - x) / ((1 - x)(t - xq))
QTRational omega_qt(const QTRational& x);

// One evaluation box: monomial weight (doubled exponents) plus the index of
// its regularization group.
struct EvalBox {
    QTMono weight;
    int group = 0;
    friend bool operator==(const EvalBox&, const EvalBox&) = default;
};

class EvaluationPoint {
  public:
    EvaluationPoint() = default;

    // Explicit box list; weights must be pairwise distinct.
    static EvaluationPoint from_boxes(std::vector<EvalBox> boxes);
    // Rows (base, length): row r holds base*q^j for j < length, group r.
    static EvaluationPoint from_rows(const std::vector<std::pair<QTMono, int>>& rows);
    // Rows of a skew shape: box (x, y) has weight q^x t^(-y), group y.
    static EvaluationPoint from_skew(const SkewShape& shape);
    // Single row starting at base (default weight 1).
    static EvaluationPoint single_row(int length, QTMono base = {0, 0});

    const std::vector<EvalBox>& boxes() const { return b_; }
    int size() const { return (int)b_.size(); }

    // All weights inverted (w -> 1/w), groups kept.
    EvaluationPoint inverted() const;
    // All weights multiplied by a monomial.
    EvaluationPoint scaled(const QTMono& c) const;
    // Same weights with new group indices.
    EvaluationPoint regrouped(std::vector<int> groups) const;

  private:
    std::vector<EvalBox> b_;
};

// A single pre-symmetrization term of the kernel at explicit weights
// (1-based slot i gets u[i-1]), prefactor included.  MathError on a pole.
QTRational kernel_term(const ShuffleKernel& kernel, const std::vector<QTMono>& u);

// The full symmetrized kernel value at a point with vars() boxes.
QTRational sym_evaluate(const ShuffleKernel& kernel, const EvaluationPoint& pt);

// Closed form for P_k^{m/n} at the hook (nk-l+1, 1^(l-1)), 1 <= l <= kn,
// valid for m >= 1, gcd(m, n) = 1.
QTRational eval_hook(int k, int m, int n, int l);

// Linear functional phi: the kernel at the single row (1, q, ..., q^(N-1)),
// scaled by q^(-(MN-M+N-k)/2) * prod_{i=1..N} (t - q^i)/(1 - q^i).
QTRational phi_norm_kernel(const ShuffleKernel& kernel);

// Wheel test at >= `trials` random exact rational points (both wheel
// patterns per trial): the cleared-denominator numerator of the symmetrized
// kernel must vanish whenever three variables are constrained to
// {q, 1/t, t/q} or {t, 1/q, q/t} cyclic ratios.  Vacuously true for N < 3.
// `corrupt` bumps a pairing-factor exponent (q -> q^2 in one numerator) to
// exercise the failure path; monomial perturbations alone cannot, since any
// symmetrized monomial times the pairing density still satisfies the wheels.
bool wheel_check(const ShuffleKernel& kernel, unsigned seed, int trials = 20,
                 bool corrupt = false);

// Leading coefficient of the kernel under xi-scaling of `left`, relative to
// xi^(m*l): the l-th coproduct component evaluated at (left, right).  The
// two parts must be pole-free points on their own; sizes l*n and (k-l)*n.
QTRational coproduct_limit(const ShuffleKernel& kernel, int l,
                           const EvaluationPoint& left, const EvaluationPoint& right);

// sym_evaluate(kernel, pt with inverted weights) == sym_evaluate(mirror, pt)
// where mirror has slope -m/n.
bool invert_check(const ShuffleKernel& kernel, const EvaluationPoint& pt);

// Value of the shuffle product of two kernels at a point with
// a.vars() + b.vars() boxes (full symmetrization over interleavings).
QTRational shuffle_product_eval(const ShuffleKernel& a, const ShuffleKernel& b,
                                const EvaluationPoint& pt);

// Exact xi-degree of the kernel at one random numeric sample (rational q, t,
// weights) with `scaled` of the N variables scaled by xi.  Returns the pair
// (degree, is_zero): is_zero reports that the sampled value vanished
// identically, in which case the degree is meaningless.
std::pair<long, bool> xi_degree_sample(const ShuffleKernel& kernel, unsigned seed,
                                       int scaled);

}  // namespace qtsf
