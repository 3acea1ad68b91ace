#pragma once

// The ring of symmetric functions over Q(q,t), truncated by degree.
//
// A SymFunc is a finite linear combination of basis elements indexed by
// partitions, tagged with the basis it is written in.  SymAlgebra owns the
// per-degree transition data between the classical bases (monomial, power
// sum, elementary, homogeneous, Schur) and the two-parameter Macdonald bases
// P and M, plus both inner products, the nabla operator, the multiplicative
// norm phi, and multiplication adjoints.
//
// All coefficients are exact rational functions; every conversion is an exact
// change of basis and round-trips bit for bit.  Macdonald data is expensive
// to orthogonalize, so it can be persisted to a JSON cache file (value
// strings in the standard text grammar, with a format version and content
// checksum).

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qtsf/partition.hpp"
#include "qtsf/rational.hpp"

namespace qtsf {

enum class Basis { Monomial, PowerSum, Elementary, Homogeneous, Schur, MacP, MacM };

std::string basis_name(Basis b);

// z_lambda = prod_k k^{m_k} m_k!  (order of the centralizer of a permutation
// of cycle type lambda).
Rat z_of(const Partition& la);

class SymFunc {
  public:
    SymFunc() = default;  // zero, power-sum basis
    SymFunc(Basis b, std::map<Partition, QTRational> coeffs);

    static SymFunc zero(Basis b = Basis::PowerSum) { return SymFunc(b, {}); }
    static SymFunc unit(Basis b, const Partition& la);
    static SymFunc one(Basis b = Basis::PowerSum);

    Basis basis() const { return basis_; }
    const std::map<Partition, QTRational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int max_degree() const;  // largest |lambda| present; 0 if zero
    QTRational coeff(const Partition& la) const;

    // Same-basis linear arithmetic (UsageError on basis mismatch, except when
    // one side is zero).
    SymFunc operator-() const;
    SymFunc operator+(const SymFunc& o) const;
    SymFunc operator-(const SymFunc& o) const;
    SymFunc& operator+=(const SymFunc& o);
    SymFunc& operator-=(const SymFunc& o);
    SymFunc operator*(const QTRational& c) const;

    // Structural equality; zero compares equal across bases.
    friend bool operator==(const SymFunc&, const SymFunc&);

  private:
    Basis basis_ = Basis::PowerSum;
    std::map<Partition, QTRational> c_;  // no zero coefficients stored
};

class SymAlgebra {
  public:
    // cache_dir == "" disables the disk cache.
    explicit SymAlgebra(int degree_bound = 8, std::string cache_dir = "");
    ~SymAlgebra();
    SymAlgebra(const SymAlgebra&) = delete;
    SymAlgebra& operator=(const SymAlgebra&) = delete;

    int degree_bound() const;

    // Exact change of basis (UsageError above the degree bound).
    SymFunc convert(const SymFunc& f, Basis target) const;

    // Product; the result is returned in the power-sum basis.
    SymFunc multiply(const SymFunc& f, const SymFunc& g) const;

    // <p_lambda, p_lambda> = z_lambda, bases orthogonal.
    QTRational hall_inner(const SymFunc& f, const SymFunc& g) const;
    // <p_lambda, p_lambda>_{q,t} = z_lambda prod_i (1-q^{lambda_i})/(1-t^{lambda_i}).
    QTRational macdonald_inner(const SymFunc& f, const SymFunc& g) const;

    // P_lambda in the monomial basis: unitriangular under dominance and
    // orthogonal for the q,t inner product.
    SymFunc macdonald_P(const Partition& la) const;
    // M_lambda = P_lambda / prod_{box}(t^{-leg} - q^{arm+1}), monomial basis.
    SymFunc macdonald_M(const Partition& la) const;
    QTRational macdonald_norm(const Partition& la) const;  // <P_la, P_la>_{q,t}
    static QTRational macdonald_M_scale(const Partition& la);

    // nabla^r: diagonal on M_lambda with eigenvalue (prod_{box} chi_box)^r.
    // The result is expressed in the MacM basis.
    SymFunc nabla(const SymFunc& f, long r = 1) const;
    static QTRational nabla_eigenvalue(const Partition& la);

    // Multiplicative norm: p_k -> 1 for every k.
    QTRational norm_phi(const SymFunc& f) const;

    // The adjoint of multiplication by f under the q,t inner product,
    // applied to g; returned in the power-sum basis.
    SymFunc adjoint_mult(const SymFunc& f, const SymFunc& g) const;

    // Disk cache for the Macdonald orthogonalization.
    void cache_build(int up_to_degree) const;
    bool cache_verify(std::string* message = nullptr) const;
    void cache_clear() const;
    std::string cache_file() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace qtsf
