#pragma once
// The graded ring R_V over F_q: reciprocal generators, the elements f_i, the
// sets Delta_i / E_i, graded-piece bases with certified rank, coordinates,
// the Hilbert function h_r, relation residues, freeness evidence, and the
// cohomology dimension formulas.
//
// Graded-piece linear algebra works over the common denominator
// D_n = prod over projective representatives l of l^n: every reduced element
// of R_{V,-n} has denominator dividing D_n, so membership and coordinates
// become exact rank computations.
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "qv/ratfun.hpp"

namespace qv::rvring {

using gfq::Elt;
using gfq::Field;
using linalg::VecF;
using ratfun::Key;
using ratfun::LinForm;
using ratfun::LinFrac;
using ratfun::MPoly;

// exact binomial coefficient; 0 for 0 <= n < k, requires n >= 0, k >= 0
long long binom(long long n, long long k);
// the polynomial C(T,k) evaluated at any integer T (falling factorial / k!)
long long binom_gen(long long T, int k);

// h_r(n) = sum over I subset {2..r} of q^{sum_{i in I}(i-1)} * C(n,|I|);
// returns 0 for n < 0 (this is dim R_{V,-n})
long long hilbert_h(int r, long q, long long n);
// the same polynomial evaluated with generalized binomials (any integer n)
long long hilbert_poly(int r, long q, long long n);
// a_{r,s} = sum over I subset {2..r}, |I|=s of prod_{i in I}(q^{i-1}-1)
long long a_rs(int r, long q, int s);
// dim H^i of the twist O(n): h_r(n) at i=0, n>=0; |hilbert_poly(n)| at
// i=r-1, n<0; otherwise 0
long long coh_dim(int i, long long n, int r, long q);

// Label of a spanning element e * f_1^a * prod_{i in I} f_i^{b_i} where
// I subset {2..r}, e = prod_{i in I} (one element of E_i), b_i >= 0 and
// |I| + a + sum b_i = n.  Deterministic order: I as an ascending bitmask
// (bit i-2 for member i), then e by u-codes in odometer order (larger i
// fastest), then (a; b) ascending lexicographically with a first.
struct BasisLabel {
    unsigned mask = 0;                  // bit (i-2) set iff i in I
    std::vector<std::uint64_t> e_codes; // codes of u in V_{i-1}, i ascending
    int a = 0;                          // exponent of f_1
    std::vector<int> b;                 // exponents of f_i, i in I ascending
};

struct GradedPiece {
    int n = 0;
    std::vector<BasisLabel> labels;
    std::vector<LinFrac> elems;
    std::vector<Key> support;  // grlex-descending; column j <-> support[j]
    fqmat::Mat rows;           // |elems| x |support| numerator expansions
    fqmat::Ech ech;            // echelon form of rows, for exact solves
    int rank = 0;              // certified: equals hilbert_h(r, q, n)

    std::optional<int> col_of(Key k) const;
};

class Context {
public:
    Context(long q, int r);
    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

    const Field& field() const { return F_; }
    int r() const { return r_; }
    long q() const { return F_.q(); }
    // projective representatives of V, enumeration (code) order
    const std::vector<VecF>& reps() const { return reps_; }

    // 1/v as an element of R_V (exact, with the (Rel 1) scaling)
    LinFrac gen_recip(const VecF& v) const;
    // f_i = sum_{u in V_{i-1}} 1/(X_i + u), homogeneous of degree -1
    const LinFrac& f_elem(int i) const;
    // Delta_i = {1} union {1/(X_i+u) : u in V_{i-1} nonzero}, size q^{i-1}
    const std::vector<LinFrac>& delta_set(int i) const;
    // E_i = {1/(X_i+u) : u in V_{i-1}}, size q^{i-1}
    const std::vector<LinFrac>& e_set(int i) const;

    // numerator of x when written over D_n; nullopt if the reduced
    // denominator does not divide D_n (then x is not in R_{V,-n})
    std::optional<MPoly> expand_over_Dn(const LinFrac& x, int n) const;

    // lazily built, cached graded piece (throws std::length_error beyond
    // kMaxGradedDim rows)
    const GradedPiece& piece(int n) const;

    // coordinates of x in piece(n).elems, or nullopt when x lies outside
    // R_{V,-n}; throws std::invalid_argument on non-homogeneous x
    std::optional<std::vector<Elt>> coords_in_basis(const LinFrac& x, int n) const;

    static constexpr int kMaxGradedDim = 4096;

private:
    const Field& F_;
    int r_;
    std::vector<VecF> reps_;
    std::vector<LinFrac> f_;                     // index 1..r
    std::vector<std::vector<LinFrac>> delta_, e_;
    mutable std::map<int, std::unique_ptr<GradedPiece>> pieces_;
};

// residues of the defining relations under Y_v -> 1/v; all must be zero
struct RelationReport {
    // family 1: 1/(alpha v) - alpha^{-1} (1/v) for v != 0, alpha != 0, 1
    std::vector<LinFrac> family1;
    // family 2: (1/v)(1/v') - (1/(v+v'))(1/v + 1/v') over unordered pairs
    // with v + v' != 0
    std::vector<LinFrac> family2;
    bool all_zero() const;
};
RelationReport relation_residues(const Context& C);

// evidence for Thm. "free module of rank q^{r(r-1)/2} with basis
// Delta_1 ... Delta_r": in each degree -n the products delta * f-monomial
// number exactly h_r(n) and have full rank h_r(n)
struct FreenessRow {
    int n = 0;
    long long count = 0;
    long long rank = 0;
    long long h = 0;
    bool ok = false;
};
std::vector<FreenessRow> freeness_check(const Context& C, int n_max);

// all products delta_1 * ... * delta_r, delta_i in Delta_i (the module
// basis), odometer order with larger i fastest; size q^{r(r-1)/2}
std::vector<LinFrac> delta_products(const Context& C);

}  // namespace qv::rvring
