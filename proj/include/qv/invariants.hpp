#pragma once
// Invariant theory of the graded ring R_V: Reynolds-type averaging operators,
// invariant dimensions (brute force and closed formula for unipotent groups),
// Dickson-style invariant polynomials, the reciprocal invariants h_i, and
// quotient-variety weight data for weighted projective spaces.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qv/fqmat.hpp"
#include "qv/gfq.hpp"
#include "qv/linalg.hpp"
#include "qv/ratfun.hpp"
#include "qv/rvring.hpp"

namespace qv::invariants {

using gfq::Elt;
using gfq::Field;
using ratfun::LinFrac;
using ratfun::MPoly;

// ---------------------------------------------------------------------------
// Averaging (Reynolds-type) operators
// ---------------------------------------------------------------------------

// Sum of g.x over all g in H (no 1/|H| normalisation; |H| may kill char).
LinFrac reynolds_sum(const Field& F, const linalg::Group& H, const LinFrac& x);

// ---------------------------------------------------------------------------
// Invariant dimensions
// ---------------------------------------------------------------------------

// Caches the row-expansion (over the common denominator D_n) of g.b_j for all
// basis elements b_j of the graded piece of degree -n, keyed by the matrix g.
// Shared across many subgroup computations in the same (Context, n).
class ActionCache {
 public:
  ActionCache(const rvring::Context& ctx, int n) : ctx_(ctx), n_(n) {}

  // Matrix whose row j is the expansion of g.b_j in the monomial support of
  // the graded piece (same column order as the piece's own rows).
  const fqmat::Mat& rows_for(const fqmat::Mat& g);

  const rvring::Context& ctx() const { return ctx_; }
  int n() const { return n_; }

 private:
  const rvring::Context& ctx_;
  int n_;
  std::map<std::vector<Elt>, fqmat::Mat> cache_;
};

// dim of the H-fixed subspace of the graded piece of degree -n, computed by
// stacking the matrices A_g - B horizontally over a generating set of H
// (A_g = action rows of g, B = identity expansion rows) and taking
// dim = h_r(n) - rank.  Passing a cache reuses action rows across calls.
long long invariant_dim_bruteforce(const rvring::Context& ctx,
                                   const linalg::Group& H, int n,
                                   ActionCache* cache = nullptr);

// True if every element of H has p-power order (p = char of F).
bool is_unipotent(const Field& F, const linalg::Group& H);

// Closed formula for dim of the H-fixed subspace in degree -n, valid for
// unipotent H:   sum_{s=1}^r |H\G/L_s| / [P_s : U*L_s] * C(n-1, s-1),
// with the generalized binomial (so n = 0 gives dim 1).  The index
// [P_s : U*L_s] is computed from the actual subgroup product U*L_s, and each
// division is checked to be exact (throws std::logic_error otherwise).
// Throws std::invalid_argument if H is not unipotent.
//
// The n-independent part (the coset ratios per s) can be computed once and
// evaluated at many n.
struct UnipotentFormulaData {
  int r = 0;
  std::vector<long long> coset_ratio;  // |H\G/L_s| / [P_s:U*L_s], s = 1..r
};

UnipotentFormulaData unipotent_formula_data(const Field& F, int r,
                                            const linalg::Group& H);
long long unipotent_dim_eval(const UnipotentFormulaData& data, long long n);
long long unipotent_dim_formula(const Field& F, int r, const linalg::Group& H,
                                long long n);

// ---------------------------------------------------------------------------
// Dickson-style invariants of the polynomial ring
// ---------------------------------------------------------------------------

struct DicksonData {
  // Coefficients of k(T) = prod_{v in V} (T - l_v) as a polynomial in T with
  // coefficients in F[X_1..X_r]; kT[j] is the coefficient of T^j, so
  // kT.size() == q^r + 1.  All coefficients outside T-degrees q^0..q^r and
  // T^{q^r} vanish; k(T) = T^{q^r} + sum_i k[i] T^{q^i}.
  std::vector<MPoly> kT;
  std::vector<MPoly> k;  // k[i] = k_i for 0 <= i < r, homogeneous of degree q^r - q^i
  std::vector<MPoly> g;  // g[i-1] = g_i = prod_{u in V_{i-1}} (X_i + u), degree q^{i-1}
  MPoly kp0;             // k'_0 = product of the projective representatives, degree (q^r-1)/(q-1)
  Elt kp0_relation;      // the constant c with (k'_0)^{q-1} = c * k_0
};

DicksonData dickson(const Field& F, int r);

// ---------------------------------------------------------------------------
// The reciprocal invariants h_i in R_V
// ---------------------------------------------------------------------------

struct HInvariants {
  // h[i-1] = h_i for 1 <= i <= r: h_i = k_i / k_0 for i < r and h_r = 1 / k_0,
  // all as reduced fractions homogeneous of degree -(q^i - 1).
  std::vector<LinFrac> h;
  // Coefficients of h(T) = prod_{v in V, v != 0} (T - 1/v); hT[j] is the
  // coefficient of T^j, size q^r.  h(T) = T^{q^r-1} + sum_i h_i T^{q^r-q^i}.
  std::vector<LinFrac> hT;
};

// with_hT = false skips the h(T) coefficient product (the h_i themselves are
// always computed).
HInvariants h_invariants(const rvring::Context& ctx, bool with_hT = true);

// Evaluate a polynomial in one variable T with LinFrac coefficients at x.
LinFrac unipoly_eval(const Field& F, const std::vector<LinFrac>& coeffs,
                     const LinFrac& x);

// ---------------------------------------------------------------------------
// Invariant Hilbert series checks
// ---------------------------------------------------------------------------

enum class InvWhich { U, G, Gprime };  // U_r, GL_r, SL_r

// Degrees (in -1 units) of the predicted free generators of the invariant
// ring inside R_V:  U -> (1,...,1);  G -> (q-1, q^2-1, ..., q^r-1);
// Gprime -> (q-1, ..., q^{r-1}-1, (q^r-1)/(q-1)).
std::vector<long long> invariant_weights(InvWhich which, int r, long q);

// Number of monomials m in the given generator degrees with total weighted
// degree exactly n (DP count of solutions of sum m_i d_i = n, m_i >= 0).
long long monomial_count(const std::vector<long long>& weights, long long n);

struct InvariantRow {
  int n;
  long long brute;      // dim of the fixed space, brute force
  long long predicted;  // monomial count in the predicted generator degrees
  bool ok;
};

// Compares brute-force invariant dimensions against the free-generator
// prediction for n = 0..n_max.  The group is U_r, GL_r, or SL_r of the
// context's field and rank.
std::vector<InvariantRow> invariant_hilbert_check(const rvring::Context& ctx,
                                                  InvWhich which, int n_max);

// ---------------------------------------------------------------------------
// Weighted projective quotient data
// ---------------------------------------------------------------------------

// The six quotient families; weights listed in the natural generator order.
//   QU : Q_V / U  -> (1, 1, ..., 1)                      (r entries)
//   PU : P_V / U  -> (1, q, q^2, ..., q^{r-1})
//   QG : Q_V / G  -> (q-1, q^2-1, ..., q^r-1)
//   PG : P_V / G  -> (q^r-1, q^r-q, ..., q^r-q^{r-1})
//   QGp: Q_V / G' -> (q-1, ..., q^{r-1}-1, (q^r-1)/(q-1))
//   PGp: P_V / G' -> ((q^r-1)/(q-1), q^r-q, ..., q^r-q^{r-1})
enum class WpCase { QU, PU, QG, PG, QGp, PGp };

std::vector<long long> wp_weights(WpCase c, int r, long q);

// Regularity test for the weighted projective space P(d_1,...,d_r):
// first divide out the gcd of all weights, then require for every prime l
// that the maximal l-adic valuation among the weights is attained at least
// r-1 times.
bool wp_regular(std::vector<long long> w);

}  // namespace qv::invariants
