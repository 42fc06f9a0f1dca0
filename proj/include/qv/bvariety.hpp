#pragma once
// The smooth compactification B_V at point level over k = F_{q^m}: validity
// of hyperplane collections, flag strata and the stratum-finding recursion,
// affine chart coordinates, product decompositions of closed strata, the
// projections to P- and Q-points, symbolic boundary vanishing orders, and
// point counts.

#include <optional>
#include <map>
#include <utility>
#include <vector>

#include "qv/gfq.hpp"
#include "qv/linalg.hpp"
#include "qv/modular.hpp"

namespace qv::bvariety {

using gfq::Elt;
using gfq::Field;
using linalg::Flag;
using linalg::Subspace;
using linalg::VecF;

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

// Shares the field setup of modular::KCtx and fixes the list of all nonzero
// F_q-subspaces of V = F_q^r, which is the index set of a BPoint.
class BCtx {
 public:
  BCtx(long q, int r, int m);

  const modular::KCtx& K() const { return K_; }
  const Field& base() const { return K_.base(); }  // F_q
  const Field& ext() const { return K_.ext(); }    // k = F_{q^m}
  const gfq::Embedding& emb() const { return K_.emb(); }
  int r() const { return K_.r(); }
  int m() const { return K_.m(); }
  long q() const { return K_.q(); }

  const std::vector<Subspace>& subs() const { return subs_; }
  int index_of(const Subspace& s) const;  // throws std::invalid_argument

 private:
  modular::KCtx K_;
  std::vector<Subspace> subs_;
  std::map<Subspace, int> index_;
};

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

// A point of B_V(k): one nonzero functional phi_{V'} on V' (x) k per nonzero
// subspace V' (BCtx::subs order), each stored by its values on the RREF basis
// rows of V' and considered modulo k^x; the hyperplane E_{V'} = ker phi_{V'}.
// Canonical form scales each functional so its first nonzero value is 1.
struct BPoint {
  std::vector<std::vector<Elt>> phi;
  auto operator<=>(const BPoint&) const = default;
};

BPoint canonicalize(const BCtx& B, BPoint pt);

// Values of phi_{V'} restricted to a subspace V'' <= V', on V'''s basis rows.
std::vector<Elt> restrict_functional(const BCtx& B, const Subspace& sup,
                                     const std::vector<Elt>& phi_sup,
                                     const Subspace& sub);

// First violated constraint, std::nullopt iff pt is a valid point.  A corank
// failure (phi_{V'} = 0) reports the pair (V', V'); a nesting failure
// (restriction of phi_{V'} to V'' neither zero nor proportional to phi_{V''})
// reports (V'', V').  Throws std::invalid_argument on malformed shape.
std::optional<std::pair<Subspace, Subspace>> bpoint_witness(const BCtx& B,
                                                            const BPoint& pt);
bool is_bpoint(const BCtx& B, const BPoint& pt);

// ---------------------------------------------------------------------------
// Flag strata
// ---------------------------------------------------------------------------

// Closed condition: for every pair V'' <= V' admitting a flag member W with
// V'' <= W and V' not<= W, the restriction of phi_{V'} to V'' vanishes.
bool in_BF(const BCtx& B, const BPoint& pt, const Flag& F);
// Open condition: for every pair admitting no such W, it does not vanish.
bool in_UF(const BCtx& B, const BPoint& pt, const Flag& F);

// The unique flag F with pt in the locally closed stratum Omega_F, found by
// repeatedly splitting off the largest subspace of rational vectors killed by
// the current functional.  Post-verified against in_BF and in_UF
// (std::logic_error on failure).  Throws std::invalid_argument on an invalid
// point.
Flag stratum_flag(const BCtx& B, const BPoint& pt);

// ---------------------------------------------------------------------------
// Affine charts
// ---------------------------------------------------------------------------

// Adapted basis w_1..w_r of a complete flag: w_i is the RREF basis row of V_i
// whose pivot is not a pivot of V_{i-1}.  For the standard flag w_i = X_i.
std::vector<VecF> adapted_basis(const BCtx& B, const Flag& F);

// Chart with coordinates a_1..a_{r-1}: E_{V_i} is spanned by
// w_j (x) 1 + w_{j+1} (x) a_j for j < i, completed to every subspace by
// E_{V'} = E_{V_i} cap (V' (x) k) with i minimal such that V' <= V_i.
// Equivalently phi_{V_i}(w_j) = prod_{l=j..i-1}(-a_l) and each phi_{V'} is a
// restriction of phi_{V_i}.  Returns std::nullopt exactly when completion
// fails, i.e. some E_{V_i} contains a rational vector outside V_{i-1}; the
// tuples accepted are precisely the points of the open chart U_F.
std::optional<BPoint> chart_to_point(const BCtx& B, const Flag& F,
                                     const std::vector<Elt>& a);

// Inverse coordinates a_j = -phi_{V_{j+1}}(w_j) / phi_{V_{j+1}}(w_{j+1}),
// verified by an exact roundtrip; std::nullopt iff pt lies outside U_F.
std::optional<std::vector<Elt>> chart_from_point(const BCtx& B,
                                                 const BPoint& pt,
                                                 const Flag& F);

// ---------------------------------------------------------------------------
// Stratum products and enumeration
// ---------------------------------------------------------------------------

// Open-stratum points of B (injective lambda: V -> k modulo k^x, each
// functional the restriction of the global one).  Count:
// prod_{l=1..d-1} (q^m - q^l).
std::vector<BPoint> omega_points(const BCtx& B);
long long omega_count(long q, int d, int m);

// Decomposition of the closed stratum B_F as a product of smaller B's: part i
// is a point of B_{V_i/V_{i-1}} over BCtx(q, dim V_i - dim V_{i-1}, m), with
// the quotient identified via linalg::quotient_map.  mu_decompose requires
// pt in B_F (std::invalid_argument otherwise); nu_compose inverts it exactly.
std::vector<BPoint> mu_decompose(const BCtx& B, const BPoint& pt,
                                 const Flag& F);
BPoint nu_compose(const BCtx& B, const Flag& F,
                  const std::vector<BPoint>& parts);

// All points of the stratum Omega_F: nu-images of tuples of open-stratum
// points of the subquotients, sorted.
std::vector<BPoint> omega_flag_points(const BCtx& B, const Flag& F);

// All points of B_V(k), sorted: union over flags of omega_flag_points.
// Disjointness of the strata is certified (std::logic_error on a duplicate);
// std::length_error when the predicted total exceeds 2^20.
std::vector<BPoint> bv_points(const BCtx& B);

// Predicted |B_V(k)| = sum over flags of prod_i omega_count(q, d_i, m),
// grouped by dimension sequence with Gaussian-binomial flag counts.
long long bv_count_strata(long q, int r, int m);

// ---------------------------------------------------------------------------
// Projections to P- and Q-points
// ---------------------------------------------------------------------------

// pi_P keeps the top functional phi_V; pi_Q is the extension by zero of
// v |-> phi_{V_1}(v)^{-1} on the minimal member V_1 of the stratum flag.
// Both are canonically scaled.  Throws std::invalid_argument on an invalid
// point.
modular::LinMap pi_P(const BCtx& B, const BPoint& pt);
modular::RecMap pi_Q(const BCtx& B, const BPoint& pt);

// The same Q-point computed inside a chart U_F containing pt (any flag with
// in_UF(pt, F), not necessarily the stratum flag): rho(v) = t_i /
// phi_{V_i}(v) where i is minimal with v in V_i and the restriction of
// phi_{V_i} to V_1 equals t_i phi_{V_1}.  Agrees with pi_Q after canonical
// scaling.  Throws std::invalid_argument unless in_UF(pt, F).
modular::RecMap pi_q_via_flag(const BCtx& B, const BPoint& pt, const Flag& F);

// ---------------------------------------------------------------------------
// Boundary vanishing orders
// ---------------------------------------------------------------------------

// Vanishing order of the section ratio rho(v)/rho(v_ref) along the chart
// divisor {a_j = 0} of the standard complete flag, computed with symbolic
// coordinates: lambda(X_i) = prod_{l=i..r-1}(-a_l) extended linearly, order
// = ord_{a_j} lambda(v_ref) - ord_{a_j} lambda(v).  Requires 1 <= j <= r-1,
// v nonzero and v_ref a nonzero vector of V_j = span(X_1..X_j)
// (std::invalid_argument otherwise).
long boundary_order(const Field& base, int r, const VecF& v, const VecF& v_ref,
                    int j);

}  // namespace qv::bvariety
