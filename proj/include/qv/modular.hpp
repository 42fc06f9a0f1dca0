#pragma once
// Point-level moduli over extension fields k = F_{q^m}: reciprocal maps
// V-minus-0 -> k and their classification by support, enumeration and
// stratification of the point sets Q_V(k) and P_V(k), the strange morphisms
// f and g between them, and Jacobian tangent computations on the cone model
// of Q_V in projective-representative coordinates.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qv/fqmat.hpp"
#include "qv/gfq.hpp"
#include "qv/linalg.hpp"

namespace qv::modular {

using gfq::Elt;
using gfq::Embedding;
using gfq::Field;
using linalg::Subspace;
using linalg::VecF;

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

// V = F_q^r with values taken in the extension field k = F_{q^m}.  Values of
// maps on V-minus-0 are stored on the canonical projective representatives
// (linalg::projective_reps order); the base field embeds into k along the
// canonical embedding.
class KCtx {
 public:
  KCtx(long q, int r, int m);

  const Field& base() const { return *base_; }  // F_q
  const Field& ext() const { return *ext_; }    // k = F_{q^m}
  const Embedding& emb() const { return *emb_; }
  int r() const { return r_; }
  int m() const { return m_; }
  long q() const { return base_->q(); }

  const std::vector<VecF>& reps() const { return reps_; }
  // Representative index of a nonzero v together with the scalar alpha in
  // F_q^x such that v = alpha * reps()[index].
  std::pair<int, Elt> rep_of(const VecF& v) const;

 private:
  const Field* base_;
  const Field* ext_;
  const Embedding* emb_;
  int r_, m_;
  std::vector<VecF> reps_;
  std::vector<int> index_by_code_;  // vec_code -> rep index, -1 elsewhere
};

// ---------------------------------------------------------------------------
// Reciprocal maps and linear maps
// ---------------------------------------------------------------------------

// A map rho: V-minus-0 -> k obeying the scaling law rho(alpha v) =
// alpha^{-1} rho(v) by construction: only the values on the projective
// representatives are stored, one k-element per K.reps() entry.  rho is
// *reciprocal* when additionally rho(v) rho(v') = rho(v+v') (rho(v)+rho(v'))
// for all v, v' with v+v' != 0.
struct RecMap {
  std::vector<Elt> values;
  auto operator<=>(const RecMap&) const = default;
};

// An F_q-linear map into k, stored by the images of the standard basis of
// its domain (X_1..X_r for maps on V, the dual basis for maps on V^*).
struct LinMap {
  std::vector<Elt> images;
  auto operator<=>(const LinMap&) const = default;
};

Elt rho_eval(const KCtx& K, const RecMap& rho, const VecF& v);  // v != 0
// Value at the functional (for maps on V^*) or vector (maps on V) with
// coordinate vector w over F_q.
Elt linmap_eval(const KCtx& K, const LinMap& lam, const VecF& w);

// First unordered pair (v, v') with v + v' != 0 violating the reciprocity
// identity, or nullopt when rho is reciprocal.  The scaling law needs no
// check: it holds by representation.
std::optional<std::pair<VecF, VecF>> reciprocal_witness(const KCtx& K,
                                                        const RecMap& rho);
bool is_reciprocal(const KCtx& K, const RecMap& rho);

// {0} union {v : rho(v) != 0}.  For reciprocal rho this set is a subspace;
// if it fails to be one the function throws std::logic_error (internal
// failure).  Non-reciprocal input throws std::invalid_argument.  The zero
// map yields the zero subspace (not a valid Q-point, but a valid support).
Subspace support(const KCtx& K, const RecMap& rho);

// rho == extension by zero of the reciprocal of an injective F_q-linear
// lambda: V' -> k, where V' = support(rho) and lambda is returned by its
// images on the RREF basis rows of V'.
struct Classification {
  Subspace sub;
  std::vector<Elt> lambda;
};
// Requires rho reciprocal and nonzero (std::invalid_argument otherwise).
// Round-trips exactly with from_linmap_on.
Classification classify(const KCtx& K, const RecMap& rho);
// Extension by zero of v |-> 1/lambda(v) on sub, lambda given by images of
// the RREF basis rows; lambda must be injective on sub
// (std::invalid_argument otherwise).
RecMap from_linmap_on(const KCtx& K, const Subspace& sub,
                      const std::vector<Elt>& lambda);

// Canonical projective scaling: the first nonzero entry (representative
// enumeration order for RecMap, coordinate order for LinMap) becomes 1.
// The zero map is returned unchanged.
RecMap canonical_scaling(const KCtx& K, const RecMap& rho);
LinMap canonical_scaling(const KCtx& K, const LinMap& lam);

// ---------------------------------------------------------------------------
// Point sets and strata
// ---------------------------------------------------------------------------

// All k-points of Q_V: canonically scaled nonzero reciprocal maps,
// enumerated by classification (nonzero subspace V' + injective lambda
// modulo k^x), sorted deterministically by value vector.
std::vector<RecMap> qv_points(const KCtx& K);
// Sum over s = 1..r of GaussBinom(r,s)_q * prod_{i=1}^{s-1} (q^m - q^i).
long long qv_count_formula(long q, int r, int m);

// The unique stratum through a Q-point: == support(pt).
Subspace stratum_of(const KCtx& K, const RecMap& pt);

// Extension by zero along sub: rho_s lives on the abstract context Ks of
// dimension sub.dim (same q and m as K), in the coordinates of the RREF
// basis rows of sub.
RecMap extend_by_zero(const KCtx& K, const Subspace& sub, const KCtx& Ks,
                      const RecMap& rho_s);
// The sub-subspace of K corresponding to a subspace of the abstract context
// of sub (rows = coordinate vectors in sub's RREF basis).
Subspace lift_subspace(const KCtx& K, const Subspace& sub,
                       const Subspace& sub_of_sub);

// All k-points of P_V: nonzero F_q-linear maps V -> k modulo k^x,
// canonically scaled, sorted.
std::vector<LinMap> pv_points(const KCtx& K);
// (q^{m r} - 1) / (q^m - 1).
long long pv_count_formula(long q, int r, int m);
// Kernel {v in V : lambda(v) = 0} as an F_q-subspace of the domain; the
// P_V-stratum of lambda is indexed by this kernel (the map factors
// injectively through V / kernel).
Subspace linmap_kernel(const KCtx& K, const LinMap& lam);

// ---------------------------------------------------------------------------
// The strange morphisms f and g
// ---------------------------------------------------------------------------

// g(rho): V^* -> k, ell |-> sum of rho(v) over the v with <ell, v> = 1.
// F_q-linearity of the result is re-derived exhaustively from the defining
// sum (std::logic_error on failure).
LinMap g_map(const KCtx& K, const RecMap& rho);
// f(lambda): V-minus-0 -> k, v |-> product of lambda(ell) over the ell in
// V^* with <ell, v> = 1 (q^{r-1} factors).  Reciprocity of the result is
// checked (std::logic_error on failure).
RecMap f_map(const KCtx& K, const LinMap& lam);

// Compatibility of f and g with a subspace V' = sub of V: for rho' on the
// abstract context of sub and lambda' on its dual,
//   pullback(g(rho'))     == g(extension by zero of rho'), and
//   extension by zero of Frob_{q^{r''}}(f(lambda')) == f(pullback(lambda')),
// where r'' = r - sub.dim and the pullback is along the restriction map
// V^* -> V'^*.  g is checked on every Q-point of the sub-context (plus a
// random k^x rescaling of each); f on `samples` uniformly random lambda'.
struct GfCompatReport {
  bool g_ok = false;
  bool f_ok = false;
  int g_checked = 0;
  int f_checked = 0;
};
GfCompatReport gf_compat_check(const KCtx& K, const Subspace& sub,
                               int samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Tangent computations on the cone model
// ---------------------------------------------------------------------------

// Ambient coordinates: one Z_w per projective representative w (the scaling
// relations eliminate the remaining Y_v).  Rows: for every unordered pair of
// distinct nonzero v, v' with v + v' != 0, the differential of
//   Y_v Y_{v'} - Y_{v+v'} (Y_v + Y_{v'})
// at the point, expressed over k in the Z_w.  Returns the kernel dimension
// of the stacked Jacobian = dim of the tangent space of the affine cone at
// the (nonzero) point.  Throws std::invalid_argument on the zero map or a
// non-reciprocal map, std::logic_error if the point fails the relations.
long long jacobian_kernel_dim(const KCtx& K, const RecMap& pt);
// jacobian_kernel_dim - 1 (projectivization): r - 1 at smooth points,
// larger on strata of codimension >= 2.
long long tangent_dim(const KCtx& K, const RecMap& pt);

}  // namespace qv::modular
