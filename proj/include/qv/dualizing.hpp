#pragma once
// The graded ideal I_V of R_V: its tuple generators, the shifted generating
// sets hatDelta_i with their bijection to Delta_i, free-basis membership and
// dimension counts, and the orthogonality pairings under the averaging
// operators M_r and N_r.

#include <cstdint>
#include <optional>
#include <vector>

#include "qv/fqmat.hpp"
#include "qv/gfq.hpp"
#include "qv/linalg.hpp"
#include "qv/ratfun.hpp"
#include "qv/rvring.hpp"

namespace qv::dualizing {

using gfq::Elt;
using gfq::Field;
using linalg::VecF;
using ratfun::LinFrac;
using ratfun::MPoly;

// ---------------------------------------------------------------------------
// Generators 1/(v_0 ... v_r)
// ---------------------------------------------------------------------------

struct IVGenerator {
  std::vector<VecF> vs;  // v_0, ..., v_r; every r-subset linearly independent
  LinFrac frac;          // 1/(v_0 ... v_r), homogeneous of degree -(r+1)
};

// dedupe = true: one representative per class under projective scaling of
// each v_i and permutation (nondecreasing tuples of projective
// representatives).  dedupe = false: all ordered tuples of nonzero vectors
// (guarded by a 2^20 candidate cap; throws std::length_error beyond it).
std::vector<IVGenerator> iv_generators(const Field& F, int r, bool dedupe = true);

// ---------------------------------------------------------------------------
// hatDelta sets and products
// ---------------------------------------------------------------------------

// hatDelta_i = {f_i/X_i} union {1/(X_i+u) - 1/X_i : u in V_{i-1} nonzero},
// size q^{i-1}, index-aligned with ctx.delta_set(i) under the bijection
// 1 |-> f_i/X_i,  1/(X_i+u) |-> 1/(X_i+u) - 1/X_i.
std::vector<LinFrac> hat_delta_set(const rvring::Context& ctx, int i);

// Products hd_1 * ... * hd_r over all choices, enumerated in the same
// odometer order as rvring::delta_products (so index a here corresponds to
// index a there under the product bijection).
std::vector<LinFrac> hat_delta_products(const rvring::Context& ctx);

// ---------------------------------------------------------------------------
// Graded pieces of I_V
// ---------------------------------------------------------------------------

// dim I_{V,-n} predicted by the free module structure over F_q[f_1..f_r]
// with basis hatDelta_1 ... hatDelta_r (degree generating function count).
long long iv_dim(const rvring::Context& ctx, int n);

struct IVPiece {
  int n = 0;
  std::vector<LinFrac> elems;  // hat-product * f-monomial, spanning I_{V,-n}
  fqmat::Mat rows;             // expansions; columns = ctx.piece(n).support
  fqmat::Ech ech;
  long long rank = 0;          // certified equal to iv_dim(ctx, n)
};

// Builds the spanning set and certifies rank == iv_dim (throws
// std::logic_error on mismatch, which would refute the freeness statement).
IVPiece iv_piece(const rvring::Context& ctx, int n);

// Coordinates of x over piece.elems, or nullopt when x is not in I_{V,-n};
// zero x yields the zero coordinate vector.  Throws std::invalid_argument on
// non-homogeneous x.
std::optional<std::vector<Elt>> iv_membership(const rvring::Context& ctx,
                                              const IVPiece& piece,
                                              const LinFrac& x);
// Convenience overload building the piece on the fly.
std::optional<std::vector<Elt>> iv_membership(const rvring::Context& ctx,
                                              const LinFrac& x, int n);

// ---------------------------------------------------------------------------
// Orthogonality pairings
// ---------------------------------------------------------------------------

// N_r(delta_a * hat(delta_b)) = scalars(a,b) * f_1^2...f_r^2, where N_r sums
// the action of U_r, delta_a runs over rvring::delta_products and
// hat(delta_b) over hat_delta_products.  all_multiples records whether every
// operator value was indeed a scalar multiple of f_1^2...f_r^2; diagonal
// additionally requires scalars == identity.
struct PairingReport {
  int m = 0;
  fqmat::Mat scalars;
  bool all_multiples = false;
  bool diagonal = false;
  LinFrac ff;  // f_1^2 ... f_r^2
};

PairingReport pairing_table(const rvring::Context& ctx);

// Single-level version over W_r: M_r(delta_a * hat(delta_b)) with delta_a in
// Delta_r, hat(delta_b) in hatDelta_r; expected f_r^2 on the diagonal and 0
// off it.
struct MrReport {
  int m = 0;
  fqmat::Mat scalars;
  bool all_multiples = false;
  bool diagonal = false;
  LinFrac fr2;  // f_r^2
};

MrReport mr_orthogonality(const rvring::Context& ctx);

}  // namespace qv::dualizing
