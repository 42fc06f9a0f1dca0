// F_q vector/subspace/flag machinery and the finite matrix groups used by the
// invariant-theory and stratification code.
//
// Canonical orders (stable across runs, relied on by every enumeration):
//  - vectors: packed base-q code with coordinate 1 least significant;
//  - projective representatives: first nonzero coordinate == 1, code order;
//  - subspaces: unique RREF basis, listed by (pivot columns, free entries);
//  - group elements: sorted by entry vector (row-major).
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qv/fqmat.hpp"
#include "qv/gfq.hpp"

namespace qv::linalg {

using gfq::Elt;
using gfq::Field;
using fqmat::Mat;

using VecF = std::vector<Elt>;

std::uint64_t vec_code(const Field& F, const VecF& v);
VecF vec_of_code(const Field& F, int r, std::uint64_t code);
bool is_zero_vec(const VecF& v);
VecF vec_add(const Field& F, const VecF& a, const VecF& b);
VecF vec_sub(const Field& F, const VecF& a, const VecF& b);
VecF vec_scale(const Field& F, Elt c, const VecF& v);
Elt dot(const Field& F, const VecF& a, const VecF& b);

std::vector<VecF> all_vectors(const Field& F, int r);
std::vector<VecF> nonzero_vectors(const Field& F, int r);
// Scaling representatives of V \ {0}: first nonzero coordinate == 1.
std::vector<VecF> projective_reps(const Field& F, int r);
// v = alpha * rep with rep a projective representative; v != 0.
std::pair<VecF, Elt> normalize_projective(const Field& F, const VecF& v);

long long gauss_binom(int r, int s, long q);

struct Subspace {
    int r = 0, dim = 0;
    std::vector<Elt> rows;  // RREF, row-major dim x r

    static Subspace zero(int r) { return Subspace{r, 0, {}}; }
    static Subspace full(const Field& F, int r);
    static Subspace from_span(const Field& F, int r, const std::vector<VecF>& gens);

    VecF basis_row(int i) const { return VecF(rows.begin() + std::size_t(i) * r, rows.begin() + std::size_t(i + 1) * r); }
    bool contains(const Field& F, const VecF& v) const;
    bool contains_sub(const Field& F, const Subspace& s) const;
    // Coordinates of v in the RREF basis rows (v must lie in the subspace).
    std::optional<VecF> coords_of(const Field& F, const VecF& v) const;
    std::vector<VecF> points(const Field& F) const;          // all q^dim
    std::vector<VecF> nonzero_points(const Field& F) const;  // q^dim - 1

    auto operator<=>(const Subspace&) const = default;
};

Subspace sum(const Field& F, const Subspace& a, const Subspace& b);
Subspace intersect(const Field& F, const Subspace& a, const Subspace& b);
std::vector<Subspace> subspaces_of_dim(const Field& F, int r, int d);
// dims 1..r, each dimension in canonical order.
std::vector<Subspace> all_nonzero_subspaces(const Field& F, int r);
// V_i = span(X_1..X_i) (the standard flag member).
Subspace standard_subspace(const Field& F, int r, int i);

struct Flag {
    // Strictly increasing nonzero members, last == full space (0 implicit).
    std::vector<Subspace> members;
    std::vector<int> dims() const;
    auto operator<=>(const Flag&) const = default;
};

std::vector<Flag> all_flags(const Field& F, int r);
std::vector<Flag> complete_flags(const Field& F, int r);

// V' / W for W <= V': fixed complement basis, projection and section.
struct QuotientMap {
    int r = 0, d = 0;
    Subspace Vp, W;
    Mat comp;  // d x r, complement basis rows (reduce V' basis modulo W)
    fqmat::Ech ech;  // over [comp; W.rows] for coordinate extraction

    VecF project(const Field& F, const VecF& v) const;  // v in V' -> F_q^d
    VecF lift(const Field& F, const VecF& y) const;     // section F_q^d -> V'
};
QuotientMap quotient_map(const Field& F, const Subspace& Vp, const Subspace& W);

// ---- matrix groups (extensional: explicit sorted element lists) ----

struct Group {
    std::vector<Mat> elems;  // sorted by entry vector
    int order() const { return int(elems.size()); }
    bool contains(const Mat& m) const { return index_of(m) >= 0; }
    int index_of(const Mat& m) const;  // -1 if absent
};

Group make_group(std::vector<Mat> elems);  // sorts, checks nonempty
Group gl_group(const Field& F, int r);
Group u_group(const Field& F, int r);      // upper unitriangular
Group w_group(const Field& F, int r);      // X_r -> X_r + u, u in V_{r-1}
Group p_group(const Field& F, int r, int s);  // stabilizer of V_s (block upper)
Group l_group(const Field& F, int r, int s);  // P_s with identity s x s corner
Group closure(const Field& F, const std::vector<Mat>& gens, long long cap = 200000);

long long gl_order(int r, long q);
std::vector<Mat> gl_generators(const Field& F, int r);
std::vector<Mat> sl_generators(const Field& F, int r);
std::vector<Mat> u_generators(const Field& F, int r);
Mat transvection(const Field& F, int r, int i, int j, Elt alpha);  // I + alpha*E_ij

long elem_order(const Field& F, const Mat& m);
// Number of (H, K)-double cosets in G; H, K subgroups of G.
long long double_coset_count(const Field& F, const Group& H, const Group& G, const Group& K);
// All subgroups of p-power order (the unipotent subgroups when p = char).
std::vector<Group> p_subgroups(const Field& F, const Group& G, long p);
// Small generating set of a subgroup given extensionally.
std::vector<Mat> generating_set(const Field& F, const Group& H);

// Action on column vectors: v -> M v.
VecF apply(const Field& F, const Mat& M, const VecF& v);

}  // namespace qv::linalg
