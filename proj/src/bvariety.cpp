#include "qv/bvariety.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qv/fqmat.hpp"

namespace qv::bvariety {

namespace {

constexpr long long kEnumCap = 1LL << 20;

int first_nonzero(const std::vector<Elt>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) return int(i);
    return -1;
}

// psi == c * phi for some scalar c (possibly zero)?  phi must be nonzero.
std::optional<Elt> proportionality(const Field& k, const std::vector<Elt>& psi,
                                   const std::vector<Elt>& phi) {
    int l0 = first_nonzero(phi);
    Elt c = k.mul(psi[std::size_t(l0)], k.inv(phi[std::size_t(l0)]));
    for (std::size_t l = 0; l < phi.size(); ++l)
        if (psi[l] != k.mul(c, phi[l])) return std::nullopt;
    return c;
}

// Value of the functional (given on sup's RREF basis rows) at v in sup.
Elt eval_at(const BCtx& B, const Subspace& sup, const std::vector<Elt>& phi,
            const VecF& v) {
    auto c = sup.coords_of(B.base(), v);
    if (!c) throw std::invalid_argument("bvariety: vector outside subspace");
    const Field& k = B.ext();
    Elt acc = k.zero();
    for (int j = 0; j < sup.dim; ++j)
        if ((*c)[j] != 0)
            acc = k.add(acc, k.mul(B.emb()((*c)[j]), phi[std::size_t(j)]));
    return acc;
}

void check_shape(const BCtx& B, const BPoint& pt) {
    if (pt.phi.size() != B.subs().size())
        throw std::invalid_argument("BPoint: wrong number of functionals");
    for (std::size_t i = 0; i < pt.phi.size(); ++i)
        if (int(pt.phi[i].size()) != B.subs()[i].dim)
            throw std::invalid_argument("BPoint: functional size mismatch");
}

void require_valid(const BCtx& B, const BPoint& pt, const char* who) {
    if (bpoint_witness(B, pt))
        throw std::invalid_argument(std::string(who) + ": invalid point");
}

void check_flag(const BCtx& B, const Flag& F) {
    const auto& mem = F.members;
    if (mem.empty() || mem.back().dim != B.r())
        throw std::invalid_argument("bvariety: flag must end at the full space");
    for (std::size_t i = 0; i < mem.size(); ++i) {
        if (mem[i].r != B.r() || mem[i].dim < 1)
            throw std::invalid_argument("bvariety: malformed flag member");
        if (i > 0 && !(mem[i - 1].dim < mem[i].dim &&
                       mem[i].contains_sub(B.base(), mem[i - 1])))
            throw std::invalid_argument("bvariety: flag members not nested");
    }
}

// Is there a flag member W with sub <= W and sup not<= W?  (The implicit
// members 0 and V never qualify for nonzero sub and sup <= V.)
bool has_separating_member(const BCtx& B, const Flag& F, const Subspace& sub,
                           const Subspace& sup) {
    for (const auto& W : F.members)
        if (W.contains_sub(B.base(), sub) && !W.contains_sub(B.base(), sup))
            return true;
    return false;
}

// Odometer over F_q^n coordinate tuples; returns false after the last one.
bool next_tuple(VecF& c, long q) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (long(c[i]) + 1 < q) {
            ++c[i];
            return true;
        }
        c[i] = 0;
    }
    return false;
}

// Decomposition data of a flag: per step the quotient map V_i -> V_i/V_{i-1}
// and the context of the subquotient.
struct Decomp {
    std::vector<Subspace> lower;  // V_{i-1} (V_0 = 0)
    std::vector<linalg::QuotientMap> qm;
    std::vector<BCtx> ctx;
};

Decomp make_decomp(const BCtx& B, const Flag& F) {
    check_flag(B, F);
    Decomp d;
    Subspace prev = Subspace::zero(B.r());
    for (const auto& Vi : F.members) {
        d.lower.push_back(prev);
        d.qm.push_back(linalg::quotient_map(B.base(), Vi, prev));
        d.ctx.emplace_back(B.q(), Vi.dim - prev.dim, B.m());
        prev = Vi;
    }
    return d;
}

// Core of nu_compose once the decomposition is built (parts assumed valid).
BPoint nu_core(const BCtx& B, const Flag& F, const Decomp& dec,
               const std::vector<BPoint>& parts) {
    const Field& base = B.base();
    const Field& k = B.ext();
    BPoint out;
    out.phi.resize(B.subs().size());
    for (std::size_t s = 0; s < B.subs().size(); ++s) {
        const Subspace& Vp = B.subs()[s];
        std::size_t i = 0;
        while (!F.members[i].contains_sub(base, Vp)) ++i;
        const auto& qm = dec.qm[i];
        std::vector<VecF> proj(std::size_t(Vp.dim));
        for (int j = 0; j < Vp.dim; ++j)
            proj[std::size_t(j)] = qm.project(base, Vp.basis_row(j));
        Subspace A = Subspace::from_span(base, qm.d, proj);
        const auto& part_phi = parts[i].phi[std::size_t(dec.ctx[i].index_of(A))];
        std::vector<Elt> phi(std::size_t(Vp.dim), k.zero());
        for (int j = 0; j < Vp.dim; ++j) {
            auto c = A.coords_of(base, proj[std::size_t(j)]);
            Elt acc = k.zero();
            for (int l = 0; l < A.dim; ++l)
                if ((*c)[l] != 0)
                    acc = k.add(acc, k.mul(B.emb()((*c)[l]), part_phi[std::size_t(l)]));
            phi[std::size_t(j)] = acc;
        }
        out.phi[s] = std::move(phi);
    }
    return canonicalize(B, std::move(out));
}

}  // namespace

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

BCtx::BCtx(long q, int r, int m) : K_(q, r, m) {
    subs_ = linalg::all_nonzero_subspaces(K_.base(), r);
    for (std::size_t i = 0; i < subs_.size(); ++i) index_[subs_[i]] = int(i);
}

int BCtx::index_of(const Subspace& s) const {
    auto it = index_.find(s);
    if (it == index_.end())
        throw std::invalid_argument("BCtx::index_of: not a nonzero subspace of V");
    return it->second;
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

BPoint canonicalize(const BCtx& B, BPoint pt) {
    const Field& k = B.ext();
    for (auto& phi : pt.phi) {
        int l0 = first_nonzero(phi);
        if (l0 < 0 || phi[std::size_t(l0)] == k.one()) continue;
        Elt s = k.inv(phi[std::size_t(l0)]);
        for (auto& x : phi) x = k.mul(s, x);
    }
    return pt;
}

std::vector<Elt> restrict_functional(const BCtx& B, const Subspace& sup,
                                     const std::vector<Elt>& phi_sup,
                                     const Subspace& sub) {
    std::vector<Elt> psi(std::size_t(sub.dim));
    for (int l = 0; l < sub.dim; ++l)
        psi[std::size_t(l)] = eval_at(B, sup, phi_sup, sub.basis_row(l));
    return psi;
}

std::optional<std::pair<Subspace, Subspace>> bpoint_witness(const BCtx& B,
                                                            const BPoint& pt) {
    check_shape(B, pt);
    const auto& subs = B.subs();
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (first_nonzero(pt.phi[i]) < 0)
            return std::make_pair(subs[i], subs[i]);
    for (std::size_t ip = 0; ip < subs.size(); ++ip) {
        const Subspace& sup = subs[ip];
        for (std::size_t is = 0; is < subs.size(); ++is) {
            const Subspace& sub = subs[is];
            if (sub.dim >= sup.dim || !sup.contains_sub(B.base(), sub)) continue;
            auto psi = restrict_functional(B, sup, pt.phi[ip], sub);
            if (!proportionality(B.ext(), psi, pt.phi[is]))
                return std::make_pair(sub, sup);
        }
    }
    return std::nullopt;
}

bool is_bpoint(const BCtx& B, const BPoint& pt) {
    return !bpoint_witness(B, pt);
}

// ---------------------------------------------------------------------------
// Flag strata
// ---------------------------------------------------------------------------

bool in_BF(const BCtx& B, const BPoint& pt, const Flag& F) {
    check_shape(B, pt);
    check_flag(B, F);
    const auto& subs = B.subs();
    for (std::size_t ip = 0; ip < subs.size(); ++ip) {
        const Subspace& sup = subs[ip];
        for (std::size_t is = 0; is < subs.size(); ++is) {
            const Subspace& sub = subs[is];
            if (sub.dim >= sup.dim || !sup.contains_sub(B.base(), sub)) continue;
            if (!has_separating_member(B, F, sub, sup)) continue;
            auto psi = restrict_functional(B, sup, pt.phi[ip], sub);
            if (first_nonzero(psi) >= 0) return false;
        }
    }
    return true;
}

bool in_UF(const BCtx& B, const BPoint& pt, const Flag& F) {
    check_shape(B, pt);
    check_flag(B, F);
    const auto& subs = B.subs();
    for (std::size_t ip = 0; ip < subs.size(); ++ip) {
        const Subspace& sup = subs[ip];
        for (std::size_t is = 0; is < subs.size(); ++is) {
            const Subspace& sub = subs[is];
            if (sub.dim >= sup.dim || !sup.contains_sub(B.base(), sub)) continue;
            if (has_separating_member(B, F, sub, sup)) continue;
            auto psi = restrict_functional(B, sup, pt.phi[ip], sub);
            if (first_nonzero(psi) < 0) return false;
        }
    }
    return true;
}

Flag stratum_flag(const BCtx& B, const BPoint& pt) {
    require_valid(B, pt, "stratum_flag");
    const Field& base = B.base();
    const Field& k = B.ext();
    std::vector<Subspace> desc;
    Subspace cur = Subspace::full(base, B.r());
    while (cur.dim > 0) {
        desc.push_back(cur);
        const auto& phi = pt.phi[std::size_t(B.index_of(cur))];
        // Rational vectors of cur killed by the functional.
        std::vector<VecF> ker;
        VecF c(std::size_t(cur.dim), 0);
        while (next_tuple(c, B.q())) {
            Elt val = k.zero();
            for (int j = 0; j < cur.dim; ++j)
                if (c[std::size_t(j)] != 0)
                    val = k.add(val, k.mul(B.emb()(c[std::size_t(j)]), phi[std::size_t(j)]));
            if (val != k.zero()) continue;
            VecF v(std::size_t(B.r()), 0);
            for (int j = 0; j < cur.dim; ++j)
                if (c[std::size_t(j)] != 0)
                    for (int t = 0; t < B.r(); ++t)
                        v[std::size_t(t)] = base.add(
                            v[std::size_t(t)],
                            base.mul(c[std::size_t(j)], cur.rows[std::size_t(j) * cur.r + t]));
            ker.push_back(std::move(v));
        }
        Subspace U = Subspace::from_span(base, B.r(), ker);
        if (U.dim >= cur.dim)
            throw std::logic_error("stratum_flag: degeneration subspace not proper");
        cur = std::move(U);
    }
    Flag F{std::vector<Subspace>(desc.rbegin(), desc.rend())};
    if (!in_BF(B, pt, F) || !in_UF(B, pt, F))
        throw std::logic_error("stratum_flag: stratum predicates failed to verify");
    return F;
}

// ---------------------------------------------------------------------------
// Affine charts
// ---------------------------------------------------------------------------

std::vector<VecF> adapted_basis(const BCtx& B, const Flag& F) {
    check_flag(B, F);
    if (int(F.members.size()) != B.r())
        throw std::invalid_argument("adapted_basis: flag not complete");
    std::vector<char> prev(std::size_t(B.r()), 0);
    std::vector<VecF> w;
    for (const auto& Vi : F.members) {
        int found = -1;
        for (int l = 0; l < Vi.dim; ++l) {
            VecF row = Vi.basis_row(l);
            int p = 0;
            while (row[std::size_t(p)] == 0) ++p;
            if (!prev[std::size_t(p)]) {
                found = l;
                break;
            }
        }
        if (found < 0) throw std::logic_error("adapted_basis: no fresh pivot");
        w.push_back(Vi.basis_row(found));
        for (int l = 0; l < Vi.dim; ++l) {
            VecF row = Vi.basis_row(l);
            int p = 0;
            while (row[std::size_t(p)] == 0) ++p;
            prev[std::size_t(p)] = 1;
        }
    }
    return w;
}

std::optional<BPoint> chart_to_point(const BCtx& B, const Flag& F,
                                     const std::vector<Elt>& a) {
    const int r = B.r();
    const Field& base = B.base();
    const Field& k = B.ext();
    auto w = adapted_basis(B, F);
    if (int(a.size()) != r - 1)
        throw std::invalid_argument("chart_to_point: need r-1 coordinates");
    for (Elt aj : a)
        if (long(aj) >= k.q()) throw std::invalid_argument("chart_to_point: coordinate outside k");

    // lam[i][j] = phi_{V_i}(w_j) = prod_{l=j..i-1} (-a_l), 1-based, lam[i][i]=1.
    std::vector<std::vector<Elt>> lam(std::size_t(r) + 1);
    for (int i = 1; i <= r; ++i) {
        lam[std::size_t(i)].assign(std::size_t(i) + 1, k.one());
        for (int j = i - 1; j >= 1; --j)
            lam[std::size_t(i)][std::size_t(j)] =
                k.mul(k.neg(a[std::size_t(j) - 1]), lam[std::size_t(i)][std::size_t(j) + 1]);
    }

    // Valid iff no E_{V_i} contains a rational vector outside V_{i-1}: no
    // c in F_q^i with c_i != 0 and sum_j c_j lam[i][j] = 0.
    for (int i = 2; i <= r; ++i) {
        VecF c(std::size_t(i), 0);
        while (next_tuple(c, B.q())) {
            if (c[std::size_t(i) - 1] == 0) continue;
            Elt val = k.zero();
            for (int j = 1; j <= i; ++j)
                if (c[std::size_t(j) - 1] != 0)
                    val = k.add(val, k.mul(B.emb()(c[std::size_t(j) - 1]),
                                           lam[std::size_t(i)][std::size_t(j)]));
            if (val == k.zero()) return std::nullopt;
        }
    }

    // F_q-coordinates in the adapted basis.
    fqmat::Mat W(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) W.at(i, j) = w[std::size_t(i)][std::size_t(j)];
    fqmat::Ech wech(base, W);

    BPoint out;
    out.phi.resize(B.subs().size());
    for (std::size_t s = 0; s < B.subs().size(); ++s) {
        const Subspace& Vp = B.subs()[s];
        int i = 1;
        while (!F.members[std::size_t(i) - 1].contains_sub(base, Vp)) ++i;
        std::vector<Elt> phi(std::size_t(Vp.dim), k.zero());
        for (int l = 0; l < Vp.dim; ++l) {
            auto c = wech.solve_row(Vp.basis_row(l));
            if (!c) throw std::logic_error("chart_to_point: adapted basis not spanning");
            Elt acc = k.zero();
            for (int j = 1; j <= r; ++j) {
                if ((*c)[std::size_t(j) - 1] == 0) continue;
                if (j > i) throw std::logic_error("chart_to_point: coordinate beyond V_i");
                acc = k.add(acc, k.mul(B.emb()((*c)[std::size_t(j) - 1]),
                                       lam[std::size_t(i)][std::size_t(j)]));
            }
            phi[std::size_t(l)] = acc;
        }
        if (first_nonzero(phi) < 0)
            throw std::logic_error("chart_to_point: vanishing functional on valid tuple");
        out.phi[s] = std::move(phi);
    }
    return canonicalize(B, std::move(out));
}

std::optional<std::vector<Elt>> chart_from_point(const BCtx& B, const BPoint& pt,
                                                 const Flag& F) {
    require_valid(B, pt, "chart_from_point");
    auto w = adapted_basis(B, F);
    const Field& k = B.ext();
    std::vector<Elt> a(std::size_t(B.r()) - 1);
    for (int j = 1; j <= B.r() - 1; ++j) {
        const Subspace& sup = F.members[std::size_t(j)];  // V_{j+1}
        const auto& phi = pt.phi[std::size_t(B.index_of(sup))];
        Elt den = eval_at(B, sup, phi, w[std::size_t(j)]);
        if (den == k.zero()) return std::nullopt;
        Elt num = eval_at(B, sup, phi, w[std::size_t(j) - 1]);
        a[std::size_t(j) - 1] = k.neg(k.mul(num, k.inv(den)));
    }
    auto rt = chart_to_point(B, F, a);
    if (!rt || !(*rt == canonicalize(B, pt))) return std::nullopt;
    return a;
}

// ---------------------------------------------------------------------------
// Stratum products and enumeration
// ---------------------------------------------------------------------------

long long omega_count(long q, int d, int m) {
    if (d < 1) throw std::invalid_argument("omega_count: need d >= 1");
    long long qm = 1;
    for (int i = 0; i < m; ++i) qm *= q;
    long long total = 1, ql = 1;
    for (int l = 1; l < d; ++l) {
        ql *= q;
        total *= qm - ql;
        if (total <= 0) return 0;
    }
    return total;
}

std::vector<BPoint> omega_points(const BCtx& B) {
    const int d = B.r();
    const Field& k = B.ext();
    double budget = 1;
    for (int i = 1; i < d; ++i) budget *= double(k.q());
    if (budget > double(kEnumCap))
        throw std::length_error("omega_points: enumeration exceeds cap");

    std::vector<VecF> rational;  // nonzero rational coordinate tuples
    {
        VecF c(std::size_t(d), 0);
        while (next_tuple(c, B.q())) rational.push_back(c);
    }

    std::vector<BPoint> out;
    std::vector<Elt> images(std::size_t(d), k.zero());
    images[0] = k.one();
    VecF odo(std::size_t(d) - 1, 0);  // codes of images[1..d-1]
    bool more = true;
    do {
        for (int i = 1; i < d; ++i) images[std::size_t(i)] = odo[std::size_t(i) - 1];
        bool injective = true;
        for (const auto& c : rational) {
            Elt val = k.zero();
            for (int i = 0; i < d; ++i)
                if (c[std::size_t(i)] != 0)
                    val = k.add(val, k.mul(B.emb()(c[std::size_t(i)]), images[std::size_t(i)]));
            if (val == k.zero()) {
                injective = false;
                break;
            }
        }
        if (injective) {
            BPoint pt;
            pt.phi.resize(B.subs().size());
            for (std::size_t s = 0; s < B.subs().size(); ++s) {
                const Subspace& Vp = B.subs()[s];
                std::vector<Elt> phi(std::size_t(Vp.dim));
                for (int l = 0; l < Vp.dim; ++l) {
                    VecF row = Vp.basis_row(l);
                    Elt acc = k.zero();
                    for (int i = 0; i < d; ++i)
                        if (row[std::size_t(i)] != 0)
                            acc = k.add(acc, k.mul(B.emb()(row[std::size_t(i)]),
                                                   images[std::size_t(i)]));
                    phi[std::size_t(l)] = acc;
                }
                pt.phi[s] = std::move(phi);
            }
            out.push_back(canonicalize(B, std::move(pt)));
        }
        more = next_tuple(odo, long(k.q()));
    } while (more);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BPoint> mu_decompose(const BCtx& B, const BPoint& pt, const Flag& F) {
    require_valid(B, pt, "mu_decompose");
    if (!in_BF(B, pt, F))
        throw std::invalid_argument("mu_decompose: point not in the closed stratum");
    Decomp dec = make_decomp(B, F);
    const Field& base = B.base();
    std::vector<BPoint> parts;
    for (std::size_t i = 0; i < F.members.size(); ++i) {
        const BCtx& Bq = dec.ctx[i];
        BPoint part;
        part.phi.resize(Bq.subs().size());
        for (std::size_t s = 0; s < Bq.subs().size(); ++s) {
            const Subspace& A = Bq.subs()[s];
            std::vector<VecF> gens;
            for (int l = 0; l < dec.lower[i].dim; ++l)
                gens.push_back(dec.lower[i].basis_row(l));
            std::vector<VecF> lifts(std::size_t(A.dim));
            for (int l = 0; l < A.dim; ++l) {
                lifts[std::size_t(l)] = dec.qm[i].lift(base, A.basis_row(l));
                gens.push_back(lifts[std::size_t(l)]);
            }
            Subspace Vp = Subspace::from_span(base, B.r(), gens);
            const auto& phi = pt.phi[std::size_t(B.index_of(Vp))];
            std::vector<Elt> part_phi(std::size_t(A.dim));
            for (int l = 0; l < A.dim; ++l)
                part_phi[std::size_t(l)] = eval_at(B, Vp, phi, lifts[std::size_t(l)]);
            part.phi[s] = std::move(part_phi);
        }
        parts.push_back(canonicalize(Bq, std::move(part)));
    }
    return parts;
}

BPoint nu_compose(const BCtx& B, const Flag& F, const std::vector<BPoint>& parts) {
    Decomp dec = make_decomp(B, F);
    if (parts.size() != F.members.size())
        throw std::invalid_argument("nu_compose: wrong number of parts");
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (bpoint_witness(dec.ctx[i], parts[i]))
            throw std::invalid_argument("nu_compose: invalid part");
    return nu_core(B, F, dec, parts);
}

std::vector<BPoint> omega_flag_points(const BCtx& B, const Flag& F) {
    Decomp dec = make_decomp(B, F);
    std::vector<std::vector<BPoint>> pools;
    double tuples = 1;
    for (const auto& ctx : dec.ctx) {
        pools.push_back(omega_points(ctx));
        tuples *= double(pools.back().size());
    }
    if (tuples > double(kEnumCap))
        throw std::length_error("omega_flag_points: enumeration exceeds cap");

    std::vector<BPoint> out;
    std::vector<std::size_t> idx(pools.size(), 0);
    for (const auto& p : pools)
        if (p.empty()) return out;
    while (true) {
        std::vector<BPoint> parts;
        for (std::size_t i = 0; i < pools.size(); ++i) parts.push_back(pools[i][idx[i]]);
        out.push_back(nu_core(B, F, dec, parts));
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < pools[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<BPoint> bv_points(const BCtx& B) {
    long long total = bv_count_strata(B.q(), B.r(), B.m());
    if (total > kEnumCap) throw std::length_error("bv_points: enumeration exceeds cap");
    std::vector<BPoint> out;
    for (const auto& F : linalg::all_flags(B.base(), B.r())) {
        auto stratum = omega_flag_points(B, F);
        out.insert(out.end(), stratum.begin(), stratum.end());
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw std::logic_error("bv_points: strata are not disjoint");
    return out;
}

long long bv_count_strata(long q, int r, int m) {
    if (r < 1) throw std::invalid_argument("bv_count_strata: need r >= 1");
    if (r > 30) throw std::overflow_error("bv_count_strata: r too large");
    unsigned __int128 total = 0;
    for (unsigned mask = 0; mask < (1u << (r - 1)); ++mask) {
        // Cut positions: dims e_1 < ... < e_t = r taken where bits are set.
        std::vector<int> dims;
        for (int e = 1; e < r; ++e)
            if (mask & (1u << (e - 1))) dims.push_back(e);
        dims.push_back(r);
        unsigned __int128 term = 1;
        for (std::size_t i = 0; i + 1 < dims.size(); ++i)
            term *= (unsigned __int128)(linalg::gauss_binom(dims[i + 1], dims[i], q));
        int prev = 0;
        for (int e : dims) {
            term *= (unsigned __int128)(omega_count(q, e - prev, m));
            prev = e;
        }
        total += term;
    }
    if (total > (unsigned __int128)(9'223'372'036'854'775'807LL))
        throw std::overflow_error("bv_count_strata: count overflows 64 bits");
    return (long long)(total);
}

// ---------------------------------------------------------------------------
// Projections to P- and Q-points
// ---------------------------------------------------------------------------

modular::LinMap pi_P(const BCtx& B, const BPoint& pt) {
    require_valid(B, pt, "pi_P");
    Subspace full = Subspace::full(B.base(), B.r());
    modular::LinMap lm{pt.phi[std::size_t(B.index_of(full))]};
    return modular::canonical_scaling(B.K(), lm);
}

modular::RecMap pi_Q(const BCtx& B, const BPoint& pt) {
    Flag F = stratum_flag(B, pt);  // validates
    const Subspace& V1 = F.members.front();
    const auto& lambda = pt.phi[std::size_t(B.index_of(V1))];
    modular::RecMap rho = modular::from_linmap_on(B.K(), V1, lambda);
    return modular::canonical_scaling(B.K(), rho);
}

modular::RecMap pi_q_via_flag(const BCtx& B, const BPoint& pt, const Flag& F) {
    require_valid(B, pt, "pi_q_via_flag");
    if (!in_UF(B, pt, F))
        throw std::invalid_argument("pi_q_via_flag: point not in the chart U_F");
    const Field& k = B.ext();
    const Subspace& V1 = F.members.front();
    const auto& phi1 = pt.phi[std::size_t(B.index_of(V1))];
    std::vector<Elt> t(F.members.size());
    for (std::size_t i = 0; i < F.members.size(); ++i) {
        const auto& phi = pt.phi[std::size_t(B.index_of(F.members[i]))];
        auto psi = restrict_functional(B, F.members[i], phi, V1);
        auto c = proportionality(k, psi, phi1);
        if (!c) throw std::logic_error("pi_q_via_flag: restriction not proportional");
        t[i] = *c;
    }
    modular::RecMap rho;
    rho.values.assign(B.K().reps().size(), k.zero());
    for (std::size_t w = 0; w < B.K().reps().size(); ++w) {
        const VecF& v = B.K().reps()[w];
        std::size_t i = 0;
        while (!F.members[i].contains(B.base(), v)) ++i;
        Elt val = eval_at(B, F.members[i], pt.phi[std::size_t(B.index_of(F.members[i]))], v);
        if (val == k.zero())
            throw std::logic_error("pi_q_via_flag: functional vanishes on fresh vector");
        rho.values[w] = k.mul(t[i], k.inv(val));
    }
    return modular::canonical_scaling(B.K(), rho);
}

// ---------------------------------------------------------------------------
// Boundary vanishing orders
// ---------------------------------------------------------------------------

long boundary_order(const Field& base, int r, const VecF& v, const VecF& v_ref,
                    int j) {
    if (j < 1 || j > r - 1) throw std::invalid_argument("boundary_order: bad divisor index");
    if (int(v.size()) != r || int(v_ref.size()) != r)
        throw std::invalid_argument("boundary_order: bad vector length");
    for (int i = j; i < r; ++i)
        if (v_ref[std::size_t(i)] != 0)
            throw std::invalid_argument("boundary_order: v_ref outside V_j");

    // lambda(X_i) = prod_{l=i..r-1}(-a_l): squarefree monomial in a_i..a_{r-1}
    // with sign (-1)^(r-i); lambda(u) as a polynomial keyed by monomial mask.
    auto lambda_poly = [&](const VecF& u) {
        std::map<unsigned, Elt> poly;
        for (int i = 1; i <= r; ++i) {
            if (u[std::size_t(i) - 1] == 0) continue;
            unsigned mask = 0;
            for (int l = i; l <= r - 1; ++l) mask |= 1u << (l - 1);
            Elt coef = u[std::size_t(i) - 1];
            if ((r - i) % 2 != 0) coef = base.neg(coef);
            poly[mask] = coef;
        }
        return poly;
    };
    auto ord_in = [&](const std::map<unsigned, Elt>& poly) {
        if (poly.empty()) throw std::invalid_argument("boundary_order: zero vector");
        long best = 2;
        for (const auto& [mask, coef] : poly) {
            (void)coef;
            long deg = (mask >> (j - 1)) & 1u;
            best = std::min(best, deg);
        }
        return best;
    };
    return ord_in(lambda_poly(v_ref)) - ord_in(lambda_poly(v));
}

}  // namespace qv::bvariety
