#include "qv/dualizing.hpp"

#include <functional>
#include <stdexcept>

#include "qv/invariants.hpp"

namespace qv::dualizing {

namespace {

// every r-subset of the r+1 vectors must be linearly independent
bool tuple_admissible(const Field& F, const std::vector<VecF>& vs, int r) {
    for (std::size_t skip = 0; skip < vs.size(); ++skip) {
        fqmat::Mat M(r, r);
        int row = 0;
        for (std::size_t t = 0; t < vs.size(); ++t) {
            if (t == skip) continue;
            for (int j = 0; j < r; ++j) M.at(row, j) = vs[t][std::size_t(j)];
            ++row;
        }
        if (fqmat::rank(F, std::move(M)) != r) return false;
    }
    return true;
}

LinFrac tuple_frac(const Field& F, int r, const std::vector<VecF>& vs) {
    LinFrac acc = LinFrac::constant(r, F.one());
    for (const VecF& v : vs) acc = ratfun::f_mul(F, acc, LinFrac::one_over(F, v));
    return acc;
}

}  // namespace

std::vector<IVGenerator> iv_generators(const Field& F, int r, bool dedupe) {
    std::vector<IVGenerator> out;
    if (dedupe) {
        const std::vector<VecF> reps = linalg::projective_reps(F, r);
        const int m = int(reps.size());
        // nondecreasing (r+1)-tuples of representative indices
        std::vector<int> idx(std::size_t(r) + 1, 0);
        std::function<void(int, int)> rec = [&](int pos, int from) {
            if (pos == r + 1) {
                std::vector<VecF> vs;
                for (int t = 0; t <= r; ++t) vs.push_back(reps[std::size_t(idx[std::size_t(t)])]);
                if (tuple_admissible(F, vs, r))
                    out.push_back({vs, tuple_frac(F, r, vs)});
                return;
            }
            for (int i = from; i < m; ++i) {
                idx[std::size_t(pos)] = i;
                rec(pos + 1, i);
            }
        };
        rec(0, 0);
        return out;
    }
    const std::vector<VecF> all = linalg::nonzero_vectors(F, r);
    double count = 1;
    for (int t = 0; t <= r; ++t) count *= double(all.size());
    if (count > double(1 << 20))
        throw std::length_error("iv_generators: tuple enumeration exceeds cap");
    std::vector<int> idx(std::size_t(r) + 1, 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == r + 1) {
            std::vector<VecF> vs;
            for (int t = 0; t <= r; ++t) vs.push_back(all[std::size_t(idx[std::size_t(t)])]);
            if (tuple_admissible(F, vs, r)) out.push_back({vs, tuple_frac(F, r, vs)});
            return;
        }
        for (int i = 0; i < int(all.size()); ++i) {
            idx[std::size_t(pos)] = i;
            rec(pos + 1);
        }
    };
    rec(0);
    return out;
}

std::vector<LinFrac> hat_delta_set(const rvring::Context& ctx, int i) {
    const Field& F = ctx.field();
    const int r = ctx.r();
    if (i < 1 || i > r) throw std::out_of_range("hat_delta_set: index out of range");
    VecF xi(std::size_t(r), 0);
    xi[std::size_t(i - 1)] = 1;
    const LinFrac inv_xi = LinFrac::one_over(F, xi);
    std::vector<LinFrac> out;
    const auto& delta = ctx.delta_set(i);
    // index 0 in delta_set(i) is the constant 1 (u = 0)
    out.push_back(ratfun::f_mul(F, ctx.f_elem(i), inv_xi));
    for (std::size_t j = 1; j < delta.size(); ++j)
        out.push_back(ratfun::f_sub(F, delta[j], inv_xi));
    return out;
}

std::vector<LinFrac> hat_delta_products(const rvring::Context& ctx) {
    const Field& F = ctx.field();
    std::vector<LinFrac> out{LinFrac::constant(ctx.r(), 1)};
    for (int i = 1; i <= ctx.r(); ++i) {
        const std::vector<LinFrac> hd = hat_delta_set(ctx, i);
        std::vector<LinFrac> next;
        next.reserve(out.size() * hd.size());
        for (const LinFrac& base : out)
            for (const LinFrac& d : hd) next.push_back(ratfun::f_mul(F, base, d));
        out = std::move(next);
    }
    return out;
}

long long iv_dim(const rvring::Context& ctx, int n) {
    const int r = ctx.r();
    const long q = ctx.q();
    // ways[d] = number of hat-products of degree -d: each level i contributes
    // degree -2 once (the f_i/X_i choice) and degree -1 in q^{i-1}-1 ways
    std::vector<long long> ways{1};
    long long qpow = 1;
    for (int i = 1; i <= r; ++i) {
        std::vector<long long> next(ways.size() + 2, 0);
        for (std::size_t d = 0; d < ways.size(); ++d) {
            next[d + 2] += ways[d];
            next[d + 1] += ways[d] * (qpow - 1);
        }
        ways = std::move(next);
        qpow *= q;
    }
    long long total = 0;
    for (std::size_t d = 0; d < ways.size(); ++d)
        if ((long long)(d) <= n)
            total += ways[d] * rvring::binom(n - (long long)(d) + r - 1, r - 1);
    return total;
}

IVPiece iv_piece(const rvring::Context& ctx, int n) {
    const Field& F = ctx.field();
    const int r = ctx.r();
    const rvring::GradedPiece& P = ctx.piece(n);
    IVPiece out;
    out.n = n;
    for (const LinFrac& hd : hat_delta_products(ctx)) {
        const auto deg = ratfun::f_degree(hd);
        if (!deg) throw std::logic_error("iv_piece: non-homogeneous hat product");
        const long long need = n + *deg;  // *deg is negative
        if (need < 0) continue;
        // multiply by every f-monomial of total degree `need`, f_1 exponent
        // outermost ascending (same order as rvring::freeness_check)
        std::function<void(int, long long, LinFrac)> rec = [&](int idx, long long left,
                                                               LinFrac acc) {
            if (idx == r - 1) {
                LinFrac v = acc;
                for (long long t = 0; t < left; ++t) v = ratfun::f_mul(F, v, ctx.f_elem(r));
                out.elems.push_back(std::move(v));
                return;
            }
            LinFrac cur = acc;
            for (long long e = 0; e <= left; ++e) {
                rec(idx + 1, left - e, cur);
                if (e < left) cur = ratfun::f_mul(F, cur, ctx.f_elem(idx + 1));
            }
        };
        if (r == 1) {
            LinFrac v = hd;
            for (long long t = 0; t < need; ++t) v = ratfun::f_mul(F, v, ctx.f_elem(1));
            out.elems.push_back(std::move(v));
        } else {
            rec(0, need, hd);
        }
    }
    const int cols = int(P.support.size());
    out.rows = fqmat::Mat(int(out.elems.size()), cols);
    for (std::size_t i = 0; i < out.elems.size(); ++i) {
        const auto num = ctx.expand_over_Dn(out.elems[i], n);
        if (!num) throw std::logic_error("iv_piece: element does not expand over D_n");
        for (const auto& [key, c] : num->terms) {
            const auto col = P.col_of(key);
            if (!col) throw std::logic_error("iv_piece: element leaves graded support");
            out.rows.at(int(i), *col) = c;
        }
    }
    out.ech = fqmat::Ech(F, out.rows);
    out.rank = out.ech.rank();
    if (out.rank != iv_dim(ctx, n))
        throw std::logic_error("iv_piece: rank does not certify the free-basis dimension");
    return out;
}

std::optional<std::vector<Elt>> iv_membership(const rvring::Context& ctx,
                                              const IVPiece& piece, const LinFrac& x) {
    const Field& F = ctx.field();
    (void)F;
    if (x.is_zero()) return std::vector<Elt>(piece.elems.size(), 0);
    const auto deg = ratfun::f_degree(x);
    if (!deg) throw std::invalid_argument("iv_membership: non-homogeneous element");
    if (*deg != -(long long)(piece.n)) return std::nullopt;
    const auto num = ctx.expand_over_Dn(x, piece.n);
    if (!num) return std::nullopt;
    const rvring::GradedPiece& P = ctx.piece(piece.n);
    std::vector<Elt> row(P.support.size(), 0);
    for (const auto& [key, c] : num->terms) {
        const auto col = P.col_of(key);
        if (!col) return std::nullopt;
        row[std::size_t(*col)] = c;
    }
    return piece.ech.solve_row(row);
}

std::optional<std::vector<Elt>> iv_membership(const rvring::Context& ctx,
                                              const LinFrac& x, int n) {
    return iv_membership(ctx, iv_piece(ctx, n), x);
}

namespace {

// write y as scalar * target + verify exactness; nullopt when y is not a
// scalar multiple
std::optional<Elt> scalar_multiple(const Field& F, const rvring::Context& ctx, int n,
                                   const LinFrac& y, const MPoly& target_num) {
    if (y.is_zero()) return Elt(0);
    const auto deg = ratfun::f_degree(y);
    if (!deg || *deg != -(long long)(n)) return std::nullopt;
    const auto num = ctx.expand_over_Dn(y, n);
    if (!num) return std::nullopt;
    if (num->terms.empty() || target_num.terms.empty()) return std::nullopt;
    if (num->terms.front().first != target_num.terms.front().first) return std::nullopt;
    const Elt c =
        F.mul(num->terms.front().second, F.inv(target_num.terms.front().second));
    MPoly diff = ratfun::p_sub(F, *num, ratfun::p_scale(F, target_num, c));
    if (!diff.is_zero()) return std::nullopt;
    return c;
}

}  // namespace

PairingReport pairing_table(const rvring::Context& ctx) {
    const Field& F = ctx.field();
    const int r = ctx.r();
    const int n = 2 * r;
    PairingReport rep;
    rep.ff = LinFrac::constant(r, F.one());
    for (int i = 1; i <= r; ++i) {
        rep.ff = ratfun::f_mul(F, rep.ff, ctx.f_elem(i));
        rep.ff = ratfun::f_mul(F, rep.ff, ctx.f_elem(i));
    }
    const auto ff_num = ctx.expand_over_Dn(rep.ff, n);
    if (!ff_num) throw std::logic_error("pairing_table: f-product does not expand");

    const std::vector<LinFrac> deltas = rvring::delta_products(ctx);
    const std::vector<LinFrac> hats = hat_delta_products(ctx);
    if (deltas.size() != hats.size())
        throw std::logic_error("pairing_table: size mismatch between products");
    rep.m = int(deltas.size());
    const linalg::Group U = linalg::u_group(F, r);
    rep.scalars = fqmat::Mat(rep.m, rep.m);
    rep.all_multiples = true;
    for (int a = 0; a < rep.m; ++a)
        for (int b = 0; b < rep.m; ++b) {
            const LinFrac prod = ratfun::f_mul(F, deltas[std::size_t(a)], hats[std::size_t(b)]);
            const LinFrac val = invariants::reynolds_sum(F, U, prod);
            const auto c = scalar_multiple(F, ctx, n, val, *ff_num);
            if (!c) {
                rep.all_multiples = false;
                continue;
            }
            rep.scalars.at(a, b) = *c;
        }
    rep.diagonal = rep.all_multiples;
    for (int a = 0; a < rep.m && rep.diagonal; ++a)
        for (int b = 0; b < rep.m; ++b)
            if (rep.scalars.at(a, b) != (a == b ? F.one() : Elt(0))) {
                rep.diagonal = false;
                break;
            }
    return rep;
}

MrReport mr_orthogonality(const rvring::Context& ctx) {
    const Field& F = ctx.field();
    const int r = ctx.r();
    MrReport rep;
    rep.fr2 = ratfun::f_mul(F, ctx.f_elem(r), ctx.f_elem(r));
    const auto fr2_num = ctx.expand_over_Dn(rep.fr2, 2);
    if (!fr2_num) throw std::logic_error("mr_orthogonality: f_r^2 does not expand");
    const auto& delta = ctx.delta_set(r);
    const auto hat = hat_delta_set(ctx, r);
    rep.m = int(delta.size());
    const linalg::Group W = linalg::w_group(F, r);
    rep.scalars = fqmat::Mat(rep.m, rep.m);
    rep.all_multiples = true;
    for (int a = 0; a < rep.m; ++a)
        for (int b = 0; b < rep.m; ++b) {
            const LinFrac prod = ratfun::f_mul(F, delta[std::size_t(a)], hat[std::size_t(b)]);
            const LinFrac val = invariants::reynolds_sum(F, W, prod);
            const auto c = scalar_multiple(F, ctx, 2, val, *fr2_num);
            if (!c) {
                rep.all_multiples = false;
                continue;
            }
            rep.scalars.at(a, b) = *c;
        }
    rep.diagonal = rep.all_multiples;
    for (int a = 0; a < rep.m && rep.diagonal; ++a)
        for (int b = 0; b < rep.m; ++b)
            if (rep.scalars.at(a, b) != (a == b ? F.one() : Elt(0))) {
                rep.diagonal = false;
                break;
            }
    return rep;
}

}  // namespace qv::dualizing
