#include "qv/modular.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace qv::modular {

namespace {

// values of rho on every nonzero code of F_q^r, indexed by vec_code
std::vector<Elt> values_by_code(const KCtx& K, const RecMap& rho) {
    const Field& B = K.base();
    const long long n = gfq::ipow(B.q(), K.r());
    std::vector<Elt> val(std::size_t(n), 0);
    for (long long c = 1; c < n; ++c)
        val[std::size_t(c)] = rho_eval(K, rho, linalg::vec_of_code(B, K.r(), std::uint64_t(c)));
    return val;
}

void check_values_size(const KCtx& K, const RecMap& rho, const char* who) {
    if (rho.values.size() != K.reps().size())
        throw std::invalid_argument(std::string(who) + ": value vector has wrong size");
}

Elt pullback_eval(const KCtx& K, const Subspace& sub, const std::vector<Elt>& images, int i) {
    // image of the i-th dual basis functional under the restriction map,
    // evaluated against `images` on the dual basis of sub's coordinates
    const Field& E = K.ext();
    Elt s = 0;
    for (int j = 0; j < sub.dim; ++j)
        s = E.add(s, E.mul(K.emb()(sub.rows[std::size_t(j) * sub.r + i]), images[std::size_t(j)]));
    return s;
}

LinMap pullback_linmap(const KCtx& K, const Subspace& sub, const LinMap& lam_s) {
    LinMap out;
    out.images.resize(std::size_t(K.r()));
    for (int i = 0; i < K.r(); ++i) out.images[std::size_t(i)] = pullback_eval(K, sub, lam_s.images, i);
    return out;
}

}  // namespace

KCtx::KCtx(long q, int r, int m) : r_(r), m_(m) {
    if (r < 1 || m < 1) throw std::invalid_argument("KCtx: need r >= 1 and m >= 1");
    base_ = &Field::get_order(q);
    long long qr = 1;
    for (int i = 0; i < r; ++i) {
        qr *= q;
        if (qr > (1LL << 20)) throw std::invalid_argument("KCtx: q^r too large");
    }
    long long qm = 1;
    for (int i = 0; i < m; ++i) {
        qm *= q;
        if (qm > (1LL << 20)) throw std::invalid_argument("KCtx: q^m too large");
    }
    ext_ = &Field::get_order(qm);
    emb_ = &Embedding::get(*base_, *ext_);
    reps_ = linalg::projective_reps(*base_, r);
    index_by_code_.assign(std::size_t(qr), -1);
    for (std::size_t i = 0; i < reps_.size(); ++i)
        index_by_code_[linalg::vec_code(*base_, reps_[i])] = int(i);
}

std::pair<int, Elt> KCtx::rep_of(const VecF& v) const {
    if (int(v.size()) != r_) throw std::invalid_argument("rep_of: wrong vector length");
    auto [rep, lead] = linalg::normalize_projective(*base_, v);
    const int idx = index_by_code_[linalg::vec_code(*base_, rep)];
    if (idx < 0) throw std::logic_error("rep_of: normalized vector is not a representative");
    return {idx, lead};
}

Elt rho_eval(const KCtx& K, const RecMap& rho, const VecF& v) {
    check_values_size(K, rho, "rho_eval");
    auto [idx, a] = K.rep_of(v);
    // rho(a * rep) = a^{-1} rho(rep)
    return K.ext().mul(K.ext().inv(K.emb()(a)), rho.values[std::size_t(idx)]);
}

Elt linmap_eval(const KCtx& K, const LinMap& lam, const VecF& w) {
    if (lam.images.size() != std::size_t(K.r()))
        throw std::invalid_argument("linmap_eval: image vector has wrong size");
    if (int(w.size()) != K.r()) throw std::invalid_argument("linmap_eval: wrong vector length");
    const Field& E = K.ext();
    Elt s = 0;
    for (int i = 0; i < K.r(); ++i)
        s = E.add(s, E.mul(K.emb()(w[std::size_t(i)]), lam.images[std::size_t(i)]));
    return s;
}

std::optional<std::pair<VecF, VecF>> reciprocal_witness(const KCtx& K, const RecMap& rho) {
    check_values_size(K, rho, "reciprocal_witness");
    const Field& B = K.base();
    const Field& E = K.ext();
    const long long n = gfq::ipow(B.q(), K.r());
    const std::vector<Elt> val = values_by_code(K, rho);
    for (long long ca = 1; ca < n; ++ca) {
        const VecF va = linalg::vec_of_code(B, K.r(), std::uint64_t(ca));
        for (long long cb = ca + 1; cb < n; ++cb) {
            const VecF vb = linalg::vec_of_code(B, K.r(), std::uint64_t(cb));
            const std::uint64_t cs = linalg::vec_code(B, linalg::vec_add(B, va, vb));
            if (cs == 0) continue;
            const Elt lhs = E.mul(val[std::size_t(ca)], val[std::size_t(cb)]);
            const Elt rhs = E.mul(val[cs], E.add(val[std::size_t(ca)], val[std::size_t(cb)]));
            if (lhs != rhs) return std::make_pair(va, vb);
        }
    }
    return std::nullopt;
}

bool is_reciprocal(const KCtx& K, const RecMap& rho) {
    return !reciprocal_witness(K, rho).has_value();
}

Subspace support(const KCtx& K, const RecMap& rho) {
    if (reciprocal_witness(K, rho).has_value())
        throw std::invalid_argument("support: map is not reciprocal");
    std::vector<VecF> gens;
    for (std::size_t i = 0; i < K.reps().size(); ++i)
        if (rho.values[i] != 0) gens.push_back(K.reps()[i]);
    if (gens.empty()) return Subspace::zero(K.r());
    const Subspace sub = Subspace::from_span(K.base(), K.r(), gens);
    // a reciprocal map is nonvanishing on exactly the nonzero part of a
    // subspace; anything else contradicts the classification
    const long long lines = (gfq::ipow(K.q(), sub.dim) - 1) / (K.q() - 1);
    if ((long long)(gens.size()) != lines)
        throw std::logic_error("support: nonvanishing set is not a subspace");
    for (const VecF& v : sub.nonzero_points(K.base()))
        if (rho_eval(K, rho, v) == 0)
            throw std::logic_error("support: nonvanishing set is not a subspace");
    return sub;
}

Classification classify(const KCtx& K, const RecMap& rho) {
    const Subspace sub = support(K, rho);  // also rejects non-reciprocal input
    if (sub.dim == 0) throw std::invalid_argument("classify: zero map");
    const Field& E = K.ext();
    Classification out;
    out.sub = sub;
    out.lambda.resize(std::size_t(sub.dim));
    for (int j = 0; j < sub.dim; ++j)
        out.lambda[std::size_t(j)] = E.inv(rho_eval(K, rho, sub.basis_row(j)));
    // the inverse of rho must be F_q-linear on the support
    for (const VecF& v : sub.nonzero_points(K.base())) {
        const VecF c = *sub.coords_of(K.base(), v);
        Elt lin = 0;
        for (int j = 0; j < sub.dim; ++j)
            lin = E.add(lin, E.mul(K.emb()(c[std::size_t(j)]), out.lambda[std::size_t(j)]));
        if (lin != E.inv(rho_eval(K, rho, v)))
            throw std::logic_error("classify: 1/rho is not linear on the support");
    }
    return out;
}

RecMap from_linmap_on(const KCtx& K, const Subspace& sub, const std::vector<Elt>& lambda) {
    if (sub.r != K.r() || sub.dim == 0)
        throw std::invalid_argument("from_linmap_on: need a nonzero subspace of F_q^r");
    if (lambda.size() != std::size_t(sub.dim))
        throw std::invalid_argument("from_linmap_on: lambda has wrong size");
    const Field& E = K.ext();
    auto lam_at = [&](const VecF& v) {
        const VecF c = *sub.coords_of(K.base(), v);
        Elt s = 0;
        for (int j = 0; j < sub.dim; ++j)
            s = E.add(s, E.mul(K.emb()(c[std::size_t(j)]), lambda[std::size_t(j)]));
        return s;
    };
    for (const VecF& v : sub.nonzero_points(K.base()))
        if (lam_at(v) == 0)
            throw std::invalid_argument("from_linmap_on: lambda is not injective on sub");
    RecMap out;
    out.values.assign(K.reps().size(), 0);
    for (std::size_t i = 0; i < K.reps().size(); ++i)
        if (sub.contains(K.base(), K.reps()[i]))
            out.values[i] = E.inv(lam_at(K.reps()[i]));
    return out;
}

RecMap canonical_scaling(const KCtx& K, const RecMap& rho) {
    check_values_size(K, rho, "canonical_scaling");
    const Field& E = K.ext();
    for (Elt v : rho.values)
        if (v != 0) {
            const Elt c = E.inv(v);
            RecMap out;
            out.values.reserve(rho.values.size());
            for (Elt x : rho.values) out.values.push_back(E.mul(c, x));
            return out;
        }
    return rho;
}

LinMap canonical_scaling(const KCtx& K, const LinMap& lam) {
    const Field& E = K.ext();
    for (Elt v : lam.images)
        if (v != 0) {
            const Elt c = E.inv(v);
            LinMap out;
            out.images.reserve(lam.images.size());
            for (Elt x : lam.images) out.images.push_back(E.mul(c, x));
            return out;
        }
    return lam;
}

std::vector<RecMap> qv_points(const KCtx& K) {
    const Field& E = K.ext();
    const long long qm = E.q();
    std::vector<RecMap> out;
    for (const Subspace& sub : linalg::all_nonzero_subspaces(K.base(), K.r())) {
        const int s = sub.dim;
        long long tuples = 1;
        for (int i = 1; i < s; ++i) {
            tuples *= qm;
            if (tuples > (1LL << 20)) throw std::length_error("qv_points: enumeration infeasible");
        }
        // lambda on the RREF basis rows, scaled so lambda(b_1) = 1; every
        // injective class has exactly one such representative
        std::vector<Elt> lambda(std::size_t(s), 0);
        lambda[0] = E.one();
        const std::vector<VecF> pts = sub.nonzero_points(K.base());
        for (long long t = 0; t < tuples; ++t) {
            long long code = t;
            for (int j = 1; j < s; ++j) {
                lambda[std::size_t(j)] = Elt(code % qm);
                code /= qm;
            }
            bool injective = true;
            for (const VecF& v : pts) {
                const VecF c = *sub.coords_of(K.base(), v);
                Elt lin = 0;
                for (int j = 0; j < s; ++j)
                    lin = E.add(lin, E.mul(K.emb()(c[std::size_t(j)]), lambda[std::size_t(j)]));
                if (lin == 0) {
                    injective = false;
                    break;
                }
            }
            if (!injective) continue;
            out.push_back(canonical_scaling(K, from_linmap_on(K, sub, lambda)));
        }
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw std::logic_error("qv_points: enumeration produced a duplicate point");
    return out;
}

long long qv_count_formula(long q, int r, int m) {
    const long long qm = gfq::ipow(q, m);
    long long total = 0;
    for (int s = 1; s <= r; ++s) {
        long long omega = 1;
        for (int i = 1; i < s; ++i) omega *= qm - gfq::ipow(q, i);
        total += linalg::gauss_binom(r, s, q) * omega;
    }
    return total;
}

Subspace stratum_of(const KCtx& K, const RecMap& pt) { return support(K, pt); }

RecMap extend_by_zero(const KCtx& K, const Subspace& sub, const KCtx& Ks, const RecMap& rho_s) {
    if (sub.r != K.r() || sub.dim == 0)
        throw std::invalid_argument("extend_by_zero: need a nonzero subspace of F_q^r");
    if (Ks.r() != sub.dim || Ks.q() != K.q() || Ks.m() != K.m())
        throw std::invalid_argument("extend_by_zero: sub-context does not match the subspace");
    check_values_size(Ks, rho_s, "extend_by_zero");
    RecMap out;
    out.values.assign(K.reps().size(), 0);
    for (std::size_t i = 0; i < K.reps().size(); ++i)
        if (sub.contains(K.base(), K.reps()[i])) {
            const VecF c = *sub.coords_of(K.base(), K.reps()[i]);
            out.values[i] = rho_eval(Ks, rho_s, c);
        }
    return out;
}

Subspace lift_subspace(const KCtx& K, const Subspace& sub, const Subspace& sub_of_sub) {
    if (sub.r != K.r() || sub_of_sub.r != sub.dim)
        throw std::invalid_argument("lift_subspace: dimension mismatch");
    const Field& B = K.base();
    std::vector<VecF> lifted;
    for (int i = 0; i < sub_of_sub.dim; ++i) {
        const VecF c = sub_of_sub.basis_row(i);
        VecF v(std::size_t(K.r()), 0);
        for (int j = 0; j < sub.dim; ++j)
            v = linalg::vec_add(B, v, linalg::vec_scale(B, c[std::size_t(j)], sub.basis_row(j)));
        lifted.push_back(v);
    }
    Subspace out = lifted.empty() ? Subspace::zero(K.r()) : Subspace::from_span(B, K.r(), lifted);
    if (out.dim != sub_of_sub.dim) throw std::logic_error("lift_subspace: rank dropped");
    return out;
}

std::vector<LinMap> pv_points(const KCtx& K) {
    const Field& E = K.ext();
    const long long qm = E.q();
    long long count = 1;
    for (int i = 1; i < K.r(); ++i) {
        count = count * qm + 1;
        if (count > (1LL << 20)) throw std::length_error("pv_points: enumeration infeasible");
    }
    std::vector<LinMap> out;
    // first nonzero image normalized to 1: choose its position, then the
    // later images freely
    for (int j = 0; j < K.r(); ++j) {
        const int tail = K.r() - 1 - j;
        long long tuples = 1;
        for (int i = 0; i < tail; ++i) tuples *= qm;
        for (long long t = 0; t < tuples; ++t) {
            LinMap lam;
            lam.images.assign(std::size_t(K.r()), 0);
            lam.images[std::size_t(j)] = E.one();
            long long code = t;
            for (int i = j + 1; i < K.r(); ++i) {
                lam.images[std::size_t(i)] = Elt(code % qm);
                code /= qm;
            }
            out.push_back(lam);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

long long pv_count_formula(long q, int r, int m) {
    return (gfq::ipow(q, m * r) - 1) / (gfq::ipow(q, m) - 1);
}

Subspace linmap_kernel(const KCtx& K, const LinMap& lam) {
    const Field& B = K.base();
    const long long n = gfq::ipow(B.q(), K.r());
    std::vector<VecF> zeros;
    for (long long c = 1; c < n; ++c) {
        const VecF v = linalg::vec_of_code(B, K.r(), std::uint64_t(c));
        if (linmap_eval(K, lam, v) == 0) zeros.push_back(v);
    }
    const Subspace out =
        zeros.empty() ? Subspace::zero(K.r()) : Subspace::from_span(B, K.r(), zeros);
    if ((long long)(zeros.size()) + 1 != gfq::ipow(B.q(), out.dim))
        throw std::logic_error("linmap_kernel: zero set is not a subspace");
    return out;
}

LinMap g_map(const KCtx& K, const RecMap& rho) {
    check_values_size(K, rho, "g_map");
    const Field& B = K.base();
    const Field& E = K.ext();
    const long long n = gfq::ipow(B.q(), K.r());
    const std::vector<Elt> val = values_by_code(K, rho);
    // defining sum at every functional
    std::vector<Elt> G(std::size_t(n), 0);
    for (long long lc = 1; lc < n; ++lc) {
        const VecF ell = linalg::vec_of_code(B, K.r(), std::uint64_t(lc));
        Elt s = 0;
        for (long long vc = 1; vc < n; ++vc)
            if (linalg::dot(B, ell, linalg::vec_of_code(B, K.r(), std::uint64_t(vc))) == B.one())
                s = E.add(s, val[std::size_t(vc)]);
        G[std::size_t(lc)] = s;
    }
    LinMap out;
    out.images.resize(std::size_t(K.r()));
    for (int i = 0; i < K.r(); ++i) {
        VecF unit(std::size_t(K.r()), 0);
        unit[std::size_t(i)] = B.one();
        out.images[std::size_t(i)] = G[linalg::vec_code(B, unit)];
    }
    for (long long lc = 0; lc < n; ++lc)
        if (G[std::size_t(lc)] !=
            linmap_eval(K, out, linalg::vec_of_code(B, K.r(), std::uint64_t(lc))))
            throw std::logic_error("g_map: defining sum is not F_q-linear");
    return out;
}

RecMap f_map(const KCtx& K, const LinMap& lam) {
    const Field& B = K.base();
    const Field& E = K.ext();
    const long long n = gfq::ipow(B.q(), K.r());
    std::vector<Elt> lam_by_code(std::size_t(n), 0);
    for (long long lc = 1; lc < n; ++lc)
        lam_by_code[std::size_t(lc)] =
            linmap_eval(K, lam, linalg::vec_of_code(B, K.r(), std::uint64_t(lc)));
    RecMap out;
    out.values.resize(K.reps().size());
    for (std::size_t i = 0; i < K.reps().size(); ++i) {
        Elt prod = E.one();
        long long factors = 0;
        for (long long lc = 1; lc < n; ++lc)
            if (linalg::dot(B, linalg::vec_of_code(B, K.r(), std::uint64_t(lc)), K.reps()[i]) ==
                B.one()) {
                prod = E.mul(prod, lam_by_code[std::size_t(lc)]);
                ++factors;
            }
        if (factors != gfq::ipow(B.q(), K.r() - 1))
            throw std::logic_error("f_map: wrong number of product factors");
        out.values[i] = prod;
    }
    if (auto w = reciprocal_witness(K, out))
        throw std::logic_error("f_map: output failed the reciprocity identity");
    return out;
}

GfCompatReport gf_compat_check(const KCtx& K, const Subspace& sub, int samples,
                               std::uint64_t seed) {
    if (sub.r != K.r() || sub.dim == 0)
        throw std::invalid_argument("gf_compat_check: need a nonzero subspace of F_q^r");
    const Field& E = K.ext();
    const KCtx Ks(K.q(), sub.dim, K.m());
    const int rpp = K.r() - sub.dim;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> dist(0, E.q() - 1);
    auto rand_elt = [&]() { return Elt(dist(rng)); };

    GfCompatReport rep;
    rep.g_ok = rep.f_ok = true;

    // g-square: every Q-point of the sub-context, plus one random rescaling
    for (const RecMap& pt : qv_points(Ks)) {
        for (int variant = 0; variant < 2; ++variant) {
            RecMap rho_s = pt;
            if (variant == 1) {
                Elt beta = 0;
                while (beta == 0) beta = rand_elt();
                for (Elt& v : rho_s.values) v = E.mul(beta, v);
            }
            const LinMap lhs = pullback_linmap(K, sub, g_map(Ks, rho_s));
            const LinMap rhs = g_map(K, extend_by_zero(K, sub, Ks, rho_s));
            if (lhs != rhs) rep.g_ok = false;
            ++rep.g_checked;
        }
    }

    // f-square: corner cases, then uniformly random lambda'
    for (int t = 0; t < samples; ++t) {
        LinMap lam_s;
        lam_s.images.assign(std::size_t(sub.dim), 0);
        if (t == 1)
            for (Elt& x : lam_s.images) x = E.one();
        if (t >= 2)
            for (Elt& x : lam_s.images) x = rand_elt();
        RecMap lhs_s = f_map(Ks, lam_s);
        for (Elt& v : lhs_s.values) v = E.frobenius(v, rpp, K.q());
        const RecMap lhs = extend_by_zero(K, sub, Ks, lhs_s);
        const RecMap rhs = f_map(K, pullback_linmap(K, sub, lam_s));
        if (lhs != rhs) rep.f_ok = false;
        ++rep.f_checked;
    }
    return rep;
}

long long jacobian_kernel_dim(const KCtx& K, const RecMap& pt) {
    check_values_size(K, pt, "jacobian_kernel_dim");
    const Field& B = K.base();
    const Field& E = K.ext();
    if (std::all_of(pt.values.begin(), pt.values.end(), [](Elt v) { return v == 0; }))
        throw std::invalid_argument("jacobian_kernel_dim: zero map is not a point");
    if (reciprocal_witness(K, pt).has_value())
        throw std::invalid_argument("jacobian_kernel_dim: map is not reciprocal");
    const long long n = gfq::ipow(B.q(), K.r());
    const int N = int(K.reps().size());
    const std::vector<Elt> val = values_by_code(K, pt);
    // representative index and d(Y_v)/d(Z_rep) = emb(alpha)^{-1}, per code
    std::vector<int> rep_idx(std::size_t(n), -1);
    std::vector<Elt> dcoef(std::size_t(n), 0);
    for (long long c = 1; c < n; ++c) {
        auto [idx, a] = K.rep_of(linalg::vec_of_code(B, K.r(), std::uint64_t(c)));
        rep_idx[std::size_t(c)] = idx;
        dcoef[std::size_t(c)] = E.inv(K.emb()(a));
    }
    std::vector<Elt> rows;
    int nrows = 0;
    std::vector<Elt> row(std::size_t(N), 0);
    for (long long ca = 1; ca < n; ++ca) {
        const VecF va = linalg::vec_of_code(B, K.r(), std::uint64_t(ca));
        for (long long cb = ca + 1; cb < n; ++cb) {
            const VecF vb = linalg::vec_of_code(B, K.r(), std::uint64_t(cb));
            const long long cs = (long long)(linalg::vec_code(B, linalg::vec_add(B, va, vb)));
            if (cs == 0) continue;
            const Elt ra = val[std::size_t(ca)], rb = val[std::size_t(cb)], rs = val[std::size_t(cs)];
            if (E.mul(ra, rb) != E.mul(rs, E.add(ra, rb)))
                throw std::logic_error("jacobian_kernel_dim: point fails the cone relations");
            // d/dZ of  Y_a Y_b - Y_{a+b} (Y_a + Y_b)  at the point
            std::fill(row.begin(), row.end(), Elt(0));
            auto acc = [&](long long code, Elt factor) {
                row[std::size_t(rep_idx[std::size_t(code)])] =
                    E.add(row[std::size_t(rep_idx[std::size_t(code)])],
                          E.mul(dcoef[std::size_t(code)], factor));
            };
            acc(ca, E.sub(rb, rs));
            acc(cb, E.sub(ra, rs));
            acc(cs, E.neg(E.add(ra, rb)));
            if (std::any_of(row.begin(), row.end(), [](Elt x) { return x != 0; })) {
                rows.insert(rows.end(), row.begin(), row.end());
                ++nrows;
            }
        }
    }
    if (nrows == 0) return N;
    fqmat::Mat M(nrows, N);
    M.a = std::move(rows);
    return N - fqmat::rank(E, std::move(M));
}

long long tangent_dim(const KCtx& K, const RecMap& pt) {
    return jacobian_kernel_dim(K, pt) - 1;
}

}  // namespace qv::modular
