#include "qv/invariants.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qv::invariants {

using fqmat::Mat;
using linalg::Group;
using linalg::VecF;
using ratfun::LinForm;

// ---------------------------------------------------------------------------
// Reynolds-type sums
// ---------------------------------------------------------------------------

LinFrac reynolds_sum(const Field& F, const Group& H, const LinFrac& x) {
    LinFrac acc = LinFrac::zero(x.nvars);
    for (const Mat& g : H.elems) acc = ratfun::f_add(F, acc, ratfun::f_act(F, g, x));
    return acc;
}

// ---------------------------------------------------------------------------
// Brute-force invariant dimensions
// ---------------------------------------------------------------------------

const Mat& ActionCache::rows_for(const Mat& g) {
    auto it = cache_.find(g.a);
    if (it != cache_.end()) return it->second;
    const Field& F = ctx_.field();
    const rvring::GradedPiece& P = ctx_.piece(n_);
    const int h = int(P.elems.size());
    const int cols = int(P.support.size());
    Mat A(h, cols);
    for (int i = 0; i < h; ++i) {
        LinFrac y = ratfun::f_act(F, g, P.elems[i]);
        std::optional<MPoly> num = ctx_.expand_over_Dn(y, n_);
        if (!num) throw std::logic_error("ActionCache: image does not expand over D_n");
        for (const auto& [key, c] : num->terms) {
            std::optional<int> col = P.col_of(key);
            // the image lies in the span of the basis rows, so its support
            // cannot leave the piece support
            if (!col) throw std::logic_error("ActionCache: image leaves graded support");
            A.at(i, *col) = c;
        }
    }
    return cache_.emplace(g.a, std::move(A)).first->second;
}

long long invariant_dim_bruteforce(const rvring::Context& ctx, const Group& H,
                                   int n, ActionCache* cache) {
    const Field& F = ctx.field();
    const rvring::GradedPiece& P = ctx.piece(n);
    const long long h = P.rank;
    std::vector<Mat> gens = linalg::generating_set(F, H);
    if (gens.empty()) return h;  // trivial group fixes everything
    std::optional<ActionCache> local;
    if (cache == nullptr) {
        local.emplace(ctx, n);
        cache = &*local;
    } else if (&cache->ctx() != &ctx || cache->n() != n) {
        throw std::invalid_argument("invariant_dim_bruteforce: cache mismatch");
    }
    const int cols = int(P.support.size());
    Mat S(int(h), cols * int(gens.size()));
    for (std::size_t t = 0; t < gens.size(); ++t) {
        const Mat& A = cache->rows_for(gens[t]);
        for (int i = 0; i < int(h); ++i)
            for (int j = 0; j < cols; ++j) {
                Elt d = F.add(A.at(i, j), F.neg(P.rows.at(i, j)));
                if (d != 0) S.at(i, int(t) * cols + j) = d;
            }
    }
    return h - fqmat::rank(F, std::move(S));
}

// ---------------------------------------------------------------------------
// Unipotent closed formula
// ---------------------------------------------------------------------------

bool is_unipotent(const Field& F, const Group& H) {
    const long p = F.p();
    for (const Mat& m : H.elems) {
        long o = linalg::elem_order(F, m);
        while (o % p == 0) o /= p;
        if (o != 1) return false;
    }
    return true;
}

UnipotentFormulaData unipotent_formula_data(const Field& F, int r, const Group& H) {
    if (!is_unipotent(F, H))
        throw std::invalid_argument("unipotent_formula_data: H is not unipotent");
    const Group G = linalg::gl_group(F, r);
    const Group U = linalg::u_group(F, r);
    UnipotentFormulaData data;
    data.r = r;
    for (int s = 1; s <= r; ++s) {
        const Group P = linalg::p_group(F, r, s);
        const Group L = linalg::l_group(F, r, s);
        // |U*L| as a plain set product
        std::set<std::vector<Elt>> ul;
        for (const Mat& u : U.elems)
            for (const Mat& l : L.elems) ul.insert(fqmat::mat_mul(F, u, l).a);
        if (P.order() % (long long)(ul.size()) != 0)
            throw std::logic_error("unipotent_formula_data: |U*L| does not divide |P_s|");
        const long long index = P.order() / (long long)(ul.size());
        const long long dcc = linalg::double_coset_count(F, H, G, L);
        if (dcc % index != 0)
            throw std::logic_error("unipotent_formula_data: coset count not divisible by index");
        data.coset_ratio.push_back(dcc / index);
    }
    return data;
}

long long unipotent_dim_eval(const UnipotentFormulaData& data, long long n) {
    if (n < 0) throw std::invalid_argument("unipotent_dim_eval: n must be >= 0");
    long long total = 0;
    for (int s = 1; s <= data.r; ++s)
        total += data.coset_ratio[std::size_t(s - 1)] * rvring::binom_gen(n - 1, s - 1);
    return total;
}

long long unipotent_dim_formula(const Field& F, int r, const Group& H, long long n) {
    return unipotent_dim_eval(unipotent_formula_data(F, r, H), n);
}

// ---------------------------------------------------------------------------
// Dickson invariants
// ---------------------------------------------------------------------------

namespace {

// multiply the T-polynomial (coeffs ascending) by (T - l)
void mul_T_minus(const Field& F, std::vector<MPoly>& coeffs, const MPoly& l) {
    const int nv = coeffs.front().nvars;
    std::vector<MPoly> out(coeffs.size() + 1, MPoly::zero(nv));
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        out[j + 1] = ratfun::p_add(F, out[j + 1], coeffs[j]);
        if (!l.is_zero())
            out[j] = ratfun::p_sub(F, out[j], ratfun::p_mul(F, l, coeffs[j]));
    }
    coeffs = std::move(out);
}

MPoly linform_poly(const Field& F, int nvars, const VecF& v) {
    MPoly p = MPoly::zero(nvars);
    for (int i = 0; i < nvars; ++i)
        if (v[std::size_t(i)] != 0)
            p = ratfun::p_add(
                F, p, ratfun::p_scale(F, MPoly::variable(nvars, i), v[std::size_t(i)]));
    return p;
}

long long ipow(long long b, int e) {
    long long x = 1;
    while (e-- > 0) x *= b;
    return x;
}

}  // namespace

DicksonData dickson(const Field& F, int r) {
    const long q = F.q();
    const long long qr = ipow(q, r);
    DicksonData out;

    // k(T) = prod over all v in V (zero included) of (T - l_v)
    std::vector<MPoly> kT{MPoly::constant(r, F.one())};
    mul_T_minus(F, kT, MPoly::zero(r));  // v = 0 contributes the factor T
    for (const VecF& v : linalg::nonzero_vectors(F, r))
        mul_T_minus(F, kT, linform_poly(F, r, v));
    if ((long long)(kT.size()) != qr + 1)
        throw std::logic_error("dickson: wrong T-degree of k(T)");

    // structural zero check: only T^{q^i} and T^{q^r} may carry coefficients
    std::set<long long> allowed;
    for (int i = 0; i <= r; ++i) allowed.insert(ipow(q, i));
    for (long long j = 0; j <= qr; ++j)
        if (!allowed.count(j) && !kT[std::size_t(j)].is_zero())
            throw std::logic_error("dickson: unexpected nonzero coefficient in k(T)");
    if (!(kT[std::size_t(qr)] == MPoly::constant(r, F.one())))
        throw std::logic_error("dickson: k(T) is not monic");
    for (int i = 0; i < r; ++i) out.k.push_back(kT[std::size_t(ipow(q, i))]);
    out.kT = std::move(kT);

    // g_i = prod_{u in V_{i-1}} (X_i + u)
    for (int i = 1; i <= r; ++i) {
        MPoly gi = MPoly::constant(r, F.one());
        const long long cnt = ipow(q, i - 1);
        for (long long code = 0; code < cnt; ++code) {
            VecF u = linalg::vec_of_code(F, i - 1, (std::uint64_t)(code));
            u.resize(std::size_t(r), 0);
            u[std::size_t(i - 1)] = F.one();  // X_i + u
            gi = ratfun::p_mul(F, gi, linform_poly(F, r, u));
        }
        out.g.push_back(std::move(gi));
    }

    // k'_0 = product of the projective representatives
    MPoly kp0 = MPoly::constant(r, F.one());
    for (const VecF& v : linalg::projective_reps(F, r))
        kp0 = ratfun::p_mul(F, kp0, linform_poly(F, r, v));
    out.kp0 = std::move(kp0);

    // (k'_0)^{q-1} = c * k_0: derive and verify the constant
    MPoly pw = ratfun::p_pow(F, out.kp0, (std::uint64_t)(q - 1));
    if (pw.is_zero() || out.k[0].is_zero())
        throw std::logic_error("dickson: degenerate k'_0 relation");
    if (pw.terms.front().first != out.k[0].terms.front().first)
        throw std::logic_error("dickson: k'_0 relation leading terms differ");
    const Elt c = F.mul(pw.terms.front().second, F.inv(out.k[0].terms.front().second));
    if (!ratfun::p_sub(F, pw, ratfun::p_scale(F, out.k[0], c)).is_zero())
        throw std::logic_error("dickson: (k'_0)^{q-1} is not proportional to k_0");
    out.kp0_relation = c;
    return out;
}

// ---------------------------------------------------------------------------
// h-invariants
// ---------------------------------------------------------------------------

HInvariants h_invariants(const rvring::Context& ctx, bool with_hT) {
    const Field& F = ctx.field();
    const int r = ctx.r();
    const long q = ctx.q();
    DicksonData D = dickson(F, r);

    std::optional<ratfun::LinearFactorization> fac = ratfun::factor_linear(F, D.k[0]);
    if (!fac) throw std::logic_error("h_invariants: k_0 does not split into linear forms");
    // k_0 must be the product of all projective representatives, each to the
    // power q-1
    if ((long long)(fac->factors.size()) != (long long)(ctx.reps().size()))
        throw std::logic_error("h_invariants: wrong number of linear factors in k_0");
    for (const auto& [form, mult] : fac->factors)
        if (mult != int(q) - 1)
            throw std::logic_error("h_invariants: unexpected multiplicity in k_0");

    HInvariants out;
    const Elt s_inv = F.inv(fac->scalar);
    for (int i = 1; i <= r; ++i) {
        LinFrac h;
        h.nvars = r;
        h.num = (i < r) ? ratfun::p_scale(F, D.k[std::size_t(i)], s_inv)
                        : MPoly::constant(r, s_inv);
        h.den = fac->factors;
        ratfun::reduce_inplace(F, h);
        out.h.push_back(std::move(h));
    }

    if (with_hT) {
        // h(T) = prod_{v in V nonzero} (T - 1/v), coefficients ascending
        std::vector<LinFrac> coeffs{LinFrac::constant(r, F.one())};
        for (const VecF& v : linalg::nonzero_vectors(F, r)) {
            const LinFrac rec = ctx.gen_recip(v);
            std::vector<LinFrac> next(coeffs.size() + 1, LinFrac::zero(r));
            for (std::size_t j = 0; j < coeffs.size(); ++j) {
                next[j + 1] = ratfun::f_add(F, next[j + 1], coeffs[j]);
                next[j] = ratfun::f_sub(F, next[j], ratfun::f_mul(F, rec, coeffs[j]));
            }
            coeffs = std::move(next);
        }
        out.hT = std::move(coeffs);
    }
    return out;
}

LinFrac unipoly_eval(const Field& F, const std::vector<LinFrac>& coeffs,
                     const LinFrac& x) {
    if (coeffs.empty()) throw std::invalid_argument("unipoly_eval: empty polynomial");
    LinFrac acc = coeffs.back();
    for (std::size_t j = coeffs.size() - 1; j-- > 0;)
        acc = ratfun::f_add(F, ratfun::f_mul(F, acc, x), coeffs[j]);
    return acc;
}

// ---------------------------------------------------------------------------
// Invariant Hilbert series checks
// ---------------------------------------------------------------------------

std::vector<long long> invariant_weights(InvWhich which, int r, long q) {
    std::vector<long long> w;
    switch (which) {
        case InvWhich::U:
            w.assign(std::size_t(r), 1);
            break;
        case InvWhich::G:
            for (int i = 1; i <= r; ++i) w.push_back(ipow(q, i) - 1);
            break;
        case InvWhich::Gprime:
            for (int i = 1; i < r; ++i) w.push_back(ipow(q, i) - 1);
            w.push_back((ipow(q, r) - 1) / (q - 1));
            break;
    }
    return w;
}

long long monomial_count(const std::vector<long long>& weights, long long n) {
    if (n < 0) return 0;
    std::vector<long long> dp(std::size_t(n) + 1, 0);
    dp[0] = 1;
    for (long long d : weights) {
        if (d <= 0) throw std::invalid_argument("monomial_count: nonpositive weight");
        for (long long j = d; j <= n; ++j) dp[std::size_t(j)] += dp[std::size_t(j - d)];
    }
    return dp[std::size_t(n)];
}

std::vector<InvariantRow> invariant_hilbert_check(const rvring::Context& ctx,
                                                  InvWhich which, int n_max) {
    const Field& F = ctx.field();
    const int r = ctx.r();
    Group H;
    switch (which) {
        case InvWhich::U:
            H = linalg::u_group(F, r);
            break;
        case InvWhich::G:
            H = linalg::gl_group(F, r);
            break;
        case InvWhich::Gprime:
            H = linalg::closure(F, linalg::sl_generators(F, r));
            break;
    }
    const std::vector<long long> weights = invariant_weights(which, r, ctx.q());
    std::vector<InvariantRow> rows;
    for (int n = 0; n <= n_max; ++n) {
        InvariantRow row;
        row.n = n;
        row.brute = invariant_dim_bruteforce(ctx, H, n);
        row.predicted = monomial_count(weights, n);
        row.ok = (row.brute == row.predicted);
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Weighted projective data
// ---------------------------------------------------------------------------

std::vector<long long> wp_weights(WpCase c, int r, long q) {
    std::vector<long long> w;
    switch (c) {
        case WpCase::QU:
            w.assign(std::size_t(r), 1);
            break;
        case WpCase::PU:
            for (int i = 0; i < r; ++i) w.push_back(ipow(q, i));
            break;
        case WpCase::QG:
            for (int i = 1; i <= r; ++i) w.push_back(ipow(q, i) - 1);
            break;
        case WpCase::PG:
            w.push_back(ipow(q, r) - 1);
            for (int i = 1; i < r; ++i) w.push_back(ipow(q, r) - ipow(q, i));
            break;
        case WpCase::QGp:
            for (int i = 1; i < r; ++i) w.push_back(ipow(q, i) - 1);
            w.push_back((ipow(q, r) - 1) / (q - 1));
            break;
        case WpCase::PGp:
            w.push_back((ipow(q, r) - 1) / (q - 1));
            for (int i = 1; i < r; ++i) w.push_back(ipow(q, r) - ipow(q, i));
            break;
    }
    return w;
}

bool wp_regular(std::vector<long long> w) {
    if (w.empty()) throw std::invalid_argument("wp_regular: empty weight list");
    for (long long x : w)
        if (x <= 0) throw std::invalid_argument("wp_regular: nonpositive weight");
    const int r = int(w.size());
    if (r <= 1) return true;
    long long g = 0;
    for (long long x : w) g = std::gcd(g, x);
    for (long long& x : w) x /= g;
    std::set<long long> primes;
    for (long long x : w) {
        long long m = x;
        for (long long p = 2; p * p <= m; ++p)
            if (m % p == 0) {
                primes.insert(p);
                while (m % p == 0) m /= p;
            }
        if (m > 1) primes.insert(m);
    }
    for (long long p : primes) {
        int best = 0;
        std::vector<int> ord;
        for (long long x : w) {
            int o = 0;
            while (x % p == 0) {
                x /= p;
                ++o;
            }
            ord.push_back(o);
            best = std::max(best, o);
        }
        if (best == 0) continue;
        const int cnt = int(std::count(ord.begin(), ord.end(), best));
        if (cnt < r - 1) return false;
    }
    return true;
}

}  // namespace qv::invariants
