#include "qv/rvring.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace qv::rvring {

using ratfun::f_add;
using ratfun::f_mul;
using ratfun::f_pow;
using ratfun::grlex_greater;
using ratfun::mul_linform_pow;
using ratfun::p_add;

long long binom(long long n, long long k) {
    if (k < 0 || n < 0) throw std::invalid_argument("binom: negative argument");
    if (k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

long long binom_gen(long long T, int k) {
    if (k < 0) throw std::invalid_argument("binom_gen: negative k");
    long long num = 1;
    for (int j = 0; j < k; ++j) num *= (T - j);
    long long fact = 1;
    for (int j = 2; j <= k; ++j) fact *= j;
    if (num % fact != 0) throw std::logic_error("binom_gen: non-integral");
    return num / fact;
}

namespace {
long long qpow(long q, long long e) {
    long long r = 1;
    while (e-- > 0) r *= q;
    return r;
}
// sum over I subset of {2..r} of q^{sum (i-1)} * C-evaluator(|I|)
template <class BinomFn>
long long hilbert_sum(int r, long q, BinomFn&& bin) {
    long long total = 0;
    int bits = r - 1;  // bit k <-> i = k+2
    for (unsigned mask = 0; mask < (1u << bits); ++mask) {
        long long w = 0;
        int sz = 0;
        for (int k = 0; k < bits; ++k)
            if (mask & (1u << k)) {
                w += k + 1;  // i-1 for i = k+2
                ++sz;
            }
        total += qpow(q, w) * bin(sz);
    }
    return total;
}
}  // namespace

long long hilbert_h(int r, long q, long long n) {
    if (r < 1) throw std::invalid_argument("hilbert_h: r < 1");
    if (n < 0) return 0;
    return hilbert_sum(r, q, [&](int k) { return binom(n, k); });
}

long long hilbert_poly(int r, long q, long long n) {
    if (r < 1) throw std::invalid_argument("hilbert_poly: r < 1");
    return hilbert_sum(r, q, [&](int k) { return binom_gen(n, k); });
}

long long a_rs(int r, long q, int s) {
    if (s < 0 || s > r - 1) throw std::out_of_range("a_rs: s out of range");
    long long total = 0;
    int bits = r - 1;
    for (unsigned mask = 0; mask < (1u << bits); ++mask) {
        int sz = 0;
        long long prod = 1;
        for (int k = 0; k < bits; ++k)
            if (mask & (1u << k)) {
                ++sz;
                prod *= qpow(q, k + 1) - 1;  // q^{i-1} - 1 for i = k+2
            }
        if (sz == s) total += prod;
    }
    return total;
}

long long coh_dim(int i, long long n, int r, long q) {
    if (i < 0 || i > r - 1) return 0;
    if (i == 0 && n >= 0) return hilbert_h(r, q, n);
    if (i == r - 1 && n < 0) {
        long long v = hilbert_poly(r, q, n);
        return v < 0 ? -v : v;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

namespace {
// vectors of V_{i-1} = span(X_1..X_{i-1}) inside F_q^r, code order
std::vector<VecF> chain_vectors(const Field& F, int r, int i) {
    std::vector<VecF> out;
    long long n = 1;
    for (int k = 0; k < i - 1; ++k) n *= F.q();
    for (long long code = 0; code < n; ++code) {
        VecF u(std::size_t(r), 0);
        long long t = code;
        for (int k = 0; k < i - 1; ++k) {
            u[std::size_t(k)] = Elt(t % F.q());
            t /= F.q();
        }
        out.push_back(std::move(u));
    }
    return out;
}
}  // namespace

Context::Context(long q, int r) : F_(Field::get_order(q)), r_(r) {
    if (r < 1 || r > ratfun::kMaxVars) throw std::invalid_argument("Context: bad rank");
    reps_ = linalg::projective_reps(F_, r);
    f_.resize(std::size_t(r) + 1, LinFrac::zero(r));
    delta_.resize(std::size_t(r) + 1);
    e_.resize(std::size_t(r) + 1);
    for (int i = 1; i <= r; ++i) {
        LinFrac fi = LinFrac::zero(r);
        for (const VecF& u : chain_vectors(F_, r, i)) {
            VecF w = u;
            w[std::size_t(i - 1)] = 1;  // X_i + u
            LinFrac rec = LinFrac::one_over(F_, w);
            fi = f_add(F_, fi, rec);
            e_[std::size_t(i)].push_back(rec);
            if (linalg::is_zero_vec(u))
                delta_[std::size_t(i)].push_back(LinFrac::constant(r, 1));
            else
                delta_[std::size_t(i)].push_back(rec);
        }
        f_[std::size_t(i)] = std::move(fi);
    }
}

LinFrac Context::gen_recip(const VecF& v) const { return LinFrac::one_over(F_, v); }

const LinFrac& Context::f_elem(int i) const {
    if (i < 1 || i > r_) throw std::out_of_range("f_elem: index out of range");
    return f_[std::size_t(i)];
}

const std::vector<LinFrac>& Context::delta_set(int i) const {
    if (i < 1 || i > r_) throw std::out_of_range("delta_set: index out of range");
    return delta_[std::size_t(i)];
}

const std::vector<LinFrac>& Context::e_set(int i) const {
    if (i < 1 || i > r_) throw std::out_of_range("e_set: index out of range");
    return e_[std::size_t(i)];
}

std::optional<MPoly> Context::expand_over_Dn(const LinFrac& x, int n) const {
    if (x.num.is_zero()) return MPoly::zero(r_);
    MPoly p = x.num;
    // multiply by l^n for every representative not in the denominator, and
    // l^{n - mult} for the ones that are; reject multiplicities above n
    std::size_t matched = 0;
    for (const VecF& rep : reps_) {
        LinForm l{rep};
        int mult = 0;
        for (const auto& [dl, dm] : x.den)
            if (dl == l) {
                mult = dm;
                ++matched;
                break;
            }
        if (mult > n) return std::nullopt;
        p = mul_linform_pow(F_, p, l, n - mult);
    }
    if (matched != x.den.size()) return std::nullopt;  // a den form outside the reps
    return p;
}

std::optional<int> GradedPiece::col_of(Key k) const {
    auto it = std::lower_bound(support.begin(), support.end(), k,
                               [](Key a, Key b) { return grlex_greater(a, b); });
    if (it == support.end() || *it != k) return std::nullopt;
    return int(it - support.begin());
}

const GradedPiece& Context::piece(int n) const {
    auto found = pieces_.find(n);
    if (found != pieces_.end()) return *found->second;
    if (n < 0) throw std::invalid_argument("piece: n must be >= 0");
    long long h = hilbert_h(r_, q(), n);
    if (h > kMaxGradedDim) throw std::length_error("piece: graded dimension beyond cap");

    auto gp = std::make_unique<GradedPiece>();
    gp->n = n;

    // cached powers of the f_i up to n
    std::vector<std::vector<LinFrac>> fpow(std::size_t(r_) + 1);
    for (int i = 1; i <= r_; ++i) {
        fpow[std::size_t(i)].push_back(LinFrac::constant(r_, 1));
        for (int k = 1; k <= n; ++k)
            fpow[std::size_t(i)].push_back(f_mul(F_, fpow[std::size_t(i)].back(), f_[std::size_t(i)]));
    }

    int bits = r_ - 1;
    for (unsigned mask = 0; mask < (1u << bits); ++mask) {
        std::vector<int> members;  // the i in I, ascending
        for (int k = 0; k < bits; ++k)
            if (mask & (1u << k)) members.push_back(k + 2);
        int isz = int(members.size());
        if (isz > n) continue;
        // e-odometer over prod E_i, larger i fastest
        std::vector<std::size_t> pick(members.size(), 0);
        for (;;) {
            LinFrac e = LinFrac::constant(r_, 1);
            std::vector<std::uint64_t> ec;
            for (std::size_t t = 0; t < members.size(); ++t) {
                int i = members[t];
                e = f_mul(F_, e, e_[std::size_t(i)][pick[t]]);
                ec.push_back(pick[t]);  // code of u in V_{i-1} = its index
            }
            // exponent vectors (a; b_i >= 0) with a + sum b = n - |I|,
            // ascending lex with a first
            int rem = n - isz;
            std::vector<int> b(members.size(), 0);
            for (int a = 0; a <= rem; ++a) {
                // enumerate b summing to rem - a in ascending lex order
                std::vector<int> cur(members.size(), 0);
                auto emit = [&](const std::vector<int>& bb) {
                    LinFrac val = f_mul(F_, e, fpow[1][std::size_t(a)]);
                    for (std::size_t t = 0; t < members.size(); ++t)
                        val = f_mul(F_, val, fpow[std::size_t(members[t])][std::size_t(bb[t])]);
                    BasisLabel lab;
                    lab.mask = mask;
                    lab.e_codes = ec;
                    lab.a = a;
                    lab.b = bb;
                    gp->labels.push_back(std::move(lab));
                    gp->elems.push_back(std::move(val));
                };
                int target = rem - a;
                if (members.empty()) {
                    if (target == 0) emit(cur);
                } else {
                    // odometer over compositions: first |I|-1 entries free,
                    // last absorbs the remainder; lex ascending
                    std::function<void(std::size_t, int)> rec = [&](std::size_t t, int left) {
                        if (t + 1 == cur.size()) {
                            cur[t] = left;
                            emit(cur);
                            return;
                        }
                        for (int v = 0; v <= left; ++v) {
                            cur[t] = v;
                            rec(t + 1, left - v);
                        }
                    };
                    rec(0, target);
                }
            }
            // advance the e-odometer (larger i = later position fastest)
            std::size_t t = members.size();
            while (t > 0) {
                --t;
                if (++pick[t] < e_[std::size_t(members[t])].size()) break;
                pick[t] = 0;
                if (t == 0) {
                    t = SIZE_MAX;
                    break;
                }
            }
            if (members.empty() || t == SIZE_MAX) break;
        }
    }
    if ((long long)(gp->labels.size()) != h) throw std::logic_error("piece: element count != h_r(n)");

    // expansions over D_n and the support
    std::vector<MPoly> expans;
    expans.reserve(gp->elems.size());
    for (const LinFrac& x : gp->elems) {
        auto p = expand_over_Dn(x, n);
        if (!p) throw std::logic_error("piece: basis element denominator exceeds D_n");
        expans.push_back(std::move(*p));
    }
    std::vector<Key> keys;
    for (const MPoly& p : expans)
        for (const auto& [k, c] : p.terms) keys.push_back(k);
    std::sort(keys.begin(), keys.end(), [](Key a, Key b) { return grlex_greater(a, b); });
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    gp->support = std::move(keys);

    gp->rows = fqmat::Mat(int(expans.size()), int(gp->support.size()));
    for (std::size_t i = 0; i < expans.size(); ++i)
        for (const auto& [k, c] : expans[i].terms) gp->rows.at(int(i), *gp->col_of(k)) = c;
    gp->ech = fqmat::Ech(F_, gp->rows, fqmat::Mode::Auto);
    gp->rank = gp->ech.rank();
    if (gp->rank != h) throw std::logic_error("piece: rank certification failed");

    auto [it, fresh] = pieces_.emplace(n, std::move(gp));
    return *it->second;
}

std::optional<std::vector<Elt>> Context::coords_in_basis(const LinFrac& x, int n) const {
    const GradedPiece& gp = piece(n);
    if (x.num.is_zero()) return std::vector<Elt>(gp.elems.size(), 0);
    auto deg = ratfun::f_degree(x);
    if (!deg) throw std::invalid_argument("coords_in_basis: non-homogeneous input");
    if (*deg != -n) return std::nullopt;
    auto p = expand_over_Dn(x, n);
    if (!p) return std::nullopt;
    std::vector<Elt> w(gp.support.size(), 0);
    for (const auto& [k, c] : p->terms) {
        auto col = gp.col_of(k);
        if (!col) return std::nullopt;  // support outside the span
        w[std::size_t(*col)] = c;
    }
    return gp.ech.solve_row(w);
}

// ---------------------------------------------------------------------------
// Relations and freeness
// ---------------------------------------------------------------------------

bool RelationReport::all_zero() const {
    for (const auto& x : family1)
        if (!x.is_zero()) return false;
    for (const auto& x : family2)
        if (!x.is_zero()) return false;
    return true;
}

RelationReport relation_residues(const Context& C) {
    const Field& F = C.field();
    RelationReport rep;
    auto nz = linalg::nonzero_vectors(F, C.r());
    for (const VecF& v : nz)
        for (Elt alpha = 2; alpha < Elt(F.q()); ++alpha) {
            VecF av = linalg::vec_scale(F, alpha, v);
            LinFrac res = ratfun::f_sub(F, C.gen_recip(av),
                                        ratfun::f_scale(F, C.gen_recip(v), F.inv(alpha)));
            rep.family1.push_back(std::move(res));
        }
    for (std::size_t i = 0; i < nz.size(); ++i)
        for (std::size_t j = i; j < nz.size(); ++j) {
            VecF s = linalg::vec_add(F, nz[i], nz[j]);
            if (linalg::is_zero_vec(s)) continue;
            LinFrac lhs = f_mul(F, C.gen_recip(nz[i]), C.gen_recip(nz[j]));
            LinFrac rhs = f_mul(F, C.gen_recip(s),
                                f_add(F, C.gen_recip(nz[i]), C.gen_recip(nz[j])));
            rep.family2.push_back(ratfun::f_sub(F, lhs, rhs));
        }
    return rep;
}

std::vector<LinFrac> delta_products(const Context& C) {
    const Field& F = C.field();
    std::vector<LinFrac> out{LinFrac::constant(C.r(), 1)};
    for (int i = 1; i <= C.r(); ++i) {
        std::vector<LinFrac> next;
        next.reserve(out.size() * C.delta_set(i).size());
        for (const LinFrac& base : out)
            for (const LinFrac& d : C.delta_set(i)) next.push_back(f_mul(F, base, d));
        out = std::move(next);
    }
    return out;
}

std::vector<FreenessRow> freeness_check(const Context& C, int n_max) {
    const Field& F = C.field();
    std::vector<FreenessRow> rows;
    auto deltas = delta_products(C);
    for (int n = 0; n <= n_max; ++n) {
        // gather delta * (f-monomial of matching degree)
        std::vector<LinFrac> elems;
        for (const LinFrac& d : deltas) {
            auto deg = ratfun::f_degree(d);
            long long k = -*deg;
            long long need = n - k;
            if (need < 0) continue;
            // monomials f_1^{c_1}..f_r^{c_r} with sum c = need, lex ascending
            std::vector<int> c(std::size_t(C.r()), 0);
            std::function<void(int, long long, LinFrac)> rec = [&](int idx, long long left,
                                                                   LinFrac acc) {
                if (idx == C.r() - 1) {
                    LinFrac v = acc;
                    for (long long t = 0; t < left; ++t) v = f_mul(F, v, C.f_elem(C.r()));
                    elems.push_back(f_mul(F, d, v));
                    return;
                }
                LinFrac cur = acc;
                for (long long e = 0; e <= left; ++e) {
                    rec(idx + 1, left - e, cur);
                    if (e < left) cur = f_mul(F, cur, C.f_elem(idx + 1));
                }
            };
            rec(0, need, LinFrac::constant(C.r(), 1));
        }
        FreenessRow row;
        row.n = n;
        row.count = (long long)(elems.size());
        row.h = hilbert_h(C.r(), C.q(), n);
        // rank over D_n
        std::vector<MPoly> expans;
        for (const LinFrac& x : elems) {
            auto p = C.expand_over_Dn(x, n);
            if (!p) throw std::logic_error("freeness_check: denominator exceeds D_n");
            expans.push_back(std::move(*p));
        }
        std::vector<Key> keys;
        for (const MPoly& p : expans)
            for (const auto& [k, cc] : p.terms) keys.push_back(k);
        std::sort(keys.begin(), keys.end(), [](Key a, Key b) { return grlex_greater(a, b); });
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        fqmat::Mat M(int(expans.size()), int(keys.size()));
        for (std::size_t i = 0; i < expans.size(); ++i)
            for (const auto& [k, cc] : expans[i].terms) {
                auto it = std::lower_bound(keys.begin(), keys.end(), k,
                                           [](Key a, Key b) { return grlex_greater(a, b); });
                M.at(int(i), int(it - keys.begin())) = cc;
            }
        row.rank = fqmat::rank(F, M, fqmat::Mode::Auto);
        row.ok = (row.count == row.h) && (row.rank == row.h);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace qv::rvring
