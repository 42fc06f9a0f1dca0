#include "qv/linalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace qv::linalg {

std::uint64_t vec_code(const Field& F, const VecF& v) {
    std::uint64_t code = 0, m = 1;
    for (Elt x : v) {
        code += x * m;
        m *= std::uint64_t(F.q());
    }
    return code;
}

VecF vec_of_code(const Field& F, int r, std::uint64_t code) {
    VecF v(r);
    for (int i = 0; i < r; ++i) {
        v[i] = Elt(code % F.q());
        code /= F.q();
    }
    return v;
}

bool is_zero_vec(const VecF& v) {
    for (Elt x : v)
        if (x != 0) return false;
    return true;
}

VecF vec_add(const Field& F, const VecF& a, const VecF& b) {
    VecF c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = F.add(a[i], b[i]);
    return c;
}

VecF vec_sub(const Field& F, const VecF& a, const VecF& b) {
    VecF c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = F.sub(a[i], b[i]);
    return c;
}

VecF vec_scale(const Field& F, Elt c, const VecF& v) {
    VecF w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = F.mul(c, v[i]);
    return w;
}

Elt dot(const Field& F, const VecF& a, const VecF& b) {
    Elt s = 0;
    for (size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
    return s;
}

std::vector<VecF> all_vectors(const Field& F, int r) {
    std::uint64_t n = 1;
    for (int i = 0; i < r; ++i) n *= F.q();
    std::vector<VecF> out;
    out.reserve(n);
    for (std::uint64_t c = 0; c < n; ++c) out.push_back(vec_of_code(F, r, c));
    return out;
}

std::vector<VecF> nonzero_vectors(const Field& F, int r) {
    auto v = all_vectors(F, r);
    v.erase(v.begin());
    return v;
}

std::vector<VecF> projective_reps(const Field& F, int r) {
    std::vector<VecF> out;
    for (const VecF& v : nonzero_vectors(F, r)) {
        Elt lead = 0;
        for (Elt x : v)
            if (x != 0) {
                lead = x;
                break;
            }
        if (lead == 1) out.push_back(v);
    }
    return out;
}

std::pair<VecF, Elt> normalize_projective(const Field& F, const VecF& v) {
    Elt lead = 0;
    for (Elt x : v)
        if (x != 0) {
            lead = x;
            break;
        }
    if (lead == 0) throw std::invalid_argument("normalize_projective: zero vector");
    return {vec_scale(F, F.inv(lead), v), lead};
}

long long gauss_binom(int r, int s, long q) {
    if (s < 0 || s > r) return 0;
    // prod_{i=0}^{s-1} (q^(r-i)-1)/(q^(i+1)-1), computed exactly
    long long num = 1, den = 1;
    for (int i = 0; i < s; ++i) {
        num *= gfq::ipow(q, r - i) - 1;
        den *= gfq::ipow(q, i + 1) - 1;
        long long g = [](long long a, long long b) {
            while (b) {
                long long t = a % b;
                a = b;
                b = t;
            }
            return a;
        }(num, den);
        num /= g;
        den /= g;
    }
    if (den != 1) throw std::runtime_error("gauss_binom: non-integer (impossible)");
    return num;
}

Subspace Subspace::full(const Field& F, int r) {
    (void)F;
    Subspace s;
    s.r = r;
    s.dim = r;
    s.rows.assign(std::size_t(r) * r, 0);
    for (int i = 0; i < r; ++i) s.rows[std::size_t(i) * r + i] = 1;
    return s;
}

Subspace Subspace::from_span(const Field& F, int r, const std::vector<VecF>& gens) {
    Mat M(int(gens.size()), r);
    for (int i = 0; i < int(gens.size()); ++i)
        for (int j = 0; j < r; ++j) M.at(i, j) = gens[i][j];
    auto piv = fqmat::rref(F, M, fqmat::Mode::Serial);
    Subspace s;
    s.r = r;
    s.dim = int(piv.size());
    s.rows.assign(M.a.begin(), M.a.begin() + std::size_t(s.dim) * r);
    return s;
}

bool Subspace::contains(const Field& F, const VecF& v) const {
    // reduce v against the RREF rows
    VecF w = v;
    for (int i = 0; i < dim; ++i) {
        int pc = -1;
        for (int j = 0; j < r; ++j)
            if (rows[std::size_t(i) * r + j] != 0) {
                pc = j;
                break;
            }
        Elt f = w[pc];
        if (f == 0) continue;
        for (int j = pc; j < r; ++j) w[j] = F.sub(w[j], F.mul(f, rows[std::size_t(i) * r + j]));
    }
    return is_zero_vec(w);
}

bool Subspace::contains_sub(const Field& F, const Subspace& s) const {
    for (int i = 0; i < s.dim; ++i)
        if (!contains(F, s.basis_row(i))) return false;
    return true;
}

std::optional<VecF> Subspace::coords_of(const Field& F, const VecF& v) const {
    VecF w = v, c(dim, 0);
    for (int i = 0; i < dim; ++i) {
        int pc = -1;
        for (int j = 0; j < r; ++j)
            if (rows[std::size_t(i) * r + j] != 0) {
                pc = j;
                break;
            }
        Elt f = w[pc];
        c[i] = f;
        if (f == 0) continue;
        for (int j = pc; j < r; ++j) w[j] = F.sub(w[j], F.mul(f, rows[std::size_t(i) * r + j]));
    }
    if (!is_zero_vec(w)) return std::nullopt;
    return c;
}

std::vector<VecF> Subspace::points(const Field& F) const {
    std::vector<VecF> out;
    std::uint64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= F.q();
    out.reserve(n);
    for (std::uint64_t code = 0; code < n; ++code) {
        VecF coef = vec_of_code(F, dim, code);
        VecF v(r, 0);
        for (int i = 0; i < dim; ++i)
            if (coef[i] != 0) v = vec_add(F, v, vec_scale(F, coef[i], basis_row(i)));
        out.push_back(v);
    }
    return out;
}

std::vector<VecF> Subspace::nonzero_points(const Field& F) const {
    auto p = points(F);
    p.erase(p.begin());
    return p;
}

Subspace sum(const Field& F, const Subspace& a, const Subspace& b) {
    std::vector<VecF> gens;
    for (int i = 0; i < a.dim; ++i) gens.push_back(a.basis_row(i));
    for (int i = 0; i < b.dim; ++i) gens.push_back(b.basis_row(i));
    return Subspace::from_span(F, a.r, gens);
}

Subspace intersect(const Field& F, const Subspace& a, const Subspace& b) {
    // kernel method: rows of a stacked against rows of b; intersection =
    // {x*A : x*A = y*B}.  Solve [A^T | -B^T] kernel.
    Mat M(a.r, a.dim + b.dim);
    for (int j = 0; j < a.dim; ++j)
        for (int i = 0; i < a.r; ++i) M.at(i, j) = a.rows[std::size_t(j) * a.r + i];
    for (int j = 0; j < b.dim; ++j)
        for (int i = 0; i < a.r; ++i) M.at(i, a.dim + j) = F.neg(b.rows[std::size_t(j) * b.r + i]);
    Mat K = fqmat::right_kernel(F, M);
    std::vector<VecF> gens;
    for (int t = 0; t < K.rows; ++t) {
        VecF v(a.r, 0);
        for (int j = 0; j < a.dim; ++j)
            if (K.at(t, j) != 0) v = vec_add(F, v, vec_scale(F, K.at(t, j), a.basis_row(j)));
        gens.push_back(v);
    }
    return Subspace::from_span(F, a.r, gens);
}

std::vector<Subspace> subspaces_of_dim(const Field& F, int r, int d) {
    std::vector<Subspace> out;
    if (d == 0) {
        out.push_back(Subspace::zero(r));
        return out;
    }
    if (d > r) return out;
    // enumerate RREF matrices directly: pivot column sets in lex order,
    // free entries (at non-pivot columns right of each pivot) in odometer order
    std::vector<int> piv(d);
    for (int i = 0; i < d; ++i) piv[i] = i;
    auto next_comb = [&]() {
        int i = d - 1;
        while (i >= 0 && piv[i] == r - d + i) --i;
        if (i < 0) return false;
        ++piv[i];
        for (int j = i + 1; j < d; ++j) piv[j] = piv[j - 1] + 1;
        return true;
    };
    do {
        // free positions: (row i, col c) with c > piv[i], c not a pivot col
        std::vector<std::pair<int, int>> free_pos;
        std::vector<bool> is_piv(r, false);
        for (int c : piv) is_piv[c] = true;
        for (int i = 0; i < d; ++i)
            for (int c = piv[i] + 1; c < r; ++c)
                if (!is_piv[c]) free_pos.emplace_back(i, c);
        std::uint64_t n = 1;
        for (size_t k = 0; k < free_pos.size(); ++k) n *= F.q();
        for (std::uint64_t code = 0; code < n; ++code) {
            Subspace s;
            s.r = r;
            s.dim = d;
            s.rows.assign(std::size_t(d) * r, 0);
            for (int i = 0; i < d; ++i) s.rows[std::size_t(i) * r + piv[i]] = 1;
            std::uint64_t t = code;
            for (auto [i, c] : free_pos) {
                s.rows[std::size_t(i) * r + c] = Elt(t % F.q());
                t /= F.q();
            }
            out.push_back(std::move(s));
        }
    } while (next_comb());
    return out;
}

std::vector<Subspace> all_nonzero_subspaces(const Field& F, int r) {
    std::vector<Subspace> out;
    for (int d = 1; d <= r; ++d) {
        auto v = subspaces_of_dim(F, r, d);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

Subspace standard_subspace(const Field& F, int r, int i) {
    (void)F;
    Subspace s;
    s.r = r;
    s.dim = i;
    s.rows.assign(std::size_t(i) * r, 0);
    for (int k = 0; k < i; ++k) s.rows[std::size_t(k) * r + k] = 1;
    return s;
}

std::vector<int> Flag::dims() const {
    std::vector<int> d;
    for (const auto& m : members) d.push_back(m.dim);
    return d;
}

namespace {
void extend_flags(const Field& F, const std::vector<Subspace>& all, std::vector<Subspace>& chain,
                  std::vector<Flag>& out, int r) {
    const Subspace last = chain.back();  // copy: push_back below may reallocate
    if (last.dim == r) {
        out.push_back(Flag{chain});
        return;
    }
    for (const Subspace& s : all) {
        if (s.dim <= last.dim) continue;
        if (!s.contains_sub(F, last)) continue;
        chain.push_back(s);
        extend_flags(F, all, chain, out, r);
        chain.pop_back();
    }
}
}  // namespace

std::vector<Flag> all_flags(const Field& F, int r) {
    auto all = all_nonzero_subspaces(F, r);
    std::vector<Flag> out;
    for (const Subspace& s : all) {
        std::vector<Subspace> chain{s};
        extend_flags(F, all, chain, out, r);
    }
    return out;
}

std::vector<Flag> complete_flags(const Field& F, int r) {
    std::vector<Flag> out;
    for (const Flag& f : all_flags(F, r))
        if (int(f.members.size()) == r) out.push_back(f);
    return out;
}

QuotientMap quotient_map(const Field& F, const Subspace& Vp, const Subspace& W) {
    if (!Vp.contains_sub(F, W)) throw std::invalid_argument("quotient_map: W not in V'");
    QuotientMap qm;
    qm.r = Vp.r;
    qm.d = Vp.dim - W.dim;
    qm.Vp = Vp;
    qm.W = W;
    // complement basis: V' basis rows reduced modulo W and previously chosen rows
    std::vector<VecF> chosen;
    for (int i = 0; i < Vp.dim && int(chosen.size()) < qm.d; ++i) {
        std::vector<VecF> gens;
        for (int k = 0; k < W.dim; ++k) gens.push_back(W.basis_row(k));
        for (const auto& c : chosen) gens.push_back(c);
        Subspace sofar = Subspace::from_span(F, Vp.r, gens);
        VecF row = Vp.basis_row(i);
        if (!sofar.contains(F, row)) chosen.push_back(row);
    }
    qm.comp = Mat(qm.d, Vp.r);
    for (int i = 0; i < qm.d; ++i)
        for (int j = 0; j < Vp.r; ++j) qm.comp.at(i, j) = chosen[i][j];
    Mat stacked(qm.d + W.dim, Vp.r);
    for (int i = 0; i < qm.d; ++i)
        for (int j = 0; j < Vp.r; ++j) stacked.at(i, j) = qm.comp.at(i, j);
    for (int i = 0; i < W.dim; ++i)
        for (int j = 0; j < Vp.r; ++j) stacked.at(qm.d + i, j) = W.rows[std::size_t(i) * W.r + j];
    qm.ech = fqmat::Ech(F, stacked, fqmat::Mode::Serial);
    return qm;
}

VecF QuotientMap::project(const Field& F, const VecF& v) const {
    (void)F;
    auto sol = ech.solve_row(v);
    if (!sol) throw std::invalid_argument("QuotientMap::project: v not in V'");
    return VecF(sol->begin(), sol->begin() + d);
}

VecF QuotientMap::lift(const Field& F, const VecF& y) const {
    VecF v(r, 0);
    for (int i = 0; i < d; ++i)
        if (y[i] != 0)
            for (int j = 0; j < r; ++j) v[j] = F.add(v[j], F.mul(y[i], comp.at(i, j)));
    return v;
}

// ---- groups ----

namespace {
bool mat_less(const Mat& a, const Mat& b) { return a.a < b.a; }
}  // namespace

int Group::index_of(const Mat& m) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), m, mat_less);
    if (it != elems.end() && it->a == m.a) return int(it - elems.begin());
    return -1;
}

Group make_group(std::vector<Mat> elems) {
    std::sort(elems.begin(), elems.end(), mat_less);
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty()) throw std::invalid_argument("make_group: empty");
    return Group{std::move(elems)};
}

Group gl_group(const Field& F, int r) {
    std::vector<Mat> out;
    std::uint64_t n = 1;
    for (int i = 0; i < r * r; ++i) n *= F.q();
    for (std::uint64_t code = 0; code < n; ++code) {
        Mat M(r, r);
        std::uint64_t t = code;
        for (auto& x : M.a) {
            x = Elt(t % F.q());
            t /= F.q();
        }
        if (fqmat::det(F, M) != 0) out.push_back(std::move(M));
    }
    return make_group(std::move(out));
}

Group u_group(const Field& F, int r) {
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) pos.emplace_back(i, j);
    std::vector<Mat> out;
    std::uint64_t n = 1;
    for (size_t k = 0; k < pos.size(); ++k) n *= F.q();
    for (std::uint64_t code = 0; code < n; ++code) {
        Mat M = fqmat::identity(r);
        std::uint64_t t = code;
        for (auto [i, j] : pos) {
            M.at(i, j) = Elt(t % F.q());
            t /= F.q();
        }
        out.push_back(std::move(M));
    }
    return make_group(std::move(out));
}

Group w_group(const Field& F, int r) {
    std::vector<Mat> out;
    std::uint64_t n = 1;
    for (int i = 0; i < r - 1; ++i) n *= F.q();
    for (std::uint64_t code = 0; code < n; ++code) {
        Mat M = fqmat::identity(r);
        std::uint64_t t = code;
        for (int i = 0; i < r - 1; ++i) {
            M.at(i, r - 1) = Elt(t % F.q());
            t /= F.q();
        }
        out.push_back(std::move(M));
    }
    return make_group(std::move(out));
}

Group p_group(const Field& F, int r, int s) {
    std::vector<Mat> out;
    for (const Mat& M : gl_group(F, r).elems) {
        bool ok = true;
        for (int i = s; i < r && ok; ++i)
            for (int j = 0; j < s && ok; ++j)
                if (M.at(i, j) != 0) ok = false;
        if (ok) out.push_back(M);
    }
    return make_group(std::move(out));
}

Group l_group(const Field& F, int r, int s) {
    std::vector<Mat> out;
    for (const Mat& M : p_group(F, r, s).elems) {
        bool ok = true;
        for (int i = 0; i < s && ok; ++i)
            for (int j = 0; j < s && ok; ++j)
                if (M.at(i, j) != Elt(i == j ? 1 : 0)) ok = false;
        if (ok) out.push_back(M);
    }
    return make_group(std::move(out));
}

Group closure(const Field& F, const std::vector<Mat>& gens, long long cap) {
    if (gens.empty()) throw std::invalid_argument("closure: no generators");
    int r = gens[0].rows;
    std::set<std::vector<Elt>> seen;
    std::vector<Mat> elems, frontier;
    Mat I = fqmat::identity(r);
    seen.insert(I.a);
    elems.push_back(I);
    frontier.push_back(I);
    while (!frontier.empty()) {
        std::vector<Mat> next;
        for (const Mat& x : frontier)
            for (const Mat& g : gens) {
                Mat y = fqmat::mat_mul(F, x, g);
                if (seen.insert(y.a).second) {
                    elems.push_back(y);
                    next.push_back(y);
                    if ((long long)(elems.size()) > cap)
                        throw std::runtime_error("closure: exceeded cap");
                }
            }
        frontier = std::move(next);
    }
    return make_group(std::move(elems));
}

long long gl_order(int r, long q) {
    long long n = 1;
    for (int i = 0; i < r; ++i) n *= gfq::ipow(q, r) - gfq::ipow(q, i);
    return n;
}

Mat transvection(const Field& F, int r, int i, int j, Elt alpha) {
    (void)F;
    Mat M = fqmat::identity(r);
    M.at(i, j) = alpha;
    return M;
}

std::vector<Mat> u_generators(const Field& F, int r) {
    // superdiagonal transvections with all scalars generate U_r
    std::vector<Mat> g;
    for (int i = 0; i + 1 < r; ++i)
        for (long a = 1; a < F.q(); ++a) g.push_back(transvection(F, r, i, i + 1, Elt(a)));
    if (g.empty()) g.push_back(fqmat::identity(r));
    return g;
}

std::vector<Mat> sl_generators(const Field& F, int r) {
    std::vector<Mat> g;
    if (r == 1) {
        g.push_back(fqmat::identity(1));
        return g;
    }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            if (i != j) g.push_back(transvection(F, r, i, j, 1));
    return g;
}

std::vector<Mat> gl_generators(const Field& F, int r) {
    auto g = sl_generators(F, r);
    if (F.q() > 2) {
        Mat D = fqmat::identity(r);
        D.at(0, 0) = F.primitive_element();
        g.push_back(D);
    }
    return g;
}

long elem_order(const Field& F, const Mat& m) {
    Mat I = fqmat::identity(m.rows), x = m;
    long n = 1;
    while (!(x == I)) {
        x = fqmat::mat_mul(F, x, m);
        ++n;
    }
    return n;
}

long long double_coset_count(const Field& F, const Group& H, const Group& G, const Group& K) {
    std::vector<bool> visited(G.elems.size(), false);
    long long count = 0;
    for (size_t start = 0; start < G.elems.size(); ++start) {
        if (visited[start]) continue;
        ++count;
        std::vector<int> stack{int(start)};
        visited[start] = true;
        while (!stack.empty()) {
            int gi = stack.back();
            stack.pop_back();
            const Mat& g = G.elems[gi];
            for (const Mat& h : H.elems) {
                int t = G.index_of(fqmat::mat_mul(F, h, g));
                if (t < 0) throw std::invalid_argument("double_coset_count: H not in G");
                if (!visited[t]) {
                    visited[t] = true;
                    stack.push_back(t);
                }
            }
            for (const Mat& k : K.elems) {
                int t = G.index_of(fqmat::mat_mul(F, g, k));
                if (t < 0) throw std::invalid_argument("double_coset_count: K not in G");
                if (!visited[t]) {
                    visited[t] = true;
                    stack.push_back(t);
                }
            }
        }
    }
    return count;
}

std::vector<Group> p_subgroups(const Field& F, const Group& G, long p) {
    // p-power-order elements only, grown by closure BFS over the subgroup lattice
    long long max_p = 1;
    while ((long long)(G.order()) % (max_p * p) == 0) max_p *= p;
    std::vector<int> p_elems;
    for (int i = 0; i < G.order(); ++i) {
        long o = elem_order(F, G.elems[i]);
        bool ppow = true;
        while (o > 1) {
            if (o % p != 0) {
                ppow = false;
                break;
            }
            o /= p;
        }
        if (ppow) p_elems.push_back(i);
    }
    std::set<std::vector<int>> seen;
    std::vector<Group> out;
    int r = G.elems[0].rows;
    Group trivial = make_group({fqmat::identity(r)});
    auto signature = [&](const Group& S) {
        std::vector<int> sig;
        for (const Mat& m : S.elems) sig.push_back(G.index_of(m));
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    std::vector<Group> queue{trivial};
    seen.insert(signature(trivial));
    out.push_back(trivial);
    while (!queue.empty()) {
        Group S = std::move(queue.back());
        queue.pop_back();
        if (S.order() >= max_p) continue;
        for (int gi : p_elems) {
            const Mat& g = G.elems[gi];
            if (S.contains(g)) continue;
            std::vector<Mat> gens = S.elems;
            gens.push_back(g);
            Group T;
            try {
                T = closure(F, gens, max_p);
            } catch (const std::runtime_error&) {
                continue;  // grew past the Sylow order: not a p-group
            }
            long long o = T.order();
            bool ppow = true;
            while (o > 1) {
                if (o % p != 0) {
                    ppow = false;
                    break;
                }
                o /= p;
            }
            if (!ppow || T.order() > max_p) continue;
            auto sig = signature(T);
            if (seen.insert(sig).second) {
                out.push_back(T);
                queue.push_back(T);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Group& a, const Group& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        std::vector<std::vector<Elt>> ka, kb;
        for (const auto& m : a.elems) ka.push_back(m.a);
        for (const auto& m : b.elems) kb.push_back(m.a);
        return ka < kb;
    });
    return out;
}

std::vector<Mat> generating_set(const Field& F, const Group& H) {
    std::vector<Mat> gens;
    Group sofar = make_group({fqmat::identity(H.elems[0].rows)});
    for (const Mat& g : H.elems) {
        if (sofar.contains(g)) continue;
        gens.push_back(g);
        auto gl = gens;
        sofar = closure(F, gl, H.order());
        if (sofar.order() == H.order()) break;
    }
    if (gens.empty()) gens.push_back(fqmat::identity(H.elems[0].rows));
    return gens;
}

VecF apply(const Field& F, const Mat& M, const VecF& v) { return fqmat::mat_vec(F, M, v); }

}  // namespace qv::linalg
