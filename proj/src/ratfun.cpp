#include "qv/ratfun.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qv::ratfun {

Key key_add(Key a, Key b) {
    Key r = 0;
    int tot = 0;
    for (int i = 0; i < kMaxVars; ++i) {
        int e = key_get(a, i) + key_get(b, i);
        if (e > 0xFF) throw std::overflow_error("ratfun: exponent overflow");
        tot += e;
        r |= Key(e) << (8 * i);
    }
    if (tot > 0xFF) throw std::overflow_error("ratfun: total degree overflow");
    return r;
}

bool grlex_greater(Key a, Key b) {
    int da = key_totdeg(a), db = key_totdeg(b);
    if (da != db) return da > db;
    // lexicographic with X_1 most significant: first differing variable,
    // larger exponent wins
    for (int i = 0; i < kMaxVars; ++i) {
        int ea = key_get(a, i), eb = key_get(b, i);
        if (ea != eb) return ea > eb;
    }
    return false;
}

MPoly MPoly::zero(int nvars) {
    MPoly p;
    p.nvars = nvars;
    return p;
}

MPoly MPoly::constant(int nvars, Elt c) {
    MPoly p;
    p.nvars = nvars;
    if (c != 0) p.terms.emplace_back(Key(0), c);
    return p;
}

MPoly MPoly::monomial(int nvars, Key k, Elt c) {
    MPoly p;
    p.nvars = nvars;
    if (c != 0) p.terms.emplace_back(k, c);
    return p;
}

MPoly MPoly::variable(int nvars, int var) {
    if (var < 0 || var >= nvars) throw std::invalid_argument("MPoly::variable: bad index");
    return monomial(nvars, key_set(0, var, 1), 1);
}

Elt MPoly::coeff(Key k) const {
    for (const auto& [kk, c] : terms)
        if (kk == k) return c;
    return 0;
}

int MPoly::total_degree() const {
    if (terms.empty()) return -1;
    // grlex-descending: the first term has maximal total degree
    return key_totdeg(terms.front().first);
}

std::optional<int> MPoly::homogeneous_degree() const {
    if (terms.empty()) return 0;
    int d = key_totdeg(terms.front().first);
    for (const auto& [k, c] : terms)
        if (key_totdeg(k) != d) return std::nullopt;
    return d;
}

namespace {
void check_compat(const MPoly& a, const MPoly& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("MPoly: variable count mismatch");
}
}  // namespace

MPoly p_add(const Field& F, const MPoly& a, const MPoly& b) {
    check_compat(a, b);
    MPoly r;
    r.nvars = a.nvars;
    r.terms.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() && j < b.terms.size()) {
        Key ka = a.terms[i].first, kb = b.terms[j].first;
        if (ka == kb) {
            Elt c = F.add(a.terms[i].second, b.terms[j].second);
            if (c != 0) r.terms.emplace_back(ka, c);
            ++i, ++j;
        } else if (grlex_greater(ka, kb)) {
            r.terms.push_back(a.terms[i++]);
        } else {
            r.terms.push_back(b.terms[j++]);
        }
    }
    for (; i < a.terms.size(); ++i) r.terms.push_back(a.terms[i]);
    for (; j < b.terms.size(); ++j) r.terms.push_back(b.terms[j]);
    return r;
}

MPoly p_neg(const Field& F, const MPoly& a) {
    MPoly r = a;
    for (auto& [k, c] : r.terms) c = F.neg(c);
    return r;
}

MPoly p_sub(const Field& F, const MPoly& a, const MPoly& b) { return p_add(F, a, p_neg(F, b)); }

MPoly p_scale(const Field& F, const MPoly& a, Elt c) {
    if (c == 0) return MPoly::zero(a.nvars);
    MPoly r = a;
    for (auto& [k, cc] : r.terms) cc = F.mul(cc, c);
    return r;
}

namespace {
// a * (single term (k,c)): shifting every exponent by the same vector
// preserves grlex order (uniform offset per byte, overflow checked)
MPoly shift_scale(const Field& F, const MPoly& a, Key k, Elt c) {
    MPoly r;
    r.nvars = a.nvars;
    r.terms.reserve(a.terms.size());
    for (const auto& [ka, ca] : a.terms) {
        Elt cc = F.mul(ca, c);
        if (cc != 0) r.terms.emplace_back(key_add(ka, k), cc);
    }
    return r;
}
}  // namespace

MPoly p_mul(const Field& F, const MPoly& a, const MPoly& b) {
    check_compat(a, b);
    if (a.is_zero() || b.is_zero()) return MPoly::zero(a.nvars);
    const MPoly& big = a.terms.size() >= b.terms.size() ? a : b;
    const MPoly& small = a.terms.size() >= b.terms.size() ? b : a;
    if (small.terms.size() <= 16) {
        // merge-accumulate the shifted copies; keeps everything sorted
        MPoly acc = MPoly::zero(a.nvars);
        for (const auto& [k, c] : small.terms) acc = p_add(F, acc, shift_scale(F, big, k, c));
        return acc;
    }
    std::unordered_map<Key, Elt> m;
    m.reserve(a.terms.size() * 2);
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            Key k = key_add(ka, kb);
            auto [it, fresh] = m.try_emplace(k, 0);
            it->second = F.add(it->second, F.mul(ca, cb));
        }
    MPoly r;
    r.nvars = a.nvars;
    r.terms.reserve(m.size());
    for (const auto& [k, c] : m)
        if (c != 0) r.terms.emplace_back(k, c);
    std::sort(r.terms.begin(), r.terms.end(),
              [](const auto& x, const auto& y) { return grlex_greater(x.first, y.first); });
    return r;
}

MPoly p_pow(const Field& F, const MPoly& a, std::uint64_t k) {
    MPoly r = MPoly::constant(a.nvars, 1);
    MPoly base = a;
    while (k) {
        if (k & 1) r = p_mul(F, r, base);
        k >>= 1;
        if (k) base = p_mul(F, base, base);
    }
    return r;
}

MPoly mul_linform_pow(const Field& F, const MPoly& p, const LinForm& l, int k) {
    MPoly r = p;
    MPoly lp = l.poly();
    for (int i = 0; i < k; ++i) r = p_mul(F, r, lp);
    return r;
}

namespace {
MPoly subst_rec(const Field& F, const MPoly& p, const std::vector<MPoly>& images, int var) {
    int nv = images.empty() ? p.nvars : images[0].nvars;
    if (p.is_zero()) return MPoly::zero(nv);
    if (var == p.nvars) {
        // invariant: p involves no variable >= var, i.e. p is constant
        return MPoly::constant(nv, p.terms[0].second);
    }
    // bucket by the exponent of X_{var+1}; stripping a uniform byte keeps
    // each bucket grlex-sorted
    std::map<int, MPoly> buckets;
    for (const auto& [k, c] : p.terms) {
        int e = key_get(k, var);
        auto& bp = buckets[e];
        if (bp.nvars == 0) bp.nvars = p.nvars;
        bp.terms.emplace_back(key_set(k, var, 0), c);
    }
    // Horner from the highest power down
    MPoly res = MPoly::zero(nv);
    int prev = -1;
    for (auto it = buckets.rbegin(); it != buckets.rend(); ++it) {
        int e = it->first;
        if (prev >= 0)
            for (int t = 0; t < prev - e; ++t) res = p_mul(F, res, images[var]);
        res = p_add(F, res, subst_rec(F, it->second, images, var + 1));
        prev = e;
    }
    for (int t = 0; t < prev; ++t) res = p_mul(F, res, images[var]);
    return res;
}
}  // namespace

MPoly p_subst(const Field& F, const MPoly& a, const std::vector<MPoly>& images) {
    if (int(images.size()) != a.nvars) throw std::invalid_argument("p_subst: image count mismatch");
    for (const auto& im : images)
        if (im.nvars != images[0].nvars) throw std::invalid_argument("p_subst: image nvars mismatch");
    return subst_rec(F, a, images, 0);
}

MPoly p_act(const Field& F, const fqmat::Mat& g, const MPoly& a) {
    if (g.rows != a.nvars || g.cols != a.nvars) throw std::invalid_argument("p_act: shape mismatch");
    std::vector<MPoly> images;
    images.reserve(a.nvars);
    for (int j = 0; j < a.nvars; ++j) {
        MPoly im = MPoly::zero(a.nvars);
        for (int i = 0; i < a.nvars; ++i)
            if (g.at(i, j) != 0) im = p_add(F, im, MPoly::monomial(a.nvars, key_set(0, i, 1), g.at(i, j)));
        images.push_back(std::move(im));
    }
    return p_subst(F, a, images);
}

Elt p_eval(const Field& F, const MPoly& a, const std::vector<Elt>& point) {
    if (int(point.size()) != a.nvars) throw std::invalid_argument("p_eval: point size mismatch");
    Elt s = 0;
    for (const auto& [k, c] : a.terms) {
        Elt t = c;
        for (int i = 0; i < a.nvars; ++i) {
            int e = key_get(k, i);
            if (e) t = F.mul(t, F.pow(point[i], e));
        }
        s = F.add(s, t);
    }
    return s;
}

std::string p_to_string(const Field& F, const MPoly& a, const std::vector<std::string>& names) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : a.terms) {
        if (!first) os << " + ";
        first = false;
        bool has_var = key_totdeg(k) > 0;
        if (!has_var || c != 1) os << F.to_string(c);
        bool need_star = (!has_var || c != 1);
        for (int i = 0; i < a.nvars; ++i) {
            int e = key_get(k, i);
            if (!e) continue;
            if (need_star) os << "*";
            os << names[std::size_t(i)];
            if (e > 1) os << "^" << e;
            need_star = true;
        }
    }
    return os.str();
}

std::string p_to_string(const Field& F, const MPoly& a) {
    std::vector<std::string> names;
    for (int i = 0; i < a.nvars; ++i) names.push_back("X" + std::to_string(i + 1));
    return p_to_string(F, a, names);
}

// ---------------------------------------------------------------------------
// LinForm
// ---------------------------------------------------------------------------

std::pair<LinForm, Elt> LinForm::normalize(const Field& F, const VecF& w) {
    auto [rep, alpha] = linalg::normalize_projective(F, w);
    return {LinForm{rep}, alpha};
}

MPoly LinForm::poly() const {
    MPoly p;
    p.nvars = int(v.size());
    for (int i = 0; i < p.nvars; ++i)
        if (v[std::size_t(i)] != 0) p.terms.emplace_back(key_set(0, i, 1), v[std::size_t(i)]);
    // degree-1 keys with distinct variables: grlex order = ascending variable
    // index already (X_1 term first), which is how we pushed them
    return p;
}

std::optional<MPoly> p_div_linform(const Field& F, const MPoly& p, const LinForm& l) {
    if (p.is_zero()) return MPoly::zero(p.nvars);
    if (int(l.v.size()) != p.nvars) throw std::invalid_argument("p_div_linform: nvars mismatch");
    int j = -1;
    for (int i = 0; i < p.nvars; ++i)
        if (l.v[std::size_t(i)] != 0) {
            j = i;
            break;
        }
    // l = X_{j+1} + l' with l' in the later variables (leading coeff 1)
    MPoly lp = MPoly::zero(p.nvars);  // l'
    for (int i = j + 1; i < p.nvars; ++i)
        if (l.v[std::size_t(i)] != 0) lp.terms.emplace_back(key_set(0, i, 1), l.v[std::size_t(i)]);
    // collect p by the exponent of X_{j+1}
    std::map<int, MPoly> bucket;
    for (const auto& [k, c] : p.terms) {
        int e = key_get(k, j);
        auto& b = bucket[e];
        if (b.nvars == 0) b.nvars = p.nvars;
        b.terms.emplace_back(key_set(k, j, 0), c);
    }
    int d = bucket.rbegin()->first;
    if (d == 0) return std::nullopt;  // p does not involve the lead variable
    auto piece = [&](int e) -> MPoly {
        auto it = bucket.find(e);
        return it == bucket.end() ? MPoly::zero(p.nvars) : it->second;
    };
    // synthetic division of sum p_e X^e by (X + l'):
    //   q_{d-1} = p_d;  q_{e-1} = p_e - q_e * l';  remainder p_0 - q_0 * l'
    std::vector<MPoly> q(static_cast<std::size_t>(d));
    q[std::size_t(d - 1)] = piece(d);
    for (int e = d - 1; e >= 1; --e) q[std::size_t(e - 1)] = p_sub(F, piece(e), p_mul(F, q[std::size_t(e)], lp));
    MPoly rem = p_sub(F, piece(0), p_mul(F, q[0], lp));
    if (!rem.is_zero()) return std::nullopt;
    MPoly out = MPoly::zero(p.nvars);
    for (int e = 0; e < d; ++e) {
        MPoly t = q[std::size_t(e)];
        for (auto& [k, c] : t.terms) k = key_set(k, j, e);
        std::sort(t.terms.begin(), t.terms.end(),
                  [](const auto& x, const auto& y) { return grlex_greater(x.first, y.first); });
        out = p_add(F, out, t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// LinFrac
// ---------------------------------------------------------------------------

LinFrac LinFrac::zero(int nvars) {
    LinFrac f;
    f.nvars = nvars;
    f.num = MPoly::zero(nvars);
    return f;
}

LinFrac LinFrac::from_poly(MPoly p) {
    LinFrac f;
    f.nvars = p.nvars;
    f.num = std::move(p);
    return f;
}

LinFrac LinFrac::constant(int nvars, Elt c) { return from_poly(MPoly::constant(nvars, c)); }

LinFrac LinFrac::one_over(const Field& F, const VecF& w) {
    if (linalg::is_zero_vec(w)) throw std::invalid_argument("one_over: zero vector");
    auto [rep, alpha] = LinForm::normalize(F, w);
    LinFrac f;
    f.nvars = int(w.size());
    f.num = MPoly::constant(f.nvars, F.inv(alpha));
    f.den.emplace_back(rep, 1);
    return f;
}

MPoly den_poly(const Field& F, const LinFrac& a) {
    MPoly d = MPoly::constant(a.nvars, 1);
    for (const auto& [l, m] : a.den) d = mul_linform_pow(F, d, l, m);
    return d;
}

void reduce_inplace(const Field& F, LinFrac& a) {
    if (a.num.is_zero()) {
        a.den.clear();
        return;
    }
    for (auto& [l, m] : a.den) {
        while (m > 0) {
            auto q = p_div_linform(F, a.num, l);
            if (!q) break;
            a.num = std::move(*q);
            --m;
        }
    }
    std::erase_if(a.den, [](const auto& pr) { return pr.second == 0; });
    std::sort(a.den.begin(), a.den.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
}

namespace {
// canonical sorted-multiset union / helpers on denominators
std::vector<std::pair<LinForm, int>> den_merge_max(const std::vector<std::pair<LinForm, int>>& a,
                                                  const std::vector<std::pair<LinForm, int>>& b) {
    std::vector<std::pair<LinForm, int>> r;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            r.emplace_back(a[i].first, std::max(a[i].second, b[j].second));
            ++i, ++j;
        } else if (a[i].first < b[j].first) {
            r.push_back(a[i++]);
        } else {
            r.push_back(b[j++]);
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}
std::vector<std::pair<LinForm, int>> den_merge_sum(const std::vector<std::pair<LinForm, int>>& a,
                                                  const std::vector<std::pair<LinForm, int>>& b) {
    std::vector<std::pair<LinForm, int>> r;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first == b[j].first) {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        } else if (a[i].first < b[j].first) {
            r.push_back(a[i++]);
        } else {
            r.push_back(b[j++]);
        }
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}
// multiply p by prod over (l, m) in target \ own
MPoly scale_to_common(const Field& F, MPoly p, const std::vector<std::pair<LinForm, int>>& own,
                      const std::vector<std::pair<LinForm, int>>& target) {
    for (const auto& [l, m] : target) {
        int have = 0;
        for (const auto& [lo, mo] : own)
            if (lo == l) {
                have = mo;
                break;
            }
        if (m > have) p = mul_linform_pow(F, p, l, m - have);
    }
    return p;
}
}  // namespace

LinFrac f_add(const Field& F, const LinFrac& a, const LinFrac& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("f_add: nvars mismatch");
    LinFrac r;
    r.nvars = a.nvars;
    r.den = den_merge_max(a.den, b.den);
    MPoly na = scale_to_common(F, a.num, a.den, r.den);
    MPoly nb = scale_to_common(F, b.num, b.den, r.den);
    r.num = p_add(F, na, nb);
    reduce_inplace(F, r);
    return r;
}

LinFrac f_neg(const Field& F, const LinFrac& a) {
    LinFrac r = a;
    r.num = p_neg(F, r.num);
    return r;
}

LinFrac f_sub(const Field& F, const LinFrac& a, const LinFrac& b) { return f_add(F, a, f_neg(F, b)); }

LinFrac f_scale(const Field& F, const LinFrac& a, Elt c) {
    if (c == 0) return LinFrac::zero(a.nvars);
    LinFrac r = a;
    r.num = p_scale(F, r.num, c);
    return r;
}

LinFrac f_mul(const Field& F, const LinFrac& a, const LinFrac& b) {
    if (a.nvars != b.nvars) throw std::invalid_argument("f_mul: nvars mismatch");
    LinFrac r;
    r.nvars = a.nvars;
    r.num = p_mul(F, a.num, b.num);
    r.den = den_merge_sum(a.den, b.den);
    reduce_inplace(F, r);
    return r;
}

LinFrac f_pow(const Field& F, const LinFrac& a, std::uint64_t k) {
    LinFrac r = LinFrac::constant(a.nvars, 1);
    LinFrac base = a;
    while (k) {
        if (k & 1) r = f_mul(F, r, base);
        k >>= 1;
        if (k) base = f_mul(F, base, base);
    }
    return r;
}

std::optional<LinearFactorization> factor_linear(const Field& F, const MPoly& p) {
    if (p.is_zero()) return std::nullopt;
    MPoly cur = p;
    LinearFactorization out;
    for (const VecF& rep : linalg::projective_reps(F, p.nvars)) {
        LinForm l{rep};
        int count = 0;
        for (;;) {
            auto q = p_div_linform(F, cur, l);
            if (!q) break;
            cur = std::move(*q);
            ++count;
        }
        if (count) out.factors.emplace_back(l, count);
    }
    if (cur.total_degree() != 0) return std::nullopt;  // non-linear factor remains
    out.scalar = cur.terms[0].second;
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

std::optional<LinFrac> f_div(const Field& F, const LinFrac& a, const LinFrac& b) {
    auto fac = factor_linear(F, b.num);
    if (!fac) return std::nullopt;
    // 1/b = den(b) / (scalar * prod factors)
    LinFrac binv;
    binv.nvars = b.nvars;
    binv.num = p_scale(F, den_poly(F, b), F.inv(fac->scalar));
    binv.den = fac->factors;
    reduce_inplace(F, binv);
    return f_mul(F, a, binv);
}

bool f_eq(const Field& F, const LinFrac& a, const LinFrac& b) {
    if (a.nvars != b.nvars) return false;
    // cross-multiplication over the unreduced forms
    MPoly lhs = a.num, rhs = b.num;
    for (const auto& [l, m] : b.den) lhs = mul_linform_pow(F, lhs, l, m);
    for (const auto& [l, m] : a.den) rhs = mul_linform_pow(F, rhs, l, m);
    return lhs == rhs;
}

std::optional<long long> f_degree(const LinFrac& a) {
    auto d = a.num.homogeneous_degree();
    if (!d) return std::nullopt;
    long long s = *d;
    for (const auto& [l, m] : a.den) s -= m;
    return s;
}

LinFrac f_act(const Field& F, const fqmat::Mat& g, const LinFrac& a) {
    LinFrac r;
    r.nvars = a.nvars;
    r.num = p_act(F, g, a.num);
    Elt scal = 1;
    std::vector<std::pair<LinForm, int>> den;
    for (const auto& [l, m] : a.den) {
        VecF img = linalg::apply(F, g, l.v);
        auto [rep, alpha] = LinForm::normalize(F, img);
        scal = F.mul(scal, F.pow(F.inv(alpha), m));
        den.emplace_back(rep, m);
    }
    std::sort(den.begin(), den.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    // merge duplicates (distinct forms can map to the same representative only
    // for a non-invertible g, but stay canonical regardless)
    std::vector<std::pair<LinForm, int>> merged;
    for (auto& pr : den) {
        if (!merged.empty() && merged.back().first == pr.first)
            merged.back().second += pr.second;
        else
            merged.push_back(pr);
    }
    r.num = p_scale(F, r.num, scal);
    r.den = std::move(merged);
    reduce_inplace(F, r);
    return r;
}

std::string f_to_string(const Field& F, const LinFrac& a) {
    std::ostringstream os;
    os << "(" << p_to_string(F, a.num) << ")";
    if (!a.den.empty()) {
        os << " / ";
        for (const auto& [l, m] : a.den) {
            os << "(" << p_to_string(F, l.poly()) << ")";
            if (m > 1) os << "^" << m;
        }
    }
    return os.str();
}

}  // namespace qv::ratfun
