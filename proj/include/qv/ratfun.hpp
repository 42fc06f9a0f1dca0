#pragma once
// Sparse multivariate polynomials over F_q and fractions with linear-form
// denominators: numerator polynomial over a multiset of projectively
// normalized linear forms.  Exact arithmetic throughout.
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qv/linalg.hpp"

namespace qv::ratfun {

using gfq::Elt;
using gfq::Field;
using linalg::VecF;

// ---------------------------------------------------------------------------
// Exponent keys: up to 8 variables, 8 bits per exponent, X_1 in the low byte.
// All arithmetic guards against byte overflow (total degree must stay < 256,
// which also keeps the SWAR total-degree trick exact).
// ---------------------------------------------------------------------------
inline constexpr int kMaxVars = 8;
using Key = std::uint64_t;

inline int key_get(Key k, int var) { return int((k >> (8 * var)) & 0xFF); }
inline Key key_set(Key k, int var, int e) {
    k &= ~(Key(0xFF) << (8 * var));
    return k | (Key(e & 0xFF) << (8 * var));
}
// byte-wise sum of two exponent vectors; throws on per-byte or total overflow
Key key_add(Key a, Key b);
inline int key_totdeg(Key k) { return int((k * 0x0101010101010101ULL) >> 56); }
// graded lexicographic, X_1 > X_2 > ... ; true if a comes strictly before b
// in the canonical (leading-term-first) order
bool grlex_greater(Key a, Key b);

struct LinForm;  // fwd

// Terms kept grlex-descending (leading term first), no zero coefficients.
struct MPoly {
    int nvars = 0;
    std::vector<std::pair<Key, Elt>> terms;

    static MPoly zero(int nvars);
    static MPoly constant(int nvars, Elt c);
    static MPoly monomial(int nvars, Key k, Elt c);
    static MPoly variable(int nvars, int var);  // X_{var+1}

    bool is_zero() const { return terms.empty(); }
    bool operator==(const MPoly&) const = default;
    Elt coeff(Key k) const;
    int total_degree() const;  // -1 for the zero polynomial
    // degree if homogeneous (zero polynomial reports 0); nullopt otherwise
    std::optional<int> homogeneous_degree() const;
};

MPoly p_add(const Field& F, const MPoly& a, const MPoly& b);
MPoly p_sub(const Field& F, const MPoly& a, const MPoly& b);
MPoly p_neg(const Field& F, const MPoly& a);
MPoly p_scale(const Field& F, const MPoly& a, Elt c);
MPoly p_mul(const Field& F, const MPoly& a, const MPoly& b);
MPoly p_pow(const Field& F, const MPoly& a, std::uint64_t k);
// substitution X_{i+1} -> images[i] (simultaneous); implements the GL action
MPoly p_subst(const Field& F, const MPoly& a, const std::vector<MPoly>& images);
// action of g on polynomials: X_j -> sum_i g(i,j) X_i  (column substitution)
MPoly p_act(const Field& F, const fqmat::Mat& g, const MPoly& a);
Elt p_eval(const Field& F, const MPoly& a, const std::vector<Elt>& point);
// coefficient-wise image (e.g. embedding into an extension field)
template <class Fn>
MPoly p_map_coeffs(const MPoly& a, Fn&& fn) {
    MPoly r;
    r.nvars = a.nvars;
    r.terms.reserve(a.terms.size());
    for (const auto& [k, c] : a.terms) {
        Elt d = fn(c);
        if (d != 0) r.terms.emplace_back(k, d);
    }
    return r;
}
std::string p_to_string(const Field& F, const MPoly& a);
std::string p_to_string(const Field& F, const MPoly& a, const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// Linear forms: projective representative (first nonzero coefficient = 1) of a
// nonzero vector v, viewed as the degree-1 polynomial sum v_i X_i.
// ---------------------------------------------------------------------------
struct LinForm {
    VecF v;  // normalized: nonzero, first nonzero entry == 1

    // arbitrary nonzero vector w = alpha * rep; returns (rep, alpha)
    static std::pair<LinForm, Elt> normalize(const Field& F, const VecF& w);
    MPoly poly() const;
    std::uint64_t code(const Field& F) const { return linalg::vec_code(F, v); }
    auto operator<=>(const LinForm&) const = default;
};

// exact quotient p / l, or nullopt if the linear form does not divide p
std::optional<MPoly> p_div_linform(const Field& F, const MPoly& p, const LinForm& l);

// ---------------------------------------------------------------------------
// LinFrac: num / prod_l l^mult, den a sorted multiset of normalized linear
// forms, kept reduced (no denominator form divides the numerator exactly).
// ---------------------------------------------------------------------------
struct LinFrac {
    int nvars = 0;
    MPoly num;
    std::vector<std::pair<LinForm, int>> den;  // sorted by LinForm, mult >= 1

    static LinFrac zero(int nvars);
    static LinFrac from_poly(MPoly p);
    static LinFrac constant(int nvars, Elt c);
    // 1/w for nonzero w, with (Rel 1) normalization: w = alpha*rep gives
    // alpha^{-1} / rep
    static LinFrac one_over(const Field& F, const VecF& w);

    bool is_zero() const { return num.is_zero(); }
    bool operator==(const LinFrac&) const = default;
};

// expanded denominator polynomial prod l^mult
MPoly den_poly(const Field& F, const LinFrac& a);
// divide out every denominator form that divides the numerator (canonical)
void reduce_inplace(const Field& F, LinFrac& a);

LinFrac f_add(const Field& F, const LinFrac& a, const LinFrac& b);
LinFrac f_sub(const Field& F, const LinFrac& a, const LinFrac& b);
LinFrac f_neg(const Field& F, const LinFrac& a);
LinFrac f_scale(const Field& F, const LinFrac& a, Elt c);
LinFrac f_mul(const Field& F, const LinFrac& a, const LinFrac& b);
LinFrac f_pow(const Field& F, const LinFrac& a, std::uint64_t k);
// division: defined only when b's numerator is a nonzero constant times a
// product of linear forms; nullopt signals an unsupported divisor (or b == 0)
std::optional<LinFrac> f_div(const Field& F, const LinFrac& a, const LinFrac& b);
// equality by cross-multiplication (unconditionally correct)
bool f_eq(const Field& F, const LinFrac& a, const LinFrac& b);
// deg(num) - sum of multiplicities for homogeneous num; nullopt otherwise
std::optional<long long> f_degree(const LinFrac& a);
LinFrac f_act(const Field& F, const fqmat::Mat& g, const LinFrac& a);
std::string f_to_string(const Field& F, const LinFrac& a);

// c * prod of linear forms, if num admits such a factorization
struct LinearFactorization {
    Elt scalar;
    std::vector<std::pair<LinForm, int>> factors;  // sorted
};
std::optional<LinearFactorization> factor_linear(const Field& F, const MPoly& p);

// p * l^k via k successive merge-multiplications (fast path for expansions)
MPoly mul_linform_pow(const Field& F, const MPoly& p, const LinForm& l, int k);

}  // namespace qv::ratfun
