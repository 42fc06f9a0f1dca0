// Exact arithmetic in small finite fields F_q, q = p^e <= 2^20.
//
// Every field is constructed deterministically: the modulus is the
// lexicographically smallest monic irreducible polynomial of degree e over
// F_p (coefficients compared low-to-high), so repeated runs are bit-identical.
// Elements are codes 0..q-1, packing the coefficient vector in base p with
// the constant coefficient as the least significant digit.  Code order is the
// canonical enumeration order used everywhere else in the library.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qv::gfq {

using Elt = std::uint32_t;

class Field {
public:
    // Registry access; instances are immutable, interned and never freed.
    static const Field& get(long p, int e);
    // Factors q as p^e (q a prime power <= 2^20) and returns get(p, e).
    static const Field& get_order(long q);

    long p() const { return p_; }
    int e() const { return e_; }
    long q() const { return q_; }
    // Modulus coefficients c[0..e], low-to-high, c[e] == 1.
    const std::vector<int>& modulus() const { return mod_; }

    Elt add(Elt a, Elt b) const;
    Elt sub(Elt a, Elt b) const;
    Elt neg(Elt a) const;
    Elt mul(Elt a, Elt b) const;
    Elt inv(Elt a) const;           // throws on a == 0
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }
    Elt pow(Elt a, long long n) const;  // n may be negative (a != 0 then)

    Elt zero() const { return 0; }
    Elt one() const { return 1; }
    // Embedding of the prime field: n mod p as a constant.
    Elt from_int(long long n) const;

    // a^(base_q^n), the n-th power of the q0-Frobenius.  base_q must be a
    // power of p whose degree divides e (declared base field of the tower).
    Elt frobenius(Elt a, long n, long base_q) const;

    // Multiplicative order of a != 0.
    long mult_order(Elt a) const;
    // Smallest-code generator of the multiplicative group.
    Elt primitive_element() const;

    // Coefficient vector of an element, length e, entries in [0, p).
    std::vector<int> coeffs(Elt a) const;
    Elt from_coeffs(const std::vector<int>& c) const;

    // Canonical display form: the element code as a decimal string.
    std::string to_string(Elt a) const { return std::to_string(a); }

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    Field(long p, int e);

    long p_;
    int e_;
    long q_;
    std::vector<int> mod_;              // length e+1
    bool tabled_ = false;
    std::vector<std::uint16_t> add_tab_, mul_tab_;  // q*q when tabled
    std::vector<Elt> inv_tab_, neg_tab_;

    Elt add_slow(Elt a, Elt b) const;
    Elt mul_slow(Elt a, Elt b) const;
};

// Field embedding along the smallest-root rule: the image of the source
// generator is the root of the source modulus in the target that is smallest
// in the target's canonical element order.  Injective ring homomorphism;
// requires same characteristic and src.e() | tgt.e().  Cached per pair.
class Embedding {
public:
    static const Embedding& get(const Field& src, const Field& tgt);
    Elt operator()(Elt a) const;
    const Field& src() const { return *src_; }
    const Field& tgt() const { return *tgt_; }
    Elt gen_image() const { return gen_image_; }

private:
    Embedding(const Field& src, const Field& tgt);
    const Field* src_;
    const Field* tgt_;
    Elt gen_image_;
    std::vector<Elt> gen_pows_;  // gen_image^0 .. ^(src.e-1)
};

// b^n for small integers, overflow-unchecked (callers keep n modest).
long long ipow(long long b, int n);

}  // namespace qv::gfq
