#include "qv/gfq.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace qv::gfq {

namespace {

constexpr long kMaxQ = 1 << 20;
constexpr long kTableLimit = 1024;  // build q*q tables up to this size

// --- dense polynomial helpers over Z/p (coefficient vectors, low-to-high) ---

using Poly = std::vector<int>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul_mod(const Poly& a, const Poly& b, const Poly& mod, long p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = int((c[i + j] + long(a[i]) * b[j]) % p);
    }
    // reduce modulo the monic polynomial `mod`
    int e = int(mod.size()) - 1;
    for (int d = int(c.size()) - 1; d >= e; --d) {
        int f = c[d];
        if (f == 0) continue;
        c[d] = 0;
        for (int k = 0; k < e; ++k)
            c[d - e + k] = int(((c[d - e + k] - long(f) * mod[k]) % p + p) % p);
    }
    c.resize(e);
    trim(c);
    return c;
}

Poly ppow_mod(Poly base, long long n, const Poly& mod, long p) {
    Poly r{1};
    while (n > 0) {
        if (n & 1) r = pmul_mod(r, base, mod, p);
        base = pmul_mod(base, base, mod, p);
        n >>= 1;
    }
    return r;
}

Poly pgcd(Poly a, Poly b, long p) {
    auto inv_mod_p = [p](long x) {
        long r = 1, b = x % p, n = p - 2;  // p prime
        while (n > 0) {
            if (n & 1) r = r * b % p;
            b = b * b % p;
            n >>= 1;
        }
        return r;
    };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        long lead_inv = inv_mod_p(b.back());
        while (a.size() >= b.size()) {
            long f = a.back() * lead_inv % p;
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[off + i] = int(((a[off + i] - f * b[i]) % p + p) % p);
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible(const Poly& f, long p) {
    int e = int(f.size()) - 1;
    if (e < 1) return false;
    // f irreducible over F_p iff x^(p^e) == x (mod f) and for every prime
    // divisor d of e, gcd(x^(p^(e/d)) - x, f) == 1.
    Poly x{0, 1};
    Poly xp = x;  // will hold x^(p^i) mod f
    std::vector<int> prime_divs;
    int m = e;
    for (int d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_divs.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_divs.push_back(m);
    for (int i = 1; i <= e; ++i) {
        xp = ppow_mod(xp, p, f, p);
        if (i < e) {
            for (int d : prime_divs)
                if (i == e / d) {
                    Poly diff = xp;
                    if (diff.size() < 2) diff.resize(2, 0);
                    diff[1] = int(((diff[1] - 1) % p + p) % p);
                    trim(diff);
                    if (pgcd(diff, f, p).size() != 1) return false;
                }
        }
    }
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = int(((diff[1] - 1) % p + p) % p);
    trim(diff);
    return diff.empty();
}

// Lexicographically smallest (coefficients compared low-to-high) monic
// irreducible of degree e over F_p.
Poly canonical_modulus(long p, int e) {
    if (e == 1) return Poly{0, 1};  // x itself: smallest monic linear
    // Lex order on (c_0, c_1, ..., c_{e-1}): c_0 is the most significant
    // position, so walk d = 0..p^e-1 with c_0 = top base-p digit of d.
    long long total = 1;
    for (int i = 0; i < e; ++i) total *= p;
    for (long long d = 0; d < total; ++d) {
        // c_0 moves slowest (it is the most significant base-p digit of d),
        // so the first hit is lex-smallest when read low-to-high.
        Poly f(e + 1, 0);
        f[e] = 1;
        long long t = d;
        for (int i = e - 1; i >= 0; --i) {
            f[i] = int(t % p);
            t /= p;
        }
        if (is_irreducible(f, p)) return f;
    }
    throw std::runtime_error("no irreducible polynomial found (impossible)");
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::mutex g_registry_mutex;
std::map<std::pair<long, int>, std::unique_ptr<Field>>& registry() {
    static std::map<std::pair<long, int>, std::unique_ptr<Field>> r;
    return r;
}

}  // namespace

long long ipow(long long b, int n) {
    long long r = 1;
    for (int i = 0; i < n; ++i) r *= b;
    return r;
}

const Field& Field::get(long p, int e) {
    if (e < 1 || !is_prime(p)) throw std::invalid_argument("Field::get: need prime p, e >= 1");
    long long q = 1;
    for (int i = 0; i < e; ++i) {
        q *= p;
        if (q > kMaxQ) throw std::invalid_argument("Field::get: q exceeds 2^20");
    }
    std::lock_guard<std::mutex> lk(g_registry_mutex);
    auto& slot = registry()[{p, e}];
    if (!slot) slot.reset(new Field(p, e));
    return *slot;
}

const Field& Field::get_order(long q) {
    if (q < 2 || q > kMaxQ) throw std::invalid_argument("Field::get_order: q out of range");
    for (long p = 2; p <= q; ++p) {
        if (!is_prime(p)) continue;
        if (q % p != 0) continue;
        long t = q;
        int e = 0;
        while (t % p == 0) {
            t /= p;
            ++e;
        }
        if (t != 1) throw std::invalid_argument("Field::get_order: not a prime power");
        return get(p, e);
    }
    throw std::invalid_argument("Field::get_order: not a prime power");
}

Field::Field(long p, int e) : p_(p), e_(e) {
    q_ = 1;
    for (int i = 0; i < e; ++i) q_ *= p;
    mod_ = canonical_modulus(p, e);
    if (q_ <= kTableLimit) {
        tabled_ = true;
        add_tab_.resize(size_t(q_) * q_);
        mul_tab_.resize(size_t(q_) * q_);
        for (long a = 0; a < q_; ++a)
            for (long b = 0; b < q_; ++b) {
                add_tab_[size_t(a) * q_ + b] = std::uint16_t(add_slow(Elt(a), Elt(b)));
                mul_tab_[size_t(a) * q_ + b] = std::uint16_t(mul_slow(Elt(a), Elt(b)));
            }
        neg_tab_.resize(q_);
        inv_tab_.assign(q_, 0);
        for (long a = 0; a < q_; ++a) {
            // digitwise negation
            long x = a, r = 0, m = 1;
            for (int i = 0; i < e_; ++i) {
                long d = x % p_;
                r += ((p_ - d) % p_) * m;
                m *= p_;
                x /= p_;
            }
            neg_tab_[a] = Elt(r);
        }
        for (long a = 1; a < q_; ++a)
            for (long b = 1; b < q_; ++b)
                if (mul_tab_[size_t(a) * q_ + b] == 1) {
                    inv_tab_[a] = Elt(b);
                    break;
                }
    }
}

Elt Field::add_slow(Elt a, Elt b) const {
    long x = a, y = b, r = 0, m = 1;
    for (int i = 0; i < e_; ++i) {
        r += ((x % p_) + (y % p_)) % p_ * m;
        m *= p_;
        x /= p_;
        y /= p_;
    }
    return Elt(r);
}

Elt Field::mul_slow(Elt a, Elt b) const {
    Poly pa, pb;
    long x = a;
    for (int i = 0; i < e_; ++i) {
        pa.push_back(int(x % p_));
        x /= p_;
    }
    x = b;
    for (int i = 0; i < e_; ++i) {
        pb.push_back(int(x % p_));
        x /= p_;
    }
    trim(pa);
    trim(pb);
    Poly pc = pmul_mod(pa, pb, mod_, p_);
    long r = 0, m = 1;
    for (size_t i = 0; i < pc.size(); ++i) {
        r += pc[i] * m;
        m *= p_;
    }
    return Elt(r);
}

Elt Field::add(Elt a, Elt b) const {
    if (tabled_) return add_tab_[size_t(a) * q_ + b];
    return add_slow(a, b);
}

Elt Field::neg(Elt a) const {
    if (tabled_) return neg_tab_[a];
    long x = a, r = 0, m = 1;
    for (int i = 0; i < e_; ++i) {
        long d = x % p_;
        r += ((p_ - d) % p_) * m;
        m *= p_;
        x /= p_;
    }
    return Elt(r);
}

Elt Field::sub(Elt a, Elt b) const { return add(a, neg(b)); }

Elt Field::mul(Elt a, Elt b) const {
    if (tabled_) return mul_tab_[size_t(a) * q_ + b];
    return mul_slow(a, b);
}

Elt Field::inv(Elt a) const {
    if (a == 0) throw std::domain_error("Field::inv(0)");
    if (tabled_) return inv_tab_[a];
    return pow(a, q_ - 2);
}

Elt Field::pow(Elt a, long long n) const {
    if (n < 0) {
        a = inv(a);
        n = -n;
    }
    if (a == 0) return n == 0 ? Elt(1) : Elt(0);
    n %= (q_ - 1);
    Elt r = 1, b = a;
    while (n > 0) {
        if (n & 1) r = mul(r, b);
        b = mul(b, b);
        n >>= 1;
    }
    return r;
}

Elt Field::from_int(long long n) const {
    long m = long(((n % p_) + p_) % p_);
    return Elt(m);
}

Elt Field::frobenius(Elt a, long n, long base_q) const {
    // check base_q = p^j with j | e
    long t = base_q;
    int j = 0;
    while (t > 1 && t % p_ == 0) {
        t /= p_;
        ++j;
    }
    if (t != 1 || j == 0 || e_ % j != 0)
        throw std::invalid_argument("frobenius: base_q is not a subfield order");
    if (a == 0) return 0;
    // exponent base_q^n mod (q-1); the q0-Frobenius has order e/j here
    long long ex = 1, b = base_q % (q_ - 1);
    long nn = n % (e_ / j);
    if (nn < 0) nn += e_ / j;
    for (int i = 0; i < nn; ++i) ex = (ex * b) % (q_ - 1);
    return pow(a, ex == 0 ? q_ - 1 : ex);
}

long Field::mult_order(Elt a) const {
    if (a == 0) throw std::domain_error("mult_order(0)");
    long n = 1;
    Elt x = a;
    while (x != 1) {
        x = mul(x, a);
        ++n;
    }
    return n;
}

Elt Field::primitive_element() const {
    for (long a = 1; a < q_; ++a)
        if (mult_order(Elt(a)) == q_ - 1) return Elt(a);
    throw std::runtime_error("no primitive element (impossible)");
}

std::vector<int> Field::coeffs(Elt a) const {
    std::vector<int> c(e_);
    long x = a;
    for (int i = 0; i < e_; ++i) {
        c[i] = int(x % p_);
        x /= p_;
    }
    return c;
}

Elt Field::from_coeffs(const std::vector<int>& c) const {
    long r = 0, m = 1;
    for (int i = 0; i < e_ && i < int(c.size()); ++i) {
        int d = ((c[i] % int(p_)) + int(p_)) % int(p_);
        r += d * m;
        m *= p_;
    }
    return Elt(r);
}

// ---- Embedding ----

namespace {
std::mutex g_embed_mutex;
std::map<std::pair<const Field*, const Field*>, std::unique_ptr<Embedding>>& embed_registry() {
    static std::map<std::pair<const Field*, const Field*>, std::unique_ptr<Embedding>> r;
    return r;
}
}  // namespace

const Embedding& Embedding::get(const Field& src, const Field& tgt) {
    std::lock_guard<std::mutex> lk(g_embed_mutex);
    auto& slot = embed_registry()[{&src, &tgt}];
    if (!slot) slot.reset(new Embedding(src, tgt));
    return *slot;
}

Embedding::Embedding(const Field& src, const Field& tgt) : src_(&src), tgt_(&tgt) {
    if (src.p() != tgt.p() || tgt.e() % src.e() != 0)
        throw std::invalid_argument("Embedding: target is not an extension of source");
    // smallest root of the source modulus in the target, in code order
    const auto& m = src.modulus();
    gen_image_ = 0;
    bool found = false;
    for (long x = 0; x < tgt.q(); ++x) {
        Elt v = 0;  // Horner, coefficients lie in the prime field
        for (int i = int(m.size()) - 1; i >= 0; --i)
            v = tgt.add(tgt.mul(v, Elt(x)), tgt.from_int(m[i]));
        if (v == 0) {
            gen_image_ = Elt(x);
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("Embedding: no root of source modulus (impossible)");
    gen_pows_.resize(src.e());
    Elt pw = 1;
    for (int i = 0; i < src.e(); ++i) {
        gen_pows_[i] = pw;
        pw = tgt.mul(pw, gen_image_);
    }
}

Elt Embedding::operator()(Elt a) const {
    auto c = src_->coeffs(a);
    Elt r = 0;
    for (int i = 0; i < src_->e(); ++i)
        if (c[i] != 0) r = tgt_->add(r, tgt_->mul(tgt_->from_int(c[i]), gen_pows_[i]));
    return r;
}

}  // namespace qv::gfq
