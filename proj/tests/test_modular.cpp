#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "qv/modular.hpp"

using namespace qv::modular;
using qv::gfq::Elt;
using qv::gfq::Field;
using qv::gfq::ipow;
using qv::linalg::Subspace;
using qv::linalg::VecF;

namespace {


// brute force: every function on the representatives, filtered by
// reciprocity, canonically scaled, deduplicated
std::set<std::vector<Elt>> brute_points(const KCtx& K) {
    const long long qm = K.ext().q();
    const int nreps = int(K.reps().size());
    long long total = 1;
    for (int i = 0; i < nreps; ++i) {
        total *= qm;
        REQUIRE(total <= (1LL << 20));
    }
    std::set<std::vector<Elt>> out;
    for (long long t = 0; t < total; ++t) {
        RecMap rho;
        rho.values.resize(std::size_t(nreps));
        long long code = t;
        bool zero = true;
        for (int i = 0; i < nreps; ++i) {
            rho.values[std::size_t(i)] = Elt(code % qm);
            if (rho.values[std::size_t(i)] != 0) zero = false;
            code /= qm;
        }
        if (zero || !is_reciprocal(K, rho)) continue;
        out.insert(canonical_scaling(K, rho).values);
    }
    return out;
}

RecMap scaled(const KCtx& K, const RecMap& rho, Elt beta) {
    RecMap out = rho;
    for (Elt& v : out.values) v = K.ext().mul(beta, v);
    return out;
}

}  // namespace

TEST_CASE("KCtx: fields, embedding, representatives") {
    const KCtx K(2, 3, 2);  // V = F_2^3, k = F_4
    CHECK(K.base().q() == 2);
    CHECK(K.ext().q() == 4);
    CHECK(K.r() == 3);
    CHECK(K.m() == 2);
    CHECK(K.reps().size() == 7);  // (2^3 - 1) / (2 - 1)

    // embedding is a ring homomorphism on the base field
    for (Elt a = 0; a < 2; ++a)
        for (Elt b = 0; b < 2; ++b) {
            CHECK(K.emb()(K.base().add(a, b)) == K.ext().add(K.emb()(a), K.emb()(b)));
            CHECK(K.emb()(K.base().mul(a, b)) == K.ext().mul(K.emb()(a), K.emb()(b)));
        }
    CHECK(K.emb()(1) == 1);

    // rep_of round-trips every nonzero vector
    const Field& B = K.base();
    for (long long c = 1; c < 8; ++c) {
        const VecF v = qv::linalg::vec_of_code(B, 3, std::uint64_t(c));
        auto [idx, a] = K.rep_of(v);
        CHECK(qv::linalg::vec_scale(B, a, K.reps()[std::size_t(idx)]) == v);
    }

    // q = 3 representatives: first nonzero coordinate 1, so 4 of them at r = 2
    const KCtx K3(3, 2, 1);
    CHECK(K3.reps().size() == 4);
    CHECK(K3.ext().q() == 3);
    CHECK_THROWS_AS(KCtx(2, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(KCtx(2, 1, 0), std::invalid_argument);
}

TEST_CASE("rho_eval: the scaling law holds by representation") {
    const KCtx K(3, 2, 2);  // k = F_9
    const Field& B = K.base();
    const Field& E = K.ext();
    std::mt19937_64 rng(20260822);
    std::uniform_int_distribution<long long> dist(0, E.q() - 1);
    RecMap rho;
    for (std::size_t i = 0; i < K.reps().size(); ++i) rho.values.push_back(Elt(dist(rng)));

    for (const VecF& rep : K.reps())
        for (Elt a = 1; a < 3; ++a) {
            const VecF v = qv::linalg::vec_scale(B, a, rep);
            // rho(a v) = a^{-1} rho(v)
            CHECK(rho_eval(K, rho, v) ==
                  E.mul(E.inv(K.emb()(a)), rho_eval(K, rho, rep)));
        }
}

TEST_CASE("is_reciprocal: zero map, inverse-linear maps, witness search") {
    const KCtx K(2, 2, 2);
    const Field& E = K.ext();

    // identically zero map is reciprocal
    RecMap zero;
    zero.values.assign(K.reps().size(), 0);
    CHECK(is_reciprocal(K, zero));
    CHECK(!reciprocal_witness(K, zero).has_value());

    // the reciprocal of an injective linear map: images (g, g+1) of X_1, X_2
    // where g generates F_4; rho(v) = 1/lambda(v)
    const Elt g = E.primitive_element();
    const Subspace full = Subspace::full(K.base(), 2);
    const RecMap rho = from_linmap_on(K, full, {g, E.add(g, 1)});
    CHECK(is_reciprocal(K, rho));

    // every map over k = F_4 on 3 representatives, against an independent
    // pair-by-pair oracle
    int non_reciprocal = 0;
    for (long long t = 0; t < 64; ++t) {
        RecMap cand;
        long long code = t;
        for (int i = 0; i < 3; ++i) {
            cand.values.push_back(Elt(code % 4));
            code /= 4;
        }
        // oracle: direct scan over all unordered pairs of nonzero vectors
        bool ok = true;
        for (long long ca = 1; ca < 4 && ok; ++ca)
            for (long long cb = ca + 1; cb < 4 && ok; ++cb) {
                const VecF va = qv::linalg::vec_of_code(K.base(), 2, std::uint64_t(ca));
                const VecF vb = qv::linalg::vec_of_code(K.base(), 2, std::uint64_t(cb));
                const VecF vs = qv::linalg::vec_add(K.base(), va, vb);
                if (qv::linalg::vec_code(K.base(), vs) == 0) continue;
                const Elt pa = rho_eval(K, cand, va), pb = rho_eval(K, cand, vb);
                if (E.mul(pa, pb) != E.mul(rho_eval(K, cand, vs), E.add(pa, pb))) ok = false;
            }
        const auto w = reciprocal_witness(K, cand);
        CHECK(is_reciprocal(K, cand) == ok);
        CHECK(w.has_value() == !ok);
        if (w) {
            ++non_reciprocal;
            // the witness really violates the identity
            const auto& [va, vb] = *w;
            const VecF vs = qv::linalg::vec_add(K.base(), va, vb);
            const Elt pa = rho_eval(K, cand, va), pb = rho_eval(K, cand, vb);
            CHECK(E.mul(pa, pb) != E.mul(rho_eval(K, cand, vs), E.add(pa, pb)));
        }
    }
    CHECK(non_reciprocal > 0);
}

TEST_CASE("support and classify: round-trips with from_linmap_on") {
    const KCtx K(2, 2, 2);
    const Field& E = K.ext();
    const Elt g = E.primitive_element();

    // invertible rho: support is all of V, classification recovers lambda
    const Subspace full = Subspace::full(K.base(), 2);
    const std::vector<Elt> lam = {g, E.add(g, 1)};
    const RecMap rho = from_linmap_on(K, full, lam);
    CHECK(support(K, rho) == full);
    const Classification cl = classify(K, rho);
    CHECK(cl.sub == full);
    CHECK(cl.lambda == lam);

    // extension by zero from each line has exactly that line as support
    for (const Subspace& line : qv::linalg::subspaces_of_dim(K.base(), 2, 1)) {
        const RecMap b = from_linmap_on(K, line, {g});
        CHECK(support(K, b) == line);
        const Classification c2 = classify(K, b);
        CHECK(c2.sub == line);
        CHECK(c2.lambda == std::vector<Elt>{g});
        // round-trip through from_linmap_on is exact
        CHECK(from_linmap_on(K, c2.sub, c2.lambda) == b);
    }

    // zero map: support 0, classify rejects
    RecMap zero;
    zero.values.assign(K.reps().size(), 0);
    CHECK(support(K, zero).dim == 0);
    CHECK_THROWS_AS(classify(K, zero), std::invalid_argument);

    // non-reciprocal input is rejected by support
    RecMap bad;
    bad.values = {1, 1, 1};  // fails the identity over F_4: 1*1 != (1+1)*1 = 0
    REQUIRE(!is_reciprocal(K, bad));
    CHECK_THROWS_AS(support(K, bad), std::invalid_argument);

    // non-injective lambda is rejected upstream
    CHECK_THROWS_AS(from_linmap_on(K, full, std::vector<Elt>{1, 1}),
                    std::invalid_argument);

    // exhaustive round-trip over all Q-points of a q=3 context
    const KCtx K3(3, 2, 2);
    for (const RecMap& pt : qv_points(K3)) {
        const Classification c = classify(K3, pt);
        CHECK(from_linmap_on(K3, c.sub, c.lambda) == pt);
    }
}

TEST_CASE("qv_points: brute force agreement and count formula") {
    struct Case {
        long q;
        int r, m;
        long long expect;  // independently computed count
    };
    // expect = sum over strata: #subspaces of dim s * prod_{i=1}^{s-1}(q^m - q^i)
    const std::vector<Case> cases = {
        {2, 2, 1, 3},   // all three points on line strata
        {2, 2, 2, 5},   // 3 * 1 + 1 * 2
        {3, 2, 1, 4},   // 4 lines, no invertible point over F_3
        {3, 2, 2, 10},  // 4 * 1 + 1 * (9 - 3)
        {2, 3, 1, 7},   // only line strata over F_2
        {2, 3, 2, 21},  // 7 + 7 * (4 - 2) + 0
    };
    for (const auto& c : cases) {
        CAPTURE(c.q);
        CAPTURE(c.r);
        CAPTURE(c.m);
        const KCtx K(c.q, c.r, c.m);
        const auto pts = qv_points(K);
        CHECK((long long)(pts.size()) == c.expect);
        CHECK(qv_count_formula(c.q, c.r, c.m) == c.expect);

        // brute force over every k-valued function on the representatives
        const auto brute = brute_points(K);
        REQUIRE(brute.size() == pts.size());
        for (const RecMap& p : pts) CHECK(brute.count(p.values) == 1);

        // canonical scaling and validity of every point
        for (const RecMap& p : pts) {
            CHECK(is_reciprocal(K, p));
            auto first = std::find_if(p.values.begin(), p.values.end(),
                                      [](Elt v) { return v != 0; });
            REQUIRE(first != p.values.end());
            CHECK(*first == 1);
        }
        // sorted and duplicate-free
        CHECK(std::is_sorted(pts.begin(), pts.end()));
        CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
    }

    // r = 1: a single point for any k
    for (int m = 1; m <= 3; ++m) {
        const KCtx K1(2, 1, m);
        CHECK(qv_points(K1).size() == 1);
        CHECK(qv_count_formula(2, 1, m) == 1);
    }

    // larger formula values stay consistent with the stratum sum
    CHECK(qv_count_formula(2, 3, 3) == 7 + 7 * (8 - 2) + 1 * (8 - 2) * (8 - 4));  // 73
}

TEST_CASE("stratum_of: partition of the point set with per-stratum counts") {
    struct Case {
        long q;
        int r, m;
    };
    for (const auto& c : std::vector<Case>{{2, 2, 2}, {3, 2, 2}, {2, 3, 2}, {2, 3, 3}}) {
        CAPTURE(c.q);
        CAPTURE(c.r);
        CAPTURE(c.m);
        const KCtx K(c.q, c.r, c.m);
        const long long qm = K.ext().q();
        std::map<Subspace, long long> per_stratum;
        const auto pts = qv_points(K);
        for (const RecMap& p : pts) ++per_stratum[stratum_of(K, p)];

        long long total = 0;
        for (const auto& [sub, cnt] : per_stratum) {
            // |Omega_{V'}(k)| = prod_{i=1}^{s-1} (q^m - q^i), s = dim V'
            long long expect = 1;
            for (int i = 1; i < sub.dim; ++i) expect *= qm - ipow(c.q, i);
            CHECK(cnt == expect);
            total += cnt;
        }
        CHECK(total == (long long)(pts.size()));
        // every nonzero subspace with a nonempty stratum appears exactly once;
        // strata are empty exactly when q^m < q^s (no injective map exists)
        for (const Subspace& sub : qv::linalg::all_nonzero_subspaces(K.base(), c.r)) {
            const bool nonempty = qm >= ipow(c.q, sub.dim);
            CHECK(per_stratum.count(sub) == std::size_t(nonempty ? 1 : 0));
        }
    }
}

TEST_CASE("extend_by_zero: chains are transitive and strata are monotone") {
    const KCtx K(2, 3, 2);
    const Field& B = K.base();
    // for every plane V' and line W' inside it: extending a W'-point stepwise
    // through V' equals extending directly, and the stratum is the lifted one
    for (const Subspace& plane : qv::linalg::subspaces_of_dim(B, 3, 2)) {
        const KCtx K2(2, 2, 2);
        for (const Subspace& line2 : qv::linalg::subspaces_of_dim(K2.base(), 2, 1)) {
            const KCtx K1(2, 1, 2);
            for (const RecMap& p1 : qv_points(K1)) {
                const RecMap via = extend_by_zero(K, plane, K2,
                                                  extend_by_zero(K2, line2, K1, p1));
                const Subspace line3 = lift_subspace(K, plane, line2);
                const RecMap direct = extend_by_zero(K, line3, K1, p1);
                CHECK(via == direct);
                CHECK(stratum_of(K, via) == line3);
                CHECK(plane.contains_sub(B, line3));
            }
        }
    }
    // extension never enlarges the stratum beyond the target subspace
    for (const Subspace& sub : qv::linalg::all_nonzero_subspaces(B, 3)) {
        const KCtx Ks(2, sub.dim, 2);
        for (const RecMap& ps : qv_points(Ks)) {
            const Subspace st = stratum_of(K, extend_by_zero(K, sub, Ks, ps));
            CHECK(sub.contains_sub(B, st));
            CHECK(st == lift_subspace(K, sub, stratum_of(Ks, ps)));
        }
    }
}

TEST_CASE("pv_points: counts and kernel strata") {
    struct Case {
        long q;
        int r, m;
    };
    for (const auto& c : std::vector<Case>{{2, 2, 2}, {2, 3, 2}, {3, 2, 2}, {2, 3, 3}}) {
        CAPTURE(c.q);
        CAPTURE(c.r);
        CAPTURE(c.m);
        const KCtx K(c.q, c.r, c.m);
        const long long qm = K.ext().q();
        const auto pts = pv_points(K);
        CHECK((long long)(pts.size()) == pv_count_formula(c.q, c.r, c.m));
        CHECK((long long)(pts.size()) == (ipow(c.q, c.m * c.r) - 1) / (qm - 1));
        CHECK(std::is_sorted(pts.begin(), pts.end()));
        CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());

        // group by kernel: the stratum of lambda is V / ker, and the count
        // per kernel of dimension t is prod_{i=1}^{r-t-1} (q^m - q^i)
        std::map<Subspace, long long> per_kernel;
        for (const LinMap& lam : pts) ++per_kernel[linmap_kernel(K, lam)];
        long long total = 0;
        for (const auto& [ker, cnt] : per_kernel) {
            const int s = c.r - ker.dim;  // dim of the quotient the map injects through
            long long expect = 1;
            for (int i = 1; i < s; ++i) expect *= qm - ipow(c.q, i);
            CHECK(cnt == expect);
            total += cnt;
        }
        CHECK(total == (long long)(pts.size()));
    }
}

TEST_CASE("g_map and f_map: defining formulas and r = 1 identity") {
    const KCtx K(2, 2, 2);
    const Field& E = K.ext();
    const Elt g = E.primitive_element();

    // direct re-computation of g at a specific point: images over unit
    // functionals are sums of rho over the matching coordinate hyperplane
    const Subspace full = Subspace::full(K.base(), 2);
    const RecMap rho = from_linmap_on(K, full, {g, E.add(g, 1)});
    const LinMap G = g_map(K, rho);
    {
        // <e_1^*, v> = 1 picks v in {(1,0), (1,1)}
        const Elt expect0 = E.add(rho_eval(K, rho, {1, 0}), rho_eval(K, rho, {1, 1}));
        const Elt expect1 = E.add(rho_eval(K, rho, {0, 1}), rho_eval(K, rho, {1, 1}));
        CHECK(G.images[0] == expect0);
        CHECK(G.images[1] == expect1);
    }

    // f at a linear map: product over the functionals pairing to 1
    const LinMap lam{{g, 1}};
    const RecMap F = f_map(K, lam);
    {
        // v = (1,0): functionals ell with ell_1 = 1: (1,0) and (1,1)
        const Elt expect = E.mul(linmap_eval(K, lam, {1, 0}), linmap_eval(K, lam, {1, 1}));
        auto [idx, a] = K.rep_of(VecF{1, 0});
        REQUIRE(a == 1);
        CHECK(F.values[std::size_t(idx)] == expect);
    }
    CHECK(is_reciprocal(K, F));

    // r = 1: g(rho)(ell) = rho(v) for the unique v with <ell, v> = 1, and
    // f o g is the identity (exponent q^{r-1} = 1)
    for (int m = 1; m <= 3; ++m) {
        const KCtx K1(2, 1, m);
        std::mt19937_64 rng(7 + m);
        std::uniform_int_distribution<long long> dist(1, K1.ext().q() - 1);
        for (int t = 0; t < 8; ++t) {
            RecMap r1;
            r1.values = {Elt(dist(rng))};
            const LinMap g1 = g_map(K1, r1);
            CHECK(g1.images[0] == r1.values[0]);  // <X_1^*, X_1> = 1
            CHECK(f_map(K1, g1) == r1);
        }
    }
}

TEST_CASE("g after f is the q^{r-1} power, exhaustively at (2,2,2)") {
    const KCtx K(2, 2, 2);
    const Field& E = K.ext();
    // all 16 linear maps lambda: V^* -> k, including zero and non-injective
    for (Elt a = 0; a < 4; ++a)
        for (Elt b = 0; b < 4; ++b) {
            const LinMap lam{{a, b}};
            const LinMap back = g_map(K, f_map(K, lam));
            for (int i = 0; i < 2; ++i)
                CHECK(back.images[std::size_t(i)] ==
                      E.frobenius(lam.images[std::size_t(i)], K.r() - 1, K.q()));
        }
}

TEST_CASE("f after g is the q^{r-1} power on Q-points at (2,3,3)") {
    const KCtx K(2, 3, 3);  // k = F_8
    const Field& E = K.ext();
    REQUIRE(qv_count_formula(2, 3, 3) == 73);
    std::mt19937_64 rng(20260822);
    std::uniform_int_distribution<long long> dist(1, E.q() - 1);
    const auto pts = qv_points(K);
    CHECK(pts.size() == 73);
    for (const RecMap& pt : pts) {
        // scaling classes: check the canonical representative and a rescaling
        for (const RecMap& rho : {pt, scaled(K, pt, Elt(dist(rng)))}) {
            const RecMap back = f_map(K, g_map(K, rho));
            for (std::size_t i = 0; i < rho.values.size(); ++i)
                CHECK(back.values[i] == E.frobenius(rho.values[i], K.r() - 1, K.q()));
        }
    }
}

TEST_CASE("point-level bijections induced by g and f") {
    struct Case {
        long q;
        int r, m;
    };
    for (const auto& c : std::vector<Case>{{2, 2, 2}, {2, 3, 2}, {3, 2, 2}, {2, 3, 3}}) {
        CAPTURE(c.q);
        CAPTURE(c.r);
        CAPTURE(c.m);
        const KCtx K(c.q, c.r, c.m);
        const auto qpts = qv_points(K);
        const auto ppts = pv_points(K);
        // counts match: |Q_V(k)| = |P_{V^*}(k)|
        REQUIRE(qpts.size() == ppts.size());

        // g is injective on scaling classes and lands in the P-point set
        std::set<std::vector<Elt>> g_images;
        for (const RecMap& p : qpts)
            g_images.insert(canonical_scaling(K, g_map(K, p)).images);
        CHECK(g_images.size() == qpts.size());
        for (const LinMap& lam : ppts) CHECK(g_images.count(lam.images) == 1);

        // f is injective on scaling classes and lands in the Q-point set
        std::set<std::vector<Elt>> f_images;
        for (const LinMap& lam : ppts)
            f_images.insert(canonical_scaling(K, f_map(K, lam)).values);
        CHECK(f_images.size() == ppts.size());
        std::set<std::vector<Elt>> qset;
        for (const RecMap& p : qpts) qset.insert(p.values);
        for (const auto& v : f_images) CHECK(qset.count(v) == 1);
    }
}

TEST_CASE("gf_compat_check: both squares commute for every subspace") {
    // exhaustive over all subspaces at (2,2,2), sampled at (2,3,2) and (3,2,2)
    {
        const KCtx K(2, 2, 2);
        for (const Subspace& sub : qv::linalg::all_nonzero_subspaces(K.base(), 2)) {
            const auto rep = gf_compat_check(K, sub, 20, 11);
            CHECK(rep.g_ok);
            CHECK(rep.f_ok);
            CHECK(rep.g_checked > 0);
            CHECK(rep.f_checked == 20);
        }
    }
    {
        const KCtx K(2, 3, 2);
        for (const Subspace& sub : qv::linalg::all_nonzero_subspaces(K.base(), 3)) {
            const auto rep = gf_compat_check(K, sub, 12, 17);
            CHECK(rep.g_ok);
            CHECK(rep.f_ok);
        }
    }
    {
        const KCtx K(3, 2, 2);
        for (const Subspace& sub : qv::linalg::all_nonzero_subspaces(K.base(), 2)) {
            const auto rep = gf_compat_check(K, sub, 12, 23);
            CHECK(rep.g_ok);
            CHECK(rep.f_ok);
        }
    }
}

TEST_CASE("tangent_dim: smooth for r <= 2, singular exactly in codimension >= 2") {
    // r = 1: the cone is a line, no relations
    {
        const KCtx K(2, 1, 2);
        for (const RecMap& p : qv_points(K)) {
            CHECK(jacobian_kernel_dim(K, p) == 1);
            CHECK(tangent_dim(K, p) == 0);
        }
    }
    // r = 2: every point smooth, tangent dimension 1 = r - 1
    {
        const KCtx K(2, 2, 2);
        for (const RecMap& p : qv_points(K)) {
            CHECK(jacobian_kernel_dim(K, p) == 2);
            CHECK(tangent_dim(K, p) == 1);
        }
    }
    {
        const KCtx K(3, 2, 2);
        for (const RecMap& p : qv_points(K)) CHECK(tangent_dim(K, p) == 1);
    }
    // r = 3, q = 2 over F_8: open and codimension-1 strata are smooth
    // (tangent dimension 2 = r - 1); the codimension-2 strata are singular
    // with affine kernel 4, i.e. tangent dimension 3
    {
        const KCtx K(2, 3, 3);
        int seen_open = 0, seen_codim1 = 0, seen_codim2 = 0;
        for (const RecMap& p : qv_points(K)) {
            const int s = stratum_of(K, p).dim;
            const long long ker = jacobian_kernel_dim(K, p);
            if (s == 3) {
                ++seen_open;
                CHECK(ker == 3);
                CHECK(tangent_dim(K, p) == 2);
            } else if (s == 2) {
                ++seen_codim1;
                CHECK(ker == 3);
                CHECK(tangent_dim(K, p) == 2);
            } else {
                ++seen_codim2;
                CHECK(ker == 4);
                CHECK(tangent_dim(K, p) == 3);
            }
        }
        CHECK(seen_open == 24);
        CHECK(seen_codim1 == 42);
        CHECK(seen_codim2 == 7);
    }
    // same partition over the smaller field F_4: only line and plane strata
    {
        const KCtx K(2, 3, 2);
        for (const RecMap& p : qv_points(K)) {
            const int s = stratum_of(K, p).dim;
            CHECK(tangent_dim(K, p) == (s == 1 ? 3 : 2));
        }
    }
    // errors: zero map and non-reciprocal maps are rejected
    {
        const KCtx K(2, 2, 2);
        RecMap zero;
        zero.values.assign(K.reps().size(), 0);
        CHECK_THROWS_AS(jacobian_kernel_dim(K, zero), std::invalid_argument);
        RecMap bad;
        bad.values = {1, 1, 1};
        CHECK_THROWS_AS(jacobian_kernel_dim(K, bad), std::invalid_argument);
    }
}
