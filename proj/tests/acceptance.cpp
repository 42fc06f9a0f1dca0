// Acceptance gate: fifteen end-to-end criteria, one pass/fail line each.
// Exit code 0 iff all pass.  Every check is exact (integer / field equality);
// witnesses carry the first failing comparison.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qv/bvariety.hpp"
#include "qv/dualizing.hpp"
#include "qv/gfq.hpp"
#include "qv/invariants.hpp"
#include "qv/linalg.hpp"
#include "qv/modular.hpp"
#include "qv/rvring.hpp"
#include "qv/suites.hpp"

using qv::gfq::Elt;
using qv::gfq::Field;

namespace {

struct Outcome {
    bool ok = true;
    long long checks = 0;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) {
            ok = false;
            detail = why;
        }
    }
    void expect(bool cond, const std::string& why) {
        ++checks;
        if (!cond) fail(why);
    }
    void absorb(const qv::suites::Result& res, const std::string& label) {
        checks += res.checks;
        if (!res.pass) fail(label + ": " + res.witness);
    }
};

qv::suites::Config cfg_of(long q, int r, int m, long long n_hi, std::uint64_t seed = 20260822) {
    qv::suites::Config c;
    c.q = q;
    c.r = r;
    c.m = m;
    c.n_lo = 0;
    c.n_hi = n_hi;
    c.seed = seed;
    return c;
}

int g_passed = 0, g_total = 0;

void criterion(int idx, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome out;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++g_total;
    if (out.ok) ++g_passed;
    std::printf("[%2d/15] %s  %-58s (%lld checks, %.1fs)%s%s\n", idx, out.ok ? "PASS" : "FAIL",
                name.c_str(), out.checks, secs, out.ok ? "" : " -- ",
                out.ok ? "" : out.detail.c_str());
    std::fflush(stdout);
}

}  // namespace

int main() {
    // 1. Every defining relation maps to the zero fraction.
    criterion(1, "defining relations map to zero fractions", [](Outcome& o) {
        for (auto [q, r] : {std::pair<long, int>{2, 2}, {2, 3}, {3, 2}, {2, 4}}) {
            qv::rvring::Context C(q, r);
            auto rep = qv::rvring::relation_residues(C);
            for (const auto& fr : rep.family1)
                o.expect(fr.is_zero(), "scaling residue nonzero at q=" + std::to_string(q) +
                                           ", r=" + std::to_string(r));
            for (const auto& fr : rep.family2)
                o.expect(fr.is_zero(), "reciprocity residue nonzero at q=" + std::to_string(q) +
                                           ", r=" + std::to_string(r));
        }
    });

    // 2. Graded spanning-set ranks realize the Hilbert function.
    criterion(2, "graded ranks equal h_r(n)", [](Outcome& o) {
        auto run = [&](long q, int r, int n_max) {
            qv::rvring::Context C(q, r);
            for (int n = 0; n <= n_max; ++n) {
                long long h = qv::rvring::hilbert_h(r, q, n);
                long long rank = C.piece(n).rank;
                std::ostringstream os;
                os << "q=" << q << ", r=" << r << ", n=" << n << ": rank " << rank << " != "
                   << h;
                o.expect(rank == h, os.str());
            }
        };
        for (long q : {2L, 3L})
            for (int r : {1, 2, 3}) run(q, r, 5);
        run(2, 4, 3);
    });

    // 3. The Delta-product x f-monomial family is a basis in every tested piece.
    criterion(3, "free-module family independent, basis size q^(r(r-1)/2)", [](Outcome& o) {
        for (long q : {2L, 3L})
            for (int r : {1, 2, 3}) {
                qv::rvring::Context C(q, r);
                long long expect = 1;
                for (int i = 2; i <= r; ++i)
                    for (int t = 0; t < i - 1; ++t) expect *= q;
                o.expect((long long)(qv::rvring::delta_products(C).size()) == expect,
                         "basis size mismatch at q=" + std::to_string(q) +
                             ", r=" + std::to_string(r));
                for (const auto& row : qv::rvring::freeness_check(C, 5)) {
                    std::ostringstream os;
                    os << "q=" << q << ", r=" << r << ", n=" << row.n << ": count " << row.count
                       << ", rank " << row.rank << ", h " << row.h;
                    o.expect(row.ok, os.str());
                }
            }
    });

    // 4. Unipotent fixed-space dimensions: brute force == closed formula.
    criterion(4, "unipotent invariant dimensions match the coset formula", [](Outcome& o) {
        for (auto [q, r] : {std::pair<long, int>{2, 2}, {3, 2}, {2, 3}})
            o.absorb(qv::suites::run_suite("invariants", cfg_of(q, r, 1, 5)),
                     "(" + std::to_string(q) + "," + std::to_string(r) + ")");
    });

    // 5. Dickson invariants: fixedness, the h(T) identity, graded dimensions.
    criterion(5, "Dickson/invariant rings and the h(T) identity", [](Outcome& o) {
        for (auto [q, r] : {std::pair<long, int>{2, 1}, {3, 1}, {2, 2}, {3, 2}, {2, 3}}) {
            long long qr = 1;
            for (int i = 0; i < r; ++i) qr *= q;
            o.absorb(qv::suites::run_suite("dickson", cfg_of(q, r, 1, 2 * (qr - 1))),
                     "(" + std::to_string(q) + "," + std::to_string(r) + ")");
        }
    });

    // 6. Weighted projective regularity of the six quotient families.
    criterion(6, "weighted projective regularity pattern", [](Outcome& o) {
        using qv::invariants::WpCase;
        const WpCase cases[] = {WpCase::QU, WpCase::PU,  WpCase::QG,
                                WpCase::PG, WpCase::QGp, WpCase::PGp};
        for (long q : {2L, 3L}) {
            for (int r : {1, 2})
                for (auto c : cases)
                    o.expect(qv::invariants::wp_regular(qv::invariants::wp_weights(c, r, q)),
                             "family should be regular at r<=2, q=" + std::to_string(q));
            for (int ci = 0; ci < 6; ++ci) {
                bool reg = qv::invariants::wp_regular(qv::invariants::wp_weights(cases[ci], 3, q));
                if (ci == 0)
                    o.expect(reg, "Q/U family should stay regular at r=3");
                else
                    o.expect(!reg, "family #" + std::to_string(ci) +
                                       " should be singular at r=3, q=" + std::to_string(q));
            }
        }
    });

    // 7. The N_r pairing table is f_1^2...f_r^2 times the identity.
    criterion(7, "dualizing pairing table diagonal", [](Outcome& o) {
        for (auto [q, r] : {std::pair<long, int>{2, 1}, {2, 2}, {2, 3}, {3, 2}}) {
            qv::rvring::Context C(q, r);
            auto pr = qv::dualizing::pairing_table(C);
            o.expect(pr.all_multiples, "a pairing value is not a multiple of the product");
            o.expect(pr.diagonal, "pairing table not the identity at q=" + std::to_string(q) +
                                      ", r=" + std::to_string(r));
        }
    });

    // 8. I_V generators lie in the shifted-basis span; dimensions agree.
    criterion(8, "dualizing ideal basis spans the generators", [](Outcome& o) {
        for (int r : {1, 2, 3}) {
            qv::rvring::Context C(2, r);
            const Field& F = Field::get_order(2);
            auto piece = qv::dualizing::iv_piece(C, r + 1);
            for (const auto& gen : qv::dualizing::iv_generators(F, r))
                o.expect(bool(qv::dualizing::iv_membership(C, piece, gen.frac)),
                         "a generator escapes the span at r=" + std::to_string(r));
            for (int n = 0; n <= 5; ++n) {
                auto p = qv::dualizing::iv_piece(C, n);
                o.expect(p.rank == qv::dualizing::iv_dim(C, n),
                         "ideal dimension mismatch at r=" + std::to_string(r) +
                             ", n=" + std::to_string(n));
            }
        }
    });

    // 9. Strange-morphism composites are the q^{r-1} power map.
    criterion(9, "strange morphism composites are the power map", [](Outcome& o) {
        for (auto [q, r, m] : {std::array<int, 3>{2, 2, 1}, {2, 2, 2}, {3, 2, 1},
                               {2, 3, 1}, {2, 3, 2}, {2, 3, 3}})
            o.absorb(qv::suites::run_suite("strange-maps", cfg_of(q, r, m, 5)),
                     "(" + std::to_string(q) + "," + std::to_string(r) + "," +
                         std::to_string(m) + ")");
    });

    // 10. Reciprocal-map brute force equals the strata classification.
    criterion(10, "point counts: brute force equals strata formula", [](Outcome& o) {
        for (auto [q, r, m] : {std::array<int, 3>{2, 2, 1}, {2, 2, 2}})
            o.absorb(qv::suites::run_suite("strata", cfg_of(q, r, m, 5)),
                     "(" + std::to_string(q) + "," + std::to_string(r) + "," +
                         std::to_string(m) + ")");
    });

    // 11. Tangent dimensions: smooth through codimension 1, jumping beyond.
    criterion(11, "singular locus via Jacobian tangent dimensions", [](Outcome& o) {
        for (int m : {2, 3})
            o.absorb(qv::suites::run_suite("singular-locus", cfg_of(2, 3, m, 5)),
                     "m=" + std::to_string(m));
        // The jump is exactly to 3 (affine cone kernel 4) on codim-2 strata.
        qv::modular::KCtx K(2, 3, 2);
        for (const auto& pt : qv::modular::qv_points(K))
            if (qv::modular::stratum_of(K, pt).dim == 1) {
                o.expect(qv::modular::tangent_dim(K, pt) == 3,
                         "codim-2 tangent dimension is not 3");
                o.expect(qv::modular::jacobian_kernel_dim(K, pt) == 4,
                         "codim-2 affine cone kernel is not 4");
            }
    });

    // 12. Compactification charts and stratification.
    criterion(12, "B_V charts, strata, and the F_2 point count", [](Outcome& o) {
        o.absorb(qv::suites::run_suite("charts", cfg_of(2, 3, 2, 5)), "(2,3,2)");
        qv::bvariety::BCtx B(2, 3, 1);
        long long n21 = (long long)(qv::bvariety::bv_points(B).size());
        o.expect(n21 == 21, "|B_V(F_2)| != 21");
        o.expect(qv::bvariety::bv_count_strata(2, 3, 1) == 21, "strata formula != 21");
        long q = 2;
        o.expect((q * q + q + 1) * (q + 1) == 21, "blowup count != 21");
    });

    // 13. pi_Q lands on the stratum of the minimal flag member; charts agree.
    criterion(13, "pi_Q stratum compatibility across charts", [](Outcome& o) {
        for (auto [q, r, m] : {std::array<int, 3>{2, 2, 1}, {2, 2, 2}, {2, 3, 1}, {2, 3, 2}}) {
            qv::bvariety::BCtx B(q, r, m);
            for (const auto& pt : qv::bvariety::bv_points(B)) {
                auto rho = qv::bvariety::pi_Q(B, pt);
                o.expect(qv::modular::stratum_of(B.K(), rho) ==
                             qv::bvariety::stratum_flag(B, pt).members.front(),
                         "stratum of pi_Q is not the minimal flag member");
            }
        }
        qv::bvariety::BCtx B(2, 3, 2);
        for (const auto& pt : qv::bvariety::bv_points(B)) {
            auto rho = qv::bvariety::pi_Q(B, pt);
            for (const auto& F : qv::linalg::all_flags(B.base(), 3))
                if (qv::bvariety::in_UF(B, pt, F))
                    o.expect(qv::bvariety::pi_q_via_flag(B, pt, F) == rho,
                             "pi_Q differs between covering charts");
        }
    });

    // 14. Boundary vanishing orders and the dualizing-ideal minimum.
    criterion(14, "boundary divisor multiplicities", [](Outcome& o) {
        o.absorb(qv::suites::run_suite("boundary-orders", cfg_of(2, 3, 1, 5)), "(2,3)");
        // Codimension-1 divisor: minimal total order over the generators is 2.
        const Field& F = Field::get_order(2);
        auto gens = qv::dualizing::iv_generators(F, 3);
        long best = 1 << 20;
        for (const auto& gen : gens) {
            long total = 0;
            for (const auto& v : gen.vs)
                total += qv::bvariety::boundary_order(F, 3, v, {1, 0, 0}, 2);
            best = std::min(best, total);
        }
        o.expect(best == 2, "minimal total order along the codim-1 divisor is not 2");
    });

    // 15. The cohomology identity in exact integer arithmetic.
    criterion(15, "cohomology identity sum_s a_{r,s} C(r-1+n-s, r-1) = h_r(n)", [](Outcome& o) {
        for (long q : {2L, 3L, 4L})
            for (int r = 1; r <= 5; ++r)
                for (long long n = 0; n <= 20; ++n) {
                    long long lhs = 0;
                    for (int s = 0; s < r; ++s)
                        lhs += qv::rvring::a_rs(r, q, s) *
                               qv::rvring::binom_gen(r - 1 + n - s, r - 1);
                    long long rhs = qv::rvring::hilbert_h(r, q, n);
                    std::ostringstream os;
                    os << "q=" << q << ", r=" << r << ", n=" << n << ": " << lhs
                       << " != " << rhs;
                    o.expect(lhs == rhs, os.str());
                }
    });

    std::printf("acceptance: %d/15 criteria passed\n", g_passed);
    return g_passed == g_total ? 0 : 1;
}
