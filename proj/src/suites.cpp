#include "qv/suites.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qv/bvariety.hpp"
#include "qv/dualizing.hpp"
#include "qv/gfq.hpp"
#include "qv/invariants.hpp"
#include "qv/linalg.hpp"
#include "qv/modular.hpp"
#include "qv/ratfun.hpp"
#include "qv/rvring.hpp"

namespace qv::suites {

using gfq::Elt;
using gfq::Field;
using linalg::Subspace;
using linalg::VecF;

namespace {

long long ipow_ll(long long b, int e) {
    long long out = 1;
    for (int i = 0; i < e; ++i) {
        if (out > (1LL << 40)) return 1LL << 40;  // saturate: only compared to caps
        out *= b;
    }
    return out;
}

std::string vec_str(const VecF& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

std::string elts_str(const std::vector<Elt>& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

// Accumulates elementary checks; keeps the first failure as the witness.
struct Runner {
    Result res;

    explicit Runner(std::string name) { res.suite = std::move(name); }

    template <class W>
    bool check(bool ok, W&& witness) {
        ++res.checks;
        if (!ok && res.pass) {
            res.pass = false;
            res.witness = witness();
        }
        return ok;
    }

    void note(const std::string& s) { res.notes.push_back(s); }

    // An infeasible configuration is a failure, not a vacuous pass.
    void infeasible(const std::string& what) {
        if (res.pass) {
            res.pass = false;
            res.witness = "infeasible under caps: " + what;
        }
    }
};

bool advance_codes(std::vector<Elt>& t, long long qm) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        if ((long long)(t[i]) + 1 < qm) {
            ++t[i];
            return true;
        }
        t[i] = 0;
    }
    return false;
}

// ---------------------------------------------------------------------------

void suite_relations(const Config& cfg, Runner& R) {
    if (ipow_ll(cfg.q, cfg.r) - 1 > cfg.caps.points) {
        R.infeasible("|V - 0| exceeds the point cap");
        return;
    }
    rvring::Context C(cfg.q, cfg.r);
    auto rep = rvring::relation_residues(C);
    for (std::size_t i = 0; i < rep.family1.size(); ++i)
        R.check(rep.family1[i].is_zero(), [&] {
            std::ostringstream os;
            os << "scaling relation residue #" << i << " is nonzero (expected the zero fraction)";
            return os.str();
        });
    for (std::size_t i = 0; i < rep.family2.size(); ++i)
        R.check(rep.family2[i].is_zero(), [&] {
            std::ostringstream os;
            os << "reciprocity relation residue #" << i
               << " is nonzero (expected the zero fraction)";
            return os.str();
        });
    R.note("relation residues: " + std::to_string(rep.family1.size()) + " scaling + " +
           std::to_string(rep.family2.size()) + " reciprocity");
}

void suite_freeness(const Config& cfg, Runner& R) {
    if (ipow_ll(cfg.q, cfg.r) - 1 > cfg.caps.points) {
        R.infeasible("|V - 0| exceeds the point cap");
        return;
    }
    rvring::Context C(cfg.q, cfg.r);
    long long basis = 1;
    for (int i = 2; i <= cfg.r; ++i) basis *= ipow_ll(cfg.q, i - 1);
    R.check((long long)(rvring::delta_products(C).size()) == basis, [&] {
        std::ostringstream os;
        os << "module basis size " << rvring::delta_products(C).size() << " != q^(r(r-1)/2) = "
           << basis;
        return os.str();
    });
    long long n_max = cfg.n_hi;
    while (n_max > 0 && rvring::hilbert_h(cfg.r, cfg.q, n_max) > cfg.caps.graded) --n_max;
    if (n_max < cfg.n_hi)
        R.note("degree range clipped to n <= " + std::to_string(n_max) +
               " by the graded-dimension cap");
    for (const auto& row : rvring::freeness_check(C, int(n_max)))
        R.check(row.ok, [&] {
            std::ostringstream os;
            os << "degree -" << row.n << ": " << row.count << " products of rank " << row.rank
               << ", expected h_r(n) = " << row.h;
            return os.str();
        });
}

void suite_invariants(const Config& cfg, Runner& R) {
    const Field& F = Field::get_order(cfg.q);
    long long glo = linalg::gl_order(cfg.r, cfg.q);
    if (glo > cfg.caps.group) {
        R.infeasible("|GL_r(F_q)| = " + std::to_string(glo) + " exceeds the group cap");
        return;
    }
    if (ipow_ll(cfg.q, cfg.r) - 1 > cfg.caps.points) {
        R.infeasible("|V - 0| exceeds the point cap");
        return;
    }
    auto G = linalg::gl_group(F, cfg.r);
    auto subs = linalg::p_subgroups(F, G, F.p());
    R.note("unipotent subgroups of GL_" + std::to_string(cfg.r) + "(F_" +
           std::to_string(cfg.q) + "): " + std::to_string(subs.size()));
    rvring::Context C(cfg.q, cfg.r);
    std::vector<invariants::UnipotentFormulaData> data;
    data.reserve(subs.size());
    for (const auto& H : subs) data.push_back(invariants::unipotent_formula_data(F, cfg.r, H));
    long long n_max = cfg.n_hi;
    while (n_max > 0 && rvring::hilbert_h(cfg.r, cfg.q, n_max) > cfg.caps.graded) --n_max;
    if (n_max < cfg.n_hi)
        R.note("degree range clipped to n <= " + std::to_string(n_max) +
               " by the graded-dimension cap");
    for (long long n = std::max<long long>(0, cfg.n_lo); n <= n_max; ++n) {
        invariants::ActionCache cache(C, int(n));
        for (std::size_t i = 0; i < subs.size(); ++i) {
            long long brute = invariants::invariant_dim_bruteforce(C, subs[i], int(n), &cache);
            long long formula = invariants::unipotent_dim_eval(data[i], n);
            R.check(brute == formula, [&] {
                std::ostringstream os;
                os << "subgroup #" << i << " (order " << subs[i].order() << "), n = " << n
                   << ": brute-force fixed dim " << brute << " != formula " << formula;
                return os.str();
            });
        }
    }
}

void suite_dickson(const Config& cfg, Runner& R) {
    const Field& F = Field::get_order(cfg.q);
    if (ipow_ll(cfg.q, cfg.r) - 1 > cfg.caps.points) {
        R.infeasible("|V - 0| exceeds the point cap");
        return;
    }
    auto D = invariants::dickson(F, cfg.r);

    // (i) fixedness under the appropriate generators.
    for (const auto& g : linalg::gl_generators(F, cfg.r))
        for (std::size_t i = 0; i < D.k.size(); ++i)
            R.check(ratfun::p_act(F, g, D.k[i]) == D.k[i], [&] {
                return "k_" + std::to_string(i) + " is not GL-invariant";
            });
    for (const auto& g : linalg::u_generators(F, cfg.r))
        for (std::size_t i = 0; i < D.g.size(); ++i)
            R.check(ratfun::p_act(F, g, D.g[i]) == D.g[i], [&] {
                return "g_" + std::to_string(i + 1) + " is not U-invariant";
            });
    for (const auto& g : linalg::sl_generators(F, cfg.r))
        R.check(ratfun::p_act(F, g, D.kp0) == D.kp0, [&] {
            return std::string("k'_0 is not SL-invariant");
        });
    for (const auto& g : linalg::gl_generators(F, cfg.r)) {
        auto img = ratfun::p_act(F, g, D.kp0);
        bool prop = false;
        for (Elt c = 1; c < Elt(cfg.q); ++c)
            if (ratfun::p_mul(F, ratfun::MPoly::constant(cfg.r, c), D.kp0) == img) prop = true;
        R.check(prop, [&] { return std::string("GL does not scale k'_0 by a constant"); });
    }
    {  // the recorded (k'_0)^{q-1} = c * k_0 relation
        ratfun::MPoly pw = ratfun::MPoly::constant(cfg.r, F.one());
        for (long t = 0; t < cfg.q - 1; ++t) pw = ratfun::p_mul(F, pw, D.kp0);
        auto rhs = ratfun::p_mul(F, ratfun::MPoly::constant(cfg.r, D.kp0_relation), D.k[0]);
        R.check(pw == rhs,
                [&] { return std::string("(k'_0)^(q-1) != recorded constant times k_0"); });
    }

    // (ii) the h(T) coefficient identity.
    rvring::Context C(cfg.q, cfg.r);
    auto HI = invariants::h_invariants(C, true);
    long long qr = ipow_ll(cfg.q, cfg.r);
    R.check((long long)(HI.hT.size()) == qr,
            [&] { return std::string("h(T) has the wrong degree"); });
    std::vector<int> special(std::size_t(qr), -1);
    long long qi = 1;
    for (int i = 1; i <= cfg.r; ++i) {
        qi *= cfg.q;
        special[std::size_t(qr - qi)] = i;  // coefficient of T^{q^r - q^i} is h_i
    }
    for (long long j = 0; j < qr; ++j) {
        const auto& cj = HI.hT[std::size_t(j)];
        if (j == qr - 1) {
            R.check(cj == ratfun::LinFrac::constant(cfg.r, F.one()),
                    [&] { return std::string("top coefficient of h(T) is not 1"); });
        } else if (special[std::size_t(j)] > 0) {
            int i = special[std::size_t(j)];
            R.check(cj == HI.h[std::size_t(i) - 1], [&] {
                std::ostringstream os;
                os << "coefficient of T^" << j << " differs from h_" << i;
                return os.str();
            });
        } else {
            R.check(cj.is_zero(), [&] {
                std::ostringstream os;
                os << "coefficient of T^" << j << " should vanish";
                return os.str();
            });
        }
    }

    // (iii) free-generator monomial counts match brute-force invariant dims.
    long long n_max = cfg.n_hi;
    while (n_max > 0 && rvring::hilbert_h(cfg.r, cfg.q, n_max) > cfg.caps.graded) --n_max;
    bool gl_ok = linalg::gl_order(cfg.r, cfg.q) <= cfg.caps.group;
    if (!gl_ok) R.note("GL/SL graded comparison skipped: group order exceeds the cap");
    for (auto which : {invariants::InvWhich::U, invariants::InvWhich::G,
                       invariants::InvWhich::Gprime}) {
        if (which != invariants::InvWhich::U && !gl_ok) continue;
        for (const auto& row : invariants::invariant_hilbert_check(C, which, int(n_max)))
            R.check(row.ok, [&] {
                std::ostringstream os;
                os << "invariant dims at n = " << row.n << ": brute " << row.brute
                   << " != generator-monomial count " << row.predicted;
                return os.str();
            });
    }
}

void suite_dualizing(const Config& cfg, Runner& R) {
    if (ipow_ll(cfg.q, cfg.r) - 1 > cfg.caps.points) {
        R.infeasible("|V - 0| exceeds the point cap");
        return;
    }
    const Field& F = Field::get_order(cfg.q);
    rvring::Context C(cfg.q, cfg.r);

    auto pr = dualizing::pairing_table(C);
    R.check(pr.all_multiples,
            [&] { return std::string("an N_r pairing value is not a multiple of f_1^2...f_r^2"); });
    R.check(pr.diagonal, [&] { return std::string("the N_r pairing table is not the identity"); });
    auto mr = dualizing::mr_orthogonality(C);
    R.check(mr.all_multiples,
            [&] { return std::string("an M_r pairing value is not a multiple of f_r^2"); });
    R.check(mr.diagonal, [&] { return std::string("the M_r pairing table is not diagonal"); });

    auto gens = dualizing::iv_generators(F, cfg.r);
    auto piece = dualizing::iv_piece(C, cfg.r + 1);
    for (std::size_t i = 0; i < gens.size(); ++i)
        R.check(bool(dualizing::iv_membership(C, piece, gens[i].frac)), [&] {
            std::ostringstream os;
            os << "ideal generator #" << i << " [" << vec_str(gens[i].vs[0]) << ", ...]"
               << " is outside the span of the shifted basis";
            return os.str();
        });
    R.note("ideal generators checked: " + std::to_string(gens.size()));

    long long n_max = cfg.n_hi;
    while (n_max > 0 && rvring::hilbert_h(cfg.r, cfg.q, n_max) > cfg.caps.graded) --n_max;
    for (long long n = std::max<long long>(0, cfg.n_lo); n <= n_max; ++n) {
        auto p = dualizing::iv_piece(C, int(n));  // certifies rank == iv_dim internally
        R.check(p.rank == dualizing::iv_dim(C, int(n)), [&] {
            std::ostringstream os;
            os << "ideal dimension mismatch at degree -" << n;
            return os.str();
        });
    }
}

void suite_strange_maps(const Config& cfg, Runner& R) {
    modular::KCtx K(cfg.q, cfg.r, cfg.m);
    const Field& E = K.ext();
    long long qm = ipow_ll(cfg.q, cfg.m);

    // g(f(lambda)) is the q^{r-1} power map, over every linear map when the
    // space fits under the brute cap, otherwise over seeded samples.
    long long lam_space = ipow_ll(qm, cfg.r);
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::vector<Elt>> lams;
    if (lam_space <= cfg.caps.brute) {
        std::vector<Elt> t(std::size_t(cfg.r), 0);
        do {
            lams.push_back(t);
        } while (advance_codes(t, qm));
    } else {
        R.note("g(f(.)) sampled (full space " + std::to_string(lam_space) + " exceeds the cap)");
        std::uniform_int_distribution<long long> dist(0, qm - 1);
        for (int s = 0; s < 500; ++s) {
            std::vector<Elt> t(std::size_t(cfg.r));
            for (auto& x : t) x = Elt(dist(rng));
            lams.push_back(t);
        }
    }
    for (const auto& images : lams) {
        modular::LinMap lam{images};
        modular::LinMap back = modular::g_map(K, modular::f_map(K, lam));
        for (int i = 0; i < cfg.r; ++i)
            R.check(back.images[std::size_t(i)] ==
                        E.frobenius(lam.images[std::size_t(i)], cfg.r - 1, cfg.q),
                    [&] {
                        std::ostringstream os;
                        os << "g(f(lambda)) != lambda^(q^(r-1)) at lambda = " << elts_str(images)
                           << ", component " << i + 1;
                        return os.str();
                    });
    }

    // f(g(rho)) is the q^{r-1} power map on Q-points (canonical + a seeded
    // rescaling of each).
    if (modular::qv_count_formula(cfg.q, cfg.r, cfg.m) > cfg.caps.points) {
        R.note("f(g(.)) on Q-points skipped: point count exceeds the cap");
    } else {
        std::uniform_int_distribution<long long> unit(1, E.q() - 1);
        for (const auto& pt : modular::qv_points(K)) {
            modular::RecMap scaled = pt;
            Elt c = Elt(unit(rng));
            for (auto& v : scaled.values) v = E.mul(v, c);
            for (const auto& rho : {pt, scaled}) {
                modular::RecMap back = modular::f_map(K, modular::g_map(K, rho));
                for (std::size_t i = 0; i < rho.values.size(); ++i)
                    R.check(back.values[i] == E.frobenius(rho.values[i], cfg.r - 1, cfg.q), [&] {
                        std::ostringstream os;
                        os << "f(g(rho)) != rho^(q^(r-1)) at rho = " << elts_str(rho.values)
                           << ", representative #" << i;
                        return os.str();
                    });
            }
        }
    }

    // Both compatibility squares with every proper nonzero subspace.
    for (const auto& sub : linalg::all_nonzero_subspaces(K.base(), cfg.r)) {
        if (sub.dim == cfg.r) continue;
        auto rep = modular::gf_compat_check(K, sub, 500, cfg.seed);
        R.check(rep.g_ok, [&] {
            return "g-compatibility fails for the subspace with basis row " +
                   vec_str(sub.basis_row(0));
        });
        R.check(rep.f_ok, [&] {
            return "f-compatibility fails for the subspace with basis row " +
                   vec_str(sub.basis_row(0));
        });
        R.res.checks += rep.g_checked + rep.f_checked - 2;
    }
}

void suite_strata(const Config& cfg, Runner& R) {
    modular::KCtx K(cfg.q, cfg.r, cfg.m);
    long long formula = modular::qv_count_formula(cfg.q, cfg.r, cfg.m);
    if (formula > cfg.caps.points) {
        R.infeasible("|Q_V(k)| = " + std::to_string(formula) + " exceeds the point cap");
        return;
    }
    auto pts = modular::qv_points(K);
    R.check((long long)(pts.size()) == formula, [&] {
        std::ostringstream os;
        os << "classification enumerates " << pts.size() << " points, formula gives " << formula;
        return os.str();
    });
    for (const auto& pt : pts)
        R.check(modular::is_reciprocal(K, pt),
                [&] { return "enumerated point " + elts_str(pt.values) + " is not reciprocal"; });

    // Per-stratum counts; unique classification makes overlap impossible, and
    // the totals must still agree.
    std::map<Subspace, long long> by_stratum;
    for (const auto& pt : pts) ++by_stratum[modular::stratum_of(K, pt)];
    long long qm = ipow_ll(cfg.q, cfg.m);
    long long total = 0;
    for (const auto& sub : linalg::all_nonzero_subspaces(K.base(), cfg.r)) {
        long long expect = 1;
        long long qi = 1;
        for (int i = 1; i < sub.dim; ++i) {
            qi *= cfg.q;
            expect *= qm - qi;
        }
        auto it = by_stratum.find(sub);
        long long got = it == by_stratum.end() ? 0 : it->second;
        R.check(got == expect, [&] {
            std::ostringstream os;
            os << "stratum of the subspace with basis row " << vec_str(sub.basis_row(0))
               << " has " << got << " points, expected " << expect;
            return os.str();
        });
        total += got;
    }
    R.check(total == formula,
            [&] { return std::string("strata do not partition the point set"); });

    // Full function-space brute force when it fits: every scaling-respecting
    // assignment of values, filtered by the reciprocity identity.
    long long reps = (long long)(K.reps().size());
    long long space = ipow_ll(qm, int(reps));
    if (space > cfg.caps.brute) {
        R.note("function-space brute force skipped (size " + std::to_string(space) +
               " exceeds the cap)");
        return;
    }
    std::vector<modular::RecMap> brute;
    std::vector<Elt> t(std::size_t(reps), 0);
    do {
        modular::RecMap rho{t};
        bool zero = std::all_of(t.begin(), t.end(), [](Elt x) { return x == 0; });
        if (zero || !modular::is_reciprocal(K, rho)) continue;
        if (modular::canonical_scaling(K, rho) == rho) brute.push_back(rho);
    } while (advance_codes(t, qm));
    std::sort(brute.begin(), brute.end());
    R.check(brute == pts, [&] {
        std::ostringstream os;
        os << "brute force over all " << space << " assignments finds " << brute.size()
           << " points, classification finds " << pts.size();
        return os.str();
    });
    R.note("function-space brute force over " + std::to_string(space) + " assignments");
}

void suite_charts(const Config& cfg, Runner& R) {
    long long total = bvariety::bv_count_strata(cfg.q, cfg.r, cfg.m);
    if (total > cfg.caps.points) {
        R.infeasible("|B_V(k)| = " + std::to_string(total) + " exceeds the point cap");
        return;
    }
    long long qm = ipow_ll(cfg.q, cfg.m);
    if (ipow_ll(qm, cfg.r - 1) > cfg.caps.brute) {
        R.infeasible("chart tuple space exceeds the brute-force cap");
        return;
    }
    bvariety::BCtx B(cfg.q, cfg.r, cfg.m);
    auto pts = bvariety::bv_points(B);
    R.check((long long)(pts.size()) == total, [&] {
        std::ostringstream os;
        os << "enumeration finds " << pts.size() << " points, strata formula gives " << total;
        return os.str();
    });

    // Each complete-flag chart: exhaustive roundtrips, and the chart image
    // is exactly the locus where the open predicate holds.
    auto cflags = linalg::complete_flags(B.base(), cfg.r);
    for (std::size_t fi = 0; fi < cflags.size(); ++fi) {
        const auto& F = cflags[fi];
        long long valid = 0;
        std::vector<Elt> a(std::size_t(cfg.r) - 1, 0);
        do {
            auto pt = bvariety::chart_to_point(B, F, a);
            if (!pt) continue;
            ++valid;
            R.check(bvariety::in_UF(B, *pt, F), [&] {
                return "chart image at a = " + elts_str(a) + " is outside U_F (flag #" +
                       std::to_string(fi) + ")";
            });
            auto back = bvariety::chart_from_point(B, *pt, F);
            R.check(back && *back == a, [&] {
                return "chart roundtrip fails at a = " + elts_str(a) + " (flag #" +
                       std::to_string(fi) + ")";
            });
        } while (advance_codes(a, qm));
        long long in_chart = 0;
        for (const auto& pt : pts)
            if (bvariety::in_UF(B, pt, F)) ++in_chart;
        R.check(valid == in_chart, [&] {
            std::ostringstream os;
            os << "chart #" << fi << " has " << valid << " valid tuples but " << in_chart
               << " points satisfy the open predicate";
            return os.str();
        });
    }

    // Stratum flags agree with predicate evaluation on every point, and the
    // complete-flag charts cover everything.
    auto flags = linalg::all_flags(B.base(), cfg.r);
    for (const auto& pt : pts) {
        auto Fpt = bvariety::stratum_flag(B, pt);
        bool covered = false;
        for (const auto& F : flags) {
            bool bf = bvariety::in_BF(B, pt, F);
            bool uf = bvariety::in_UF(B, pt, F);
            R.check((bf && uf) == (F == Fpt), [&] {
                return std::string("stratum-flag predicates disagree with stratum_flag");
            });
            if (uf && int(F.members.size()) == cfg.r) covered = true;
        }
        R.check(covered, [&] { return std::string("a point is outside every complete chart"); });
    }
}

void suite_singular_locus(const Config& cfg, Runner& R) {
    modular::KCtx K(cfg.q, cfg.r, cfg.m);
    long long formula = modular::qv_count_formula(cfg.q, cfg.r, cfg.m);
    if (formula > cfg.caps.points) {
        R.infeasible("|Q_V(k)| = " + std::to_string(formula) + " exceeds the point cap");
        return;
    }
    std::map<int, std::set<long long>> seen;  // stratum codimension -> tangent dims
    for (const auto& pt : modular::qv_points(K)) {
        int codim = cfg.r - modular::stratum_of(K, pt).dim;
        long long td = modular::tangent_dim(K, pt);
        seen[codim].insert(td);
        if (codim <= 1) {
            R.check(td == cfg.r - 1, [&] {
                std::ostringstream os;
                os << "point " << elts_str(pt.values) << " on a codim-" << codim
                   << " stratum has tangent dim " << td << ", expected " << cfg.r - 1;
                return os.str();
            });
        } else {
            R.check(td >= cfg.r, [&] {
                std::ostringstream os;
                os << "point " << elts_str(pt.values) << " on a codim-" << codim
                   << " stratum has tangent dim " << td << " < r = " << cfg.r;
                return os.str();
            });
        }
    }
    for (const auto& [codim, dims] : seen) {
        std::ostringstream os;
        os << "codim " << codim << " tangent dims observed:";
        for (long long d : dims) os << " " << d << " (affine cone kernel " << d + 1 << ")";
        R.note(os.str());
    }
}

void suite_cohomology_identity(const Config& cfg, Runner& R) {
    for (long long n = std::max<long long>(0, cfg.n_lo); n <= cfg.n_hi; ++n) {
        long long lhs = 0;
        for (int s = 0; s < cfg.r; ++s)
            lhs += rvring::a_rs(cfg.r, cfg.q, s) *
                   rvring::binom_gen(cfg.r - 1 + n - s, cfg.r - 1);
        long long rhs = rvring::hilbert_h(cfg.r, cfg.q, n);
        R.check(lhs == rhs, [&] {
            std::ostringstream os;
            os << "n = " << n << ": sum_s a_{r,s} C(r-1+n-s, r-1) = " << lhs << " but h_r(n) = "
               << rhs;
            return os.str();
        });
    }
}

void suite_boundary_orders(const Config& cfg, Runner& R) {
    if (ipow_ll(cfg.q, cfg.r) - 1 > cfg.caps.points) {
        R.infeasible("|V - 0| exceeds the point cap");
        return;
    }
    if (cfg.r < 2) {
        R.infeasible("boundary divisors need r >= 2");
        return;
    }
    const Field& F = Field::get_order(cfg.q);
    VecF ref(std::size_t(cfg.r), 0);
    ref[0] = F.one();
    long long qr = ipow_ll(cfg.q, cfg.r);
    for (int j = 1; j < cfg.r; ++j) {
        Subspace Vj = linalg::standard_subspace(F, cfg.r, j);
        for (long long code = 1; code < qr; ++code) {
            VecF v = linalg::vec_of_code(F, cfg.r, std::uint64_t(code));
            long expect = Vj.contains(F, v) ? 0 : 1;
            long got = bvariety::boundary_order(F, cfg.r, v, ref, j);
            R.check(got == expect, [&] {
                std::ostringstream os;
                os << "ord along divisor " << j << " at v = " << vec_str(v) << ": got " << got
                   << ", membership predicts " << expect;
                return os.str();
            });
        }
    }
    // Minimal total vanishing order of the dualizing-ideal generators along
    // divisor j is r + 1 - j (at most j of the vectors can lie inside V_j).
    auto gens = dualizing::iv_generators(F, cfg.r);
    for (int j = 1; j < cfg.r; ++j) {
        long best = 1 << 20;
        for (const auto& gen : gens) {
            long totalo = 0;
            for (const auto& v : gen.vs) totalo += bvariety::boundary_order(F, cfg.r, v, ref, j);
            R.check(totalo >= cfg.r + 1 - j, [&] {
                std::ostringstream os;
                os << "a generator vanishes to total order " << totalo << " < " << cfg.r + 1 - j
                   << " along divisor " << j;
                return os.str();
            });
            best = std::min(best, totalo);
        }
        R.check(best == cfg.r + 1 - j, [&] {
            std::ostringstream os;
            os << "minimal total order along divisor " << j << " is " << best << ", expected "
               << cfg.r + 1 - j;
            return os.str();
        });
    }
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "relations",      "freeness", "invariants",     "dickson",
        "dualizing",      "strange-maps", "strata",     "charts",
        "singular-locus", "cohomology-identity",        "boundary-orders"};
    return names;
}

Result run_suite(const std::string& name, const Config& cfg) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw std::invalid_argument("unknown suite: " + name);
    Runner R(name);
    try {
        if (name == "relations") suite_relations(cfg, R);
        else if (name == "freeness") suite_freeness(cfg, R);
        else if (name == "invariants") suite_invariants(cfg, R);
        else if (name == "dickson") suite_dickson(cfg, R);
        else if (name == "dualizing") suite_dualizing(cfg, R);
        else if (name == "strange-maps") suite_strange_maps(cfg, R);
        else if (name == "strata") suite_strata(cfg, R);
        else if (name == "charts") suite_charts(cfg, R);
        else if (name == "singular-locus") suite_singular_locus(cfg, R);
        else if (name == "cohomology-identity") suite_cohomology_identity(cfg, R);
        else if (name == "boundary-orders") suite_boundary_orders(cfg, R);
    } catch (const std::exception& e) {
        R.res.pass = false;
        if (R.res.witness.empty()) R.res.witness = std::string("exception: ") + e.what();
    }
    if (R.res.pass && R.res.checks == 0) {
        R.res.pass = false;
        R.res.witness = "no checks were performed";
    }
    return R.res;
}

}  // namespace qv::suites
