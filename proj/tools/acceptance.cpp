#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>

#include "chiralis/suites.hpp"

using namespace chiralis;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), s);
    std::fflush(stdout);
}

Poly x0_power(const ChiralKoszul& K, int a) {
    Poly p(1);
    for (int i = 0; i < a; ++i) p = p * K.fock().x(0, 0);
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    std::uint64_t seed = 1;
    for (int i = 1; i + 1 < argc; ++i)
        if (!std::strcmp(argv[i], "--seed")) seed = std::stoull(argv[i + 1]);

    run(1, "FS weight-0 cohomology", [] {
        std::ostringstream d;
        bool ok = true;
        for (int m = 1; m <= 3; ++m) {
            auto t0 = std::chrono::steady_clock::now();
            ChiralKoszul K(m);
            FsResult r = fs_suite(K, 1, 2 * m);
            bool deg0 = true, reps = true;
            for (auto& c : r.report.cells) {
                if (c.weight != 0 || c.dim == 0) continue;
                if (c.degree != 0) deg0 = false;
                if (c.charge >= m || !reduces_to(K, 0, c.charge, 0, c.representatives, {x0_power(K, c.charge)})) reps = false;
            }
            double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            bool okm = r.report.total_dim(0) == m && deg0 && reps && s < 60;
            ok = ok && okm;
            d << "m=" << m << " dim " << r.report.total_dim(0) << (deg0 ? " deg0" : " off-degree") << (reps ? " reps x^a" : " reps?")
              << (m < 3 ? "; " : "");
        }
        return Outcome{ok, d.str()};
    });

    run(2, "D^2 = 0 on the chiral Koszul complex", [] {
        std::ostringstream d;
        bool ok = true;
        for (int m = 1; m <= 3; ++m) {
            long n = 0;
            long bad = fs_d_squared_failures(ChiralKoszul(m), 4, 3 * m, &n);
            ok = ok && bad == 0;
            d << "m=" << m << " " << n << " states " << bad << " bad" << (m < 3 ? "; " : "");
        }
        d << " (weight <= 4, charge <= 3m)";
        return Outcome{ok, d.str()};
    });

    run(3, "Euler characteristic per (weight, charge) line", [] {
        std::ostringstream d;
        bool ok = true;
        long lines = 0;
        for (int m = 1; m <= 3; ++m) {
            FsResult r = fs_suite(ChiralKoszul(m), 2, 3 * m);
            ok = ok && r.euler_consistent;
            lines += static_cast<long>(character_table(r.report).size());
        }
        d << lines << " lines, m=1..3, weight <= 2";
        return Outcome{ok, d.str()};
    });

    run(4, "Borcherds commutator and normal-ordering identities", [seed] {
        BorcherdsConfig c;
        c.seed = seed;
        BorcherdsResult r = borcherds_suite(BgSystem(bg_base(1)), c);
        std::ostringstream d;
        d << r.exhaustive_triples << " exhaustive + " << r.sampled_triples << " sampled triples, " << r.evaluations
          << " evaluations, " << r.failures.size() << " failures";
        return Outcome{r.ok(), d.str()};
    });

    LieStarConfig lc;
    lc.seed = seed;
    LieStarResult lr;
    run(5, "Lie* axioms of the jet tangent algebra", [&] {
        lr = liestar_suite(affine_space(2), lc);
        std::ostringstream d;
        d << lr.axioms.pairs << " pairs, " << lr.axioms.triples << " triples, " << lr.axioms.failures.size() << " failures";
        return Outcome{lr.axioms.ok(), d.str()};
    });
    run(6, "Chevalley d^2 = 0 on random cochains", [&] {
        std::ostringstream d;
        d << lr.cochains << " cochains (arity 1 and 2), " << lr.d2_failures.size() << " failures";
        return Outcome{lr.cochains >= 50 && lr.d2_failures.empty(), d.str()};
    });

    run(7, "L-infinity direct Jacobi vs coderivation square", [seed] {
        auto s = linfty_samples(50, seed);
        int agree = 0, valid_pass = 0, perturbed_fail = 0, valid = 0;
        for (auto& x : s) {
            agree += x.report.paths_agree && x.report.direct.ok() == x.report.coderivation.ok();
            if (!x.candidate.perturbed) {
                ++valid;
                valid_pass += x.report.ok();
            } else {
                perturbed_fail += !x.report.direct.ok();
            }
        }
        std::ostringstream d;
        d << agree << "/50 agree; " << valid_pass << "/" << valid << " valid pass, " << perturbed_fail << "/" << 50 - valid
          << " perturbed fail";
        return Outcome{agree == 50, d.str()};
    });

    run(8, "Picard-Lie torsor over Q[x, xi], D(xi) = x^2", [] {
        SuperPolyAlgebra A = fs_base(2);
        PicardLie P(A, 4);
        auto s = solve_closed_forms(A, 2, 3, 2);
        auto f = essential_form_family(A, s);
        if (!f) return Outcome{false, "no closed family with an essential top component"};
        auto w = P.window(1);
        auto full = generalized_jacobi_check(picard_lie_twist(P, *f), w, 3);
        TotalForm cut = *f;
        cut.comp.erase(std::prev(cut.comp.end()));
        auto part = generalized_jacobi_check(picard_lie_twist(P, cut), w, 3);
        TotalForm beta{1, {}};
        beta.set(1, A.var(0) * A.var(1) * A.dx(1));
        beta.set(2, A.var(0) * A.dx(0) * A.dx(1));
        auto conj = picard_lie_morphism_conjugate(P, beta, w, 3);
        std::ostringstream d;
        d << "family passes " << (full.ok() && full.paths_agree ? "yes" : "no") << ", without top component "
          << (part.ok() ? "passes" : "fails") << ", conjugation residual " << conj.failures.size() << "/" << conj.words
          << " words off";
        return Outcome{full.ok() && full.paths_agree && !part.ok() && conj.ok(), d.str()};
    });

    std::vector<std::pair<ChiralAlgebroid, ChiralAlgebroid>> accepted;
    run(9, "Graded chiral algebroid twists by 3-forms", [&] {
        SuperPolyAlgebra A3 = affine_space(3);
        ChiralAlgebroid L3 = standard_chiral_algebroid(A3);
        Poly vol = A3.dx(0) * A3.dx(1) * A3.dx(2);
        ChiralAlgebroid T3 = twist_chiral(L3, graded_form_functor(L3.tangent(), vol));
        bool vol_ok = algebroid_jacobi(T3, {1, 1}).ok();
        accepted.push_back({L3, T3});

        SuperPolyAlgebra A4 = affine_space(4);
        ChiralAlgebroid L4 = standard_chiral_algebroid(A4);
        Poly vol4 = A4.dx(0) * A4.dx(1) * A4.dx(2);
        Poly x1vol = A4.var(0) * vol4, x4vol = A4.var(3) * vol4;
        auto r1 = algebroid_jacobi(twist_chiral(L4, graded_form_cochain(L4.tangent(), x1vol)), {1, 1});
        auto r4 = algebroid_jacobi(twist_chiral(L4, graded_form_cochain(L4.tangent(), x4vol)), {1, 1});
        std::ostringstream d;
        d << "vol " << (vol_ok ? "passes" : "fails") << "; x1*vol (d = " << (A4.derham_d(x1vol).is_zero() ? "0" : "nonzero")
          << ") " << (r1.ok() ? "passes: closed, so no failing witness exists" : "fails") << "; x4*vol "
          << (r4.ok() ? "passes" : "fails");
        if (!r4.ok()) d << " [" << r4.failures[0].kind << " -> " << L4.fock().format(r4.failures[0].residual) << "]";
        return Outcome{vol_ok && !r1.ok(), d.str()};
    });

    std::vector<std::pair<ChiralInfty, ChiralInfty>> accepted_infty;
    run(10, "Chiral infinity-algebroid twist over the FS base, m = 2", [&] {
        ChiralInfty P = standard_chiral_infty(fs_base(2), 3);
        const BgSystem& V = P.fock();
        auto small = small_infty_window(V);
        FamilySolve s = solve_closed_families(P, FamilyAnsatz{}, small, 3);
        auto f = essential_family(P, s, small, 3);
        if (!f) return Outcome{false, "no closed family with an essential arity-3 component"};
        auto window = infty_window(V, 2, 3);
        ChiralInfty T = chiral_infty_twist(P, *f);
        auto r = liestar_infty_jacobi(T.structure(), window, 3, 1);
        TwistFamily cut = *f;
        cut.erase(std::prev(cut.end()));
        auto rc = liestar_infty_jacobi(chiral_infty_twist(P, cut).structure(), window, 3, 1);
        // additivity: twisting twice equals twisting by the sum
        const TwistFamily* other = nullptr;
        for (auto& k : s.kernel)
            if (!(k == *f)) {
                other = &k;
                break;
            }
        bool add = false, sum_ok = false;
        if (other) {
            TwistFamily sum = *f;
            for (auto& [n, c] : *other) sum[n] = sum.count(n) ? sum[n] + c : c;
            ChiralInfty twice = chiral_infty_twist(T, *other), once = chiral_infty_twist(P, sum);
            add = twice.twist() == once.twist();
            sum_ok = liestar_infty_jacobi(once.structure(), small, 3, 1).ok();
            accepted_infty.push_back({P, twice});
        }
        accepted_infty.push_back({P, T});
        std::ostringstream d;
        d << window.size() << " states, " << r.tuples << " tuples: family " << (r.ok() ? "passes" : "fails")
          << ", non-closed truncation " << (rc.ok() ? "passes" : "fails at k=" + std::to_string(rc.first_failing_k()))
          << ", additivity " << (add && sum_ok ? "holds" : "broken");
        return Outcome{r.ok() && !rc.ok() && add && sum_ok, d.str()};
    });

    run(11, "Module structure unchanged by accepted twists", [&] {
        bool ok = !accepted.empty() && !accepted_infty.empty();
        for (auto& [L, T] : accepted) ok = ok && module_unchanged(L, T);
        SuperPolyAlgebra A = affine_space(3);
        ChiralAlgebroid L = standard_chiral_algebroid(A);
        Poly b = A.dx(0) * A.dx(1) + A.var(2) * A.dx(0) * A.dx(2);
        ChiralAlgebroid F = filtered_twist(L, A.dx(0) * A.dx(1) * A.dx(2), b);
        ok = ok && algebroid_jacobi(F, {1, 1}).ok() && module_unchanged(L, F);
        for (auto& [P, T] : accepted_infty) ok = ok && T.module() == P.module();
        std::ostringstream d;
        d << accepted.size() + 1 << " algebroid twists, " << accepted_infty.size() << " infinity twists compared entrywise";
        return Outcome{ok, d.str()};
    });

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
