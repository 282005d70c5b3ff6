#include <gtest/gtest.h>

#include <random>

#include "chiralis/suites.hpp"

using namespace chiralis;

namespace {

std::vector<int> all_ids(int n) {
    std::vector<int> w(n);
    for (int i = 0; i < n; ++i) w[i] = i;
    return w;
}

LInftyStructure lie_algebra(const std::map<std::vector<int>, Elem>& seed, int dim) {
    GradedSpace V{std::vector<int>(dim, 0), {}};
    for (int i = 0; i < dim; ++i) V.names.push_back("e" + std::to_string(i + 1));
    std::vector<MapTable> t(3);
    t[2] = antisymmetric_table([V](int b) { return V.parity(b); }, 2, seed);
    return table_structure(V, t, 3);
}

TotalForm fs_family() {
    SuperPolyAlgebra A = fs_base(2);
    Poly x = A.var(0), xi = A.var(1), dx = A.dx(0), dxi = A.dx(1);
    TotalForm a{2, {}};
    a.set(2, x * xi * dx * dxi * Scalar(-4) + x * x * dxi * dxi);
    a.set(3, dxi * dxi * dxi);
    return a;
}

}  // namespace

TEST(Combinatorics, SetPartitionsAreBellNumbers) {
    std::vector<long> bell{1, 1, 2, 5, 15, 52, 203};
    for (int n = 0; n < 7; ++n) {
        long c = 0;
        set_partitions(n, [&](const std::vector<std::vector<int>>& b) {
            ++c;
            for (size_t i = 1; i < b.size(); ++i) EXPECT_LT(b[i - 1][0], b[i][0]);
        });
        EXPECT_EQ(c, bell[n]);
    }
}

TEST(Jacobi, HandBuiltLieAlgebras) {
    // sl2: [h,e] = 2e, [h,f] = -2f, [e,f] = h with e=0, f=1, h=2
    auto sl2 = lie_algebra({{{2, 0}, Elem{{0, 2}}}, {{2, 1}, Elem{{1, -2}}}, {{0, 1}, Elem{{2, 1}}}}, 3);
    auto r = generalized_jacobi_check(sl2, all_ids(3), 3);
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(r.paths_agree);
    // [e1,e2] = e2, [e1,e3] = e3, [e2,e3] = e1: Jacobi defect -2 e1
    auto bad = lie_algebra({{{0, 1}, Elem{{1, 1}}}, {{0, 2}, Elem{{2, 1}}}, {{1, 2}, Elem{{0, 1}}}}, 3);
    auto rb = generalized_jacobi_check(bad, all_ids(3), 3);
    EXPECT_FALSE(rb.direct.ok());
    EXPECT_FALSE(rb.coderivation.ok());
    EXPECT_TRUE(rb.paths_agree);
    Elem v = jacobi_value(bad, {0, 1, 2});
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v.begin()->first, 0);
    EXPECT_EQ(abs(v.begin()->second), 2);
}

TEST(Jacobi, DifferentialOnly) {
    // u in degree -1, v in degree 0, l1(u) = v
    GradedSpace V{{-1, 0}, {"u", "v"}};
    std::vector<MapTable> t(2);
    t[1][{0}] = Elem{{1, 1}};
    auto ok = generalized_jacobi_check(table_structure(V, t, 2), all_ids(2), 3);
    EXPECT_TRUE(ok.ok());
    t[1][{1}] = Elem{{0, 1}};  // l1 . l1 != 0
    auto bad = generalized_jacobi_check(table_structure(V, t, 2), all_ids(2), 2);
    EXPECT_FALSE(bad.ok());
    EXPECT_TRUE(bad.paths_agree);
}

TEST(Jacobi, DecalageRoundTrip) {
    GradedSpace V = sl2_line_space();
    std::mt19937_64 rng(1);
    auto c = random_sl2_line_candidate(rng, false);
    auto L = table_structure(V, c.tables, 3);
    for (int n = 2; n <= 3; ++n) {
        BasisMap f = L.op(n);
        ASSERT_TRUE(f);
        BasisMap back = undecalage(decalage(f, L.parity), L.parity);
        for (auto& x : basis_tuples(all_ids(4), n)) EXPECT_EQ(back(x), f(x));
    }
}

TEST(Jacobi, SampledStructuresAgree) {
    auto s = linfty_samples(20, 5);
    for (auto& x : s) {
        EXPECT_TRUE(x.report.paths_agree) << x.candidate.note;
        EXPECT_EQ(x.report.ok(), !x.candidate.perturbed) << x.candidate.note;
    }
}

TEST(Morphisms, IdentityIsAMorphism) {
    std::mt19937_64 rng(3);
    auto c = random_sl2_line_candidate(rng, false);
    auto L = table_structure(sl2_line_space(), c.tables, 3);
    EXPECT_TRUE(morphism_check(identity_morphism(3), L, L, all_ids(4), 3).ok());
}

TEST(PicardLie, StandardStructure) {
    for (int m = 1; m <= 2; ++m) {
        PicardLie P(fs_base(m), 4);
        auto r = generalized_jacobi_check(P.standard(), P.window(1), 3);
        EXPECT_TRUE(r.ok()) << m;
        EXPECT_TRUE(r.paths_agree);
    }
}

TEST(PicardLie, ClosedFormSolve) {
    SuperPolyAlgebra A = fs_base(2);
    auto s = solve_closed_forms(A, 2, 3, 2);
    EXPECT_EQ(s.columns.size(), 10u);
    EXPECT_EQ(s.rank, 9);
    ASSERT_EQ(s.kernel.size(), 1u);
    for (auto& k : s.kernel) EXPECT_TRUE(is_closed(A, k));
    auto f = essential_form_family(A, s);
    ASSERT_TRUE(f.has_value());
    // proportional to the hand-derived family
    TotalForm known = fs_family();
    Scalar ratio = f->get(3).terms().begin()->second / known.get(3).terms().begin()->second;
    EXPECT_EQ(*f, ratio * known);
}

TEST(PicardLie, TwistPassesExactlyWhenClosed) {
    SuperPolyAlgebra A = fs_base(2);
    PicardLie P(A, 4);
    auto w = P.window(1);
    TotalForm a = fs_family();
    auto r = generalized_jacobi_check(picard_lie_twist(P, a), w, 3);
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(generalized_jacobi_check(picard_lie_twist(P, Scalar(-3) * a), w, 3).ok());
    TotalForm cut = a;
    cut.comp.erase(3);
    auto rc = generalized_jacobi_check(picard_lie_twist(P, cut), w, 3);
    EXPECT_FALSE(rc.ok());
    EXPECT_TRUE(rc.paths_agree);
}

TEST(PicardLie, MorphismConjugatesToExactTwist) {
    SuperPolyAlgebra A = fs_base(2);
    PicardLie P(A, 4);
    TotalForm beta{1, {}};
    beta.set(1, A.var(0) * A.var(1) * A.dx(1));
    beta.set(2, A.var(0) * A.dx(0) * A.dx(1));
    auto r = picard_lie_morphism_conjugate(P, beta, P.window(1), 3);
    EXPECT_GT(r.words, 100);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(even_dx_sign(even_dx_sign(beta)), beta);
}
