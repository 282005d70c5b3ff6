#include <gtest/gtest.h>

#include "chiralis/suites.hpp"

using namespace chiralis;

namespace {

Poly vol(const SuperPolyAlgebra& A) { return A.dx(0) * A.dx(1) * A.dx(2); }

}  // namespace

TEST(ChiralAlgebroid, StandardAndVolumeTwist) {
    SuperPolyAlgebra A = affine_space(3);
    ChiralAlgebroid L = standard_chiral_algebroid(A);
    EXPECT_TRUE(algebroid_jacobi(L, {1, 1}).ok());
    ChiralAlgebroid T = twist_chiral(L, graded_form_functor(L.tangent(), vol(A)));
    auto r = algebroid_jacobi(T, {1, 1});
    EXPECT_GT(r.triples, 1000);
    EXPECT_TRUE(r.ok());
    EXPECT_TRUE(module_unchanged(L, T));
}

TEST(ChiralAlgebroid, NonClosedFormIsRejected) {
    SuperPolyAlgebra A = affine_space(4);
    ChiralAlgebroid L = standard_chiral_algebroid(A);
    Poly a = A.var(3) * vol(A);
    try {
        graded_form_functor(L.tangent(), a);
        FAIL() << "accepted a non-closed form";
    } catch (const form_not_closed& e) {
        EXPECT_EQ(e.d_value, A.derham_d(a));
    }
    EXPECT_THROW(graded_form_functor(L.tangent(), A.dx(0) * A.dx(1)), input_error);
}

TEST(ChiralAlgebroid, NonClosedCochainFailsWithWitness) {
    SuperPolyAlgebra A = affine_space(4);
    ChiralAlgebroid L = standard_chiral_algebroid(A);
    auto r = algebroid_jacobi(twist_chiral(L, graded_form_cochain(L.tangent(), A.var(3) * vol(A))), {1, 1}, 1);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.failures[0].kind, "jacobi");
    EXPECT_NE(L.tangent().fock().format(r.failures[0].residual).find("x4_-1"), std::string::npos);
}

TEST(ChiralAlgebroid, ClosedMultipleOfVolumePasses) {
    // x1 dx1 dx2 dx3 is closed, so its twist satisfies the axioms
    SuperPolyAlgebra A = affine_space(4);
    ChiralAlgebroid L = standard_chiral_algebroid(A);
    Poly a = A.var(0) * vol(A);
    EXPECT_TRUE(A.derham_d(a).is_zero());
    EXPECT_TRUE(algebroid_jacobi(twist_chiral(L, graded_form_functor(L.tangent(), a)), {1, 1}, 1).ok());
}

TEST(ChiralAlgebroid, FilteredTwist) {
    SuperPolyAlgebra A = affine_space(3);
    ChiralAlgebroid L = standard_chiral_algebroid(A);
    Poly b = A.dx(0) * A.dx(1) + A.var(2) * A.dx(0) * A.dx(2);
    ChiralAlgebroid F = filtered_twist(L, vol(A), b);
    EXPECT_TRUE(algebroid_jacobi(F, {1, 1}).ok());
    EXPECT_TRUE(module_unchanged(L, F));
    EXPECT_THROW(filtered_twist(L, Poly(), A.var(0) * A.dx(1) * A.dx(1) + A.var(0) * A.dx(1) * A.dx(2)), form_not_closed);
}

TEST(ChiralAlgebroid, TwistInputValidation) {
    SuperPolyAlgebra A = affine_space(2);
    ChiralAlgebroid L = standard_chiral_algebroid(A);
    EXPECT_THROW(twist_chiral(L, FrameCochain{1, 0, {}}), input_error);
    FrameCochain c{2, 0, {}};
    c.set({0, 1}, StarValue::constant(2, L.tangent().fock().x(0, -1)));
    EXPECT_THROW(twist_chiral(L, c), input_error);
    EXPECT_NO_THROW(twist_chiral(L, antisymmetrize(L.tangent(), c)));
}

class ChiralInftyFs : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        P = new ChiralInfty(standard_chiral_infty(fs_base(2), 3));
        W = new std::vector<Poly>(small_infty_window(P->fock()));
        S = new FamilySolve(solve_closed_families(*P, FamilyAnsatz{}, *W, 3));
    }
    static void TearDownTestSuite() {
        delete S;
        delete W;
        delete P;
    }
    static ChiralInfty* P;
    static std::vector<Poly>* W;
    static FamilySolve* S;
};
ChiralInfty* ChiralInftyFs::P = nullptr;
std::vector<Poly>* ChiralInftyFs::W = nullptr;
FamilySolve* ChiralInftyFs::S = nullptr;

TEST_F(ChiralInftyFs, UntwistedStructure) {
    EXPECT_TRUE(liestar_infty_jacobi(P->structure(), *W, 3).ok());
}

TEST_F(ChiralInftyFs, SolveShape) {
    EXPECT_EQ(S->columns.size(), 88u);
    EXPECT_EQ(S->rank, 17);
    EXPECT_EQ(S->kernel.size(), 51u);
    for (size_t i = 0; i < S->kernel.size(); i += 10)
        EXPECT_TRUE(liestar_infty_jacobi(chiral_infty_twist(*P, S->kernel[i]).structure(), *W, 3, 1).ok()) << i;
}

TEST_F(ChiralInftyFs, EssentialFamily) {
    auto f = essential_family(*P, *S, *W, 3);
    ASSERT_TRUE(f.has_value());
    EXPECT_TRUE(f->count(2) && f->count(3));
    TwistFamily cut = *f;
    cut.erase(3);
    auto r = liestar_infty_jacobi(chiral_infty_twist(*P, cut).structure(), *W, 3, 1);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.first_failing_k(), 3);
    ChiralInfty T = chiral_infty_twist(*P, *f);
    EXPECT_TRUE(T.module() == P->module());
}

TEST_F(ChiralInftyFs, TwistsAreAdditive) {
    const TwistFamily &a = S->kernel[0], &b = S->kernel[1];
    TwistFamily sum = a;
    for (auto& [n, c] : b) sum[n] = sum.count(n) ? sum[n] + c : c;
    ChiralInfty twice = chiral_infty_twist(chiral_infty_twist(*P, a), b);
    ChiralInfty once = chiral_infty_twist(*P, sum);
    EXPECT_EQ(twice.twist(), once.twist());
    EXPECT_TRUE(liestar_infty_jacobi(once.structure(), *W, 3, 1).ok());
}

TEST_F(ChiralInftyFs, ParityAndArityValidation) {
    ASSERT_FALSE(S->kernel.empty());
    auto [n, c] = *S->kernel[0].begin();
    FrameCochain wrong = c;
    wrong.parity ^= 1;
    EXPECT_THROW(chiral_infty_twist(*P, {{n, wrong}}), input_error);
    EXPECT_THROW(chiral_infty_twist(*P, {{4, c}}), input_error);
}

TEST(ChiralInfty, StrictIntegerGradingHasNoEssentialFamily) {
    ChiralInfty P = standard_chiral_infty(fs_base(2), 3);
    auto W = small_infty_window(P.fock());
    FamilySolve s = solve_closed_families(P, FamilyAnsatz{2, 3, 3, true}, W, 3);
    EXPECT_EQ(s.columns.size(), 20u);
    EXPECT_FALSE(essential_family(P, s, W, 3).has_value());
}
