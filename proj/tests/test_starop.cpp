#include <gtest/gtest.h>

#include <random>

#include "chiralis/suites.hpp"

using namespace chiralis;

namespace {

std::vector<Poly> derivative_window(const ConformalAlgebra& L, int order) {
    std::vector<Poly> w;
    for (int g = 0; g < L.ngens(); ++g)
        for (int j = 0; j <= order; ++j)
            if (!L.elem(g, j).is_zero()) w.push_back(L.elem(g, j));
    return w;
}

}  // namespace

TEST(Conformal, VecIsLieConformal) {
    ConformalAlgebra V = vec_algebra();
    auto r = lie_star_check(V.lie_star(), derivative_window(V, 2));
    EXPECT_GT(r.triples, 0);
    EXPECT_TRUE(r.ok());
}

TEST(Conformal, WrongNormalizationBreaksSkewSymmetry) {
    ConformalAlgebra V({{"l", 0, false}});
    V.set_product(0, 0, 0, V.elem(0, 1));
    V.set_product(0, 0, 1, V.elem(0) * Scalar(3));
    auto r = lie_star_check(V.lie_star(), derivative_window(V, 1));
    ASSERT_FALSE(r.ok());
}

TEST(Conformal, WittModes) {
    ConformalAlgebra V = vec_algebra();
    Poly l = V.elem(0);
    for (int n = -3; n <= 3; ++n)
        for (int m = -3; m <= 3; ++m) {
            ModeElement got = lie_modes_bracket(V, l, n, l, m);
            ModeElement want;
            if (n != m) want[{0, n + m - 1}] = Scalar(n - m);
            EXPECT_EQ(got, want) << n << " " << m;
        }
    ModeElement t = mode_class(V, V.elem(0, 1), 4);
    EXPECT_EQ(t, (ModeElement{{{0, 3}, Scalar(-4)}}));
}

TEST(Conformal, HeisenbergModes) {
    ConformalAlgebra V = bg_linear_algebra();
    Poly x = V.elem(0), d = V.elem(1);
    for (int n = -2; n <= 2; ++n)
        for (int m = -2; m <= 2; ++m) {
            ModeElement got = lie_modes_bracket(V, d, n, x, m);
            ModeElement want;
            if (n + m == -1) want[{2, -1}] = 1;
            EXPECT_EQ(got, want);
        }
    EXPECT_TRUE(lie_star_check(V.lie_star(), derivative_window(V, 1)).ok());
}

TEST(JetTangent, LieStarAxiomsSmallWindow) {
    JetTangent J{BgSystem(affine_space(2))};
    auto w = J.tangent_window(1, 1);
    auto r = lie_star_check(J.lie_star(), w, 20, J.total_bound(1, 1));
    EXPECT_GT(r.triples, 50);
    EXPECT_TRUE(r.ok());
}

TEST(JetTangent, ProfileAndFilter) {
    JetTangent J{BgSystem(affine_space(2))};
    const BgSystem& V = J.fock();
    EXPECT_EQ(J.profile(V.d(0, -1)), std::make_pair(0, 0));
    EXPECT_EQ(J.profile(V.x(1, 0) * V.d(0, -2)).second, 1);
    auto keep = J.total_bound(1, 1);
    Poly a = V.x(0, -1) * V.d(0, -1), b = V.d(1, -1);
    EXPECT_TRUE(keep({&b, &b}));
    EXPECT_FALSE(keep({&a, &a, &a}));
}

TEST(JetTangent, ActionOnFunctions) {
    JetTangent J{BgSystem(affine_space(1))};
    const BgSystem& V = J.fock();
    StarValue v = J.action(V.d(0, -1), V.x(0, 0) * V.x(0, 0));
    EXPECT_FALSE(v.is_zero());
    EXPECT_TRUE(J.action(V.d(0, -1), Poly(1)).is_zero());
}

TEST(Cochains, AntisymmetrizationIsIdempotent) {
    JetTangent J{BgSystem(affine_space(2))};
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        FrameCochain c = random_cochain(J, 2, 1, 1, rng);
        EXPECT_EQ(antisymmetrize(J, c), c);
    }
}

TEST(Cochains, ChevalleySquaresToZero) {
    LieStarConfig c;
    c.jet_order = 1;
    c.poly_degree = 2;
    c.samples = 20;
    c.seed = 9;
    LieStarResult r = liestar_suite(affine_space(2), c);
    EXPECT_EQ(r.cochains, 20);
    EXPECT_TRUE(r.axioms.ok());
    EXPECT_TRUE(r.d2_failures.empty());
}

TEST(Cochains, ChevalleyOnOddFrames) {
    JetTangent J{BgSystem(bg_base(1))};
    LieStar L = J.lie_star();
    std::mt19937_64 rng(12);
    for (int t = 0; t < 6; ++t) {
        FrameCochain c = random_cochain(J, 1, 1, 1, rng);
        EXPECT_TRUE(chevalley_d(J, chevalley_d(J, c, L), L).is_zero());
    }
}
