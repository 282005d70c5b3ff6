#include <gtest/gtest.h>

#include <random>

#include "chiralis/suites.hpp"

using namespace chiralis;

namespace {

std::vector<Poly> small_states(const BgSystem& V, int max_w, int max_len) {
    std::vector<Poly> out;
    for (int w = 0; w <= max_w; ++w)
        for (auto& p : fock_basis(V, w, max_len)) out.push_back(p);
    return out;
}

// b_(n) a from a_(n+j) b: sum_j (-1)^(n+j+1) p(a,b) T^j/j! (a_(n+j) b)
Poly skew_oracle(const BgSystem& V, const Poly& a, const Poly& b, int n) {
    Poly out;
    int bound = V.max_weight(a) + V.max_weight(b);
    for (int j = 0; n + j <= bound; ++j) {
        Poly t = V.product(a, n + j, b);
        for (int k = 0; k < j; ++k) t = V.translate(t);
        Scalar c = Scalar(1) / factorial(j);
        if ((n + j + 1) & 1) c = -c;
        if (state_parity(a) & state_parity(b)) c = -c;
        out += t * c;
    }
    return out;
}

}  // namespace

TEST(Fock, BasisShape) {
    BgSystem V(bg_base(1));
    for (int w = 0; w <= 3; ++w) {
        auto B = fock_basis(V, w, 3);
        std::set<Poly> seen(B.begin(), B.end());
        EXPECT_EQ(seen.size(), B.size());
        for (auto& b : B) {
            ASSERT_EQ(b.size(), 1u);
            const Monomial& m = b.terms().begin()->first;
            EXPECT_EQ(V.weight(m), w);
            EXPECT_LE(m.length(), 3);
        }
    }
    // weight 1, length <= 1: x_-1, xi_-1, d_x_-1, d_xi_-1
    EXPECT_EQ(fock_basis(V, 1, 1).size(), 4u);
}

TEST(Fock, FreeFieldPairing) {
    BgSystem V(bg_base(1));
    Poly x = V.x(0, 0), d = V.d(0, -1), xi = V.x(1, 0), b = V.d(1, -1);
    Poly dx = V.product(d, 0, x);
    EXPECT_EQ(dx.size(), 1u);
    EXPECT_EQ(abs(dx.constant()), 1);
    EXPECT_EQ(V.product(x, 0, d), -dx);
    Poly bxi = V.product(b, 0, xi);
    EXPECT_EQ(abs(bxi.constant()), 1);
    EXPECT_EQ(V.product(xi, 0, b), bxi);
    EXPECT_TRUE(V.product(d, 0, xi).is_zero());
    EXPECT_TRUE(V.product(x, 0, xi).is_zero());
}

TEST(Fock, VacuumAndTranslation) {
    BgSystem V(bg_base(1));
    auto S = small_states(V, 2, 2);
    for (auto& a : S) {
        EXPECT_EQ(V.product(a, -1, Poly(1)), a);
        for (int n = 0; n <= 2; ++n) EXPECT_TRUE(V.product(a, n, Poly(1)).is_zero());
        EXPECT_EQ(V.product(Poly(1), -1, a), a);
        EXPECT_EQ(V.product(a, -2, Poly(1)), V.translate(a));
    }
    for (auto& a : S)
        for (auto& b : S)
            for (int n = -2; n <= 2; ++n) EXPECT_EQ(V.product(V.translate(a), n, b), V.product(a, n - 1, b) * Scalar(-n));
}

TEST(Fock, SkewSymmetry) {
    BgSystem V(bg_base(1));
    auto S = small_states(V, 1, 2);
    for (auto& a : S)
        for (auto& b : S)
            for (int n = -1; n <= 2; ++n) EXPECT_EQ(V.product(b, n, a), skew_oracle(V, a, b, n));
}

TEST(Fock, FullBorcherdsIdentity) {
    BgSystem V(bg_base(1));
    auto S = small_states(V, 1, 2);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<size_t> pick(0, S.size() - 1);
    std::uniform_int_distribution<int> mode(-2, 2);
    for (int t = 0; t < 300; ++t) {
        const Poly &a = S[pick(rng)], &b = S[pick(rng)], &c = S[pick(rng)];
        int r = mode(rng), s = mode(rng), u = mode(rng);
        EXPECT_TRUE(borcherds_sides(V, a, b, c, r, s, u).holds()) << V.format(a) << " " << V.format(b) << " " << V.format(c);
    }
}

TEST(Fock, CommutatorAndNormalOrderingSuite) {
    BorcherdsConfig c;
    c.max_weight = 2;
    c.total_weight = true;
    c.samples = 40;
    BorcherdsResult r = borcherds_suite(BgSystem(bg_base(1)), c);
    EXPECT_GT(r.exhaustive_triples, 1000);
    EXPECT_EQ(r.sampled_triples, 40);
    EXPECT_TRUE(r.ok());
}

TEST(Fock, TwoPairsBorcherds) {
    BorcherdsConfig c;
    c.max_weight = 1;
    c.max_len = 1;
    c.samples = 20;
    c.sample_weight = 2;
    c.sample_len = 2;
    EXPECT_TRUE(borcherds_suite(BgSystem(bg_base(2)), c).ok());
}

TEST(Fock, DetectsABrokenProduct) {
    // a wrong commutator formula must leave residuals
    BgSystem V(bg_base(1));
    Poly d = V.d(0, -1), x = V.x(0, 0);
    Poly lhs = V.product(d, 0, V.product(x, -1, Poly(1)));
    Poly swapped = V.product(x, -1, V.product(d, 0, Poly(1)));
    EXPECT_NE(lhs, swapped);
    EXPECT_TRUE(commutator_residual(V, d, x, Poly(1), 0, -1).is_zero());
}

TEST(CommutativeVertex, JetAlgebraProducts) {
    CommutativeVA V = commutative_va(affine_space(2));
    Poly x = V.base().var(0), y = V.base().var(1);
    EXPECT_EQ(V.product(x, -1, y), x * y);
    EXPECT_TRUE(V.product(x, 0, y).is_zero());
    EXPECT_TRUE(borcherds_sides(V, x, y, x * y, -1, -1, -2).holds());
}
