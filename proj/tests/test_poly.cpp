#include <gtest/gtest.h>

#include <random>

#include "chiralis/suites.hpp"

using namespace chiralis;

namespace {

// random polynomial in functions and forms of A, homogeneous in form degree
Poly random_form(const SuperPolyAlgebra& A, std::mt19937_64& rng, int form_deg, int terms = 3, int deg = 2) {
    std::uniform_int_distribution<int> g(0, A.ngens() - 1), c(-3, 3), e(0, deg);
    Poly out;
    for (int t = 0; t < terms; ++t) {
        Poly m(c(rng));
        int k = e(rng);
        for (int i = 0; i < k; ++i) m = m * A.var(g(rng));
        for (int i = 0; i < form_deg; ++i) m = m * A.dx(g(rng));
        out += m;
    }
    return out;
}

Poly random_function(const SuperPolyAlgebra& A, std::mt19937_64& rng) { return random_form(A, rng, 0); }

int pure_parity(const Poly& p) {
    return p.is_zero() ? 0 : p.terms().begin()->first.parity();
}

SuperPolyAlgebra koszul_pair() {
    // Q[x1, x2, xi1, xi2], D(xi1) = x1^2, D(xi2) = x1 x2
    Var x1{0, 0, 0, 0}, x2{1, 0, 0, 0};
    return SuperPolyAlgebra({{"x1", {0, 0}}, {"x2", {0, 0}}, {"xi1", {1, -1}}, {"xi2", {1, -1}}},
                            {Poly(), Poly(), Poly::var(x1, 2), Poly::var(x1) * Poly::var(x2)});
}

VectorField random_field(const SuperPolyAlgebra& A, std::mt19937_64& rng) {
    VectorField X{std::vector<Poly>(A.ngens())};
    for (auto& c : X.c) c = random_function(A, rng);
    return X;
}

}  // namespace

TEST(Signs, OddAndFormVariables) {
    SuperPolyAlgebra A = bg_base(2);
    Poly xi1 = A.var(2), xi2 = A.var(3);
    EXPECT_EQ(xi1 * xi2, -(xi2 * xi1));
    EXPECT_TRUE((xi1 * xi1).is_zero());
    Poly dx1 = A.dx(0), dx2 = A.dx(1), dxi = A.dx(2);
    EXPECT_EQ(dx1 * dx2, -(dx2 * dx1));
    EXPECT_TRUE((dx1 * dx1).is_zero());
    EXPECT_FALSE((dxi * dxi).is_zero());
    EXPECT_EQ(dxi * xi1, -(xi1 * dxi));
    EXPECT_EQ(dx1 * xi1, xi1 * dx1);
}

TEST(Signs, RingAxiomsOnRandomElements) {
    SuperPolyAlgebra A = bg_base(2);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> fd(0, 2);
    for (int t = 0; t < 60; ++t) {
        Poly a = random_form(A, rng, fd(rng)), b = random_form(A, rng, fd(rng)), c = random_form(A, rng, fd(rng));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a - a), Poly());
    }
}

TEST(Derivations, DeRhamSquaresToZero) {
    std::mt19937_64 rng(5);
    for (auto A : {affine_space(3), bg_base(2), fs_base(2)})
        for (int t = 0; t < 40; ++t) {
            Poly w = random_form(A, rng, t % 3);
            EXPECT_TRUE(A.derham_d(A.derham_d(w)).is_zero());
        }
}

TEST(Derivations, DeRhamLeibnizOnEvenCoordinates) {
    SuperPolyAlgebra A = affine_space(3);
    std::mt19937_64 rng(6);
    for (int t = 0; t < 40; ++t) {
        int k = t % 3;
        Poly p = random_form(A, rng, k), q = random_form(A, rng, (t / 3) % 2);
        Poly rhs = A.derham_d(p) * q + p * A.derham_d(q) * Scalar(k & 1 ? -1 : 1);
        EXPECT_EQ(A.derham_d(p * q), rhs);
    }
}

TEST(Derivations, InternalDifferential) {
    SuperPolyAlgebra A = koszul_pair();
    EXPECT_TRUE(A.has_differential());
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        Poly p = random_function(A, rng), q = random_function(A, rng);
        EXPECT_TRUE(A.D(A.D(p)).is_zero());
        // split p into parity-homogeneous parts for the sign
        Poly p0 = p.filter([](const Monomial& m) { return m.parity() == 0; });
        Poly p1 = p - p0;
        EXPECT_EQ(A.D(p0 * q), A.D(p0) * q + p0 * A.D(q));
        EXPECT_EQ(A.D(p1 * q), A.D(p1) * q - p1 * A.D(q));
    }
    EXPECT_EQ(A.D(A.var(2)), A.var(0) * A.var(0));
    EXPECT_EQ(pure_parity(A.var(2) * A.var(3)), 0);
}

TEST(Derivations, TranslationIsADerivation) {
    SuperPolyAlgebra A = affine_space(2);
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        Poly p = random_function(A, rng), q = random_function(A, rng);
        EXPECT_EQ(A.translate(p * q), A.translate(p) * q + p * A.translate(q));
    }
    EXPECT_EQ(A.translate(A.var(0) * A.var(0)), A.var(0) * A.var(0, 1) * Scalar(2));
}

TEST(TotalForms, TotalDifferentialSquaresToZero) {
    std::mt19937_64 rng(9);
    for (int m = 1; m <= 3; ++m) {
        SuperPolyAlgebra A = fs_base(m);
        for (int t = 0; t < 30; ++t) {
            TotalForm a{2, {}};
            for (int n = 0; n <= 3; ++n) a.set(n, random_form(A, rng, n));
            EXPECT_TRUE(total_d(A, total_d(A, a)).is_zero()) << "m=" << m;
        }
    }
}

TEST(TotalForms, KnownClosedFamilyOverFsBase) {
    SuperPolyAlgebra A = fs_base(2);
    Poly x = A.var(0), xi = A.var(1), dx = A.dx(0), dxi = A.dx(1);
    TotalForm a{2, {}};
    a.set(2, x * xi * dx * dxi * Scalar(-4) + x * x * dxi * dxi);
    a.set(3, dxi * dxi * dxi);
    EXPECT_TRUE(is_closed(A, a));
    TotalForm top{2, {}};
    top.set(3, a.get(3));
    EXPECT_FALSE(is_closed(A, top));
    TotalForm cut{2, {}};
    cut.set(2, a.get(2));
    EXPECT_FALSE(is_closed(A, cut));
    EXPECT_TRUE(is_closed(A, Scalar(5) * a + a));
}

TEST(VectorFields, BracketAndEvaluation) {
    SuperPolyAlgebra A = affine_space(3);
    VectorField d1 = frame_field(A, 0), x1d2 = frame_field(A, 1, A.var(0));
    EXPECT_EQ(field_bracket(A, d1, x1d2), frame_field(A, 1));
    Poly w = A.dx(0) * A.dx(1);
    Scalar v12 = evaluate_form(A, w, {frame_field(A, 0), frame_field(A, 1)}).constant();
    Scalar v21 = evaluate_form(A, w, {frame_field(A, 1), frame_field(A, 0)}).constant();
    EXPECT_NE(sgn(v12), 0);
    EXPECT_EQ(v12, -v21);
    EXPECT_EQ(contract(A, d1, w), A.dx(1));
    EXPECT_EQ(apply_field(A, x1d2, A.var(1) * A.var(1)), A.var(0) * A.var(1) * Scalar(2));
}

TEST(VectorFields, JacobiIdentity) {
    SuperPolyAlgebra A = affine_space(2);
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; ++t) {
        VectorField X = random_field(A, rng), Y = random_field(A, rng), Z = random_field(A, rng);
        VectorField s = field_bracket(A, X, field_bracket(A, Y, Z)) + field_bracket(A, Y, field_bracket(A, Z, X)) +
                        field_bracket(A, Z, field_bracket(A, X, Y));
        EXPECT_TRUE(s.is_zero());
        Poly f = random_function(A, rng);
        Poly lhs = apply_field(A, field_bracket(A, X, Y), f);
        Poly rhs = apply_field(A, X, apply_field(A, Y, f)) - apply_field(A, Y, apply_field(A, X, f));
        EXPECT_EQ(lhs, rhs);
    }
}
