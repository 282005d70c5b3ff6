#include <gtest/gtest.h>

#include <random>

#include "chiralis/exact.hpp"

using namespace chiralis;

namespace {

// plain dense elimination, first nonzero pivot
int dense_rank(std::vector<std::vector<Scalar>> a) {
    int r = 0, rows = static_cast<int>(a.size()), cols = rows ? static_cast<int>(a[0].size()) : 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        while (p < rows && sgn(a[p][c]) == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (int i = r + 1; i < rows; ++i) {
            Scalar f = a[i][c] / a[r][c];
            for (int k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
        }
        ++r;
    }
    return r;
}

}  // namespace

TEST(Scalars, ParseAndPrint) {
    EXPECT_EQ(parse_scalar("6/4"), Scalar(3, 2));
    EXPECT_EQ(to_string(parse_scalar("-6/4")), "-3/2");
    EXPECT_EQ(to_string(Scalar(5)), "5");
    EXPECT_THROW(parse_scalar("1/0"), input_error);
    EXPECT_THROW(parse_scalar("abc"), input_error);
}

TEST(Scalars, GeneralizedBinomial) {
    for (int k = 0; k < 8; ++k) EXPECT_EQ(binomial(-1, k), Scalar(k % 2 ? -1 : 1));
    EXPECT_EQ(binomial(5, 2), 10);
    EXPECT_EQ(binomial(3, 5), 0);
    EXPECT_EQ(binomial(4, -1), 0);
    for (int n = -6; n <= 6; ++n)
        for (int k = 1; k <= 6; ++k) EXPECT_EQ(binomial(n, k), binomial(n - 1, k) + binomial(n - 1, k - 1)) << n << " " << k;
    EXPECT_EQ(factorial(6), 720);
}

TEST(Perms, GroupLaws) {
    auto P = all_perms(4);
    EXPECT_EQ(P.size(), 24u);
    for (auto& s : P) {
        EXPECT_TRUE(is_perm(s));
        EXPECT_EQ(compose(s, inverse(s)), identity_perm(4));
        for (auto& t : P) EXPECT_EQ(perm_sign(compose(s, t)), perm_sign(s) * perm_sign(t));
    }
    EXPECT_FALSE(is_perm({1, 1, 3}));
}

TEST(Perms, KoszulSign) {
    auto P = all_perms(4);
    for (auto& s : P) {
        EXPECT_EQ(koszul_sign_int(s, {0, 0, 0, 0}), 1);
        EXPECT_EQ(koszul_sign_int(s, {1, 1, 1, 1}), perm_sign(s));
        EXPECT_EQ(koszul_sign_int(s, {1, 2, 3, 4}), koszul_sign_int(s, {-1, 0, 1, 2}));
    }
    EXPECT_EQ(koszul_sign_int({2, 1, 3}, {1, 1, 0}), -1);
    EXPECT_EQ(koszul_sign_int({2, 1, 3}, {1, 0, 1}), 1);
    EXPECT_THROW(koszul_sign_int({1, 2}, {0}), input_error);
}

TEST(Perms, Unshuffles) {
    for (int n = 0; n <= 6; ++n)
        for (int i = 0; i <= n; ++i) {
            auto U = unshuffles(i, n);
            EXPECT_EQ(Scalar(static_cast<long>(U.size())), binomial(n, i));
            for (auto& u : U) {
                ASSERT_TRUE(is_perm(u));
                for (int k = 1; k < n; ++k)
                    if (k != i) EXPECT_LT(u[k - 1], u[k]);
            }
        }
    EXPECT_THROW(unshuffles(3, 2), input_error);
}

TEST(Elimination, RankAndKernelAgainstDenseOracle) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> val(-4, 4), dim(1, 7), zero(0, 2);
    for (int trial = 0; trial < 200; ++trial) {
        int r = dim(rng), c = dim(rng);
        SparseMatrix M(r, c);
        std::vector<std::vector<Scalar>> D(r, std::vector<Scalar>(c));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (zero(rng)) {
                    Scalar v(val(rng), 1 + zero(rng));
                    M.set(i, j, v);
                    D[i][j] = v;
                }
        RankKernel rk = rank_kernel(M);
        EXPECT_EQ(rk.rank, dense_rank(D));
        EXPECT_EQ(rk.rank + static_cast<int>(rk.kernel.size()), c);
        for (auto& k : rk.kernel)
            for (auto& v : M.apply(k)) EXPECT_EQ(sgn(v), 0);
        std::vector<std::vector<Scalar>> K;
        for (auto& k : rk.kernel) K.push_back(k);
        if (!K.empty()) EXPECT_EQ(dense_rank(K), static_cast<int>(K.size()));
    }
}

TEST(Elimination, TransposeKeepsRank) {
    SparseMatrix M(3, 4);
    M.set(0, 0, 1);
    M.set(0, 2, Scalar(1, 3));
    M.set(1, 1, 2);
    M.set(2, 0, 2);
    M.set(2, 2, Scalar(2, 3));
    EXPECT_EQ(rank(M), 2);
    EXPECT_EQ(rank(M.transpose()), 2);
    EXPECT_EQ(M.get(0, 2), Scalar(1, 3));
}
