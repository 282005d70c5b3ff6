#include <gtest/gtest.h>

#include <random>

#include "chiralis/suites.hpp"

using namespace chiralis;

namespace {

// Field content: x (charge 1, degree 0, even), xi (charge m, degree -1, odd) with modes of
// weight >= 0; their momenta (charges -1, -m, degrees 0, +1) with modes of weight >= 1.
struct Mode {
    int weight, charge, degree;
    bool odd;
};

std::map<int, long> count_cochains(int m, int w, int q) {
    std::vector<Mode> modes;
    for (int k = 1; k <= w; ++k) {
        modes.push_back({k, 1, 0, false});
        modes.push_back({k, m, -1, true});
        modes.push_back({k, -1, 0, false});
        modes.push_back({k, -m, 1, true});
    }
    std::map<int, long> out;
    auto rec = [&](auto&& self, size_t i, int wl, int ch, int dg) -> void {
        if (i == modes.size()) {
            if (wl != 0) return;
            // weight-zero part x_0^a xi_0^b
            for (int b = 0; b <= 1; ++b) {
                int a = q - ch - m * b;
                if (a >= 0) ++out[dg - b];
            }
            return;
        }
        const Mode& md = modes[i];
        int maxe = md.odd ? 1 : wl / md.weight;
        for (int e = 0; e <= maxe && e * md.weight <= wl; ++e)
            self(self, i + 1, wl - e * md.weight, ch + e * md.charge, dg + e * md.degree);
    };
    rec(rec, 0, w, 0, 0);
    return out;
}

}  // namespace

TEST(ChiralKoszul, DifferentialOnGenerators) {
    for (int m = 1; m <= 3; ++m) {
        ChiralKoszul K(m);
        const BgSystem& V = K.fock();
        Poly xm(1);
        for (int i = 0; i < m; ++i) xm = xm * V.x(0, 0);
        EXPECT_EQ(K.D(V.x(1, 0)), xm);
        EXPECT_TRUE(K.D(V.x(0, 0)).is_zero());
        EXPECT_TRUE(K.D(Poly(1)).is_zero());
    }
    EXPECT_THROW(ChiralKoszul(0), input_error);
}

TEST(ChiralKoszul, CochainDimensionsMatchDirectCount) {
    for (int m = 1; m <= 3; ++m) {
        ChiralKoszul K(m);
        for (int w = 0; w <= 3; ++w)
            for (int q = K.min_charge(w); q <= 2 * m; ++q) {
                auto line = K.cell_line(w, q);
                std::map<int, long> got;
                for (auto& [d, b] : line) got[d] = static_cast<long>(b.size());
                EXPECT_EQ(got, count_cochains(m, w, q)) << "m=" << m << " w=" << w << " q=" << q;
            }
    }
}

TEST(ChiralKoszul, DSquaredVanishes) {
    for (int m = 1; m <= 3; ++m) {
        long n = 0;
        EXPECT_EQ(fs_d_squared_failures(ChiralKoszul(m), 3, 2 * m, &n), 0) << m;
        EXPECT_GT(n, 100);
    }
}

TEST(ChiralKoszul, WeightZeroCohomology) {
    for (int m = 1; m <= 4; ++m) {
        ChiralKoszul K(m);
        CohomologyReport r = cohomology(K, 0, 2 * m);
        EXPECT_EQ(r.total_dim(0), m);
        for (auto& c : r.cells) {
            if (c.dim == 0) continue;
            EXPECT_EQ(c.degree, 0);
            EXPECT_LT(c.charge, m);
            Poly xa(1);
            for (int i = 0; i < c.charge; ++i) xa = xa * K.fock().x(0, 0);
            EXPECT_TRUE(reduces_to(K, 0, c.charge, 0, c.representatives, {xa}));
        }
    }
}

TEST(ChiralKoszul, WeightOneCells) {
    // (charge, degree) -> dim at weight 1
    std::map<int, std::map<std::pair<int, int>, int>> want{
        {2, {{{-2, 1}, 1}, {{0, 0}, 1}, {{1, 0}, 1}, {{3, -1}, 1}}},
        {3, {{{-3, 1}, 1}, {{-2, 1}, 1}, {{0, 0}, 1}, {{1, 0}, 2}, {{2, 0}, 1}, {{4, -1}, 1}, {{5, -1}, 1}}}};
    for (auto& [m, cells] : want) {
        CohomologyReport r = cohomology(ChiralKoszul(m), 1, 2 * m);
        std::map<std::pair<int, int>, int> got;
        for (auto& c : r.cells)
            if (c.weight == 1 && c.dim) got[{c.charge, c.degree}] = c.dim;
        EXPECT_EQ(got, cells) << m;
    }
}

TEST(ChiralKoszul, EulerCharacteristicPerLine) {
    for (int m = 1; m <= 3; ++m) {
        FsResult r = fs_suite(ChiralKoszul(m), 2, 2 * m);
        EXPECT_TRUE(r.d_squared_zero);
        EXPECT_TRUE(r.euler_consistent);
        for (auto& row : character_table(r.report)) {
            long chi = 0;
            for (auto& [d, n] : count_cochains(m, row.weight, row.charge)) chi += (d & 1 ? -n : n);
            EXPECT_EQ(row.euler_c, chi);
        }
    }
}

TEST(ChiralKoszul, BasisShuffleInvariance) {
    std::mt19937_64 rng(17);
    for (int m = 2; m <= 3; ++m) {
        ChiralKoszul K(m);
        FsResult a = fs_suite(K, 2, 2 * m);
        FsResult b = fs_suite(K, 2, 2 * m, &rng);
        EXPECT_TRUE(same_dimensions(a.report, b.report));
    }
}

TEST(ChiralKoszul, RepresentativesAreCocycles) {
    ChiralKoszul K(2);
    CohomologyReport r = cohomology(K, 1, 4);
    for (auto& c : r.cells)
        for (auto& p : c.representatives) EXPECT_TRUE(K.D(p).is_zero()) << K.fock().format(p);
}
