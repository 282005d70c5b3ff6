#include <gtest/gtest.h>

#include <random>

#include "chiralis/json_io.hpp"
#include "chiralis/suites.hpp"

using namespace chiralis;
using io::json;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const input_error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Json, ScalarsAndPolys) {
    EXPECT_EQ(io::scalar_from(json("-3/6"), "s"), Scalar(-1, 2));
    EXPECT_EQ(io::scalar_from(json(4), "s"), 4);
    SuperPolyAlgebra A = bg_base(2);
    Poly p = A.var(0) * A.var(2) * A.dx(1) * Scalar(2, 3) + A.var(1, 2) * A.dx(3) * A.dx(3);
    EXPECT_EQ(io::poly_from(A, io::poly_json(A, p), "p"), p);
    EXPECT_EQ(io::poly_from(A, json::parse(R"([{"c": "1", "m": [{"gen": "xi1", "exp": 2}]}])"), "p"), Poly());
}

TEST(Json, AlgebraRoundTrip) {
    SuperPolyAlgebra A = fs_base(3);
    SuperPolyAlgebra B = io::algebra_from(io::algebra_json(A));
    ASSERT_EQ(B.ngens(), 2);
    EXPECT_EQ(B.gen(1).name, "xi");
    EXPECT_EQ(B.parity(1), 1);
    EXPECT_EQ(B.D_image(1), A.D_image(1));
}

TEST(Json, TotalFormRoundTrip) {
    SuperPolyAlgebra A = fs_base(2);
    TotalForm t{2, {}};
    t.set(2, A.var(0) * A.var(1) * A.dx(0) * A.dx(1) * Scalar(-4) + A.var(0) * A.var(0) * A.dx(1) * A.dx(1));
    t.set(3, A.dx(1) * A.dx(1) * A.dx(1));
    TotalForm u = io::total_form_from(A, io::total_form_json(A, t), "form");
    EXPECT_EQ(u, t);
    EXPECT_EQ(u.total_degree, 2);
}

TEST(Json, StatesCochainsAndFamilies) {
    ChiralInfty P = standard_chiral_infty(fs_base(2), 3);
    const JetTangent& J = P.tangent();
    const BgSystem& V = J.fock();
    Poly s = V.x(0, -1) * V.d(1, -1) * Scalar(5) + V.x(1, 0);
    EXPECT_EQ(io::state_from(V, io::state_json(V, s), "s"), s);
    std::mt19937_64 rng(1);
    FrameCochain c = random_cochain(J, 2, 1, 1, rng);
    EXPECT_EQ(io::cochain_from(J, io::cochain_json(J, c), "c"), c);
    auto W = small_infty_window(V);
    auto f = essential_family(P, solve_closed_families(P, FamilyAnsatz{}, W, 3), W, 3);
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(io::family_from(J, io::family_json(J, *f), "family"), *f);
}

TEST(Json, LInftyRoundTrip) {
    std::mt19937_64 rng(2);
    auto c = random_sl2_line_candidate(rng, false);
    io::LInftyPresentation P{sl2_line_space(), c.tables};
    auto Q = io::linfty_from(io::linfty_json(P));
    EXPECT_EQ(Q.space.names, P.space.names);
    ASSERT_GE(Q.tables.size(), 4u);
    for (int n = 1; n <= 3; ++n) EXPECT_EQ(Q.tables[n], P.tables[n]) << n;
}

TEST(Json, ErrorsNameThePath) {
    SuperPolyAlgebra A = affine_space(2);
    auto bad_gen = json::parse(R"([{"c": "1", "m": [{"gen": "y"}]}])");
    EXPECT_NE(error_of([&] { io::poly_from(A, bad_gen, "cocycle.form"); }).find("cocycle.form[0].m[0].gen"), std::string::npos);
    auto bad_c = json::parse(R"([{"c": "1/0", "m": []}])");
    EXPECT_NE(error_of([&] { io::poly_from(A, bad_c, "f"); }).find("f[0].c"), std::string::npos);
    auto no_space = json::parse(R"({"brackets": []})");
    EXPECT_NE(error_of([&] { io::linfty_from(no_space); }).find("structure.space"), std::string::npos);
    auto wrong_arity = json::parse(R"({"space": {"degree": [0]}, "brackets": [{"arity": 2, "entries": [{"args": ["e0"], "value": {}}]}]})");
    EXPECT_NE(error_of([&] { io::linfty_from(wrong_arity); }).find("entries[0].args"), std::string::npos);
    auto bad_parity = json::parse(R"({"generators": [{"name": "x", "parity": 2}]})");
    EXPECT_NE(error_of([&] { io::algebra_from(bad_parity); }).find("algebra.generators[0].parity"), std::string::npos);
    auto bad_form = json::parse(R"({"components": {"2": [{"c": "1", "m": [{"gen": "x1", "form": 1}]}]}})");
    EXPECT_NE(error_of([&] { io::total_form_from(A, bad_form, "form"); }).find("form.components.2"), std::string::npos);
}

TEST(Json, CohomologyReport) {
    ChiralKoszul K(2);
    json j = io::cohomology_json(K, cohomology(K, 1, 4));
    EXPECT_EQ(j["m"], 2);
    int h0 = 0;
    for (auto& c : j["cells"])
        if (c["weight"] == 0) h0 += c["dim"].get<int>();
    EXPECT_EQ(h0, 2);
    EXPECT_TRUE(j.contains("character_table"));
}
