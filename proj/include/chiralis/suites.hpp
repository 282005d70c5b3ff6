#pragma once

#include <cstdint>
#include <random>

#include "algebroid.hpp"
#include "koszulfs.hpp"
#include "linfty.hpp"
#include "parallel.hpp"

namespace chiralis {

// beta-gamma-bc system on n even coordinates x (degree 0) and n odd ones xi (degree -1)
inline SuperPolyAlgebra bg_base(int n) {
    if (n < 1) throw input_error("need at least one variable");
    std::vector<Generator> g;
    for (int i = 1; i <= n; ++i) g.push_back({n == 1 ? "x" : "x" + std::to_string(i), {0, 0}});
    for (int i = 1; i <= n; ++i) g.push_back({n == 1 ? "xi" : "xi" + std::to_string(i), {1, -1}});
    return SuperPolyAlgebra(g);
}

// Q[x, xi], D(xi) = x^m
inline SuperPolyAlgebra fs_base(int m) {
    if (m < 1) throw input_error("m must be at least 1");
    return SuperPolyAlgebra({{"x", {0, 0}}, {"xi", {1, -1}}}, {Poly(), Poly::var(Var{0, 0, 0, 0}, m)});
}

inline SuperPolyAlgebra affine_space(int n) {
    std::vector<Generator> g;
    for (int i = 1; i <= n; ++i) g.push_back({"x" + std::to_string(i), {0, 0}});
    return SuperPolyAlgebra(g);
}

// ---------------------------------------------------------------------------
// commutator and normal-ordering identities

struct BorcherdsConfig {
    int max_weight = 2;
    int max_len = 2;
    bool total_weight = false;  // bound the summed weight of a triple instead of each entry
    int mode_range = 2;
    int samples = 200;
    int sample_weight = 3;
    int sample_len = 3;
    std::uint64_t seed = 1;
};

struct BorcherdsResult {
    long exhaustive_triples = 0, sampled_triples = 0, evaluations = 0;
    std::vector<Witness> failures;
    bool ok() const { return failures.empty(); }
};

inline void borcherds_triple(const BgSystem& V, const Poly& a, const Poly& b, const Poly& c, int M, BorcherdsResult& r) {
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            ++r.evaluations;
            Poly res = commutator_residual(V, a, b, c, m, n);
            if (!res.is_zero()) r.failures.push_back({"commutator", {a, b, c}, {m, n}, res});
        }
        ++r.evaluations;
        Poly res = normal_order_residual(V, a, b, c, m);
        if (!res.is_zero()) r.failures.push_back({"normal_order", {a, b, c}, {m}, res});
    }
}

inline BorcherdsResult borcherds_suite(const BgSystem& V, const BorcherdsConfig& cfg) {
    std::vector<Poly> B;
    for (int w = 0; w <= cfg.max_weight; ++w)
        for (auto& p : fock_basis(V, w, cfg.max_len)) B.push_back(p);
    std::vector<BorcherdsResult> slot(B.size());
    parallel_for(B.size(), [&](size_t i) {
        const Poly& a = B[i];
        for (auto& b : B)
            for (auto& c : B) {
                if (cfg.total_weight && V.max_weight(a) + V.max_weight(b) + V.max_weight(c) > cfg.max_weight) continue;
                ++slot[i].exhaustive_triples;
                borcherds_triple(V, a, b, c, cfg.mode_range, slot[i]);
            }
    });
    std::vector<Poly> S;
    for (int w = 0; w <= cfg.sample_weight; ++w)
        for (auto& p : fock_basis(V, w, cfg.sample_len)) S.push_back(p);
    // triples drawn up front so the sample does not depend on the worker count
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<size_t> pick(0, S.size() - 1);
    std::uniform_int_distribution<int> coef(1, 3), coin(0, 1);
    auto draw = [&] {
        Poly p = S[pick(rng)] * Scalar(coef(rng) * (coin(rng) ? -1 : 1));
        if (coin(rng)) {
            Poly q = S[pick(rng)];
            if (state_parity(q) == state_parity(p)) p += q * Scalar(coef(rng));
        }
        return p;
    };
    std::vector<std::array<Poly, 3>> T;
    for (int s = 0; s < cfg.samples; ++s) {
        Poly a = draw(), b = draw(), c = draw();
        T.push_back({a, b, c});
    }
    std::vector<BorcherdsResult> sslot(T.size());
    parallel_for(T.size(), [&](size_t i) {
        ++sslot[i].sampled_triples;
        borcherds_triple(V, T[i][0], T[i][1], T[i][2], cfg.mode_range, sslot[i]);
    });
    BorcherdsResult out;
    for (auto* v : {&slot, &sslot})
        for (auto& r : *v) {
            out.exhaustive_triples += r.exhaustive_triples;
            out.sampled_triples += r.sampled_triples;
            out.evaluations += r.evaluations;
            for (auto& f : r.failures) out.failures.push_back(f);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Lie* axioms of the jet tangent algebra and Chevalley d^2 on random cochains

struct LieStarConfig {
    int jet_order = 2;
    int poly_degree = 2;
    int samples = 50;
    std::uint64_t seed = 1;
};

struct LieStarResult {
    LieStarReport axioms;
    long cochains = 0;
    std::vector<FrameCochain> d2_failures;
    bool ok() const { return axioms.ok() && d2_failures.empty(); }
};

// 1- or 2-cochain with one or two random terms per frame tuple
inline FrameCochain random_cochain(const JetTangent& J, int arity, int jet_order, int poly_degree, std::mt19937_64& rng) {
    auto coeffs = J.coefficient_window(jet_order, poly_degree);
    std::uniform_int_distribution<size_t> pick(0, coeffs.size() - 1);
    std::uniform_int_distribution<int> coef(-3, 3), sym(0, 1), terms(1, 2);
    FrameCochain c{arity, 0, {}};
    for (auto& t : frame_tuples(J.nframe(), arity)) {
        StarValue v(arity);
        int k = terms(rng);
        for (int r = 0; r < k; ++r) {
            std::vector<int> e(arity, 0);
            for (int s = 0; s + 1 < arity; ++s) e[s] = sym(rng);
            Poly f = coeffs[pick(rng)];
            int tp = 0;
            for (int i : t) tp += J.frame_parity(i);
            if ((state_parity(f) + tp) & 1) continue;
            v.add(e, f * Scalar(coef(rng)));
        }
        c.set(t, v);
    }
    return arity == 2 ? antisymmetrize(J, c) : c;
}

inline LieStarResult liestar_suite(const SuperPolyAlgebra& A, const LieStarConfig& cfg) {
    LieStarResult out;
    JetTangent J{BgSystem(A)};
    LieStar L = J.lie_star();
    out.axioms = lie_star_check(L, J.tangent_window(cfg.jet_order, cfg.poly_degree), 20,
                                J.total_bound(cfg.jet_order, cfg.poly_degree));
    std::mt19937_64 rng(cfg.seed);
    for (int s = 0; s < cfg.samples; ++s) {
        FrameCochain c = random_cochain(J, 1 + (s & 1), cfg.jet_order, cfg.poly_degree, rng);
        ++out.cochains;
        FrameCochain d2 = chevalley_d(J, chevalley_d(J, c, L), L);
        if (!d2.is_zero()) out.d2_failures.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// L-infinity: direct generalized Jacobi against delta^2 on sampled structures

struct LInftySample {
    SampleCandidate candidate;
    GeneralizedJacobiReport report;
};

inline std::vector<LInftySample> linfty_samples(int count, std::uint64_t seed, int k_max = 4) {
    std::mt19937_64 rng(seed);
    GradedSpace V = sl2_line_space();
    std::vector<int> w{0, 1, 2, 3};
    std::vector<LInftySample> out;
    for (int t = 0; t < count; ++t) {
        SampleCandidate c = random_sl2_line_candidate(rng, t & 1);
        out.push_back({c, generalized_jacobi_check(table_structure(V, c.tables, 3), w, k_max)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// FS cohomology with the D^2 check on every computed line

struct FsResult {
    CohomologyReport report;
    long states = 0;
    bool d_squared_zero = true;
    bool euler_consistent = true;
};

inline FsResult fs_suite(const ChiralKoszul& K, int max_weight, int max_charge, std::mt19937_64* shuffle = nullptr) {
    std::vector<std::pair<int, int>> lines;
    for (int w = 0; w <= max_weight; ++w)
        for (int q = K.min_charge(w); q <= max_charge; ++q) lines.push_back({w, q});
    std::vector<std::vector<CohomologyCell>> cells(lines.size());
    std::vector<char> d2(lines.size(), 1);
    std::vector<long> count(lines.size(), 0);
    std::vector<std::uint64_t> seeds;
    for (size_t i = 0; i < lines.size(); ++i) seeds.push_back(shuffle ? (*shuffle)() : 0);
    parallel_for(lines.size(), [&](size_t i) {
        auto [w, q] = lines[i];
        auto line = K.cell_line(w, q);
        for (auto& [d, b] : line) {
            count[i] += static_cast<long>(b.size());
            auto nx = line.find(d + 1);
            if (nx == line.end()) continue;
            auto nn = line.find(d + 2);
            if (nn == line.end()) continue;
            if (!(differential_matrix(K, nx->second, nn->second) * differential_matrix(K, b, nx->second)).is_zero())
                d2[i] = 0;
        }
        std::mt19937_64 local(seeds[i]);
        cells[i] = cohomology_line(K, w, q, shuffle ? &local : nullptr);
    });
    FsResult out;
    out.report.m = K.m();
    out.report.window = {max_weight, K.min_charge(max_weight), max_charge};
    for (size_t i = 0; i < lines.size(); ++i) {
        out.states += count[i];
        out.d_squared_zero = out.d_squared_zero && d2[i];
        for (auto& c : cells[i]) out.report.cells.push_back(std::move(c));
    }
    for (auto& r : character_table(out.report))
        if (r.euler_h != r.euler_c) out.euler_consistent = false;
    return out;
}

// D(D(s)) = 0 state by state on all basis states of weight <= max_weight
inline long fs_d_squared_failures(const ChiralKoszul& K, int max_weight, int max_charge, long* states = nullptr) {
    long bad = 0, n = 0;
    for (int w = 0; w <= max_weight; ++w)
        for (int q = K.min_charge(w); q <= max_charge; ++q)
            for (auto& [d, b] : K.cell_line(w, q))
                for (auto& s : b) {
                    ++n;
                    if (!K.D(K.D(s)).is_zero()) ++bad;
                }
    if (states) *states = n;
    return bad;
}

inline bool same_dimensions(const CohomologyReport& a, const CohomologyReport& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (size_t i = 0; i < a.cells.size(); ++i) {
        auto &x = a.cells[i], &y = b.cells[i];
        if (x.weight != y.weight || x.charge != y.charge || x.degree != y.degree || x.dim != y.dim ||
            x.cochain_dim != y.cochain_dim)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// chiral algebroid twist checks; the window keeps tuples with summed jet order and degree bounded

inline LieStarReport algebroid_jacobi(const ChiralAlgebroid& L, const AlgebroidWindow& w, int max_failures = 20) {
    const JetTangent& J = L.tangent();
    return lie_star_check(L.lie_star(), algebroid_window(J, w), max_failures, J.total_bound(w.jet_order, w.poly_degree));
}

inline std::vector<Poly> small_infty_window(const BgSystem& V) {
    return {V.d(0, -1), V.d(1, -1), V.x(0, 0) * V.d(0, -1), V.x(1, 0) * V.d(0, -1),
            V.x(0, 0) * V.d(1, -1), V.x(1, 0) * V.d(1, -1), V.x(0, 0), V.x(1, 0)};
}

}  // namespace chiralis
