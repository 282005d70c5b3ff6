#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "vertex.hpp"

namespace chiralis {

// beta-gamma-bc system over Q[x, xi], D(xi) = x^m, with charges x: 1, xi: m.
class ChiralKoszul {
public:
    explicit ChiralKoszul(int m) : m_(m) {
        if (m < 1) throw input_error("m must be at least 1");
        Poly xm = Poly::var(Var{0, 0, 0, 0}, m);
        SuperPolyAlgebra A({{"x", {0, 0}}, {"xi", {1, -1}}}, {Poly(), xm});
        V_ = BgSystem(A, {1, m});
        Poly t = V_.x(0, 0);
        for (int k = 1; k < m; ++k) t = t * V_.x(0, 0);
        Q_ = t * V_.d(1, -1);
        if (!(D(V_.x(1, 0)) == t)) Q_ = -Q_;
    }

    int m() const { return m_; }
    const BgSystem& fock() const { return V_; }
    const Poly& differential_state() const { return Q_; }
    Poly D(const Poly& s) const { return V_.product(Q_, 0, s); }

    int weight(const Monomial& x) const { return V_.weight(x); }
    int charge(const Monomial& x) const { return V_.charge(x); }
    int degree(const Monomial& x) const { return V_.degree(x); }

    // all basis states of weight w and charge q, grouped by cohomological degree
    std::map<int, std::vector<Poly>> cell_line(int w, int q) const {
        std::map<int, std::vector<Poly>> out;
        for (auto& p : positive_part(w))
            for (int b = 0; b <= 1; ++b) {
                int a = q - charge(p) - m_ * b;
                if (a < 0) continue;
                Monomial s = p;
                if (b) s.f.push_back({V_.mvar(V_.coordinate(1), 0), 1});
                if (a) s.f.push_back({V_.mvar(V_.coordinate(0), 0), a});
                Poly st = Poly(1);
                for (auto& [v, e] : s.f) st = st * Poly::var(v, e);
                const Monomial& mm = st.terms().begin()->first;
                out[degree(mm)].push_back(mono_poly(mm));
            }
        for (auto& [d, v] : out) std::sort(v.begin(), v.end());
        return out;
    }
    std::vector<Poly> cell_basis(int w, int q, int d) const {
        auto line = cell_line(w, q);
        auto it = line.find(d);
        return it == line.end() ? std::vector<Poly>{} : it->second;
    }
    int min_charge(int w) const { return -m_ * w; }

private:
    // monomials in modes of positive weight with total weight w
    std::vector<Monomial> positive_part(int w) const {
        std::vector<Var> vars;
        for (int g = 0; g < V_.ngens(); ++g)
            for (int k = 1; k <= w; ++k) vars.push_back(V_.mvar(g, k));
        std::sort(vars.begin(), vars.end());
        std::vector<Monomial> out;
        std::vector<std::pair<Var, int>> cur;
        auto rec = [&](auto&& self, size_t i, int left) -> void {
            if (left == 0) {
                Monomial x;
                x.f = cur;
                out.push_back(x);
                return;
            }
            for (size_t k = i; k < vars.size(); ++k) {
                const Var& v = vars[k];
                int maxe = v.par ? 1 : left / v.idx;
                for (int e = 1; e <= maxe && v.idx * e <= left; ++e) {
                    cur.push_back({v, e});
                    self(self, k + 1, left - v.idx * e);
                    cur.pop_back();
                }
            }
        };
        rec(rec, 0, w);
        return out;
    }

    int m_;
    BgSystem V_;
    Poly Q_;
};

inline ChiralKoszul build_chiral_koszul(int m) { return ChiralKoszul(m); }

inline std::map<Monomial, int> basis_index(const std::vector<Poly>& basis) {
    std::map<Monomial, int> idx;
    for (size_t i = 0; i < basis.size(); ++i) idx[basis[i].terms().begin()->first] = static_cast<int>(i);
    return idx;
}

// D from the degree-d cell to the degree-(d+1) cell in the given bases
inline SparseMatrix differential_matrix(const ChiralKoszul& K, const std::vector<Poly>& src, const std::vector<Poly>& dst) {
    SparseMatrix M(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    auto idx = basis_index(dst);
    for (size_t j = 0; j < src.size(); ++j) {
        Poly img = K.D(src[j]);
        for (auto& [x, c] : img.terms()) {
            auto it = idx.find(x);
            if (it == idx.end()) throw std::logic_error("D left its target cell");
            M.add(it->second, static_cast<int>(j), c);
        }
    }
    return M;
}

inline SparseMatrix differential_matrix(const ChiralKoszul& K, int w, int q, int d) {
    return differential_matrix(K, K.cell_basis(w, q, d), K.cell_basis(w, q, d + 1));
}

inline Poly combination(const std::vector<Poly>& basis, const Vec& v) {
    Poly p;
    for (size_t i = 0; i < basis.size(); ++i)
        if (sgn(v[i]) != 0) p += basis[i] * v[i];
    return p;
}

struct CohomologyCell {
    int weight = 0, charge = 0, degree = 0;
    int cochain_dim = 0;
    int dim = 0;
    std::vector<Poly> representatives;
};

struct CohomologyWindow {
    int max_weight = 0;
    int min_charge = 0, max_charge = 0;
};

struct CohomologyReport {
    int m = 1;
    CohomologyWindow window;
    std::vector<CohomologyCell> cells;

    const CohomologyCell* find(int w, int q, int d) const {
        for (auto& c : cells)
            if (c.weight == w && c.charge == q && c.degree == d) return &c;
        return nullptr;
    }
    // alternating sums over the degree line (w, q): {cohomology, cochains}
    std::pair<long, long> euler(int w, int q) const {
        long h = 0, c = 0;
        for (auto& x : cells)
            if (x.weight == w && x.charge == q) {
                long s = (x.degree & 1) ? -1 : 1;
                h += s * x.dim;
                c += s * x.cochain_dim;
            }
        return {h, c};
    }
    int total_dim(int w) const {
        int t = 0;
        for (auto& c : cells)
            if (c.weight == w) t += c.dim;
        return t;
    }
};

// Cohomology of one (weight, charge) line. Representatives: kernel vectors (exact pivot rule)
// kept when independent of the image and of the ones already kept. A non-null rng shuffles
// the basis order first.
inline std::vector<CohomologyCell> cohomology_line(const ChiralKoszul& K, int w, int q, std::mt19937_64* rng = nullptr) {
    auto line = K.cell_line(w, q);
    if (rng)
        for (auto& [d, b] : line) std::shuffle(b.begin(), b.end(), *rng);
    std::vector<CohomologyCell> out;
    for (auto& [d, basis] : line) {
        static const std::vector<Poly> none;
        auto nx = line.find(d + 1), pv = line.find(d - 1);
        const std::vector<Poly>& next = nx == line.end() ? none : nx->second;
        const std::vector<Poly>& prev = pv == line.end() ? none : pv->second;
        RankKernel out_d = rank_kernel(differential_matrix(K, basis, next));
        SparseMatrix in = differential_matrix(K, prev, basis);
        int rank_in = rank(in);
        CohomologyCell cell{w, q, d, static_cast<int>(basis.size()), 0, {}};
        cell.dim = static_cast<int>(out_d.kernel.size()) - rank_in;
        // image columns, then candidate kernel vectors
        std::vector<Vec> span;
        for (int j = 0; j < in.cols(); ++j) {
            Vec c(basis.size(), Scalar(0));
            for (auto& [rc, v] : in.entries())
                if (rc.second == j) c[rc.first] = v;
            span.push_back(c);
        }
        auto rank_of = [&](const std::vector<Vec>& vs) {
            SparseMatrix M(static_cast<int>(basis.size()), static_cast<int>(vs.size()));
            for (size_t j = 0; j < vs.size(); ++j)
                for (size_t i = 0; i < vs[j].size(); ++i)
                    if (sgn(vs[j][i]) != 0) M.set(static_cast<int>(i), static_cast<int>(j), vs[j][i]);
            return rank(M);
        };
        int r = rank_of(span);
        for (auto& k : out_d.kernel) {
            if (static_cast<int>(cell.representatives.size()) == cell.dim) break;
            span.push_back(k);
            int r2 = rank_of(span);
            if (r2 > r) {
                r = r2;
                cell.representatives.push_back(combination(basis, k));
            } else {
                span.pop_back();
            }
        }
        out.push_back(std::move(cell));
    }
    return out;
}

inline CohomologyReport cohomology(const ChiralKoszul& K, int max_weight, int max_charge, std::mt19937_64* rng = nullptr) {
    CohomologyReport rep;
    rep.m = K.m();
    rep.window = {max_weight, K.min_charge(max_weight), max_charge};
    for (int w = 0; w <= max_weight; ++w)
        for (int q = K.min_charge(w); q <= max_charge; ++q)
            for (auto& c : cohomology_line(K, w, q, rng)) rep.cells.push_back(std::move(c));
    return rep;
}

// span(image + reps) == span(image + targets) inside the cell
inline bool reduces_to(const ChiralKoszul& K, int w, int q, int d, const std::vector<Poly>& reps,
                       const std::vector<Poly>& targets) {
    std::vector<Poly> basis = K.cell_basis(w, q, d);
    auto idx = basis_index(basis);
    SparseMatrix in = differential_matrix(K, K.cell_basis(w, q, d - 1), basis);
    auto build = [&](const std::vector<const std::vector<Poly>*>& groups) {
        int ncols = in.cols();
        for (auto* g : groups) ncols += static_cast<int>(g->size());
        SparseMatrix M(static_cast<int>(basis.size()), ncols);
        for (auto& [rc, v] : in.entries()) M.set(rc.first, rc.second, v);
        int col = in.cols();
        for (auto* g : groups)
            for (auto& p : *g) {
                for (auto& [x, c] : p.terms()) {
                    auto it = idx.find(x);
                    if (it == idx.end()) return -1;
                    M.set(it->second, col, c);
                }
                ++col;
            }
        return rank(M);
    };
    int a = build({&reps}), b = build({&targets}), c = build({&reps, &targets});
    return a >= 0 && a == b && b == c;
}

struct CharacterRow {
    int weight = 0, charge = 0;
    std::map<int, int> dims;  // degree -> dim H
    long euler_h = 0, euler_c = 0;
};

inline std::vector<CharacterRow> character_table(const CohomologyReport& rep) {
    std::map<std::pair<int, int>, CharacterRow> rows;
    for (auto& c : rep.cells) {
        CharacterRow& r = rows[{c.weight, c.charge}];
        r.weight = c.weight;
        r.charge = c.charge;
        if (c.dim) r.dims[c.degree] = c.dim;
    }
    std::vector<CharacterRow> out;
    for (auto& [k, r] : rows) {
        auto [h, c] = rep.euler(k.first, k.second);
        r.euler_h = h;
        r.euler_c = c;
        out.push_back(r);
    }
    return out;
}

}  // namespace chiralis
