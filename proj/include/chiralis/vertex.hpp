#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyjet.hpp"

namespace chiralis {

// Mode symbol as written in states: coordinates x_k (k <= 0), momenta d_k (k < 0).
struct ModeSymbol {
    std::string gen;
    int k = 0;
    friend bool operator==(const ModeSymbol&, const ModeSymbol&) = default;
};

// beta-gamma / bc system over a polynomial super algebra A.
// Fock variables: Var{gen, w, 0, parity}, w = conformal weight of the mode.
// gen = i is the momentum of base generator i, gen = n + i its coordinate,
// so momenta sort before coordinates and higher modes sort first.
class BgSystem {
public:
    BgSystem() = default;
    explicit BgSystem(SuperPolyAlgebra A, std::vector<int> charges = {}) : A_(std::move(A)), charge_(std::move(charges)) {
        if (charge_.empty()) charge_.assign(A_.ngens(), 0);
        if (static_cast<int>(charge_.size()) != A_.ngens()) throw input_error("one charge per generator required");
    }

    const SuperPolyAlgebra& base() const { return A_; }
    int nbase() const { return A_.ngens(); }
    int ngens() const { return 2 * A_.ngens(); }
    bool is_momentum(int g) const { return g < nbase(); }
    int base_of(int g) const { return is_momentum(g) ? g : g - nbase(); }
    int parity(int g) const { return A_.parity(base_of(g)); }
    int field_weight(int g) const { return is_momentum(g) ? 1 : 0; }
    int momentum(int i) const { return i; }
    int coordinate(int i) const { return nbase() + i; }

    Var mvar(int g, int w) const {
        if (w < field_weight(g)) throw input_error("mode out of range for " + gen_name(g));
        return Var{g, w, 0, parity(g)};
    }
    Poly unit() const { return Poly(1); }
    // state a_{(-1)}|0> for generator g
    Poly gen_state(int g) const { return Poly::var(mvar(g, field_weight(g))); }
    Poly x(int i, int k = 0) const { return Poly::var(mvar(coordinate(i), -k)); }
    Poly d(int i, int k = -1) const { return Poly::var(mvar(momentum(i), -k)); }

    std::string gen_name(int g) const {
        const std::string& b = A_.gen(base_of(g)).name;
        return is_momentum(g) ? "d_" + b : b;
    }
    ModeSymbol symbol(const Var& v) const { return {gen_name(v.gen), -v.idx}; }
    Var from_symbol(const ModeSymbol& s) const {
        for (int g = 0; g < ngens(); ++g)
            if (gen_name(g) == s.gen) {
                if (is_momentum(g) ? s.k >= 0 : s.k > 0)
                    throw input_error("mode index out of range for " + s.gen + ": " + std::to_string(s.k));
                return mvar(g, -s.k);
            }
        throw input_error("unknown generator: " + s.gen);
    }
    std::string var_name(const Var& v) const { return gen_name(v.gen) + "_" + std::to_string(-v.idx); }
    std::string format(const Poly& p) const {
        return format_poly(p, [this](const Var& v) { return var_name(v); });
    }

    int weight(const Monomial& m) const {
        int w = 0;
        for (auto& [v, e] : m.f) w += v.idx * e;
        return w;
    }
    int max_weight(const Poly& p) const {
        int w = -1;
        for (auto& [m, c] : p.terms()) w = std::max(w, weight(m));
        return w;
    }
    int charge(const Monomial& m) const {
        int q = 0;
        for (auto& [v, e] : m.f) q += (is_momentum(v.gen) ? -1 : 1) * charge_[base_of(v.gen)] * e;
        return q;
    }
    int degree(const Monomial& m) const {
        int d = 0;
        for (auto& [v, e] : m.f) d += (is_momentum(v.gen) ? -1 : 1) * A_.gen(base_of(v.gen)).pd.degree * e;
        return d;
    }
    int momentum_count(const Monomial& m) const {
        int n = 0;
        for (auto& [v, e] : m.f)
            if (is_momentum(v.gen)) n += e;
        return n;
    }
    static int parity(const Monomial& m) { return m.parity(); }

    // single generator field mode g_(n) acting on a state
    Poly mode(int g, int n, const Poly& s) const {
        if (n <= -1) return Poly::var(mvar(g, -n - 1 + field_weight(g))) * s;
        int b = base_of(g);
        if (is_momentum(g)) return partial(s, mvar(coordinate(b), n));
        Poly r = partial(s, mvar(momentum(b), n + 1));
        return parity(g) ? r : -r;
    }

    // [T, a_(n)] = -n a_(n-1) on creation modes
    Poly translate(const Poly& s) const {
        return derive(s, 0, 0, [this](const Var& v) {
            return Poly::var(Var{v.gen, v.idx + 1, 0, v.par}) * Scalar(v.idx + 1 - field_weight(v.gen));
        });
    }

    // a_(n) b for arbitrary states; leftmost-mode recursion
    Poly product(const Poly& a, int n, const Poly& b) const {
        Poly r;
        for (auto& [m, c] : a.terms()) r += mono_product(m, n, b) * c;
        return r;
    }

private:
    Poly mono_product(const Monomial& m, int n, const Poly& c) const {
        if (c.is_zero()) return Poly();
        if (m.f.empty()) return n == -1 ? c : Poly();
        const Var g = m.f[0].first;
        Monomial rest = m;
        if (--rest.f[0].second == 0) rest.f.erase(rest.f.begin());
        Poly ap = mono_poly(rest);
        int p = -g.idx - 1 + field_weight(g.gen);
        int wa = weight(rest), wc = max_weight(c);
        int sw = (g.par * rest.parity()) & 1;
        Poly r;
        // a'_(n+j) c survives only for n + j <= wa + wc - 1
        for (int j = 0; j <= wa + wc - 1 - n; ++j) {
            if (rest.f.empty() && n + j != -1) continue;
            Poly inner = product(ap, n + j, c);
            if (inner.is_zero()) continue;
            Scalar coef = binomial(p, j);
            if (j & 1) coef = -coef;
            r += mode(g.gen, p - j, inner) * coef;
        }
        // g_(j) c survives only for j <= field_weight + wc - 1
        for (int j = 0; j <= field_weight(g.gen) + wc - 1; ++j) {
            Poly inner = mode(g.gen, j, c);
            if (inner.is_zero()) continue;
            Scalar coef = binomial(p, j);
            if (j & 1) coef = -coef;
            if (!(p & 1)) coef = -coef;
            if (sw) coef = -coef;
            r += product(ap, p + n - j, inner) * coef;
        }
        return r;
    }

    SuperPolyAlgebra A_;
    std::vector<int> charge_;
};

// Commutative vertex algebra of a differential algebra: a_(-k-1) b = (T^k a / k!) b.
class CommutativeVA {
public:
    CommutativeVA() = default;
    explicit CommutativeVA(SuperPolyAlgebra A) : A_(std::move(A)) {}
    const SuperPolyAlgebra& base() const { return A_; }
    Poly unit() const { return Poly(1); }
    Poly translate(const Poly& p) const { return A_.translate(p); }
    Poly product(const Poly& a, int n, const Poly& b) const {
        if (n >= 0) return Poly();
        int k = -n - 1;
        return A_.translate(a, k) * b * (Scalar(1) / factorial(k));
    }
    int weight(const Monomial& m) const { return jet_weight(m); }
    int max_weight(const Poly& p) const {
        int w = -1;
        for (auto& [m, c] : p.terms()) w = std::max(w, weight(m));
        return w;
    }
    std::string format(const Poly& p) const { return A_.format(p); }

private:
    SuperPolyAlgebra A_;
};

inline CommutativeVA commutative_va(const SuperPolyAlgebra& A) { return CommutativeVA(A); }
inline BgSystem bg_bc_system(const SuperPolyAlgebra& A, std::vector<int> charges = {}) {
    return BgSystem(A, std::move(charges));
}

inline int state_parity(const Poly& p) {
    for (auto& [m, c] : p.terms()) return m.parity();
    return 0;
}

inline int state_weight_bound(const BgSystem& V, const Poly& p) { return V.max_weight(p); }
inline int state_weight_bound(const CommutativeVA& V, const Poly& p) { return V.max_weight(p); }

// upper bound on j with a_(j) b possibly nonzero
template <class VA>
int product_bound(const VA& V, const Poly& a, const Poly& b) {
    return state_weight_bound(V, a) + state_weight_bound(V, b);
}

struct BorcherdsSides {
    Poly lhs, rhs_ab, rhs_ba;
    Poly residual() const { return lhs - rhs_ab + rhs_ba; }
    bool holds() const { return residual().is_zero(); }
};

// Sum_j C(s,j) (a_(r+j) b)_(s+t-j) c
//   = Sum_j (-1)^j C(r,j) [ a_(r+s-j) b_(t+j) c - (-1)^r p(a,b) b_(r+t-j) a_(s+j) c ]
template <class VA>
BorcherdsSides borcherds_sides(const VA& V, const Poly& a, const Poly& b, const Poly& c, int r, int s, int t) {
    BorcherdsSides out;
    int pa = state_parity(a), pb = state_parity(b);
    int wa = state_weight_bound(V, a), wb = state_weight_bound(V, b), wc = state_weight_bound(V, c);
    for (int j = 0; r + j <= wa + wb; ++j) {
        Scalar k = binomial(s, j);
        if (sgn(k) == 0) continue;
        Poly ab = V.product(a, r + j, b);
        if (!ab.is_zero()) out.lhs += V.product(ab, s + t - j, c) * k;
    }
    for (int j = 0; t + j <= wb + wc; ++j) {
        Scalar k = binomial(r, j);
        if (sgn(k) == 0) continue;
        if (j & 1) k = -k;
        Poly bc = V.product(b, t + j, c);
        if (!bc.is_zero()) out.rhs_ab += V.product(a, r + s - j, bc) * k;
    }
    for (int j = 0; s + j <= wa + wc; ++j) {
        Scalar k = binomial(r, j);
        if (sgn(k) == 0) continue;
        if ((j + r) & 1) k = -k;
        if (pa & pb) k = -k;
        Poly ac = V.product(a, s + j, c);
        if (!ac.is_zero()) out.rhs_ba += V.product(b, r + t - j, ac) * k;
    }
    return out;
}

// a_(m) b_(n) c - p(a,b) b_(n) a_(m) c - Sum_j C(m,j) (a_(j) b)_(m+n-j) c
template <class VA>
Poly commutator_residual(const VA& V, const Poly& a, const Poly& b, const Poly& c, int m, int n) {
    int pa = state_parity(a), pb = state_parity(b);
    Poly r = V.product(a, m, V.product(b, n, c));
    Poly ba = V.product(b, n, V.product(a, m, c));
    r -= (pa & pb) ? -ba : ba;
    int bound = product_bound(V, a, b);
    for (int j = 0; j <= bound; ++j) {
        Scalar k = binomial(m, j);
        if (sgn(k) == 0) continue;
        Poly ab = V.product(a, j, b);
        if (!ab.is_zero()) r -= V.product(ab, m + n - j, c) * k;
    }
    return r;
}

// (a_(-1) b)_(n) c - [Sum_j p(a,b) b_(n-j-1) a_(j) c + a_(-1) b_(n) c + Sum_j a_(-j-2) b_(j+n+1) c]
template <class VA>
Poly normal_order_residual(const VA& V, const Poly& a, const Poly& b, const Poly& c, int n) {
    int pa = state_parity(a), pb = state_parity(b);
    int wa = state_weight_bound(V, a), wb = state_weight_bound(V, b), wc = state_weight_bound(V, c);
    Poly r = V.product(V.product(a, -1, b), n, c);
    for (int j = 0; j <= wa + wc; ++j) {
        Poly t = V.product(b, n - j - 1, V.product(a, j, c));
        r -= (pa & pb) ? -t : t;
    }
    r -= V.product(a, -1, V.product(b, n, c));
    for (int j = 0; j + n + 1 <= wb + wc; ++j) r -= V.product(a, -j - 2, V.product(b, j + n + 1, c));
    return r;
}

// Basis monomials of the Fock space with the given weight and at most max_len mode symbols.
inline std::vector<Poly> fock_basis(const BgSystem& V, int weight, int max_len) {
    std::vector<Var> vars;
    for (int g = 0; g < V.ngens(); ++g)
        for (int w = V.field_weight(g); w <= weight; ++w) vars.push_back(V.mvar(g, w));
    std::sort(vars.begin(), vars.end());
    std::vector<Poly> out;
    std::vector<std::pair<Var, int>> cur;
    auto rec = [&](auto&& self, size_t i, int wleft, int lleft) -> void {
        if (wleft == 0) {
            Monomial m;
            m.f = cur;
            out.push_back(mono_poly(m));
        }
        if (i == vars.size()) return;
        for (size_t k = i; k < vars.size(); ++k) {
            const Var& v = vars[k];
            int maxe = v.nilpotent() ? 1 : lleft;
            for (int e = 1; e <= maxe && e <= lleft && v.idx * e <= wleft; ++e) {
                cur.push_back({v, e});
                self(self, k + 1, wleft - v.idx * e, lleft - e);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0, weight, max_len);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace chiralis
