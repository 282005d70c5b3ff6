#pragma once

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vertex.hpp"

namespace chiralis {

using Translator = std::function<Poly(const Poly&)>;

// Value of an n-ary *-operation: sum of coefficient (x) d_1^e1 ... d_n^en.
// The symbols satisfy d_1 + ... + d_n = -T on the coefficient (T the left translation);
// canonical values never contain d_n.
struct StarValue {
    int arity = 1;
    std::map<std::vector<int>, Poly> terms;

    StarValue() = default;
    explicit StarValue(int n) : arity(n) {}
    static StarValue constant(int n, const Poly& p) {
        StarValue v(n);
        v.add(std::vector<int>(n, 0), p);
        return v;
    }

    void add(const std::vector<int>& e, const Poly& p) {
        if (p.is_zero()) return;
        auto it = terms.find(e);
        if (it == terms.end()) {
            terms.emplace(e, p);
            return;
        }
        it->second += p;
        if (it->second.is_zero()) terms.erase(it);
    }
    bool is_zero() const { return terms.empty(); }
    Poly coeff(const std::vector<int>& e) const {
        auto it = terms.find(e);
        return it == terms.end() ? Poly() : it->second;
    }
    StarValue& operator+=(const StarValue& o) {
        for (auto& [e, p] : o.terms) add(e, p);
        return *this;
    }
    StarValue& operator-=(const StarValue& o) {
        for (auto& [e, p] : o.terms) add(e, -p);
        return *this;
    }
    StarValue& operator*=(const Scalar& s) {
        if (sgn(s) == 0) terms.clear();
        for (auto& [e, p] : terms) p *= s;
        return *this;
    }
    friend StarValue operator+(StarValue a, const StarValue& b) { return a += b; }
    friend StarValue operator-(StarValue a, const StarValue& b) { return a -= b; }
    friend StarValue operator*(StarValue a, const Scalar& s) { return a *= s; }
    friend bool operator==(const StarValue& a, const StarValue& b) { return a.arity == b.arity && a.terms == b.terms; }
    friend bool operator<(const StarValue& a, const StarValue& b) {
        return a.arity != b.arity ? a.arity < b.arity : a.terms < b.terms;
    }
};

// all exponent vectors of length k summing to d, with multinomial coefficients
inline void multinomial_expand(int k, int d, const std::function<void(const std::vector<int>&, const Scalar&)>& f) {
    std::vector<int> e(k, 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == k - 1) {
            e[i] = left;
            Scalar c = factorial(d);
            for (int x : e) c /= factorial(x);
            f(e, c);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            e[i] = a;
            self(self, i + 1, left - a);
        }
    };
    if (k == 0) {
        if (d == 0) f(e, 1);
        return;
    }
    rec(rec, 0, d);
}

// eliminate the last symbol via d_n = -T - (d_1 + ... + d_{n-1})
inline StarValue normalize(const StarValue& v, const Translator& T) {
    int n = v.arity;
    StarValue out(n);
    for (auto& [e, p] : v.terms) {
        int a = e[n - 1];
        if (a == 0) {
            out.add(e, p);
            continue;
        }
        // (-T - S)^a = (-1)^a sum_b C(a,b) T^b S^(a-b)
        Poly Tb = p;
        for (int b = 0; b <= a; ++b) {
            if (b > 0) Tb = T(Tb);
            if (Tb.is_zero()) break;
            Scalar c = binomial(a, b);
            if (a & 1) c = -c;
            multinomial_expand(n - 1, a - b, [&](const std::vector<int>& s, const Scalar& mc) {
                std::vector<int> ne(e);
                ne[n - 1] = 0;
                for (int i = 0; i < n - 1; ++i) ne[i] += s[i];
                out.add(ne, Tb * (c * mc));
            });
        }
    }
    return out;
}

// symbol k of v becomes symbol p(k)
inline StarValue relabel(const StarValue& v, const Perm& p) {
    StarValue out(v.arity);
    for (auto& [e, c] : v.terms) {
        std::vector<int> ne(v.arity, 0);
        for (int k = 0; k < v.arity; ++k) ne[p[k] - 1] = e[k];
        out.add(ne, c);
    }
    return out;
}

// multiply by (d_1+...+d_k over the given symbol set)^power
inline StarValue times_symbol_sum(const StarValue& v, const std::vector<int>& symbols, int power) {
    if (power == 0) return v;
    StarValue out(v.arity);
    int k = static_cast<int>(symbols.size());
    for (auto& [e, c] : v.terms)
        multinomial_expand(k, power, [&](const std::vector<int>& s, const Scalar& mc) {
            std::vector<int> ne(e);
            for (int i = 0; i < k; ++i) ne[symbols[i]] += s[i];
            out.add(ne, c * mc);
        });
    return out;
}

// coefficient-wise map
template <class F>
StarValue map_coeffs(const StarValue& v, F f) {
    StarValue out(v.arity);
    for (auto& [e, c] : v.terms) out.add(e, f(c));
    return out;
}

struct StarOp {
    int arity = 1;
    int parity = 0;
    std::function<StarValue(const std::vector<Poly>&)> eval;

    StarValue operator()(const std::vector<Poly>& a) const { return eval(a); }
};

inline std::vector<int> parities(const std::vector<Poly>& a) {
    std::vector<int> p;
    for (auto& x : a) p.push_back(state_parity(x));
    return p;
}

// phi^sigma = sigma^{-1} o phi o sigma: (a_1..a_n) -> eps * relabel_sigma phi(a_s1, ..., a_sn)
// sigma_act(s, sigma_act(t, phi)) == sigma_act(s o t, phi)
inline StarOp sigma_act(const Perm& sigma, const StarOp& phi, const Translator& T) {
    if (static_cast<int>(sigma.size()) != phi.arity) throw input_error("sigma_act: arity mismatch");
    if (!is_perm(sigma)) throw input_error("sigma_act: not a permutation");
    StarOp out{phi.arity, phi.parity, {}};
    out.eval = [sigma, phi, T](const std::vector<Poly>& a) {
        std::vector<Poly> b(a.size());
        for (size_t k = 0; k < a.size(); ++k) b[k] = a[sigma[k] - 1];
        StarValue v = normalize(relabel(phi(b), sigma), T);
        if (koszul_sign_int(sigma, parities(a)) < 0) v *= Scalar(-1);
        return v;
    };
    return out;
}

inline StarValue sigma_apply(const Perm& sigma, const StarValue& value_on_permuted, const std::vector<int>& par,
                             const Translator& T) {
    StarValue v = normalize(relabel(value_on_permuted, sigma), T);
    if (koszul_sign_int(sigma, par) < 0) v *= Scalar(-1);
    return v;
}

// A Lie* (conformal) algebra carried by polynomials: products a_(n) b for n >= 0.
struct LieStar {
    Translator translate;
    std::function<Poly(const Poly&, int, const Poly&)> product;
    std::function<int(const Poly&, const Poly&)> bound;  // a_(n) b = 0 for n > bound
};

// mu(a,b) = sum_n a_(n) b (x) d_1^n / n!
inline StarValue bracket_value(const LieStar& L, const Poly& a, const Poly& b) {
    StarValue v(2);
    int nb = L.bound(a, b);
    for (int n = 0; n <= nb; ++n) v.add({n, 0}, L.product(a, n, b) * (Scalar(1) / factorial(n)));
    return v;
}

inline StarOp bracket_op(const LieStar& L) {
    return StarOp{2, 0, [L](const std::vector<Poly>& a) { return bracket_value(L, a[0], a[1]); }};
}

// sum_j (-1)^{n+1} p(a,b) (b_(n+j) a) d^j/j! with the target symbol d = -T
inline Poly antisymmetry_rhs(const LieStar& L, const Poly& a, const Poly& b, int n) {
    Poly r;
    int nb = L.bound(b, a);
    for (int j = 0; n + j <= nb; ++j) {
        Poly t = L.product(b, n + j, a);
        for (int i = 0; i < j; ++i) t = L.translate(t);
        Scalar c = Scalar(1) / factorial(j);
        if ((n + 1 + j) & 1) c = -c;
        if (state_parity(a) & state_parity(b)) c = -c;
        r += t * c;
    }
    return r;
}

inline Poly jacobi_residual(const LieStar& L, const Poly& a, const Poly& b, const Poly& c, int m, int n) {
    Poly r = L.product(a, m, L.product(b, n, c));
    Poly ba = L.product(b, n, L.product(a, m, c));
    r -= (state_parity(a) & state_parity(b)) ? -ba : ba;
    int nb = L.bound(a, b);
    for (int j = 0; j <= std::min(m, nb); ++j) {
        Poly ab = L.product(a, j, b);
        if (!ab.is_zero()) r -= L.product(ab, m + n - j, c) * binomial(m, j);
    }
    return r;
}

struct Witness {
    std::string kind;
    std::vector<Poly> args;
    std::vector<int> modes;
    Poly residual;
};

struct LieStarReport {
    long pairs = 0, triples = 0;
    std::vector<Witness> failures;
    bool ok() const { return failures.empty(); }
};

using TupleFilter = std::function<bool(const std::vector<const Poly*>&)>;

inline LieStarReport lie_star_check(const LieStar& L, const std::vector<Poly>& window, int max_failures = 20,
                                    const TupleFilter& keep = {}) {
    LieStarReport rep;
    for (auto& a : window)
        for (auto& b : window) {
            if (keep && !keep({&a, &b})) continue;
            ++rep.pairs;
            int nb = std::max(L.bound(a, b), L.bound(b, a));
            for (int n = 0; n <= nb; ++n) {
                Poly res = L.product(a, n, b) - antisymmetry_rhs(L, a, b, n);
                if (!res.is_zero() && static_cast<int>(rep.failures.size()) < max_failures)
                    rep.failures.push_back({"antisymmetry", {a, b}, {n}, res});
            }
        }
    for (auto& a : window)
        for (auto& b : window)
            for (auto& c : window) {
                if (keep && !keep({&a, &b, &c})) continue;
                ++rep.triples;
                int ma = L.bound(a, c), mb = L.bound(b, c) + L.bound(a, b);
                for (int m = 0; m <= std::max(ma, L.bound(a, b)); ++m)
                    for (int n = 0; n <= std::max(mb, L.bound(b, c)); ++n) {
                        Poly res = jacobi_residual(L, a, b, c, m, n);
                        if (!res.is_zero() && static_cast<int>(rep.failures.size()) < max_failures)
                            rep.failures.push_back({"jacobi", {a, b, c}, {m, n}, res});
                    }
            }
    return rep;
}

// ---------------------------------------------------------------------------
// Conformal algebras presented by generators (free over Q[T], or central with T = 0).
// Elements are linear polynomials in Var{g, j} standing for T^j g / j!.

class ConformalAlgebra {
public:
    struct Gen {
        std::string name;
        int parity = 0;
        bool central = false;
    };

    ConformalAlgebra() = default;
    explicit ConformalAlgebra(std::vector<Gen> gens) : gens_(std::move(gens)) {}

    int ngens() const { return static_cast<int>(gens_.size()); }
    const Gen& gen(int g) const { return gens_.at(g); }
    Poly elem(int g, int j = 0) const {
        if (gens_.at(g).central && j > 0) return Poly();
        return Poly::var(Var{g, j, 0, gens_[g].parity});
    }
    // g_(n) h for n >= 0, as a linear combination of elements
    void set_product(int g, int h, int n, const Poly& v) { table_[{g, h, n}] = v; }

    Poly translate(const Poly& p) const {
        return derive(p, 0, 0, [this](const Var& v) {
            if (gens_[v.gen].central) return Poly();
            return Poly::var(Var{v.gen, v.idx + 1, 0, v.par}) * Scalar(v.idx + 1);
        });
    }

    int bound() const {
        int b = -1;
        for (auto& [k, v] : table_)
            if (!v.is_zero()) b = std::max(b, std::get<2>(k));
        return b;
    }

    Poly product(const Poly& a, int n, const Poly& b) const {
        Poly r;
        for (auto& [ma, ca] : a.terms())
            for (auto& [mb, cb] : b.terms()) {
                if (ma.f.empty() || mb.f.empty()) continue;
                const Var& u = ma.f[0].first;
                const Var& v = mb.f[0].first;
                r += basic(u, n, v) * (ca * cb);
            }
        return r;
    }

    LieStar lie_star() const {
        return LieStar{[this](const Poly& p) { return translate(p); },
                       [this](const Poly& a, int n, const Poly& b) { return product(a, n, b); },
                       [this](const Poly& a, const Poly& b) {
                           int da = 0, db = 0;
                           for (auto& [m, c] : a.terms())
                               for (auto& [v, e] : m.f) da = std::max(da, v.idx);
                           for (auto& [m, c] : b.terms())
                               for (auto& [v, e] : m.f) db = std::max(db, v.idx);
                           return bound() + da + db;
                       }};
    }

    std::string format(const Poly& p) const {
        return format_poly(p, [this](const Var& v) {
            return v.idx == 0 ? gens_[v.gen].name : "T^(" + std::to_string(v.idx) + ")" + gens_[v.gen].name;
        });
    }

private:
    // (T^(a) g)_(n) (T^(b) h) = (-1)^a C(n,a) sum_i C(n-a,i) T^(b-i) (g_(n-a-i) h)
    Poly basic(const Var& u, int n, const Var& v) const {
        int a = u.idx, b = v.idx;
        if (n < a) return Poly();
        Scalar pre = binomial(n, a);
        if (a & 1) pre = -pre;
        int nn = n - a;
        Poly r;
        for (int i = 0; i <= std::min(b, nn); ++i) {
            auto it = table_.find({u.gen, v.gen, nn - i});
            if (it == table_.end()) continue;
            Poly t = it->second;
            for (int k = 0; k < b - i; ++k) t = translate(t);
            r += t * (pre * binomial(nn, i) / factorial(b - i));
        }
        return r;
    }

    std::vector<Gen> gens_;
    std::map<std::tuple<int, int, int>, Poly> table_;
};

// Vec: l_(0) l = T l, l_(1) l = 2 l.
inline ConformalAlgebra vec_algebra() {
    ConformalAlgebra V({{"l", 0, false}});
    V.set_product(0, 0, 0, V.elem(0, 1));
    V.set_product(0, 0, 1, V.elem(0) * Scalar(2));
    return V;
}

inline ConformalAlgebra abelian_algebra(int n) {
    std::vector<ConformalAlgebra::Gen> g;
    for (int i = 0; i < n; ++i) g.push_back({"a" + std::to_string(i + 1), 0, false});
    return ConformalAlgebra(g);
}

// linear part of the beta-gamma system: x, d_x and the vacuum (central)
inline ConformalAlgebra bg_linear_algebra() {
    ConformalAlgebra V({{"x", 0, false}, {"d_x", 0, false}, {"1", 0, true}});
    V.set_product(1, 0, 0, V.elem(2));
    V.set_product(0, 1, 0, -V.elem(2));
    return V;
}

// Mode algebra Lie(L) = h(L[t,t^-1]); an element maps (generator, mode) to a coefficient.
using ModeElement = std::map<std::pair<int, int>, Scalar>;

// class of (T^(j) g) (x) t^k, reduced with (T v)_[k] = -k v_[k-1]
inline ModeElement mode_class(const ConformalAlgebra& L, const Poly& v, int k) {
    ModeElement out;
    for (auto& [m, c] : v.terms()) {
        if (m.f.empty()) continue;
        const Var& u = m.f[0].first;
        int j = u.idx;
        if (L.gen(u.gen).central) {
            if (j == 0 && k == -1) out[{u.gen, -1}] += c;
            continue;
        }
        // (T^(j) g)_[k] = (-1)^j C(k,j) g_[k-j]
        Scalar coef = binomial(k, j);
        if (j & 1) coef = -coef;
        if (sgn(coef) != 0) out[{u.gen, k - j}] += c * coef;
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

// [a_[n], b_[m]] = sum_j C(n,j) (a_(j) b)_[n+m-j]
inline ModeElement lie_modes_bracket(const ConformalAlgebra& L, const Poly& a, int n, const Poly& b, int m) {
    ModeElement out;
    LieStar S = L.lie_star();
    int nb = S.bound(a, b);
    for (int j = 0; j <= nb; ++j) {
        Scalar c = binomial(n, j);
        if (sgn(c) == 0) continue;
        Poly ab = L.product(a, j, b);
        for (auto& [key, v] : mode_class(L, ab, n + m - j)) out[key] += v * c;
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

// h(M) = M / TM on a window: returns a basis of the quotient as representatives
inline std::vector<Poly> h_quotient(const ConformalAlgebra& L, int max_order) {
    std::vector<Poly> out;
    for (int g = 0; g < L.ngens(); ++g) out.push_back(L.elem(g));
    (void)max_order;
    return out;
}

// ---------------------------------------------------------------------------
// Jet tangent Lie* algebroid J-inf T_A acting on J-inf A, realized as F_1 / F_0 of the
// beta-gamma system. Elements are Fock states; frame tau_i = d_{i,-1}.

class JetTangent {
public:
    JetTangent() = default;
    explicit JetTangent(BgSystem V) : V_(std::move(V)) {}

    const BgSystem& fock() const { return V_; }
    const SuperPolyAlgebra& base() const { return V_.base(); }
    int nframe() const { return V_.nbase(); }
    Poly frame(int i) const { return V_.d(i, -1); }
    int frame_parity(int i) const { return V_.base().parity(i); }
    Translator translator() const {
        return [this](const Poly& p) { return V_.translate(p); };
    }

    Poly momentum_part(const Poly& p, int count) const {
        return p.filter([&](const Monomial& m) { return V_.momentum_count(m) == count; });
    }

    // a_(n) b on J-inf A (+) J-inf T_A with the vector-field part taken modulo F_0
    Poly product(const Poly& a, int n, const Poly& b) const {
        Poly r = V_.product(a, n, b);
        Poly bp = momentum_part(b, 1), ap = momentum_part(a, 1);
        if (ap.is_zero() && bp.is_zero()) return Poly();
        if (!ap.is_zero() && !bp.is_zero()) return momentum_part(r, 1);
        return momentum_part(r, 0);
    }
    int bound(const Poly& a, const Poly& b) const { return V_.max_weight(a) + V_.max_weight(b); }

    LieStar lie_star() const {
        return LieStar{translator(), [this](const Poly& a, int n, const Poly& b) { return product(a, n, b); },
                       [this](const Poly& a, const Poly& b) { return bound(a, b); }};
    }

    // mu(xi, f) for xi in J-inf T_A, f in J-inf A
    StarValue action(const Poly& xi, const Poly& f) const {
        StarValue v(2);
        int nb = bound(xi, f);
        for (int n = 0; n <= nb; ++n) v.add({n, 0}, V_.product(xi, n, f) * (Scalar(1) / factorial(n)));
        return v;
    }

    // basis elements f * tau_i^(k) with jet order <= J and coefficient degree <= P
    std::vector<Poly> tangent_window(int J, int P) const {
        std::vector<Poly> out;
        for (auto& f : coefficient_window(J, P))
            for (int i = 0; i < nframe(); ++i)
                for (int k = 0; k <= J; ++k) out.push_back(f * V_.d(i, -1 - k));
        return out;
    }
    std::vector<Poly> coefficient_window(int J, int P) const {
        std::vector<Var> vars;
        for (int i = 0; i < nframe(); ++i)
            for (int l = 0; l <= J; ++l) vars.push_back(V_.mvar(V_.coordinate(i), l));
        std::vector<Poly> out{Poly(1)};
        std::vector<Poly> layer{Poly(1)};
        for (int d = 1; d <= P; ++d) {
            std::vector<Poly> next;
            for (auto& p : layer)
                for (auto& v : vars) {
                    Poly q = p * Poly::var(v);
                    if (q.is_zero()) continue;
                    Monomial m = q.terms().begin()->first;
                    next.push_back(mono_poly(m));
                }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            for (auto& p : next) out.push_back(p);
            layer = next;
        }
        return out;
    }

    // {coordinate count, jet order} of a basis state; a frame tau^(k) has order k
    std::pair<int, int> profile(const Poly& p) const {
        int d = 0, j = 0;
        for (auto& [v, e] : p.terms().begin()->first.f) {
            if (V_.is_momentum(v.gen)) {
                j = std::max(j, v.idx - 1);
            } else {
                d += e;
                j = std::max(j, v.idx);
            }
        }
        return {d, j};
    }
    // tuples with summed coordinate count <= P and summed jet order <= J
    TupleFilter total_bound(int J, int P) const {
        return [this, J, P](const std::vector<const Poly*>& t) {
            int d = 0, j = 0;
            for (auto* p : t) {
                auto [a, b] = profile(*p);
                d += a;
                j += b;
            }
            return d <= P && j <= J;
        };
    }

    // split a vector-field state into terms coeff * tau_i^(k): (sign*coefficient, i, k)
    struct FrameTerm {
        Poly coeff;
        int frame;
        int order;
    };
    std::vector<FrameTerm> decompose(const Poly& xi) const {
        std::vector<FrameTerm> out;
        for (auto& [m, c] : xi.terms()) {
            if (V_.momentum_count(m) != 1) throw input_error("expected a vector-field state");
            const Var& P = m.f[0].first;  // momenta sort first
            Monomial rest = m;
            rest.f.erase(rest.f.begin());
            int k = P.idx - 1;
            Scalar s = c / factorial(k);
            if (P.par & rest.parity()) s = -s;
            out.push_back({mono_poly(rest) * s, P.gen, k});
        }
        return out;
    }

private:
    BgSystem V_;
};

// ---------------------------------------------------------------------------
// J-inf A multilinear cochains C^n(J-inf T_A, J-inf A), stored on frame tuples.

struct FrameCochain {
    int arity = 1;
    int parity = 0;
    std::map<std::vector<int>, StarValue> values;

    StarValue at(const std::vector<int>& idx) const {
        auto it = values.find(idx);
        return it == values.end() ? StarValue(arity) : it->second;
    }
    void set(const std::vector<int>& idx, const StarValue& v) {
        if (v.is_zero())
            values.erase(idx);
        else
            values[idx] = v;
    }
    bool is_zero() const { return values.empty(); }
    friend bool operator==(const FrameCochain& a, const FrameCochain& b) {
        return a.arity == b.arity && a.values == b.values;
    }
};

inline FrameCochain operator+(const FrameCochain& a, const FrameCochain& b) {
    FrameCochain r = a;
    for (auto& [k, v] : b.values) r.set(k, r.at(k) + v);
    return r;
}
inline FrameCochain operator*(const Scalar& s, const FrameCochain& a) {
    FrameCochain r{a.arity, a.parity, {}};
    for (auto& [k, v] : a.values) r.set(k, v * s);
    return r;
}

inline std::vector<std::vector<int>> frame_tuples(int nframe, int arity) {
    std::vector<std::vector<int>> out;
    std::vector<int> t(arity, 0);
    while (true) {
        out.push_back(t);
        int k = arity - 1;
        while (k >= 0 && ++t[k] == nframe) t[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

// multiply the value by (-d_s)^k (every symbol explicit), then normalize
inline StarValue shift_slot(const StarValue& v, int s, int k) {
    if (k == 0) return v;
    StarValue out(v.arity);
    for (auto& [e, c] : v.terms) {
        std::vector<int> ne(e);
        ne[s] += k;
        out.add(ne, (k & 1) ? -c : c);
    }
    return out;
}

// f in slot s < n acts by sum_k (T^k f / k!) (d/d d_s)^k; in the last slot by multiplication
inline StarValue multiply_slot(const StarValue& v, int s, const Poly& f, const Translator& T) {
    StarValue out(v.arity);
    if (s == v.arity - 1) {
        for (auto& [e, c] : v.terms) out.add(e, f * c);
        return out;
    }
    for (auto& [e, c] : v.terms) {
        Poly Tf = f;
        Scalar fall = 1;
        for (int k = 0; k <= e[s]; ++k) {
            if (k > 0) {
                Tf = T(Tf);
                fall *= Scalar(e[s] - k + 1);
            }
            if (Tf.is_zero()) break;
            std::vector<int> ne(e);
            ne[s] -= k;
            out.add(ne, Tf * c * (fall / factorial(k)));
        }
    }
    return out;
}

inline StarValue evaluate_cochain(const JetTangent& J, const FrameCochain& phi, const std::vector<Poly>& args) {
    if (static_cast<int>(args.size()) != phi.arity) throw input_error("cochain arity mismatch");
    Translator T = J.translator();
    int n = phi.arity;
    std::vector<std::vector<JetTangent::FrameTerm>> dec;
    for (auto& a : args) dec.push_back(J.decompose(J.momentum_part(a, 1)));
    StarValue total(n);
    std::vector<size_t> pick(n, 0);
    for (auto& d : dec)
        if (d.empty()) return total;
    while (true) {
        std::vector<int> idx(n);
        for (int s = 0; s < n; ++s) idx[s] = dec[s][pick[s]].frame;
        StarValue v = phi.at(idx);
        if (!v.is_zero()) {
            for (int s = 0; s < n; ++s) v = shift_slot(v, s, dec[s][pick[s]].order);
            v = normalize(v, T);
            int sign = 0, ptau = 0;
            for (int s = 0; s < n; ++s) {
                const Poly& f = dec[s][pick[s]].coeff;
                sign += state_parity(f) * (phi.parity + ptau);
                ptau += J.frame_parity(idx[s]);
            }
            for (int s = n - 1; s >= 0; --s) v = multiply_slot(v, s, dec[s][pick[s]].coeff, T);
            if (sign & 1) v *= Scalar(-1);
            total += v;
        }
        int k = n - 1;
        while (k >= 0 && ++pick[k] == dec[k].size()) pick[k--] = 0;
        if (k < 0) break;
    }
    return total;
}

inline StarOp cochain_op(const JetTangent& J, const FrameCochain& phi) {
    return StarOp{phi.arity, phi.parity, [J, phi](const std::vector<Poly>& a) { return evaluate_cochain(J, phi, a); }};
}

inline FrameCochain from_frame_values(const JetTangent& J, const StarOp& op, int parity) {
    FrameCochain c{op.arity, parity, {}};
    for (auto& t : frame_tuples(J.nframe(), op.arity)) {
        std::vector<Poly> a;
        for (int i : t) a.push_back(J.frame(i));
        c.set(t, op(a));
    }
    return c;
}

inline FrameCochain antisymmetrize(const JetTangent& J, const FrameCochain& phi) {
    StarOp op = cochain_op(J, phi);
    StarOp acc{phi.arity, phi.parity, [](const std::vector<Poly>& a) { return StarValue(static_cast<int>(a.size())); }};
    std::vector<StarOp> terms;
    for (auto& s : all_perms(phi.arity)) terms.push_back(sigma_act(s, op, J.translator()));
    std::vector<Perm> perms = all_perms(phi.arity);
    StarOp sum{phi.arity, phi.parity, [terms, perms](const std::vector<Poly>& a) {
                   StarValue v(static_cast<int>(a.size()));
                   for (size_t i = 0; i < terms.size(); ++i) {
                       StarValue t = terms[i](a);
                       if (perm_sign(perms[i]) < 0) t *= Scalar(-1);
                       v += t;
                   }
                   return v;
               }};
    FrameCochain out = from_frame_values(J, sum, phi.parity);
    return (Scalar(1) / factorial(phi.arity)) * out;
}

// sigma_i brings argument i to the front, sigma_ij brings i, j to the front
inline Perm front_perm(int n, const std::vector<int>& front) {
    Perm p(front.begin(), front.end());
    for (int k = 1; k <= n; ++k)
        if (std::find(front.begin(), front.end(), k) == front.end()) p.push_back(k);
    return p;
}

// Chevalley differential with front-insertion permutation corrections:
// d phi(l_1..l_{n+1}) = sum_i (-1)^{i+1} sigma_i . mu(l_i, phi(..^i..))
//                     + sum_{i<j} (-1)^{i+j} sigma_ij . phi([l_i,l_j], ..^i..^j..)
inline StarValue chevalley_d_eval(const JetTangent& J, const StarOp& phi, const LieStar& L,
                                  const std::vector<Poly>& l) {
    int N = static_cast<int>(l.size());
    int n = N - 1;
    Translator T = J.translator();
    std::vector<int> par = parities(l);
    StarValue total(N);
    for (int i = 1; i <= N; ++i) {
        Perm s = front_perm(N, {i});
        std::vector<Poly> rest;
        for (int k = 2; k <= N; ++k) rest.push_back(l[s[k - 1] - 1]);
        StarValue inner = phi(rest);
        StarValue comp(N);
        for (auto& [e, f] : inner.terms) {
            StarValue act = J.action(l[i - 1], f);
            for (auto& [ea, g] : act.terms) {
                std::vector<int> ne(N, 0);
                ne[0] = ea[0];
                for (int k = 0; k < n - 1; ++k) ne[k + 1] = e[k];
                comp.add(ne, g);
            }
        }
        StarValue v = sigma_apply(s, comp, par, T);
        int sign = (i + 1) + par[i - 1] * phi.parity;
        if (sign & 1) v *= Scalar(-1);
        total += v;
    }
    for (int i = 1; i <= N; ++i)
        for (int j = i + 1; j <= N; ++j) {
            Perm s = front_perm(N, {i, j});
            StarValue br = bracket_value(L, l[i - 1], l[j - 1]);
            StarValue comp(N);
            for (auto& [eb, c] : br.terms) {
                if (c.is_zero()) continue;
                std::vector<Poly> args{c};
                for (int k = 3; k <= N; ++k) args.push_back(l[s[k - 1] - 1]);
                StarValue inner = phi(args);
                StarValue part(N);
                for (auto& [e, g] : inner.terms) {
                    std::vector<int> ne(N, 0);
                    ne[0] = eb[0];
                    for (int k = 1; k < n; ++k) ne[k + 1] = e[k];
                    StarValue one(N);
                    one.add(ne, g);
                    std::vector<int> pair_syms = (N == 2) ? std::vector<int>{0} : std::vector<int>{0, 1};
                    part += times_symbol_sum(one, pair_syms, e.empty() ? 0 : (n >= 2 ? e[0] : 0));
                }
                comp += part;
            }
            StarValue v = sigma_apply(s, normalize(comp, T), par, T);
            if ((i + j) & 1) v *= Scalar(-1);
            total += v;
        }
    return normalize(total, T);
}

inline FrameCochain chevalley_d(const JetTangent& J, const FrameCochain& phi, const LieStar& L) {
    StarOp op = cochain_op(J, phi);
    StarOp d{phi.arity + 1, (phi.parity + 1) & 1,
             [&J, op, L](const std::vector<Poly>& a) { return chevalley_d_eval(J, op, L, a); }};
    FrameCochain out = from_frame_values(J, d, phi.parity);
    out.parity = phi.parity;
    return out;
}

// phi(.., f a_s, ..) against the J-inf A multilinearity rule
struct MultilinearityReport {
    long checked = 0;
    std::vector<Witness> failures;
    bool ok() const { return failures.empty(); }
};

inline MultilinearityReport multilinearity_check(const StarOp& phi, const Translator& T, const std::vector<Poly>& scalars,
                                                 const std::vector<std::vector<Poly>>& tuples,
                                                 const std::function<Poly(const Poly&, const Poly&)>& mult,
                                                 int max_failures = 10) {
    MultilinearityReport rep;
    for (auto& t : tuples)
        for (auto& f : scalars)
            for (int s = 0; s < phi.arity; ++s) {
                ++rep.checked;
                std::vector<Poly> a = t;
                a[s] = mult(f, t[s]);
                StarValue lhs = phi(a);
                StarValue rhs = multiply_slot(phi(t), s, f, T);
                int sign = phi.parity;
                for (int k = 0; k < s; ++k) sign += state_parity(t[k]);
                if ((sign * state_parity(f)) & 1) rhs *= Scalar(-1);
                StarValue diff = normalize(lhs - rhs, T);
                if (!diff.is_zero() && static_cast<int>(rep.failures.size()) < max_failures) {
                    Poly r;
                    for (auto& [e, c] : diff.terms) r += c;
                    rep.failures.push_back({"multilinearity", a, {s}, r});
                }
            }
    return rep;
}

}  // namespace chiralis
