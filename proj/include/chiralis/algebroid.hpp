#pragma once

#include <memory>
#include <optional>
#include <tuple>

#include "starop.hpp"

namespace chiralis {

// jet polynomial x_i^(k) over A as the Fock state k! x_{i,-k}
inline Poly fock_function(const BgSystem& V, const Poly& f) {
    return substitute(f, [&](const Var& v) {
        if (v.form) throw input_error("expected a function, got a form");
        return V.x(v.gen, -v.idx) * factorial(v.idx);
    });
}

inline Poly star_value_sum(const StarValue& v) {
    Poly r;
    for (auto& [e, c] : v.terms) r += c;
    return r;
}

// ---------------------------------------------------------------------------
// The J-inf A module structure on F_1: all products f_(n) s, n in Z, tabulated on a window.

struct ModuleTable {
    std::vector<Poly> functions, states;
    int nmin = -2, nmax = 1;
    std::map<std::tuple<Poly, int, Poly>, Poly> entries;

    friend bool operator==(const ModuleTable&, const ModuleTable&) = default;
};

inline ModuleTable module_table(const BgSystem& V, std::vector<Poly> functions, std::vector<Poly> states, int nmin,
                                int nmax) {
    ModuleTable t{std::move(functions), std::move(states), nmin, nmax, {}};
    for (auto& f : t.functions)
        for (int n = nmin; n <= nmax; ++n)
            for (auto& s : t.states) {
                Poly v = V.product(f, n, s);
                if (!v.is_zero()) t.entries[{f, n, s}] = v;
            }
    return t;
}

// ---------------------------------------------------------------------------
// Chiral algebroids over A: F_1 of the beta-gamma-bc system with the frame splitting,
// bracket = Fock products (n >= 0) plus a J-inf A valued 2-cochain on the symbols.

class ChiralAlgebroid {
public:
    ChiralAlgebroid() = default;
    ChiralAlgebroid(std::shared_ptr<const JetTangent> J, FrameCochain alpha, ModuleTable module)
        : J_(std::move(J)), alpha_(std::move(alpha)), module_(std::move(module)) {}

    const JetTangent& tangent() const { return *J_; }
    std::shared_ptr<const JetTangent> tangent_ptr() const { return J_; }
    const BgSystem& fock() const { return J_->fock(); }
    const FrameCochain& twist() const { return alpha_; }
    const ModuleTable& module() const { return module_; }

    Poly product(const Poly& a, int n, const Poly& b) const {
        if (n < 0) throw input_error("Lie* products need n >= 0");
        Poly r = fock().product(a, n, b);
        if (!alpha_.is_zero()) {
            std::vector<int> e{n, 0};
            r += evaluate_cochain(*J_, alpha_, {a, b}).coeff(e) * factorial(n);
        }
        return r;
    }
    int bound(const Poly& a, const Poly& b) const { return fock().max_weight(a) + fock().max_weight(b) + 1; }

    LieStar lie_star() const {
        auto self = std::make_shared<ChiralAlgebroid>(*this);
        return LieStar{[self](const Poly& p) { return self->fock().translate(p); },
                       [self](const Poly& a, int n, const Poly& b) { return self->product(a, n, b); },
                       [self](const Poly& a, const Poly& b) { return self->bound(a, b); }};
    }

    // f_(n) s for f in J-inf A; the stored table is authoritative on its window
    Poly module_product(const Poly& f, int n, const Poly& s) const {
        auto it = module_.entries.find({f, n, s});
        if (it != module_.entries.end()) return it->second;
        if (std::find(module_.functions.begin(), module_.functions.end(), f) != module_.functions.end() &&
            std::find(module_.states.begin(), module_.states.end(), s) != module_.states.end() && n >= module_.nmin &&
            n <= module_.nmax)
            return Poly();
        return fock().product(f, n, s);
    }

private:
    std::shared_ptr<const JetTangent> J_;
    FrameCochain alpha_;
    ModuleTable module_;
};

struct AlgebroidWindow {
    int jet_order = 1;
    int poly_degree = 1;
};

inline std::vector<Poly> algebroid_window(const JetTangent& J, const AlgebroidWindow& w, bool with_functions = true) {
    std::vector<Poly> out = J.tangent_window(w.jet_order, w.poly_degree);
    if (with_functions)
        for (auto& f : J.coefficient_window(w.jet_order, w.poly_degree))
            if (!f.is_zero() && !(f == Poly(1))) out.push_back(f);
    return out;
}

inline ChiralAlgebroid standard_chiral_algebroid(const SuperPolyAlgebra& A, const AlgebroidWindow& module_window = {}) {
    auto J = std::make_shared<JetTangent>(BgSystem(A));
    std::vector<Poly> fs = J->coefficient_window(module_window.jet_order, module_window.poly_degree);
    std::vector<Poly> ss = algebroid_window(*J, module_window);
    ModuleTable t = module_table(J->fock(), fs, ss, -2, 1);
    return ChiralAlgebroid(J, FrameCochain{2, 0, {}}, std::move(t));
}

inline bool is_antisymmetric(const JetTangent& J, const FrameCochain& alpha) { return antisymmetrize(J, alpha) == alpha; }

inline ChiralAlgebroid twist_chiral(const ChiralAlgebroid& L, const FrameCochain& alpha) {
    if (alpha.arity != 2) throw input_error("a chiral twist needs a 2-cochain");
    if (alpha.parity != 0) throw input_error("a chiral twist needs an even cochain");
    if (!is_antisymmetric(L.tangent(), alpha)) throw input_error("twisting cochain is not antisymmetric");
    return ChiralAlgebroid(L.tangent_ptr(), L.twist() + alpha, L.module());
}

// xi -> xi + beta(xi); identifies the twist by chevalley_d(beta) with the untwisted bracket
inline Poly shift_by_cochain(const JetTangent& J, const FrameCochain& beta, const Poly& a) {
    if (beta.arity != 1) throw input_error("expected a 1-cochain");
    return a + star_value_sum(evaluate_cochain(J, beta, {a}));
}

// the module action of M agrees with the stored table of L, entry by entry
inline bool module_unchanged(const ChiralAlgebroid& L, const ChiralAlgebroid& M) {
    if (!(L.module() == M.module())) return false;
    for (auto& [key, v] : L.module().entries) {
        auto& [f, n, s] = key;
        if (!(M.module_product(f, n, s) == v)) return false;
        if (!(M.fock().product(f, n, s) == v)) return false;
    }
    return true;
}

// a_(m) b_(n) c - b_(n) a_(m) c - sum_j C(m,j) (a_(j) b)_(m+n-j) c for a frame field a, b in J-inf A,
// m negative allowed
inline Poly extended_commutator_residual(const ChiralAlgebroid& L, const Poly& a, const Poly& b, const Poly& c, int m,
                                         int n) {
    const BgSystem& V = L.fock();
    Poly r = V.product(a, m, V.product(b, n, c));
    Poly ba = V.product(b, n, V.product(a, m, c));
    r -= (state_parity(a) & state_parity(b)) ? -ba : ba;
    int nb = V.max_weight(a) + V.max_weight(b);
    for (int j = 0; j <= nb; ++j) {
        Scalar k = binomial(m, j);
        if (sgn(k) == 0) continue;
        Poly ab = L.product(a, j, b);
        if (!ab.is_zero()) r -= V.product(ab, m + n - j, c) * k;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Forms on A as twisting data.

inline Poly form_on_frames(const SuperPolyAlgebra& A, const Poly& omega, const std::vector<int>& frames) {
    std::vector<VectorField> X;
    for (int i : frames) X.push_back(frame_field(A, i));
    return evaluate_form(A, omega, X);
}

// alpha(tau_i, tau_j) = sum_k alpha0(d_i, d_j, d_k) x_{k,-1}, no closedness check
inline FrameCochain graded_form_cochain(const JetTangent& J, const Poly& alpha0) {
    const SuperPolyAlgebra& A = J.base();
    FrameCochain c{2, 0, {}};
    for (auto& t : frame_tuples(J.nframe(), 2)) {
        Poly v;
        for (int k = 0; k < J.nframe(); ++k) {
            Poly a = form_on_frames(A, alpha0, {t[0], t[1], k});
            if (!a.is_zero()) v += fock_function(J.fock(), a) * J.fock().x(k, -1);
        }
        c.set(t, StarValue::constant(2, v));
    }
    return c;
}

// beta(tau_i) = sum_j beta0(d_i, d_j) x_{j,-1}
inline FrameCochain graded_form_cochain_1(const JetTangent& J, const Poly& beta0) {
    const SuperPolyAlgebra& A = J.base();
    FrameCochain c{1, 0, {}};
    for (int i = 0; i < J.nframe(); ++i) {
        Poly v;
        for (int j = 0; j < J.nframe(); ++j) {
            Poly a = form_on_frames(A, beta0, {i, j});
            if (!a.is_zero()) v += fock_function(J.fock(), a) * J.fock().x(j, -1);
        }
        c.set({i}, StarValue::constant(1, v));
    }
    return c;
}

struct form_not_closed : input_error {
    Poly d_value;
    form_not_closed(const std::string& what, Poly d) : input_error(what), d_value(std::move(d)) {}
};

inline FrameCochain graded_form_functor(const JetTangent& J, const Poly& alpha0) {
    for (auto& [m, c] : alpha0.terms())
        if (form_degree(m) != 3) throw input_error("expected a 3-form");
    Poly d = J.base().derham_d(alpha0);
    if (!d.is_zero()) throw form_not_closed("3-form is not closed: d = " + J.base().format(d), d);
    return graded_form_cochain(J, alpha0);
}

// weight-0 part: beta(tau_i, tau_j) = beta0(d_i, d_j) placed in the (0)-product
inline FrameCochain filtered_form_cochain(const JetTangent& J, const Poly& beta0) {
    FrameCochain c{2, 0, {}};
    for (auto& t : frame_tuples(J.nframe(), 2)) {
        Poly a = form_on_frames(J.base(), beta0, t);
        if (!a.is_zero()) c.set(t, StarValue::constant(2, fock_function(J.fock(), a)));
    }
    return c;
}

inline ChiralAlgebroid filtered_twist(const ChiralAlgebroid& L, const Poly& alpha0, const Poly& beta0) {
    const SuperPolyAlgebra& A = L.tangent().base();
    Poly d2 = A.derham_d(beta0);
    if (!d2.is_zero()) throw form_not_closed("2-form is not closed: d = " + A.format(d2), d2);
    FrameCochain c = alpha0.is_zero() ? FrameCochain{2, 0, {}} : graded_form_functor(L.tangent(), alpha0);
    return twist_chiral(L, c + filtered_form_cochain(L.tangent(), beta0));
}

// Change of splitting tau_i -> tau_i - 1/2 sum_j a1(tau_i, tau_j) x_{j,-1}, where a1 is the
// coefficient of the first symbol in the twist; returns the twist in the new splitting.
inline std::vector<Poly> normalized_frames(const ChiralAlgebroid& L) {
    const JetTangent& J = L.tangent();
    std::vector<Poly> out;
    for (int i = 0; i < J.nframe(); ++i) {
        Poly t = J.frame(i);
        for (int j = 0; j < J.nframe(); ++j) {
            Poly a1 = L.twist().at({i, j}).coeff({1, 0});
            if (!a1.is_zero()) t -= a1 * J.fock().x(j, -1) * Scalar(1, 2);
        }
        out.push_back(t);
    }
    return out;
}

inline FrameCochain normalize_splitting(const ChiralAlgebroid& L) {
    const JetTangent& J = L.tangent();
    std::vector<Poly> tau = normalized_frames(L);
    FrameCochain c{2, 0, {}};
    for (auto& t : frame_tuples(J.nframe(), 2)) {
        StarValue v(2);
        const Poly &a = tau[t[0]], &b = tau[t[1]];
        for (int n = 0; n <= L.bound(a, b); ++n) {
            Poly p = J.momentum_part(L.product(a, n, b), 0);
            if (!p.is_zero()) v.add({n, 0}, p * (Scalar(1) / factorial(n)));
        }
        c.set(t, v);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Lie*-infinity structures: families of antisymmetric *-operations l_n of parity n mod 2.

struct StarInfty {
    int nmax = 3;
    Translator T;
    std::vector<StarOp> l;

    const StarOp* op(int n) const {
        return n >= 1 && n < static_cast<int>(l.size()) && l[n].eval ? &l[n] : nullptr;
    }
    void add(int n, const StarOp& f) {
        if (n < 1 || n > nmax) throw input_error("operation outside the arity window");
        if (static_cast<int>(l.size()) <= n) l.resize(n + 1);
        if (!l[n].eval) {
            l[n] = f;
            return;
        }
        StarOp a = l[n];
        l[n] = StarOp{n, a.parity, [a, f](const std::vector<Poly>& x) { return a(x) + f(x); }};
    }
};

// l_j(c, rest...) for the inner value c = sum c_e d^e of arity i; the outer first symbol is
// d_1 + ... + d_i, the others shift to d_{i+1}, ...
inline StarValue compose_first(const StarOp& outer, const StarValue& inner, const std::vector<Poly>& rest,
                               const Translator& T) {
    int i = inner.arity, j = outer.arity, k = i + j - 1;
    std::vector<int> head(i);
    for (int s = 0; s < i; ++s) head[s] = s;
    StarValue total(k);
    for (auto& [e, c] : inner.terms) {
        std::vector<Poly> args{c};
        args.insert(args.end(), rest.begin(), rest.end());
        StarValue o = outer(args);
        for (auto& [eo, g] : o.terms) {
            std::vector<int> ne(k, 0);
            for (int s = 0; s < i; ++s) ne[s] = e[s];
            for (int t = 1; t < j; ++t) ne[i + t - 1] += eo[t];
            StarValue one(k);
            one.add(ne, g);
            total += times_symbol_sum(one, head, eo[0]);
        }
    }
    return normalize(total, T);
}

// sum_{i+j=k+1} sum_unshuffles sgn eps (-1)^{i(j-1)} sigma^{-1} . l_j(l_i(x_s1..x_si), x_s(i+1)..)
inline StarValue star_jacobi_value(const StarInfty& L, const std::vector<Poly>& x) {
    int k = static_cast<int>(x.size());
    std::vector<int> par = parities(x);
    StarValue total(k);
    for (int i = 1; i <= k; ++i) {
        int j = k + 1 - i;
        const StarOp *li = L.op(i), *lj = L.op(j);
        if (!li || !lj) continue;
        for (auto& s : unshuffles(i, k)) {
            std::vector<Poly> head(i), rest;
            for (int t = 0; t < i; ++t) head[t] = x[s[t] - 1];
            for (int t = i; t < k; ++t) rest.push_back(x[s[t] - 1]);
            StarValue inner = (*li)(head);
            if (inner.is_zero()) continue;
            StarValue v = sigma_apply(s, compose_first(*lj, inner, rest, L.T), par, L.T);
            int sign = perm_sign(s) * (((i * (j - 1)) & 1) ? -1 : 1);
            if (sign < 0) v *= Scalar(-1);
            total += v;
        }
    }
    return normalize(total, L.T);
}

struct StarWitness {
    int k = 0;
    std::vector<Poly> args;
    StarValue value;
};

struct StarJacobiReport {
    int k_max = 0;
    long tuples = 0;
    std::vector<StarWitness> failures;
    bool ok() const { return failures.empty(); }
    int first_failing_k() const { return failures.empty() ? 0 : failures.front().k; }
};

inline StarJacobiReport liestar_infty_jacobi(const StarInfty& L, const std::vector<Poly>& window, int k_max,
                                             int max_failures = 20) {
    StarJacobiReport rep;
    rep.k_max = k_max;
    int N = static_cast<int>(window.size());
    for (int k = 1; k <= k_max; ++k) {
        std::vector<int> t(k, 0);
        while (true) {
            std::vector<Poly> x;
            for (int a : t) x.push_back(window[a]);
            ++rep.tuples;
            StarValue v = star_jacobi_value(L, x);
            if (!v.is_zero() && static_cast<int>(rep.failures.size()) < max_failures) rep.failures.push_back({k, x, v});
            int p = k - 1;
            while (p >= 0 && t[p] == N - 1) --p;
            if (p < 0) break;
            ++t[p];
            for (int q = p + 1; q < k; ++q) t[q] = t[p];
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Chiral infinity-algebroids over a polynomial DGA (A, D): l_1 = Q_(0) with Q the
// Fock state of D, l_2 = Fock products on F_1, l_n += alpha_n (J-inf A valued).

class ChiralInfty {
public:
    ChiralInfty() = default;
    ChiralInfty(std::shared_ptr<const JetTangent> J, Poly Q, std::map<int, FrameCochain> alpha, ModuleTable module,
                int nmax)
        : J_(std::move(J)), Q_(std::move(Q)), alpha_(std::move(alpha)), module_(std::move(module)), nmax_(nmax) {}

    const JetTangent& tangent() const { return *J_; }
    std::shared_ptr<const JetTangent> tangent_ptr() const { return J_; }
    const BgSystem& fock() const { return J_->fock(); }
    const Poly& differential_state() const { return Q_; }
    const std::map<int, FrameCochain>& twist() const { return alpha_; }
    const ModuleTable& module() const { return module_; }
    int nmax() const { return nmax_; }

    Poly l1(const Poly& a) const { return fock().product(Q_, 0, a); }

    StarInfty structure() const {
        StarInfty L;
        L.nmax = nmax_;
        auto J = J_;
        L.T = [J](const Poly& p) { return J->fock().translate(p); };
        Poly Q = Q_;
        L.add(1, StarOp{1, 1, [J, Q](const std::vector<Poly>& a) {
                            return StarValue::constant(1, J->fock().product(Q, 0, a[0]));
                        }});
        L.add(2, StarOp{2, 0, [J](const std::vector<Poly>& a) {
                            StarValue v(2);
                            const BgSystem& V = J->fock();
                            int nb = V.max_weight(a[0]) + V.max_weight(a[1]);
                            for (int n = 0; n <= nb; ++n) v.add({n, 0}, V.product(a[0], n, a[1]) * (Scalar(1) / factorial(n)));
                            return v;
                        }});
        for (auto& [n, c] : alpha_)
            if (!c.is_zero()) L.add(n, cochain_op(*J_, c));
        return L;
    }

private:
    std::shared_ptr<const JetTangent> J_;
    Poly Q_;
    std::map<int, FrameCochain> alpha_;
    ModuleTable module_;
    int nmax_ = 3;
};

// Q = sum_i (+-) D(x_i) d_{i,-1}, the sign fixed so that Q_(0) x_i = D(x_i)
inline Poly differential_state(const BgSystem& V) {
    const SuperPolyAlgebra& A = V.base();
    Poly Q;
    for (int i = 0; i < A.ngens(); ++i) {
        Poly Di = fock_function(V, A.D_image(i));
        if (Di.is_zero()) continue;
        Poly t = Di * V.d(i, -1);
        Poly probe = V.product(t, 0, V.x(i, 0));
        Q += (probe == Di) ? t : -t;
    }
    return Q;
}

inline ChiralInfty standard_chiral_infty(const SuperPolyAlgebra& A, int nmax = 3, const AlgebroidWindow& module_window = {}) {
    auto J = std::make_shared<JetTangent>(BgSystem(A));
    std::vector<Poly> fs = J->coefficient_window(module_window.jet_order, module_window.poly_degree);
    ModuleTable t = module_table(J->fock(), fs, algebroid_window(*J, module_window), -2, 1);
    return ChiralInfty(J, differential_state(J->fock()), {}, std::move(t), nmax);
}

inline ChiralInfty chiral_infty_twist(const ChiralInfty& P, const std::map<int, FrameCochain>& alpha) {
    std::map<int, FrameCochain> sum = P.twist();
    for (auto& [n, c] : alpha) {
        if (n < 2 || n > P.nmax()) throw input_error("twist component outside arities 2..nmax");
        if (c.arity != n) throw input_error("twist component has the wrong arity");
        if (c.parity != (n & 1)) throw input_error("twist component of arity " + std::to_string(n) + " must have parity " +
                                                   std::to_string(n & 1));
        if (!is_antisymmetric(P.tangent(), c)) throw input_error("twist component is not antisymmetric");
        auto it = sum.find(n);
        if (it == sum.end())
            sum.emplace(n, c);
        else
            it->second = it->second + c;
    }
    return ChiralInfty(P.tangent_ptr(), P.differential_state(), sum, P.module(), P.nmax());
}

// F_1 basis states (at most one momentum) of weight <= max_weight with at most max_len modes
inline std::vector<Poly> infty_window(const BgSystem& V, int max_weight, int max_len) {
    std::vector<Poly> out;
    for (int w = 0; w <= max_weight; ++w)
        for (auto& b : fock_basis(V, w, max_len)) {
            if (b == Poly(1)) continue;
            if (V.momentum_count(b.terms().begin()->first) > 1) continue;
            out.push_back(b);
        }
    return out;
}

// Twist ansatz: antisymmetrized elementary cochains c * d^e on frame tuples, with
// weight(c) + |e| = 1 and parity(c) = n + sum of frame parities (mod 2); with z_graded
// the cohomological degree must match as well.
struct FamilyAnsatz {
    int min_arity = 2, max_arity = 3;
    int poly_degree = 3;
    bool z_graded = false;
};

inline std::vector<std::pair<int, FrameCochain>> twist_ansatz(const JetTangent& J, const FamilyAnsatz& a) {
    const BgSystem& V = J.fock();
    const SuperPolyAlgebra& A = J.base();
    std::vector<std::pair<int, FrameCochain>> cols;
    auto coeffs = J.coefficient_window(1, a.poly_degree);
    for (int n = a.min_arity; n <= a.max_arity; ++n)
        for (auto& t : frame_tuples(J.nframe(), n)) {
            int tp = 0, td = 0;
            for (int i : t) {
                tp += A.parity(i);
                td -= A.gen(i).pd.degree;
            }
            for (auto& c : coeffs) {
                int w = V.max_weight(c);
                if (w > 1) continue;
                if (state_parity(c) != ((n + tp) & 1)) continue;
                if (a.z_graded && V.degree(c.terms().begin()->first) != td + 2 - n) continue;
                multinomial_expand(n - 1, 1 - w, [&](const std::vector<int>& e0, const Scalar&) {
                    std::vector<int> e(e0);
                    e.push_back(0);
                    FrameCochain f{n, n & 1, {}};
                    StarValue v(n);
                    v.add(e, c);
                    f.set(t, v);
                    FrameCochain as = antisymmetrize(J, f);
                    if (!as.is_zero()) cols.push_back({n, as});
                });
            }
        }
    return cols;
}

using TwistFamily = std::map<int, FrameCochain>;

inline TwistFamily family_combination(const std::vector<std::pair<int, FrameCochain>>& cols, const Vec& k) {
    TwistFamily fam;
    for (size_t j = 0; j < k.size(); ++j) {
        if (sgn(k[j]) == 0) continue;
        FrameCochain c = k[j] * cols[j].second;
        auto it = fam.find(cols[j].first);
        if (it == fam.end())
            fam.emplace(cols[j].first, c);
        else
            it->second = it->second + c;
    }
    for (auto it = fam.begin(); it != fam.end();) it = it->second.is_zero() ? fam.erase(it) : std::next(it);
    return fam;
}

struct FamilySolve {
    std::vector<std::pair<int, FrameCochain>> columns;
    int rank = 0;
    std::vector<TwistFamily> kernel;  // closed families on the solve window
};

// The twisted Jacobi defect is linear in the family (alpha vanishes on J-inf A, so alpha o alpha = 0);
// closed families are the kernel of that linear map on the window.
inline FamilySolve solve_closed_families(const ChiralInfty& P, const FamilyAnsatz& a, const std::vector<Poly>& window,
                                         int k_max) {
    FamilySolve out;
    out.columns = twist_ansatz(P.tangent(), a);
    std::vector<std::vector<Poly>> tuples;
    int N = static_cast<int>(window.size());
    for (int k = 1; k <= k_max; ++k) {
        std::vector<int> t(k, 0);
        while (true) {
            std::vector<Poly> x;
            for (int i : t) x.push_back(window[i]);
            tuples.push_back(x);
            int p = k - 1;
            while (p >= 0 && t[p] == N - 1) --p;
            if (p < 0) break;
            ++t[p];
            for (int q = p + 1; q < k; ++q) t[q] = t[p];
        }
    }
    std::map<std::tuple<int, std::vector<int>, Monomial>, int> rows;
    std::vector<std::map<int, Scalar>> cv(out.columns.size());
    for (size_t j = 0; j < out.columns.size(); ++j) {
        StarInfty L = chiral_infty_twist(P, {out.columns[j]}).structure();
        for (size_t ti = 0; ti < tuples.size(); ++ti) {
            StarValue v = star_jacobi_value(L, tuples[ti]);
            for (auto& [e, p] : v.terms)
                for (auto& [m, c] : p.terms()) {
                    auto key = std::make_tuple(static_cast<int>(ti), e, m);
                    auto it = rows.find(key);
                    int r = it == rows.end() ? (rows[key] = static_cast<int>(rows.size())) : it->second;
                    cv[j][r] += c;
                }
        }
    }
    SparseMatrix M(static_cast<int>(rows.size()), static_cast<int>(out.columns.size()));
    for (size_t j = 0; j < cv.size(); ++j)
        for (auto& [r, c] : cv[j]) M.set(r, static_cast<int>(j), c);
    RankKernel rk = rank_kernel(M);
    out.rank = rk.rank;
    for (auto& k : rk.kernel) {
        TwistFamily f = family_combination(out.columns, k);
        if (!f.empty()) out.kernel.push_back(std::move(f));
    }
    return out;
}

// first kernel family whose top-arity component cannot be dropped on the window
inline std::optional<TwistFamily> essential_family(const ChiralInfty& P, const FamilySolve& s,
                                                   const std::vector<Poly>& window, int k_max) {
    for (auto& f : s.kernel) {
        if (f.size() < 2) continue;
        TwistFamily cut = f;
        cut.erase(std::prev(cut.end()));
        if (!liestar_infty_jacobi(chiral_infty_twist(P, cut).structure(), window, k_max, 1).ok()) return f;
    }
    return std::nullopt;
}

}  // namespace chiralis
