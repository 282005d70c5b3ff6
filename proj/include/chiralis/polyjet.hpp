#pragma once

#include <map>
#include <string>
#include <vector>

#include "poly.hpp"

namespace chiralis {

struct Generator {
    std::string name;
    ParityDegree pd;
};

// Polynomial super algebra with an odd differential D of degree +1.
// Jet variables x_i^(k) are Var{i, k, 0, parity}; differentials dx_i^(k) have form = 1.
class SuperPolyAlgebra {
public:
    SuperPolyAlgebra() = default;
    SuperPolyAlgebra(std::vector<Generator> gens, std::vector<Poly> diff = {}) : gens_(std::move(gens)), D_(std::move(diff)) {
        if (D_.empty()) D_.assign(gens_.size(), Poly());
        if (D_.size() != gens_.size()) throw input_error("differential must list one image per generator");
        for (size_t i = 0; i < gens_.size(); ++i) {
            for (auto& [m, c] : D_[i].terms()) {
                for (auto& [v, e] : m.f)
                    if (v.gen < 0 || v.gen >= ngens() || v.idx != 0 || v.form != 0)
                        throw input_error("differential image of " + gens_[i].name + " uses an unknown variable");
                if (m.parity() != ((gens_[i].pd.parity + 1) & 1))
                    throw input_error("D(" + gens_[i].name + ") has the wrong parity");
                if (degree(m) != gens_[i].pd.degree + 1)
                    throw input_error("D(" + gens_[i].name + ") is not of degree +1");
            }
        }
        for (int i = 0; i < ngens(); ++i)
            if (!D(D(var(i))).is_zero()) throw input_error("D^2 != 0 on generator " + gens_[i].name);
    }

    int ngens() const { return static_cast<int>(gens_.size()); }
    const std::vector<Generator>& generators() const { return gens_; }
    const Generator& gen(int i) const { return gens_.at(i); }
    const Poly& D_image(int i) const { return D_.at(i); }
    int parity(int i) const { return gens_.at(i).pd.parity & 1; }

    Var jvar(int i, int k = 0) const { return Var{i, k, 0, parity(i)}; }
    Var dvar(int i, int k = 0) const { return Var{i, k, 1, parity(i)}; }
    Poly var(int i, int k = 0) const { return Poly::var(jvar(i, k)); }
    Poly dx(int i, int k = 0) const { return Poly::var(dvar(i, k)); }

    int degree(const Monomial& m) const {
        int d = 0;
        for (auto& [v, e] : m.f) d += gens_.at(v.gen).pd.degree * e;
        return d;
    }

    bool has_differential() const {
        for (auto& p : D_)
            if (!p.is_zero()) return true;
        return false;
    }

    // jet translation: x^(k) -> x^(k+1), dx^(k) -> dx^(k+1)
    Poly translate(const Poly& p) const {
        return derive(p, 0, 0, [](const Var& v) { return Poly::var(Var{v.gen, v.idx + 1, v.form, v.par}); });
    }
    Poly translate(const Poly& p, int times) const {
        Poly r = p;
        for (int i = 0; i < times; ++i) r = translate(r);
        return r;
    }

    // D extended to jets by D(x^(k)) = T^k D(x); on forms it is the Lie derivative.
    Poly D(const Poly& p) const {
        return derive(p, 0, 1, [&](const Var& v) {
            Poly img = translate(D_[v.gen], v.idx);
            return v.form ? derham_d(img) : img;
        });
    }

    Poly derham_d(const Poly& p) const {
        return derive(p, 1, 0, [](const Var& v) { return v.form ? Poly() : Poly::var(Var{v.gen, v.idx, 1, v.par}); });
    }

    std::string name(const Var& v) const {
        std::string s = (v.form ? "d" : "") + gens_.at(v.gen).name;
        if (v.idx > 0) s += "^(" + std::to_string(v.idx) + ")";
        return s;
    }
    std::string format(const Poly& p) const {
        return format_poly(p, [this](const Var& v) { return name(v); });
    }

private:
    std::vector<Generator> gens_;
    std::vector<Poly> D_;
};

inline int form_degree(const Monomial& m) {
    int s = 0;
    for (auto& [v, e] : m.f) s += v.form * e;
    return s;
}

inline int jet_weight(const Monomial& m) {
    int s = 0;
    for (auto& [v, e] : m.f) s += v.idx * e;
    return s;
}

inline Poly form_part(const Poly& p, int deg) {
    return p.filter([deg](const Monomial& m) { return form_degree(m) == deg; });
}

// Lie derivative along D on forms over A (or J-infinity A); commutes with d.
inline Poly lie_D(const SuperPolyAlgebra& A, const Poly& omega) { return A.D(omega); }

inline Poly derham_d(const SuperPolyAlgebra& A, const Poly& omega) { return A.derham_d(omega); }

inline bool is_closed(const SuperPolyAlgebra& A, const Poly& omega) { return A.derham_d(omega).is_zero(); }

// Finitely supported family {alpha_n}; alpha_n has form degree n and internal degree t - n.
struct TotalForm {
    int total_degree = 0;
    std::map<int, Poly> comp;

    Poly get(int n) const {
        auto it = comp.find(n);
        return it == comp.end() ? Poly() : it->second;
    }
    void set(int n, const Poly& p) {
        if (p.is_zero())
            comp.erase(n);
        else
            comp[n] = p;
    }
    bool is_zero() const { return comp.empty(); }
    int max_form_degree() const { return comp.empty() ? 0 : comp.rbegin()->first; }
    int min_form_degree() const { return comp.empty() ? 0 : comp.begin()->first; }
    friend bool operator==(const TotalForm& a, const TotalForm& b) { return a.comp == b.comp; }
};

inline TotalForm operator+(const TotalForm& a, const TotalForm& b) {
    TotalForm r{a.total_degree, {}};
    for (auto& [n, p] : a.comp) r.set(n, p);
    for (auto& [n, p] : b.comp) r.set(n, r.get(n) + p);
    return r;
}

inline TotalForm operator*(const Scalar& s, const TotalForm& a) {
    TotalForm r{a.total_degree, {}};
    for (auto& [n, p] : a.comp) r.set(n, p * s);
    return r;
}

// (d + (-1)^p Lie_D) componentwise
inline TotalForm total_d(const SuperPolyAlgebra& A, const TotalForm& a) {
    TotalForm r{a.total_degree + 1, {}};
    for (auto& [n, p] : a.comp) {
        r.set(n + 1, r.get(n + 1) + A.derham_d(p));
        Poly l = A.D(p);
        r.set(n, r.get(n) + ((n & 1) ? -l : l));
    }
    return r;
}

inline bool is_closed(const SuperPolyAlgebra& A, const TotalForm& a) { return total_d(A, a).is_zero(); }

// Vector field sum_i c_i d/dx_i with coefficients on the left.
struct VectorField {
    std::vector<Poly> c;

    bool is_zero() const {
        for (auto& p : c)
            if (!p.is_zero()) return false;
        return true;
    }
    friend bool operator==(const VectorField& a, const VectorField& b) { return a.c == b.c; }
    friend bool operator<(const VectorField& a, const VectorField& b) { return a.c < b.c; }
};

inline VectorField frame_field(const SuperPolyAlgebra& A, int i, const Poly& coeff = Poly(1)) {
    VectorField X{std::vector<Poly>(A.ngens())};
    X.c[i] = coeff;
    return X;
}

inline VectorField D_field(const SuperPolyAlgebra& A) {
    VectorField X{std::vector<Poly>(A.ngens())};
    for (int i = 0; i < A.ngens(); ++i) X.c[i] = A.D_image(i);
    return X;
}

inline int field_parity(const SuperPolyAlgebra& A, const VectorField& X) {
    for (int i = 0; i < A.ngens(); ++i)
        for (auto& [m, c] : X.c[i].terms()) return (m.parity() + A.parity(i)) & 1;
    return 0;
}

inline Poly apply_field(const SuperPolyAlgebra& A, const VectorField& X, const Poly& f) {
    Poly r;
    for (int i = 0; i < A.ngens(); ++i)
        if (!X.c[i].is_zero()) r += X.c[i] * partial(f, A.jvar(i));
    return r;
}

inline VectorField field_bracket(const SuperPolyAlgebra& A, const VectorField& X, const VectorField& Y) {
    int s = (field_parity(A, X) * field_parity(A, Y)) & 1;
    VectorField Z{std::vector<Poly>(A.ngens())};
    for (int i = 0; i < A.ngens(); ++i) {
        Poly yx = apply_field(A, Y, X.c[i]);
        Z.c[i] = apply_field(A, X, Y.c[i]) - (s ? -yx : yx);
    }
    return Z;
}

inline VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}

inline VectorField operator*(const Poly& f, const VectorField& X) {
    VectorField r = X;
    for (auto& p : r.c) p = f * p;
    return r;
}

// Contraction with X: derivation lowering form degree, dx_i -> X^i.
inline Poly contract(const SuperPolyAlgebra& A, const VectorField& X, const Poly& omega) {
    int px = field_parity(A, X);
    return derive(omega, 1, px, [&](const Var& v) { return v.form && v.idx == 0 ? X.c[v.gen] : Poly(); });
}

// omega(X_1, ..., X_n) := i_{X_1} ... i_{X_n} omega
inline Poly evaluate_form(const SuperPolyAlgebra& A, const Poly& omega, const std::vector<VectorField>& X) {
    Poly r = omega;
    for (size_t k = X.size(); k-- > 0;) r = contract(A, X[k], r);
    return form_part(r, 0);
}

}  // namespace chiralis
