#pragma once

#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "exact.hpp"

namespace chiralis {

// A polynomial variable. `gen` names a generator, `idx` a jet order or mode weight.
// Two variables a, b commute up to (-1)^(form_a*form_b + par_a*par_b);
// a variable is nilpotent when form+par is odd.
struct Var {
    int gen = 0;
    int idx = 0;
    int form = 0;
    int par = 0;

    friend bool operator==(const Var& a, const Var& b) {
        return a.gen == b.gen && a.idx == b.idx && a.form == b.form;
    }
    friend bool operator<(const Var& a, const Var& b) {
        if (a.form != b.form) return a.form < b.form;
        if (a.gen != b.gen) return a.gen < b.gen;
        return a.idx > b.idx;
    }
    bool nilpotent() const { return ((form + par) & 1) != 0; }
};

inline int swap_exp(int fa, int pa, int fb, int pb) { return (fa * fb + pa * pb) & 1; }
inline int swap_exp(const Var& a, const Var& b) { return swap_exp(a.form, a.par, b.form, b.par); }

struct Monomial {
    std::vector<std::pair<Var, int>> f;

    friend bool operator<(const Monomial& a, const Monomial& b) {
        size_t n = std::min(a.f.size(), b.f.size());
        for (size_t i = 0; i < n; ++i) {
            if (a.f[i].first < b.f[i].first) return true;
            if (b.f[i].first < a.f[i].first) return false;
            if (a.f[i].second != b.f[i].second) return a.f[i].second < b.f[i].second;
        }
        return a.f.size() < b.f.size();
    }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        if (a.f.size() != b.f.size()) return false;
        for (size_t i = 0; i < a.f.size(); ++i)
            if (!(a.f[i].first == b.f[i].first) || a.f[i].second != b.f[i].second) return false;
        return true;
    }

    int form_parity() const {
        int s = 0;
        for (auto& [v, e] : f) s += v.form * e;
        return s & 1;
    }
    int parity() const {
        int s = 0;
        for (auto& [v, e] : f) s += v.par * e;
        return s & 1;
    }
    int length() const {
        int s = 0;
        for (auto& [v, e] : f) s += e;
        return s;
    }
    int exponent(const Var& v) const {
        for (auto& [w, e] : f)
            if (w == v) return e;
        return 0;
    }
};

// returns 0 if the product vanishes, otherwise +-1 with the merged monomial in `out`
inline int mono_mul(const Monomial& a, const Monomial& b, Monomial& out) {
    out.f.clear();
    out.f.reserve(a.f.size() + b.f.size());
    int sign = 0;
    size_t i = 0, j = 0;
    // sign: every factor of b crossing a factor of a that sorts after it
    for (auto& [vb, eb] : b.f)
        for (auto& [va, ea] : a.f)
            if (vb < va) sign += ea * eb * swap_exp(va, vb);
    while (i < a.f.size() || j < b.f.size()) {
        if (j == b.f.size() || (i < a.f.size() && a.f[i].first < b.f[j].first)) {
            out.f.push_back(a.f[i++]);
        } else if (i == a.f.size() || b.f[j].first < a.f[i].first) {
            out.f.push_back(b.f[j++]);
        } else {
            if (a.f[i].first.nilpotent()) return 0;
            out.f.push_back({a.f[i].first, a.f[i].second + b.f[j].second});
            ++i;
            ++j;
        }
    }
    return (sign & 1) ? -1 : 1;
}

class Poly {
public:
    using Terms = std::map<Monomial, Scalar>;

    Poly() = default;
    Poly(const Scalar& c) {
        if (sgn(c) != 0) t_[Monomial{}] = c;
    }
    Poly(int c) : Poly(Scalar(c)) {}
    static Poly var(const Var& v, int e = 1) {
        Poly p;
        if (e == 0) return Poly(1);
        if (e > 1 && v.nilpotent()) return p;
        p.t_[Monomial{{{v, e}}}] = 1;
        return p;
    }
    static Poly mono(const Monomial& m, const Scalar& c = 1) {
        Poly p;
        if (sgn(c) != 0) p.t_[m] = c;
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }

    void add_term(const Monomial& m, const Scalar& c) {
        if (sgn(c) == 0) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, c);
            return;
        }
        it->second += c;
        if (sgn(it->second) == 0) t_.erase(it);
    }
    Scalar coeff(const Monomial& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? Scalar(0) : it->second;
    }
    Scalar constant() const { return coeff(Monomial{}); }

    Poly& operator+=(const Poly& o) {
        for (auto& [m, c] : o.t_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [m, c] : o.t_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const Scalar& s) {
        if (sgn(s) == 0) {
            t_.clear();
            return *this;
        }
        for (auto& [m, c] : t_) c *= s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) { return a *= Scalar(-1); }
    friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
    friend Poly operator*(const Scalar& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        Monomial m;
        for (auto& [ma, ca] : a.t_)
            for (auto& [mb, cb] : b.t_) {
                int s = mono_mul(ma, mb, m);
                if (s == 0) continue;
                r.add_term(m, s > 0 ? Scalar(ca * cb) : Scalar(-(ca * cb)));
            }
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b) { return a.t_ < b.t_; }

    // keep only the terms accepted by `keep`
    template <class F>
    Poly filter(F keep) const {
        Poly r;
        for (auto& [m, c] : t_)
            if (keep(m)) r.t_.emplace(m, c);
        return r;
    }

private:
    Terms t_;
};

inline Poly mono_poly(const Monomial& m) { return Poly::mono(m); }

// Apply a derivation of sign class (dform, dpar) given by its values on variables.
template <class F>
Poly derive(const Poly& p, int dform, int dpar, F image) {
    Poly r;
    for (auto& [m, c] : p.terms()) {
        int pre_f = 0, pre_p = 0;  // accumulated sign class of the prefix
        for (size_t i = 0; i < m.f.size(); ++i) {
            const Var& v = m.f[i].first;
            int e = m.f[i].second;
            Poly dv = image(v);
            if (!dv.is_zero()) {
                Monomial pre, post;
                pre.f.assign(m.f.begin(), m.f.begin() + i);
                post.f.assign(m.f.begin() + i + 1, m.f.end());
                Poly P = mono_poly(pre), S = mono_poly(post);
                for (int t = 0; t < e; ++t) {
                    int sg = swap_exp(dform, dpar, pre_f, pre_p) + t * swap_exp(dform, dpar, v.form, v.par);
                    Poly term = P * Poly::var(v, t) * dv * Poly::var(v, e - 1 - t) * S;
                    if (sg & 1) term *= Scalar(-1);
                    r += term * c;
                }
            }
            pre_f = (pre_f + v.form * e) & 1;
            pre_p = (pre_p + v.par * e) & 1;
        }
    }
    return r;
}

// Left partial derivative with respect to v.
inline Poly partial(const Poly& p, const Var& v) {
    return derive(p, v.form, v.par, [&](const Var& w) { return w == v ? Poly(1) : Poly(); });
}

// Algebra map sending each variable to image(v) (images must respect the sign class).
template <class F>
Poly substitute(const Poly& p, F image) {
    Poly r;
    for (auto& [m, c] : p.terms()) {
        Poly t(c);
        for (auto& [v, e] : m.f) {
            Poly iv = image(v);
            for (int k = 0; k < e; ++k) t = t * iv;
            if (t.is_zero()) break;
        }
        r += t;
    }
    return r;
}

using VarNamer = std::function<std::string(const Var&)>;

inline std::string format_poly(const Poly& p, const VarNamer& name) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Scalar a = c;
        if (!first) os << (sgn(a) < 0 ? " - " : " + ");
        else if (sgn(a) < 0) os << "-";
        first = false;
        a = abs(a);
        bool unit = (a == 1);
        if (!unit || m.f.empty()) os << to_string(a);
        bool lead = !unit || m.f.empty();
        for (auto& [v, e] : m.f) {
            if (lead) os << "*";
            os << name(v);
            if (e > 1) os << "^" << e;
            lead = true;
        }
    }
    return os.str();
}

}  // namespace chiralis
