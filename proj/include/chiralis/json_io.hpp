#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "koszulfs.hpp"
#include "linfty.hpp"
#include "starop.hpp"

namespace chiralis::io {

using json = nlohmann::json;

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw input_error(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw input_error(path + "." + key + ": missing");
    return *it;
}
inline int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw input_error(path + ": expected an integer");
    return j.get<int>();
}
inline std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw input_error(path + ": expected a string");
    return j.get<std::string>();
}
inline const json& get_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw input_error(path + ": expected an array");
    return j;
}
inline std::string at(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

// scalars: "p/q" strings; integers accepted on input
inline json scalar_json(const Scalar& q) { return to_string(q); }
inline Scalar scalar_from(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    try {
        return parse_scalar(get_string(j, path));
    } catch (const input_error& e) {
        throw input_error(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// algebras: {"generators": [{"name", "parity", "degree"}], "differential": {name: poly}}
// polys over A (jets and forms): [{"c": "p/q", "m": [{"gen", "exp", "jet"?, "form"?}]}]

inline int generator_index(const SuperPolyAlgebra& A, const std::string& name, const std::string& path) {
    for (int i = 0; i < A.ngens(); ++i)
        if (A.gen(i).name == name) return i;
    throw input_error(path + ": unknown generator " + name);
}

inline json poly_json(const SuperPolyAlgebra& A, const Poly& p) {
    json out = json::array();
    for (auto& [m, c] : p.terms()) {
        json f = json::array();
        for (auto& [v, e] : m.f) {
            json x{{"gen", A.gen(v.gen).name}, {"exp", e}};
            if (v.idx) x["jet"] = v.idx;
            if (v.form) x["form"] = v.form;
            f.push_back(x);
        }
        out.push_back({{"c", scalar_json(c)}, {"m", f}});
    }
    return out;
}

inline Poly poly_from(const SuperPolyAlgebra& A, const json& j, const std::string& path) {
    Poly p;
    get_array(j, path);
    for (size_t t = 0; t < j.size(); ++t) {
        std::string pt = at(path, t);
        Poly term(scalar_from(field(j[t], "c", pt), pt + ".c"));
        const json& fs = get_array(field(j[t], "m", pt), pt + ".m");
        for (size_t k = 0; k < fs.size(); ++k) {
            std::string pk = at(pt + ".m", k);
            int g = generator_index(A, get_string(field(fs[k], "gen", pk), pk + ".gen"), pk + ".gen");
            int e = fs[k].contains("exp") ? get_int(fs[k]["exp"], pk + ".exp") : 1;
            int jet = fs[k].contains("jet") ? get_int(fs[k]["jet"], pk + ".jet") : 0;
            int form = fs[k].contains("form") ? get_int(fs[k]["form"], pk + ".form") : 0;
            if (e < 0 || jet < 0 || (form != 0 && form != 1)) throw input_error(pk + ": exponent, jet or form out of range");
            term = term * Poly::var(Var{g, jet, form, A.parity(g)}, e);
        }
        p += term;
    }
    return p;
}

inline json algebra_json(const SuperPolyAlgebra& A) {
    json gens = json::array(), diff = json::object();
    for (int i = 0; i < A.ngens(); ++i) {
        gens.push_back({{"name", A.gen(i).name}, {"parity", A.parity(i)}, {"degree", A.gen(i).pd.degree}});
        if (!A.D_image(i).is_zero()) diff[A.gen(i).name] = poly_json(A, A.D_image(i));
    }
    return {{"generators", gens}, {"differential", diff}};
}

inline SuperPolyAlgebra algebra_from(const json& j, const std::string& path = "algebra") {
    const json& gs = get_array(field(j, "generators", path), path + ".generators");
    std::vector<Generator> gens;
    for (size_t i = 0; i < gs.size(); ++i) {
        std::string p = at(path + ".generators", i);
        Generator g;
        g.name = get_string(field(gs[i], "name", p), p + ".name");
        g.pd.parity = get_int(field(gs[i], "parity", p), p + ".parity");
        g.pd.degree = gs[i].contains("degree") ? get_int(gs[i]["degree"], p + ".degree") : 0;
        if (g.pd.parity != 0 && g.pd.parity != 1) throw input_error(p + ".parity: must be 0 or 1");
        gens.push_back(g);
    }
    SuperPolyAlgebra bare(gens);
    std::vector<Poly> D(gens.size());
    if (j.contains("differential")) {
        const json& d = j["differential"];
        if (!d.is_object()) throw input_error(path + ".differential: expected an object");
        for (auto& [name, img] : d.items()) {
            std::string p = path + ".differential." + name;
            D[generator_index(bare, name, p)] = poly_from(bare, img, p);
        }
    }
    try {
        return SuperPolyAlgebra(gens, D);
    } catch (const input_error& e) {
        throw input_error(path + ".differential: " + e.what());
    }
}

inline SuperPolyAlgebra polynomial_algebra(int n) {
    std::vector<Generator> gens;
    for (int i = 1; i <= n; ++i) gens.push_back({"x" + std::to_string(i), {0, 0}});
    return SuperPolyAlgebra(gens);
}

// ---------------------------------------------------------------------------
// total forms: {"total_degree": t, "components": {"n": poly}}

inline json total_form_json(const SuperPolyAlgebra& A, const TotalForm& t) {
    json c = json::object();
    for (auto& [n, p] : t.comp) c[std::to_string(n)] = poly_json(A, p);
    return {{"total_degree", t.total_degree}, {"components", c}};
}

inline TotalForm total_form_from(const SuperPolyAlgebra& A, const json& j, const std::string& path) {
    TotalForm t;
    t.total_degree = j.contains("total_degree") ? get_int(j["total_degree"], path + ".total_degree") : 0;
    const json& c = field(j, "components", path);
    if (!c.is_object()) throw input_error(path + ".components: expected an object");
    for (auto& [k, p] : c.items()) {
        std::string pk = path + ".components." + k;
        int n = 0;
        try {
            n = std::stoi(k);
        } catch (...) {
            throw input_error(pk + ": key must be a form degree");
        }
        Poly v = poly_from(A, p, pk);
        for (auto& [m, cf] : v.terms())
            if (form_degree(m) != n) throw input_error(pk + ": term of the wrong form degree");
        t.set(n, v);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Fock states: [{"c": "p/q", "modes": [{"gen": name, "k": int}]}], momenta named d_<gen>

inline json state_json(const BgSystem& V, const Poly& p) {
    json out = json::array();
    for (auto& [m, c] : p.terms()) {
        json modes = json::array();
        for (auto& [v, e] : m.f)
            for (int r = 0; r < e; ++r) {
                ModeSymbol s = V.symbol(v);
                modes.push_back({{"gen", s.gen}, {"k", s.k}});
            }
        out.push_back({{"c", scalar_json(c)}, {"modes", modes}});
    }
    return out;
}

inline Poly state_from(const BgSystem& V, const json& j, const std::string& path) {
    Poly p;
    get_array(j, path);
    for (size_t t = 0; t < j.size(); ++t) {
        std::string pt = at(path, t);
        Poly term(scalar_from(field(j[t], "c", pt), pt + ".c"));
        const json& ms = get_array(field(j[t], "modes", pt), pt + ".modes");
        for (size_t k = 0; k < ms.size(); ++k) {
            std::string pk = at(pt + ".modes", k);
            ModeSymbol s{get_string(field(ms[k], "gen", pk), pk + ".gen"), get_int(field(ms[k], "k", pk), pk + ".k")};
            try {
                term = term * Poly::var(V.from_symbol(s));
            } catch (const input_error& e) {
                throw input_error(pk + ": " + e.what());
            }
        }
        p += term;
    }
    return p;
}

// *-operation values: [{"exponents": [e_1..e_n], "state": state}]
inline json star_value_json(const BgSystem& V, const StarValue& v) {
    json out = json::array();
    for (auto& [e, p] : v.terms) out.push_back({{"exponents", e}, {"state", state_json(V, p)}});
    return out;
}

inline StarValue star_value_from(const BgSystem& V, int arity, const json& j, const std::string& path) {
    StarValue v(arity);
    get_array(j, path);
    for (size_t t = 0; t < j.size(); ++t) {
        std::string pt = at(path, t);
        const json& e = get_array(field(j[t], "exponents", pt), pt + ".exponents");
        std::vector<int> ex;
        for (size_t k = 0; k < e.size(); ++k) ex.push_back(get_int(e[k], at(pt + ".exponents", k)));
        if (static_cast<int>(ex.size()) != arity) throw input_error(pt + ".exponents: expected " + std::to_string(arity) + " entries");
        for (int x : ex)
            if (x < 0) throw input_error(pt + ".exponents: negative exponent");
        v.add(ex, state_from(V, field(j[t], "state", pt), pt + ".state"));
    }
    return v;
}

// cochains on frames: {"arity", "parity", "values": [{"frames": [gen names], "value": star value}]}
inline json cochain_json(const JetTangent& J, const FrameCochain& c) {
    json vals = json::array();
    for (auto& [t, v] : c.values) {
        json fr = json::array();
        for (int i : t) fr.push_back(J.base().gen(i).name);
        vals.push_back({{"frames", fr}, {"value", star_value_json(J.fock(), v)}});
    }
    return {{"arity", c.arity}, {"parity", c.parity}, {"values", vals}};
}

inline FrameCochain cochain_from(const JetTangent& J, const json& j, const std::string& path) {
    FrameCochain c;
    c.arity = get_int(field(j, "arity", path), path + ".arity");
    c.parity = j.contains("parity") ? get_int(j["parity"], path + ".parity") : 0;
    if (c.arity < 1) throw input_error(path + ".arity: must be positive");
    const json& vs = get_array(field(j, "values", path), path + ".values");
    for (size_t t = 0; t < vs.size(); ++t) {
        std::string pt = at(path + ".values", t);
        const json& fr = get_array(field(vs[t], "frames", pt), pt + ".frames");
        if (static_cast<int>(fr.size()) != c.arity) throw input_error(pt + ".frames: expected arity-many frames");
        std::vector<int> idx;
        for (size_t k = 0; k < fr.size(); ++k)
            idx.push_back(generator_index(J.base(), get_string(fr[k], at(pt + ".frames", k)), at(pt + ".frames", k)));
        c.set(idx, c.at(idx) + star_value_from(J.fock(), c.arity, field(vs[t], "value", pt), pt + ".value"));
    }
    return c;
}

inline json family_json(const JetTangent& J, const std::map<int, FrameCochain>& f) {
    json out = json::array();
    for (auto& [n, c] : f) out.push_back(cochain_json(J, c));
    return out;
}

inline std::map<int, FrameCochain> family_from(const JetTangent& J, const json& j, const std::string& path) {
    std::map<int, FrameCochain> f;
    get_array(j, path);
    for (size_t t = 0; t < j.size(); ++t) {
        FrameCochain c = cochain_from(J, j[t], at(path, t));
        if (f.count(c.arity)) throw input_error(at(path, t) + ".arity: repeated arity");
        f.emplace(c.arity, c);
    }
    return f;
}

// ---------------------------------------------------------------------------
// L-infinity structures on a finite graded space:
// {"space": {"degree": [...], "names": [...]},
//  "brackets": [{"arity": n, "entries": [{"args": [names], "value": {name: "p/q"}}]}]}
// entries are seeds; the table is completed by graded antisymmetry.

struct LInftyPresentation {
    GradedSpace space;
    std::vector<MapTable> tables;
};

inline int basis_index_of(const GradedSpace& V, const std::string& n, const std::string& path) {
    for (int b = 0; b < V.dim(); ++b)
        if (V.names[b] == n) return b;
    throw input_error(path + ": unknown basis element " + n);
}

inline json elem_json(const GradedSpace& V, const Elem& e) {
    json o = json::object();
    for (auto& [b, c] : e) o[V.names.at(b)] = scalar_json(c);
    return o;
}

inline json linfty_json(const LInftyPresentation& P) {
    json br = json::array();
    for (size_t n = 1; n < P.tables.size(); ++n) {
        if (P.tables[n].empty()) continue;
        json ent = json::array();
        for (auto& [x, v] : P.tables[n]) {
            json args = json::array();
            for (int b : x) args.push_back(P.space.names.at(b));
            ent.push_back({{"args", args}, {"value", elem_json(P.space, v)}});
        }
        br.push_back({{"arity", n}, {"entries", ent}});
    }
    return {{"space", {{"degree", P.space.degree}, {"names", P.space.names}}}, {"brackets", br}};
}

inline LInftyPresentation linfty_from(const json& j, const std::string& path = "structure") {
    LInftyPresentation P;
    const json& sp = field(j, "space", path);
    const json& deg = get_array(field(sp, "degree", path + ".space"), path + ".space.degree");
    for (size_t i = 0; i < deg.size(); ++i) P.space.degree.push_back(get_int(deg[i], at(path + ".space.degree", i)));
    if (sp.contains("names")) {
        const json& nm = get_array(sp["names"], path + ".space.names");
        for (size_t i = 0; i < nm.size(); ++i) P.space.names.push_back(get_string(nm[i], at(path + ".space.names", i)));
        if (P.space.names.size() != P.space.degree.size()) throw input_error(path + ".space.names: length differs from degree");
    } else {
        for (size_t i = 0; i < deg.size(); ++i) P.space.names.push_back("e" + std::to_string(i));
    }
    auto par = [V = P.space](int b) { return V.parity(b); };
    const json& br = get_array(field(j, "brackets", path), path + ".brackets");
    for (size_t t = 0; t < br.size(); ++t) {
        std::string pt = at(path + ".brackets", t);
        int n = get_int(field(br[t], "arity", pt), pt + ".arity");
        if (n < 1 || n > 8) throw input_error(pt + ".arity: out of range 1..8");
        if (static_cast<int>(P.tables.size()) <= n) P.tables.resize(n + 1);
        std::map<std::vector<int>, Elem> seed;
        const json& ent = get_array(field(br[t], "entries", pt), pt + ".entries");
        for (size_t k = 0; k < ent.size(); ++k) {
            std::string pk = at(pt + ".entries", k);
            const json& args = get_array(field(ent[k], "args", pk), pk + ".args");
            if (static_cast<int>(args.size()) != n) throw input_error(pk + ".args: expected arity-many arguments");
            std::vector<int> x;
            for (size_t a = 0; a < args.size(); ++a)
                x.push_back(basis_index_of(P.space, get_string(args[a], at(pk + ".args", a)), at(pk + ".args", a)));
            const json& val = field(ent[k], "value", pk);
            if (!val.is_object()) throw input_error(pk + ".value: expected an object");
            Elem e;
            for (auto& [name, c] : val.items()) elem_add(e, basis_index_of(P.space, name, pk + ".value"), scalar_from(c, pk + ".value." + name));
            seed[x] = e;
        }
        P.tables[n] = antisymmetric_table(par, n, seed);
    }
    return P;
}

// ---------------------------------------------------------------------------
// FS cohomology report

inline json cohomology_json(const ChiralKoszul& K, const CohomologyReport& rep) {
    json cells = json::array();
    for (auto& c : rep.cells) {
        json reps = json::array();
        for (auto& r : c.representatives) reps.push_back(state_json(K.fock(), r));
        cells.push_back({{"weight", c.weight},
                         {"charge", c.charge},
                         {"degree", c.degree},
                         {"cochain_dim", c.cochain_dim},
                         {"dim", c.dim},
                         {"representatives", reps}});
    }
    json table = json::array();
    for (auto& r : character_table(rep)) {
        json dims = json::object();
        for (auto& [d, n] : r.dims) dims[std::to_string(d)] = n;
        table.push_back({{"weight", r.weight}, {"charge", r.charge}, {"dims", dims}, {"euler", r.euler_h}, {"euler_cochains", r.euler_c}});
    }
    return {{"m", rep.m},
            {"cells", cells},
            {"character_table", table},
            {"window", {{"max_weight", rep.window.max_weight}, {"min_charge", rep.window.min_charge}, {"max_charge", rep.window.max_charge}}}};
}

}  // namespace chiralis::io
