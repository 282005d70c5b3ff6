#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chiralis/json_io.hpp"
#include "chiralis/suites.hpp"

#ifndef CHIRALIS_VERSION
#define CHIRALIS_VERSION "dev"
#endif

using namespace chiralis;
using chiralis::io::json;

namespace {

struct JobConfig {
    std::string out;
    std::uint64_t seed = 1;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error(path + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw input_error(path + ": malformed JSON: " + e.what());
    }
}

void positive(int v, const std::string& name, bool allow_zero = false) {
    if (v < 0 || (!allow_zero && v == 0)) throw input_error("--" + name + " must be " + (allow_zero ? "non-negative" : "positive"));
}

int emit(json report, bool ok, const std::string& command, const JobConfig& job) {
    report["command"] = command;
    report["version"] = CHIRALIS_VERSION;
    report["seed"] = job.seed;
    report["ok"] = ok;
    std::string text = report.dump(2) + "\n";
    if (job.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(job.out);
        if (!f) throw input_error(job.out + ": cannot write");
        f << text;
    }
    return ok ? 0 : 1;
}

json witness_json(const BgSystem& V, const Witness& w) {
    json args = json::array();
    for (auto& a : w.args) args.push_back(io::state_json(V, a));
    return {{"kind", w.kind}, {"args", args}, {"modes", w.modes}, {"residual", io::state_json(V, w.residual)},
            {"text", V.format(w.residual)}};
}

json star_witness_json(const BgSystem& V, const StarWitness& w) {
    json args = json::array();
    for (auto& a : w.args) args.push_back(io::state_json(V, a));
    return {{"k", w.k}, {"args", args}, {"value", io::star_value_json(V, w.value)}};
}

json jacobi_report_json(const GradedSpace& S, const JacobiReport& r) {
    json f = json::array();
    for (auto& w : r.failures) {
        json args = json::array();
        for (int b : w.args) args.push_back(S.names.at(b));
        f.push_back({{"k", w.k}, {"args", args}, {"value", io::elem_json(S, w.value)}});
    }
    return {{"k_max", r.k_max}, {"tuples", r.tuples}, {"ok", r.ok()}, {"failures", f}};
}

json schema() {
    json s;
    s["scalar"] = "string \"p/q\" or integer";
    s["algebra"] = {{"generators", json::array({{{"name", "x"}, {"parity", 0}, {"degree", 0}},
                                                {{"name", "xi"}, {"parity", 1}, {"degree", -1}}})},
                    {"differential", {{"xi", json::array({{{"c", "1"}, {"m", json::array({{{"gen", "x"}, {"exp", 2}}})}}})}}}};
    s["poly"] = json::array({{{"c", "-4"},
                              {"m", json::array({{{"gen", "x"}, {"exp", 1}},
                                                 {{"gen", "xi"}, {"exp", 1}},
                                                 {{"gen", "x"}, {"exp", 1}, {"form", 1}},
                                                 {{"gen", "xi"}, {"exp", 1}, {"form", 1}}})}}});
    s["poly_notes"] = "factor fields: gen, exp (default 1), jet (default 0), form 0|1 (default 0)";
    s["total_form"] = {{"total_degree", 2}, {"components", {{"2", "poly"}, {"3", "poly"}}}};
    s["state"] = json::array({{{"c", "1"}, {"modes", json::array({{{"gen", "d_x"}, {"k", -1}}, {{"gen", "x"}, {"k", 0}}})}}});
    s["state_notes"] = "momenta are named d_<gen>; coordinate modes k <= 0, momentum modes k < 0";
    s["star_value"] = json::array({{{"exponents", json::array({1, 0})}, {"state", "state"}}});
    s["cochain"] = {{"arity", 2}, {"parity", 0}, {"values", json::array({{{"frames", json::array({"x", "xi"})}, {"value", "star_value"}}})}};
    s["family"] = json::array({"cochain of arity 2", "cochain of arity 3"});
    s["linfty"] = {{"space", {{"degree", json::array({0, 0, 0, -1})}, {"names", json::array({"e", "f", "h", "c"})}}},
                   {"brackets", json::array({{{"arity", 2}, {"entries", json::array({{{"args", json::array({"e", "f"})}, {"value", {{"h", "1"}}}}})}}})}};
    s["linfty_notes"] = "entries are completed by graded antisymmetry";
    s["cocycle"] = {{"form", "poly (a 3-form)"}, {"cochain", "cochain (alternative to form)"}};
    s["fs_report"] = {{"m", 2}, {"cells", json::array({{{"weight", 0}, {"charge", 0}, {"degree", 0}, {"dim", 1}, {"representatives", json::array({"state"})}}})}, {"window", {{"max_weight", 1}, {"min_charge", -2}, {"max_charge", 4}}}};
    return s;
}

SuperPolyAlgebra algebra_option(const std::string& file, int vars, const std::string& fallback) {
    if (!file.empty()) return io::algebra_from(read_json_file(file));
    if (fallback == "affine") return affine_space(vars);
    return bg_base(vars);
}

// largest k among generator names x<k> in a cocycle, so Q[x1..xn] can default to fit it
int affine_vars_in(const json& j) {
    int n = 0;
    if (j.is_string()) {
        const std::string& t = j.get_ref<const std::string&>();
        if (t.size() > 1 && t[0] == 'x' && t.find_first_not_of("0123456789", 1) == std::string::npos && t.size() < 8)
            n = std::stoi(t.substr(1));
    } else if (j.is_structured()) {
        for (auto& v : j) n = std::max(n, affine_vars_in(v));
    }
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chiralis: exact checks for chiral algebroids, L-infinity structures and vertex algebras"};
    app.set_version_flag("--version", std::string(CHIRALIS_VERSION));
    JobConfig job;
    bool want_schema = false;
    app.add_flag("--schema", want_schema, "print the JSON formats and exit");
    app.add_option("--seed", job.seed, "seed for randomized suites (mt19937_64)");
    app.add_option("--out", job.out, "write the report here instead of stdout");
    app.require_subcommand(0, 1);
    app.fallthrough();

    // fs-cohomology
    auto* fs = app.add_subcommand("fs-cohomology", "cohomology of the chiral Koszul complex of Q[x]/(x^m)");
    int fs_m = 0, fs_w = 1, fs_q = -1;
    bool fs_shuffle = false;
    fs->add_option("--m", fs_m, "exponent m")->required();
    fs->add_option("--max-weight", fs_w, "largest conformal weight");
    fs->add_option("--max-charge", fs_q, "largest charge (default 2m)");
    fs->add_flag("--shuffle-check", fs_shuffle, "recompute with shuffled basis order and compare dimensions");

    // borcherds-check
    auto* bo = app.add_subcommand("borcherds-check", "commutator and normal-ordering identities on a free-field system");
    std::string bo_system = "bg";
    BorcherdsConfig bc;
    int bo_vars = 1;
    bo->add_option("--system", bo_system, "bg")->check(CLI::IsMember({"bg"}));
    bo->add_option("--vars", bo_vars, "number of even (and of odd) coordinates");
    bo->add_option("--max-weight", bc.max_weight, "weight bound of exhaustive triples");
    bo->add_option("--max-len", bc.max_len, "monomial length bound of exhaustive triples");
    bo->add_flag("--total-weight", bc.total_weight, "bound the summed weight of a triple");
    bo->add_option("--modes", bc.mode_range, "mode indices range over [-modes, modes]");
    bo->add_option("--samples", bc.samples, "random triples");
    bo->add_option("--sample-weight", bc.sample_weight, "weight bound of sampled states");

    // liestar-check
    auto* ls = app.add_subcommand("liestar-check", "Lie* axioms of the jet tangent algebra and Chevalley d^2 = 0");
    std::string ls_alg;
    int ls_vars = 2;
    LieStarConfig lc;
    ls->add_option("--algebra", ls_alg, "algebra JSON (default Q[x1..xn])");
    ls->add_option("--vars", ls_vars, "n for the default affine space");
    ls->add_option("--jet-order", lc.jet_order, "jet order bound");
    ls->add_option("--poly-degree", lc.poly_degree, "polynomial degree bound");
    ls->add_option("--samples", lc.samples, "random cochains for d^2");

    // linfty-check
    auto* li = app.add_subcommand("linfty-check", "generalized Jacobi identities against the coderivation square");
    std::string li_file;
    int li_random = 0, li_k = 4, li_arity = 3;
    li->add_option("--structure", li_file, "structure JSON");
    li->add_option("--random", li_random, "check this many sampled structures instead");
    li->add_option("--k-max", li_k, "largest Jacobi arity");
    li->add_option("--arity", li_arity, "largest bracket arity");

    // algebroid-twist
    auto* at = app.add_subcommand("algebroid-twist", "twist the standard chiral algebroid by a cocycle");
    std::string at_base = "std", at_alg, at_cocycle;
    int at_vars = 3;
    bool at_check = false;
    AlgebroidWindow aw{1, 1};
    at->add_option("--base", at_base, "std")->check(CLI::IsMember({"std"}));
    at->add_option("--algebra", at_alg, "algebra JSON (default Q[x1..xn])");
    at->add_option("--vars", at_vars, "n for the default affine space (default: 3, or enough for the cocycle)");
    at->add_option("--cocycle", at_cocycle, "cocycle JSON")->required();
    at->add_flag("--check", at_check, "skip the closedness gate and run the Lie* Jacobi check");
    at->add_option("--jet-order", aw.jet_order, "window jet order");
    at->add_option("--poly-degree", aw.poly_degree, "window polynomial degree");

    // chiral-infty-check
    auto* ci = app.add_subcommand("chiral-infty-check", "Lie*-infinity Jacobi check of a twisted chiral infinity-algebroid");
    int ci_m = 2, ci_w = 2, ci_len = 3, ci_k = 3, ci_deg = 3;
    std::string ci_family;
    bool ci_small = false;
    ci->add_option("--m", ci_m, "FS exponent: base Q[x, xi], D(xi) = x^m");
    ci->add_option("--family", ci_family, "family JSON (default: solve for an essential closed family)");
    ci->add_option("--max-weight", ci_w, "window weight bound");
    ci->add_option("--max-len", ci_len, "window monomial length bound");
    ci->add_option("--k-max", ci_k, "largest Jacobi arity");
    ci->add_option("--poly-degree", ci_deg, "ansatz polynomial degree when solving");
    ci->add_flag("--small-window", ci_small, "check on the eight-state solve window only");

    // derham-closed
    auto* dr = app.add_subcommand("derham-closed", "closedness of a form (d) or a total form (d + Lie_D)");
    std::string dr_alg, dr_form;
    int dr_m = 2;
    dr->add_option("--algebra", dr_alg, "algebra JSON (default: Q[x, xi], D(xi) = x^m)");
    dr->add_option("--m", dr_m, "m for the default algebra");
    dr->add_option("--form", dr_form, "form JSON: a poly or a total form")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (want_schema) {
            std::cout << schema().dump(2) << "\n";
            return 0;
        }
        if (*fs) {
            positive(fs_m, "m");
            positive(fs_w, "max-weight", true);
            if (fs_q < 0) fs_q = 2 * fs_m;
            ChiralKoszul K(fs_m);
            FsResult r = fs_suite(K, fs_w, fs_q);
            json rep = io::cohomology_json(K, r.report);
            rep["checks"] = {{"states", r.states}, {"d_squared_zero", r.d_squared_zero}, {"euler_consistent", r.euler_consistent}};
            bool ok = r.d_squared_zero && r.euler_consistent;
            if (fs_shuffle) {
                std::mt19937_64 rng(job.seed);
                bool same = same_dimensions(r.report, fs_suite(K, fs_w, fs_q, &rng).report);
                rep["checks"]["order_independent"] = same;
                ok = ok && same;
            }
            rep["weight0_total"] = r.report.total_dim(0);
            return emit(rep, ok, "fs-cohomology", job);
        }
        if (*bo) {
            positive(bo_vars, "vars");
            positive(bc.max_weight, "max-weight", true);
            positive(bc.samples, "samples", true);
            bc.seed = job.seed;
            BgSystem V(bg_base(bo_vars));
            BorcherdsResult r = borcherds_suite(V, bc);
            json f = json::array();
            for (size_t i = 0; i < r.failures.size() && i < 20; ++i) f.push_back(witness_json(V, r.failures[i]));
            json rep{{"window",
                      {{"system", bo_system}, {"vars", bo_vars}, {"max_weight", bc.max_weight}, {"max_len", bc.max_len},
                       {"total_weight", bc.total_weight}, {"modes", bc.mode_range}, {"samples", bc.samples},
                       {"sample_weight", bc.sample_weight}, {"sample_len", bc.sample_len}}},
                     {"exhaustive_triples", r.exhaustive_triples},
                     {"sampled_triples", r.sampled_triples},
                     {"evaluations", r.evaluations},
                     {"failure_count", r.failures.size()},
                     {"failures", f}};
            return emit(rep, r.ok(), "borcherds-check", job);
        }
        if (*ls) {
            positive(lc.jet_order, "jet-order", true);
            positive(lc.poly_degree, "poly-degree", true);
            positive(lc.samples, "samples", true);
            lc.seed = job.seed;
            SuperPolyAlgebra A = algebra_option(ls_alg, ls_vars, "affine");
            LieStarResult r = liestar_suite(A, lc);
            BgSystem V(A);
            json f = json::array();
            for (auto& w : r.axioms.failures) f.push_back(witness_json(V, w));
            JetTangent J{V};
            json d2 = json::array();
            for (auto& c : r.d2_failures) d2.push_back(io::cochain_json(J, c));
            json rep{{"window", {{"jet_order", lc.jet_order}, {"poly_degree", lc.poly_degree}, {"samples", lc.samples},
                                 {"tuple_bound", "summed jet order and degree"}}},
                     {"algebra", io::algebra_json(A)},
                     {"pairs", r.axioms.pairs},
                     {"triples", r.axioms.triples},
                     {"axiom_failures", f},
                     {"cochains", r.cochains},
                     {"d_squared_failures", d2}};
            return emit(rep, r.ok(), "liestar-check", job);
        }
        if (*li) {
            positive(li_k, "k-max");
            positive(li_arity, "arity");
            if (li_random > 0) {
                auto samples = linfty_samples(li_random, job.seed, li_k);
                json items = json::array();
                bool agree = true;
                for (auto& s : samples) {
                    agree = agree && s.report.paths_agree;
                    items.push_back({{"note", s.candidate.note},
                                     {"perturbed", s.candidate.perturbed},
                                     {"direct_ok", s.report.direct.ok()},
                                     {"coderivation_ok", s.report.coderivation.ok()},
                                     {"paths_agree", s.report.paths_agree}});
                }
                json rep{{"window", {{"space", "sl2 + line"}, {"arity", 3}, {"k_max", li_k}, {"random", li_random}}},
                         {"candidates", items}};
                return emit(rep, agree, "linfty-check", job);
            }
            if (li_file.empty()) throw input_error("linfty-check needs --structure or --random");
            io::LInftyPresentation P = io::linfty_from(read_json_file(li_file));
            std::vector<int> w;
            for (int b = 0; b < P.space.dim(); ++b) w.push_back(b);
            auto r = generalized_jacobi_check(table_structure(P.space, P.tables, li_arity), w, li_k);
            json rep{{"window", {{"dim", P.space.dim()}, {"arity", li_arity}, {"k_max", li_k}}},
                     {"direct", jacobi_report_json(P.space, r.direct)},
                     {"coderivation", jacobi_report_json(P.space, r.coderivation)},
                     {"paths_agree", r.paths_agree}};
            return emit(rep, r.ok() && r.paths_agree, "linfty-check", job);
        }
        if (*at) {
            positive(aw.jet_order, "jet-order", true);
            positive(aw.poly_degree, "poly-degree", true);
            json cj = read_json_file(at_cocycle);
            if (at_alg.empty() && !at->count("--vars")) at_vars = std::max(at_vars, affine_vars_in(cj));
            SuperPolyAlgebra A = algebra_option(at_alg, at_vars, "affine");
            ChiralAlgebroid L = standard_chiral_algebroid(A);
            const JetTangent& J = L.tangent();
            json rep{{"window", {{"jet_order", aw.jet_order}, {"poly_degree", aw.poly_degree}}}, {"algebra", io::algebra_json(A)}};
            FrameCochain alpha;
            if (cj.contains("form")) {
                Poly form = io::poly_from(A, cj["form"], "cocycle.form");
                Poly d = A.derham_d(form);
                rep["closed"] = d.is_zero();
                rep["d"] = io::poly_json(A, d);
                if (!at_check) {
                    try {
                        alpha = graded_form_functor(J, form);
                    } catch (const form_not_closed&) {
                        return emit(rep, false, "algebroid-twist", job);
                    }
                } else {
                    alpha = graded_form_cochain(J, form);
                }
            } else if (cj.contains("cochain")) {
                alpha = io::cochain_from(J, cj["cochain"], "cocycle.cochain");
            } else {
                throw input_error("cocycle: needs a form or a cochain");
            }
            ChiralAlgebroid T = twist_chiral(L, alpha);
            rep["twist"] = io::cochain_json(J, T.twist());
            rep["module_unchanged"] = module_unchanged(L, T);
            bool ok = true;
            if (at_check) {
                LieStarReport r = algebroid_jacobi(T, aw);
                json f = json::array();
                for (auto& w : r.failures) f.push_back(witness_json(T.fock(), w));
                rep["pairs"] = r.pairs;
                rep["triples"] = r.triples;
                rep["failures"] = f;
                ok = r.ok();
            }
            return emit(rep, ok, "algebroid-twist", job);
        }
        if (*ci) {
            positive(ci_m, "m");
            positive(ci_w, "max-weight", true);
            positive(ci_len, "max-len");
            positive(ci_k, "k-max");
            ChiralInfty P = standard_chiral_infty(fs_base(ci_m), 3);
            const BgSystem& V = P.fock();
            std::vector<Poly> solve_window = small_infty_window(V);
            json rep;
            TwistFamily fam;
            if (!ci_family.empty()) {
                fam = io::family_from(P.tangent(), read_json_file(ci_family), "family");
            } else {
                FamilyAnsatz a;
                a.poly_degree = ci_deg;
                FamilySolve s = solve_closed_families(P, a, solve_window, ci_k);
                rep["solve"] = {{"columns", s.columns.size()}, {"rank", s.rank}, {"kernel", s.kernel.size()}};
                auto e = essential_family(P, s, solve_window, ci_k);
                if (!e) {
                    rep["window"] = {{"solve_window", solve_window.size()}, {"k_max", ci_k}};
                    rep["family"] = nullptr;
                    return emit(rep, false, "chiral-infty-check", job);
                }
                fam = *e;
            }
            ChiralInfty T = chiral_infty_twist(P, fam);
            std::vector<Poly> window = ci_small ? solve_window : infty_window(V, ci_w, ci_len);
            StarJacobiReport r = liestar_infty_jacobi(T.structure(), window, ci_k);
            json f = json::array();
            for (auto& w : r.failures) f.push_back(star_witness_json(V, w));
            rep["window"] = {{"states", window.size()}, {"max_weight", ci_small ? -1 : ci_w}, {"max_len", ci_len},
                             {"k_max", ci_k}, {"small", ci_small}};
            rep["family"] = io::family_json(P.tangent(), fam);
            rep["tuples"] = r.tuples;
            rep["failures"] = f;
            rep["module_unchanged"] = T.module() == P.module();
            return emit(rep, r.ok(), "chiral-infty-check", job);
        }
        if (*dr) {
            SuperPolyAlgebra A = dr_alg.empty() ? fs_base(dr_m) : io::algebra_from(read_json_file(dr_alg));
            json fj = read_json_file(dr_form);
            json rep{{"window", {{"scope", "exact, whole form"}}}, {"algebra", io::algebra_json(A)}};
            bool closed;
            if (fj.is_object() && fj.contains("components")) {
                TotalForm t = io::total_form_from(A, fj, "form");
                TotalForm d = total_d(A, t);
                closed = d.is_zero();
                rep["total_d"] = io::total_form_json(A, d);
            } else {
                Poly d = A.derham_d(io::poly_from(A, fj, "form"));
                closed = d.is_zero();
                rep["d"] = io::poly_json(A, d);
            }
            rep["closed"] = closed;
            return emit(rep, closed, "derham-closed", job);
        }
        std::cerr << app.help();
        return 2;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
