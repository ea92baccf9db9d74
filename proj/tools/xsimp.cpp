#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <xsimp/chain.hpp>
#include <xsimp/csg.hpp>
#include <xsimp/cyclic.hpp>
#include <xsimp/dgset.hpp>
#include <xsimp/json_io.hpp>
#include <xsimp/module.hpp>
#include <xsimp/site.hpp>
#include <xsimp/subdivision.hpp>

using namespace xsimp;
using json = nlohmann::json;

namespace {

const char* kVersion = "0.1.0";

struct Outcome {
    std::string status = "ok";  // ok, refuted, error
    json payload = json::object();
};

json read_json(const std::string& path) {
    std::stringstream buf;
    if (path == "-") {
        buf << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open '" + path + "'");
        buf << in.rdbuf();
    }
    try {
        json j = json::parse(buf.str());
        // a report from a constructor command can be piped straight back in
        if (j.is_object() && j.contains("payload") && j["payload"].is_object() && j["payload"].contains("object")) return j["payload"]["object"];
        return j;
    } catch (const json::parse_error& e) {
        throw io::ParseError("$", std::string("malformed JSON: ") + e.what());
    }
}

Family family_from(const std::string& kind, int param) { return Family(parse_kind(kind), param); }

json f_vector(const DGSet& X) {
    json a = json::array();
    for (int n = 0; n <= X.D; ++n) a.push_back(X.nondegenerate(n).size());
    return a;
}

json object_summary(const DGSet& X) {
    return {{"family", io::emit(X.family)}, {"truncation", X.D}, {"counts", X.counts()}, {"f_vector", f_vector(X)}};
}

json gset_block(const GSimplicialSet& G) {
    json gens = json::object();
    for (auto& [name, tab] : G.gens) {
        json levels = json::array();
        for (int n = 0; n <= G.base.D; ++n) {
            json t = json::object();
            for (int x = 0; x < G.base.size(n); ++x) t[G.base.ids[n][x]] = G.base.ids[n][tab[n][x]];
            levels.push_back(t);
        }
        gens[name] = levels;
    }
    return {{"group", {{"name", G.group}, {"order", G.order}}}, {"generators", gens}};
}

json witness_json(const SiteWitness& w) {
    json j{{"object", w.object}, {"r", w.r}, {"invariant", w.invariant}, {"degree", w.degree}, {"detail", w.detail}};
    if (w.prime) j["prime"] = w.prime;
    return j;
}

json verdict_json(const SiteVerdict& v) {
    json j{{"refuted", v.refuted}, {"note", v.note}};
    if (v.witness) j["witness"] = witness_json(*v.witness);
    return j;
}

// coupled document side: {"A": presheaf, "B": presheaf, "s": objectwise map A -> B}
CoupledPresheaf parse_coupled(const json& j, const FiniteSite& S, CoupledFunctor fn, const Family& fam, i64 p, const std::string& path) {
    CoupledPresheaf X;
    X.functor = fn;
    X.family = fam;
    X.prime = p;
    X.A = io::parse_presheaf(io::detail::field(j, "A", path), S, path + ".A");
    DGPresheaf B = io::parse_presheaf(io::detail::field(j, "B", path), S, path + ".B");
    if (fn == CoupledFunctor::free) {
        // s is given on generators, as a map A -> U(B); extended to free(A) -> B
        DGPresheaf UB;
        for (auto& v : B.value) UB.value.push_back(underlying(v));
        UB.res = B.res;
        auto s = io::parse_presheaf_map(io::detail::field(j, "s", path), S, X.A, UB, path + ".s");
        X.B = B;
        for (int x = 0; x < S.size(); ++x) X.s.push_back(free_adjunct(fam, X.A.value[x], B.value[x], s[x]));
    } else {
        auto s = io::parse_presheaf_map(io::detail::field(j, "s", path), S, X.A, B, path + ".s");
        X.B = B;
        X.Bmod = linearise(B, p);
        X.smod = linearise_map(X.A, B, s, p);
    }
    return X;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crossed simplicial group toolkit"};
    app.require_subcommand(1);
    std::string output;
    app.add_option("-o,--output", output, "Write the report to a file instead of standard output");

    std::string command;
    auto sub = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->callback([&, name] { command = name; });
        return s;
    };

    // shared option storage
    std::string input, kind = "trivial", words, coeffs = "Z", model = "weak", A_text = "0", cover;
    int param = 1, n = 0, D = 3, r = 1, max_dim = 2, r_max = 2;
    i64 mod = 0;
    bool boundary = false, reduced = false;

    auto* c_validate = sub("validate", "Validate a dgset, site or {site, presheaf} document");
    c_validate->add_option("input", input, "JSON document ('-' for stdin)")->required();

    auto* c_standard = sub("standard", "Emit the standard object DG[n]");
    c_standard->add_option("--family", kind, "Family kind")->required();
    c_standard->add_option("--param", param, "Family parameter N or M");
    c_standard->add_option("--n", n, "Dimension")->required();
    c_standard->add_option("--truncate", D, "Truncation level");
    c_standard->add_flag("--boundary", boundary, "Boundary sub-object only");

    auto* c_free = sub("free", "Free object on a trivial-family dgset");
    c_free->add_option("input", input)->required();
    c_free->add_option("--family", kind)->required();
    c_free->add_option("--param", param);

    auto* c_sphere = sub("sphere", "Emit the sphere S^n_G");
    c_sphere->add_option("--family", kind)->required();
    c_sphere->add_option("--param", param);
    c_sphere->add_option("--n", n)->required();
    c_sphere->add_option("--truncate", D);

    std::string sub_kind = "edgewise";
    auto* c_subdivide = sub("subdivide", "Edgewise, Segal or dihedral subdivision");
    c_subdivide->add_option("input", input)->required();
    c_subdivide->add_option("--kind", sub_kind)->check(CLI::IsMember({"edgewise", "segal", "dihedral"}));
    c_subdivide->add_option("--r", r);

    auto* c_fixed = sub("fixed-points", "Fixed points of a subgroup of the induced action on a subdivision");
    c_fixed->add_option("input", input)->required();
    c_fixed->add_option("--kind", sub_kind)->check(CLI::IsMember({"edgewise", "segal", "dihedral"}));
    c_fixed->add_option("--r", r);
    c_fixed->add_option("--subgroup", words, "Generating words, comma separated (e.g. \"theta\" or \"theta,rho\")")->required();

    auto* c_so2 = sub("so2-fix", "Vertices fixed in the SO(2) sense");
    c_so2->add_option("input", input)->required();

    auto* c_homology = sub("homology", "Homology of the underlying simplicial set");
    c_homology->add_option("input", input)->required();
    c_homology->add_option("--max-dim", max_dim);
    c_homology->add_flag("--reduced", reduced);
    c_homology->add_option("--mod", mod, "Prime coefficients");

    auto* c_em = sub("em-object", "Eilenberg-MacLane object K^G(A, n)");
    c_em->add_option("--A", A_text, "Coefficients, e.g. \"2\", \"Z\" or \"2,3\"")->required();
    c_em->add_option("--n", n)->required();
    c_em->add_option("--truncate", D);
    c_em->add_option("--family", kind);
    c_em->add_option("--param", param);
    c_em->add_option("--max-dim", max_dim, "Homology degrees to report");

    auto* c_cyc = sub("cyclic-homology", "HC and HH of the linearisation of a cyclic dgset");
    c_cyc->add_option("input", input)->required();
    c_cyc->add_option("--max-degree", max_dim);
    c_cyc->add_option("--mod", mod);

    auto* c_dk = sub("dold-kan", "Normalised Moore complex of the linearisation");
    c_dk->add_option("input", input)->required();
    c_dk->add_option("--mod", mod);
    c_dk->add_flag("--reduced", reduced);

    auto* c_site = sub("site-cohomology", "Cohomology of a poset site with constant coefficients");
    c_site->add_option("input", input, "Site document")->required();
    c_site->add_option("--coefficients", coeffs, "\"Z\" or a prime p");
    c_site->add_option("--max-degree", max_dim);
    c_site->add_option("--cover", cover, "Comma separated objects for the Cech complex (default: maximal objects)");

    auto* c_lwe = sub("local-we", "Refute a local weak equivalence of presheaves");
    c_lwe->add_option("input", input, "{site, source, target, map} document")->required();
    c_lwe->add_option("--r-max", r_max);

    auto* c_coupled = sub("coupled-classify", "Classify a map of coupled presheaves");
    c_coupled->add_option("input", input, "{site, functor, family, prime, source, target, map} document")->required();
    c_coupled->add_option("--r-max", r_max);

    auto* c_eq = sub("equivariant-cohomology", "Equivariant cohomology of the one-point site");
    c_eq->add_option("--family", kind)->required();
    c_eq->add_option("--A", A_text)->required();
    c_eq->add_option("--max-degree", max_dim);
    c_eq->add_option("--model", model);
    c_eq->add_option("--site", input, "Site document (default: one point)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : 1;
    }

    json echo{{"name", command}, {"args", std::vector<std::string>(argv + 1, argv + argc)}};
    Outcome out;
    try {
        if (command == "validate") {
            json j = read_json(input);
            if (j.contains("levels")) {
                auto X = io::parse_dgset(j, "", false);
                auto rep = validate(X);
                out.payload = object_summary(X);
                out.payload["kind"] = "dgset";
                json probs = json::array();
                for (auto& s : rep.structural) probs.push_back(s);
                for (auto& v : rep.violations)
                    probs.push_back({{"identity", v.identity}, {"level", v.level}, {"simplex", v.simplex}, {"detail", v.detail}});
                out.payload["violations"] = probs;
                if (!rep.ok()) out.status = "refuted";
            } else if (j.contains("objects")) {
                auto S = io::parse_site(j);
                out.payload = {{"kind", "site"}, {"objects", S.objects}, {"alexandrov", is_alexandrov(S)}};
            } else if (j.contains("site") && j.contains("presheaf")) {
                auto S = io::parse_site(j["site"], "site");
                auto F = io::parse_presheaf(j["presheaf"], S, "presheaf");
                json counts = json::object();
                for (int x = 0; x < S.size(); ++x) counts[S.objects[x]] = F.value[x].counts();
                out.payload = {{"kind", "presheaf"}, {"counts", counts}};
            } else {
                throw io::ParseError("$", "unrecognised document (expected a dgset, a site or {site, presheaf})");
            }
        } else if (command == "standard") {
            auto X = standard(family_from(kind, param), n, D, boundary);
            out.payload = {{"object", io::emit(X)}, {"summary", object_summary(X)}};
        } else if (command == "free") {
            auto X = io::parse_dgset(read_json(input));
            if (X.family.kind != Kind::trivial) throw std::invalid_argument("free expects a trivial-family object");
            auto Y = free_object(family_from(kind, param), X);
            out.payload = {{"object", io::emit(Y)}, {"summary", object_summary(Y)}};
        } else if (command == "sphere") {
            auto X = sphere(family_from(kind, param), n, D);
            out.payload = {{"object", io::emit(X)}, {"summary", object_summary(X)}};
        } else if (command == "subdivide") {
            auto X = io::parse_dgset(read_json(input));
            auto k = parse_subdivision(sub_kind);
            DGSet Y = k == SubdivisionKind::edgewise ? edgewise(X, r) : k == SubdivisionKind::segal ? segal(X) : dihedral_sbd(X, r);
            long euler = 0;
            for (int m = 0; m <= Y.D; ++m) euler += (m % 2 ? -1 : 1) * static_cast<long>(Y.nondegenerate(m).size());
            out.payload = {{"object", io::emit(Y)}, {"f_vector", f_vector(Y)}, {"euler_characteristic", euler}};
            try {
                out.payload["action"] = gset_block(induced_action(X, k, r));
            } catch (const std::invalid_argument&) {
                // no induced action for this family and kind
            }
        } else if (command == "fixed-points") {
            auto X = io::parse_dgset(read_json(input));
            auto G = induced_action(X, parse_subdivision(sub_kind), r);
            auto P = fixed_points(G, parse_words(words));
            out.payload = {{"object", io::emit(P)}, {"summary", object_summary(P)}, {"group_order", G.order}};
        } else if (command == "so2-fix") {
            auto X = io::parse_dgset(read_json(input));
            out.payload = {{"vertices", so2_fix(X)}};
        } else if (command == "homology") {
            auto X = io::parse_dgset(read_json(input));
            if (mod && !is_prime(mod)) throw std::invalid_argument("--mod must be a prime");
            out.payload = {{"homology", io::emit(homology(chains(X, reduced, mod), max_dim))}, {"coefficients", mod ? "F_" + std::to_string(mod) : "Z"}};
        } else if (command == "em-object") {
            auto A = io::parse_coefficients(A_text);
            auto M = em_object(family_from(kind, param), A, n, D);
            out.payload = {{"ranks", M.rank}, {"valid", validate(M).ok()}};
            try {
                out.payload["homology"] = io::emit(em_homology(M, max_dim));
            } catch (const std::invalid_argument& e) {
                out.payload["homology_unavailable"] = e.what();
            }
        } else if (command == "cyclic-homology") {
            auto X = io::parse_dgset(read_json(input));
            auto M = free_abelian(X, false, std::vector<i64>{mod});
            auto h = cyclic_homology(M, max_dim);
            out.payload = {{"HC", io::emit(h.HC)}, {"HH", io::emit(h.HH)}};
        } else if (command == "dold-kan") {
            auto X = io::parse_dgset(read_json(input));
            auto M = free_abelian(X, reduced, std::vector<i64>{mod});
            auto C = dold_kan(M);
            json ranks = json::array(), ds = json::array();
            for (int k = 0; k <= C.top(); ++k) {
                ranks.push_back(C.rank(k));
                const Matrix& m = C.boundary(k);
                json rows = json::array();
                for (int i = 0; i < m.rows(); ++i) {
                    json row = json::array();
                    for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
                    rows.push_back(row);
                }
                ds.push_back(rows);
            }
            out.payload = {{"ranks", ranks}, {"boundaries", ds}, {"homology", io::emit(homology(C, std::max(0, C.top() - 1)))}};
        } else if (command == "site-cohomology") {
            auto S = io::parse_site(read_json(input));
            i64 ring = 0;
            if (coeffs != "Z") {
                ring = std::stoll(coeffs);
                if (!is_prime(ring)) throw std::invalid_argument("coefficients must be Z or a prime");
            }
            auto A = constant_presheaf(S, ring);
            auto h = site_cohomology(S, A, max_dim);
            std::vector<int> cv;
            if (cover.empty()) cv = maximal_objects(S);
            else {
                std::stringstream ss(cover);
                std::string tok;
                while (std::getline(ss, tok, ',')) cv.push_back(S.index_of(tok));
            }
            auto hc = cech_cohomology(S, cv, A, max_dim);
            out.payload = {{"cohomology", io::emit(h)}, {"cech", io::emit(hc)}, {"agree", h.trusted_groups() == hc.trusted_groups()}};
        } else if (command == "local-we") {
            json j = read_json(input);
            auto S = io::parse_site(io::detail::field(j, "site", ""), "site");
            auto F = io::parse_presheaf(io::detail::field(j, "source", ""), S, "source");
            auto G = io::parse_presheaf(io::detail::field(j, "target", ""), S, "target");
            auto f = io::parse_presheaf_map(io::detail::field(j, "map", ""), S, F, G, "map");
            auto v = local_we_refuter(S, F, G, f, r_max);
            out.payload = verdict_json(v);
            if (v.refuted) out.status = "refuted";
        } else if (command == "coupled-classify") {
            json j = read_json(input);
            auto S = io::parse_site(io::detail::field(j, "site", ""), "site");
            auto fn = parse_coupled_functor(io::detail::as_string(io::detail::field(j, "functor", ""), "functor"));
            Family fam = j.contains("family") ? io::parse_family(j["family"]) : Family(Kind::cyclic);
            i64 p = j.contains("prime") ? j["prime"].get<i64>() : 2;
            if (fn == CoupledFunctor::free_abelian && !is_prime(p)) throw io::ParseError("prime", "expected a prime");
            auto X = parse_coupled(io::detail::field(j, "source", ""), S, fn, fam, p, "source");
            auto Y = parse_coupled(io::detail::field(j, "target", ""), S, fn, fam, p, "target");
            const json& mj = io::detail::field(j, "map", "");
            CoupledMap m;
            m.a = io::parse_presheaf_map(io::detail::field(mj, "a", "map"), S, X.A, Y.A, "map.a");
            auto b = io::parse_presheaf_map(io::detail::field(mj, "b", "map"), S, X.B, Y.B, "map.b");
            if (fn == CoupledFunctor::free) m.b = b;
            else m.bmod = linearise_map(X.B, Y.B, b, p);
            auto v = coupled_classify(S, X, Y, m, r_max);
            out.payload = {{"verdict", v.verdict},
                           {"A_leg", verdict_json(v.a_leg)},
                           {"B_leg", verdict_json(v.b_leg)},
                           {"a_objectwise_mono", v.a_mono},
                           {"comparison", {{"valid", v.comparison_valid}, {"objectwise_mono", v.comparison_mono}, {"problems", v.comparison_problems}}}};
            if (!v.pushout_sizes.empty()) out.payload["pushout_counts"] = v.pushout_sizes;
            if (!v.pushout_ranks.empty()) out.payload["pushout_ranks"] = v.pushout_ranks;
            if (v.verdict == "neither") out.status = "refuted";
        } else if (command == "equivariant-cohomology") {
            FiniteSite S = input.empty() ? FiniteSite::alexandrov({"*"}, {}) : io::parse_site(read_json(input));
            auto h = site_equivariant_cohomology(S, family_from(kind, param), model, io::parse_coefficients(A_text), max_dim);
            out.payload = {{"cohomology", io::emit(h)}};
        }
    } catch (const io::ParseError& e) {
        out.status = "error";
        out.payload = {{"error", e.what()}, {"path", e.path}};
    } catch (const std::exception& e) {
        out.status = "error";
        out.payload = {{"error", e.what()}};
    }

    json report{{"command", echo}, {"status", out.status}, {"payload", out.payload}, {"version", kVersion}};
    std::string text = report.dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(output);
        if (!f) {
            std::cerr << "cannot write '" << output << "'\n";
            return 1;
        }
        f << text;
    }
    if (out.status == "error") {
        std::cerr << out.payload["error"].get<std::string>() << "\n";
        return 1;
    }
    return out.status == "refuted" ? 2 : 0;
}
