#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <xsimp/json_io.hpp>

#include "corpus.hpp"
#include "sites.hpp"
#include "support.hpp"

using namespace xsimp;
using json = nlohmann::json;

namespace {

const Family cyc(Kind::cyclic);

bool same_object(const DGSet& a, const DGSet& b) {
    return a.family == b.family && a.D == b.D && a.ids == b.ids && a.faces == b.faces && a.degens == b.degens && a.action == b.action &&
           a.basepoint == b.basepoint;
}

// circle with one vertex v and one edge e0, truncated at 1
json tiny_circle() {
    return json::parse(R"({
      "family": {"kind": "trivial", "param": 1},
      "truncation": 1,
      "levels": [
        {"dim": 0, "simplices": ["v"], "degeneracies": {"v": ["s0v"]}, "action": {}},
        {"dim": 1, "simplices": ["s0v", "e0"], "faces": {"s0v": ["v", "v"], "e0": ["v", "v"]}, "action": {}}
      ]
    })");
}

struct Run {
    int code;
    json report;
    std::string text;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(XSIMP_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    int status = pclose(p);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    json j = out.empty() ? json() : json::parse(out, nullptr, false);
    return {code, j, out};
}

// scratch documents live in a per-run temporary directory
struct ScratchDir {
    std::filesystem::path dir = std::filesystem::temp_directory_path() / ("xsimp_io_" + std::to_string(getpid()));
    ScratchDir() { std::filesystem::create_directories(dir); }
    ~ScratchDir() { std::filesystem::remove_all(dir); }
};

std::string path(const std::string& name) {
    static const ScratchDir scratch;
    return (scratch.dir / name).string();
}

std::string write(const std::string& name, const json& j) {
    std::ofstream(path(name)) << j.dump();
    return path(name);
}

} // namespace

TEST_CASE("dgset documents round trip", "[io]") {
    std::vector<DGSet> objs{corpus::delta(2, 3), corpus::circle(3), corpus::torus(3), sphere(cyc, 1, 3), standard(Family(Kind::dihedral), 1, 2),
                            standard(Family(Kind::quaternionic, 1), 0, 2), free_object(Family(Kind::ncyclic, 2), corpus::delta(1, 2))};
    for (auto& X : objs) {
        auto j = io::emit(X);
        auto Y = io::parse_dgset(json::parse(j.dump()));
        CHECK(same_object(X, Y));
        CHECK(io::emit(Y) == j);
    }
    CHECK(io::parse_dgset(tiny_circle()).counts() == std::vector<int>{1, 2});
}

TEST_CASE("schema errors carry a JSON path", "[io]") {
    auto j = tiny_circle();
    j["levels"][1]["faces"].erase("e0");
    try {
        io::parse_dgset(j);
        FAIL("accepted a missing face");
    } catch (const io::ParseError& e) {
        CHECK(e.path == "levels[1].faces.e0");
    }
    auto k = tiny_circle();
    k["levels"][1]["faces"]["e0"][1] = "w";
    CHECK_THROWS_AS(io::parse_dgset(k), io::ParseError);
    auto m = tiny_circle();
    m["levels"][1]["faces"]["s0v"] = json::array({"v"});
    try {
        io::parse_dgset(m);
        FAIL("accepted a short face list");
    } catch (const io::ParseError& e) {
        CHECK(e.path == "levels[1].faces.s0v");
    }
    auto bad = io::emit(corpus::delta(1, 2));
    bad["levels"][1]["faces"]["[0,1]"] = json::array({"[0]", "[1]"});  // d_0 must be the vertex 1
    CHECK_THROWS_WITH(io::parse_dgset(bad), Catch::Matchers::ContainsSubstring("invalid object"));
    CHECK_THROWS(io::parse_family(json{{"kind", "symmetric"}}));
}

TEST_CASE("site and presheaf documents", "[io]") {
    auto j = json::parse(R"({"objects": ["a", "b", "c", "d"], "leq": [["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"]]})");
    auto S = io::parse_site(j);
    CHECK(S.size() == 4);
    CHECK(io::parse_site(io::emit(S)).le == S.le);
    auto C = sites::covered_top();
    auto C2 = io::parse_site(io::emit(C));
    CHECK(C2.covers == C.covers);
    CHECK_THROWS_AS(io::parse_site(json::parse(R"({"objects": ["a"], "leq": [["a", "z"]]})")), io::ParseError);

    auto F = sites::bent_interval(sites::chain3(), sites::upper_half(sites::chain3()), 2);
    auto ch = sites::chain3();
    auto doc = io::emit(ch, F);
    auto F2 = io::parse_presheaf(json::parse(doc.dump()), ch);
    CHECK(F2.res.size() == F.res.size());
    for (auto& [k, m] : F.res) CHECK(F2.res.at(k).f == m.f);
    doc["restrictions"][0]["map"][0]["[0]"] = "[5]";
    CHECK_THROWS_AS(io::parse_presheaf(doc, ch), io::ParseError);
    CHECK(io::parse_coefficients("Z") == std::vector<i64>{0});
    CHECK(io::parse_coefficients("6,0") == std::vector<i64>{6, 0});
    CHECK(io::parse_coefficients("Z/3") == std::vector<i64>{3});
}

TEST_CASE("command line: objects and homology", "[cli]") {
    auto v = cli("validate " + write("io_circle.json", io::emit(corpus::circle(3))));
    CHECK(v.code == 0);
    CHECK(v.report["status"] == "ok");
    CHECK(v.report["version"].is_string());

    auto h = cli("homology --max-dim 1 " + path("io_circle.json"));
    CHECK(h.code == 0);
    REQUIRE(h.report["payload"]["homology"].size() == 2);
    CHECK(h.report["payload"]["homology"][0]["rank"] == 1);
    CHECK(h.report["payload"]["homology"][1]["rank"] == 1);
    CHECK(h.report["payload"]["homology"][1]["torsion"].empty());

    auto s = cli("subdivide --kind edgewise --r 2 " + write("io_d2.json", io::emit(corpus::delta(2, 5))));
    CHECK(s.code == 0);
    CHECK(s.report["payload"]["f_vector"] == json::array({6, 9, 4}));
    CHECK(s.report["payload"]["euler_characteristic"] == 1);

    auto bad = io::emit(corpus::delta(1, 2));
    bad["levels"][1]["faces"]["[0,1]"] = json::array({"[0]", "[1]"});
    auto r = cli("validate " + write("io_bad.json", bad));
    CHECK(r.code == 2);
    CHECK(r.report["status"] == "refuted");
    CHECK_FALSE(r.report["payload"]["violations"].empty());

    auto missing = tiny_circle();
    missing["levels"][1]["faces"].erase("e0");
    auto m = cli("homology " + write("io_missing.json", missing));
    CHECK(m.code == 1);
    CHECK(m.report["status"] == "error");
    CHECK(m.report["payload"]["path"] == "levels[1].faces.e0");

    CHECK(cli("homology --no-such-flag " + path("io_circle.json")).code == 1);
    CHECK(cli("frobnicate").code == 1);

    auto st = cli("standard --family cyclic --n 1 --truncate 3");
    CHECK(st.code == 0);
    CHECK(io::parse_dgset(st.report["payload"]["object"]).counts() == standard(cyc, 1, 3).counts());
    auto sp = cli("sphere --family cyclic --n 1 --truncate 3");
    CHECK(cli("homology --max-dim 2 " + write("io_torus.json", io::emit(underlying(io::parse_dgset(sp.report["payload"]["object"]))))).report["payload"]["homology"][1]["rank"] == 2);
    // a constructor report is accepted as input directly
    CHECK(cli("homology --max-dim 2 " + write("io_report.json", sp.report)).report["payload"]["homology"][1]["rank"] == 2);
    auto fp = cli("fixed-points --kind edgewise --r 2 --subgroup theta " + write("io_free.json", io::emit(free_object(cyc, corpus::delta(0, 5)))));
    CHECK(fp.code == 0);
    CHECK(fp.report["payload"]["summary"]["counts"] == json::array({0, 0, 0}));
    auto so2 = cli("so2-fix " + write("io_term.json", io::emit(terminal(cyc, 2))));
    CHECK(so2.report["payload"]["vertices"].size() == 1);
    auto fr = cli("free --family cyclic " + path("io_d2.json"));
    CHECK(fr.code == 0);

    // determinism
    CHECK(cli("homology --max-dim 1 " + path("io_circle.json")).text == h.text);
}

TEST_CASE("command line: algebra and sites", "[cli]") {
    auto em = cli("em-object --A 2 --n 1 --truncate 4 --max-dim 3");
    CHECK(em.code == 0);
    CHECK(em.report["payload"]["homology"][1]["torsion"] == json::array({2}));

    auto cy = cli("cyclic-homology --max-degree 2 " + write("io_cyc_pt.json", io::emit(standard(cyc, 0, 4))));
    CHECK(cy.code == 0);
    CHECK(cy.report["payload"]["HC"][0]["rank"] == 1);

    auto dk = cli("dold-kan " + path("io_circle.json"));
    CHECK(dk.code == 0);
    CHECK(dk.report["payload"]["ranks"][1] == 1);

    auto sc = cli("site-cohomology --coefficients Z --max-degree 2 " + write("io_pc.json", io::emit(sites::pseudocircle())));
    CHECK(sc.code == 0);
    CHECK(sc.report["payload"]["cohomology"][1]["rank"] == 1);
    CHECK(sc.report["payload"]["agree"] == true);

    auto eq = cli("equivariant-cohomology --family cyclic --A 0 --max-degree 4");
    CHECK(eq.code == 0);
    CHECK(eq.report["payload"]["cohomology"][2]["rank"] == 1);
    CHECK(cli("equivariant-cohomology --family dihedral --A 0 --max-degree 2").code == 1);

    auto S = sites::vee();
    auto circle = corpus::circle(3), pt = corpus::delta(0, 3);
    json doc{{"site", io::emit(S)},
             {"source", io::emit(S, constant_presheaf(S, circle))},
             {"target", io::emit(S, constant_presheaf(S, pt))},
             {"map", io::emit(S, constant_presheaf(S, circle), constant_presheaf(S, pt), sites::constant_map(S, corpus::to_point(circle)))}};
    auto lw = cli("local-we --r-max 1 " + write("io_lwe.json", doc));
    CHECK(lw.code == 2);
    CHECK(lw.report["payload"]["witness"]["invariant"] == "H");
    CHECK(lw.report["payload"]["witness"]["degree"] == 1);
    doc["target"] = doc["source"];
    doc["map"] = io::emit(S, constant_presheaf(S, circle), constant_presheaf(S, circle), sites::constant_map(S, identity_map(circle)));
    CHECK(cli("local-we " + write("io_lwe_id.json", doc)).code == 0);

    // coupled: identity on (pt, cyclic circle, basepoint)
    auto B = sphere(cyc, 1, 3);
    auto Bp = constant_presheaf(S, B), Ap = constant_presheaf(S, pt);
    DGPresheaf UB = Bp;
    for (auto& v : UB.value) v = underlying(v);
    json side{{"A", io::emit(S, Ap)}, {"B", io::emit(S, Bp)}, {"s", io::emit(S, Ap, UB, sites::constant_map(S, sites::vertex_map(pt, UB.value[0], 0)))}};
    json cdoc{{"site", io::emit(S)}, {"functor", "free"}, {"family", io::emit(cyc)}, {"source", side}, {"target", side},
              {"map", {{"a", io::emit(S, Ap, Ap, sites::constant_map(S, identity_map(pt)))}, {"b", io::emit(S, Bp, Bp, sites::constant_map(S, identity_map(B)))}}}};
    auto cc = cli("coupled-classify " + write("io_coupled.json", cdoc));
    CHECK(cc.code == 0);
    CHECK(cc.report["payload"]["verdict"] == "weak-equivalence-candidate");
    CHECK(cc.report["payload"]["comparison"]["valid"] == true);
    cdoc["functor"] = "nabla";
    CHECK(cli("coupled-classify " + write("io_coupled_bad.json", cdoc)).code == 1);
}
