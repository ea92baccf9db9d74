// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include <xsimp/csg.hpp>
#include <xsimp/cyclic.hpp>
#include <xsimp/module.hpp>
#include <xsimp/site.hpp>
#include <xsimp/subdivision.hpp>

#include "corpus.hpp"
#include "sites.hpp"

using namespace xsimp;

namespace {

const Family triv(Kind::trivial);
const Family cyc(Kind::cyclic);
const Family dih(Kind::dihedral);

AbelianGroup Z(int r = 1) { return {r, {}}; }
AbelianGroup Zmod(i64 q) { return {0, {q}}; }
const AbelianGroup zero{};

std::mt19937_64& rng() {
    static std::mt19937_64 g([] {
        const char* s = std::getenv("XSIMP_SEED");
        return s ? std::stoull(s) : 20240611ULL;
    }());
    return g;
}

int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

std::vector<Family> families(int max_param) {
    std::vector<Family> out{triv, Family(Kind::reflexive), cyc, dih};
    for (int p = 1; p <= max_param; ++p) {
        out.emplace_back(Kind::ncyclic, p);
        out.emplace_back(Kind::ndihedral, p);
        out.emplace_back(Kind::quaternionic, p);
    }
    return out;
}

// Collects failures for one criterion; detail is printed on the result line.
struct Check {
    std::vector<std::string> failures;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string show(const std::vector<AbelianGroup>& gs) {
    std::string s = "(";
    for (size_t i = 0; i < gs.size(); ++i) s += (i ? ", " : "") + gs[i].str();
    return s + ")";
}

std::vector<int> fvector(const DGSet& X) {
    std::vector<int> c;
    for (int n = 0; n <= X.D; ++n) c.push_back(static_cast<int>(X.nondegenerate(n).size()));
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

// group orders as tabulated for the planar families
int table_order(const Family& f, int n) {
    switch (f.kind) {
    case Kind::trivial: return 1;
    case Kind::reflexive: return 2;
    case Kind::cyclic: return n + 1;
    case Kind::dihedral: return 2 * (n + 1);
    case Kind::ncyclic: return f.param * (n + 1);
    case Kind::ndihedral: return 2 * f.param * (n + 1);
    case Kind::quaternionic: return 4 * f.param * (n + 1);
    }
    return -1;
}

void criterion1(Check& c) {
    int groups = 0;
    for (auto& f : families(3))
        for (int n = 0; n <= 6; ++n) {
            ++groups;
            std::string where = f.name() + " n=" + std::to_string(n);
            int want = table_order(f, n);
            // closure of the generators under multiplication
            std::set<std::pair<int, int>> seen{{0, 0}};
            std::vector<GroupElement> frontier{GroupElement::identity(f, n)}, elements = frontier;
            while (!frontier.empty()) {
                auto g = frontier.back();
                frontier.pop_back();
                for (auto& name : f.generators()) {
                    auto h = multiply(GroupElement::generator(f, n, name), g);
                    if (seen.insert({h.k, h.e}).second) {
                        frontier.push_back(h);
                        elements.push_back(h);
                    }
                }
            }
            c.require(static_cast<int>(seen.size()) == want, where + ": generated order " + std::to_string(seen.size()));
            c.require(group_order(f, n) == want, where + ": group_order");
            c.require(static_cast<int>(group_elements(f, n).size()) == want, where + ": group_elements");
            // full multiplication table: closed, unital, inverses, associative
            auto id = GroupElement::identity(f, n);
            for (auto& a : elements) {
                c.require(multiply(a, inverse(a)) == id && multiply(inverse(a), a) == id, where + ": inverse");
                c.require(multiply(a, id) == a && multiply(id, a) == a, where + ": unit");
                for (auto& b : elements) {
                    auto ab = multiply(a, b);
                    c.require(seen.count({ab.k, ab.e}) == 1, where + ": not closed");
                    for (auto& g : elements)
                        if (!(multiply(ab, g) == multiply(a, multiply(b, g)))) {
                            c.require(false, where + ": not associative");
                            break;
                        }
                }
            }
        }
    c.detail = std::to_string(groups) + " groups, n <= 6";
}

void criterion2(Check& c) {
    int pairs = 0;
    for (auto& f : families(3))
        for (int m = 0; m <= 3; ++m)
            for (int n = 0; n <= 3; ++n) {
                auto homs = enumerate_homs(f, m, n);
                std::set<CrossedMorphism> distinct(homs.begin(), homs.end());
                // |Hom(m, n)| = |G_m| * C(n+m+1, m+1) monotone maps, counted independently
                i64 mono = 0;
                for (int mask = 0; mask < (1 << (n + m + 1)); ++mask)
                    if (__builtin_popcount(mask) == m + 1) ++mono;
                i64 want = table_order(f, m) * mono;
                c.require(static_cast<i64>(distinct.size()) == hom_count(f, m, n) && hom_count(f, m, n) == want,
                          f.name() + " Hom(" + std::to_string(m) + "," + std::to_string(n) + ")");
                ++pairs;
            }
    auto fams = families(3);
    int triples = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto& f = fams[uniform(0, static_cast<int>(fams.size()) - 1)];
        int a = uniform(0, 3), b = uniform(0, 3), d3 = uniform(0, 3), d4 = uniform(0, 3);
        auto pick = [&](int m, int n) {
            auto homs = enumerate_homs(f, m, n);
            return homs[uniform(0, static_cast<int>(homs.size()) - 1)];
        };
        auto h1 = pick(a, b), h2 = pick(b, d3), h3 = pick(d3, d4);
        c.require(compose(h3, compose(h2, h1)) == compose(compose(h3, h2), h1), "associativity at " + f.name());
        ++triples;
    }
    c.detail = std::to_string(pairs) + " hom sets, " + std::to_string(triples) + " random triples";
}

void criterion3(Check& c) {
    std::vector<std::pair<std::string, DGSet>> corp{{"Delta[2]", corpus::delta(2, 7)},
                                                     {"boundary Delta[3]", corpus::boundary_delta(3, 7)},
                                                     {"circle", corpus::circle(7)},
                                                     {"torus", corpus::torus(7)}};
    int checked = 0;
    for (auto& [name, X] : corp) {
        for (int r = 1; r <= 3; ++r) {
            auto rep = validate(edgewise(X, r));
            c.require(rep.ok(), "edgewise r=" + std::to_string(r) + " on " + name);
            ++checked;
        }
        c.require(validate(segal(X)).ok(), "segal on " + name);
        ++checked;
    }
    c.detail = std::to_string(checked) + " subdivisions validated";
}

void criterion4(Check& c) {
    std::vector<std::pair<std::string, DGSet>> corp{{"Delta[2]", corpus::delta(2, 8)},
                                                     {"boundary Delta[3]", corpus::boundary_delta(3, 8)},
                                                     {"circle", corpus::circle(8)},
                                                     {"torus", corpus::torus(8)}};
    int compared = 0;
    for (auto& [name, X] : corp) {
        auto hx = simplicial_homology(X);
        for (int r = 2; r <= 3; ++r) {
            auto hs = simplicial_homology(edgewise(X, r));
            c.require(homology_agrees(hx, hs) && hs.trusted_groups().size() >= 2, "edgewise r=" + std::to_string(r) + " on " + name);
            ++compared;
        }
        auto hq = simplicial_homology(segal(X));
        c.require(homology_agrees(hx, hq) && hq.trusted_groups().size() >= 2, "segal on " + name);
        ++compared;
    }
    c.detail = std::to_string(compared) + " comparisons";
}

void criterion5(Check& c) {
    auto euler = [](const std::vector<int>& f) {
        int chi = 0;
        for (size_t i = 0; i < f.size(); ++i) chi += (i % 2 ? -1 : 1) * f[i];
        return chi;
    };
    auto e = fvector(edgewise(corpus::delta(2, 7), 2)), s = fvector(segal(corpus::delta(2, 7)));
    const std::vector<int> want{6, 9, 4};
    c.require(e == want && euler(e) == 1, "edgewise f-vector");
    c.require(s == want && euler(s) == 1, "segal f-vector");
    c.detail = "f = (6, 9, 4), chi = 1";
}

void criterion6(Check& c) {
    for (int r = 1; r <= 3; ++r) {
        auto P = phi(terminal(cyc, 3 * r + 2), r);
        bool point = validate(P).ok();
        for (int n = 0; n <= P.D; ++n) point = point && P.size(n) == 1;
        c.require(point, "Phi_" + std::to_string(r) + " of the terminal object");
    }
    auto Fr = phi(free_object(cyc, corpus::delta(0, 5)), 2);
    for (int n = 0; n <= Fr.D; ++n) c.require(Fr.size(n) == 0, "Phi_2 of free point is nonempty");
    for (int r = 2; r <= 3; ++r) {
        auto E = phi(standard(cyc, 0, 3 * r + 2), r);
        for (int n = 0; n <= E.D; ++n) c.require(E.size(n) == 0, "Phi_r of the representable is nonempty");
    }

    // fixed points are sub-simplicial sets of the subdivision
    int validated = 0;
    auto sub = [&](const DGSet& P, const DGSet& base, const std::string& what) {
        c.require(validate(P).ok(), what + " fails validation");
        for (int n = 0; n <= P.D; ++n)
            for (auto& id : P.ids[n]) c.require(base.index_of(n, id) >= 0, what + " is not a subobject");
        ++validated;
    };
    for (int r = 2; r <= 3; ++r)
        for (auto& X : {sphere(cyc, 1, 3 * r + 2), standard(cyc, 1, 3 * r + 2), free_object(cyc, corpus::circle(3 * r + 2)),
                        corpus::discrete(cyc, 2, 3 * r + 2)}) {
            auto G = induced_action(X, SubdivisionKind::edgewise, r);
            sub(phi(X, r), G.base, "Phi_" + std::to_string(r));
            sub(fixed_points(G, parse_words("theta")), G.base, "theta-fixed points");
        }
    auto Gd = induced_action(standard(dih, 1, 7), SubdivisionKind::dihedral, 2);
    for (auto w : {"theta", "rho", "theta, rho", ""}) sub(fixed_points(Gd, parse_words(w)), Gd.base, std::string("dihedral <") + w + ">");

    for (int k = 1; k <= 3; ++k) c.require(static_cast<int>(so2_fix(corpus::discrete(cyc, k, 3)).size()) == k, "so2_fix on trivial action");
    auto tc = with_trivial_action(corpus::circle(3), cyc);
    c.require(static_cast<int>(so2_fix(tc).size()) == tc.size(0), "so2_fix on trivially acted circle");
    for (auto& X : {free_object(cyc, corpus::delta(0, 3)), free_object(cyc, corpus::boundary_delta(1, 3)), free_object(cyc, corpus::circle(3))})
        c.require(so2_fix(X).empty(), "so2_fix on a free object");
    c.detail = std::to_string(validated) + " fixed-point objects validated";
}

void criterion7(Check& c) {
    auto h = simplicial_homology(underlying(sphere(cyc, 1, 3)), 2);
    auto got = h.groups();
    c.require(got.size() == 3 && got[0] == Z() && got[1] == Z(2) && got[2] == Z(), "underlying homology " + show(got));
    c.detail = show(got);
}

// Inhomogeneous bar complex of Z/q with trivial integral coefficients.
ChainComplex bar_complex(int q, int top) {
    std::vector<int> ranks;
    int r = 1;
    for (int n = 0; n <= top; ++n, r *= q) ranks.push_back(r);
    auto encode = [&](const std::vector<int>& g) {
        int code = 0;
        for (int i = static_cast<int>(g.size()) - 1; i >= 0; --i) code = code * q + g[i];
        return code;
    };
    std::vector<Matrix> d{Matrix(0, 1)};
    for (int n = 1; n <= top; ++n) {
        Matrix m(ranks[n - 1], ranks[n]);
        for (int col = 0; col < ranks[n]; ++col) {
            std::vector<int> g(n);
            for (int i = 0, x = col; i < n; ++i, x /= q) g[i] = x % q;
            for (int i = 0; i <= n; ++i) {
                std::vector<int> h;
                if (i == 0) h.assign(g.begin() + 1, g.end());
                else if (i == n) h.assign(g.begin(), g.end() - 1);
                else {
                    h = g;
                    h[i - 1] = (g[i - 1] + g[i]) % q;
                    h.erase(h.begin() + i);
                }
                m(encode(h), col) += (i % 2 ? -1 : 1);
            }
        }
        d.push_back(m);
    }
    return ChainComplex::make(0, ranks, d, false);
}

void criterion8(Check& c) {
    auto hz = em_homology(em_object(triv, {0}, 1, 3)).trusted_groups();
    c.require(hz == std::vector<AbelianGroup>{Z(), Z(), zero}, "K(Z,1) gives " + show(hz));
    auto h2 = em_homology(em_object(triv, {2}, 1, 4), 3);
    auto oracle = homology(bar_complex(2, 5), 3);
    for (int k = 0; k <= 3; ++k) c.require(h2[k] == oracle[k], "K(Z/2,1) disagrees with the bar complex in degree " + std::to_string(k));
    c.require(h2.trusted_groups() == std::vector<AbelianGroup>{Z(), Zmod(2), zero, Zmod(2)}, "K(Z/2,1) gives " + show(h2.trusted_groups()));
    // connectivity: reduced homology vanishes below n
    int cases = 0;
    for (auto [A, n, D] : {std::tuple<i64, int, int>{0, 1, 3}, {2, 1, 4}, {3, 1, 4}, {2, 2, 4}}) {
        auto h = em_homology(em_object(triv, {A}, n, D), n);
        c.require(h[0] == Z(), "H_0 of K(Z/" + std::to_string(A) + "," + std::to_string(n) + ")");
        for (int k = 1; k < n; ++k) c.require(h[k].is_zero(), "reduced homology below n");
        c.require(!h[n].is_zero(), "H_n vanishes");
        ++cases;
    }
    c.detail = "K(Z,1) " + show(hz) + ", K(Z/2,1) " + show(h2.trusted_groups()) + ", " + std::to_string(cases) + " connectivity cases";
}

bool cyclic_natural(const DeltaGModule& M, const DeltaGModule& N, const std::vector<Matrix>& phi, i64 m, int D) {
    for (int n = 0; n <= D; ++n) {
        for (int i = 0; n >= 1 && i <= n; ++i)
            if (!equal_mod(mul(N.d(n, i), phi[n], m), mul(phi[n - 1], M.d(n, i), m), m)) return false;
        for (int i = 0; n < D && i <= n; ++i)
            if (!equal_mod(mul(N.s(n, i), phi[n], m), mul(phi[n + 1], M.s(n, i), m), m)) return false;
        if (!equal_mod(mul(N.action[n].at("t"), phi[n], m), mul(phi[n], M.action[n].at("t"), m), m)) return false;
    }
    return true;
}

bool round_trip_iso(const DeltaGModule& M) {
    auto C = cyclic_dold_kan(M);
    auto R = cdk_inverse(C);
    if (!validate(R).ok()) return false;
    int D = R.D;
    auto T = truncate(M, D);
    auto phi = gamma_counit(T, moore(T), D);
    i64 p = C.ring;
    for (int n = 0; n <= D; ++n)
        if (!invertible(p ? phi[n].reduced(p) : phi[n], p)) return false;
    return cyclic_natural(R, T, phi, p, D);
}

void criterion9(Check& c) {
    std::vector<DeltaGModule> sources{free_abelian(sphere(cyc, 1, 4)), free_abelian(standard(cyc, 1, 4)),
                                      free_abelian(standard(cyc, 0, 4), false, {5}), trivial_cyclic_module(0, 4)};
    for (auto& M : sources) {
        c.require(validate(M).ok(), "constructed module rejected");
        auto C = cyclic_dold_kan(M);
        c.require(validate_duchain(C).ok() && validate_cyclic(C).ok(), "constructed cyclic complex rejected");
    }
    // single-entry corruptions of d and delta
    auto C = cyclic_dold_kan(free_abelian(sphere(cyc, 1, 4)));
    int tried = 0, rejected = 0, still_cyclic = 0;
    for (int n = 1; n <= C.top(); ++n)
        for (int which = 0; which < 2; ++which) {
            Matrix& m = which ? C.delta[n] : C.d[n];
            for (int r = 0; r < m.rows(); ++r)
                for (int col = 0; col < m.cols(); ++col) {
                    i64 keep = m(r, col);
                    m(r, col) += 1;
                    ++tried;
                    if (!validate_cyclic(C).ok()) ++rejected;
                    else {
                        // an accepted corruption must be a genuine cyclic complex in its own right
                        c.require(which == 1, "corrupted boundary accepted");
                        bool genuine = validate(cdk_inverse(C)).ok();
                        c.require(genuine, "accepted corruption is not a cyclic complex");
                        still_cyclic += genuine;
                    }
                    m(r, col) = keep;
                }
        }
    c.require(rejected + still_cyclic == tried, "corruptions neither rejected nor cyclic");

    int trips = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto M = corpus::random_cyclic_module(5, 4, rng());
        c.require(validate(M).ok() && round_trip_iso(M), "round trip " + std::to_string(trial));
        ++trips;
    }
    auto h = cyclic_homology(trivial_cyclic_module(0, 5), 4);
    c.require(h.HC.trusted_groups() == std::vector<AbelianGroup>{Z(), zero, Z(), zero, Z()}, "HC " + show(h.HC.trusted_groups()));
    auto hh = cyclic_homology(trivial_cyclic_module(0, 5), 2).HH.trusted_groups();
    c.require(hh == std::vector<AbelianGroup>{Z(), zero, zero}, "HH " + show(hh));
    std::ostringstream os;
    os << rejected << "/" << tried << " corruptions rejected, " << still_cyclic << " accepted one(s) are valid cyclic complexes; " << trips
       << " round trips; HC " << show(h.HC.trusted_groups()) << ", HH " << show(hh);
    c.detail = os.str();
}

void criterion10(Check& c) {
    auto pc = sites::pseudocircle();
    auto h = site_cohomology(pc, constant_presheaf(pc, 0), 1).trusted_groups();
    c.require(h == std::vector<AbelianGroup>{Z(), Z()}, "pseudocircle " + show(h));
    auto tb = sites::tetra_boundary();
    auto h2 = site_cohomology(tb, constant_presheaf(tb, 0), 2).trusted_groups();
    c.require(h2 == std::vector<AbelianGroup>{Z(), zero, Z()}, "tetrahedron boundary " + show(h2));
    int sites_checked = 0;
    for (auto& S : {sites::point(), sites::discrete2(), sites::chain3(), sites::vee(), pc, tb}) {
        for (i64 ring : {0, 2, 3}) {
            auto A = constant_presheaf(S, ring);
            auto viaCech = cech_cohomology(S, maximal_objects(S), A, 3), viaChains = site_cohomology(S, A, 3);
            c.require(viaCech.trusted_groups() == viaChains.trusted_groups(), "Cech and ordered chains disagree");
        }
        ++sites_checked;
    }
    c.detail = "pseudocircle " + show(h) + ", tetrahedron boundary " + show(h2) + ", " + std::to_string(sites_checked) + " sites agree";
}

void criterion11(Check& c) {
    int n_eq = 0, n_distinct = 0, false_ref = 0, missed = 0, no_witness = 0, linear_checked = 0, linear_ref = 0;
    for (auto& rc : sites::refuter_corpus()) {
        auto v = local_we_refuter(rc.site, rc.F, rc.G, rc.f, 2);
        if (rc.distinct) {
            ++n_distinct;
            missed += !v.refuted;
            no_witness += v.refuted && !v.witness;
        } else {
            ++n_eq;
            false_ref += v.refuted;
            for (i64 p : {2, 3}) {
                auto M = linearise(rc.F, p), N = linearise(rc.G, p);
                linear_ref += module_we_refuter(rc.site, M, N, linearise_map(rc.F, rc.G, rc.f, p)).refuted;
                ++linear_checked;
            }
        }
    }
    c.require(n_eq >= 50 && n_distinct >= 50, "corpus too small");
    c.require(false_ref == 0, std::to_string(false_ref) + " false refutations");
    c.require(missed == 0, std::to_string(missed) + " missed refutations");
    c.require(no_witness == 0, "refutations without witness");
    c.require(linear_ref == 0, std::to_string(linear_ref) + " linearised equivalences refuted");
    std::ostringstream os;
    os << n_eq << " equivalences (" << false_ref << " refuted), " << n_distinct << " distinct (" << n_distinct - missed
       << " refuted with witness), " << linear_checked << " linearised checks";
    c.detail = os.str();
}

void criterion12(Check& c) {
    int n = 0;
    std::map<std::string, int> tally;
    for (auto& cc : sites::coupled_corpus()) {
        auto v = coupled_classify(cc.site, cc.X, cc.Y, cc.m, 2);
        // component verdicts recomputed on their own
        bool a_ok = !local_we_refuter(cc.site, cc.X.A, cc.Y.A, cc.m.a, 2).refuted;
        bool b_ok = cc.X.functor == CoupledFunctor::free ? !local_we_refuter(cc.site, cc.X.B, cc.Y.B, cc.m.b, 2).refuted
                                                         : !module_we_refuter(cc.site, cc.X.Bmod, cc.Y.Bmod, cc.m.bmod).refuted;
        c.require((v.verdict == "weak-equivalence-candidate") == (a_ok && b_ok), cc.name + ": verdict is not the conjunction");
        c.require(v.a_leg.refuted == !a_ok && v.b_leg.refuted == !b_ok, cc.name + ": leg verdicts differ");
        c.require(v.comparison_valid && v.comparison_problems.empty(), cc.name + ": comparison map invalid");
        ++tally[v.verdict];
        ++n;
    }
    c.require(n == 20, std::to_string(n) + " coupled maps");
    std::ostringstream os;
    os << n << " coupled maps";
    for (auto& [k, m] : tally) os << ", " << m << " " << k;
    c.detail = os.str();
}

void criterion13(Check& c) {
    auto hz = equivariant_cohomology_point(cyc, {0}, 4).trusted_groups();
    c.require(hz == std::vector<AbelianGroup>{Z(), zero, Z(), zero, Z()}, "A = Z " + show(hz));
    auto h3 = equivariant_cohomology_point(cyc, {3}, 4).trusted_groups();
    c.require(h3 == std::vector<AbelianGroup>{Zmod(3), zero, Zmod(3), zero, Zmod(3)}, "A = Z/3 " + show(h3));
    auto hs = site_equivariant_cohomology(sites::point(), cyc, "weak", {0}, 4).trusted_groups();
    c.require(hs == hz, "site route " + show(hs));
    c.detail = "Z " + show(hz) + ", Z/3 " + show(h3);
}

// no floating point types in the library or the tool
void criterion14_sources(Check& c) {
    std::regex fp(R"(\b(float|double)\b)");
    int files = 0;
    for (auto dir : {XSIMP_SOURCE_DIR "/include/xsimp", XSIMP_SOURCE_DIR "/tools"}) {
        for (auto& e : std::filesystem::directory_iterator(dir)) {
            std::ifstream in(e.path());
            std::string line;
            int no = 0;
            while (std::getline(in, line)) {
                ++no;
                auto code = line.substr(0, line.find("//"));
                if (std::regex_search(code, fp)) c.require(false, e.path().filename().string() + ":" + std::to_string(no) + " uses floating point");
            }
            ++files;
        }
    }
    c.require(files > 0, "no sources found");
}

} // namespace

int main() {
    using clock = std::chrono::steady_clock;
    auto start = clock::now();
    struct Criterion {
        int id;
        std::string title;
        std::function<void(Check&)> run;
    };
    std::vector<Criterion> all{
        {1, "group orders and multiplication tables", criterion1},
        {2, "canonical decomposition counts and associativity", criterion2},
        {3, "subdivisions satisfy the simplicial identities", criterion3},
        {4, "subdivision preserves homology", criterion4},
        {5, "f-vectors of subdivided Delta[2]", criterion5},
        {6, "fixed points", criterion6},
        {7, "underlying homology of the cyclic circle", criterion7},
        {8, "Eilenberg-MacLane objects", criterion8},
        {9, "cyclic algebra", criterion9},
        {10, "site cohomology", criterion10},
        {11, "refuter soundness", criterion11},
        {12, "coupled classification", criterion12},
        {13, "equivariant cohomology of a point", criterion13},
    };
    int failed = 0;
    auto report = [&](int id, const std::string& title, Check& c, long long ms) {
        bool ok = c.failures.empty();
        failed += !ok;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << c.detail << "; " << ms << " ms]\n";
        for (size_t i = 0; i < c.failures.size() && i < 5; ++i) std::cout << "    " << c.failures[i] << "\n";
        if (c.failures.size() > 5) std::cout << "    ... " << c.failures.size() - 5 << " more\n";
    };
    for (auto& cr : all) {
        Check c;
        auto t0 = clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        report(cr.id, cr.title, c, std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count());
    }
    Check c14;
    criterion14_sources(c14);
    long long total = std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start).count();
    c14.require(total < 5 * 60 * 1000, "wall clock " + std::to_string(total) + " ms");
    c14.detail = "total " + std::to_string(total) + " ms, no floating point in library or tool";
    report(14, "wall clock and exact arithmetic", c14, total);
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << 14 - failed << "/14\n";
    return failed ? 1 : 0;
}
