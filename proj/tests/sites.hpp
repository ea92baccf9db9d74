#pragma once

#include <string>
#include <vector>

#include <xsimp/site.hpp>

#include "corpus.hpp"

namespace sites {

using namespace xsimp;

inline FiniteSite point() { return FiniteSite::alexandrov({"*"}, {}); }

inline FiniteSite discrete2() { return FiniteSite::alexandrov({"a", "b"}, {}); }

inline FiniteSite chain3() { return FiniteSite::alexandrov({"a", "b", "c"}, {{0, 1}, {1, 2}}); }

inline FiniteSite vee() { return FiniteSite::alexandrov({"a", "b", "c"}, {{0, 1}, {0, 2}}); }

/// a, b < c, d: the nerve is a 4-cycle.
inline FiniteSite pseudocircle() { return FiniteSite::alexandrov({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}); }

/// Proper faces of a tetrahedron ordered by inclusion; the nerve is the barycentric 2-sphere.
inline FiniteSite tetra_boundary() {
    std::vector<std::string> objs;
    std::vector<int> masks;
    for (int m = 1; m < 15; ++m) {
        std::string s;
        for (int v = 0; v < 4; ++v)
            if (m >> v & 1) s += std::to_string(v);
        objs.push_back(s);
        masks.push_back(m);
    }
    std::vector<std::pair<int, int>> le;
    for (size_t i = 0; i < masks.size(); ++i)
        for (size_t j = 0; j < masks.size(); ++j)
            if (i != j && (masks[i] & masks[j]) == masks[i]) le.push_back({static_cast<int>(i), static_cast<int>(j)});
    return FiniteSite::alexandrov(objs, le);
}

/// u, v < w with w covered by {u, v}.
inline FiniteSite covered_top() {
    return FiniteSite::make({"u", "v", "w"}, {{0, 2}, {1, 2}}, {{}, {}, {{0, 1}}});
}

inline std::vector<FiniteSite> all() { return {point(), discrete2(), chain3(), vee(), pseudocircle(), covered_top()}; }

inline DGPresheafMap constant_map(const FiniteSite& S, const DGMap& f) { return DGPresheafMap(S.size(), f); }

/// Delta[1] everywhere; restriction x -> y is the identity when y lies in the up-set U, else vertex 0.
inline DGPresheaf bent_interval(const FiniteSite& S, const std::vector<bool>& U, int D) {
    DGSet I = corpus::delta(1, D);
    DGMap id = identity_map(I), v0 = corpus::to_point(I);
    DGPresheaf F{std::vector<DGSet>(S.size(), I), {}};
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            if (S.less(y, x)) F.res[{x, y}] = U[y] ? id : v0;
    return F;
}

inline std::vector<bool> upper_half(const FiniteSite& S) {
    std::vector<bool> U(S.size(), false);
    for (int x = 0; x < S.size(); ++x) {
        bool maximal = true;
        for (int y = 0; y < S.size(); ++y)
            if (S.less(x, y)) maximal = false;
        U[x] = maximal;
    }
    return U;
}

struct RefuterCase {
    std::string name;
    FiniteSite site;
    DGPresheaf F, G;
    DGPresheafMap f;
    bool distinct;  // objectwise homology-distinct (else an objectwise homotopy equivalence)
};

inline DGMap vertex_map(const DGSet& X, const DGSet& Y, int y0) {
    DGMap f;
    int v = y0;
    for (int n = 0; n <= std::min(X.D, Y.D); ++n) {
        f.f.emplace_back(X.size(n), v);
        if (n < Y.D) v = Y.degen(n, v, 0);
    }
    return f;
}

/// Maps whose ground truth is known by construction, over every corpus site.
inline std::vector<RefuterCase> refuter_corpus(int D = 3) {
    const Family triv(Kind::trivial), cyc(Kind::cyclic);
    struct Base {
        std::string name;
        DGSet X, Y;
        DGMap f;
        bool distinct;
    };
    std::vector<Base> base;
    auto pt = corpus::delta(0, D);
    auto add_to_point = [&](const std::string& n, const DGSet& X, bool distinct) { base.push_back({n, X, pt, corpus::to_point(X), distinct}); };
    base.push_back({"id Delta[2]", corpus::delta(2, D), corpus::delta(2, D), identity_map(corpus::delta(2, D)), false});
    add_to_point("Delta[1] -> pt", corpus::delta(1, D), false);
    add_to_point("Delta[2] -> pt", corpus::delta(2, D), false);
    {
        auto h = corpus::horn(D);
        base.push_back({"horn -> Delta[2]", h.object, corpus::delta(2, D), h.map, false});
    }
    base.push_back({"pt -> Delta[1]", pt, corpus::delta(1, D), vertex_map(pt, corpus::delta(1, D), 1), false});
    base.push_back({"id circle", corpus::circle(D), corpus::circle(D), identity_map(corpus::circle(D)), false});
    {
        auto A = free_object(cyc, corpus::delta(1, D)), B = free_object(cyc, pt);
        base.push_back({"free Delta[1] -> free pt", A, B, free_map(cyc, corpus::delta(1, D), pt, corpus::to_point(corpus::delta(1, D))), false});
        auto S = sphere(cyc, 1, D);
        base.push_back({"id cyclic circle", S, S, identity_map(S), false});
    }
    add_to_point("circle -> pt", corpus::circle(D), true);
    add_to_point("two points -> pt", corpus::discrete(triv, 2, D), true);
    add_to_point("boundary Delta[3] -> pt", corpus::boundary_delta(3, D), true);
    add_to_point("torus -> pt", corpus::torus(D), true);
    {
        auto B = corpus::boundary_delta(2, D), X = corpus::delta(2, D);
        DGMap inc;
        for (int n = 0; n <= D; ++n) {
            inc.f.emplace_back();
            for (int x = 0; x < B.size(n); ++x) inc.f.back().push_back(X.index_of(n, B.ids[n][x]));
        }
        base.push_back({"boundary Delta[2] -> Delta[2]", B, X, inc, true});
        auto two = corpus::discrete(triv, 2, D);
        base.push_back({"pt -> two points", pt, two, vertex_map(pt, two, 0), true});
        auto I = corpus::delta(1, D);
        base.push_back({"Delta[1] -> two points", I, two, corpus::to_point(I), true});
    }
    {
        auto one = corpus::discrete(cyc, 1, D);
        auto F0 = free_object(cyc, pt);
        base.push_back({"free pt -> cyclic pt", F0, one, corpus::to_point(F0), true});
        auto S = sphere(cyc, 1, D);
        base.push_back({"cyclic circle -> cyclic pt", S, one, corpus::to_point(S), true});
    }

    std::vector<RefuterCase> out;
    for (auto& S : all()) {
        for (auto& b : base)
            out.push_back({b.name + " on " + std::to_string(S.size()) + "-object site", S, constant_presheaf(S, b.X), constant_presheaf(S, b.Y),
                           constant_map(S, b.f), b.distinct});
        // non-constant presheaves
        auto Fb = bent_interval(S, upper_half(S), D);
        out.push_back({"bent interval -> pt", S, Fb, constant_presheaf(S, pt), constant_map(S, corpus::to_point(Fb.value[0])), false});
        out.push_back({"pt -> bent interval", S, constant_presheaf(S, pt), Fb, constant_map(S, vertex_map(pt, Fb.value[0], 0)), false});
        out.push_back({"id bent interval", S, Fb, Fb, constant_map(S, identity_map(Fb.value[0])), false});
    }
    return out;
}

struct CoupledCase {
    std::string name;
    FiniteSite site;
    CoupledPresheaf X, Y;
    CoupledMap m;
};

/// (A, B, s) with the structure map given on generators: s = adjunct of a map A -> U(B).
inline CoupledPresheaf free_triple(const FiniteSite& S, const Family& F, const DGSet& A, const DGSet& B, const DGMap& on_generators) {
    CoupledPresheaf X;
    X.functor = CoupledFunctor::free;
    X.family = F;
    X.A = constant_presheaf(S, A);
    X.B = constant_presheaf(S, B);
    X.s = DGPresheafMap(S.size(), free_adjunct(F, A, B, on_generators));
    return X;
}

inline CoupledPresheaf linear_triple(const FiniteSite& S, const DGSet& A, i64 p) {
    CoupledPresheaf X;
    X.functor = CoupledFunctor::free_abelian;
    X.prime = p;
    X.A = constant_presheaf(S, A);
    X.Bmod = linearise(X.A, p);
    X.smod = ModulePresheafMap(S.size(), linear_map(A, A, identity_map(A), p));
    return X;
}

/// Coupled maps over several sites: identities, a refuted leg, cofibration data, free images of
/// equivalences and a free-abelian case.
inline std::vector<CoupledCase> coupled_corpus(int D = 3) {
    const Family triv(Kind::trivial), cyc(Kind::cyclic);
    auto pt = corpus::delta(0, D), I = corpus::delta(1, D), two = corpus::discrete(triv, 2, D);
    auto circle = sphere(cyc, 1, D), one = corpus::discrete(cyc, 1, D);
    auto F0 = free_object(cyc, pt), F2 = free_object(cyc, two), FI = free_object(cyc, I);
    std::vector<CoupledCase> out;
    for (auto& S : {point(), chain3(), vee(), pseudocircle()}) {
        auto c = [&](const DGMap& f) { return constant_map(S, f); };
        {
            auto X = free_triple(S, cyc, pt, circle, vertex_map(pt, circle, 0));
            out.push_back({"identity", S, X, X, {c(identity_map(pt)), c(identity_map(circle)), {}}});
        }
        {
            auto X = free_triple(S, cyc, pt, circle, vertex_map(pt, circle, 0));
            auto Y = free_triple(S, cyc, pt, one, vertex_map(pt, one, 0));
            out.push_back({"circle collapses", S, X, Y, {c(identity_map(pt)), c(corpus::to_point(circle)), {}}});
        }
        {
            auto X = free_triple(S, cyc, pt, F0, vertex_map(pt, F0, 0));
            auto Y = free_triple(S, cyc, two, F2, identity_map(two));
            auto inc = vertex_map(pt, two, 0);
            out.push_back({"point into two points", S, X, Y, {c(inc), c(free_map(cyc, pt, two, inc)), {}}});
        }
        {
            auto X = free_triple(S, cyc, I, FI, identity_map(I));
            auto Y = free_triple(S, cyc, pt, F0, identity_map(pt));
            auto a = corpus::to_point(I);
            out.push_back({"free interval collapse", S, X, Y, {c(a), c(free_map(cyc, I, pt, a)), {}}});
        }
        {
            auto X = linear_triple(S, pt, 3), Y = linear_triple(S, I, 3);
            auto a = vertex_map(pt, I, 0);
            out.push_back({"linear point into interval", S, X, Y, {c(a), {}, ModulePresheafMap(S.size(), linear_map(pt, I, a, 3))}});
        }
    }
    return out;
}

} // namespace sites
