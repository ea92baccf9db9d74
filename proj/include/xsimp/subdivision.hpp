#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chain.hpp"
#include "dgset.hpp"

namespace xsimp {

/// Reindexed object together with the level of the source each output level came from.
struct Subdivided {
    DGSet object;            // trivial family
    std::vector<int> level;  // level[n] = source level of output level n
};

namespace detail {

inline DGSet reindexed_shell(const DGSet& X, const std::vector<int>& level, int D) {
    DGSet Y(Family(Kind::trivial), D);
    for (int n = 0; n <= D; ++n) Y.ids[n] = X.ids[level[n]];
    return Y;
}

inline int apply_faces(const DGSet& X, int lvl, int x, const std::vector<int>& idx_first_to_last) {
    for (int i : idx_first_to_last) x = X.face(lvl--, x, i);
    return x;
}

inline int apply_degens(const DGSet& X, int lvl, int x, const std::vector<int>& idx_first_to_last) {
    for (int i : idx_first_to_last) x = X.degen(lvl++, x, i);
    return x;
}

} // namespace detail

/// r-fold edgewise subdivision: level n is X_{r(n+1)-1}.
inline Subdivided edgewise_levels(const DGSet& X, int r) {
    if (r < 1) throw std::invalid_argument("subdivision factor must be at least 1");
    int D = (X.D + 1) / r - 1;
    if (D < 0) throw std::invalid_argument("edgewise: truncation " + std::to_string(X.D) + " too small for r=" + std::to_string(r));
    std::vector<int> level;
    for (int n = 0; n <= D; ++n) level.push_back(r * (n + 1) - 1);
    DGSet Y = detail::reindexed_shell(X, level, D);
    for (int n = 0; n <= D; ++n) {
        int L = level[n];
        for (int x = 0; x < X.size(L); ++x) {
            if (n >= 1) {
                std::vector<int> fs;
                for (int i = 0; i <= n; ++i) {
                    // d_i o d_{i+(n+1)} o ... o d_{i+(r-1)(n+1)}, rightmost first
                    std::vector<int> idx;
                    for (int k = r - 1; k >= 0; --k) idx.push_back(i + k * (n + 1));
                    fs.push_back(detail::apply_faces(X, L, x, idx));
                }
                Y.faces[n].push_back(fs);
            }
            if (n < D) {
                std::vector<int> ds;
                for (int i = 0; i <= n; ++i) {
                    // s_i first, then s_{i+(n+2)}, ... each step in the enlarged level
                    std::vector<int> idx;
                    for (int k = 0; k < r; ++k) idx.push_back(i + k * (n + 2));
                    ds.push_back(detail::apply_degens(X, L, x, idx));
                }
                Y.degens[n].push_back(ds);
            }
        }
    }
    return {Y, level};
}

inline DGSet edgewise(const DGSet& X, int r) { return edgewise_levels(X, r).object; }

/// Segal subdivision: level n is X_{2n+1}, d_i' = d_i d_{2n+1-i}, s_i' = s_{2n-i} s_i (n the target level).
inline Subdivided segal_levels(const DGSet& X) {
    int D = (X.D - 1) / 2;
    if (X.D < 1) throw std::invalid_argument("segal: truncation must be at least 1");
    std::vector<int> level;
    for (int n = 0; n <= D; ++n) level.push_back(2 * n + 1);
    DGSet Y = detail::reindexed_shell(X, level, D);
    for (int n = 0; n <= D; ++n) {
        int L = level[n];
        for (int x = 0; x < X.size(L); ++x) {
            if (n >= 1) {
                std::vector<int> fs;
                for (int i = 0; i <= n; ++i) fs.push_back(detail::apply_faces(X, L, x, {2 * n + 1 - i, i}));
                Y.faces[n].push_back(fs);
            }
            if (n < D) {
                std::vector<int> ds;
                for (int i = 0; i <= n; ++i) ds.push_back(detail::apply_degens(X, L, x, {i, 2 * n + 2 - i}));
                Y.degens[n].push_back(ds);
            }
        }
    }
    return {Y, level};
}

inline DGSet segal(const DGSet& X) { return segal_levels(X).object; }

/// sbd_r X = sq(sd_r X); level n is X_{r(2n+2)-1}.
inline Subdivided dihedral_levels(const DGSet& X, int r) {
    auto sd = edgewise_levels(X, r);
    auto sq = segal_levels(sd.object);
    for (int& l : sq.level) l = sd.level[l];
    return sq;
}

inline DGSet dihedral_sbd(const DGSet& X, int r) { return dihedral_levels(X, r).object; }

// ---------------------------------------------------------------------------
// Induced finite group actions

/// Simplicial set with a levelwise (uncrossed) action of a finite group given by generator tables.
struct GSimplicialSet {
    DGSet base;                                                 // trivial family
    std::string group;                                          // "cyclic", "dihedral", "quaternionic"
    std::map<std::string, std::vector<std::vector<int>>> gens;  // gens[name][n][x]
    int order = 1;                                              // order of the generated group

    int apply(const std::string& g, int n, int x) const { return gens.at(g)[n][x]; }
};

enum class SubdivisionKind { edgewise, segal, dihedral };

inline SubdivisionKind parse_subdivision(const std::string& s) {
    if (s == "edgewise") return SubdivisionKind::edgewise;
    if (s == "segal") return SubdivisionKind::segal;
    if (s == "dihedral") return SubdivisionKind::dihedral;
    throw std::invalid_argument("unknown subdivision kind '" + s + "'");
}

namespace detail {

inline std::string reflection_name(const Family& f) { return f.kind == Kind::quaternionic ? "b" : "w"; }

// order of the permutation group generated by the tables (acting on the disjoint union of levels)
inline int generated_order(const std::map<std::string, std::vector<std::vector<int>>>& gens, const DGSet& Y) {
    std::vector<int> offset{0};
    for (int n = 0; n <= Y.D; ++n) offset.push_back(offset.back() + Y.size(n));
    int total = offset.back();
    std::vector<std::vector<int>> perms;
    for (auto& [name, tab] : gens) {
        std::vector<int> p(total);
        for (int n = 0; n <= Y.D; ++n)
            for (int x = 0; x < Y.size(n); ++x) p[offset[n] + x] = offset[n] + tab[n][x];
        perms.push_back(p);
    }
    std::vector<int> id(total);
    std::iota(id.begin(), id.end(), 0);
    std::set<std::vector<int>> seen{id};
    std::vector<std::vector<int>> frontier{id};
    while (!frontier.empty()) {
        auto g = frontier.back();
        frontier.pop_back();
        for (auto& p : perms) {
            std::vector<int> h(total);
            for (int i = 0; i < total; ++i) h[i] = p[g[i]];
            if (seen.insert(h).second) frontier.push_back(h);
        }
        if (seen.size() > 100000) throw std::runtime_error("induced group too large");
    }
    return static_cast<int>(seen.size());
}

} // namespace detail

/// Checks that every generator table is a simplicial automorphism.
inline std::vector<std::string> validate_gset(const GSimplicialSet& G) {
    std::vector<std::string> errs;
    const DGSet& Y = G.base;
    for (auto& [name, tab] : G.gens) {
        for (int n = 0; n <= Y.D; ++n) {
            std::vector<int> sorted = tab[n];
            std::sort(sorted.begin(), sorted.end());
            for (int x = 0; x < Y.size(n); ++x)
                if (sorted[x] != x) { errs.push_back(name + " is not a bijection at level " + std::to_string(n)); break; }
            for (int x = 0; x < Y.size(n); ++x) {
                if (n >= 1)
                    for (int i = 0; i <= n; ++i)
                        if (Y.face(n, tab[n][x], i) != tab[n - 1][Y.face(n, x, i)])
                            errs.push_back(name + " does not commute with d_" + std::to_string(i) + " at '" + Y.ids[n][x] + "'");
                if (n < Y.D)
                    for (int i = 0; i <= n; ++i)
                        if (Y.degen(n, tab[n][x], i) != tab[n + 1][Y.degen(n, x, i)])
                            errs.push_back(name + " does not commute with s_" + std::to_string(i) + " at '" + Y.ids[n][x] + "'");
            }
        }
    }
    return errs;
}

/// Natural finite group action on a subdivision, built from the crossed action of X.
///   edgewise r: theta_n = t^{n+1} on X_{r(n+1)-1}
///   segal:      rho_n = reflection on X_{2n+1}
///   dihedral r: theta_n = t^{2n+2} and rho_n = reflection, both on X_{r(2n+2)-1}
inline GSimplicialSet induced_action(const DGSet& X, SubdivisionKind kind, int r = 1) {
    const Family& F = X.family;
    Subdivided S = kind == SubdivisionKind::edgewise ? edgewise_levels(X, r)
                 : kind == SubdivisionKind::segal    ? segal_levels(X)
                                                     : dihedral_levels(X, r);
    GSimplicialSet G{S.object, "", {}, 1};
    bool need_rot = kind != SubdivisionKind::segal;
    bool need_ref = kind != SubdivisionKind::edgewise;
    if (need_rot && !F.has_rotation()) throw std::invalid_argument("family " + F.name() + " has no rotation generator");
    if (need_ref && !F.has_reflection()) throw std::invalid_argument("family " + F.name() + " has no reflection generator");
    if (need_rot) {
        auto& tab = G.gens["theta"];
        for (int n = 0; n <= S.object.D; ++n) {
            int L = S.level[n];
            int power = kind == SubdivisionKind::edgewise ? n + 1 : 2 * n + 2;
            tab.emplace_back(X.size(L));
            for (int x = 0; x < X.size(L); ++x) {
                int y = x;
                for (int s = 0; s < power; ++s) y = X.act(L, "t", y);
                tab[n][x] = y;
            }
        }
    }
    if (need_ref) {
        auto& tab = G.gens["rho"];
        std::string w = detail::reflection_name(F);
        for (int n = 0; n <= S.object.D; ++n) {
            int L = S.level[n];
            tab.emplace_back(X.size(L));
            for (int x = 0; x < X.size(L); ++x) tab[n][x] = X.act(L, w, x);
        }
    }
    G.group = kind == SubdivisionKind::edgewise ? "cyclic" : F.kind == Kind::quaternionic ? "quaternionic" : "dihedral";
    auto errs = validate_gset(G);
    if (!errs.empty()) throw std::logic_error("induced action is not simplicial: " + errs.front());
    G.order = detail::generated_order(G.gens, G.base);
    return G;
}

// ---------------------------------------------------------------------------
// Fixed points

/// A group word: product of generator powers, applied right to left.
using Word = std::vector<std::pair<std::string, int>>;

/// Parses "theta^2 rho" or "theta*rho"; "1" or "" is the identity.
inline Word parse_word(const std::string& text) {
    Word w;
    std::string s = text;
    std::replace(s.begin(), s.end(), '*', ' ');
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        if (tok == "1" || tok == "e") continue;
        auto caret = tok.find('^');
        std::string g = tok.substr(0, caret);
        int p = 1;
        if (caret != std::string::npos) {
            try {
                size_t used = 0;
                p = std::stoi(tok.substr(caret + 1), &used);
                if (used != tok.size() - caret - 1) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw std::invalid_argument("invalid exponent in word '" + text + "'");
            }
        }
        if (g.empty()) throw std::invalid_argument("invalid word '" + text + "'");
        w.push_back({g, p});
    }
    return w;
}

inline std::vector<Word> parse_words(const std::string& text) {
    std::vector<Word> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            out.push_back(parse_word(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

inline int apply_word(const GSimplicialSet& G, const Word& w, int n, int x) {
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        auto g = G.gens.find(it->first);
        if (g == G.gens.end()) throw std::invalid_argument("unknown generator '" + it->first + "'");
        const auto& tab = g->second[n];
        int p = it->second;
        if (p >= 0) {
            for (int s = 0; s < p; ++s) x = tab[x];
        } else {
            std::vector<int> inv(tab.size());
            for (size_t y = 0; y < tab.size(); ++y) inv[tab[y]] = static_cast<int>(y);
            for (int s = 0; s < -p; ++s) x = inv[x];
        }
    }
    return x;
}

/// Simplices fixed by every listed word, as a sub-simplicial set (ids kept).
inline DGSet fixed_points(const GSimplicialSet& G, const std::vector<Word>& subgroup) {
    const DGSet& Y = G.base;
    for (auto& w : subgroup)
        for (auto& [g, p] : w)
            if (!G.gens.count(g)) throw std::invalid_argument("unknown generator '" + g + "'");
    SubObject fix(Y.D + 1);
    for (int n = 0; n <= Y.D; ++n) {
        fix[n].assign(Y.size(n), true);
        for (int x = 0; x < Y.size(n); ++x)
            for (auto& w : subgroup)
                if (apply_word(G, w, n, x) != x) { fix[n][x] = false; break; }
    }
    auto errs = check_subobject(Y, fix);
    if (!errs.empty()) throw std::logic_error("fixed points not closed: " + errs.front());
    return sub_object(Y, fix).object;
}

/// Phi_r: fixed points of <theta> on the edgewise subdivision. For covering families the
/// subdivision factor is cover * r, so the level group Z/(cover(m+1)) contains theta.
inline DGSet phi(const DGSet& X, int r) {
    if (!X.family.has_rotation()) throw std::invalid_argument("Phi needs a cyclic-type family");
    int R = X.family.cover() * r;
    auto G = induced_action(X, SubdivisionKind::edgewise, R);
    return fixed_points(G, {{{"theta", 1}}});
}

/// Gamma_r (dihedral) and Gamma^q_r (quaternionic): fixed points of <theta, rho> on sbd.
inline DGSet gamma(const DGSet& X, int r) {
    if (!X.family.has_rotation() || !X.family.has_reflection())
        throw std::invalid_argument("Gamma needs a dihedral or quaternionic family");
    int R = X.family.cover() * r;
    auto G = induced_action(X, SubdivisionKind::dihedral, R);
    return fixed_points(G, {{{"theta", 1}}, {{"rho", 1}}});
}

/// Vertices x with t . s_0 x = s_0 x (the extra degeneracy reading s_1 = t_1 s_0 on X_0).
inline std::vector<std::string> so2_fix(const DGSet& X) {
    if (!X.family.has_rotation()) throw std::invalid_argument("so2_fix needs a cyclic-type family");
    if (X.D < 1) throw std::invalid_argument("so2_fix needs truncation at least 1");
    std::vector<std::string> out;
    for (int x = 0; x < X.size(0); ++x) {
        int e = X.degen(0, x, 0);
        if (X.act(1, "t", e) == e) out.push_back(X.ids[0][x]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weak-equivalence refuter

/// Connected component of each vertex.
inline std::vector<int> components(const DGSet& X) {
    std::vector<int> parent(X.size(0));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    if (X.D >= 1)
        for (int e = 0; e < X.size(1); ++e) {
            int a = find(X.face(1, e, 0)), b = find(X.face(1, e, 1));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::map<int, int> label;
    std::vector<int> comp(X.size(0));
    for (int v = 0; v < X.size(0); ++v) {
        int r = find(v);
        auto it = label.emplace(r, static_cast<int>(label.size())).first;
        comp[v] = it->second;
    }
    return comp;
}

inline int component_count(const DGSet& X) {
    auto c = components(X);
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

struct Witness {
    std::string invariant;  // "pi0" or "H"
    int degree = 0;
    std::string source, target;
};

struct Verdict {
    bool refuted = false;
    std::optional<Witness> witness;
    std::string note;
};

/// Sound refuter: compares pi_0 through f and integral homology in degrees < max_dim.
/// "not refuted" is not a certificate.
inline Verdict we_refuter(const DGSet& X, const DGSet& Y, const DGMap& f, int max_dim) {
    Verdict v;
    v.note = "pi_0 and homology below degree " + std::to_string(max_dim) + " agree; this does not certify a weak equivalence";
    auto cx = components(X), cy = components(Y);
    int nx = cx.empty() ? 0 : *std::max_element(cx.begin(), cx.end()) + 1;
    int ny = cy.empty() ? 0 : *std::max_element(cy.begin(), cy.end()) + 1;
    std::vector<int> image(nx, -1);
    std::set<int> hit;
    bool injective = true;
    for (int x = 0; x < X.size(0); ++x) {
        int c = cy[f(0, x)];
        if (image[cx[x]] >= 0 && image[cx[x]] != c) injective = false;  // impossible for simplicial f
        image[cx[x]] = c;
    }
    for (int c : image) {
        if (hit.count(c)) injective = false;
        hit.insert(c);
    }
    if (!injective || static_cast<int>(hit.size()) != ny) {
        v.refuted = true;
        v.witness = Witness{"pi0", 0, std::to_string(nx) + " components", std::to_string(ny) + " components"};
        v.note = "f does not induce a bijection on pi_0";
        return v;
    }
    int top = std::min({max_dim - 1, X.D - 1, Y.D - 1});
    auto hx = homology(chains(X), std::max(top, 0)), hy = homology(chains(Y), std::max(top, 0));
    for (int k = 0; k <= top; ++k) {
        if (!(hx[k] == hy[k])) {
            v.refuted = true;
            v.witness = Witness{"H", k, hx[k].str(), hy[k].str()};
            v.note = "integral homology differs in degree " + std::to_string(k);
            return v;
        }
    }
    return v;
}

} // namespace xsimp
