#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "csg.hpp"

namespace xsimp {

/// Finite truncated simplicial set with a crossed action of a family.
/// Simplices are addressed by index within their level; ids are opaque strings.
struct DGSet {
    Family family;
    int D = 0;
    std::vector<std::vector<std::string>> ids;                       // ids[n][x]
    std::vector<std::vector<std::vector<int>>> faces;                // faces[n][x][i], n >= 1
    std::vector<std::vector<std::vector<int>>> degens;               // degens[n][x][i], n < D
    std::vector<std::map<std::string, std::vector<int>>> action;     // action[n][gen][x]
    std::optional<std::string> basepoint;                            // level-0 id

    DGSet() = default;
    DGSet(Family f, int truncation) : family(f), D(truncation) {
        if (truncation < 0) throw std::invalid_argument("negative truncation");
        ids.resize(D + 1);
        faces.resize(D + 1);
        degens.resize(D + 1);
        action.resize(D + 1);
    }

    int size(int n) const { return static_cast<int>(ids[n].size()); }

    int face(int n, int x, int i) const { return faces[n][x][i]; }
    int degen(int n, int x, int i) const { return degens[n][x][i]; }
    int act(int n, const std::string& gen, int x) const { return action[n].at(gen)[x]; }

    // a^k b^e acting on the left: reflection first
    int act(const GroupElement& g, int x) const {
        int n = g.n;
        if (g.e) x = act(n, family.kind == Kind::quaternionic ? "b" : "w", x);
        for (int s = 0; s < g.k; ++s) x = act(n, "t", x);
        return x;
    }

    int index_of(int n, const std::string& id) const {
        if (static_cast<int>(lookup_.size()) != D + 1 || lookup_valid_ != total_size()) rebuild_lookup();
        auto it = lookup_[n].find(id);
        return it == lookup_[n].end() ? -1 : it->second;
    }

    int add(int n, const std::string& id) {
        ids[n].push_back(id);
        return size(n) - 1;
    }

    // iterated s_0 image of the level-0 basepoint
    int basepoint_at(int n) const {
        if (!basepoint) throw std::invalid_argument("object is not pointed");
        int x = index_of(0, *basepoint);
        if (x < 0) throw std::invalid_argument("basepoint id not found at level 0");
        for (int l = 0; l < n; ++l) x = degen(l, x, 0);
        return x;
    }

    std::vector<int> counts() const {
        std::vector<int> c;
        for (int n = 0; n <= D; ++n) c.push_back(size(n));
        return c;
    }

    bool is_degenerate(int n, int x) const {
        // x is degenerate iff x = s_i d_i x for some i (uses the table one level down)
        if (n == 0) return false;
        for (int i = 0; i < n; ++i) {
            int y = face(n, x, i);
            if (degen(n - 1, y, i) == x) return true;
        }
        return false;
    }

    std::vector<int> nondegenerate(int n) const {
        std::vector<int> out;
        for (int x = 0; x < size(n); ++x)
            if (!is_degenerate(n, x)) out.push_back(x);
        return out;
    }

private:
    size_t total_size() const {
        size_t s = 0;
        for (auto& l : ids) s += l.size() + 1;
        return s;
    }
    void rebuild_lookup() const {
        lookup_.assign(D + 1, {});
        for (int n = 0; n <= D; ++n)
            for (int x = 0; x < size(n); ++x) lookup_[n][ids[n][x]] = x;
        lookup_valid_ = total_size();
    }
    mutable std::vector<std::unordered_map<std::string, int>> lookup_;
    mutable size_t lookup_valid_ = 0;
};

/// Levelwise simplex function; f[n][x] is the image index.
struct DGMap {
    std::vector<std::vector<int>> f;
    int operator()(int n, int x) const { return f[n][x]; }
};

inline DGMap identity_map(const DGSet& X) {
    DGMap m;
    for (int n = 0; n <= X.D; ++n) {
        m.f.emplace_back(X.size(n));
        std::iota(m.f.back().begin(), m.f.back().end(), 0);
    }
    return m;
}

inline DGMap compose(const DGMap& g, const DGMap& f) {
    DGMap h;
    size_t L = std::min(f.f.size(), g.f.size());
    for (size_t n = 0; n < L; ++n) {
        h.f.emplace_back(f.f[n].size());
        for (size_t x = 0; x < f.f[n].size(); ++x) h.f[n][x] = g.f[n][f.f[n][x]];
    }
    return h;
}

struct Violation {
    std::string identity;
    int level = 0;
    std::string simplex;
    std::string detail;
};

struct ValidationReport {
    std::vector<std::string> structural;  // dangling ids, wrong arities
    std::vector<Violation> violations;
    bool ok() const { return structural.empty() && violations.empty(); }
};

namespace detail {

inline void structural_check(const DGSet& X, ValidationReport& r) {
    auto bad = [&](const std::string& s) { r.structural.push_back(s); };
    if (static_cast<int>(X.ids.size()) != X.D + 1) { bad("level count does not match truncation"); return; }
    for (int n = 0; n <= X.D; ++n) {
        std::set<std::string> seen;
        for (auto& id : X.ids[n])
            if (!seen.insert(id).second) bad("duplicate id '" + id + "' at level " + std::to_string(n));
        if (n >= 1) {
            if (static_cast<int>(X.faces[n].size()) != X.size(n)) { bad("face table size at level " + std::to_string(n)); continue; }
            for (int x = 0; x < X.size(n); ++x) {
                if (static_cast<int>(X.faces[n][x].size()) != n + 1) bad("face arity of '" + X.ids[n][x] + "'");
                for (int y : X.faces[n][x])
                    if (y < 0 || y >= X.size(n - 1)) bad("dangling face of '" + X.ids[n][x] + "' at level " + std::to_string(n));
            }
        }
        if (n < X.D) {
            if (static_cast<int>(X.degens[n].size()) != X.size(n)) { bad("degeneracy table size at level " + std::to_string(n)); continue; }
            for (int x = 0; x < X.size(n); ++x) {
                if (static_cast<int>(X.degens[n][x].size()) != n + 1) bad("degeneracy arity of '" + X.ids[n][x] + "'");
                for (int y : X.degens[n][x])
                    if (y < 0 || y >= X.size(n + 1)) bad("dangling degeneracy of '" + X.ids[n][x] + "' at level " + std::to_string(n));
            }
        }
        for (auto& gname : X.family.generators()) {
            auto it = X.action[n].find(gname);
            if (it == X.action[n].end()) { bad("missing action '" + gname + "' at level " + std::to_string(n)); continue; }
            if (static_cast<int>(it->second.size()) != X.size(n)) { bad("action table size '" + gname + "' at level " + std::to_string(n)); continue; }
            for (int y : it->second)
                if (y < 0 || y >= X.size(n)) bad("dangling action '" + gname + "' at level " + std::to_string(n));
        }
    }
    if (X.basepoint && X.index_of(0, *X.basepoint) < 0) bad("basepoint '" + *X.basepoint + "' not a vertex");
}

} // namespace detail

/// Exhaustive check of simplicial identities, group presentation and crossed compatibility.
inline ValidationReport validate(const DGSet& X, size_t max_violations = 50) {
    ValidationReport r;
    detail::structural_check(X, r);
    if (!r.structural.empty()) return r;
    auto report = [&](const std::string& what, int n, int x, const std::string& detail) {
        if (r.violations.size() < max_violations) r.violations.push_back({what, n, X.ids[n][x], detail});
    };
    int D = X.D;
    for (int n = 0; n <= D; ++n) {
        for (int x = 0; x < X.size(n); ++x) {
            // d_i d_j = d_{j-1} d_i, i < j
            if (n >= 2)
                for (int j = 1; j <= n; ++j)
                    for (int i = 0; i < j; ++i)
                        if (X.face(n - 1, X.face(n, x, j), i) != X.face(n - 1, X.face(n, x, i), j - 1))
                            report("d_i d_j = d_{j-1} d_i", n, x, "i=" + std::to_string(i) + " j=" + std::to_string(j));
            if (n + 1 <= D) {
                for (int j = 0; j <= n; ++j) {
                    int s = X.degen(n, x, j);
                    for (int i = 0; i <= n + 1; ++i) {
                        int lhs = X.face(n + 1, s, i);
                        int rhs;
                        if (i == j || i == j + 1) rhs = x;
                        else if (i < j) rhs = X.degen(n - 1, X.face(n, x, i), j - 1);
                        else rhs = X.degen(n - 1, X.face(n, x, i - 1), j);
                        if (lhs != rhs)
                            report("d_i s_j", n, x, "i=" + std::to_string(i) + " j=" + std::to_string(j));
                    }
                }
            }
            if (n + 2 <= D)
                for (int j = 0; j <= n; ++j)
                    for (int i = 0; i <= j; ++i)
                        if (X.degen(n + 1, X.degen(n, x, j), i) != X.degen(n + 1, X.degen(n, x, i), j + 1))
                            report("s_i s_j = s_{j+1} s_i", n, x, "i=" + std::to_string(i) + " j=" + std::to_string(j));
        }
        // presentation relations
        const Family& F = X.family;
        for (int x = 0; x < X.size(n); ++x) {
            auto word = [&](const std::vector<std::string>& w, int y) {
                for (auto it = w.rbegin(); it != w.rend(); ++it) y = X.act(n, *it, y);
                return y;
            };
            if (F.has_rotation()) {
                int R = F.rotation_order(n);
                int y = x;
                for (int s = 0; s < R; ++s) y = X.act(n, "t", y);
                if (y != x) report("t^" + std::to_string(R) + " = 1", n, x, "");
            }
            if (F.kind == Kind::reflexive || F.kind == Kind::dihedral || F.kind == Kind::ndihedral) {
                if (word({"w", "w"}, x) != x) report("w^2 = 1", n, x, "");
                if (F.has_rotation() && word({"w", "t", "w", "t"}, x) != x) report("w t w = t^-1", n, x, "");
            }
            if (F.kind == Kind::quaternionic) {
                int R = F.rotation_order(n);
                int y = x;
                for (int s = 0; s < R / 2; ++s) y = X.act(n, "t", y);
                if (word({"b", "b"}, x) != y) report("b^2 = t^" + std::to_string(R / 2), n, x, "");
                // b t b^{-1} = t^{-1}  <=>  b t = t^{-1} b  <=>  t b t = b
                if (word({"t", "b", "t"}, x) != X.act(n, "b", x)) report("b t b^-1 = t^-1", n, x, "");
            }
        }
        // crossed compatibility for generators
        for (auto& gname : F.generators()) {
            GroupElement g = GroupElement::generator(F, n, gname);
            for (int x = 0; x < X.size(n); ++x) {
                int gx = X.act(n, gname, x);
                if (n >= 1)
                    for (int i = 0; i <= n; ++i) {
                        auto [gp, j] = crossed_twist(g, OpKind::face, i);
                        if (X.face(n, gx, i) != X.act(gp, X.face(n, x, j)))
                            report("d_i(gx) = d_i(g) d_{g^-1(i)} x", n, x, "g=" + gname + " i=" + std::to_string(i));
                    }
                if (n + 1 <= D)
                    for (int i = 0; i <= n; ++i) {
                        auto [gp, j] = crossed_twist(g, OpKind::degeneracy, i);
                        if (X.degen(n, gx, i) != X.act(gp, X.degen(n, x, j)))
                            report("s_i(gx) = s_i(g) s_{g^-1(i)} x", n, x, "g=" + gname + " i=" + std::to_string(i));
                    }
            }
        }
    }
    return r;
}

/// Checks that f: X -> Y commutes with faces, degeneracies and generator actions.
inline std::vector<std::string> validate_map(const DGSet& X, const DGSet& Y, const DGMap& f) {
    std::vector<std::string> errs;
    int D = std::min(X.D, Y.D);
    if (!(X.family == Y.family)) errs.push_back("family mismatch");
    if (static_cast<int>(f.f.size()) < D + 1) { errs.push_back("map has too few levels"); return errs; }
    for (int n = 0; n <= D && errs.size() < 50; ++n) {
        if (static_cast<int>(f.f[n].size()) != X.size(n)) { errs.push_back("map size at level " + std::to_string(n)); continue; }
        for (int x = 0; x < X.size(n); ++x) {
            int y = f(n, x);
            if (y < 0 || y >= Y.size(n)) { errs.push_back("dangling image at level " + std::to_string(n)); continue; }
            if (n >= 1)
                for (int i = 0; i <= n; ++i)
                    if (f(n - 1, X.face(n, x, i)) != Y.face(n, y, i))
                        errs.push_back("face d_" + std::to_string(i) + " not preserved at '" + X.ids[n][x] + "'");
            if (n < D)
                for (int i = 0; i <= n; ++i)
                    if (f(n + 1, X.degen(n, x, i)) != Y.degen(n, y, i))
                        errs.push_back("degeneracy s_" + std::to_string(i) + " not preserved at '" + X.ids[n][x] + "'");
            if (X.family == Y.family)
                for (auto& g : X.family.generators())
                    if (f(n, X.act(n, g, x)) != Y.act(n, g, y))
                        errs.push_back("action '" + g + "' not preserved at '" + X.ids[n][x] + "'");
        }
    }
    return errs;
}

// ---------------------------------------------------------------------------
// Constructors

inline std::string morphism_id(const CrossedMorphism& u) {
    if (u.family().kind == Kind::trivial) return u.op.str();
    return u.op.str() + "@" + u.g.str();
}

/// Representable Hom(-, [n]) (or its boundary) truncated at D.
inline DGSet standard(const Family& F, int n, int D, bool boundary = false) {
    DGSet X(F, D);
    std::vector<std::map<CrossedMorphism, int>> idx(D + 1);
    std::vector<std::vector<CrossedMorphism>> mors(D + 1);
    for (int m = 0; m <= D; ++m)
        for (auto& u : enumerate_homs(F, m, n)) {
            if (boundary && u.op.surjective()) continue;
            idx[m][u] = X.add(m, morphism_id(u));
            mors[m].push_back(u);
        }
    for (int m = 0; m <= D; ++m) {
        for (auto& u : mors[m]) {
            if (m >= 1) {
                std::vector<int> fs;
                for (int i = 0; i <= m; ++i) fs.push_back(idx[m - 1].at(compose(u, coface(F, m, i))));
                X.faces[m].push_back(fs);
            }
            if (m < D) {
                std::vector<int> ds;
                for (int i = 0; i <= m; ++i) ds.push_back(idx[m + 1].at(compose(u, codegeneracy(F, m, i))));
                X.degens[m].push_back(ds);
            }
        }
        for (auto& gname : F.generators()) {
            auto ginv = CrossedMorphism::of(inverse(GroupElement::generator(F, m, gname)));
            std::vector<int> tab;
            for (auto& u : mors[m]) tab.push_back(idx[m].at(compose(u, ginv)));
            X.action[m][gname] = tab;
        }
    }
    return X;
}

/// One simplex per level, trivial action: the terminal object.
inline DGSet terminal(const Family& F, int D) {
    DGSet X(F, D);
    for (int n = 0; n <= D; ++n) {
        X.add(n, "pt");
        if (n >= 1) X.faces[n].push_back(std::vector<int>(n + 1, 0));
        if (n < D) X.degens[n].push_back(std::vector<int>(n + 1, 0));
        for (auto& g : F.generators()) X.action[n][g] = {0};
    }
    return X;
}

inline DGSet underlying(const DGSet& X) {
    DGSet Y = X;
    Y.family = Family(Kind::trivial);
    for (auto& a : Y.action) a.clear();
    return Y;
}

/// Same simplicial data with every generator acting trivially (needs F-compatible structure;
/// crossed compatibility is checked by validate).
inline DGSet with_trivial_action(const DGSet& X, const Family& F) {
    DGSet Y = X;
    Y.family = F;
    for (int n = 0; n <= Y.D; ++n) {
        Y.action[n].clear();
        for (auto& g : F.generators()) {
            std::vector<int> id(Y.size(n));
            std::iota(id.begin(), id.end(), 0);
            Y.action[n][g] = id;
        }
    }
    return Y;
}

/// Free object on a plain simplicial set: level n is G_n x X_n.
inline DGSet free_object(const Family& F, const DGSet& X) {
    if (X.family.kind != Kind::trivial) throw std::invalid_argument("free expects a trivial-family set");
    DGSet Y(F, X.D);
    std::vector<std::vector<GroupElement>> els(X.D + 1);
    auto code = [&](int n, const GroupElement& g, int x) {
        int gi = g.e * F.rotation_order(n) + g.k;
        return gi * X.size(n) + x;
    };
    for (int n = 0; n <= X.D; ++n) {
        els[n] = group_elements(F, n);
        for (auto& g : els[n])
            for (int x = 0; x < X.size(n); ++x) Y.add(n, "(" + g.str() + ";" + X.ids[n][x] + ")");
    }
    for (int n = 0; n <= X.D; ++n) {
        for (auto& g : els[n])
            for (int x = 0; x < X.size(n); ++x) {
                if (n >= 1) {
                    std::vector<int> fs;
                    for (int i = 0; i <= n; ++i) {
                        auto [gp, j] = crossed_twist(g, OpKind::face, i);
                        fs.push_back(code(n - 1, gp, X.face(n, x, j)));
                    }
                    Y.faces[n].push_back(fs);
                }
                if (n < X.D) {
                    std::vector<int> ds;
                    for (int i = 0; i <= n; ++i) {
                        auto [gp, j] = crossed_twist(g, OpKind::degeneracy, i);
                        ds.push_back(code(n + 1, gp, X.degen(n, x, j)));
                    }
                    Y.degens[n].push_back(ds);
                }
            }
        for (auto& gname : F.generators()) {
            GroupElement h = GroupElement::generator(F, n, gname);
            std::vector<int> tab;
            for (auto& g : els[n])
                for (int x = 0; x < X.size(n); ++x) tab.push_back(code(n, multiply(h, g), x));
            Y.action[n][gname] = tab;
        }
    }
    return Y;
}

inline void require_same_family(const DGSet& X, const DGSet& Y) {
    if (!(X.family == Y.family)) throw std::invalid_argument("family mismatch: " + X.family.name() + " vs " + Y.family.name());
}

inline DGSet product(const DGSet& X, const DGSet& Y) {
    require_same_family(X, Y);
    int D = std::min(X.D, Y.D);
    DGSet P(X.family, D);
    auto code = [&](int n, int x, int y) { return x * Y.size(n) + y; };
    for (int n = 0; n <= D; ++n)
        for (int x = 0; x < X.size(n); ++x)
            for (int y = 0; y < Y.size(n); ++y) P.add(n, "[" + X.ids[n][x] + "," + Y.ids[n][y] + "]");
    for (int n = 0; n <= D; ++n) {
        for (int x = 0; x < X.size(n); ++x)
            for (int y = 0; y < Y.size(n); ++y) {
                if (n >= 1) {
                    std::vector<int> fs;
                    for (int i = 0; i <= n; ++i) fs.push_back(code(n - 1, X.face(n, x, i), Y.face(n, y, i)));
                    P.faces[n].push_back(fs);
                }
                if (n < D) {
                    std::vector<int> ds;
                    for (int i = 0; i <= n; ++i) ds.push_back(code(n + 1, X.degen(n, x, i), Y.degen(n, y, i)));
                    P.degens[n].push_back(ds);
                }
            }
        for (auto& g : X.family.generators()) {
            std::vector<int> tab;
            for (int x = 0; x < X.size(n); ++x)
                for (int y = 0; y < Y.size(n); ++y) tab.push_back(code(n, X.act(n, g, x), Y.act(n, g, y)));
            P.action[n][g] = tab;
        }
    }
    if (X.basepoint && Y.basepoint) P.basepoint = "[" + *X.basepoint + "," + *Y.basepoint + "]";
    return P;
}

/// Sub-object given by per-level membership flags.
using SubObject = std::vector<std::vector<bool>>;

inline std::vector<std::string> check_subobject(const DGSet& X, const SubObject& A) {
    std::vector<std::string> errs;
    if (static_cast<int>(A.size()) < X.D + 1) { errs.push_back("sub-object has too few levels"); return errs; }
    for (int n = 0; n <= X.D; ++n)
        for (int x = 0; x < X.size(n); ++x) {
            if (!A[n][x]) continue;
            if (n >= 1)
                for (int i = 0; i <= n; ++i)
                    if (!A[n - 1][X.face(n, x, i)]) errs.push_back("not closed under d_" + std::to_string(i) + " at '" + X.ids[n][x] + "'");
            if (n < X.D)
                for (int i = 0; i <= n; ++i)
                    if (!A[n + 1][X.degen(n, x, i)]) errs.push_back("not closed under s_" + std::to_string(i) + " at '" + X.ids[n][x] + "'");
            for (auto& g : X.family.generators())
                if (!A[n][X.act(n, g, x)]) errs.push_back("not action-closed under '" + g + "' at '" + X.ids[n][x] + "'");
        }
    return errs;
}

struct Inclusion {
    DGSet object;
    DGMap map;  // into the ambient object
};

/// The sub-object A as an object in its own right (ids kept), with its inclusion.
inline Inclusion sub_object(const DGSet& X, const SubObject& A) {
    auto errs = check_subobject(X, A);
    if (!errs.empty()) throw std::invalid_argument("sub_object: " + errs.front());
    Inclusion r{DGSet(X.family, X.D), {}};
    DGSet& Z = r.object;
    std::vector<std::vector<int>> to(X.D + 1);
    for (int n = 0; n <= X.D; ++n) {
        to[n].assign(X.size(n), -1);
        r.map.f.emplace_back();
        for (int x = 0; x < X.size(n); ++x)
            if (A[n][x]) {
                to[n][x] = Z.add(n, X.ids[n][x]);
                r.map.f[n].push_back(x);
            }
    }
    for (int n = 0; n <= X.D; ++n) {
        for (auto& g : X.family.generators()) Z.action[n][g] = {};
        for (int x = 0; x < X.size(n); ++x) {
            if (!A[n][x]) continue;
            if (n >= 1) {
                std::vector<int> fs;
                for (int i = 0; i <= n; ++i) fs.push_back(to[n - 1][X.face(n, x, i)]);
                Z.faces[n].push_back(fs);
            }
            if (n < X.D) {
                std::vector<int> ds;
                for (int i = 0; i <= n; ++i) ds.push_back(to[n + 1][X.degen(n, x, i)]);
                Z.degens[n].push_back(ds);
            }
            for (auto& g : X.family.generators()) Z.action[n][g].push_back(to[n][X.act(n, g, x)]);
        }
    }
    if (X.basepoint) {
        int b = X.index_of(0, *X.basepoint);
        if (A[0][b]) Z.basepoint = X.basepoint;
    }
    return r;
}

/// X / A with A collapsed to a fresh basepoint "*".
inline DGSet quotient(const DGSet& X, const SubObject& A) {
    auto errs = check_subobject(X, A);
    if (!errs.empty()) throw std::invalid_argument("quotient: " + errs.front());
    DGSet Q(X.family, X.D);
    std::vector<std::vector<int>> to(X.D + 1);
    for (int n = 0; n <= X.D; ++n) {
        Q.add(n, "*");
        to[n].assign(X.size(n), 0);
        for (int x = 0; x < X.size(n); ++x) {
            if (A[n][x]) continue;
            if (X.ids[n][x] == "*") throw std::invalid_argument("quotient: id '*' already in use");
            to[n][x] = Q.add(n, X.ids[n][x]);
        }
    }
    for (int n = 0; n <= X.D; ++n) {
        std::vector<int> rep(Q.size(n), -1);
        for (int x = 0; x < X.size(n); ++x)
            if (!A[n][x]) rep[to[n][x]] = x;
        if (n >= 1) Q.faces[n].assign(Q.size(n), std::vector<int>(n + 1, 0));
        if (n < X.D) Q.degens[n].assign(Q.size(n), std::vector<int>(n + 1, 0));
        for (int q = 1; q < Q.size(n); ++q) {
            int x = rep[q];
            for (int i = 0; i <= n; ++i) {
                if (n >= 1) Q.faces[n][q][i] = to[n - 1][X.face(n, x, i)];
                if (n < X.D) Q.degens[n][q][i] = to[n + 1][X.degen(n, x, i)];
            }
        }
        for (auto& g : X.family.generators()) {
            std::vector<int> tab(Q.size(n), 0);
            for (int q = 1; q < Q.size(n); ++q) tab[q] = to[n][X.act(n, g, rep[q])];
            Q.action[n][g] = tab;
        }
    }
    Q.basepoint = "*";
    return Q;
}

inline SubObject boundary_subobject(const DGSet& standard_obj, int n) {
    // ids of the standard object start with the operator image "[...]"
    SubObject A(standard_obj.D + 1);
    for (int m = 0; m <= standard_obj.D; ++m) {
        A[m].assign(standard_obj.size(m), false);
        for (int x = 0; x < standard_obj.size(m); ++x) {
            const auto& id = standard_obj.ids[m][x];
            std::vector<int> img;
            std::string num;
            for (char c : id.substr(0, id.find(']') + 1)) {
                if (isdigit(static_cast<unsigned char>(c))) num += c;
                else if (!num.empty()) { img.push_back(std::stoi(num)); num.clear(); }
            }
            A[m][x] = !SimplicialOperator(n, img).surjective();
        }
    }
    return A;
}

/// Sub-object generated by the basepoint vertex (its degeneracies and their orbits).
inline SubObject basepoint_subobject(const DGSet& X) {
    SubObject B(X.D + 1);
    for (int n = 0; n <= X.D; ++n) B[n].assign(X.size(n), false);
    if (!X.basepoint) return B;
    std::vector<std::pair<int, int>> todo{{0, X.basepoint_at(0)}};
    B[0][todo[0].second] = true;
    auto push = [&](int n, int x) {
        if (!B[n][x]) { B[n][x] = true; todo.push_back({n, x}); }
    };
    while (!todo.empty()) {
        auto [n, x] = todo.back();
        todo.pop_back();
        if (n >= 1)
            for (int i = 0; i <= n; ++i) push(n - 1, X.face(n, x, i));
        if (n < X.D)
            for (int i = 0; i <= n; ++i) push(n + 1, X.degen(n, x, i));
        for (auto& g : X.family.generators()) push(n, X.act(n, g, x));
    }
    return B;
}

/// True when every degenerate copy of the basepoint is fixed by the action.
inline bool action_pointed(const DGSet& X) {
    if (!X.basepoint) return false;
    for (int n = 0; n <= X.D; ++n) {
        int b = X.basepoint_at(n);
        for (auto& g : X.family.generators())
            if (X.act(n, g, b) != b) return false;
    }
    return true;
}

/// (X x Y) / (X x B_Y u B_X x Y), with B the basepoint sub-objects.
inline DGSet smash(const DGSet& X, const DGSet& Y) {
    if (!X.basepoint || !Y.basepoint) throw std::invalid_argument("smash needs pointed objects");
    DGSet P = product(X, Y);
    auto BX = basepoint_subobject(X), BY = basepoint_subobject(Y);
    SubObject W(P.D + 1);
    for (int n = 0; n <= P.D; ++n) {
        W[n].assign(P.size(n), false);
        for (int x = 0; x < X.size(n); ++x)
            for (int y = 0; y < Y.size(n); ++y)
                if (BX[n][x] || BY[n][y]) W[n][x * Y.size(n) + y] = true;
    }
    return quotient(P, W);
}

/// Simplicial circle Delta[1]/boundary and its smash powers (trivial family).
inline DGSet simplicial_sphere(int n, int D) {
    if (n < 1) throw std::invalid_argument("sphere dimension must be at least 1");
    if (D < n) throw std::invalid_argument("sphere: truncation below dimension");
    Family triv(Kind::trivial);
    DGSet I = standard(triv, 1, D);
    DGSet circle = quotient(I, boundary_subobject(I, 1));
    DGSet S = circle;
    for (int k = 2; k <= n; ++k) S = smash(S, circle);
    return S;
}

/// The DG-sphere. The boundary of DG[1] is collapsed onto DG[0] (not onto a point), which makes
/// the circle the free object on Delta[1]/boundary; higher spheres are free on simplicial spheres.
/// The basepoint sub-object is the orbit of the free basepoint.
inline DGSet sphere(const Family& F, int n, int D) {
    DGSet S = simplicial_sphere(n, D);
    if (F.kind == Kind::trivial) return S;
    DGSet G = free_object(F, S);
    G.basepoint = "(0,0;*)";
    return G;
}

struct PushoutResult {
    DGSet object;
    DGMap from_x, from_y;
};

/// Levelwise pushout of X <-f- A -g-> Y.
inline PushoutResult pushout(const DGSet& A, const DGSet& X, const DGSet& Y, const DGMap& f, const DGMap& g) {
    require_same_family(X, Y);
    require_same_family(A, X);
    int D = std::min({A.D, X.D, Y.D});
    PushoutResult res{DGSet(X.family, D), {}, {}};
    DGSet& P = res.object;
    std::vector<std::vector<int>> cls(D + 1);  // class of element (X first, then Y)
    std::vector<std::vector<int>> members_rep(D + 1);
    for (int n = 0; n <= D; ++n) {
        int nx = X.size(n), ny = Y.size(n);
        std::vector<int> parent(nx + ny);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
        for (int a = 0; a < A.size(n); ++a) {
            int u = find(f(n, a)), v = find(nx + g(n, a));
            if (u != v) parent[std::max(u, v)] = std::min(u, v);
        }
        std::map<int, int> root_to_class;
        cls[n].resize(nx + ny);
        // name classes after a Y member when present, otherwise the X member
        std::vector<std::string> names;
        for (int e = 0; e < nx + ny; ++e) {
            int r = find(e);
            auto it = root_to_class.find(r);
            if (it == root_to_class.end()) {
                it = root_to_class.emplace(r, static_cast<int>(names.size())).first;
                names.push_back("");
                members_rep[n].push_back(e);
            }
            cls[n][e] = it->second;
        }
        for (int e = nx + ny - 1; e >= 0; --e) {
            int c = cls[n][e];
            std::string nm = e >= nx ? "y:" + Y.ids[n][e - nx] : "x:" + X.ids[n][e];
            if (names[c].empty() || e >= nx) names[c] = nm;
        }
        for (auto& nm : names) P.add(n, nm);
    }
    for (int n = 0; n <= D; ++n) {
        int nx = X.size(n);
        auto el_face = [&](int e, int i) { return e < nx ? X.face(n, e, i) : X.size(n - 1) + Y.face(n, e - nx, i); };
        auto el_degen = [&](int e, int i) { return e < nx ? X.degen(n, e, i) : X.size(n + 1) + Y.degen(n, e - nx, i); };
        auto el_act = [&](int e, const std::string& gn) { return e < nx ? X.act(n, gn, e) : nx + Y.act(n, gn, e - nx); };
        for (int c = 0; c < P.size(n); ++c) {
            int e = members_rep[n][c];
            if (n >= 1) {
                std::vector<int> fs;
                for (int i = 0; i <= n; ++i) fs.push_back(cls[n - 1][el_face(e, i)]);
                P.faces[n].push_back(fs);
            }
            if (n < D) {
                std::vector<int> ds;
                for (int i = 0; i <= n; ++i) ds.push_back(cls[n + 1][el_degen(e, i)]);
                P.degens[n].push_back(ds);
            }
        }
        for (auto& gn : X.family.generators()) {
            std::vector<int> tab;
            for (int c = 0; c < P.size(n); ++c) tab.push_back(cls[n][el_act(members_rep[n][c], gn)]);
            P.action[n][gn] = tab;
        }
        res.from_x.f.emplace_back(cls[n].begin(), cls[n].begin() + nx);
        res.from_y.f.emplace_back(cls[n].begin() + nx, cls[n].end());
    }
    return res;
}

/// Map standard(F,n) -> standard(F,n') given by postcomposition with u: [n] -> [n'].
inline DGMap standard_map(const DGSet& src, const DGSet& dst, const CrossedMorphism& u, bool boundary = false) {
    DGMap m;
    for (int k = 0; k <= std::min(src.D, dst.D); ++k) {
        m.f.emplace_back();
        for (auto& v : enumerate_homs(src.family, k, u.source())) {
            if (boundary && v.op.surjective()) continue;
            int y = dst.index_of(k, morphism_id(compose(u, v)));
            if (y < 0) throw std::invalid_argument("standard_map: image leaves the target");
            m.f.back().push_back(y);
        }
    }
    return m;
}

/// f x g on products built by product().
inline DGMap product_map(const DGSet& X, const DGSet& Y, const DGSet& X2, const DGSet& Y2, const DGMap& f, const DGMap& g) {
    DGMap m;
    int D = std::min(std::min(X.D, Y.D), std::min(X2.D, Y2.D));
    for (int n = 0; n <= D; ++n) {
        m.f.emplace_back();
        for (int x = 0; x < X.size(n); ++x)
            for (int y = 0; y < Y.size(n); ++y) m.f.back().push_back(f(n, x) * Y2.size(n) + g(n, y));
    }
    return m;
}

/// X/A -> Y/B induced by f with f(A) inside B.
inline DGMap quotient_map(const DGSet& X, const SubObject& A, const DGSet& Y, const SubObject& B, const DGMap& f) {
    auto Q1 = quotient(X, A);
    auto Q2 = quotient(Y, B);
    DGMap m;
    for (int n = 0; n <= std::min(X.D, Y.D); ++n) {
        m.f.emplace_back(Q1.size(n), 0);
        for (int x = 0; x < X.size(n); ++x) {
            int y = f(n, x);
            if (A[n][x]) {
                if (!B[n][y]) throw std::invalid_argument("quotient_map: f does not send A into B");
                continue;
            }
            int q = Q1.index_of(n, X.ids[n][x]);
            m.f[n][q] = B[n][y] ? 0 : Q2.index_of(n, Y.ids[n][y]);
        }
    }
    return m;
}

/// Relabel ids (for isomorphism-invariance tests); structure untouched.
inline DGSet relabel(const DGSet& X, const std::string& prefix) {
    DGSet Y = X;
    for (auto& lvl : Y.ids)
        for (auto& id : lvl) id = prefix + id;
    if (Y.basepoint) Y.basepoint = prefix + *Y.basepoint;
    return Y;
}

} // namespace xsimp
