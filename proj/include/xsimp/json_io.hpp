#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chain.hpp"
#include "csg.hpp"
#include "dgset.hpp"
#include "site.hpp"

namespace xsimp::io {

using json = nlohmann::json;

/// Schema or invariant violation located by a JSON path such as "levels[1].faces.e0".
struct ParseError : std::invalid_argument {
    std::string path;
    ParseError(const std::string& p, const std::string& what) : std::invalid_argument(p + ": " + what), path(p) {}
};

namespace detail {

inline std::string at(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
inline std::string idx(const std::string& base, size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ParseError(path.empty() ? "$" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(at(path, key), "missing field");
    return *it;
}

inline int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
    return j.get<int>();
}

inline std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError(path, "expected a string");
    return j.get<std::string>();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Families and group elements

inline json emit(const Family& F) { return {{"kind", kind_name(F.kind)}, {"param", F.param}}; }

inline Family parse_family(const json& j, const std::string& path = "family") {
    Kind k;
    try {
        k = parse_kind(detail::as_string(detail::field(j, "kind", path), detail::at(path, "kind")));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(detail::at(path, "kind"), e.what());
    }
    int p = j.contains("param") ? detail::as_int(j["param"], detail::at(path, "param")) : 1;
    if (p < 1) throw ParseError(detail::at(path, "param"), "family parameter must be positive");
    return Family(k, p);
}

inline json emit(const GroupElement& g) { return {{"k", g.k}, {"e", g.e}}; }

// ---------------------------------------------------------------------------
// Delta-G sets

inline std::string describe(const ValidationReport& r) {
    if (!r.structural.empty()) return r.structural.front();
    if (r.violations.empty()) return "ok";
    const auto& v = r.violations.front();
    return v.identity + " fails at level " + std::to_string(v.level) + " on '" + v.simplex + "'" + (v.detail.empty() ? "" : " (" + v.detail + ")");
}

inline json emit(const DGSet& X) {
    json levels = json::array();
    for (int n = 0; n <= X.D; ++n) {
        json lvl{{"dim", n}, {"simplices", X.ids[n]}};
        if (n >= 1) {
            json f = json::object();
            for (int x = 0; x < X.size(n); ++x) {
                json a = json::array();
                for (int v : X.faces[n][x]) a.push_back(X.ids[n - 1][v]);
                f[X.ids[n][x]] = a;
            }
            lvl["faces"] = f;
        }
        if (n < X.D) {
            json d = json::object();
            for (int x = 0; x < X.size(n); ++x) {
                json a = json::array();
                for (int v : X.degens[n][x]) a.push_back(X.ids[n + 1][v]);
                d[X.ids[n][x]] = a;
            }
            lvl["degeneracies"] = d;
        }
        json act = json::object();
        for (auto& [g, tab] : X.action[n]) {
            json t = json::object();
            for (int x = 0; x < X.size(n); ++x) t[X.ids[n][x]] = X.ids[n][tab[x]];
            act[g] = t;
        }
        lvl["action"] = act;
        levels.push_back(lvl);
    }
    json out{{"family", emit(X.family)}, {"truncation", X.D}, {"levels", levels}};
    if (X.basepoint) out["basepoint"] = *X.basepoint;
    return out;
}

/// Parses a dgset document; with check, also runs the full identity validation.
inline DGSet parse_dgset(const json& j, const std::string& base = "", bool check = true) {
    using namespace detail;
    Family F = parse_family(field(j, "family", base), at(base, "family"));
    int D = as_int(field(j, "truncation", base), at(base, "truncation"));
    if (D < 0) throw ParseError(at(base, "truncation"), "negative truncation");
    const json& levels = field(j, "levels", base);
    std::string lp = at(base, "levels");
    if (!levels.is_array() || static_cast<int>(levels.size()) != D + 1)
        throw ParseError(lp, "expected an array of " + std::to_string(D + 1) + " levels");
    DGSet X(F, D);
    for (int n = 0; n <= D; ++n) {
        std::string p = idx(lp, n);
        const json& L = levels[n];
        if (L.contains("dim") && as_int(L["dim"], at(p, "dim")) != n) throw ParseError(at(p, "dim"), "level out of order");
        const json& s = field(L, "simplices", p);
        if (!s.is_array()) throw ParseError(at(p, "simplices"), "expected an array");
        std::set<std::string> seen;
        for (size_t i = 0; i < s.size(); ++i) {
            auto id = as_string(s[i], idx(at(p, "simplices"), i));
            if (!seen.insert(id).second) throw ParseError(idx(at(p, "simplices"), i), "duplicate simplex id '" + id + "'");
            X.add(n, id);
        }
    }
    auto lookup = [&](int n, const json& v, const std::string& p) {
        auto id = as_string(v, p);
        int x = X.index_of(n, id);
        if (x < 0) throw ParseError(p, "unknown simplex '" + id + "' at level " + std::to_string(n));
        return x;
    };
    for (int n = 0; n <= D; ++n) {
        std::string p = idx(lp, n);
        const json& L = levels[n];
        if (n >= 1) {
            const json& f = field(L, "faces", p);
            X.faces[n].resize(X.size(n));
            for (int x = 0; x < X.size(n); ++x) {
                std::string fp = at(at(p, "faces"), X.ids[n][x]);
                if (!f.contains(X.ids[n][x])) throw ParseError(fp, "missing face entry");
                const json& a = f[X.ids[n][x]];
                if (!a.is_array() || static_cast<int>(a.size()) != n + 1) throw ParseError(fp, "expected " + std::to_string(n + 1) + " faces");
                for (int i = 0; i <= n; ++i) X.faces[n][x].push_back(lookup(n - 1, a[i], idx(fp, i)));
            }
        }
        if (n < D) {
            const json& d = field(L, "degeneracies", p);
            X.degens[n].resize(X.size(n));
            for (int x = 0; x < X.size(n); ++x) {
                std::string dp = at(at(p, "degeneracies"), X.ids[n][x]);
                if (!d.contains(X.ids[n][x])) throw ParseError(dp, "missing degeneracy entry");
                const json& a = d[X.ids[n][x]];
                if (!a.is_array() || static_cast<int>(a.size()) != n + 1) throw ParseError(dp, "expected " + std::to_string(n + 1) + " degeneracies");
                for (int i = 0; i <= n; ++i) X.degens[n][x].push_back(lookup(n + 1, a[i], idx(dp, i)));
            }
        }
        for (auto& g : F.generators()) {
            std::string ap = at(at(p, "action"), g);
            const json& act = field(L, "action", p);
            if (!act.contains(g)) throw ParseError(ap, "missing action table");
            std::vector<int> tab(X.size(n));
            for (int x = 0; x < X.size(n); ++x) {
                std::string xp = at(ap, X.ids[n][x]);
                if (!act[g].contains(X.ids[n][x])) throw ParseError(xp, "missing action entry");
                tab[x] = lookup(n, act[g][X.ids[n][x]], xp);
            }
            X.action[n][g] = tab;
        }
    }
    if (j.contains("basepoint") && !j["basepoint"].is_null()) {
        auto b = as_string(j["basepoint"], at(base, "basepoint"));
        if (X.index_of(0, b) < 0) throw ParseError(at(base, "basepoint"), "unknown vertex '" + b + "'");
        X.basepoint = b;
    }
    if (!check) return X;
    auto rep = validate(X);
    if (!rep.ok()) throw ParseError(base.empty() ? "$" : base, "invalid object: " + describe(rep));
    return X;
}

// ---------------------------------------------------------------------------
// Maps: per level an object {source id: target id}

inline json emit(const DGSet& X, const DGSet& Y, const DGMap& f) {
    json levels = json::array();
    for (size_t n = 0; n < f.f.size(); ++n) {
        json t = json::object();
        for (int x = 0; x < X.size(static_cast<int>(n)); ++x) t[X.ids[n][x]] = Y.ids[n][f.f[n][x]];
        levels.push_back(t);
    }
    return levels;
}

inline DGMap parse_map(const json& j, const DGSet& X, const DGSet& Y, const std::string& path) {
    int D = std::min(X.D, Y.D);
    if (!j.is_array() || static_cast<int>(j.size()) != D + 1) throw ParseError(path, "expected " + std::to_string(D + 1) + " levels");
    DGMap f;
    for (int n = 0; n <= D; ++n) {
        std::string lp = detail::idx(path, n);
        f.f.emplace_back(X.size(n), -1);
        for (int x = 0; x < X.size(n); ++x) {
            std::string xp = detail::at(lp, X.ids[n][x]);
            if (!j[n].is_object() || !j[n].contains(X.ids[n][x])) throw ParseError(xp, "missing map entry");
            auto id = detail::as_string(j[n][X.ids[n][x]], xp);
            int y = Y.index_of(n, id);
            if (y < 0) throw ParseError(xp, "unknown target simplex '" + id + "'");
            f.f[n][x] = y;
        }
    }
    auto errs = validate_map(X, Y, f);
    if (!errs.empty()) throw ParseError(path, errs.front());
    return f;
}

// ---------------------------------------------------------------------------
// Sites and presheaves

inline json emit(const FiniteSite& S) {
    json leq = json::array();
    for (auto [x, y] : S.hasse()) leq.push_back({S.objects[y], S.objects[x]});
    json covers = json::object();
    for (int x = 0; x < S.size(); ++x) {
        json fams = json::array();
        for (auto& fam : S.covers[x]) {
            if (fam == std::vector<int>{x}) continue;
            json a = json::array();
            for (int y : fam) a.push_back(S.objects[y]);
            fams.push_back(a);
        }
        if (!fams.empty()) covers[S.objects[x]] = fams;
    }
    return {{"objects", S.objects}, {"leq", leq}, {"covers", covers}};
}

inline FiniteSite parse_site(const json& j, const std::string& base = "") {
    using namespace detail;
    const json& objs = field(j, "objects", base);
    if (!objs.is_array() || objs.empty()) throw ParseError(at(base, "objects"), "expected a nonempty array");
    std::vector<std::string> names;
    for (size_t i = 0; i < objs.size(); ++i) names.push_back(as_string(objs[i], idx(at(base, "objects"), i)));
    auto find = [&](const json& v, const std::string& p) {
        auto id = as_string(v, p);
        auto it = std::find(names.begin(), names.end(), id);
        if (it == names.end()) throw ParseError(p, "unknown object '" + id + "'");
        return static_cast<int>(it - names.begin());
    };
    std::vector<std::pair<int, int>> pairs;
    if (j.contains("leq")) {
        const json& leq = j["leq"];
        if (!leq.is_array()) throw ParseError(at(base, "leq"), "expected an array");
        for (size_t i = 0; i < leq.size(); ++i) {
            std::string p = idx(at(base, "leq"), i);
            if (!leq[i].is_array() || leq[i].size() != 2) throw ParseError(p, "expected a pair [a, b] meaning a <= b");
            pairs.push_back({find(leq[i][0], idx(p, 0)), find(leq[i][1], idx(p, 1))});
        }
    }
    std::vector<std::vector<std::vector<int>>> covers(names.size());
    if (j.contains("covers")) {
        const json& cv = j["covers"];
        if (!cv.is_object()) throw ParseError(at(base, "covers"), "expected an object");
        for (auto& [k, fams] : cv.items()) {
            std::string p = at(at(base, "covers"), k);
            int x = find(json(k), p);
            if (!fams.is_array()) throw ParseError(p, "expected an array of families");
            for (size_t i = 0; i < fams.size(); ++i) {
                if (!fams[i].is_array()) throw ParseError(idx(p, i), "expected an array of objects");
                std::vector<int> fam;
                for (size_t m = 0; m < fams[i].size(); ++m) fam.push_back(find(fams[i][m], idx(idx(p, i), m)));
                covers[x].push_back(fam);
            }
        }
    }
    bool any = false;
    for (auto& c : covers) any = any || !c.empty();
    try {
        return FiniteSite::make(names, pairs, any ? covers : std::vector<std::vector<std::vector<int>>>{});
    } catch (const std::invalid_argument& e) {
        throw ParseError(base.empty() ? "$" : base, e.what());
    }
}

/// {"values": {object: dgset}, "restrictions": [{"from": x, "to": y, "map": levels}]}; missing
/// composite restrictions are filled in from the given ones.
inline DGPresheaf parse_presheaf(const json& j, const FiniteSite& S, const std::string& base = "") {
    using namespace detail;
    const json& vals = field(j, "values", base);
    std::vector<DGSet> values;
    for (int x = 0; x < S.size(); ++x) {
        std::string p = at(at(base, "values"), S.objects[x]);
        if (!vals.contains(S.objects[x])) throw ParseError(p, "missing value");
        values.push_back(parse_dgset(vals[S.objects[x]], p));
    }
    std::map<std::pair<int, int>, DGMap> given;
    if (j.contains("restrictions")) {
        const json& rs = j["restrictions"];
        if (!rs.is_array()) throw ParseError(at(base, "restrictions"), "expected an array");
        for (size_t i = 0; i < rs.size(); ++i) {
            std::string p = idx(at(base, "restrictions"), i);
            int x, y;
            try {
                x = S.index_of(as_string(field(rs[i], "from", p), at(p, "from")));
                y = S.index_of(as_string(field(rs[i], "to", p), at(p, "to")));
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                throw ParseError(p, e.what());
            }
            if (!S.less(y, x)) throw ParseError(p, "restriction must go from an object to one strictly below it");
            given[{x, y}] = parse_map(field(rs[i], "map", p), values[x], values[y], at(p, "map"));
        }
    }
    DGPresheaf F;
    try {
        F = complete_restrictions(S, std::move(values), given);
    } catch (const std::invalid_argument& e) {
        throw ParseError(at(base, "restrictions"), e.what());
    }
    auto errs = validate(S, F);
    if (!errs.empty()) throw ParseError(base.empty() ? "$" : base, errs.front());
    return F;
}

inline json emit(const FiniteSite& S, const DGPresheaf& F) {
    json vals = json::object();
    for (int x = 0; x < S.size(); ++x) vals[S.objects[x]] = emit(F.value[x]);
    json rs = json::array();
    for (auto [x, y] : S.hasse()) rs.push_back({{"from", S.objects[x]}, {"to", S.objects[y]}, {"map", emit(F.value[x], F.value[y], F.res.at({x, y}))}});
    return {{"values", vals}, {"restrictions", rs}};
}

/// Objectwise map {object: levels}.
inline DGPresheafMap parse_presheaf_map(const json& j, const FiniteSite& S, const DGPresheaf& F, const DGPresheaf& G, const std::string& path) {
    DGPresheafMap f;
    for (int x = 0; x < S.size(); ++x) {
        std::string p = detail::at(path, S.objects[x]);
        if (!j.is_object() || !j.contains(S.objects[x])) throw ParseError(p, "missing component");
        f.push_back(parse_map(j[S.objects[x]], F.value[x], G.value[x], p));
    }
    auto errs = validate_map(S, F, G, f);
    if (!errs.empty()) throw ParseError(path, errs.front());
    return f;
}

inline json emit(const FiniteSite& S, const DGPresheaf& F, const DGPresheaf& G, const DGPresheafMap& f) {
    json out = json::object();
    for (int x = 0; x < S.size(); ++x) out[S.objects[x]] = emit(F.value[x], G.value[x], f[x]);
    return out;
}

// ---------------------------------------------------------------------------
// Homology tables

inline json emit(const HomologyGroups& h) {
    json a = json::array();
    for (auto& d : h.degrees) a.push_back({{"degree", d.degree}, {"rank", d.group.rank}, {"torsion", d.group.torsion}, {"trusted", d.trusted}});
    return a;
}

/// Coefficient strings: "Z", "0", "Z/3", or a comma list of cyclic orders such as "6,0".
inline std::vector<i64> parse_coefficients(const std::string& s) {
    if (s == "Z" || s == "z") return {0};
    std::vector<i64> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t c = s.find(',', pos);
        std::string tok = s.substr(pos, c == std::string::npos ? std::string::npos : c - pos);
        if (tok == "Z") out.push_back(0);
        else if (tok.rfind("Z/", 0) == 0) out.push_back(std::stoll(tok.substr(2)));
        else {
            size_t used = 0;
            i64 v = std::stoll(tok, &used);
            if (used != tok.size() || v < 0) throw std::invalid_argument("bad coefficient '" + tok + "'");
            out.push_back(v);
        }
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    return out;
}

} // namespace xsimp::io
