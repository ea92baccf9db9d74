#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace xsimp {

enum class Kind { trivial, reflexive, cyclic, ncyclic, dihedral, ndihedral, quaternionic };

inline std::string kind_name(Kind k) {
    switch (k) {
        case Kind::trivial: return "trivial";
        case Kind::reflexive: return "reflexive";
        case Kind::cyclic: return "cyclic";
        case Kind::ncyclic: return "n-cyclic";
        case Kind::dihedral: return "dihedral";
        case Kind::ndihedral: return "n-dihedral";
        case Kind::quaternionic: return "quaternionic";
    }
    return "?";
}

inline Kind parse_kind(const std::string& s) {
    static const std::map<std::string, Kind> names = {
        {"trivial", Kind::trivial},   {"reflexive", Kind::reflexive}, {"cyclic", Kind::cyclic},
        {"n-cyclic", Kind::ncyclic},  {"dihedral", Kind::dihedral},   {"n-dihedral", Kind::ndihedral},
        {"quaternionic", Kind::quaternionic}};
    auto it = names.find(s);
    if (it == names.end()) throw std::invalid_argument("unknown family kind '" + s + "'");
    return it->second;
}

struct Family {
    Kind kind = Kind::trivial;
    int param = 1;  // N for n-cyclic/n-dihedral, M for quaternionic

    Family() = default;
    Family(Kind k, int p = 1) : kind(k), param(p) {
        if (p < 1) throw std::invalid_argument("family parameter must be positive");
        if (k != Kind::ncyclic && k != Kind::ndihedral && k != Kind::quaternionic) param = 1;
    }

    bool has_param() const { return kind == Kind::ncyclic || kind == Kind::ndihedral || kind == Kind::quaternionic; }
    bool has_rotation() const { return kind != Kind::trivial && kind != Kind::reflexive; }
    bool has_reflection() const {
        return kind == Kind::reflexive || kind == Kind::dihedral || kind == Kind::ndihedral || kind == Kind::quaternionic;
    }
    bool compact() const { return true; }

    // the rotation subgroup has order L * (n+1) for the periodic families
    int cover() const {
        switch (kind) {
            case Kind::cyclic: case Kind::dihedral: return 1;
            case Kind::ncyclic: case Kind::ndihedral: return param;
            case Kind::quaternionic: return 2 * param;
            default: return 0;
        }
    }

    int rotation_order(int n) const { return has_rotation() ? cover() * (n + 1) : 1; }

    // generator names in the order used by action tables
    std::vector<std::string> generators() const {
        switch (kind) {
            case Kind::trivial: return {};
            case Kind::reflexive: return {"w"};
            case Kind::cyclic: case Kind::ncyclic: return {"t"};
            case Kind::dihedral: case Kind::ndihedral: return {"t", "w"};
            case Kind::quaternionic: return {"t", "b"};
        }
        return {};
    }

    std::string name() const {
        return has_param() ? kind_name(kind) + "(" + std::to_string(param) + ")" : kind_name(kind);
    }

    friend bool operator==(const Family& a, const Family& b) { return a.kind == b.kind && a.param == b.param; }
};

inline int group_order(const Family& f, int n) {
    if (n < 0) throw std::invalid_argument("negative level");
    return f.rotation_order(n) * (f.has_reflection() ? 2 : 1);
}

/// Canonical word a^k b^e (rotation exponent k, reflection flag e) at level n.
struct GroupElement {
    Family family;
    int n = 0;
    int k = 0;
    int e = 0;

    GroupElement() = default;
    GroupElement(Family f, int level, int k_, int e_) : family(f), n(level), k(k_), e(e_) {
        if (level < 0) throw std::invalid_argument("negative level");
        int R = family.rotation_order(n);
        k = static_cast<int>(reduce(k_, R));
        if (e_ != 0 && e_ != 1) throw std::invalid_argument("reflection flag must be 0 or 1");
        if (e_ && !family.has_reflection()) throw std::invalid_argument("family " + family.name() + " has no reflection");
    }

    static GroupElement identity(Family f, int n) { return GroupElement(f, n, 0, 0); }
    static GroupElement rotation(Family f, int n) {
        if (!f.has_rotation()) throw std::invalid_argument("family " + f.name() + " has no rotation");
        return GroupElement(f, n, 1, 0);
    }
    static GroupElement reflection(Family f, int n) { return GroupElement(f, n, 0, 1); }
    static GroupElement generator(Family f, int n, const std::string& g) {
        if (g == "t") return rotation(f, n);
        if ((g == "w" && f.kind != Kind::quaternionic) || (g == "b" && f.kind == Kind::quaternionic))
            return reflection(f, n);
        throw std::invalid_argument("generator '" + g + "' not available in family " + f.name());
    }

    bool is_identity() const { return k == 0 && e == 0; }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.family == b.family && a.n == b.n && a.k == b.k && a.e == b.e;
    }
    friend bool operator<(const GroupElement& a, const GroupElement& b) {
        return std::tie(a.n, a.e, a.k) < std::tie(b.n, b.e, b.k);
    }
    std::string str() const { return std::to_string(k) + "," + std::to_string(e); }
};

inline void require_same(const GroupElement& a, const GroupElement& b) {
    if (!(a.family == b.family) || a.n != b.n) throw std::invalid_argument("group elements from different families or levels");
}

inline GroupElement multiply(const GroupElement& a, const GroupElement& b) {
    require_same(a, b);
    int R = a.family.rotation_order(a.n);
    i64 k = a.k + (a.e ? -b.k : b.k);
    if (a.family.kind == Kind::quaternionic && a.e && b.e) k += R / 2;
    return GroupElement(a.family, a.n, static_cast<int>(reduce(k, R)), a.e ^ b.e);
}

inline GroupElement inverse(const GroupElement& a) {
    if (!a.e) return GroupElement(a.family, a.n, -a.k, 0);
    if (a.family.kind == Kind::quaternionic) return GroupElement(a.family, a.n, a.k + a.family.rotation_order(a.n) / 2, 1);
    return a;
}

inline GroupElement gpow(const GroupElement& a, int e) {
    GroupElement r = GroupElement::identity(a.family, a.n);
    GroupElement base = e >= 0 ? a : inverse(a);
    for (int i = 0; i < std::abs(e); ++i) r = multiply(r, base);
    return r;
}

inline std::vector<GroupElement> group_elements(const Family& f, int n) {
    std::vector<GroupElement> out;
    for (int e = 0; e < (f.has_reflection() ? 2 : 1); ++e)
        for (int k = 0; k < f.rotation_order(n); ++k) out.emplace_back(f, n, k, e);
    return out;
}

/// Position map of g on {0..n}: reflection first, then rotation by k.
inline int act_on_index(const GroupElement& g, int i) {
    if (i < 0 || i > g.n) throw std::out_of_range("index " + std::to_string(i) + " outside [0," + std::to_string(g.n) + "]");
    int base = g.e ? g.n - i : i;
    return static_cast<int>(reduce(base + g.k, g.n + 1));
}

// ---------------------------------------------------------------------------
// Simplicial operators and crossed morphisms

struct SimplicialOperator {
    int m = 0, n = 0;       // [m] -> [n]
    std::vector<int> img;   // length m+1, weakly increasing, values in [0, n]

    SimplicialOperator() = default;
    SimplicialOperator(int target, std::vector<int> image) : m(static_cast<int>(image.size()) - 1), n(target), img(std::move(image)) {
        if (m < 0) throw std::invalid_argument("empty simplicial operator");
        for (size_t i = 0; i < img.size(); ++i) {
            if (img[i] < 0 || img[i] > n) throw std::invalid_argument("simplicial operator value out of range");
            if (i && img[i] < img[i - 1]) throw std::invalid_argument("simplicial operator not monotone");
        }
    }

    static SimplicialOperator identity(int n) {
        std::vector<int> v(n + 1);
        for (int i = 0; i <= n; ++i) v[i] = i;
        return SimplicialOperator(n, v);
    }
    // coface delta_i : [n-1] -> [n] skipping i
    static SimplicialOperator coface(int n, int i) {
        std::vector<int> v;
        for (int j = 0; j <= n; ++j)
            if (j != i) v.push_back(j);
        return SimplicialOperator(n, v);
    }
    // codegeneracy sigma_i : [n+1] -> [n] hitting i twice
    static SimplicialOperator codegeneracy(int n, int i) {
        std::vector<int> v;
        for (int j = 0; j <= n + 1; ++j) v.push_back(j <= i ? j : j - 1);
        return SimplicialOperator(n, v);
    }

    bool surjective() const {
        if (img.front() != 0 || img.back() != n) return false;
        for (size_t i = 1; i < img.size(); ++i)
            if (img[i] - img[i - 1] > 1) return false;
        return true;
    }
    bool injective() const {
        for (size_t i = 1; i < img.size(); ++i)
            if (img[i] == img[i - 1]) return false;
        return true;
    }

    // epi-mono factorisation: this = mono o epi
    std::pair<SimplicialOperator, SimplicialOperator> epi_mono() const {
        std::vector<int> distinct;
        std::vector<int> epi;
        for (int v : img) {
            if (distinct.empty() || distinct.back() != v) distinct.push_back(v);
            epi.push_back(static_cast<int>(distinct.size()) - 1);
        }
        int k = static_cast<int>(distinct.size()) - 1;
        return {SimplicialOperator(k, epi), SimplicialOperator(n, distinct)};
    }

    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < img.size(); ++i) s += (i ? "," : "") + std::to_string(img[i]);
        return s + "]";
    }

    friend bool operator==(const SimplicialOperator& a, const SimplicialOperator& b) { return a.n == b.n && a.img == b.img; }
    friend bool operator<(const SimplicialOperator& a, const SimplicialOperator& b) {
        return std::tie(a.m, a.n, a.img) < std::tie(b.m, b.n, b.img);
    }
};

/// f2 o f1 for plain monotone maps.
inline SimplicialOperator compose(const SimplicialOperator& f2, const SimplicialOperator& f1) {
    if (f1.n != f2.m) throw std::invalid_argument("simplicial operators not composable");
    std::vector<int> v(f1.img.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = f2.img[f1.img[i]];
    return SimplicialOperator(f2.n, v);
}

inline std::vector<SimplicialOperator> monotone_maps(int m, int n) {
    std::vector<SimplicialOperator> out;
    std::vector<int> v(m + 1, 0);
    for (;;) {
        out.emplace_back(n, v);
        int i = m;
        while (i >= 0 && v[i] == n) --i;
        if (i < 0) break;
        ++v[i];
        for (int j = i + 1; j <= m; ++j) v[j] = v[i];
    }
    return out;
}

/// Canonical pair: the morphism op o g : [m] -> [n].
struct CrossedMorphism {
    SimplicialOperator op;
    GroupElement g;  // at level op.m

    CrossedMorphism() = default;
    CrossedMorphism(SimplicialOperator o, GroupElement h) : op(std::move(o)), g(std::move(h)) {
        if (g.n != op.m) throw std::invalid_argument("group element level must equal operator source");
    }

    int source() const { return op.m; }
    int target() const { return op.n; }
    const Family& family() const { return g.family; }

    static CrossedMorphism identity(const Family& f, int n) {
        return {SimplicialOperator::identity(n), GroupElement::identity(f, n)};
    }
    static CrossedMorphism of(const SimplicialOperator& o, const Family& f) {
        return {o, GroupElement::identity(f, o.m)};
    }
    static CrossedMorphism of(const GroupElement& g) { return {SimplicialOperator::identity(g.n), g}; }

    std::string str() const { return op.str() + "@" + g.str(); }

    friend bool operator==(const CrossedMorphism& a, const CrossedMorphism& b) { return a.op == b.op && a.g == b.g; }
    friend bool operator<(const CrossedMorphism& a, const CrossedMorphism& b) {
        return std::tie(a.op, a.g) < std::tie(b.op, b.g);
    }
};

namespace detail {

// Periodic families: a morphism [m] -> [n] is a map f: Z -> Z with
// f(x + (m+1)) = f(x) +- (n+1), taken modulo a global shift by cover*(n+1).
struct ZMap {
    int m, n;
    std::vector<i64> v;  // f(0..m)
    int e;               // 1 if f is decreasing

    i64 eval(i64 x) const {
        i64 q = x >= 0 ? x / (m + 1) : -((-x + m) / (m + 1));
        i64 r = x - q * (m + 1);
        return v[r] + (e ? -q : q) * (n + 1);
    }
};

inline ZMap zmap_of(const CrossedMorphism& f) {
    const auto& g = f.g;
    int m = f.op.m, n = f.op.n;
    // phi extended periodically, then the group element g(x) = (e ? m - x : x) + k
    ZMap phi{m, n, std::vector<i64>(f.op.img.begin(), f.op.img.end()), 0};
    ZMap out{m, n, std::vector<i64>(m + 1), g.e};
    for (int x = 0; x <= m; ++x) out.v[x] = phi.eval((g.e ? m - x : x) + g.k);
    return out;
}

inline CrossedMorphism canonical_from_zmap(const Family& fam, const ZMap& f) {
    int m = f.m, n = f.n;
    i64 period = static_cast<i64>(fam.cover()) * (n + 1);
    int R = fam.rotation_order(m);
    for (int k = 0; k < R; ++k) {
        // phi(y) = f(g^{-1}(y)), g^{-1}(y) = e ? m - (y - k) : y - k
        std::vector<i64> phi(m + 1);
        for (int y = 0; y <= m; ++y) phi[y] = f.eval(f.e ? m - (y - k) : y - k);
        i64 shift = reduce(phi[0], period) - phi[0];
        bool ok = true;
        std::vector<int> img(m + 1);
        for (int y = 0; y <= m && ok; ++y) {
            i64 val = phi[y] + shift;
            if (val < 0 || val > n || (y && val < img[y - 1])) ok = false;
            else img[y] = static_cast<int>(val);
        }
        if (ok) return {SimplicialOperator(n, img), GroupElement(fam, m, k, f.e)};
    }
    throw std::logic_error("no canonical decomposition found");
}

} // namespace detail

inline CrossedMorphism compose(const CrossedMorphism& f2, const CrossedMorphism& f1) {
    if (!(f1.family() == f2.family())) throw std::invalid_argument("morphisms from different families");
    if (f1.target() != f2.source()) throw std::invalid_argument("morphisms not composable");
    const Family& fam = f1.family();
    int m = f1.source(), n = f2.target();
    if (!fam.has_rotation()) {
        // genuine maps of finite sets; reflection acts by i -> level - i
        auto apply_g = [](const GroupElement& g, int x) { return g.e ? g.n - x : x; };
        std::vector<int> F(m + 1);
        for (int x = 0; x <= m; ++x) F[x] = f2.op.img[apply_g(f2.g, f1.op.img[apply_g(f1.g, x)])];
        int e = f1.g.e ^ f2.g.e;
        std::vector<int> img(m + 1);
        for (int y = 0; y <= m; ++y) img[y] = F[e ? m - y : y];
        return {SimplicialOperator(n, img), GroupElement(fam, m, 0, e)};
    }
    auto z1 = detail::zmap_of(f1), z2 = detail::zmap_of(f2);
    detail::ZMap z{m, n, std::vector<i64>(m + 1), z1.e ^ z2.e};
    for (int x = 0; x <= m; ++x) z.v[x] = z2.eval(z1.v[x]);
    if (fam.kind == Kind::quaternionic && z1.e && z2.e)
        for (auto& v : z.v) v += static_cast<i64>(fam.param) * (n + 1);
    return detail::canonical_from_zmap(fam, z);
}

inline i64 binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    i64 r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline i64 hom_count(const Family& f, int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("negative level");
    return checked_mul(binomial(n + m + 1, m + 1), group_order(f, m));
}

inline std::vector<CrossedMorphism> enumerate_homs(const Family& f, int m, int n) {
    std::vector<CrossedMorphism> out;
    auto ops = monotone_maps(m, n);
    for (auto& op : ops)
        for (auto& g : group_elements(f, m)) out.emplace_back(op, g);
    return out;
}

enum class OpKind { face, degeneracy };

/// Rewrites g past a coface or codegeneracy using the generator relations
/// (tau(i) = i+1 convention):
///   tau_n delta_a = delta_{a+1} tau_{n-1} (a < n),  tau_n delta_n = delta_0
///   tau_n sigma_a = sigma_{a+1} tau_{n+1} (a < n),  tau_n sigma_n = sigma_0 tau_{n+1}^2
///   omega_n delta_a = delta_{n-a} omega_{n-1},      omega_n sigma_a = sigma_{n-a} omega_{n+1}
/// Returns (g', j) with j = g^{-1}(i) and g o delta_j = delta_i o g' (resp. sigma).
inline std::pair<GroupElement, int> crossed_twist(const GroupElement& g, OpKind kind, int i) {
    int n = g.n;
    if (kind == OpKind::face) {
        if (n < 1) throw std::invalid_argument("no faces at level 0");
        if (i < 0 || i > n) throw std::out_of_range("face index out of range");
    } else if (i < 0 || i > n) {
        throw std::out_of_range("degeneracy index out of range");
    }
    int j = act_on_index(inverse(g), i);
    int lvl = kind == OpKind::face ? n - 1 : n + 1;
    int a = j;
    if (g.e) a = n - a;
    int kk = 0;
    for (int s = 0; s < g.k; ++s) {
        if (kind == OpKind::face) {
            if (a < n) { ++a; ++kk; }
            else a = 0;
        } else {
            if (a < n) { ++a; ++kk; }
            else { a = 0; kk += 2; }
        }
    }
    if (a != i) throw std::logic_error("crossed twist index mismatch");
    return {GroupElement(g.family, lvl, kk, g.e), j};
}

/// delta_i as a crossed morphism.
inline CrossedMorphism coface(const Family& f, int n, int i) { return CrossedMorphism::of(SimplicialOperator::coface(n, i), f); }
inline CrossedMorphism codegeneracy(const Family& f, int n, int i) {
    return CrossedMorphism::of(SimplicialOperator::codegeneracy(n, i), f);
}

} // namespace xsimp
