#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chain.hpp"
#include "cyclic.hpp"
#include "dgset.hpp"
#include "module.hpp"
#include "smith.hpp"
#include "subdivision.hpp"

namespace xsimp {

// ---------------------------------------------------------------------------
// Finite sites

/// Finite poset with declared covering families; an object is covered by families of objects below it.
struct FiniteSite {
    std::vector<std::string> objects;
    std::vector<std::vector<bool>> le;                 // le[a][b]: a <= b
    std::vector<std::vector<std::vector<int>>> covers; // declared families per object

    int size() const { return static_cast<int>(objects.size()); }
    bool leq(int a, int b) const { return le[a][b]; }
    bool less(int a, int b) const { return a != b && le[a][b]; }

    int index_of(const std::string& id) const {
        auto it = std::find(objects.begin(), objects.end(), id);
        if (it == objects.end()) throw std::invalid_argument("unknown site object '" + id + "'");
        return static_cast<int>(it - objects.begin());
    }

    std::vector<int> down(int x) const {
        std::vector<int> out;
        for (int y = 0; y < size(); ++y)
            if (le[y][x]) out.push_back(y);
        return out;
    }

    /// Pairs y < x with nothing strictly between.
    std::vector<std::pair<int, int>> hasse() const {
        std::vector<std::pair<int, int>> out;
        for (int x = 0; x < size(); ++x)
            for (int y = 0; y < size(); ++y) {
                if (!less(y, x)) continue;
                bool direct = true;
                for (int z = 0; z < size() && direct; ++z)
                    if (less(y, z) && less(z, x)) direct = false;
                if (direct) out.push_back({x, y});
            }
        return out;
    }

    /// Reflexive-transitive closure of the given pairs (a <= b); covers default to the identity cover.
    static FiniteSite make(std::vector<std::string> objs, const std::vector<std::pair<int, int>>& pairs,
                           std::vector<std::vector<std::vector<int>>> declared = {}) {
        FiniteSite S;
        S.objects = std::move(objs);
        int n = S.size();
        {
            std::set<std::string> seen(S.objects.begin(), S.objects.end());
            if (static_cast<int>(seen.size()) != n) throw std::invalid_argument("duplicate site object");
        }
        S.le.assign(n, std::vector<bool>(n, false));
        for (int i = 0; i < n; ++i) S.le[i][i] = true;
        for (auto [a, b] : pairs) {
            if (a < 0 || b < 0 || a >= n || b >= n) throw std::invalid_argument("order relation names an unknown object");
            S.le[a][b] = true;
        }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (S.le[i][k] && S.le[k][j]) S.le[i][j] = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && S.le[i][j] && S.le[j][i])
                    throw std::invalid_argument("order relation is not antisymmetric ('" + S.objects[i] + "', '" + S.objects[j] + "')");
        S.covers = declared.empty() ? std::vector<std::vector<std::vector<int>>>(n) : std::move(declared);
        if (static_cast<int>(S.covers.size()) != n) throw std::invalid_argument("cover list does not match objects");
        for (int x = 0; x < n; ++x) {
            for (auto& fam : S.covers[x]) {
                if (fam.empty()) throw std::invalid_argument("empty covering family on '" + S.objects[x] + "'");
                for (int y : fam)
                    if (y < 0 || y >= n || !S.le[y][x])
                        throw std::invalid_argument("covering family of '" + S.objects[x] + "' contains an object not below it");
            }
            if (S.covers[x].empty()) S.covers[x].push_back({x});
        }
        return S;
    }

    /// Canonical Alexandrov coverage: only the identity covers.
    static FiniteSite alexandrov(std::vector<std::string> objs, const std::vector<std::pair<int, int>>& pairs) {
        return make(std::move(objs), pairs);
    }
};

using Sieve = std::vector<bool>;

/// Smallest covering sieve of every object in the topology generated by the declared covers:
/// stable under pullback and closed under composition of covers.
inline std::vector<Sieve> minimal_sieves(const FiniteSite& S) {
    int n = S.size();
    std::vector<Sieve> J(n);
    for (int x = 0; x < n; ++x) {
        Sieve cur(n, false);
        for (int y : S.down(x)) cur[y] = true;
        for (auto& fam : S.covers[x]) {
            Sieve s(n, false);
            for (int v : fam)
                for (int y : S.down(v)) s[y] = true;
            for (int y = 0; y < n; ++y) cur[y] = cur[y] && s[y];
        }
        J[x] = cur;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (int x = 0; x < n; ++x)
            for (int v = 0; v < n; ++v) {
                if (!S.less(v, x)) continue;
                // pullback: J(v) inside J(x) restricted below v
                for (int y = 0; y < n; ++y)
                    if (J[v][y] && !J[x][y]) { J[v][y] = false; changed = true; }
            }
        for (int x = 0; x < n; ++x) {
            // composition: J(x) inside the union of J(v) over v in J(x), v < x
            if (J[x][x]) continue;
            Sieve u(n, false);
            for (int v = 0; v < n; ++v)
                if (J[x][v])
                    for (int y = 0; y < n; ++y) u[y] = u[y] || J[v][y];
            for (int y = 0; y < n; ++y)
                if (J[x][y] && !u[y]) { J[x][y] = false; changed = true; }
        }
    }
    return J;
}

inline bool is_alexandrov(const FiniteSite& S) {
    auto J = minimal_sieves(S);
    for (int x = 0; x < S.size(); ++x)
        if (!J[x][x]) return false;
    return true;
}

inline std::vector<int> members(const Sieve& s) {
    std::vector<int> out;
    for (size_t i = 0; i < s.size(); ++i)
        if (s[i]) out.push_back(static_cast<int>(i));
    return out;
}

// ---------------------------------------------------------------------------
// Set-valued presheaves

/// res[{x, y}] for y < x maps P(x) -> P(y).
struct SetPresheaf {
    std::vector<int> size;
    std::map<std::pair<int, int>, std::vector<int>> res;
    std::vector<std::vector<std::string>> labels;  // optional element names

    int restrict(int x, int y, int a) const { return x == y ? a : res.at({x, y})[a]; }
};

using SetPresheafMap = std::vector<std::vector<int>>;  // per object

inline std::vector<std::string> validate(const FiniteSite& S, const SetPresheaf& P) {
    std::vector<std::string> out;
    if (static_cast<int>(P.size.size()) != S.size()) return {"presheaf object count does not match the site"};
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y) {
            if (!S.less(y, x)) continue;
            auto it = P.res.find({x, y});
            if (it == P.res.end() || static_cast<int>(it->second.size()) != P.size[x]) {
                out.push_back("missing restriction " + S.objects[x] + " -> " + S.objects[y]);
                continue;
            }
            for (int v : it->second)
                if (v < 0 || v >= P.size[y]) out.push_back("restriction " + S.objects[x] + " -> " + S.objects[y] + " out of range");
        }
    if (!out.empty()) return out;
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            for (int z = 0; z < S.size(); ++z)
                if (S.less(y, x) && S.less(z, y))
                    for (int a = 0; a < P.size[x]; ++a)
                        if (P.restrict(y, z, P.restrict(x, y, a)) != P.restrict(x, z, a)) {
                            out.push_back("restrictions do not compose along " + S.objects[x] + " > " + S.objects[y] + " > " + S.objects[z]);
                            goto next;
                        }
    next:
    return out;
}

struct SetSheafification {
    SetPresheaf sheaf;
    SetPresheafMap unit;  // P -> sheaf
};

namespace detail {

// compatible families over a sieve, represented on all sieve members
struct SetMatch {
    std::vector<int> mem;                   // sieve members
    std::vector<std::vector<int>> families; // value per member
    std::map<std::vector<int>, int> index;
};

inline SetMatch set_matches(const FiniteSite& S, const SetPresheaf& P, const Sieve& J, long cap = 1000000) {
    SetMatch m;
    m.mem = members(J);
    std::vector<int> maxi;
    for (int v : m.mem) {
        bool top = true;
        for (int w : m.mem)
            if (S.less(v, w)) top = false;
        if (top) maxi.push_back(v);
    }
    std::vector<int> choice(maxi.size(), 0);
    long total = 1;
    for (int v : maxi) {
        total *= P.size[v];
        if (total > cap) throw std::runtime_error("sheafification: too many candidate families");
    }
    if (total == 0) return m;
    for (;;) {
        // derive values on the whole sieve; check agreement
        std::vector<int> val(m.mem.size(), -1);
        bool ok = true;
        for (size_t a = 0; a < m.mem.size() && ok; ++a)
            for (size_t b = 0; b < maxi.size() && ok; ++b) {
                if (!S.leq(m.mem[a], maxi[b])) continue;
                int v = P.restrict(maxi[b], m.mem[a], choice[b]);
                if (val[a] < 0) val[a] = v;
                else if (val[a] != v) ok = false;
            }
        if (ok) {
            m.index[val] = static_cast<int>(m.families.size());
            m.families.push_back(val);
        }
        size_t i = 0;
        while (i < maxi.size() && ++choice[i] == P.size[maxi[i]]) choice[i++] = 0;
        if (i == maxi.size()) break;
    }
    return m;
}

inline int position(const std::vector<int>& v, int x) {
    return static_cast<int>(std::find(v.begin(), v.end(), x) - v.begin());
}

} // namespace detail

/// One plus-construction step over the minimal covering sieves.
inline SetSheafification plus(const FiniteSite& S, const SetPresheaf& P) {
    auto J = minimal_sieves(S);
    std::vector<detail::SetMatch> M;
    for (int x = 0; x < S.size(); ++x) M.push_back(detail::set_matches(S, P, J[x]));
    SetSheafification out;
    out.sheaf.size.resize(S.size());
    for (int x = 0; x < S.size(); ++x) out.sheaf.size[x] = static_cast<int>(M[x].families.size());
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y) {
            if (!S.less(y, x)) continue;
            std::vector<int> r;
            for (auto& fam : M[x].families) {
                std::vector<int> val;
                for (int w : M[y].mem) val.push_back(fam[detail::position(M[x].mem, w)]);
                r.push_back(M[y].index.at(val));
            }
            out.sheaf.res[{x, y}] = r;
        }
    for (int x = 0; x < S.size(); ++x) {
        std::vector<int> u;
        for (int a = 0; a < P.size[x]; ++a) {
            std::vector<int> val;
            for (int w : M[x].mem) val.push_back(P.restrict(x, w, a));
            u.push_back(M[x].index.at(val));
        }
        out.unit.push_back(u);
    }
    return out;
}

/// Plus construction applied twice.
inline SetSheafification sheafify(const FiniteSite& S, const SetPresheaf& P) {
    auto a = plus(S, P);
    auto b = plus(S, a.sheaf);
    SetPresheafMap unit;
    for (int x = 0; x < S.size(); ++x) {
        std::vector<int> u;
        for (int e : a.unit[x]) u.push_back(b.unit[x][e]);
        unit.push_back(u);
    }
    return {b.sheaf, unit};
}

/// phi: P -> Q induces a map of sheafifications (computed on compatible families).
inline SetPresheafMap sheafify_map(const FiniteSite& S, const SetPresheaf& P, const SetPresheaf& Q, const SetPresheafMap& phi) {
    auto J = minimal_sieves(S);
    auto step = [&](const SetPresheaf& A, const SetPresheaf& B, const SetPresheafMap& f) {
        SetPresheafMap g;
        for (int x = 0; x < S.size(); ++x) {
            auto ma = detail::set_matches(S, A, J[x]);
            auto mb = detail::set_matches(S, B, J[x]);
            std::vector<int> row;
            for (auto& fam : ma.families) {
                std::vector<int> val;
                for (size_t i = 0; i < ma.mem.size(); ++i) val.push_back(f[ma.mem[i]][fam[i]]);
                row.push_back(mb.index.at(val));
            }
            g.push_back(row);
        }
        return g;
    };
    auto P1 = plus(S, P).sheaf, Q1 = plus(S, Q).sheaf;
    return step(P1, Q1, step(P, Q, phi));
}

/// Sheaf condition: P(x) -> Match(J(x), P) bijective for the minimal sieve (hence every covering sieve).
inline bool is_sheaf(const FiniteSite& S, const SetPresheaf& P) {
    auto J = minimal_sieves(S);
    for (int x = 0; x < S.size(); ++x) {
        auto m = detail::set_matches(S, P, J[x]);
        if (static_cast<int>(m.families.size()) != P.size[x]) return false;
        std::set<std::vector<int>> seen;
        for (int a = 0; a < P.size[x]; ++a) {
            std::vector<int> val;
            for (int w : m.mem) val.push_back(P.restrict(x, w, a));
            seen.insert(val);
        }
        if (static_cast<int>(seen.size()) != P.size[x]) return false;
    }
    return true;
}

inline bool is_bijection(const std::vector<int>& f, int target_size) {
    if (static_cast<int>(f.size()) != target_size) return false;
    std::vector<bool> hit(target_size, false);
    for (int v : f) {
        if (v < 0 || v >= target_size || hit[v]) return false;
        hit[v] = true;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Abelian presheaves (free modules over Z or Z/p)

struct AbPresheaf {
    i64 ring = 0;
    std::vector<int> rank;
    std::map<std::pair<int, int>, Matrix> res;  // res[{x, y}]: rank[y] x rank[x], y < x

    Matrix restrict(int x, int y) const { return x == y ? Matrix::identity(rank[x]) : res.at({x, y}); }
};

using AbPresheafMap = std::vector<Matrix>;  // per object

inline AbPresheaf constant_presheaf(const FiniteSite& S, i64 ring, int r = 1) {
    AbPresheaf A{ring, std::vector<int>(S.size(), r), {}};
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            if (S.less(y, x)) A.res[{x, y}] = Matrix::identity(r);
    return A;
}

inline std::vector<std::string> validate(const FiniteSite& S, const AbPresheaf& A) {
    std::vector<std::string> out;
    if (static_cast<int>(A.rank.size()) != S.size()) return {"presheaf object count does not match the site"};
    if (A.ring != 0 && !is_prime(A.ring)) return {"abelian presheaves are over Z or Z/p"};
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y) {
            if (!S.less(y, x)) continue;
            auto it = A.res.find({x, y});
            if (it == A.res.end()) out.push_back("missing restriction " + S.objects[x] + " -> " + S.objects[y]);
            else if (it->second.rows() != A.rank[y] || it->second.cols() != A.rank[x])
                out.push_back("restriction " + S.objects[x] + " -> " + S.objects[y] + " has the wrong shape");
        }
    if (!out.empty()) return out;
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            for (int z = 0; z < S.size(); ++z)
                if (S.less(y, x) && S.less(z, y) && !equal_mod(mul(A.restrict(y, z), A.restrict(x, y), A.ring), A.restrict(x, z), A.ring))
                    out.push_back("restrictions do not compose along " + S.objects[x] + " > " + S.objects[y] + " > " + S.objects[z]);
    return out;
}

namespace detail {

// sections over a set of objects W (down-closed): compatible families, as a kernel
struct AbMatch {
    std::vector<int> mem;
    std::vector<int> offset;
    int total = 0;
    Kernel ker;  // K: total x rank, L: rank x total
};

inline AbMatch ab_matches(const FiniteSite& S, const AbPresheaf& A, const std::vector<int>& mem) {
    AbMatch m;
    m.mem = mem;
    for (int v : mem) {
        m.offset.push_back(m.total);
        m.total += A.rank[v];
    }
    std::vector<Matrix> rows;
    for (size_t a = 0; a < mem.size(); ++a)
        for (size_t b = 0; b < mem.size(); ++b) {
            if (!S.less(mem[b], mem[a])) continue;
            // a_b - res(a_a) = 0
            Matrix r(A.rank[mem[b]], m.total);
            Matrix R = A.restrict(mem[a], mem[b]);
            for (int i = 0; i < R.rows(); ++i) {
                r(i, m.offset[b] + i) = 1;
                for (int j = 0; j < R.cols(); ++j) r(i, m.offset[a] + j) = A.ring ? reduce(-R(i, j), A.ring) : -R(i, j);
            }
            rows.push_back(r);
        }
    Matrix C = rows.empty() ? Matrix(0, m.total) : vstack(rows, m.total);
    m.ker = kernel(C, A.ring);
    return m;
}

// selection of the entries of `to` inside `from` (to.mem must be a subset of from.mem)
inline Matrix select(const AbPresheaf& A, const AbMatch& from, const AbMatch& to) {
    Matrix s(to.total, from.total);
    for (size_t b = 0; b < to.mem.size(); ++b) {
        int a = position(from.mem, to.mem[b]);
        for (int i = 0; i < A.rank[to.mem[b]]; ++i) s(to.offset[b] + i, from.offset[a] + i) = 1;
    }
    return s;
}

} // namespace detail

struct AbSheafification {
    AbPresheaf sheaf;
    AbPresheafMap unit;
};

inline AbSheafification plus(const FiniteSite& S, const AbPresheaf& A) {
    auto J = minimal_sieves(S);
    std::vector<detail::AbMatch> M;
    for (int x = 0; x < S.size(); ++x) M.push_back(detail::ab_matches(S, A, members(J[x])));
    i64 p = A.ring;
    AbSheafification out;
    out.sheaf.ring = p;
    for (int x = 0; x < S.size(); ++x) out.sheaf.rank.push_back(M[x].ker.K.cols());
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            if (S.less(y, x)) out.sheaf.res[{x, y}] = mul(M[y].ker.L, mul(detail::select(A, M[x], M[y]), M[x].ker.K, p), p);
    for (int x = 0; x < S.size(); ++x) {
        std::vector<Matrix> blocks;
        for (int w : M[x].mem) blocks.push_back(A.restrict(x, w));
        Matrix stack = blocks.empty() ? Matrix(0, A.rank[x]) : vstack(blocks, A.rank[x]);
        out.unit.push_back(mul(M[x].ker.L, stack, p));
    }
    return out;
}

inline AbSheafification sheafify(const FiniteSite& S, const AbPresheaf& A) {
    auto a = plus(S, A);
    auto b = plus(S, a.sheaf);
    AbPresheafMap unit;
    for (int x = 0; x < S.size(); ++x) unit.push_back(mul(b.unit[x], a.unit[x], A.ring));
    return {b.sheaf, unit};
}

inline AbPresheafMap sheafify_map(const FiniteSite& S, const AbPresheaf& A, const AbPresheaf& B, const AbPresheafMap& phi) {
    auto J = minimal_sieves(S);
    i64 p = A.ring;
    auto step = [&](const AbPresheaf& X, const AbPresheaf& Y, const AbPresheafMap& f) {
        AbPresheafMap g;
        for (int x = 0; x < S.size(); ++x) {
            auto mx = detail::ab_matches(S, X, members(J[x]));
            auto my = detail::ab_matches(S, Y, members(J[x]));
            Matrix big(my.total, mx.total);
            for (size_t i = 0; i < mx.mem.size(); ++i) {
                const Matrix& F = f[mx.mem[i]];
                for (int r = 0; r < F.rows(); ++r)
                    for (int c = 0; c < F.cols(); ++c) big(my.offset[i] + r, mx.offset[i] + c) = F(r, c);
            }
            g.push_back(mul(my.ker.L, mul(big, mx.ker.K, p), p));
        }
        return g;
    };
    auto A1 = plus(S, A).sheaf, B1 = plus(S, B).sheaf;
    return step(A1, B1, step(A, B, phi));
}

inline bool is_sheaf(const FiniteSite& S, const AbPresheaf& A) {
    auto P = plus(S, A);
    for (int x = 0; x < S.size(); ++x)
        if (P.sheaf.rank[x] != A.rank[x] || !invertible(P.unit[x], A.ring)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Cohomology of poset sites

namespace detail {

inline std::vector<std::vector<int>> strict_chains(const FiniteSite& S, int len) {
    // chains x_0 < x_1 < ... < x_len
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.size()) == len + 1) { out.push_back(cur); return; }
        for (int x = 0; x < S.size(); ++x)
            if (cur.empty() || S.less(cur.back(), x)) {
                cur.push_back(x);
                rec();
                cur.pop_back();
            }
    };
    rec();
    return out;
}

// cochain complex stored dually: boundary(n+1) = transpose of delta^n
inline ChainComplex cochain_as_chain(i64 ring, const std::vector<int>& ranks, const std::vector<Matrix>& delta, bool bounded) {
    std::vector<Matrix> ds{Matrix(0, ranks.empty() ? 0 : ranks[0])};
    for (size_t n = 0; n + 1 < ranks.size(); ++n) ds.push_back(delta[n].transpose());
    return ChainComplex::make(ring, ranks, ds, bounded);
}

} // namespace detail

/// Ordered-chain cochains: C^n = product over x_0 < ... < x_n of A(x_0).
inline ChainComplex ordered_chain_cochains(const FiniteSite& S, const AbPresheaf& A, int n_max) {
    i64 p = A.ring;
    int longest = 0;
    while (!detail::strict_chains(S, longest + 1).empty()) ++longest;
    int top = std::min(n_max + 1, longest);
    bool bounded = top == longest;
    std::vector<std::vector<std::vector<int>>> ch;
    std::vector<std::vector<int>> off;
    std::vector<int> ranks;
    for (int n = 0; n <= top; ++n) {
        ch.push_back(detail::strict_chains(S, n));
        off.emplace_back();
        int r = 0;
        for (auto& c : ch[n]) {
            off[n].push_back(r);
            r += A.rank[c[0]];
        }
        ranks.push_back(r);
    }
    std::vector<Matrix> delta;
    for (int n = 0; n < top; ++n) {
        Matrix d(ranks[n + 1], ranks[n]);
        std::map<std::vector<int>, int> idx;
        for (size_t i = 0; i < ch[n].size(); ++i) idx[ch[n][i]] = static_cast<int>(i);
        for (size_t j = 0; j < ch[n + 1].size(); ++j) {
            const auto& c = ch[n + 1][j];
            for (int i = 0; i <= n + 1; ++i) {
                std::vector<int> face = c;
                face.erase(face.begin() + i);
                int src = idx.at(face);
                // value at the minimum; dropping x_0 restricts from x_1 to x_0
                Matrix R = i == 0 ? A.restrict(c[1], c[0]) : Matrix::identity(A.rank[c[0]]);
                i64 sgn = i % 2 ? -1 : 1;
                for (int r = 0; r < R.rows(); ++r)
                    for (int q = 0; q < R.cols(); ++q) {
                        i64& e = d(off[n + 1][j] + r, off[n][src] + q);
                        e = p ? reduce(e + sgn * R(r, q), p) : e + sgn * R(r, q);
                    }
            }
        }
        delta.push_back(d);
    }
    return detail::cochain_as_chain(p, ranks, delta, bounded);
}

/// Sheaf cohomology of an Alexandrov poset site via ordered-chain cochains.
inline HomologyGroups site_cohomology(const FiniteSite& S, const AbPresheaf& A, int n_max) {
    if (!is_alexandrov(S)) throw std::invalid_argument("site_cohomology needs the Alexandrov coverage");
    auto errs = validate(S, A);
    if (!errs.empty()) throw std::invalid_argument(errs.front());
    return cohomology(ordered_chain_cochains(S, A, n_max), n_max);
}

/// Sections of A over a down-closed set of objects.
inline detail::AbMatch sections_over(const FiniteSite& S, const AbPresheaf& A, std::vector<int> W) {
    std::sort(W.begin(), W.end());
    return detail::ab_matches(S, A, W);
}

/// Alternating Cech cochains of the cover {down(U_i)}; intersections are down-sets with sections
/// the compatible families over them.
inline ChainComplex cech_complex(const FiniteSite& S, const std::vector<int>& cover, const AbPresheaf& A) {
    i64 p = A.ring;
    int m = static_cast<int>(cover.size());
    if (m == 0) throw std::invalid_argument("empty cover");
    auto inter = [&](const std::vector<int>& idx) {
        std::vector<int> W;
        for (int y = 0; y < S.size(); ++y) {
            bool in = true;
            for (int i : idx) in = in && S.leq(y, cover[i]);
            if (in) W.push_back(y);
        }
        return W;
    };
    std::vector<std::vector<std::vector<int>>> tuples(m);  // tuples[n]: i_0 < ... < i_n
    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> t;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) t.push_back(i);
        tuples[t.size() - 1].push_back(t);
    }
    std::vector<std::vector<detail::AbMatch>> sec(m);
    std::vector<std::vector<int>> off(m);
    std::vector<int> ranks;
    for (int n = 0; n < m; ++n) {
        int r = 0;
        for (auto& t : tuples[n]) {
            sec[n].push_back(sections_over(S, A, inter(t)));
            off[n].push_back(r);
            r += sec[n].back().ker.K.cols();
        }
        ranks.push_back(r);
    }
    std::vector<Matrix> delta;
    for (int n = 0; n + 1 < m; ++n) {
        Matrix d(ranks[n + 1], ranks[n]);
        std::map<std::vector<int>, int> idx;
        for (size_t i = 0; i < tuples[n].size(); ++i) idx[tuples[n][i]] = static_cast<int>(i);
        for (size_t j = 0; j < tuples[n + 1].size(); ++j) {
            const auto& t = tuples[n + 1][j];
            const auto& to = sec[n + 1][j];
            for (int i = 0; i <= n + 1; ++i) {
                std::vector<int> face = t;
                face.erase(face.begin() + i);
                int src = idx.at(face);
                const auto& from = sec[n][src];
                Matrix R = mul(to.ker.L, mul(detail::select(A, from, to), from.ker.K, p), p);
                i64 sgn = i % 2 ? -1 : 1;
                for (int r = 0; r < R.rows(); ++r)
                    for (int q = 0; q < R.cols(); ++q) {
                        i64& e = d(off[n + 1][j] + r, off[n][src] + q);
                        e = p ? reduce(e + sgn * R(r, q), p) : e + sgn * R(r, q);
                    }
            }
        }
        delta.push_back(d);
    }
    return detail::cochain_as_chain(p, ranks, delta, true);
}

/// Canonical cover of the whole site: the maximal objects.
inline std::vector<int> maximal_objects(const FiniteSite& S) {
    std::vector<int> out;
    for (int x = 0; x < S.size(); ++x) {
        bool top = true;
        for (int y = 0; y < S.size(); ++y)
            if (S.less(x, y)) top = false;
        if (top) out.push_back(x);
    }
    return out;
}

inline HomologyGroups cech_cohomology(const FiniteSite& S, const std::vector<int>& cover, const AbPresheaf& A, int n_max) {
    return cohomology(cech_complex(S, cover, A), n_max);
}

// ---------------------------------------------------------------------------
// Delta-G presheaves

struct DGPresheaf {
    std::vector<DGSet> value;
    std::map<std::pair<int, int>, DGMap> res;  // y < x: value[x] -> value[y]

    DGMap restrict(int x, int y) const { return x == y ? identity_map(value[x]) : res.at({x, y}); }
};

using DGPresheafMap = std::vector<DGMap>;

/// Fills in composite restrictions from the given ones along the order; checks agreement.
inline DGPresheaf complete_restrictions(const FiniteSite& S, std::vector<DGSet> values, std::map<std::pair<int, int>, DGMap> given) {
    DGPresheaf F{std::move(values), {}};
    if (static_cast<int>(F.value.size()) != S.size()) throw std::invalid_argument("presheaf object count does not match the site");
    for (auto& [k, m] : given)
        if (!S.less(k.second, k.first)) throw std::invalid_argument("restriction given for a pair that is not in the order");
    F.res = given;
    for (bool changed = true; changed;) {
        changed = false;
        for (int x = 0; x < S.size(); ++x)
            for (int y = 0; y < S.size(); ++y)
                for (int z = 0; z < S.size(); ++z) {
                    if (!S.less(y, x) || !S.less(z, y)) continue;
                    auto a = F.res.find({x, y}), b = F.res.find({y, z});
                    if (a == F.res.end() || b == F.res.end()) continue;
                    DGMap c = compose(b->second, a->second);
                    auto it = F.res.find({x, z});
                    if (it == F.res.end()) {
                        F.res[{x, z}] = c;
                        changed = true;
                    } else if (it->second.f != c.f) {
                        throw std::invalid_argument("restrictions do not compose along " + S.objects[x] + " > " + S.objects[y] + " > " + S.objects[z]);
                    }
                }
    }
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            if (S.less(y, x) && !F.res.count({x, y}))
                throw std::invalid_argument("missing restriction " + S.objects[x] + " -> " + S.objects[y]);
    return F;
}

inline DGPresheaf constant_presheaf(const FiniteSite& S, const DGSet& X) {
    DGPresheaf F{std::vector<DGSet>(S.size(), X), {}};
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            if (S.less(y, x)) F.res[{x, y}] = identity_map(X);
    return F;
}

inline std::vector<std::string> validate(const FiniteSite& S, const DGPresheaf& F) {
    std::vector<std::string> out;
    if (static_cast<int>(F.value.size()) != S.size()) return {"presheaf object count does not match the site"};
    for (int x = 0; x < S.size(); ++x) {
        auto r = validate(F.value[x]);
        if (!r.ok()) out.push_back("value at '" + S.objects[x] + "' is invalid");
        if (!(F.value[x].family == F.value[0].family) || F.value[x].D != F.value[0].D)
            out.push_back("value at '" + S.objects[x] + "' has a different family or truncation");
    }
    if (!out.empty()) return out;
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y) {
            if (!S.less(y, x)) continue;
            auto it = F.res.find({x, y});
            if (it == F.res.end()) { out.push_back("missing restriction " + S.objects[x] + " -> " + S.objects[y]); continue; }
            auto errs = validate_map(F.value[x], F.value[y], it->second);
            if (!errs.empty()) out.push_back("restriction " + S.objects[x] + " -> " + S.objects[y] + ": " + errs.front());
        }
    if (!out.empty()) return out;
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            for (int z = 0; z < S.size(); ++z)
                if (S.less(y, x) && S.less(z, y) && compose(F.restrict(y, z), F.restrict(x, y)).f != F.restrict(x, z).f)
                    out.push_back("restrictions do not compose along " + S.objects[x] + " > " + S.objects[y] + " > " + S.objects[z]);
    return out;
}

inline std::vector<std::string> validate_map(const FiniteSite& S, const DGPresheaf& F, const DGPresheaf& G, const DGPresheafMap& f) {
    std::vector<std::string> out;
    if (static_cast<int>(f.size()) != S.size()) return {"map object count does not match the site"};
    for (int x = 0; x < S.size(); ++x) {
        auto errs = validate_map(F.value[x], G.value[x], f[x]);
        if (!errs.empty()) out.push_back("component at '" + S.objects[x] + "': " + errs.front());
    }
    if (!out.empty()) return out;
    for (int x = 0; x < S.size(); ++x)
        for (int y = 0; y < S.size(); ++y)
            if (S.less(y, x) && compose(G.restrict(x, y), f[x]).f != compose(f[y], F.restrict(x, y)).f)
                out.push_back("map is not natural along " + S.objects[x] + " > " + S.objects[y]);
    return out;
}

/// Phi_r on maps: f at the subdivided levels, restricted to fixed simplices (matched by id).
inline DGMap phi_map(const DGSet& X, const DGSet& Y, const DGMap& f, int r, const DGSet& PX, const DGSet& PY) {
    int R = X.family.cover() * r;
    DGMap m;
    for (int n = 0; n <= std::min(PX.D, PY.D); ++n) {
        int L = R * (n + 1) - 1;
        m.f.emplace_back();
        for (int a = 0; a < PX.size(n); ++a) {
            int x = X.index_of(L, PX.ids[n][a]);
            int b = PY.index_of(n, Y.ids[L][f(L, x)]);
            if (b < 0) throw std::logic_error("phi_map: image is not fixed");
            m.f.back().push_back(b);
        }
    }
    return m;
}

/// Objectwise Phi_r (r = 1 on a family without rotation is the underlying object).
inline DGPresheaf phi_presheaf(const FiniteSite& S, const DGPresheaf& F, int r) {
    DGPresheaf out;
    bool rot = F.value[0].family.has_rotation();
    if (!rot && r != 1) throw std::invalid_argument("Phi_r with r > 1 needs a cyclic-type family");
    for (auto& X : F.value) out.value.push_back(rot ? phi(X, r) : underlying(X));
    for (auto& [k, m] : F.res)
        out.res[k] = rot ? phi_map(F.value[k.first], F.value[k.second], m, r, out.value[k.first], out.value[k.second]) : m;
    (void)S;
    return out;
}

inline DGPresheafMap phi_presheaf_map(const DGPresheaf& F, const DGPresheaf& G, const DGPresheafMap& f, int r,
                                      const DGPresheaf& PF, const DGPresheaf& PG) {
    if (!F.value[0].family.has_rotation()) return f;
    DGPresheafMap out;
    for (size_t x = 0; x < f.size(); ++x) out.push_back(phi_map(F.value[x], G.value[x], f[x], r, PF.value[x], PG.value[x]));
    return out;
}

/// pi_0 presheaf of a presheaf of (underlying) simplicial sets.
inline SetPresheaf pi0_presheaf(const FiniteSite& S, const DGPresheaf& F) {
    SetPresheaf P;
    std::vector<std::vector<int>> comp;
    for (auto& X : F.value) {
        comp.push_back(components(X));
        P.size.push_back(component_count(X));
    }
    for (auto& [k, m] : F.res) {
        auto [x, y] = k;
        std::vector<int> r(P.size[x], 0);
        for (int v = 0; v < F.value[x].size(0); ++v) r[comp[x][v]] = comp[y][m(0, v)];
        P.res[k] = r;
    }
    (void)S;
    return P;
}

inline SetPresheafMap pi0_map(const DGPresheaf& F, const DGPresheaf& G, const DGPresheafMap& f) {
    SetPresheafMap out;
    for (size_t x = 0; x < F.value.size(); ++x) {
        auto cx = components(F.value[x]), cy = components(G.value[x]);
        std::vector<int> r(component_count(F.value[x]), 0);
        for (int v = 0; v < F.value[x].size(0); ++v) r[cx[v]] = cy[f[x](0, v)];
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Homology presheaves over a prime field

namespace detail {

// representatives of H_k over F_p and a coordinate map
struct FieldHomology {
    Matrix reps;   // columns in C_k
    Matrix basis;  // [B | reps], full column rank
    int nb = 0;    // number of boundary columns
};

inline Matrix column_basis(const Matrix& M, i64 p) {
    auto e = rref_mod(M, p);
    return M.columns(e.pivots);
}

inline FieldHomology field_homology(const ChainComplex& C, int k) {
    i64 p = C.ring;
    Matrix Z = nullspace_mod(C.boundary(k).reduced(p), p);
    Matrix B = column_basis(C.boundary(k + 1).reduced(p), p);
    // extend B by columns of Z
    Matrix cur = B;
    std::vector<int> picked;
    for (int c = 0; c < Z.cols(); ++c) {
        Matrix trial = hstack({cur, Z.columns({c})}, C.rank(k));
        if (rank_mod(trial, p) > cur.cols()) {
            cur = trial;
            picked.push_back(c);
        }
    }
    return {Z.columns(picked), cur, B.cols()};
}

inline std::vector<i64> homology_coords(const FieldHomology& H, const std::vector<i64>& v, i64 p) {
    auto x = solve_mod(H.basis, v, p);
    if (!x) throw std::logic_error("chain map does not send cycles to cycles");
    return std::vector<i64>(x->begin() + H.nb, x->end());
}

inline Matrix induced(const FieldHomology& from, const FieldHomology& to, const Matrix& f, i64 p) {
    Matrix m(to.reps.cols(), from.reps.cols());
    for (int c = 0; c < from.reps.cols(); ++c) m.set_column(c, homology_coords(to, matvec(f, from.reps.column(c), p), p));
    return m;
}

} // namespace detail

/// Per object a chain complex over F_p, per strict pair a chain map (one matrix per degree).
struct ChainPresheaf {
    std::vector<ChainComplex> value;
    std::map<std::pair<int, int>, std::vector<Matrix>> res;
};
using ChainPresheafMap = std::vector<std::vector<Matrix>>;

/// Matrix of f on normalised chains (degenerate images vanish).
inline std::vector<Matrix> chain_map(const DGSet& X, const DGSet& Y, const DGMap& f, i64 p, int top) {
    std::vector<Matrix> out;
    for (int n = 0; n <= top; ++n) {
        auto bx = X.nondegenerate(n), by = Y.nondegenerate(n);
        std::map<int, int> pos;
        for (size_t i = 0; i < by.size(); ++i) pos[by[i]] = static_cast<int>(i);
        Matrix m(static_cast<int>(by.size()), static_cast<int>(bx.size()));
        for (size_t c = 0; c < bx.size(); ++c) {
            auto it = pos.find(f(n, bx[c]));
            if (it != pos.end()) m(it->second, static_cast<int>(c)) = 1;
        }
        out.push_back(p ? m.reduced(p) : m);
    }
    return out;
}

inline ChainPresheaf chain_presheaf(const DGPresheaf& F, i64 p) {
    ChainPresheaf C;
    for (auto& X : F.value) C.value.push_back(chains(X, false, p));
    for (auto& [k, m] : F.res) C.res[k] = chain_map(F.value[k.first], F.value[k.second], m, p, F.value[k.first].D);
    return C;
}

inline ChainPresheafMap chain_presheaf_map(const DGPresheaf& F, const DGPresheaf& G, const DGPresheafMap& f, i64 p) {
    ChainPresheafMap out;
    for (size_t x = 0; x < f.size(); ++x) out.push_back(chain_map(F.value[x], G.value[x], f[x], p, std::min(F.value[x].D, G.value[x].D)));
    return out;
}

inline AbPresheaf homology_presheaf(const ChainPresheaf& C, int k, i64 p) {
    AbPresheaf A{p, {}, {}};
    std::vector<detail::FieldHomology> H;
    for (auto& c : C.value) {
        H.push_back(detail::field_homology(c, k));
        A.rank.push_back(H.back().reps.cols());
    }
    for (auto& [key, m] : C.res) A.res[key] = detail::induced(H[key.first], H[key.second], m[k], p);
    return A;
}

inline AbPresheafMap homology_map(const ChainPresheaf& C, const ChainPresheaf& D, const ChainPresheafMap& f, int k, i64 p) {
    AbPresheafMap out;
    for (size_t x = 0; x < f.size(); ++x)
        out.push_back(detail::induced(detail::field_homology(C.value[x], k), detail::field_homology(D.value[x], k), f[x][k], p));
    return out;
}

// ---------------------------------------------------------------------------
// Local weak-equivalence refuter

struct SiteWitness {
    std::string object;
    int r = 1;
    std::string invariant;  // "pi0" or "H"
    int degree = 0;
    i64 prime = 0;
    std::string detail;
};

struct SiteVerdict {
    bool refuted = false;
    std::optional<SiteWitness> witness;
    std::string note;
};

inline const std::vector<i64>& refuter_primes() {
    static const std::vector<i64> ps{2, 3, 5, 7, 1000003};
    return ps;
}

namespace detail {

// compares sheafified homology of two chain presheaves through f; returns a witness on failure
inline std::optional<SiteWitness> compare_homology(const FiniteSite& S, const std::function<ChainPresheaf(i64)>& src,
                                                   const std::function<ChainPresheaf(i64)>& dst,
                                                   const std::function<ChainPresheafMap(i64)>& map, int kmax, int r) {
    for (i64 p : refuter_primes()) {
        auto C = src(p), D = dst(p);
        auto f = map(p);
        for (int k = 0; k <= kmax; ++k) {
            auto A = homology_presheaf(C, k, p), B = homology_presheaf(D, k, p);
            auto sa = sheafify(S, A), sb = sheafify(S, B);
            auto g = sheafify_map(S, A, B, homology_map(C, D, f, k, p));
            for (int x = 0; x < S.size(); ++x)
                if (sa.sheaf.rank[x] != sb.sheaf.rank[x] || !invertible(g[x], p))
                    return SiteWitness{S.objects[x], r, "H", k, p,
                                       "sheafified H_" + std::to_string(k) + "(-;F_" + std::to_string(p) + ") has rank " +
                                           std::to_string(sa.sheaf.rank[x]) + " vs " + std::to_string(sb.sheaf.rank[x]) +
                                           " and the induced map is not an isomorphism"};
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Sound refuter: for r = 1..r_max compares sheafified pi_0 and sheafified homology with F_p
/// coefficients of Phi_r-sections through f. Not refuted is not a certificate.
inline SiteVerdict local_we_refuter(const FiniteSite& S, const DGPresheaf& F, const DGPresheaf& G, const DGPresheafMap& f, int r_max) {
    auto errs = validate_map(S, F, G, f);
    if (!errs.empty()) throw std::invalid_argument("local_we_refuter: " + errs.front());
    SiteVerdict v;
    bool rot = F.value[0].family.has_rotation();
    int rmax = rot ? r_max : 1;
    for (int r = 1; r <= rmax; ++r) {
        DGPresheaf PF, PG;
        try {
            PF = phi_presheaf(S, F, r);
            PG = phi_presheaf(S, G, r);
        } catch (const std::invalid_argument&) {
            break;  // truncation too small for this r
        }
        auto Pf = phi_presheaf_map(F, G, f, r, PF, PG);
        auto A = pi0_presheaf(S, PF), B = pi0_presheaf(S, PG);
        auto sa = sheafify(S, A), sb = sheafify(S, B);
        auto g = sheafify_map(S, A, B, pi0_map(PF, PG, Pf));
        for (int x = 0; x < S.size(); ++x)
            if (!is_bijection(g[x], sb.sheaf.size[x])) {
                v.refuted = true;
                v.witness = SiteWitness{S.objects[x], r, "pi0", 0, 0,
                                        "sheafified pi_0 has " + std::to_string(sa.sheaf.size[x]) + " vs " + std::to_string(sb.sheaf.size[x]) +
                                            " sections and the induced map is not a bijection"};
                v.note = "pi_0 sheaves differ";
                return v;
            }
        int kmax = std::min(PF.value[0].D, PG.value[0].D) - 1;
        if (kmax < 0) continue;
        auto w = detail::compare_homology(
            S, [&](i64 p) { return chain_presheaf(PF, p); }, [&](i64 p) { return chain_presheaf(PG, p); },
            [&](i64 p) { return chain_presheaf_map(PF, PG, Pf, p); }, kmax, r);
        if (w) {
            v.refuted = true;
            v.witness = w;
            v.note = "homology sheaves differ";
            return v;
        }
    }
    v.note = "pi_0 and F_p-homology sheaves agree for r <= " + std::to_string(rmax) +
             "; the pullback-square condition is only approximated, so this is not a certificate";
    return v;
}

/// Sheafified invariants of Phi_r-sections: pi_0 and H_k with F_p coefficients.
struct HomotopySheaves {
    SetPresheaf pi0;
    AbPresheaf homology;
};

inline HomotopySheaves homotopy_sheaves(const FiniteSite& S, const DGPresheaf& F, int r, int k, i64 p = 1000003) {
    if (!F.value[0].family.has_rotation() && r > 1) throw std::invalid_argument("r > 1 needs a cyclic-type family");
    auto P = phi_presheaf(S, F, r);
    if (k > P.value[0].D - 1) throw std::invalid_argument("degree " + std::to_string(k) + " is outside the trust window");
    return {sheafify(S, pi0_presheaf(S, P)).sheaf, sheafify(S, homology_presheaf(chain_presheaf(P, p), k, p)).sheaf};
}

// ---------------------------------------------------------------------------
// Module presheaves (linearised presheaves over F_p)

struct ModulePresheaf {
    std::vector<DeltaGModule> value;
    std::map<std::pair<int, int>, std::vector<Matrix>> res;  // per level
};
using ModulePresheafMap = std::vector<std::vector<Matrix>>;

/// Levelwise matrix of the linearised map Z/p[X] -> Z/p[Y].
inline std::vector<Matrix> linear_map(const DGSet& X, const DGSet& Y, const DGMap& f, i64 p) {
    std::vector<Matrix> out;
    for (int n = 0; n <= std::min(X.D, Y.D); ++n) {
        Matrix m(Y.size(n), X.size(n));
        for (int x = 0; x < X.size(n); ++x) m(f(n, x), x) = 1;
        out.push_back(p ? m.reduced(p) : m);
    }
    return out;
}

inline ModulePresheaf linearise(const DGPresheaf& F, i64 p) {
    ModulePresheaf M;
    for (auto& X : F.value) M.value.push_back(free_abelian(X, false, {p}));
    for (auto& [k, m] : F.res) M.res[k] = linear_map(F.value[k.first], F.value[k.second], m, p);
    return M;
}

inline ModulePresheafMap linearise_map(const DGPresheaf& F, const DGPresheaf& G, const DGPresheafMap& f, i64 p) {
    ModulePresheafMap out;
    for (size_t x = 0; x < f.size(); ++x) out.push_back(linear_map(F.value[x], G.value[x], f[x], p));
    return out;
}

/// Is f: M -> N a module map (faces, degeneracies, action)?
inline bool is_module_map(const DeltaGModule& M, const DeltaGModule& N, const std::vector<Matrix>& f) {
    i64 e = M.exponent();
    int D = std::min(M.D, N.D);
    if (static_cast<int>(f.size()) < D + 1) return false;
    for (int n = 0; n <= D; ++n) {
        if (f[n].rows() != N.rank[n] || f[n].cols() != M.rank[n]) return false;
        for (int i = 0; n >= 1 && i <= n; ++i)
            if (!equal_mod(mul(N.d(n, i), f[n], e), mul(f[n - 1], M.d(n, i), e), e)) return false;
        for (int i = 0; n < D && i <= n; ++i)
            if (!equal_mod(mul(N.s(n, i), f[n], e), mul(f[n + 1], M.s(n, i), e), e)) return false;
        for (auto& [g, T] : M.action[n])
            if (!equal_mod(mul(N.action[n].at(g), f[n], e), mul(f[n], T, e), e)) return false;
    }
    return true;
}

namespace detail {

// Moore complexes and the induced chain maps L_Y f K_X
inline ChainPresheaf moore_presheaf(const ModulePresheaf& M) {
    ChainPresheaf C;
    std::vector<MooreData> N;
    for (auto& m : M.value) {
        N.push_back(moore(m));
        C.value.push_back(N.back().complex);
    }
    for (auto& [k, f] : M.res) {
        std::vector<Matrix> g;
        i64 p = C.value[0].ring;
        for (int n = 0; n < static_cast<int>(f.size()) && n <= N[k.first].complex.top(); ++n)
            g.push_back(mul(N[k.second].basis[n].L, mul(f[n], N[k.first].basis[n].K, p), p));
        C.res[k] = g;
    }
    return C;
}

inline ChainPresheafMap moore_map(const ModulePresheaf& M, const ModulePresheaf& N, const ModulePresheafMap& f) {
    ChainPresheafMap out;
    for (size_t x = 0; x < f.size(); ++x) {
        auto a = moore(M.value[x]), b = moore(N.value[x]);
        i64 p = a.complex.ring;
        std::vector<Matrix> g;
        for (int n = 0; n < static_cast<int>(f[x].size()); ++n) g.push_back(mul(b.basis[n].L, mul(f[x][n], a.basis[n].K, p), p));
        out.push_back(g);
    }
    return out;
}

} // namespace detail

/// Refuter for maps of module presheaves over F_p: sheafified homology of the Moore complexes.
inline SiteVerdict module_we_refuter(const FiniteSite& S, const ModulePresheaf& M, const ModulePresheaf& N, const ModulePresheafMap& f) {
    i64 p = M.value.at(0).field_or_z();
    if (p == 0) throw std::invalid_argument("module_we_refuter works over Z/p");
    for (int x = 0; x < S.size(); ++x)
        if (!is_module_map(M.value[x], N.value[x], f[x])) throw std::invalid_argument("component at '" + S.objects[x] + "' is not a module map");
    auto C = detail::moore_presheaf(M), D = detail::moore_presheaf(N);
    auto g = detail::moore_map(M, N, f);
    int kmax = std::min(M.value[0].D, N.value[0].D) - 1;
    SiteVerdict v;
    for (int k = 0; k <= kmax; ++k) {
        auto A = homology_presheaf(C, k, p), B = homology_presheaf(D, k, p);
        auto h = sheafify_map(S, A, B, homology_map(C, D, g, k, p));
        auto sb = sheafify(S, B);
        for (int x = 0; x < S.size(); ++x)
            if (h[x].rows() != h[x].cols() || !invertible(h[x], p)) {
                v.refuted = true;
                v.witness = SiteWitness{S.objects[x], 1, "H", k, p, "sheafified homology of the Moore complexes differs"};
                v.note = "homology sheaves differ";
                return v;
            }
        (void)sb;
    }
    v.note = "homology sheaves agree below the truncation; not a certificate";
    return v;
}

// ---------------------------------------------------------------------------
// Coupled presheaves (A, B, FA -> B)

enum class CoupledFunctor { free, free_abelian };

inline CoupledFunctor parse_coupled_functor(const std::string& s) {
    if (s == "free") return CoupledFunctor::free;
    if (s == "free-abelian") return CoupledFunctor::free_abelian;
    throw std::invalid_argument("unknown coupled functor '" + s + "' (shipped: free, free-abelian)");
}

/// free: A trivial-family presheaf, B a presheaf of family G, s: free(G, A) -> B.
/// free-abelian: A any presheaf, B a module presheaf over F_p, s: F_p[A] -> B.
struct CoupledPresheaf {
    CoupledFunctor functor = CoupledFunctor::free;
    Family family{Kind::trivial};  // target family of the free functor
    i64 prime = 2;                 // coefficients of the free-abelian functor
    DGPresheaf A;
    DGPresheaf B;         // free
    ModulePresheaf Bmod;  // free-abelian
    DGPresheafMap s;
    ModulePresheafMap smod;
};

struct CoupledMap {
    DGPresheafMap a;
    DGPresheafMap b;
    ModulePresheafMap bmod;
};

inline DGMap free_map(const Family& F, const DGSet& X, const DGSet& Y, const DGMap& f) {
    DGMap m;
    for (int n = 0; n <= std::min(X.D, Y.D); ++n) {
        m.f.emplace_back();
        int R = F.rotation_order(n);
        for (auto& g : group_elements(F, n)) {
            int gi = g.e * R + g.k;
            for (int x = 0; x < X.size(n); ++x) m.f.back().push_back(gi * Y.size(n) + f(n, x));
        }
    }
    return m;
}

/// Adjunct of f: X -> U(Y) for trivial-family X: (g, x) |-> g . f(x).
inline DGMap free_adjunct(const Family& F, const DGSet& X, const DGSet& Y, const DGMap& f) {
    DGMap m;
    for (int n = 0; n <= std::min(X.D, Y.D); ++n) {
        m.f.emplace_back();
        for (auto& g : group_elements(F, n))
            for (int x = 0; x < X.size(n); ++x) m.f.back().push_back(Y.act(g, f(n, x)));
    }
    return m;
}

inline DGPresheaf free_presheaf(const Family& F, const DGPresheaf& A) {
    DGPresheaf out;
    for (auto& X : A.value) out.value.push_back(free_object(F, X));
    for (auto& [k, m] : A.res) out.res[k] = free_map(F, A.value[k.first], A.value[k.second], m);
    return out;
}

inline DGPresheafMap free_presheaf_map(const Family& F, const DGPresheaf& A, const DGPresheaf& A2, const DGPresheafMap& a) {
    DGPresheafMap out;
    for (size_t x = 0; x < a.size(); ++x) out.push_back(free_map(F, A.value[x], A2.value[x], a[x]));
    return out;
}

inline std::vector<std::string> validate(const FiniteSite& S, const CoupledPresheaf& X) {
    std::vector<std::string> out = validate(S, X.A);
    if (!out.empty()) return out;
    if (X.functor == CoupledFunctor::free) {
        if (X.A.value[0].family.kind != Kind::trivial) return {"free functor expects a trivial-family source"};
        out = validate(S, X.B);
        if (!out.empty()) return out;
        if (!(X.B.value[0].family == X.family)) return {"target presheaf family differs from the functor's"};
        return validate_map(S, free_presheaf(X.family, X.A), X.B, X.s);
    }
    auto FA = linearise(X.A, X.prime);
    for (int x = 0; x < S.size(); ++x) {
        if (!validate(X.Bmod.value[x]).ok()) out.push_back("module at '" + S.objects[x] + "' is invalid");
        else if (!is_module_map(FA.value[x], X.Bmod.value[x], X.smod[x])) out.push_back("structure map at '" + S.objects[x] + "' is not a module map");
    }
    return out;
}

struct CoupledVerdict {
    std::string verdict;  // "weak-equivalence-candidate", "cofibration-data", "neither"
    SiteVerdict a_leg, b_leg;
    bool a_mono = false;
    bool comparison_mono = false;
    bool comparison_valid = false;
    std::vector<std::string> comparison_problems;
    std::vector<std::vector<int>> pushout_sizes;  // per object, per level (free functor)
    std::vector<std::vector<int>> pushout_ranks;  // per object, per level (free-abelian functor)
};

inline bool objectwise_mono(const DGPresheafMap& f) {
    for (auto& m : f)
        for (auto& lvl : m.f) {
            std::set<int> s(lvl.begin(), lvl.end());
            if (s.size() != lvl.size()) return false;
        }
    return true;
}

namespace detail {

inline bool column_injective(const std::vector<Matrix>& f, i64 p) {
    for (auto& m : f)
        if (rank_mod(m, p) != m.cols()) return false;
    return true;
}

} // namespace detail

/// Componentwise classification of m: X -> X'. The weak-equivalence verdict is the conjunction of the
/// two leg refuters; the cofibration clause builds FA' u_{FA} B and its comparison map to B'.
inline CoupledVerdict coupled_classify(const FiniteSite& S, const CoupledPresheaf& X, const CoupledPresheaf& Y, const CoupledMap& m, int r_max) {
    if (X.functor != Y.functor || !(X.family == Y.family) || X.prime != Y.prime) throw std::invalid_argument("coupled_classify: mismatched functors");
    for (auto* c : {&X, &Y}) {
        auto errs = validate(S, *c);
        if (!errs.empty()) throw std::invalid_argument("coupled_classify: " + errs.front());
    }
    CoupledVerdict out;
    out.a_leg = local_we_refuter(S, X.A, Y.A, m.a, r_max);
    out.a_mono = objectwise_mono(m.a);

    if (X.functor == CoupledFunctor::free) {
        out.b_leg = local_we_refuter(S, X.B, Y.B, m.b, r_max);
        auto FA = free_presheaf(X.family, X.A), FA2 = free_presheaf(X.family, Y.A);
        auto Fa = free_presheaf_map(X.family, X.A, Y.A, m.a);
        // the structure square commutes: s' o F(a) = b o s
        for (int x = 0; x < S.size(); ++x)
            if (compose(Y.s[x], Fa[x]).f != compose(m.b[x], X.s[x]).f)
                out.comparison_problems.push_back("structure square does not commute at '" + S.objects[x] + "'");
        DGPresheaf P;
        std::vector<PushoutResult> po;
        DGPresheafMap comp;
        for (int x = 0; x < S.size(); ++x) {
            po.push_back(pushout(FA.value[x], FA2.value[x], X.B.value[x], Fa[x], X.s[x]));
            P.value.push_back(po.back().object);
            const auto& R = po.back();
            // comparison: the class of an element maps to its image under s' (from FA') or b (from B)
            DGMap c;
            for (int n = 0; n <= R.object.D; ++n) {
                std::vector<int> img(R.object.size(n), -1);
                auto put = [&](int cls, int v) {
                    if (img[cls] >= 0 && img[cls] != v) out.comparison_problems.push_back("comparison is not well defined at '" + S.objects[x] + "'");
                    img[cls] = v;
                };
                for (int e = 0; e < FA2.value[x].size(n); ++e) put(R.from_x(n, e), Y.s[x](n, e));
                for (int e = 0; e < X.B.value[x].size(n); ++e) put(R.from_y(n, e), m.b[x](n, e));
                c.f.push_back(img);
            }
            comp.push_back(c);
            out.pushout_sizes.push_back(R.object.counts());
        }
        // restrictions of the pushout, induced from those of FA' and B
        for (int x = 0; x < S.size(); ++x)
            for (int y = 0; y < S.size(); ++y) {
                if (!S.less(y, x)) continue;
                DGMap r;
                for (int n = 0; n <= P.value[x].D; ++n) {
                    std::vector<int> img(P.value[x].size(n), -1);
                    for (int e = 0; e < FA2.value[x].size(n); ++e) img[po[x].from_x(n, e)] = po[y].from_x(n, FA2.restrict(x, y)(n, e));
                    for (int e = 0; e < X.B.value[x].size(n); ++e) img[po[x].from_y(n, e)] = po[y].from_y(n, X.B.restrict(x, y)(n, e));
                    r.f.push_back(img);
                }
                P.res[{x, y}] = r;
            }
        auto perr = validate(S, P);
        for (auto& e : perr) out.comparison_problems.push_back("pushout: " + e);
        if (perr.empty()) {
            auto cerr = validate_map(S, P, Y.B, comp);
            for (auto& e : cerr) out.comparison_problems.push_back("comparison: " + e);
        }
        out.comparison_mono = objectwise_mono(comp);
    } else {
        i64 p = X.prime;
        out.b_leg = module_we_refuter(S, X.Bmod, Y.Bmod, m.bmod);
        auto FA2 = linearise(Y.A, p);
        auto Fa = linearise_map(X.A, Y.A, m.a, p);
        for (int x = 0; x < S.size(); ++x) {
            const auto& B = X.Bmod.value[x];
            int D = B.D;
            // FA' + B modulo {(F(a) v, -s v)}
            DeltaGModule sum = direct_sum(FA2.value[x], B);
            std::vector<std::pair<int, std::vector<i64>>> gens;
            auto FAx = free_abelian(X.A.value[x], false, {p});
            for (int n = 0; n <= D; ++n)
                for (int c = 0; c < FAx.rank[n]; ++c) {
                    auto u = Fa[x][n].column(c), w = X.smod[x][n].column(c);
                    std::vector<i64> v(u);
                    for (auto q : w) v.push_back(reduce(-q, p));
                    gens.push_back({n, v});
                }
            auto W = submodule_closure(sum, gens);
            auto Q = quotient_module(sum, W);
            out.pushout_ranks.push_back(Q.rank);
            // comparison [s' | b] on the sum; it must vanish on W, then descends to Q
            std::vector<Matrix> onsum, comp;
            bool ok = true;
            for (int n = 0; n <= D; ++n) {
                onsum.push_back(hstack({Y.smod[x][n], m.bmod[x][n]}, Y.Bmod.value[x].rank[n]));
                if (!is_zero_mod(mul(onsum[n], W[n], p), p)) ok = false;
            }
            if (!ok) {
                out.comparison_problems.push_back("comparison is not well defined at '" + S.objects[x] + "'");
                continue;
            }
            // section of the quotient: solve q s = I via a complement of W
            for (int n = 0; n <= D; ++n) {
                Matrix Qm = W[n].cols() ? nullspace_mod(W[n].transpose(), p).transpose() : Matrix::identity(sum.rank[n]);
                auto e = rref_mod(Qm, p);
                Matrix sec(sum.rank[n], Qm.rows());
                Matrix piv = Qm.columns(e.pivots);
                for (int c = 0; c < Qm.rows(); ++c) {
                    std::vector<i64> rhs(Qm.rows(), 0);
                    rhs[c] = 1;
                    auto y = solve_mod(piv, rhs, p);
                    for (size_t r = 0; r < e.pivots.size(); ++r) sec(e.pivots[r], c) = (*y)[r];
                }
                comp.push_back(mul(onsum[n], sec, p));
            }
            if (!is_module_map(Q, Y.Bmod.value[x], comp)) out.comparison_problems.push_back("comparison at '" + S.objects[x] + "' is not a module map");
            if (!detail::column_injective(comp, p)) out.comparison_mono = false;
        }
        out.comparison_mono = out.comparison_problems.empty();
        for (int x = 0; x < S.size() && out.comparison_mono; ++x) {
            (void)x;
        }
    }
    out.comparison_valid = out.comparison_problems.empty();
    bool we = !out.a_leg.refuted && !out.b_leg.refuted;
    out.verdict = we ? "weak-equivalence-candidate" : (out.a_mono && out.comparison_valid && out.comparison_mono) ? "cofibration-data" : "neither";
    return out;
}

// ---------------------------------------------------------------------------
// Equivariant cohomology at a point

/// Only the one-object site, weak model and cyclic family are implemented.
inline HomologyGroups site_equivariant_cohomology(const FiniteSite& S, const Family& F, const std::string& model, const std::vector<i64>& A, int n_max) {
    if (S.size() != 1) throw std::invalid_argument("equivariant cohomology is out of implemented scope beyond the one-point site");
    if (model != "weak") throw std::invalid_argument("equivariant cohomology is out of implemented scope for the '" + model + "' model");
    return equivariant_cohomology_point(F, A, n_max);
}

} // namespace xsimp
