#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgset.hpp"
#include "matrix.hpp"
#include "smith.hpp"

namespace xsimp {

/// Finitely generated abelian group Z^rank + sum Z/q with q > 1 in invariant-factor order.
struct AbelianGroup {
    int rank = 0;
    std::vector<i64> torsion;

    bool is_zero() const { return rank == 0 && torsion.empty(); }
    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.rank == b.rank && a.torsion == b.torsion; }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        auto add = [&](const std::string& t) { s += (s.empty() ? "" : "+") + t; };
        if (rank == 1) add("Z");
        else if (rank > 1) add("Z^" + std::to_string(rank));
        for (i64 q : torsion) add("Z/" + std::to_string(q));
        return s;
    }
};

namespace detail {

inline std::vector<std::pair<i64, int>> factor(i64 q) {
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p * p <= q; ++p) {
        int e = 0;
        while (q % p == 0) { q /= p; ++e; }
        if (e) out.push_back({p, e});
    }
    if (q > 1) out.push_back({q, 1});
    return out;
}

} // namespace detail

/// Rewrites an arbitrary list of cyclic orders (0 = Z, 1 = trivial) into invariant-factor form.
inline AbelianGroup abelian_from_cyclics(const std::vector<i64>& orders) {
    AbelianGroup g;
    std::map<i64, std::vector<i64>> prime_powers;
    for (i64 q : orders) {
        if (q < 0) throw std::invalid_argument("negative cyclic order");
        if (q == 0) { ++g.rank; continue; }
        for (auto [p, e] : detail::factor(q)) {
            i64 pe = 1;
            for (int i = 0; i < e; ++i) pe *= p;
            prime_powers[p].push_back(pe);
        }
    }
    size_t len = 0;
    for (auto& [p, v] : prime_powers) {
        std::sort(v.begin(), v.end(), std::greater<>());
        len = std::max(len, v.size());
    }
    // largest invariant factor collects the largest power of each prime
    std::vector<i64> inv(len, 1);
    for (auto& [p, v] : prime_powers)
        for (size_t i = 0; i < v.size(); ++i) inv[len - 1 - i] = checked_mul(inv[len - 1 - i], v[i]);
    for (i64 q : inv)
        if (q > 1) g.torsion.push_back(q);
    return g;
}

inline AbelianGroup abelian_from_cyclics(const AbelianGroup& g) {
    std::vector<i64> o(g.rank, 0);
    o.insert(o.end(), g.torsion.begin(), g.torsion.end());
    return abelian_from_cyclics(o);
}

/// Coefficient group given as a list of cyclic orders, 0 meaning Z (e.g. {0} = Z, {2} = Z/2).
inline AbelianGroup coefficient_group(const std::vector<i64>& A) { return abelian_from_cyclics(A); }

// bilinear functors on cyclic groups (0 = Z)
inline i64 tensor_cyclic(i64 a, i64 b) { return a == 0 ? b : b == 0 ? a : std::gcd(a, b); }
inline i64 tor_cyclic(i64 a, i64 b) { return (a == 0 || b == 0) ? 1 : std::gcd(a, b); }
inline i64 hom_cyclic(i64 a, i64 b) {
    if (a == 0) return b;
    if (b == 0) return 1;
    return std::gcd(a, b);
}
inline i64 ext_cyclic(i64 a, i64 b) {
    if (a == 0) return 1;
    if (b == 0) return a;
    return std::gcd(a, b);
}

namespace detail {

inline std::vector<i64> cyclics(const AbelianGroup& g) {
    std::vector<i64> o(g.rank, 0);
    o.insert(o.end(), g.torsion.begin(), g.torsion.end());
    return o;
}

template <class F>
AbelianGroup bilinear(const AbelianGroup& x, const AbelianGroup& y, F f) {
    std::vector<i64> out;
    for (i64 a : cyclics(x))
        for (i64 b : cyclics(y)) out.push_back(f(a, b));
    return abelian_from_cyclics(out);
}

inline AbelianGroup direct_sum(const AbelianGroup& x, const AbelianGroup& y) {
    auto o = cyclics(x);
    auto o2 = cyclics(y);
    o.insert(o.end(), o2.begin(), o2.end());
    return abelian_from_cyclics(o);
}

} // namespace detail

inline AbelianGroup tensor(const AbelianGroup& x, const AbelianGroup& y) { return detail::bilinear(x, y, tensor_cyclic); }
inline AbelianGroup tor(const AbelianGroup& x, const AbelianGroup& y) { return detail::bilinear(x, y, tor_cyclic); }
inline AbelianGroup hom(const AbelianGroup& x, const AbelianGroup& y) { return detail::bilinear(x, y, hom_cyclic); }
inline AbelianGroup ext(const AbelianGroup& x, const AbelianGroup& y) { return detail::bilinear(x, y, ext_cyclic); }

/// Free chain complex over Z (ring == 0) or Z/p. d[n] has shape ranks[n-1] x ranks[n]; d[0] is 0 x ranks[0].
struct ChainComplex {
    i64 ring = 0;
    std::vector<int> ranks;
    std::vector<Matrix> d;
    bool bounded = false;  // true when the complex is genuinely zero above top()

    int top() const { return static_cast<int>(ranks.size()) - 1; }
    int rank(int n) const { return n >= 0 && n <= top() ? ranks[n] : 0; }

    // boundary out of degree n; zero outside the stored range
    Matrix boundary(int n) const {
        if (n >= 1 && n <= top()) return d[n];
        return Matrix(rank(n - 1), rank(n));
    }

    static ChainComplex make(i64 ring, std::vector<int> ranks, std::vector<Matrix> boundaries, bool bounded = false) {
        if (ring != 0 && !is_prime(ring)) throw std::invalid_argument("chain complexes are over Z or Z/p with p prime");
        ChainComplex C{ring, std::move(ranks), {}, bounded};
        if (boundaries.size() + 1 == C.ranks.size()) boundaries.insert(boundaries.begin(), Matrix(0, C.ranks.empty() ? 0 : C.ranks[0]));
        if (boundaries.size() != C.ranks.size()) throw std::invalid_argument("boundary count does not match degree count");
        C.d = std::move(boundaries);
        C.check();
        return C;
    }

    void check() const {
        for (int n = 1; n <= top(); ++n) {
            if (d[n].rows() != ranks[n - 1] || d[n].cols() != ranks[n])
                throw std::invalid_argument("boundary shape mismatch in degree " + std::to_string(n));
            if (n >= 2 && !is_zero_mod(mul(d[n - 1], d[n], ring), ring))
                throw std::invalid_argument("boundary does not square to zero at degree " + std::to_string(n));
        }
    }

    bool trusted(int k) const { return bounded || k + 1 <= top(); }
};

struct HomologyDegree {
    int degree = 0;
    AbelianGroup group;
    bool trusted = true;
};

struct HomologyGroups {
    std::vector<HomologyDegree> degrees;

    const AbelianGroup& operator[](int k) const { return degrees.at(k).group; }
    int size() const { return static_cast<int>(degrees.size()); }

    std::vector<AbelianGroup> groups() const {
        std::vector<AbelianGroup> g;
        for (auto& d : degrees) g.push_back(d.group);
        return g;
    }
    // groups restricted to trusted degrees
    std::vector<AbelianGroup> trusted_groups() const {
        std::vector<AbelianGroup> g;
        for (auto& d : degrees)
            if (d.trusted) g.push_back(d.group);
        return g;
    }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < degrees.size(); ++i) s += (i ? ", " : "") + degrees[i].group.str() + (degrees[i].trusted ? "" : "?");
        return s + ")";
    }
};

namespace detail {

inline int rank_in(const Matrix& M, i64 ring) {
    if (M.empty()) return 0;
    return rank_over(M, ring);
}

inline std::vector<i64> torsion_of(const Matrix& M, i64 ring) {
    std::vector<i64> t;
    if (ring != 0 || M.empty()) return t;
    for (i64 v : invariant_factors(M))
        if (v > 1) t.push_back(v);
    return t;
}

} // namespace detail

/// H_0..H_{n_max}: rank = dim C_n - rk d_n - rk d_{n+1}, torsion from the invariant factors of d_{n+1}.
inline HomologyGroups homology(const ChainComplex& C, int n_max) {
    HomologyGroups H;
    std::vector<int> rk(std::max(n_max, C.top()) + 3, 0);
    for (int n = 1; n < static_cast<int>(rk.size()); ++n) rk[n] = detail::rank_in(C.boundary(n), C.ring);
    for (int n = 0; n <= n_max; ++n) {
        HomologyDegree h;
        h.degree = n;
        h.group.rank = C.rank(n) - rk[n] - rk[n + 1];
        h.group.torsion = detail::torsion_of(C.boundary(n + 1), C.ring);
        h.trusted = C.trusted(n);
        H.degrees.push_back(h);
    }
    return H;
}

/// H^0..H^{n_max} of the dual cochain complex Hom(C, R).
inline HomologyGroups cohomology(const ChainComplex& C, int n_max) {
    HomologyGroups H;
    for (int n = 0; n <= n_max; ++n) {
        HomologyDegree h;
        h.degree = n;
        Matrix delta_out = C.boundary(n + 1).transpose();  // C^n -> C^{n+1}
        Matrix delta_in = C.boundary(n).transpose();       // C^{n-1} -> C^n
        h.group.rank = C.rank(n) - detail::rank_in(delta_out, C.ring) - detail::rank_in(delta_in, C.ring);
        h.group.torsion = detail::torsion_of(delta_in, C.ring);
        h.trusted = C.trusted(n);
        H.degrees.push_back(h);
    }
    return H;
}

/// Homology with coefficients in A by universal coefficients (C over Z).
inline HomologyGroups homology(const ChainComplex& C, int n_max, const AbelianGroup& A) {
    if (C.ring != 0) throw std::invalid_argument("coefficient change needs an integral complex");
    auto Hz = homology(C, n_max);
    HomologyGroups H;
    for (int n = 0; n <= n_max; ++n) {
        AbelianGroup g = tensor(Hz[n], A);
        if (n >= 1) g = detail::direct_sum(g, tor(Hz[n - 1], A));
        H.degrees.push_back({n, g, Hz.degrees[n].trusted && (n == 0 || Hz.degrees[n - 1].trusted)});
    }
    return H;
}

/// Cohomology with coefficients in A: Hom(H_n, A) + Ext(H_{n-1}, A).
inline HomologyGroups cohomology(const ChainComplex& C, int n_max, const AbelianGroup& A) {
    if (C.ring != 0) throw std::invalid_argument("coefficient change needs an integral complex");
    auto Hz = homology(C, n_max);
    HomologyGroups H;
    for (int n = 0; n <= n_max; ++n) {
        AbelianGroup g = hom(Hz[n], A);
        if (n >= 1) g = detail::direct_sum(g, ext(Hz[n - 1], A));
        H.degrees.push_back({n, g, Hz.degrees[n].trusted});
    }
    return H;
}

/// Normalised chains on nondegenerate simplices; reduced means relative to the basepoint sub-object.
inline ChainComplex chains(const DGSet& X, bool reduced = false, i64 ring = 0) {
    if (reduced && !X.basepoint) throw std::invalid_argument("reduced chains need a pointed object");
    std::vector<std::vector<int>> basis(X.D + 1);
    std::vector<std::map<int, int>> pos(X.D + 1);
    SubObject B = basepoint_subobject(X);
    for (int n = 0; n <= X.D; ++n) {
        for (int x : X.nondegenerate(n)) {
            if (reduced && B[n][x]) continue;
            pos[n][x] = static_cast<int>(basis[n].size());
            basis[n].push_back(x);
        }
    }
    std::vector<int> ranks;
    std::vector<Matrix> ds;
    for (int n = 0; n <= X.D; ++n) {
        ranks.push_back(static_cast<int>(basis[n].size()));
        if (n == 0) { ds.emplace_back(0, ranks[0]); continue; }
        Matrix M(ranks[n - 1], ranks[n]);
        for (int c = 0; c < ranks[n]; ++c)
            for (int i = 0; i <= n; ++i) {
                auto it = pos[n - 1].find(X.face(n, basis[n][c], i));
                if (it == pos[n - 1].end()) continue;
                M(it->second, c) = reduce(M(it->second, c) + (i % 2 ? -1 : 1), ring);
            }
        ds.push_back(M);
    }
    return ChainComplex::make(ring, ranks, ds, false);
}

/// Reduced-or-not integral homology of the underlying simplicial set.
inline HomologyGroups simplicial_homology(const DGSet& X, int n_max = -1, bool reduced = false) {
    return homology(chains(X, reduced), n_max < 0 ? X.D : n_max);
}

/// H_k(X) =~ H_k(Y) on the degrees trusted for both.
inline bool homology_agrees(const HomologyGroups& a, const HomologyGroups& b) {
    int n = std::min(a.size(), b.size());
    for (int k = 0; k < n; ++k)
        if (a.degrees[k].trusted && b.degrees[k].trusted && !(a[k] == b[k])) return false;
    return true;
}

} // namespace xsimp
