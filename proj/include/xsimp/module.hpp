#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "chain.hpp"
#include "dgset.hpp"
#include "matrix.hpp"
#include "smith.hpp"

namespace xsimp {

/// Delta-G object in modules: level n is A^{rank[n]} with A = sum of Z/q (q = 0 meaning Z),
/// and every structure map is an integer matrix acting diagonally on the A summands.
struct DeltaGModule {
    Family family;
    int D = 0;
    std::vector<i64> coeff{0};
    std::vector<int> rank;
    std::vector<std::vector<Matrix>> face;         // face[n][i]: rank[n-1] x rank[n]
    std::vector<std::vector<Matrix>> degen;        // degen[n][i]: rank[n+1] x rank[n]
    std::vector<std::map<std::string, Matrix>> action;

    DeltaGModule() = default;
    DeltaGModule(Family f, int truncation, std::vector<i64> A, std::vector<int> ranks)
        : family(f), D(truncation), coeff(std::move(A)), rank(std::move(ranks)) {
        if (static_cast<int>(rank.size()) != D + 1) throw std::invalid_argument("rank list does not match truncation");
        face.resize(D + 1);
        degen.resize(D + 1);
        action.resize(D + 1);
    }

    /// Ring the matrices live over: 0 if any summand is Z, else the lcm of the orders.
    i64 exponent() const {
        i64 e = 1;
        for (i64 q : coeff) {
            if (q == 0) return 0;
            e = std::lcm(e, q);
        }
        return e;
    }

    /// Z or Z/p when the coefficients are a single such summand; throws otherwise.
    i64 field_or_z() const {
        if (coeff.size() == 1 && (coeff[0] == 0 || is_prime(coeff[0]))) return coeff[0];
        throw std::invalid_argument("operation needs coefficients Z or Z/p");
    }

    const Matrix& d(int n, int i) const { return face[n][i]; }
    const Matrix& s(int n, int i) const { return degen[n][i]; }

    // matrix of a^k b^e at level n (reflection first)
    Matrix act(const GroupElement& g) const {
        int n = g.n;
        i64 m = exponent();
        Matrix r = Matrix::identity(rank[n]);
        if (g.e) r = action[n].at(family.kind == Kind::quaternionic ? "b" : "w");
        for (int s = 0; s < g.k; ++s) r = mul(action[n].at("t"), r, m);
        return r;
    }
};

namespace detail {

inline Matrix face_composite(const DeltaGModule& M, int n, const SimplicialOperator& mono) {
    // mono: [m] -> [n] injective; mono^* = product of faces
    i64 e = M.exponent();
    Matrix r = Matrix::identity(M.rank[n]);
    SimplicialOperator cur = mono;
    int lvl = n;
    while (cur.m < lvl) {
        int i = 0;
        while (std::find(cur.img.begin(), cur.img.end(), i) != cur.img.end()) ++i;
        // cur = delta_i o cur'
        std::vector<int> v;
        for (int x : cur.img) v.push_back(x > i ? x - 1 : x);
        r = mul(M.d(lvl, i), r, e);
        cur = SimplicialOperator(lvl - 1, v);
        --lvl;
    }
    return r;
}

inline Matrix degen_composite(const DeltaGModule& M, int k, const SimplicialOperator& epi) {
    // epi: [n] -> [k] surjective; epi^* = product of degeneracies
    i64 e = M.exponent();
    if (epi.m == epi.n) return Matrix::identity(M.rank[k]);
    int i = 0;
    while (epi.img[i] != epi.img[i + 1]) ++i;
    // epi = epi' o sigma_i with sigma_i: [m] -> [m-1]
    std::vector<int> v(epi.img.begin(), epi.img.end());
    v.erase(v.begin() + i);
    SimplicialOperator rest(epi.n, v);
    return mul(M.s(epi.m - 1, i), degen_composite(M, k, rest), e);
}

} // namespace detail

/// theta^*: M_n -> M_m for a monotone map theta: [m] -> [n].
inline Matrix operator_matrix(const DeltaGModule& M, const SimplicialOperator& theta) {
    auto [epi, mono] = theta.epi_mono();
    Matrix a = detail::face_composite(M, theta.n, mono);
    Matrix b = detail::degen_composite(M, mono.m, epi);
    return mul(b, a, M.exponent());
}

/// theta^* x for a simplex of a Delta-G set.
inline int apply_operator(const DGSet& X, const SimplicialOperator& theta, int x) {
    auto [epi, mono] = theta.epi_mono();
    SimplicialOperator cur = mono;
    int lvl = theta.n;
    while (cur.m < lvl) {
        int i = 0;
        while (std::find(cur.img.begin(), cur.img.end(), i) != cur.img.end()) ++i;
        std::vector<int> v;
        for (int y : cur.img) v.push_back(y > i ? y - 1 : y);
        x = X.face(lvl, x, i);
        cur = SimplicialOperator(lvl - 1, v);
        --lvl;
    }
    std::function<int(const SimplicialOperator&, int)> up = [&](const SimplicialOperator& s, int y) {
        if (s.m == s.n) return y;
        int i = 0;
        while (s.img[i] != s.img[i + 1]) ++i;
        std::vector<int> v(s.img.begin(), s.img.end());
        v.erase(v.begin() + i);
        return X.degen(s.m - 1, up(SimplicialOperator(s.n, v), y), i);
    };
    return up(epi, x);
}

struct ModuleReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

/// Shapes, simplicial identities, presentation and crossed relations, all modulo the exponent.
inline ModuleReport validate(const DeltaGModule& M) {
    ModuleReport r;
    auto bad = [&](const std::string& s) {
        if (r.problems.size() < 50) r.problems.push_back(s);
    };
    i64 e = M.exponent();
    auto eq = [&](const Matrix& a, const Matrix& b) { return equal_mod(a, b, e); };
    auto lvl = [](int n) { return " at level " + std::to_string(n); };
    for (int n = 0; n <= M.D; ++n) {
        if (n >= 1 && static_cast<int>(M.face[n].size()) != n + 1) { bad("face count" + lvl(n)); return r; }
        if (n < M.D && static_cast<int>(M.degen[n].size()) != n + 1) { bad("degeneracy count" + lvl(n)); return r; }
        for (int i = 0; n >= 1 && i <= n; ++i)
            if (M.d(n, i).rows() != M.rank[n - 1] || M.d(n, i).cols() != M.rank[n]) bad("face shape d_" + std::to_string(i) + lvl(n));
        for (int i = 0; n < M.D && i <= n; ++i)
            if (M.s(n, i).rows() != M.rank[n + 1] || M.s(n, i).cols() != M.rank[n]) bad("degeneracy shape s_" + std::to_string(i) + lvl(n));
        for (auto& g : M.family.generators()) {
            auto it = M.action[n].find(g);
            if (it == M.action[n].end()) bad("missing action '" + g + "'" + lvl(n));
            else if (it->second.rows() != M.rank[n] || it->second.cols() != M.rank[n]) bad("action shape '" + g + "'" + lvl(n));
        }
    }
    if (!r.ok()) return r;
    for (int n = 0; n <= M.D; ++n) {
        for (int j = 1; n >= 2 && j <= n; ++j)
            for (int i = 0; i < j; ++i)
                if (!eq(mul(M.d(n - 1, i), M.d(n, j), e), mul(M.d(n - 1, j - 1), M.d(n, i), e)))
                    bad("d_i d_j = d_{j-1} d_i (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")" + lvl(n));
        for (int j = 0; n + 1 <= M.D && j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i) {
                Matrix lhs = mul(M.d(n + 1, i), M.s(n, j), e);
                Matrix rhs;
                if (i == j || i == j + 1) rhs = Matrix::identity(M.rank[n]);
                else if (i < j) rhs = mul(M.s(n - 1, j - 1), M.d(n, i), e);
                else rhs = mul(M.s(n - 1, j), M.d(n, i - 1), e);
                if (!eq(lhs, rhs)) bad("d_i s_j (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")" + lvl(n));
            }
        for (int j = 0; n + 2 <= M.D && j <= n; ++j)
            for (int i = 0; i <= j; ++i)
                if (!eq(mul(M.s(n + 1, i), M.s(n, j), e), mul(M.s(n + 1, j + 1), M.s(n, i), e)))
                    bad("s_i s_j = s_{j+1} s_i (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")" + lvl(n));
        const Family& F = M.family;
        Matrix I = Matrix::identity(M.rank[n]);
        if (F.has_rotation() && !eq(power(M.action[n].at("t"), F.rotation_order(n), e), I)) bad("rotation order" + lvl(n));
        if (F.has_reflection() && F.kind != Kind::quaternionic) {
            const Matrix& W = M.action[n].at("w");
            if (!eq(mul(W, W, e), I)) bad("w^2 = 1" + lvl(n));
            if (F.has_rotation()) {
                const Matrix& T = M.action[n].at("t");
                if (!eq(mul(mul(W, T, e), mul(W, T, e), e), I)) bad("w t w = t^-1" + lvl(n));
            }
        }
        if (F.kind == Kind::quaternionic) {
            const Matrix& B = M.action[n].at("b");
            const Matrix& T = M.action[n].at("t");
            if (!eq(mul(B, B, e), power(T, F.rotation_order(n) / 2, e))) bad("b^2 = t^{R/2}" + lvl(n));
            if (!eq(mul(mul(T, B, e), T, e), B)) bad("b t b^-1 = t^-1" + lvl(n));
        }
        for (auto& gname : F.generators()) {
            GroupElement g = GroupElement::generator(F, n, gname);
            const Matrix& G = M.action[n].at(gname);
            for (int i = 0; n >= 1 && i <= n; ++i) {
                auto [gp, j] = crossed_twist(g, OpKind::face, i);
                if (!eq(mul(M.d(n, i), G, e), mul(M.act(gp), M.d(n, j), e)))
                    bad("crossed face relation g=" + gname + " i=" + std::to_string(i) + lvl(n));
            }
            for (int i = 0; n < M.D && i <= n; ++i) {
                auto [gp, j] = crossed_twist(g, OpKind::degeneracy, i);
                if (!eq(mul(M.s(n, i), G, e), mul(M.act(gp), M.s(n, j), e)))
                    bad("crossed degeneracy relation g=" + gname + " i=" + std::to_string(i) + lvl(n));
            }
        }
    }
    return r;
}

/// Linearisation Z[X] (reduced: the basepoint sub-object is sent to 0).
inline DeltaGModule free_abelian(const DGSet& X, bool reduced = false, std::vector<i64> A = {0}) {
    if (reduced && !X.basepoint) throw std::invalid_argument("reduced linearisation needs a pointed object");
    SubObject B = reduced ? basepoint_subobject(X) : SubObject(X.D + 1);
    std::vector<std::vector<int>> pos(X.D + 1);
    std::vector<int> ranks;
    for (int n = 0; n <= X.D; ++n) {
        pos[n].assign(X.size(n), -1);
        int c = 0;
        for (int x = 0; x < X.size(n); ++x)
            if (!reduced || !B[n][x]) pos[n][x] = c++;
        ranks.push_back(c);
    }
    DeltaGModule M(X.family, X.D, std::move(A), ranks);
    auto lin = [&](int from, int to, const std::function<int(int)>& f) {
        Matrix m(ranks[to], ranks[from]);
        for (int x = 0; x < X.size(from); ++x) {
            if (pos[from][x] < 0) continue;
            int y = pos[to][f(x)];
            if (y >= 0) m(y, pos[from][x]) = 1;
        }
        return m;
    };
    for (int n = 0; n <= X.D; ++n) {
        for (int i = 0; n >= 1 && i <= n; ++i) M.face[n].push_back(lin(n, n - 1, [&](int x) { return X.face(n, x, i); }));
        for (int i = 0; n < X.D && i <= n; ++i) M.degen[n].push_back(lin(n, n + 1, [&](int x) { return X.degen(n, x, i); }));
        for (auto& g : X.family.generators()) M.action[n][g] = lin(n, n, [&](int x) { return X.act(n, g, x); });
    }
    return M;
}

/// K^G(A, n) = A tensor reduced Z[S^n_G].
inline DeltaGModule em_object(const Family& F, const std::vector<i64>& A, int n, int D) {
    if (D < n) throw std::invalid_argument("em_object: truncation below n");
    for (i64 q : A)
        if (q < 0) throw std::invalid_argument("em_object: negative cyclic order");
    return free_abelian(sphere(F, n, D), true, A);
}

/// Forgets the group action.
inline DeltaGModule underlying(const DeltaGModule& M) {
    DeltaGModule U = M;
    U.family = Family(Kind::trivial);
    for (auto& a : U.action) a.clear();
    return U;
}

// ---------------------------------------------------------------------------
// Dold-Kan

/// Normalised Moore complex: N_n = intersection of ker d_i (i >= 1), differential d_0.
struct MooreData {
    ChainComplex complex;
    std::vector<Kernel> basis;  // basis[n].K: columns spanning N_n inside M_n; basis[n].L: coordinates
};

inline MooreData moore(const DeltaGModule& M) {
    i64 ring = M.field_or_z();
    MooreData out;
    std::vector<int> ranks;
    std::vector<Matrix> ds;
    for (int n = 0; n <= M.D; ++n) {
        Kernel k;
        if (n == 0) {
            k = {Matrix::identity(M.rank[0]), Matrix::identity(M.rank[0])};
        } else {
            std::vector<Matrix> rows;
            for (int i = 1; i <= n; ++i) rows.push_back(M.d(n, i));
            k = kernel(vstack(rows, M.rank[n]).reduced(ring), ring);
        }
        out.basis.push_back(k);
        ranks.push_back(k.K.cols());
        if (n == 0) ds.emplace_back(0, ranks[0]);
        else ds.push_back(mul(out.basis[n - 1].L, mul(M.d(n, 0), k.K, ring), ring));
    }
    out.complex = ChainComplex::make(ring, ranks, ds, false);
    return out;
}

inline ChainComplex dold_kan(const DeltaGModule& M) { return moore(M).complex; }

/// Surjections [n] -> [k] for k <= kmax, in a fixed order.
inline std::vector<SimplicialOperator> surjections(int n, int kmax) {
    std::vector<SimplicialOperator> out;
    for (int k = 0; k <= std::min(n, kmax); ++k)
        for (auto& s : monotone_maps(n, k))
            if (s.surjective()) out.push_back(s);
    return out;
}

/// Layout of Gamma(C)_n = sum over surjections sigma: [n] -> [k] of C_k.
struct GammaLayout {
    std::vector<std::vector<SimplicialOperator>> sigma;  // per level
    std::vector<std::vector<int>> offset;                // start row of each summand
    std::vector<int> rank;
};

inline GammaLayout gamma_layout(const ChainComplex& C, int D) {
    GammaLayout g;
    for (int n = 0; n <= D; ++n) {
        g.sigma.push_back(surjections(n, C.top()));
        g.offset.emplace_back();
        int r = 0;
        for (auto& s : g.sigma[n]) {
            g.offset[n].push_back(r);
            r += C.rank(s.n);
        }
        g.rank.push_back(r);
    }
    return g;
}

namespace detail {

// theta^* on Gamma(C) for theta: [m] -> [n]
inline Matrix gamma_operator(const ChainComplex& C, const GammaLayout& G, const SimplicialOperator& theta) {
    int m = theta.m, n = theta.n;
    Matrix out(G.rank[m], G.rank[n]);
    for (size_t a = 0; a < G.sigma[n].size(); ++a) {
        const auto& sigma = G.sigma[n][a];
        int k = sigma.n;
        auto [epi, mono] = compose(sigma, theta).epi_mono();
        int j = epi.n;
        bool ident = j == k;
        bool d0 = j == k - 1 && mono.img.front() == 1;
        if (!ident && !d0) continue;
        auto it = std::find(G.sigma[m].begin(), G.sigma[m].end(), epi);
        if (it == G.sigma[m].end()) continue;  // target summand beyond the complex
        int b = static_cast<int>(it - G.sigma[m].begin());
        Matrix block = ident ? Matrix::identity(C.rank(k)) : C.boundary(k);
        for (int r = 0; r < block.rows(); ++r)
            for (int c = 0; c < block.cols(); ++c) out(G.offset[m][b] + r, G.offset[n][a] + c) = block(r, c);
    }
    return out.reduced(C.ring);
}

} // namespace detail

/// Inverse Dold-Kan functor Gamma, levels 0..D.
inline DeltaGModule dk_inverse(const ChainComplex& C, int D) {
    auto G = gamma_layout(C, D);
    DeltaGModule M(Family(Kind::trivial), D, {C.ring}, G.rank);
    for (int n = 0; n <= D; ++n) {
        for (int i = 0; n >= 1 && i <= n; ++i)
            M.face[n].push_back(detail::gamma_operator(C, G, SimplicialOperator::coface(n, i)));
        for (int i = 0; n < D && i <= n; ++i)
            M.degen[n].push_back(detail::gamma_operator(C, G, SimplicialOperator::codegeneracy(n, i)));
    }
    return M;
}

/// Natural comparison Gamma(N M) -> M, (sigma, x) -> sigma^* x, per level.
inline std::vector<Matrix> gamma_counit(const DeltaGModule& M, const MooreData& N, int D) {
    auto G = gamma_layout(N.complex, D);
    i64 ring = N.complex.ring;
    std::vector<Matrix> out;
    for (int n = 0; n <= D; ++n) {
        std::vector<Matrix> blocks;
        for (auto& s : G.sigma[n]) blocks.push_back(mul(operator_matrix(M, s), N.basis[s.n].K, ring));
        out.push_back(hstack(blocks, M.rank[n]));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sub-modules and quotients over a prime field

/// Closure of the given level-vectors under faces, degeneracies and the action (field coefficients).
inline std::vector<Matrix> submodule_closure(const DeltaGModule& M, const std::vector<std::pair<int, std::vector<i64>>>& gens) {
    i64 p = M.field_or_z();
    if (p == 0) throw std::invalid_argument("submodule_closure works over Z/p");
    std::vector<std::vector<std::vector<i64>>> basis(M.D + 1);
    std::vector<std::pair<int, std::vector<i64>>> todo(gens.begin(), gens.end());
    auto span_rank = [&](int n, const std::vector<std::vector<i64>>& vs) {
        if (vs.empty()) return 0;
        Matrix m(static_cast<int>(vs.size()), M.rank[n]);
        for (size_t i = 0; i < vs.size(); ++i)
            for (int j = 0; j < M.rank[n]; ++j) m(static_cast<int>(i), j) = vs[i][j];
        return rank_mod(m, p);
    };
    while (!todo.empty()) {
        auto [n, v] = todo.back();
        todo.pop_back();
        for (auto& x : v) x = reduce(x, p);
        auto trial = basis[n];
        trial.push_back(v);
        if (span_rank(n, trial) == static_cast<int>(basis[n].size())) continue;
        basis[n].push_back(v);
        for (int i = 0; n >= 1 && i <= n; ++i) todo.push_back({n - 1, matvec(M.d(n, i), v, p)});
        for (int i = 0; n < M.D && i <= n; ++i) todo.push_back({n + 1, matvec(M.s(n, i), v, p)});
        for (auto& [g, T] : M.action[n]) todo.push_back({n, matvec(T, v, p)});
    }
    std::vector<Matrix> out;
    for (int n = 0; n <= M.D; ++n) {
        Matrix B(M.rank[n], static_cast<int>(basis[n].size()));
        for (size_t c = 0; c < basis[n].size(); ++c) B.set_column(static_cast<int>(c), basis[n][c]);
        out.push_back(B);
    }
    return out;
}

/// M / W for a sub-module W given by spanning columns per level (field coefficients).
inline DeltaGModule quotient_module(const DeltaGModule& M, const std::vector<Matrix>& W) {
    i64 p = M.field_or_z();
    if (p == 0) throw std::invalid_argument("quotient_module works over Z/p");
    std::vector<Matrix> q, sec;
    std::vector<int> ranks;
    for (int n = 0; n <= M.D; ++n) {
        // rows of q span the annihilator of W
        Matrix Q = W[n].cols() ? nullspace_mod(W[n].transpose(), p).transpose() : Matrix::identity(M.rank[n]);
        // section: Q has full row rank; pick columns forming an invertible block
        auto e = rref_mod(Q, p);
        Matrix S(M.rank[n], Q.rows());
        Matrix Qp = Q.columns(e.pivots);
        Matrix inv = Matrix::identity(Q.rows());
        // solve Qp * Y = I column by column
        for (int c = 0; c < Q.rows(); ++c) {
            std::vector<i64> rhs(Q.rows(), 0);
            rhs[c] = 1;
            auto y = solve_mod(Qp, rhs, p);
            if (!y) throw std::logic_error("quotient section failed");
            for (size_t r = 0; r < e.pivots.size(); ++r) S(e.pivots[r], c) = (*y)[r];
        }
        q.push_back(Q);
        sec.push_back(S);
        ranks.push_back(Q.rows());
    }
    DeltaGModule R(M.family, M.D, M.coeff, ranks);
    for (int n = 0; n <= M.D; ++n) {
        for (int i = 0; n >= 1 && i <= n; ++i) R.face[n].push_back(mul(q[n - 1], mul(M.d(n, i), sec[n], p), p));
        for (int i = 0; n < M.D && i <= n; ++i) R.degen[n].push_back(mul(q[n + 1], mul(M.s(n, i), sec[n], p), p));
        for (auto& [g, T] : M.action[n]) R.action[n][g] = mul(q[n], mul(T, sec[n], p), p);
    }
    return R;
}

inline DeltaGModule direct_sum(const DeltaGModule& A, const DeltaGModule& B) {
    if (!(A.family == B.family) || A.D != B.D || A.coeff != B.coeff) throw std::invalid_argument("direct_sum: mismatched modules");
    std::vector<int> ranks;
    for (int n = 0; n <= A.D; ++n) ranks.push_back(A.rank[n] + B.rank[n]);
    DeltaGModule S(A.family, A.D, A.coeff, ranks);
    for (int n = 0; n <= A.D; ++n) {
        for (int i = 0; n >= 1 && i <= n; ++i) S.face[n].push_back(xsimp::direct_sum(A.d(n, i), B.d(n, i)));
        for (int i = 0; n < A.D && i <= n; ++i) S.degen[n].push_back(xsimp::direct_sum(A.s(n, i), B.s(n, i)));
        for (auto& [g, T] : A.action[n]) S.action[n][g] = xsimp::direct_sum(T, B.action[n].at(g));
    }
    return S;
}

/// Restricts a module to levels 0..D.
inline DeltaGModule truncate(const DeltaGModule& M, int D) {
    if (D > M.D) throw std::invalid_argument("truncate: cannot extend");
    DeltaGModule T(M.family, D, M.coeff, std::vector<int>(M.rank.begin(), M.rank.begin() + D + 1));
    for (int n = 0; n <= D; ++n) {
        T.face[n] = M.face[n];
        if (n < D) T.degen[n] = M.degen[n];
        T.action[n] = M.action[n];
    }
    return T;
}

// ---------------------------------------------------------------------------
// Homology of the underlying simplicial set of a module (Eilenberg-MacLane objects)

/// The underlying simplicial set of M as a DGSet (elements are the simplices).
/// Torsion coefficients: the whole group at each level, capped at max_elements.
inline DGSet underlying_set(const DeltaGModule& M, long max_elements = 200000) {
    i64 e = M.exponent();
    if (e == 0) throw std::invalid_argument("underlying_set: infinite module");
    std::vector<i64> orders;
    for (i64 q : M.coeff) orders.push_back(q);
    // element of level n: vector over the summands, coordinates (summand a, basis c) in Z/coeff[a]
    auto count = [&](int n) {
        long total = 1;
        for (size_t a = 0; a < orders.size(); ++a)
            for (int c = 0; c < M.rank[n]; ++c) {
                total *= orders[a];
                if (total > max_elements) throw std::invalid_argument("underlying_set: level " + std::to_string(n) + " too large");
            }
        return total;
    };
    DGSet X(Family(Kind::trivial), M.D);
    std::vector<long> sizes;
    for (int n = 0; n <= M.D; ++n) sizes.push_back(count(n));
    auto decode = [&](int n, long code) {
        std::vector<std::vector<i64>> v(orders.size(), std::vector<i64>(M.rank[n]));
        for (size_t a = 0; a < orders.size(); ++a)
            for (int c = 0; c < M.rank[n]; ++c) {
                v[a][c] = code % orders[a];
                code /= orders[a];
            }
        return v;
    };
    auto encode = [&](int n, const std::vector<std::vector<i64>>& v) {
        long code = 0;
        for (int a = static_cast<int>(orders.size()) - 1; a >= 0; --a)
            for (int c = M.rank[n] - 1; c >= 0; --c) code = code * orders[a] + v[a][c];
        return static_cast<int>(code);
    };
    auto image = [&](const Matrix& T, int from, int to, long code) {
        auto v = decode(from, code);
        std::vector<std::vector<i64>> w(orders.size());
        for (size_t a = 0; a < orders.size(); ++a) w[a] = matvec(T, v[a], orders[a]);
        return encode(to, w);
    };
    for (int n = 0; n <= M.D; ++n)
        for (long c = 0; c < sizes[n]; ++c) X.add(n, "e" + std::to_string(c));
    for (int n = 0; n <= M.D; ++n)
        for (long c = 0; c < sizes[n]; ++c) {
            if (n >= 1) {
                std::vector<int> fs;
                for (int i = 0; i <= n; ++i) fs.push_back(image(M.d(n, i), n, n - 1, c));
                X.faces[n].push_back(fs);
            }
            if (n < M.D) {
                std::vector<int> ds;
                for (int i = 0; i <= n; ++i) ds.push_back(image(M.s(n, i), n, n + 1, c));
                X.degens[n].push_back(ds);
            }
        }
    X.basepoint = "e0";
    return X;
}

/// Finite window of an infinite module whose coefficients are Z: all elements whose
/// restrictions to every edge lie in {-1, 0, 1}. Defined for modules with rank 1 on edges
/// (e.g. K(Z, 1)); closed under faces and degeneracies.
inline DGSet edge_window(const DeltaGModule& M) {
    if (M.coeff != std::vector<i64>{0}) throw std::invalid_argument("edge_window needs coefficients Z");
    if (M.D < 1 || M.rank[1] != 1) throw std::invalid_argument("edge_window needs rank 1 on edges");
    DGSet X(Family(Kind::trivial), M.D);
    std::vector<std::map<std::vector<i64>, int>> idx(M.D + 1);
    std::vector<std::vector<std::vector<i64>>> elems(M.D + 1);
    for (int n = 0; n <= M.D; ++n) {
        std::vector<Matrix> edges;
        for (int a = 0; a <= n; ++a)
            for (int b = a + 1; b <= n; ++b) edges.push_back(operator_matrix(M, SimplicialOperator(n, {a, b})));
        int r = M.rank[n];
        std::vector<i64> v(r, -1);
        if (r == 0) v.clear();
        // coordinates range over [-1, 1] for edge-determined modules (checked below)
        for (;;) {
            bool ok = true;
            for (auto& E : edges) {
                i64 val = matvec(E, v)[0];
                if (val < -1 || val > 1) { ok = false; break; }
            }
            if (ok) {
                idx[n][v] = static_cast<int>(elems[n].size());
                elems[n].push_back(v);
                std::string id = "(";
                for (size_t i = 0; i < v.size(); ++i) id += (i ? "," : "") + std::to_string(v[i]);
                X.add(n, id + ")");
            }
            int i = 0;
            while (i < r && v[i] == 1) v[i++] = -1;
            if (i == r) break;
            ++v[i];
        }
    }
    for (int n = 0; n <= M.D; ++n)
        for (auto& v : elems[n]) {
            if (n >= 1) {
                std::vector<int> fs;
                for (int i = 0; i <= n; ++i) {
                    auto it = idx[n - 1].find(matvec(M.d(n, i), v));
                    if (it == idx[n - 1].end()) throw std::logic_error("edge window not closed under faces");
                    fs.push_back(it->second);
                }
                X.faces[n].push_back(fs);
            }
            if (n < M.D) {
                std::vector<int> ds;
                for (int i = 0; i <= n; ++i) {
                    auto it = idx[n + 1].find(matvec(M.s(n, i), v));
                    if (it == idx[n + 1].end()) throw std::logic_error("edge window not closed under degeneracies");
                    ds.push_back(it->second);
                }
                X.degens[n].push_back(ds);
            }
        }
    return X;
}

/// Integral homology of the underlying simplicial set of K(A, n)-type modules.
/// Finite coefficients enumerate the module; A = Z uses the edge window, available for
/// the trivial family and n = 1 only.
inline HomologyGroups em_homology(const DeltaGModule& M, int n_max = -1) {
    if (n_max < 0) n_max = M.D;
    if (M.exponent() != 0) return homology(chains(underlying_set(underlying(M))), n_max);
    if (M.family.kind == Kind::trivial && M.coeff == std::vector<i64>{0} && M.D >= 1 && M.rank[1] == 1 && M.rank[0] == 0)
        return homology(chains(edge_window(M)), n_max);
    throw std::invalid_argument("em_homology: free coefficients supported only for the trivial family with n = 1");
}

} // namespace xsimp
