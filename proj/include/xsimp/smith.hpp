#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace xsimp {

/// U * M * V == S with U, V unimodular and S diagonal, diag entries d_0 | d_1 | ... (nonnegative).
struct SmithForm {
    Matrix U, S, V, Vinv;
    std::vector<i64> diag;  // nonzero diagonal entries, in order
    int rank() const { return static_cast<int>(diag.size()); }
};

namespace detail {

struct SmithWork {
    Matrix A, U, V, Vinv;
    bool track;

    void row_swap(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < A.cols(); ++c) std::swap(A(i, c), A(j, c));
        if (track)
            for (int c = 0; c < U.cols(); ++c) std::swap(U(i, c), U(j, c));
    }
    void col_swap(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < A.rows(); ++r) std::swap(A(r, i), A(r, j));
        if (track) {
            for (int r = 0; r < V.rows(); ++r) std::swap(V(r, i), V(r, j));
            for (int c = 0; c < Vinv.cols(); ++c) std::swap(Vinv(i, c), Vinv(j, c));
        }
    }
    // row i += c * row j
    void row_add(int i, int j, i64 c) {
        if (c == 0) return;
        for (int k = 0; k < A.cols(); ++k)
            if (A(j, k)) A(i, k) = checked_add(A(i, k), checked_mul(c, A(j, k)));
        if (track)
            for (int k = 0; k < U.cols(); ++k)
                if (U(j, k)) U(i, k) = checked_add(U(i, k), checked_mul(c, U(j, k)));
    }
    // col j += c * col i
    void col_add(int j, int i, i64 c) {
        if (c == 0) return;
        for (int k = 0; k < A.rows(); ++k)
            if (A(k, i)) A(k, j) = checked_add(A(k, j), checked_mul(c, A(k, i)));
        if (track) {
            for (int k = 0; k < V.rows(); ++k)
                if (V(k, i)) V(k, j) = checked_add(V(k, j), checked_mul(c, V(k, i)));
            for (int k = 0; k < Vinv.cols(); ++k)
                if (Vinv(j, k)) Vinv(i, k) = checked_sub(Vinv(i, k), checked_mul(c, Vinv(j, k)));
        }
    }
    void row_neg(int i) {
        for (int k = 0; k < A.cols(); ++k) A(i, k) = -A(i, k);
        if (track)
            for (int k = 0; k < U.cols(); ++k) U(i, k) = -U(i, k);
    }
};

} // namespace detail

inline SmithForm smith(const Matrix& M, bool track = true) {
    detail::SmithWork w{M, Matrix(), Matrix(), Matrix(), track};
    int R = M.rows(), C = M.cols();
    if (track) {
        w.U = Matrix::identity(R);
        w.V = Matrix::identity(C);
        w.Vinv = Matrix::identity(C);
    }
    int t = 0;
    while (t < R && t < C) {
        // smallest nonzero pivot in the remaining block
        int pi = -1, pj = -1;
        i64 best = 0;
        for (int i = t; i < R; ++i)
            for (int j = t; j < C; ++j) {
                i64 v = std::llabs(w.A(i, j));
                if (v && (best == 0 || v < best)) { best = v; pi = i; pj = j; }
            }
        if (pi < 0) break;
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < R; ++i) {
                if (w.A(i, t) == 0) continue;
                w.row_add(i, t, -(w.A(i, t) / w.A(t, t)));
                if (w.A(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < C; ++j) {
                if (w.A(t, j) == 0) continue;
                w.col_add(j, t, -(w.A(t, j) / w.A(t, t)));
                if (w.A(t, j) != 0) clean = false;
            }
            if (clean) break;
            // move the smallest remainder in row/col t onto the pivot
            int bi = t, bj = t;
            i64 b = std::llabs(w.A(t, t));
            for (int i = t + 1; i < R; ++i)
                if (w.A(i, t) && std::llabs(w.A(i, t)) < b) { b = std::llabs(w.A(i, t)); bi = i; bj = t; }
            for (int j = t + 1; j < C; ++j)
                if (w.A(t, j) && std::llabs(w.A(t, j)) < b) { b = std::llabs(w.A(t, j)); bi = t; bj = j; }
            w.row_swap(t, bi);
            w.col_swap(t, bj);
        }
        if (w.A(t, t) < 0) w.row_neg(t);
        ++t;
    }
    int rank = t;
    // divisibility: replace (a, b) by (gcd, lcm) with explicit unimodular 2x2 moves
    for (int i = 0; i < rank; ++i)
        for (int j = i + 1; j < rank; ++j) {
            i64 a = w.A(i, i), b = w.A(j, j);
            if (b % a == 0) continue;
            w.col_add(i, j, 1);  // block becomes [[a,0],[b,b]]
            while (w.A(j, i) != 0) {
                w.row_add(i, j, -(w.A(i, i) / w.A(j, i)));
                w.row_swap(i, j);
            }
            if (w.A(i, i) < 0) w.row_neg(i);
            w.col_add(j, i, -(w.A(i, j) / w.A(i, i)));
            if (w.A(j, j) < 0) w.row_neg(j);
        }
    SmithForm f;
    f.S = w.A;
    if (track) { f.U = std::move(w.U); f.V = std::move(w.V); f.Vinv = std::move(w.Vinv); }
    for (int i = 0; i < rank; ++i) f.diag.push_back(w.A(i, i));
    return f;
}

inline std::vector<i64> invariant_factors(const Matrix& M) { return smith(M, false).diag; }

inline int rank_z(const Matrix& M) { return smith(M, false).rank(); }

// ---- linear algebra over Z/p ----

struct RowEchelon {
    Matrix R;               // reduced row echelon form mod p
    std::vector<int> pivots;
};

inline RowEchelon rref_mod(const Matrix& M, i64 p) {
    RowEchelon e{M.reduced(p), {}};
    Matrix& A = e.R;
    int r = 0;
    for (int c = 0; c < A.cols() && r < A.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < A.rows(); ++i)
            if (A(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        for (int k = 0; k < A.cols(); ++k) std::swap(A(r, k), A(piv, k));
        i64 inv = mod_inverse(A(r, c), p);
        for (int k = 0; k < A.cols(); ++k) A(r, k) = reduce(A(r, k) * inv, p);
        for (int i = 0; i < A.rows(); ++i) {
            if (i == r || A(i, c) == 0) continue;
            i64 f = A(i, c);
            for (int k = 0; k < A.cols(); ++k) A(i, k) = reduce(A(i, k) - f * A(r, k), p);
        }
        e.pivots.push_back(c);
        ++r;
    }
    return e;
}

inline int rank_mod(const Matrix& M, i64 p) { return static_cast<int>(rref_mod(M, p).pivots.size()); }

/// Rank over the ring Z (p == 0) or the field Z/p.
inline int rank_over(const Matrix& M, i64 p) { return p ? rank_mod(M, p) : rank_z(M); }

/// Columns spanning the kernel of M over Z/p.
inline Matrix nullspace_mod(const Matrix& M, i64 p) {
    auto e = rref_mod(M, p);
    std::vector<bool> is_piv(M.cols(), false);
    for (int c : e.pivots) is_piv[c] = true;
    std::vector<int> free;
    for (int c = 0; c < M.cols(); ++c)
        if (!is_piv[c]) free.push_back(c);
    Matrix K(M.cols(), static_cast<int>(free.size()));
    for (size_t f = 0; f < free.size(); ++f) {
        K(free[f], static_cast<int>(f)) = 1;
        for (size_t r = 0; r < e.pivots.size(); ++r)
            K(e.pivots[r], static_cast<int>(f)) = reduce(-e.R(static_cast<int>(r), free[f]), p);
    }
    return K;
}

/// Some solution x of M x = b over Z/p, if one exists.
inline std::optional<std::vector<i64>> solve_mod(const Matrix& M, const std::vector<i64>& b, i64 p) {
    Matrix aug(M.rows(), M.cols() + 1);
    for (int i = 0; i < M.rows(); ++i) {
        for (int j = 0; j < M.cols(); ++j) aug(i, j) = M(i, j);
        aug(i, M.cols()) = b[i];
    }
    auto e = rref_mod(aug, p);
    std::vector<i64> x(M.cols(), 0);
    for (size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == M.cols()) return std::nullopt;
        x[e.pivots[r]] = e.R(static_cast<int>(r), M.cols());
    }
    return x;
}

/// Kernel lattice of M over Z/p or Z with a left inverse: L * K == I.
struct Kernel {
    Matrix K;  // columns form a basis
    Matrix L;  // L * K == identity, L * v recovers coordinates of any kernel vector v
};

inline Kernel kernel(const Matrix& M, i64 p) {
    if (p) {
        Matrix K = nullspace_mod(M, p);
        // K has an identity block on the free columns
        auto e = rref_mod(M, p);
        std::vector<bool> is_piv(M.cols(), false);
        for (int c : e.pivots) is_piv[c] = true;
        Matrix L(K.cols(), M.cols());
        int f = 0;
        for (int c = 0; c < M.cols(); ++c)
            if (!is_piv[c]) L(f++, c) = 1;
        return {K, L};
    }
    auto f = smith(M, true);
    int r = f.rank(), n = M.cols();
    std::vector<int> idx;
    for (int j = r; j < n; ++j) idx.push_back(j);
    Matrix K = f.V.columns(idx);
    Matrix L(n - r, n);
    for (int j = r; j < n; ++j)
        for (int k = 0; k < n; ++k) L(j - r, k) = f.Vinv(j, k);
    return {K, L};
}

/// A solution of M x = b over Z (p == 0) or Z/p.
inline std::optional<std::vector<i64>> solve(const Matrix& M, const std::vector<i64>& b, i64 p) {
    if (p) return solve_mod(M, b, p);
    auto f = smith(M, true);
    auto ub = matvec(f.U, b);
    std::vector<i64> y(M.cols(), 0);
    for (int i = 0; i < static_cast<int>(ub.size()); ++i) {
        if (i < f.rank()) {
            if (ub[i] % f.diag[i] != 0) return std::nullopt;
            y[i] = ub[i] / f.diag[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return matvec(f.V, y);
}

/// Is the square matrix invertible over the ring?
inline bool invertible(const Matrix& M, i64 p) {
    if (M.rows() != M.cols()) return false;
    if (p) return rank_mod(M, p) == M.rows();
    auto d = invariant_factors(M);
    if (static_cast<int>(d.size()) != M.rows()) return false;
    for (i64 v : d)
        if (v != 1) return false;
    return true;
}

} // namespace xsimp
