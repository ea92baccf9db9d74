#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "chain.hpp"
#include "module.hpp"

namespace xsimp {

/// Modules X_0..X_top with d_n: X_n -> X_{n-1} and delta_n: X_{n-1} -> X_n.
struct DuchainComplex {
    i64 ring = 0;
    std::vector<int> ranks;
    std::vector<Matrix> d;      // d[n], n >= 1 (d[0] is 0 x rank0)
    std::vector<Matrix> delta;  // delta[n], n >= 1 (delta[0] unused)
    bool bounded = false;

    int top() const { return static_cast<int>(ranks.size()) - 1; }
    int rank(int n) const { return n >= 0 && n <= top() ? ranks[n] : 0; }
    Matrix boundary(int n) const { return n >= 1 && n <= top() ? d[n] : Matrix(rank(n - 1), rank(n)); }
    Matrix coboundary(int n) const { return n >= 1 && n <= top() ? delta[n] : Matrix(rank(n), rank(n - 1)); }
    // delta_{n+1} known: inside the stored range, or zero because the complex ends
    bool has_delta_above(int n) const { return bounded || n + 1 <= top(); }

    ChainComplex chain() const {
        std::vector<Matrix> ds;
        for (int n = 0; n <= top(); ++n) ds.push_back(n == 0 ? Matrix(0, rank(0)) : d[n]);
        return ChainComplex::make(ring, ranks, ds, bounded);
    }
};

inline DuchainComplex zero_duchain(i64 ring, int top) {
    DuchainComplex C{ring, std::vector<int>(top + 1, 0), {}, {}, true};
    for (int n = 0; n <= top; ++n) {
        C.d.emplace_back(0, 0);
        C.delta.emplace_back(0, 0);
    }
    return C;
}

struct DuchainReport {
    std::vector<std::string> problems;
    int witness_degree = -1;  // first failing degree
    bool ok() const { return problems.empty(); }
};

/// Shapes, d^2 = 0 and delta^2 = 0.
inline DuchainReport validate_duchain(const DuchainComplex& C) {
    DuchainReport r;
    auto bad = [&](int n, const std::string& s) {
        if (r.witness_degree < 0) r.witness_degree = n;
        r.problems.push_back(s + " in degree " + std::to_string(n));
    };
    i64 p = C.ring;
    if (static_cast<int>(C.d.size()) != C.top() + 1 || static_cast<int>(C.delta.size()) != C.top() + 1) {
        bad(0, "map count does not match degree count");
        return r;
    }
    for (int n = 1; n <= C.top(); ++n) {
        if (C.d[n].rows() != C.rank(n - 1) || C.d[n].cols() != C.rank(n)) bad(n, "boundary shape");
        if (C.delta[n].rows() != C.rank(n) || C.delta[n].cols() != C.rank(n - 1)) bad(n, "delta shape");
    }
    if (!r.ok()) return r;
    for (int n = 2; n <= C.top(); ++n) {
        if (!is_zero_mod(mul(C.d[n - 1], C.d[n], p), p)) bad(n, "d^2 != 0");
        if (!is_zero_mod(mul(C.delta[n], C.delta[n - 1], p), p)) bad(n, "delta^2 != 0");
    }
    return r;
}

namespace detail {

// f_i(x) = (1 + (-1)^i x)^{i+1}
inline Matrix f_poly(int i, const Matrix& X, i64 p) {
    Matrix I = Matrix::identity(X.rows());
    Matrix base = add(I, X, p, i % 2 ? -1 : 1);
    return power(base, i + 1, p);
}

} // namespace detail

/// Duchain checks plus the unit conditions f_{n-1}(delta d) f_n(d delta) = id on X_n (n > 0)
/// and f_0(d delta) = id on X_0. Degrees whose delta_{n+1} lies beyond the data are skipped.
inline DuchainReport validate_cyclic(const DuchainComplex& C) {
    DuchainReport r = validate_duchain(C);
    if (!r.ok()) return r;
    i64 p = C.ring;
    for (int n = 0; n <= C.top(); ++n) {
        if (!C.has_delta_above(n)) continue;
        Matrix A = mul(C.boundary(n + 1), C.coboundary(n + 1), p);  // X_n -> X_{n+1} -> X_n
        Matrix lhs = detail::f_poly(n, A, p);
        if (n > 0) lhs = mul(detail::f_poly(n - 1, mul(C.coboundary(n), C.boundary(n), p), p), lhs, p);
        if (!equal_mod(lhs, Matrix::identity(C.rank(n)), p)) {
            if (r.witness_degree < 0) r.witness_degree = n;
            r.problems.push_back("f_{n-1} f_n(delta d) != id in degree " + std::to_string(n));
        }
    }
    return r;
}

/// Projection of M_n onto the Moore part along the degenerate part:
/// (1 - s_0 d_1)(1 - s_1 d_2)...(1 - s_{n-1} d_n).
inline Matrix moore_projection(const DeltaGModule& M, int n) {
    i64 e = M.exponent();
    Matrix I = Matrix::identity(M.rank[n]);
    Matrix P = I;
    for (int j = 1; j <= n; ++j) P = mul(P, add(I, mul(M.s(n - 1, j - 1), M.d(n, j), e), e, -1), e);
    return P;
}

namespace detail {

inline void require_cyclic(const DeltaGModule& M) {
    if (M.family.kind != Kind::cyclic) throw std::invalid_argument("needs the cyclic family, got " + M.family.name());
}

// action of t^{-1} at level n
inline Matrix tau_star(const DeltaGModule& M, int n) { return power(M.action[n].at("t"), n, M.exponent()); }

} // namespace detail

/// Moore complex with the extra differential delta_n = L_n P_n t^{-1} s_0 K_{n-1}.
inline DuchainComplex cyclic_dold_kan(const DeltaGModule& M) {
    detail::require_cyclic(M);
    auto N = moore(M);
    i64 p = N.complex.ring;
    DuchainComplex C{p, N.complex.ranks, N.complex.d, {}, false};
    C.delta.emplace_back(C.rank(0), 0);
    for (int n = 1; n <= M.D; ++n) {
        Matrix m = mul(M.s(n - 1, 0), N.basis[n - 1].K, p);
        m = mul(detail::tau_star(M, n), m, p);
        m = mul(moore_projection(M, n), m, p);
        C.delta.push_back(mul(N.basis[n].L, m, p));
    }
    return C;
}

/// Cyclic module with Moore complex C: Gamma(C) with t^{-1} rebuilt level by level from the
/// faces it must have. Levels reach top - 1 (the top level needs delta beyond the data) unless C is bounded.
inline DeltaGModule cdk_inverse(const DuchainComplex& C) {
    auto rep = validate_duchain(C);
    if (!rep.ok()) throw std::invalid_argument("cdk_inverse: " + rep.problems.front());
    int D = C.bounded ? C.top() : C.top() - 1;
    if (D < 0) throw std::invalid_argument("cdk_inverse: complex too short");
    i64 p = C.ring;
    ChainComplex ch = C.chain();
    DeltaGModule M = dk_inverse(ch, D);
    M.family = Family(Kind::cyclic);
    auto G = gamma_layout(ch, D);

    auto id_index = [&](int n) {
        for (size_t a = 0; a < G.sigma[n].size(); ++a)
            if (G.sigma[n][a].m == G.sigma[n][a].n) return static_cast<int>(a);
        return -1;
    };
    auto embed_id = [&](int n, const std::vector<i64>& c) {
        std::vector<i64> v(G.rank[n], 0);
        int a = id_index(n);
        for (size_t j = 0; j < c.size(); ++j) v[G.offset[n][a] + j] = c[j];
        return v;
    };
    auto unit = [&](int len, int j) {
        std::vector<i64> v(len, 0);
        v[j] = 1;
        return v;
    };

    std::vector<Matrix> tau(D + 1);
    tau[0] = Matrix::identity(G.rank[0]);
    for (int n = 1; n <= D; ++n) {
        int ida = id_index(n);
        // columns of the degenerate summands and the stacked face map restricted to them
        std::vector<int> degcols;
        for (size_t a = 0; a < G.sigma[n].size(); ++a)
            if (static_cast<int>(a) != ida)
                for (int j = 0; j < C.rank(G.sigma[n][a].n); ++j) degcols.push_back(G.offset[n][a] + j);
        std::vector<Matrix> fs;
        for (int i = 0; i <= n; ++i) fs.push_back(M.d(n, i));
        Matrix F = vstack(fs, G.rank[n]);
        Matrix Fdeg = F.columns(degcols);

        // element with the given faces and Moore coordinate c
        auto lift = [&](const std::vector<std::vector<i64>>& faces, const std::vector<i64>& c) {
            std::vector<i64> z = embed_id(n, c);
            std::vector<i64> fz = matvec(F, z, p);
            std::vector<i64> rhs;
            for (auto& f : faces) rhs.insert(rhs.end(), f.begin(), f.end());
            for (size_t i = 0; i < rhs.size(); ++i) rhs[i] = p ? reduce(rhs[i] - fz[i], p) : rhs[i] - fz[i];
            auto u = solve(Fdeg, rhs, p);
            if (!u) throw std::invalid_argument("cdk_inverse: no lift in level " + std::to_string(n) + " (input is not a cyclic chain complex)");
            for (size_t j = 0; j < degcols.size(); ++j) z[degcols[j]] = p ? reduce(z[degcols[j]] + (*u)[j], p) : z[degcols[j]] + (*u)[j];
            return z;
        };

        Matrix T(G.rank[n], G.rank[n]);
        Matrix dd = C.has_delta_above(n) ? mul(C.boundary(n + 1), C.coboundary(n + 1), p) : Matrix(C.rank(n), C.rank(n));
        std::vector<i64> zero_prev(G.rank[n - 1], 0);
        for (size_t a = 0; a < G.sigma[n].size(); ++a) {
            const auto& sigma = G.sigma[n][a];
            int k = sigma.n;
            for (int x = 0; x < C.rank(k); ++x) {
                std::vector<i64> col;
                if (static_cast<int>(a) == ida) {
                    // faces (0, ..., 0, d x); Moore coordinate (-1)^n x + d delta x
                    std::vector<std::vector<i64>> faces(n + 1, zero_prev);
                    faces[n] = embed_id(n - 1, matvec(C.boundary(n), unit(C.rank(n), x), p));
                    std::vector<i64> c = dd.column(x);
                    c[x] += n % 2 ? -1 : 1;
                    col = lift(faces, c);
                } else {
                    int i = 1;
                    while (i < n && sigma.img[i] != sigma.img[i + 1]) ++i;
                    std::vector<int> rest(sigma.img.begin(), sigma.img.end());
                    if (i < n) {
                        // t^{-1} s_i = s_{i-1} t^{-1} for i >= 1
                        rest.erase(rest.begin() + i);
                        SimplicialOperator sp(k, rest);
                        int b = static_cast<int>(std::find(G.sigma[n - 1].begin(), G.sigma[n - 1].end(), sp) - G.sigma[n - 1].begin());
                        auto y = unit(G.rank[n - 1], G.offset[n - 1][b] + x);
                        col = matvec(M.s(n - 1, i - 1), matvec(tau[n - 1], y, p), p);
                    } else {
                        // sigma = sigma_0: s_0 x with faces (t^{-1} x, 0, ..., 0, x) and Moore coordinate delta x
                        auto ex = embed_id(n - 1, unit(C.rank(n - 1), x));
                        std::vector<std::vector<i64>> faces(n + 1, zero_prev);
                        faces[0] = matvec(tau[n - 1], ex, p);
                        faces[n] = ex;
                        col = lift(faces, C.coboundary(n).column(x));
                    }
                }
                T.set_column(G.offset[n][a] + x, col);
            }
        }
        tau[n] = p ? T.reduced(p) : T;
    }
    for (int n = 0; n <= D; ++n) M.action[n]["t"] = power(tau[n], n, p);
    return M;
}

// ---------------------------------------------------------------------------
// Hochschild and cyclic homology

struct CyclicOperators {
    i64 ring = 0;
    std::vector<Matrix> b, bprime, t, N;  // per level; b[n], bprime[n]: M_n -> M_{n-1}
};

inline CyclicOperators cyclic_operators(const DeltaGModule& M) {
    detail::require_cyclic(M);
    i64 p = M.field_or_z();
    CyclicOperators ops{p, {}, {}, {}, {}};
    for (int n = 0; n <= M.D; ++n) {
        int r = M.rank[n];
        Matrix b = n ? Matrix(M.rank[n - 1], r) : Matrix(0, r), bp = b;
        for (int i = 0; n >= 1 && i <= n; ++i) {
            i64 sgn = i % 2 ? -1 : 1;
            b = add(b, M.d(n, i), p, sgn);
            if (i < n) bp = add(bp, M.d(n, i), p, sgn);
        }
        Matrix t = scale(M.action[n].at("t"), n % 2 ? -1 : 1, p);
        Matrix N = Matrix(r, r), ti = Matrix::identity(r);
        for (int i = 0; i <= n; ++i) {
            N = add(N, ti, p);
            ti = mul(t, ti, p);
        }
        ops.b.push_back(b);
        ops.bprime.push_back(bp);
        ops.t.push_back(t);
        ops.N.push_back(N);
    }
    return ops;
}

/// (1 - t) b' = b (1 - t) and b' N = N b at every level; returns the first failure.
inline std::vector<std::string> check_cyclic_identities(const CyclicOperators& ops) {
    std::vector<std::string> out;
    i64 p = ops.ring;
    for (size_t n = 1; n < ops.b.size(); ++n) {
        Matrix I = Matrix::identity(ops.t[n].rows()), Ip = Matrix::identity(ops.t[n - 1].rows());
        Matrix lhs = mul(add(Ip, ops.t[n - 1], p, -1), ops.bprime[n], p);
        Matrix rhs = mul(ops.b[n], add(I, ops.t[n], p, -1), p);
        if (!equal_mod(lhs, rhs, p)) out.push_back("(1-t)b' != b(1-t) at level " + std::to_string(n));
        if (!equal_mod(mul(ops.bprime[n], ops.N[n], p), mul(ops.N[n - 1], ops.b[n], p), p))
            out.push_back("b'N != Nb at level " + std::to_string(n));
    }
    return out;
}

struct CyclicHomology {
    HomologyGroups HC, HH;
};

/// Total complex of the cyclic bicomplex (columns b, -b'; rows 1-t, N) through degree D.
inline ChainComplex cyclic_total_complex(const DeltaGModule& M) {
    auto ops = cyclic_operators(M);
    auto bad = check_cyclic_identities(ops);
    if (!bad.empty()) throw std::invalid_argument("cyclic bicomplex: " + bad.front());
    i64 p = ops.ring;
    int D = M.D;
    // degree k = sum over columns c = 0..k of M_{k-c}; block offsets by column
    auto offsets = [&](int k) {
        std::vector<int> off{0};
        for (int c = 0; c <= k; ++c) off.push_back(off.back() + M.rank[k - c]);
        return off;
    };
    std::vector<int> ranks;
    std::vector<Matrix> ds;
    for (int k = 0; k <= D; ++k) {
        auto off = offsets(k);
        ranks.push_back(off.back());
        if (k == 0) { ds.emplace_back(0, ranks[0]); continue; }
        auto offd = offsets(k - 1);
        Matrix d(offd.back(), off.back());
        auto put = [&](const Matrix& blk, int r0, int c0) {
            for (int i = 0; i < blk.rows(); ++i)
                for (int j = 0; j < blk.cols(); ++j) d(r0 + i, c0 + j) = blk(i, j);
        };
        for (int c = 0; c <= k; ++c) {
            int q = k - c;
            if (q >= 1) {
                Matrix v = c % 2 ? scale(ops.bprime[q], -1, p) : ops.b[q];
                put(v, offd[c], off[c]);  // column c, level q-1 in degree k-1
            }
            if (c >= 1) {
                Matrix I = Matrix::identity(M.rank[q]);
                Matrix h = c % 2 ? add(I, ops.t[q], p, -1) : ops.N[q];
                put(h, offd[c - 1], off[c]);  // column c-1, level q in degree k-1
            }
        }
        ds.push_back(p ? d.reduced(p) : d);
    }
    return ChainComplex::make(p, ranks, ds, false);
}

inline ChainComplex hochschild_complex(const DeltaGModule& M) {
    auto ops = cyclic_operators(M);
    std::vector<Matrix> ds = ops.b;
    ds[0] = Matrix(0, M.rank[0]);
    return ChainComplex::make(ops.ring, M.rank, ds, false);
}

inline CyclicHomology cyclic_homology(const DeltaGModule& M, int n_max) {
    return {homology(cyclic_total_complex(M), n_max), homology(hochschild_complex(M), n_max)};
}

/// (M, b, B) with B = (1 - t) s N and s = t_{n+1} s_n the extra degeneracy (Connes' operator t unsigned).
struct MixedComplex {
    i64 ring = 0;
    std::vector<int> ranks;
    std::vector<Matrix> b;  // b[n]: M_n -> M_{n-1}
    std::vector<Matrix> B;  // B[n]: M_n -> M_{n+1}, n < top

    int top() const { return static_cast<int>(ranks.size()) - 1; }
};

inline MixedComplex mixed_complex(const DeltaGModule& M) {
    auto ops = cyclic_operators(M);
    i64 p = ops.ring;
    MixedComplex X{p, M.rank, ops.b, {}};
    for (int n = 0; n < M.D; ++n) {
        Matrix s = mul(M.action[n + 1].at("t"), M.s(n, n), p);
        Matrix I = Matrix::identity(M.rank[n + 1]);
        X.B.push_back(mul(add(I, ops.t[n + 1], p, -1), mul(s, ops.N[n], p), p));
    }
    return X;
}

/// b^2 = 0, B^2 = 0 and bB + Bb = 0 wherever defined.
inline std::vector<std::string> validate(const MixedComplex& X) {
    std::vector<std::string> out;
    i64 p = X.ring;
    for (int n = 0; n <= X.top(); ++n) {
        if (n >= 2 && !is_zero_mod(mul(X.b[n - 1], X.b[n], p), p)) out.push_back("b^2 != 0 at " + std::to_string(n));
        if (n + 2 <= X.top() && !is_zero_mod(mul(X.B[n + 1], X.B[n], p), p)) out.push_back("B^2 != 0 at " + std::to_string(n));
        if (n + 1 <= X.top()) {
            Matrix bB = mul(X.b[n + 1], X.B[n], p);
            if (n >= 1) bB = add(bB, mul(X.B[n - 1], X.b[n], p), p);
            if (!is_zero_mod(bB, p)) out.push_back("bB + Bb != 0 at " + std::to_string(n));
        }
    }
    return out;
}

/// Total complex of the (b, B) bicomplex: degree k = M_k + M_{k-2} + ...
inline ChainComplex mixed_total_complex(const MixedComplex& X) {
    i64 p = X.ring;
    auto slots = [&](int k) {
        std::vector<int> levels, off{0};
        for (int q = k; q >= 0; q -= 2) {
            levels.push_back(q);
            off.push_back(off.back() + X.ranks[q]);
        }
        return std::pair{levels, off};
    };
    std::vector<int> ranks;
    std::vector<Matrix> ds;
    for (int k = 0; k <= X.top(); ++k) {
        auto [lv, off] = slots(k);
        ranks.push_back(off.back());
        if (k == 0) { ds.emplace_back(0, ranks[0]); continue; }
        auto [lvd, offd] = slots(k - 1);
        Matrix d(offd.back(), off.back());
        auto put = [&](const Matrix& blk, int r0, int c0) {
            for (int i = 0; i < blk.rows(); ++i)
                for (int j = 0; j < blk.cols(); ++j) d(r0 + i, c0 + j) = blk(i, j);
        };
        for (size_t s = 0; s < lv.size(); ++s) {
            int q = lv[s];
            if (q >= 1 && s < lvd.size()) put(X.b[q], offd[s], off[s]);        // to level q-1, same slot
            if (s >= 1) put(X.B[q], offd[s - 1], off[s]);                      // to level q+1, previous slot
        }
        ds.push_back(p ? d.reduced(p) : d);
    }
    return ChainComplex::make(p, ranks, ds, false);
}

/// The trivial cyclic module: A in every level, all faces and degeneracies identity, t = id.
inline DeltaGModule trivial_cyclic_module(i64 q, int D) {
    DeltaGModule M(Family(Kind::cyclic), D, {q}, std::vector<int>(D + 1, 1));
    Matrix one = Matrix::identity(1);
    for (int n = 0; n <= D; ++n) {
        for (int i = 0; n >= 1 && i <= n; ++i) M.face[n].push_back(one);
        for (int i = 0; n < D && i <= n; ++i) M.degen[n].push_back(one);
        M.action[n]["t"] = one;
    }
    return M;
}

/// Borel cohomology of a point in the weak cyclic model: the cyclic total complex of the
/// trivial module Z, dualised over Z for Z summands and over F_p for Z/p summands. Composite
/// orders go through universal coefficients.
inline HomologyGroups equivariant_cohomology_point(const Family& F, const std::vector<i64>& A, int n_max) {
    if (F.kind != Kind::cyclic) throw std::invalid_argument("equivariant cohomology at a point is implemented for the cyclic family only");
    if (n_max < 0) throw std::invalid_argument("max degree must be non-negative");
    if (A.empty()) throw std::invalid_argument("empty coefficient list");
    for (i64 q : A)
        if (q < 0 || q == 1) throw std::invalid_argument("coefficient orders must be 0 or at least 2");
    auto T = cyclic_total_complex(trivial_cyclic_module(0, n_max + 1));
    HomologyGroups out;
    for (int n = 0; n <= n_max; ++n) out.degrees.push_back({n, AbelianGroup{}, T.trusted(n)});
    for (i64 q : A) {
        HomologyGroups part;
        if (q == 0) {
            part = cohomology(T, n_max);
        } else if (is_prime(q)) {
            std::vector<Matrix> ds;
            for (auto& m : T.d) ds.push_back(m.reduced(q));
            auto H = cohomology(ChainComplex::make(q, T.ranks, ds, T.bounded), n_max);
            part = H;
            for (auto& h : part.degrees) h.group = abelian_from_cyclics(std::vector<i64>(h.group.rank, q));
        } else {
            part = cohomology(T, n_max, abelian_from_cyclics(std::vector<i64>{q}));
        }
        for (int n = 0; n <= n_max; ++n) {
            out.degrees[n].group = detail::direct_sum(out.degrees[n].group, part[n]);
            out.degrees[n].trusted = out.degrees[n].trusted && part.degrees[n].trusted;
        }
    }
    return out;
}

} // namespace xsimp
