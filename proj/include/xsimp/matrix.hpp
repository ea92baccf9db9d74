#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace xsimp {

using i64 = std::int64_t;

inline i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
    return r;
}

inline i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in subtraction");
    return r;
}

inline i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
    return r;
}

// Non-negative residue. m == 0 means the integers, so the value is returned unchanged.
inline i64 reduce(i64 a, i64 m) {
    if (m == 0) return a;
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 pmod(i64 a, i64 m) { return reduce(a, m); }

inline i64 mod_inverse(i64 a, i64 p) {
    i64 t = 0, nt = 1, r = p, nr = reduce(a, p);
    while (nr != 0) {
        i64 q = r / nr;
        t = t - q * nt; std::swap(t, nt);
        r = r - q * nr; std::swap(r, nr);
    }
    if (r != 1) throw std::domain_error("element not invertible modulo " + std::to_string(p));
    return reduce(t, p);
}

inline bool is_prime(i64 p) {
    if (p < 2) return false;
    for (i64 d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Dense integer matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, 0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }
    Matrix(int rows, int cols, std::vector<i64> data) : r_(rows), c_(cols), a_(std::move(data)) {
        if (a_.size() != static_cast<size_t>(rows) * cols) throw std::invalid_argument("matrix data size mismatch");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<i64>>& rows, int cols = -1) {
        int r = static_cast<int>(rows.size());
        int c = cols >= 0 ? cols : (r ? static_cast<int>(rows[0].size()) : 0);
        Matrix m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged matrix rows");
            for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    bool empty() const { return r_ == 0 || c_ == 0; }

    i64& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    i64 operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    const std::vector<i64>& data() const { return a_; }

    bool is_zero() const {
        for (i64 v : a_) if (v != 0) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(c_, r_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    // Entries reduced into [0, m); m == 0 leaves the matrix unchanged.
    Matrix reduced(i64 m) const {
        if (m == 0) return *this;
        Matrix t = *this;
        for (auto& v : t.a_) v = reduce(v, m);
        return t;
    }

    std::vector<i64> column(int j) const {
        std::vector<i64> v(r_);
        for (int i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    std::vector<i64> row(int i) const {
        return std::vector<i64>(a_.begin() + static_cast<long>(i) * c_, a_.begin() + static_cast<long>(i + 1) * c_);
    }

    void set_column(int j, const std::vector<i64>& v) {
        for (int i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }

    Matrix submatrix(int r0, int c0, int nr, int nc) const {
        Matrix s(nr, nc);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
        return s;
    }

    Matrix columns(const std::vector<int>& idx) const {
        Matrix s(r_, static_cast<int>(idx.size()));
        for (int i = 0; i < r_; ++i)
            for (size_t j = 0; j < idx.size(); ++j) s(i, static_cast<int>(j)) = (*this)(i, idx[j]);
        return s;
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

private:
    int r_ = 0, c_ = 0;
    std::vector<i64> a_;
};

inline void require_shape(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("matrix shape mismatch in ") + what);
}

inline Matrix mul(const Matrix& x, const Matrix& y, i64 m = 0) {
    require_shape(x.cols() == y.rows(), "mul");
    Matrix z(x.rows(), y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k) {
            i64 a = x(i, k);
            if (a == 0) continue;
            for (int j = 0; j < y.cols(); ++j) {
                i64 b = y(k, j);
                if (b == 0) continue;
                z(i, j) = m ? reduce(z(i, j) + reduce(a, m) * reduce(b, m), m)
                            : checked_add(z(i, j), checked_mul(a, b));
            }
        }
    return z;
}

inline Matrix add(const Matrix& x, const Matrix& y, i64 m = 0, i64 scale = 1) {
    require_shape(x.rows() == y.rows() && x.cols() == y.cols(), "add");
    Matrix z(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            z(i, j) = m ? reduce(x(i, j) + reduce(scale, m) * reduce(y(i, j), m), m)
                        : checked_add(x(i, j), checked_mul(scale, y(i, j)));
    return z;
}

inline Matrix scale(const Matrix& x, i64 s, i64 m = 0) {
    Matrix z(x.rows(), x.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            z(i, j) = m ? reduce(reduce(s, m) * reduce(x(i, j), m), m) : checked_mul(s, x(i, j));
    return z;
}

inline Matrix power(const Matrix& x, int e, i64 m = 0) {
    Matrix r = Matrix::identity(x.rows());
    for (int i = 0; i < e; ++i) r = mul(r, x, m);
    return r;
}

inline std::vector<i64> matvec(const Matrix& x, const std::vector<i64>& v, i64 m = 0) {
    require_shape(static_cast<int>(v.size()) == x.cols(), "matvec");
    std::vector<i64> out(x.rows(), 0);
    for (int i = 0; i < x.rows(); ++i) {
        i64 s = 0;
        for (int j = 0; j < x.cols(); ++j) {
            if (x(i, j) == 0 || v[j] == 0) continue;
            s = m ? reduce(s + reduce(x(i, j), m) * reduce(v[j], m), m) : checked_add(s, checked_mul(x(i, j), v[j]));
        }
        out[i] = s;
    }
    return out;
}

inline bool equal_mod(const Matrix& x, const Matrix& y, i64 m) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j)
            if (reduce(x(i, j) - y(i, j), m) != 0) return false;
    return true;
}

inline bool is_zero_mod(const Matrix& x, i64 m) {
    for (i64 v : x.data())
        if (reduce(v, m) != 0) return false;
    return true;
}

// Block matrices: stack vertically / horizontally, direct sum.
inline Matrix vstack(const std::vector<Matrix>& blocks, int cols) {
    int r = 0;
    for (auto& b : blocks) { require_shape(b.cols() == cols, "vstack"); r += b.rows(); }
    Matrix z(r, cols);
    int off = 0;
    for (auto& b : blocks) {
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < cols; ++j) z(off + i, j) = b(i, j);
        off += b.rows();
    }
    return z;
}

inline Matrix hstack(const std::vector<Matrix>& blocks, int rows) {
    int c = 0;
    for (auto& b : blocks) { require_shape(b.rows() == rows, "hstack"); c += b.cols(); }
    Matrix z(rows, c);
    int off = 0;
    for (auto& b : blocks) {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < b.cols(); ++j) z(i, off + j) = b(i, j);
        off += b.cols();
    }
    return z;
}

inline Matrix direct_sum(const Matrix& x, const Matrix& y) {
    Matrix z(x.rows() + y.rows(), x.cols() + y.cols());
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) z(i, j) = x(i, j);
    for (int i = 0; i < y.rows(); ++i)
        for (int j = 0; j < y.cols(); ++j) z(x.rows() + i, x.cols() + j) = y(i, j);
    return z;
}

inline std::string to_string(const Matrix& m) {
    std::string s = "[";
    for (int i = 0; i < m.rows(); ++i) {
        s += i ? ",[" : "[";
        for (int j = 0; j < m.cols(); ++j) s += (j ? "," : "") + std::to_string(m(i, j));
        s += "]";
    }
    return s + "]";
}

} // namespace xsimp
