#ifndef POLYVAR_LINALG_HPP
#define POLYVAR_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "polyvar/rational.hpp"

namespace polyvar {

/// Dense rational vector. Dimension is fixed at construction.
using RVec = std::vector<Rat>;

/// Dense rational matrix, row major.
struct RMat {
    std::size_t rows = 0, cols = 0;
    std::vector<Rat> a;

    RMat() = default;
    RMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Rat(0)) {}

    Rat& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    RVec row(std::size_t i) const {
        return RVec(a.begin() + i * cols, a.begin() + (i + 1) * cols);
    }
    void push_row(const RVec& r) {
        if (rows == 0 && cols == 0) cols = r.size();
        if (r.size() != cols) throw DimMismatch("push_row: width mismatch");
        a.insert(a.end(), r.begin(), r.end());
        ++rows;
    }
    static RMat identity(std::size_t n) {
        RMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    RMat transposed() const {
        RMat t(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
};

inline RVec rvec_zero(std::size_t n) { return RVec(n, Rat(0)); }

inline Rat dot(const RVec& x, const RVec& y) {
    if (x.size() != y.size()) throw DimMismatch("dot: length mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline RVec add(const RVec& x, const RVec& y) {
    if (x.size() != y.size()) throw DimMismatch("add: length mismatch");
    RVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

inline RVec sub(const RVec& x, const RVec& y) {
    if (x.size() != y.size()) throw DimMismatch("sub: length mismatch");
    RVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

inline RVec scale(const Rat& c, const RVec& x) {
    RVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = c * x[i];
    return z;
}

inline RVec negate(const RVec& x) { return scale(Rat(-1), x); }

inline bool is_zero(const RVec& x) {
    return std::all_of(x.begin(), x.end(), [](const Rat& q) { return q == 0; });
}

inline Rat norm2_sq(const RVec& x) { return dot(x, x); }

/// 1-norm; an exact upper bound for the Euclidean norm used wherever a
/// rational norm surrogate is needed.
inline Rat norm1(const RVec& x) {
    Rat s = 0;
    for (const Rat& q : x) s += rat_abs(q);
    return s;
}

inline RVec mat_vec(const RMat& m, const RVec& x) {
    if (m.cols != x.size()) throw DimMismatch("mat_vec");
    RVec y(m.rows, Rat(0));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
    return y;
}

inline RMat mat_mul(const RMat& a, const RMat& b) {
    if (a.cols != b.rows) throw DimMismatch("mat_mul");
    RMat c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

/// Scales to a colinear integer vector with coefficient gcd 1. Direction is
/// preserved (no sign flip); the zero vector maps to itself. Canonical form
/// for deduplicating rays and constraint normals.
inline RVec primitive(const RVec& x) {
    if (is_zero(x)) return rvec_zero(x.size());
    mpz_class lcm_den = 1;
    for (const Rat& q : x) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den().get_mpz_t());
    mpz_class g = 0;
    std::vector<mpz_class> ints(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        ints[i] = x[i].get_num() * (lcm_den / x[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
    }
    RVec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = Rat(ints[i] / g);
    return z;
}

/// primitive() with the first nonzero entry made positive; canonical for
/// lines and equality normals where both directions describe the same set.
inline RVec primitive_signed(const RVec& x) {
    RVec z = primitive(x);
    for (const Rat& q : z) {
        if (q != 0) {
            if (q < 0) z = negate(z);
            break;
        }
    }
    return z;
}

inline bool lex_less(const RVec& x, const RVec& y) {
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (x[i] != y[i]) return x[i] < y[i];
    }
    return x.size() < y.size();
}

// ---------------------------------------------------------------------------
// Exact Gaussian elimination
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<std::size_t> rref(RMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m(p, c) == 0) ++p;
        if (p == m.rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
        const Rat inv = Rat(1) / m(r, c);
        for (std::size_t j = 0; j < m.cols; ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Rat f = m(i, c);
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(RMat m) { return rref(m).size(); }

/// One solution of A x = b, or nullopt when inconsistent. Free variables
/// are set to zero.
inline std::optional<RVec> solve(const RMat& A, const RVec& b) {
    if (A.rows != b.size()) throw DimMismatch("solve");
    RMat aug(A.rows, A.cols + 1);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
        aug(i, A.cols) = b[i];
    }
    const auto piv = rref(aug);
    if (!piv.empty() && piv.back() == A.cols) return std::nullopt;  // 0 = 1 row
    RVec x(A.cols, Rat(0));
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug(k, A.cols);
    return x;
}

/// Basis of the null space of A (RREF back-substitution; deterministic).
inline std::vector<RVec> nullspace(RMat A) {
    const std::size_t n = A.cols;
    const auto piv = rref(A);
    std::vector<bool> is_piv(n, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<RVec> basis;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_piv[c]) continue;
        RVec v(n, Rat(0));
        v[c] = 1;
        for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -A(k, c);
        basis.push_back(primitive_signed(v));
    }
    return basis;
}

/// Extracts a linearly independent subset (in input order).
inline std::vector<RVec> independent_subset(const std::vector<RVec>& vs) {
    std::vector<RVec> out;
    RMat m;
    for (const auto& v : vs) {
        if (is_zero(v)) continue;
        RMat trial = m;
        trial.push_row(v);
        if (rank(trial) > out.size()) {
            out.push_back(v);
            m = std::move(trial);
        }
    }
    return out;
}

/// Orthogonal projection matrix onto span of the given vectors (exact):
/// P = B (B^T B)^{-1} B^T with B a column basis extracted from `span`.
inline RMat projection_matrix(std::size_t dim, const std::vector<RVec>& span) {
    const auto basis = independent_subset(span);
    if (basis.empty()) return RMat(dim, dim);  // projection onto {0}
    RMat B(dim, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i) B(i, j) = basis[j][i];
    const RMat Bt = B.transposed();
    const RMat G = mat_mul(Bt, B);
    // columns of (B^T B)^{-1} B^T via exact solves
    RMat X(basis.size(), dim);
    for (std::size_t j = 0; j < dim; ++j) {
        RVec rhs(basis.size());
        for (std::size_t k = 0; k < basis.size(); ++k) rhs[k] = Bt(k, j);
        auto col = solve(G, rhs);
        if (!col) throw VerificationFailure("projection_matrix: gram matrix singular");
        for (std::size_t k = 0; k < basis.size(); ++k) X(k, j) = (*col)[k];
    }
    return mat_mul(B, X);
}

}  // namespace polyvar

#endif
