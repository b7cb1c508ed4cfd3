#include "polyvar/lp.hpp"

#include <cstddef>

namespace polyvar {

namespace {

// Tableau state: T = B^{-1} [A | b], basis[i] = variable basic in row i.
struct Tableau {
    std::size_t m, n;          // rows, structural+artificial variables
    RMat t;                    // m x (n+1), last column is rhs
    std::vector<std::size_t> basis;

    Rat& rhs(std::size_t i) { return t(i, n); }

    void pivot(std::size_t row, std::size_t col) {
        const Rat inv = Rat(1) / t(row, col);
        for (std::size_t j = 0; j <= n; ++j) t(row, j) *= inv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || t(i, col) == 0) continue;
            const Rat f = t(i, col);
            for (std::size_t j = 0; j <= n; ++j) t(i, j) -= f * t(row, j);
        }
        basis[row] = col;
    }

    // One simplex phase for objective c (length n). Returns false on
    // unboundedness. Bland: lowest-index entering, lowest-index leaving.
    bool run(const RVec& c) {
        for (;;) {
            std::size_t enter = n;
            for (std::size_t j = 0; j < n && enter == n; ++j) {
                Rat red = c[j];
                for (std::size_t i = 0; i < m; ++i)
                    if (t(i, j) != 0) red -= c[basis[i]] * t(i, j);
                if (red < 0) enter = j;
            }
            if (enter == n) return true;  // optimal
            std::size_t leave = m;
            Rat best;
            for (std::size_t i = 0; i < m; ++i) {
                if (t(i, enter) <= 0) continue;
                const Rat ratio = rhs(i) / t(i, enter);
                if (leave == m || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m) return false;  // unbounded
            pivot(leave, enter);
        }
    }
};

}  // namespace

LPResult simplex_solve(const RMat& A, const RVec& b, const RVec& c) {
    const std::size_t m = A.rows, n = A.cols;
    if (b.size() != m || c.size() != n) throw DimMismatch("simplex_solve");

    Tableau tab;
    tab.m = m;
    tab.n = n + m;  // structural + artificial
    tab.t = RMat(m, tab.n + 1);
    tab.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const int s = b[i] < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) tab.t(i, j) = s * A(i, j);
        tab.t(i, n + i) = 1;
        tab.basis[i] = n + i;
        tab.rhs(i) = s * b[i];
    }

    // Phase 1: min sum of artificials.
    RVec c1(tab.n, Rat(0));
    for (std::size_t j = n; j < tab.n; ++j) c1[j] = 1;
    tab.run(c1);  // bounded below by 0, never unbounded
    Rat art_sum = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= n) art_sum += tab.rhs(i);
    if (art_sum != 0) return {LPStatus::Infeasible, {}, Rat(0)};

    // Drive remaining artificials out of the basis (degenerate rows).
    for (std::size_t i = 0; i < m; ++i) {
        if (tab.basis[i] < n) continue;
        std::size_t col = n;
        for (std::size_t j = 0; j < n && col == n; ++j)
            if (tab.t(i, j) != 0) col = j;
        if (col < n) tab.pivot(i, col);
        // else: the row is 0 = 0 in the structural variables; the basic
        // artificial stays at value 0 and never re-enters (cost below).
    }

    // Phase 2 with artificials pinned by prohibitive reduced cost: give
    // them zero columns by zeroing is unsafe mid-tableau, so instead
    // extend c with a cost that keeps them at zero. A basic artificial at
    // value 0 in an all-zero row cannot change any ratio test.
    RVec c2(tab.n, Rat(0));
    for (std::size_t j = 0; j < n; ++j) c2[j] = c[j];
    for (std::size_t j = n; j < tab.n; ++j) c2[j] = 0;
    // Forbid artificials from entering: since their reduced cost is
    // computed from c2, zero out their columns so they never price in.
    for (std::size_t j = n; j < tab.n; ++j) {
        bool basic = false;
        for (std::size_t i = 0; i < m && !basic; ++i) basic = tab.basis[i] == j;
        if (!basic)
            for (std::size_t i = 0; i < m; ++i) tab.t(i, j) = 0;
    }
    if (!tab.run(c2)) return {LPStatus::Unbounded, {}, Rat(0)};

    RVec x(n, Rat(0));
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < n) x[tab.basis[i]] = tab.rhs(i);
    return {LPStatus::Optimal, x, dot(RVec(c.begin(), c.end()), x)};
}

std::optional<RVec> find_feasible(const LinSystem& sys) {
    const std::size_t d = sys.dim;
    const std::size_t n_ineq = sys.ineqs.size();
    // variables: x+ (d), x- (d), slacks (n_ineq)
    const std::size_t n = 2 * d + n_ineq;
    RMat A(sys.ineqs.size() + sys.eqs.size(), n);
    RVec b(A.rows, Rat(0));
    std::size_t r = 0;
    for (std::size_t k = 0; k < sys.ineqs.size(); ++k, ++r) {
        const auto& [a, rhs] = sys.ineqs[k];
        if (a.size() != d) throw DimMismatch("find_feasible ineq row");
        for (std::size_t j = 0; j < d; ++j) {
            A(r, j) = a[j];
            A(r, d + j) = -a[j];
        }
        A(r, 2 * d + k) = 1;
        b[r] = rhs;
    }
    for (const auto& [a, rhs] : sys.eqs) {
        if (a.size() != d) throw DimMismatch("find_feasible eq row");
        for (std::size_t j = 0; j < d; ++j) {
            A(r, j) = a[j];
            A(r, d + j) = -a[j];
        }
        b[r] = rhs;
        ++r;
    }
    const auto res = simplex_solve(A, b, RVec(n, Rat(0)));
    if (res.status != LPStatus::Optimal) return std::nullopt;
    RVec x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = res.x[j] - res.x[d + j];
    return x;
}

}  // namespace polyvar
