#ifndef POLYVAR_LP_HPP
#define POLYVAR_LP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "polyvar/linalg.hpp"

namespace polyvar {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    RVec x;         // basic feasible solution (a vertex) when Optimal
    Rat objective;  // c^T x when Optimal
};

/// Exact two-phase simplex with Bland's rule on
///     min c^T x   s.t.   A x = b,  x >= 0.
/// Bland's rule guarantees termination; all pivoting is in rationals.
LPResult simplex_solve(const RMat& A, const RVec& b, const RVec& c);

/// A general linear system with free variables:
/// <a,x> <= b rows and <a,x> = b rows.
struct LinSystem {
    std::size_t dim = 0;
    std::vector<std::pair<RVec, Rat>> ineqs;
    std::vector<std::pair<RVec, Rat>> eqs;

    void add_le(RVec a, Rat b) { ineqs.emplace_back(std::move(a), std::move(b)); }
    void add_eq(RVec a, Rat b) { eqs.emplace_back(std::move(a), std::move(b)); }
};

/// One feasible point of the system, or nullopt. Decided exactly by a
/// phase-1 simplex on the split/slacked standard form.
std::optional<RVec> find_feasible(const LinSystem& sys);

}  // namespace polyvar

#endif
