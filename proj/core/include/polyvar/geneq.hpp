#ifndef POLYVAR_GENEQ_HPP
#define POLYVAR_GENEQ_HPP

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "polyvar/polyfunc.hpp"
#include "polyvar/prox.hpp"
#include "polyvar/second_order.hpp"

namespace polyvar {

/// Polynomial map with analytic derivatives; the restricted expression
/// form accepted from problem files. Each output row is a sum of
/// coefficient * monomial terms.
struct PolyTerm {
    double coef = 0;
    std::vector<unsigned> powers;  // one exponent per input variable
};

struct PolyMap {
    std::size_t in_dim = 0, out_dim = 0;
    std::vector<std::vector<PolyTerm>> rows;

    Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian_of_row(std::size_t k, const Eigen::VectorXd& x) const;
};

/// 0 in psi(x) + subdifferential g(x). psi-side numerics run in floats;
/// every polyhedral decision is exact after dyadic rationalization.
struct GEProblem {
    std::size_t dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> psi;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jpsi;
    PolyhedralFunc g;

    static GEProblem from_poly(const PolyMap& map, PolyhedralFunc g);
};

/// Composite problem minimize phi(x) + g(Phi(x)) with C2 data; the KKT
/// system is analyzed through the conjugate-side generalized equation.
struct KKTProblem {
    std::size_t n = 0, m = 0;
    PolyMap phi;      // objective, out_dim 1
    PolyMap big_phi;  // constraint map, out_dim m
    PolyhedralFunc g;
};

/// Spot-check that jpsi is the Jacobian of psi by central differences.
/// Throws VerificationFailure beyond tol.
void verify_jacobian(const GEProblem& p, const Eigen::VectorXd& x, double tol = 1e-5);

/// Rank by pivoted elimination with an absolute pivot threshold.
std::size_t float_rank(Eigen::MatrixXd m, double threshold = 1e-9);

struct SnappedPair {
    RVec z;
    RVec lambda;  // exact projection of the raw multiplier onto the subdifferential
    Rat dist_sq;
};

/// Exact projection of a rationalized multiplier onto the subdifferential
/// polyhedron at z; nullopt when the distance exceeds tol.
std::optional<SnappedPair> snap_to_subdifferential(const PolyhedralFunc& g, const RVec& z,
                                                   const RVec& lambda_raw, double tol,
                                                   const Caps& caps = {});

/// -psi(x) lies in the relative interior of the subdifferential at x.
bool nondegeneracy_test(const GEProblem& p, const Eigen::VectorXd& x, double tol = 1e-8,
                        const Caps& caps = {});

struct MRCriteria {
    bool range_cover = false;   // image of the critical subspace plus its
                                // orthogonal complement spans everything
    bool kernel_trivial = false;  // reduced matrix has no kernel
};

/// The two equivalent regularity criteria at a nondegenerate solution,
/// each computed by its own rank test and asserted to agree.
MRCriteria mr_criteria(const GEProblem& p, const Eigen::VectorXd& x, double tol = 1e-8,
                       const Caps& caps = {});

enum class RegularityStatus { not_metrically_regular, strongly_metrically_regular };

/// Two-outcome verdict: metric regularity and strong metric regularity
/// coincide here, so no intermediate state exists. Nondegenerate solutions
/// go through the subspace criteria; degenerate ones through the piecewise
/// coderivative test.
RegularityStatus regularity_status(const GEProblem& p, const Eigen::VectorXd& x,
                                   double tol = 1e-8, const Caps& caps = {});

struct LocalizationResult {
    Eigen::VectorXd y;
    Eigen::VectorXd x;  // sigma(y)
    std::optional<Eigen::MatrixXd> jacobian_sigma;
    int newton_iterations = 0;
    double residual = 0;
};

/// Semismooth Newton on the natural map x - prox_g(x - psi(x) + y) with
/// r = 1, started from x0. Residual below 1e-10 or NoConvergence after 50
/// iterations.
LocalizationResult solve_localization(const GEProblem& p, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& y, const Caps& caps = {});

/// Coderivative criterion for the KKT system: no limiting piece admits a
/// nonzero solution of the cone-constrained linear system. Equivalent to
/// metric regularity, strong metric regularity, and Lipschitz localization
/// of the KKT solution map.
bool kkt_regularity(const KKTProblem& k, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda, double tol = 1e-8, const Caps& caps = {});

// conversions used at the float/rational boundary
RVec rationalize(const Eigen::VectorXd& x);
RMat rationalize(const Eigen::MatrixXd& m);
Eigen::VectorXd to_float(const RVec& x);
Eigen::MatrixXd to_float(const RMat& m);

/// Nonzero-vector detection in {x : eq x = 0, le x <= 0} by exact
/// feasibility of every sign-orthant slice under an l1 normalization.
bool cone_system_has_nonzero(std::size_t dim, const std::vector<RVec>& eq_rows,
                             const std::vector<RVec>& le_rows);

}  // namespace polyvar

#endif
