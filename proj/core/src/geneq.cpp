#include "polyvar/geneq.hpp"

#include <cmath>

#include "polyvar/errors.hpp"
#include "polyvar/lp.hpp"

namespace polyvar {

// ---------------------------------------------------------------------------
// Polynomial maps
// ---------------------------------------------------------------------------

namespace {

double eval_monomial(const std::vector<unsigned>& powers, const Eigen::VectorXd& x) {
    double v = 1;
    for (std::size_t k = 0; k < powers.size(); ++k)
        for (unsigned e = 0; e < powers[k]; ++e) v *= x[static_cast<Eigen::Index>(k)];
    return v;
}

}  // namespace

Eigen::VectorXd PolyMap::eval(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_dim));
    for (std::size_t i = 0; i < out_dim; ++i)
        for (const auto& t : rows[i]) out[static_cast<Eigen::Index>(i)] += t.coef * eval_monomial(t.powers, x);
    return out;
}

Eigen::MatrixXd PolyMap::jacobian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(out_dim),
                                                static_cast<Eigen::Index>(in_dim));
    for (std::size_t i = 0; i < out_dim; ++i) {
        for (const auto& t : rows[i]) {
            for (std::size_t j = 0; j < in_dim; ++j) {
                if (t.powers[j] == 0) continue;
                auto dp = t.powers;
                dp[j] -= 1;
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    t.coef * t.powers[j] * eval_monomial(dp, x);
            }
        }
    }
    return out;
}

Eigen::MatrixXd PolyMap::hessian_of_row(std::size_t k, const Eigen::VectorXd& x) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(in_dim),
                                                static_cast<Eigen::Index>(in_dim));
    for (const auto& t : rows[k]) {
        for (std::size_t a = 0; a < in_dim; ++a) {
            if (t.powers[a] == 0) continue;
            for (std::size_t b = 0; b < in_dim; ++b) {
                auto dp = t.powers;
                dp[a] -= 1;
                const unsigned pb = dp[b];
                if (pb == 0) continue;
                dp[b] -= 1;
                out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
                    t.coef * t.powers[a] * pb * eval_monomial(dp, x);
            }
        }
    }
    return out;
}

GEProblem GEProblem::from_poly(const PolyMap& map, PolyhedralFunc g) {
    if (map.in_dim != map.out_dim || map.in_dim != g.dim)
        throw DimMismatch("GEProblem::from_poly: psi must map R^m to R^m");
    GEProblem p;
    p.dim = g.dim;
    p.psi = [map](const Eigen::VectorXd& x) { return map.eval(x); };
    p.jpsi = [map](const Eigen::VectorXd& x) { return map.jacobian(x); };
    p.g = std::move(g);
    return p;
}

// ---------------------------------------------------------------------------
// Float/rational boundary
// ---------------------------------------------------------------------------

RVec rationalize(const Eigen::VectorXd& x) {
    RVec out(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = rat_of_double(x[i]);
    return out;
}

RMat rationalize(const Eigen::MatrixXd& m) {
    RMat out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = rat_of_double(m(i, j));
    return out;
}

Eigen::VectorXd to_float(const RVec& x) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = to_double(x[i]);
    return out;
}

Eigen::MatrixXd to_float(const RMat& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    return out;
}

void verify_jacobian(const GEProblem& p, const Eigen::VectorXd& x, double tol) {
    const double h = 1e-6;
    const Eigen::MatrixXd j = p.jpsi(x);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const Eigen::VectorXd col = (p.psi(xp) - p.psi(xm)) / (2 * h);
        if ((col - j.col(k)).lpNorm<Eigen::Infinity>() > tol)
            throw VerificationFailure("jpsi disagrees with finite differences of psi");
    }
}

std::size_t float_rank(Eigen::MatrixXd m, double threshold) {
    std::size_t r = 0;
    const Eigen::Index rows = m.rows(), cols = m.cols();
    for (Eigen::Index c = 0; c < cols && static_cast<Eigen::Index>(r) < rows; ++c) {
        Eigen::Index piv = -1;
        double best = threshold;
        for (Eigen::Index i = static_cast<Eigen::Index>(r); i < rows; ++i)
            if (std::abs(m(i, c)) > best) {
                best = std::abs(m(i, c));
                piv = i;
            }
        if (piv < 0) continue;
        m.row(piv).swap(m.row(static_cast<Eigen::Index>(r)));
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (i == static_cast<Eigen::Index>(r)) continue;
            const double f = m(i, c) / m(static_cast<Eigen::Index>(r), c);
            if (f != 0) m.row(i) -= f * m.row(static_cast<Eigen::Index>(r));
        }
        ++r;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Nondegeneracy and regularity criteria
// ---------------------------------------------------------------------------

std::optional<SnappedPair> snap_to_subdifferential(const PolyhedralFunc& g, const RVec& z,
                                                   const RVec& lambda_raw, double tol,
                                                   const Caps& caps) {
    const HPolyhedron sub_h = to_hrep(subdifferential(g, z), caps);
    const RVec proj = project_polyhedron(sub_h, lambda_raw, caps);
    const Rat dist_sq = norm2_sq(sub(lambda_raw, proj));
    const Rat tol_rat = rat_of_double(tol);
    if (dist_sq > tol_rat * tol_rat) return std::nullopt;
    return SnappedPair{z, proj, dist_sq};
}

bool nondegeneracy_test(const GEProblem& p, const Eigen::VectorXd& x, double tol,
                        const Caps& caps) {
    verify_jacobian(p, x);
    const RVec z = rationalize(x);
    if (!p.g.in_domain(z))
        throw NotInDomain("nondegeneracy_test: rationalized point left dom g");
    const RVec lambda_raw = rationalize(Eigen::VectorXd(-p.psi(x)));
    const auto snapped = snap_to_subdifferential(p.g, z, lambda_raw, tol, caps);
    if (!snapped) throw NotSolution("-psi(x) is farther than tol from the subdifferential");
    return is_ri_subgradient(p.g, z, snapped->lambda, caps);
}

MRCriteria mr_criteria(const GEProblem& p, const Eigen::VectorXd& x, double tol,
                       const Caps& caps) {
    if (!nondegeneracy_test(p, x, tol, caps))
        throw DegenerateSolution("mr_criteria needs a nondegenerate solution");
    const RVec z = rationalize(x);
    const RVec lambda_raw = rationalize(Eigen::VectorXd(-p.psi(x)));
    const auto snapped = snap_to_subdifferential(p.g, z, lambda_raw, tol, caps);
    const CriticalCone crit = critical_cone(p.g, z, snapped->lambda, caps);

    const auto& basis = crit.cone.lineality_basis();
    const std::size_t m = p.dim, s = basis.size();
    Eigen::MatrixXd B(m, s);
    for (std::size_t j = 0; j < s; ++j) B.col(static_cast<Eigen::Index>(j)) = to_float(basis[j]);
    std::vector<RVec> bperp_basis;
    if (s == 0) {
        for (std::size_t i = 0; i < m; ++i) {
            RVec e = rvec_zero(m);
            e[i] = 1;
            bperp_basis.push_back(std::move(e));
        }
    } else {
        RMat rows(0, m);
        for (const auto& b : basis) rows.push_row(b);
        bperp_basis = nullspace(std::move(rows));
    }
    Eigen::MatrixXd Bperp(m, bperp_basis.size());
    for (std::size_t j = 0; j < bperp_basis.size(); ++j)
        Bperp.col(static_cast<Eigen::Index>(j)) = to_float(bperp_basis[j]);

    const Eigen::MatrixXd J = p.jpsi(x);
    MRCriteria out;
    {
        Eigen::MatrixXd span(m, s + bperp_basis.size());
        if (s > 0) span.leftCols(static_cast<Eigen::Index>(s)) = J * B;
        if (!bperp_basis.empty()) span.rightCols(static_cast<Eigen::Index>(bperp_basis.size())) = Bperp;
        out.range_cover = float_rank(span) == m;
    }
    out.kernel_trivial = s == 0 || float_rank(B.transpose() * J * B) == s;
    if (out.range_cover != out.kernel_trivial)
        throw VerificationFailure("regularity criteria disagree");
    return out;
}

bool cone_system_has_nonzero(std::size_t dim, const std::vector<RVec>& eq_rows,
                             const std::vector<RVec>& le_rows) {
    if (dim > 16) throw CapExceeded("cone_system_has_nonzero: dimension");
    for (std::uint32_t pattern = 0; pattern < (1u << dim); ++pattern) {
        LinSystem sys;
        sys.dim = dim;
        for (const auto& r : eq_rows) sys.add_eq(r, Rat(0));
        for (const auto& r : le_rows) sys.add_le(r, Rat(0));
        RVec norm_row(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const int s = pattern >> i & 1 ? -1 : 1;
            RVec sign_row = rvec_zero(dim);
            sign_row[i] = -s;  // s * x_i >= 0
            sys.add_le(std::move(sign_row), Rat(0));
            norm_row[i] = s;
        }
        sys.add_eq(std::move(norm_row), Rat(1));  // sum |x_i| = 1 on the slice
        if (find_feasible(sys)) return true;
    }
    return false;
}

namespace {

// rows of "M x inside cone D": halfspace(D) * M x <= 0
std::vector<RVec> mapped_cone_rows(const PolyCone& d, const RMat& m) {
    std::vector<RVec> rows;
    for (const auto& c : d.halfspaces()) {
        RVec row(m.cols, Rat(0));
        for (std::size_t j = 0; j < m.cols; ++j)
            for (std::size_t i = 0; i < m.rows; ++i) row[j] += c[i] * m(i, j);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

RegularityStatus regularity_status(const GEProblem& p, const Eigen::VectorXd& x, double tol,
                                   const Caps& caps) {
    verify_jacobian(p, x);
    const RVec z = rationalize(x);
    if (!p.g.in_domain(z))
        throw NotInDomain("regularity_status: rationalized point left dom g");
    const RVec lambda_raw = rationalize(Eigen::VectorXd(-p.psi(x)));
    const auto snapped = snap_to_subdifferential(p.g, z, lambda_raw, tol, caps);
    if (!snapped) throw NotSolution("x does not solve the generalized equation within tol");

    if (is_ri_subgradient(p.g, z, snapped->lambda, caps)) {
        const MRCriteria c = mr_criteria(p, x, tol, caps);
        return c.kernel_trivial ? RegularityStatus::strongly_metrically_regular
                                : RegularityStatus::not_metrically_regular;
    }
    // degenerate solution: piecewise coderivative criterion on the
    // limiting normal cone. Metric regularity fails exactly when some
    // piece carries a nonzero w with (-J^T w, -w) in D* x D.
    const CriticalCone crit = critical_cone(p.g, z, snapped->lambda, caps);
    const RMat Jt = rationalize(Eigen::MatrixXd(p.jpsi(x).transpose()));
    RMat minus_Jt(p.dim, p.dim), minus_I(p.dim, p.dim);
    for (std::size_t i = 0; i < p.dim; ++i) {
        minus_I(i, i) = -1;
        for (std::size_t j = 0; j < p.dim; ++j) minus_Jt(i, j) = -Jt(i, j);
    }
    for (const auto& d : limiting_difference_cones(crit.cone, caps)) {
        std::vector<RVec> le = mapped_cone_rows(d.polar(), minus_Jt);
        for (auto& row : mapped_cone_rows(d, minus_I)) le.push_back(std::move(row));
        if (cone_system_has_nonzero(p.dim, {}, le))
            return RegularityStatus::not_metrically_regular;
    }
    return RegularityStatus::strongly_metrically_regular;
}

// ---------------------------------------------------------------------------
// Localization
// ---------------------------------------------------------------------------

LocalizationResult solve_localization(const GEProblem& p, const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& y, const Caps& caps) {
    verify_jacobian(p, x0);
    const std::size_t m = p.dim;
    Eigen::VectorXd x = x0;
    ProxResult last_prox;
    for (int it = 0; it < 50; ++it) {
        const Eigen::VectorXd u_f = x - p.psi(x) + y;
        last_prox = prox(p.g, Rat(1), rationalize(u_f), caps);
        const Eigen::VectorXd fx = x - to_float(last_prox.y);
        const double residual = fx.norm();
        if (residual <= 1e-10) {
            LocalizationResult out;
            out.y = y;
            out.x = to_float(last_prox.y);
            out.newton_iterations = it;
            out.residual = residual;
            // exact solution pair read off the prox fixed point
            const CriticalCone crit = critical_cone(p.g, last_prox.y, last_prox.v, caps);
            if (crit.cone.is_subspace()) {
                const auto& basis = crit.cone.lineality_basis();
                const std::size_t s = basis.size();
                if (s == 0) {
                    out.jacobian_sigma = Eigen::MatrixXd::Zero(m, m);
                } else {
                    Eigen::MatrixXd B(m, s);
                    for (std::size_t j = 0; j < s; ++j)
                        B.col(static_cast<Eigen::Index>(j)) = to_float(basis[j]);
                    const Eigen::MatrixXd red = B.transpose() * p.jpsi(out.x) * B;
                    out.jacobian_sigma = B * red.inverse() * B.transpose();
                }
            }
            return out;
        }
        // Newton element from the smallest-face projection at the current
        // prox pair (a B-subdifferential element of the natural map)
        const CriticalCone crit = critical_cone(p.g, last_prox.y, last_prox.v, caps);
        std::vector<RVec> lin_gens;
        for (const auto& l : crit.cone.lineality_basis()) lin_gens.push_back(l);
        const RMat P = projection_matrix(m, lin_gens);
        const Eigen::MatrixXd Pm = to_float(P);
        const Eigen::MatrixXd J =
            Eigen::MatrixXd::Identity(m, m) - Pm * (Eigen::MatrixXd::Identity(m, m) - p.jpsi(x));
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        lu.setThreshold(1e-12);
        if (lu.rank() < static_cast<Eigen::Index>(m))
            throw NoConvergence("singular Newton element");
        x = x + lu.solve(Eigen::VectorXd(-fx));
    }
    throw NoConvergence("natural-map Newton did not reach residual 1e-10 in 50 iterations");
}

// ---------------------------------------------------------------------------
// KKT analysis
// ---------------------------------------------------------------------------

bool kkt_regularity(const KKTProblem& k, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& lambda, double tol, const Caps& caps) {
    const Eigen::VectorXd grad_phi = k.phi.jacobian(x).transpose();
    const Eigen::MatrixXd jac_Phi = k.big_phi.jacobian(x);
    const Eigen::VectorXd grad_L = grad_phi + jac_Phi.transpose() * lambda;
    if (grad_L.lpNorm<Eigen::Infinity>() > tol)
        throw NotKKTPoint("Lagrangian gradient exceeds tol");
    const RVec z = rationalize(Eigen::VectorXd(k.big_phi.eval(x)));
    if (!k.g.in_domain(z)) throw NotKKTPoint("constraint image left dom g");
    const auto snapped = snap_to_subdifferential(k.g, z, rationalize(lambda), tol, caps);
    if (!snapped) throw NotKKTPoint("multiplier is not a subgradient within tol");

    Eigen::MatrixXd hess_L = k.phi.hessian_of_row(0, x);
    for (std::size_t r = 0; r < k.m; ++r)
        hess_L += to_double(snapped->lambda[r]) * k.big_phi.hessian_of_row(r, x);

    const RMat H = rationalize(hess_L);
    const RMat JPhi = rationalize(jac_Phi);
    const RMat JPhiT = JPhi.transposed();
    const std::size_t d = k.n + k.m;  // variables (w, w')
    if (d > 12) throw CapExceeded("kkt_regularity: orthant enumeration dimension");

    // equality rows: H w + JPhi^T w' = 0
    std::vector<RVec> eq_rows;
    for (std::size_t i = 0; i < k.n; ++i) {
        RVec row(d, Rat(0));
        for (std::size_t j = 0; j < k.n; ++j) row[j] = H(i, j);
        for (std::size_t j = 0; j < k.m; ++j) row[k.n + j] = JPhiT(i, j);
        eq_rows.push_back(std::move(row));
    }

    const CriticalCone crit = critical_cone(k.g, z, snapped->lambda, caps);
    for (const auto& dcone : limiting_difference_cones(crit.cone, caps)) {
        std::vector<RVec> le_rows;
        // w' in D*: halfspaces of D* applied to the w' block
        for (const auto& c : dcone.polar().halfspaces()) {
            RVec row(d, Rat(0));
            for (std::size_t j = 0; j < k.m; ++j) row[k.n + j] = c[j];
            le_rows.push_back(std::move(row));
        }
        // -JPhi w in D
        for (const auto& c : dcone.halfspaces()) {
            RVec row(d, Rat(0));
            for (std::size_t j = 0; j < k.n; ++j) {
                Rat v(0);
                for (std::size_t i = 0; i < k.m; ++i) v += c[i] * JPhi(i, j);
                row[j] = -v;
            }
            le_rows.push_back(std::move(row));
        }
        if (cone_system_has_nonzero(d, eq_rows, le_rows)) return false;
    }
    return true;
}

}  // namespace polyvar
