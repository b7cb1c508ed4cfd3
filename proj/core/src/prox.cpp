#include "polyvar/prox.hpp"

#include <algorithm>

#include "polyvar/errors.hpp"
#include "polyvar/lp.hpp"

namespace polyvar {

namespace {

// Candidate tight patterns ordered by total size; the unique QP optimum is
// certified by the first pattern passing primal and dual feasibility.
struct PatternIter {
    std::size_t nj, ni;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> order;

    PatternIter(std::size_t nj_, std::size_t ni_) : nj(nj_), ni(ni_) {
        for (std::uint32_t sj = 1; sj < (1u << nj); ++sj)
            for (std::uint32_t si = 0; si < (1u << ni); ++si) order.emplace_back(sj, si);
        std::stable_sort(order.begin(), order.end(), [](auto a, auto b) {
            return __builtin_popcount(a.first) + __builtin_popcount(a.second) <
                   __builtin_popcount(b.first) + __builtin_popcount(b.second);
        });
    }
};

}  // namespace

ProxResult prox(const PolyhedralFunc& g, const Rat& r, const RVec& x, const Caps& caps) {
    if (r <= 0) throw DomainError("prox: parameter r must be positive");
    if (x.size() != g.dim) throw DimMismatch("prox");
    const std::size_t nj = g.pieces.size(), ni = g.constraints.size();
    if (nj + ni > caps.prox_pattern_items) throw CapExceeded("prox: pieces + constraints");

    const Rat rinv = Rat(1) / r;
    PatternIter patterns(nj, ni);
    for (const auto& [sj, si] : patterns.order) {
        std::vector<std::size_t> J, I;
        for (std::size_t j = 0; j < nj; ++j)
            if (sj >> j & 1) J.push_back(j);
        for (std::size_t i = 0; i < ni; ++i)
            if (si >> i & 1) I.push_back(i);

        // unknowns: w (m), t, mu (|J|), nu (|I|)
        const std::size_t m = g.dim, nv = m + 1 + J.size() + I.size();
        RMat A(nv, nv);
        RVec b(nv, Rat(0));
        // stationarity in w: w/r + sum mu_j a_j + sum nu_i b_i = x/r
        for (std::size_t d = 0; d < m; ++d) {
            A(d, d) = rinv;
            for (std::size_t k = 0; k < J.size(); ++k)
                A(d, m + 1 + k) = g.pieces[J[k]].first[d];
            for (std::size_t k = 0; k < I.size(); ++k)
                A(d, m + 1 + J.size() + k) = g.constraints[I[k]].first[d];
            b[d] = x[d] * rinv;
        }
        // stationarity in t: sum mu = 1
        for (std::size_t k = 0; k < J.size(); ++k) A(m, m + 1 + k) = 1;
        b[m] = 1;
        // tight pieces: <a_j, w> - t = alpha_j
        for (std::size_t k = 0; k < J.size(); ++k) {
            for (std::size_t d = 0; d < m; ++d) A(m + 1 + k, d) = g.pieces[J[k]].first[d];
            A(m + 1 + k, m) = -1;
            b[m + 1 + k] = g.pieces[J[k]].second;
        }
        // tight constraints: <b_i, w> = beta_i
        for (std::size_t k = 0; k < I.size(); ++k) {
            for (std::size_t d = 0; d < m; ++d)
                A(m + 1 + J.size() + k, d) = g.constraints[I[k]].first[d];
            b[m + 1 + J.size() + k] = g.constraints[I[k]].second;
        }
        const auto sol = solve(A, b);
        if (!sol) continue;
        const RVec w(sol->begin(), sol->begin() + m);
        const Rat t = (*sol)[m];

        // primal feasibility
        bool feasible = true;
        for (std::size_t j = 0; j < nj && feasible; ++j)
            feasible = dot(g.pieces[j].first, w) - g.pieces[j].second <= t;
        for (std::size_t i = 0; i < ni && feasible; ++i)
            feasible = dot(g.constraints[i].first, w) <= g.constraints[i].second;
        if (!feasible) continue;

        // dual feasibility: the particular multipliers may be negative in
        // degenerate patterns even when valid ones exist, so fall back to
        // an exact feasibility LP over the pattern support.
        bool dual_ok = true;
        for (std::size_t k = 0; k < J.size() + I.size(); ++k)
            dual_ok = dual_ok && (*sol)[m + 1 + k] >= 0;
        if (!dual_ok) {
            RMat Ad(m + 1, J.size() + I.size());
            RVec bd(m + 1);
            for (std::size_t d = 0; d < m; ++d) {
                for (std::size_t k = 0; k < J.size(); ++k) Ad(d, k) = g.pieces[J[k]].first[d];
                for (std::size_t k = 0; k < I.size(); ++k)
                    Ad(d, J.size() + k) = g.constraints[I[k]].first[d];
                bd[d] = (x[d] - w[d]) * rinv;
            }
            for (std::size_t k = 0; k < J.size(); ++k) Ad(m, k) = 1;
            bd[m] = 1;
            dual_ok = simplex_solve(Ad, bd, RVec(J.size() + I.size(), Rat(0))).status ==
                      LPStatus::Optimal;
        }
        if (!dual_ok) continue;

        ProxResult res;
        res.x = x;
        res.r = r;
        res.y = w;
        res.v = scale(rinv, sub(x, w));
        const ExtRat gval = eval(g, w);
        if (gval.is_infinite() || gval.value() != t)
            throw VerificationFailure("prox: accepted pattern value mismatch");
        res.envelope = t + norm2_sq(sub(w, x)) * rinv / 2;
        res.pattern = active_sets(g, w);
        return res;
    }
    throw VerificationFailure("prox: no pattern passed the KKT certificate");
}

Rat moreau_envelope(const PolyhedralFunc& g, const Rat& r, const RVec& x, const Caps& caps) {
    return prox(g, r, x, caps).envelope;
}

RVec envelope_gradient(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                       const Caps& caps) {
    return prox(g, r, x, caps).v;
}

RVec prox_directional_derivative(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                                 const RVec& h, const Caps& caps) {
    const ProxResult p = prox(g, r, x, caps);
    const CriticalCone k = critical_cone(g, p.y, p.v, caps);
    return k.cone.project(h, caps);
}

SmoothnessClass smoothness_classify(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                                    const Caps& caps) {
    const ProxResult p = prox(g, r, x, caps);
    return is_ri_subgradient(g, p.y, p.v, caps) ? SmoothnessClass::C1_near
                                                : SmoothnessClass::not_C1;
}

RMat prox_jacobian(const PolyhedralFunc& g, const Rat& r, const RVec& x, const Caps& caps) {
    const ProxResult p = prox(g, r, x, caps);
    if (!is_ri_subgradient(g, p.y, p.v, caps))
        throw NotSmoothHere("prox is not C1 near this point");
    return critical_cone(g, p.y, p.v, caps).cone.projection_matrix();
}

RMat envelope_hessian(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                      const Caps& caps) {
    const ProxResult p = prox(g, r, x, caps);
    if (!is_ri_subgradient(g, p.y, p.v, caps))
        throw NotSmoothHere("envelope is not C2 near this point");
    const RMat pk = critical_cone(g, p.y, p.v, caps).cone.projection_matrix();
    const Rat rinv = Rat(1) / r;
    RMat h(g.dim, g.dim);
    for (std::size_t i = 0; i < g.dim; ++i)
        for (std::size_t j = 0; j < g.dim; ++j)
            h(i, j) = rinv * ((i == j ? Rat(1) : Rat(0)) - pk(i, j));
    // independent route through the conjugate: (1/r) P onto the critical
    // cone of g* at the swapped pair
    const PolyhedralFunc conj = conjugate(g, caps);
    const RMat pconj = critical_cone(conj, p.v, p.y, caps).cone.projection_matrix();
    for (std::size_t i = 0; i < g.dim; ++i)
        for (std::size_t j = 0; j < g.dim; ++j)
            if (h(i, j) != rinv * pconj(i, j))
                throw VerificationFailure("envelope hessian: conjugate route disagrees");
    return h;
}

PolyhedralFunc indicator(const HPolyhedron& c) {
    PolyhedralFunc g;
    g.dim = c.dim;
    g.pieces.emplace_back(rvec_zero(c.dim), Rat(0));
    for (const auto& [b, beta] : c.ineqs) g.constraints.emplace_back(b, beta);
    for (const auto& [b, beta] : c.eqs) {
        g.constraints.emplace_back(b, beta);
        g.constraints.emplace_back(negate(b), -beta);
    }
    g.validate();
    return g;
}

RVec project_polyhedron(const HPolyhedron& c, const RVec& x, const Caps& caps) {
    return prox(indicator(c), Rat(1), x, caps).y;
}

ProjectionSmoothnessResult projection_smoothness(const HPolyhedron& c, const RVec& x,
                                                 const Caps& caps) {
    const PolyhedralFunc g = indicator(c);
    const ProxResult p = prox(g, Rat(1), x, caps);
    ProjectionSmoothnessResult out{
        is_ri_subgradient(g, p.y, p.v, caps) ? SmoothnessClass::C1_near
                                             : SmoothnessClass::not_C1,
        p.y, normal_cone(c, p.y, caps)};
    return out;
}

}  // namespace polyvar
