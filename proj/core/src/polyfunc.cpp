#include "polyvar/polyfunc.hpp"

#include <algorithm>

#include "polyvar/errors.hpp"
#include "polyvar/lp.hpp"

namespace polyvar {

void PolyhedralFunc::validate() const {
    if (pieces.empty()) throw DomainError("polyhedral function needs at least one piece");
    for (const auto& [a, alpha] : pieces)
        if (a.size() != dim) throw DimMismatch("piece gradient length");
    for (const auto& [b, beta] : constraints)
        if (b.size() != dim) throw DimMismatch("constraint normal length");
    LinSystem sys;
    sys.dim = dim;
    for (const auto& [b, beta] : constraints) sys.add_le(b, beta);
    if (!find_feasible(sys)) throw DomainError("empty domain: function is not proper");
}

std::vector<std::size_t> Decomposition::positive_sigma() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < sigma.size(); ++j)
        if (sigma[j] > 0) out.push_back(j);
    return out;
}

std::vector<std::size_t> Decomposition::positive_tau() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (tau[i] > 0) out.push_back(i);
    return out;
}

ExtRat eval(const PolyhedralFunc& g, const RVec& z) {
    if (z.size() != g.dim) throw DimMismatch("eval");
    if (!g.in_domain(z)) return ExtRat::infinity();
    Rat best = dot(g.pieces[0].first, z) - g.pieces[0].second;
    for (std::size_t j = 1; j < g.pieces.size(); ++j)
        best = rat_max(best, dot(g.pieces[j].first, z) - g.pieces[j].second);
    return ExtRat::of(best);
}

ActiveSets active_sets(const PolyhedralFunc& g, const RVec& z) {
    const ExtRat v = eval(g, z);
    if (v.is_infinite()) throw NotInDomain("active_sets: z outside dom g");
    ActiveSets s;
    for (std::size_t j = 0; j < g.pieces.size(); ++j)
        if (dot(g.pieces[j].first, z) - g.pieces[j].second == v.value()) s.J_active.push_back(j);
    for (std::size_t i = 0; i < g.constraints.size(); ++i)
        if (dot(g.constraints[i].first, z) == g.constraints[i].second) s.I_active.push_back(i);
    return s;
}

VPolyhedron subdifferential(const PolyhedralFunc& g, const RVec& z) {
    const ActiveSets s = active_sets(g, z);
    VPolyhedron v;
    v.dim = g.dim;
    for (auto j : s.J_active) v.points.push_back(g.pieces[j].first);
    for (auto i : s.I_active) v.rays.push_back(g.constraints[i].first);
    return v;
}

ExtRat subderivative(const PolyhedralFunc& g, const RVec& z, const RVec& w) {
    const ActiveSets s = active_sets(g, z);
    for (auto i : s.I_active)
        if (dot(g.constraints[i].first, w) > 0) return ExtRat::infinity();
    Rat best = dot(g.pieces[s.J_active[0]].first, w);
    for (auto j : s.J_active) best = rat_max(best, dot(g.pieces[j].first, w));
    return ExtRat::of(best);
}

Rat local_exactness_radius(const PolyhedralFunc& g, const RVec& z) {
    const ExtRat v = eval(g, z);
    if (v.is_infinite()) throw NotInDomain("local_exactness_radius: z outside dom g");
    const ActiveSets s = active_sets(g, z);
    Rat max_active_norm = 0;
    for (auto j : s.J_active) max_active_norm = rat_max(max_active_norm, norm1(g.pieces[j].first));
    Rat r = 1;
    for (std::size_t j = 0; j < g.pieces.size(); ++j) {
        const Rat slack = v.value() - (dot(g.pieces[j].first, z) - g.pieces[j].second);
        if (slack == 0) continue;
        const Rat denom = norm1(g.pieces[j].first) + max_active_norm;
        if (denom > 0) r = rat_min(r, slack / denom);
    }
    for (const auto& [b, beta] : g.constraints) {
        const Rat slack = beta - dot(b, z);
        if (slack == 0 || is_zero(b)) continue;
        r = rat_min(r, slack / norm1(b));
    }
    return r;
}

std::optional<Decomposition> decompose(const PolyhedralFunc& g, const RVec& z,
                                       const RVec& lambda) {
    if (lambda.size() != g.dim) throw DimMismatch("decompose");
    const ActiveSets s = active_sets(g, z);
    const std::size_t nj = s.J_active.size(), ni = s.I_active.size();
    // rows: sum sigma = 1, then the m combination rows
    RMat A(1 + g.dim, nj + ni);
    RVec b(1 + g.dim);
    for (std::size_t k = 0; k < nj; ++k) {
        A(0, k) = 1;
        for (std::size_t d = 0; d < g.dim; ++d) A(1 + d, k) = g.pieces[s.J_active[k]].first[d];
    }
    for (std::size_t k = 0; k < ni; ++k)
        for (std::size_t d = 0; d < g.dim; ++d)
            A(1 + d, nj + k) = g.constraints[s.I_active[k]].first[d];
    b[0] = 1;
    for (std::size_t d = 0; d < g.dim; ++d) b[1 + d] = lambda[d];
    const LPResult res = simplex_solve(A, b, RVec(nj + ni, Rat(0)));
    if (res.status != LPStatus::Optimal) return std::nullopt;
    Decomposition dec;
    dec.sigma.assign(g.pieces.size(), Rat(0));
    dec.tau.assign(g.constraints.size(), Rat(0));
    for (std::size_t k = 0; k < nj; ++k) dec.sigma[s.J_active[k]] = res.x[k];
    for (std::size_t k = 0; k < ni; ++k) dec.tau[s.I_active[k]] = res.x[nj + k];
    return dec;
}

DecompositionSet all_decompositions(const PolyhedralFunc& g, const RVec& z,
                                    const RVec& lambda, const Caps& caps) {
    const ActiveSets s = active_sets(g, z);
    const std::size_t nj = s.J_active.size(), ni = s.I_active.size();
    HPolyhedron mult(nj + ni);
    for (std::size_t k = 0; k < nj + ni; ++k) {
        RVec row = rvec_zero(nj + ni);
        row[k] = -1;
        mult.add_le(std::move(row), Rat(0));
    }
    {
        RVec row = rvec_zero(nj + ni);
        for (std::size_t k = 0; k < nj; ++k) row[k] = 1;
        mult.add_eq(std::move(row), Rat(1));
    }
    for (std::size_t d = 0; d < g.dim; ++d) {
        RVec row(nj + ni);
        for (std::size_t k = 0; k < nj; ++k) row[k] = g.pieces[s.J_active[k]].first[d];
        for (std::size_t k = 0; k < ni; ++k) row[nj + k] = g.constraints[s.I_active[k]].first[d];
        mult.add_eq(std::move(row), lambda[d]);
    }
    const VPolyhedron verts = to_vrep(mult, caps);
    DecompositionSet out;
    auto unpack = [&](const RVec& x) {
        Decomposition dec;
        dec.sigma.assign(g.pieces.size(), Rat(0));
        dec.tau.assign(g.constraints.size(), Rat(0));
        for (std::size_t k = 0; k < nj; ++k) dec.sigma[s.J_active[k]] = x[k];
        for (std::size_t k = 0; k < ni; ++k) dec.tau[s.I_active[k]] = x[nj + k];
        return dec;
    };
    for (const auto& p : verts.points) out.vertices.push_back(unpack(p));
    for (const auto& r : verts.rays) out.rays.push_back(unpack(r));
    return out;
}

PolyhedralFunc conjugate(const PolyhedralFunc& g, const Caps& caps) {
    HPolyhedron epi(g.dim + 1);
    for (const auto& [a, alpha] : g.pieces) {
        RVec row = a;
        row.push_back(Rat(-1));
        epi.add_le(std::move(row), alpha);
    }
    for (const auto& [b, beta] : g.constraints) {
        RVec row = b;
        row.push_back(Rat(0));
        epi.add_le(std::move(row), beta);
    }
    const VPolyhedron v = to_vrep(epi, caps);
    PolyhedralFunc conj;
    conj.dim = g.dim;
    for (const auto& p : v.points)
        conj.pieces.emplace_back(RVec(p.begin(), p.end() - 1), p.back());
    for (const auto& r : v.rays) {
        RVec dir(r.begin(), r.end() - 1);
        if (is_zero(dir)) continue;  // the vertical ray of the epigraph
        conj.constraints.emplace_back(std::move(dir), r.back());
    }
    conj.validate();
    return conj;
}

bool graph_membership(const PolyhedralFunc& g, const RVec& z, const RVec& lambda) {
    if (z.size() != g.dim || lambda.size() != g.dim) throw DimMismatch("graph_membership");
    if (!g.in_domain(z)) return false;
    return decompose(g, z, lambda).has_value();
}

SubgradientPair SubgradientPair::make(const PolyhedralFunc& g, RVec z, RVec lambda) {
    if (!graph_membership(g, z, lambda))
        throw NotSubgradient("lambda is not a subgradient of g at z");
    SubgradientPair p;
    p.z = std::move(z);
    p.lambda = std::move(lambda);
    p.active = active_sets(g, p.z);
    p.subdiff = subdifferential(g, p.z);
    return p;
}

}  // namespace polyvar
