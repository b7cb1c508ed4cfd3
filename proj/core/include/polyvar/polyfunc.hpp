#ifndef POLYVAR_POLYFUNC_HPP
#define POLYVAR_POLYFUNC_HPP

#include <optional>
#include <utility>
#include <vector>

#include "polyvar/caps.hpp"
#include "polyvar/cone.hpp"
#include "polyvar/linalg.hpp"
#include "polyvar/polyhedron.hpp"

namespace polyvar {

/// max of finitely many affine pieces plus the indicator of a polyhedral
/// domain:
///   g(z) = max_j { <a_j, z> - alpha_j }   on  { z : <b_i, z> <= beta_i }.
/// Proper by construction: at least one piece, nonempty domain (validate()).
struct PolyhedralFunc {
    std::size_t dim = 0;
    std::vector<std::pair<RVec, Rat>> pieces;       // (a_j, alpha_j)
    std::vector<std::pair<RVec, Rat>> constraints;  // (b_i, beta_i)

    HPolyhedron domain() const {
        HPolyhedron h(dim);
        for (const auto& [b, beta] : constraints) h.add_le(b, beta);
        return h;
    }
    bool in_domain(const RVec& z) const { return domain().contains(z); }
    void validate() const;
};

struct ActiveSets {
    std::vector<std::size_t> J_active;  // pieces attaining the max
    std::vector<std::size_t> I_active;  // tight domain constraints
};

/// Multipliers of one representation of a subgradient over the active
/// generators: sigma over all pieces, tau over all constraints, zero off
/// the active sets.
struct Decomposition {
    std::vector<Rat> sigma;
    std::vector<Rat> tau;

    std::vector<std::size_t> positive_sigma() const;  // J_+
    std::vector<std::size_t> positive_tau() const;    // I_+
};

struct DecompositionSet {
    std::vector<Decomposition> vertices;
    std::vector<Decomposition> rays;  // unbounded tau directions
};

ExtRat eval(const PolyhedralFunc& g, const RVec& z);
ActiveSets active_sets(const PolyhedralFunc& g, const RVec& z);

/// conv of the active piece gradients plus the cone of active constraint
/// normals.
VPolyhedron subdifferential(const PolyhedralFunc& g, const RVec& z);

ExtRat subderivative(const PolyhedralFunc& g, const RVec& z, const RVec& w);

/// Rational r > 0 such that g(z+w) = g(z) + dg(z)(w) for every tangent
/// direction w with ||w|| <= r, certified from the slack of inactive
/// pieces and constraints.
Rat local_exactness_radius(const PolyhedralFunc& g, const RVec& z);

/// One exact decomposition of lambda over the active generators (a vertex
/// of the multiplier polyhedron, from the phase-1 simplex), or nullopt
/// exactly when lambda is not a subgradient at z.
std::optional<Decomposition> decompose(const PolyhedralFunc& g, const RVec& z,
                                       const RVec& lambda);

/// All vertex decompositions plus unbounded directions, by vertex
/// enumeration of the multiplier polyhedron.
DecompositionSet all_decompositions(const PolyhedralFunc& g, const RVec& z,
                                    const RVec& lambda, const Caps& caps = {});

/// Fenchel conjugate: pieces from the vertices of epi g, domain
/// constraints from its extreme rays.
PolyhedralFunc conjugate(const PolyhedralFunc& g, const Caps& caps = {});

/// (z, lambda) in gph of the subgradient mapping.
bool graph_membership(const PolyhedralFunc& g, const RVec& z, const RVec& lambda);

/// A validated point of gph of the subgradient mapping with cached
/// first-order data.
struct SubgradientPair {
    RVec z;
    RVec lambda;
    ActiveSets active;
    VPolyhedron subdiff;

    static SubgradientPair make(const PolyhedralFunc& g, RVec z, RVec lambda);
};

}  // namespace polyvar

#endif
