#ifndef POLYVAR_CONE_HPP
#define POLYVAR_CONE_HPP

#include <cstdint>
#include <vector>

#include "polyvar/caps.hpp"
#include "polyvar/linalg.hpp"
#include "polyvar/polyhedron.hpp"

namespace polyvar {

/// Polyhedral convex cone carrying both descriptions.
///
/// generators: rays whose conic hull is the cone (lineality appears as +/-
/// pairs); halfspaces: normals c with <c,x> <= 0 (equalities appear as +/-
/// pairs); lineality_basis: basis of K cap -K. Both sides are canonical
/// outputs of the double description method, so the polar is a pure swap.
class PolyCone {
public:
    PolyCone() = default;

    static PolyCone from_halfspaces(std::size_t dim, const std::vector<RVec>& ineq_normals,
                                    const std::vector<RVec>& eq_normals = {},
                                    const Caps& caps = {});
    static PolyCone from_generators(std::size_t dim, const std::vector<RVec>& gens,
                                    const Caps& caps = {});
    /// K1 x K2 without running double description in the product dimension.
    static PolyCone product(const PolyCone& k1, const PolyCone& k2);
    static PolyCone full_space(std::size_t dim, const Caps& caps = {});
    static PolyCone zero(std::size_t dim);

    std::size_t ambient_dim() const { return dim_; }
    const std::vector<RVec>& generators() const { return generators_; }
    const std::vector<RVec>& halfspaces() const { return halfspaces_; }
    const std::vector<RVec>& lineality_basis() const { return lineality_; }

    bool contains(const RVec& x) const;
    bool is_subspace() const;
    /// dim of the linear span.
    std::size_t dimension() const;

    PolyCone polar() const;
    bool set_equal(const PolyCone& other) const;
    bool subset_of(const PolyCone& other) const;

    /// A point of the relative interior (sum of generators; zero cone -> 0).
    RVec relative_interior_point() const;
    bool in_relative_interior(const RVec& x) const;

    /// Exact Euclidean projection by face enumeration (orthogonal solve on
    /// each face span, accepted on primal plus dual feasibility).
    RVec project(const RVec& x, const Caps& caps = {}) const;
    /// Projection matrix; only meaningful (and only allowed) for subspaces.
    RMat projection_matrix() const;

private:
    std::size_t dim_ = 0;
    std::vector<RVec> generators_;
    std::vector<RVec> halfspaces_;
    std::vector<RVec> lineality_;

    friend class FaceLattice;
};

/// One face K cap {<c_i,x> = 0 : i in tight set}. The tight-set closure is
/// the canonical label of the face within its parent's lattice.
struct Face {
    PolyCone cone;
    std::uint64_t tight_mask = 0;  // over the parent's halfspace list
    std::size_t dim = 0;
};

/// All distinct faces of k, including k itself and the lineality space.
/// Ordered by decreasing dimension, then by tight mask.
std::vector<Face> faces(const PolyCone& k, const Caps& caps = {});

struct TangentConeResult {
    PolyCone cone;
    /// Rational radius certified from constraint slack: within it the
    /// shifted set and the tangent cone coincide.
    Rat radius;
};

/// Tangent cone to p at x (directions keeping tight constraints feasible).
/// Throws NotMember when x is outside p.
TangentConeResult tangent_cone(const HPolyhedron& p, const RVec& x, const Caps& caps = {});

/// Polar of the tangent cone: generated by the outward normals of the
/// constraints tight at x.
PolyCone normal_cone(const HPolyhedron& p, const RVec& x, const Caps& caps = {});

PolyCone cone_sum(const PolyCone& a, const PolyCone& b, const Caps& caps = {});
PolyCone cone_negate(const PolyCone& a, const Caps& caps = {});
PolyCone cone_intersect(const PolyCone& a, const PolyCone& b, const Caps& caps = {});
/// a - b = a + (-b), materialized (convex).
PolyCone cone_difference(const PolyCone& a, const PolyCone& b, const Caps& caps = {});
/// Membership of q in the (not materialized) Minkowski difference a - b,
/// decided by exact feasibility of q = p1 - p2, p1 in a, p2 in b.
bool minkowski_diff_contains(const PolyCone& a, const PolyCone& b, const RVec& q);

/// Finite union of convex cones, canonicalized so no piece contains
/// another.
struct ConeUnion {
    std::size_t dim = 0;
    std::vector<PolyCone> pieces;

    bool contains(const RVec& x) const;
    void canonicalize();
    bool set_equal(const ConeUnion& other) const;
};

}  // namespace polyvar

#endif
