#ifndef POLYVAR_POLYHEDRON_HPP
#define POLYVAR_POLYHEDRON_HPP

#include <utility>
#include <vector>

#include "polyvar/caps.hpp"
#include "polyvar/linalg.hpp"

namespace polyvar {

/// Halfspace representation: {x : <c,x> <= d for ineqs, <c,x> = d for eqs}.
struct HPolyhedron {
    std::size_t dim = 0;
    std::vector<std::pair<RVec, Rat>> ineqs;
    std::vector<std::pair<RVec, Rat>> eqs;

    HPolyhedron() = default;
    explicit HPolyhedron(std::size_t d) : dim(d) {}

    void add_le(RVec c, Rat d) { ineqs.emplace_back(std::move(c), std::move(d)); }
    void add_eq(RVec c, Rat d) { eqs.emplace_back(std::move(c), std::move(d)); }

    bool contains(const RVec& x) const;
};

/// Generator representation: conv(points) + cone(rays).
/// The set is nonempty exactly when points is nonempty.
struct VPolyhedron {
    std::size_t dim = 0;
    std::vector<RVec> points;
    std::vector<RVec> rays;

    bool empty() const { return points.empty(); }
    /// Exact membership, decided by LP feasibility over the generators.
    bool contains(const RVec& x) const;
};

// ---------------------------------------------------------------------------
// Double description engine (cone level)
// ---------------------------------------------------------------------------

/// Minimal generator description of the cone
/// {x : <a,x> <= 0 for a in ineq_normals, <e,x> = 0 for e in eq_normals}:
/// a lineality basis plus the extreme rays modulo lineality. Both lists are
/// canonical (primitive integer vectors, deterministic order).
struct ConeGenerators {
    std::vector<RVec> lines;
    std::vector<RVec> rays;
};

ConeGenerators dd_cone(std::size_t dim, const std::vector<RVec>& ineq_normals,
                       const std::vector<RVec>& eq_normals, const Caps& caps = {});

// ---------------------------------------------------------------------------
// Polyhedron-level conversions and cone extraction
// ---------------------------------------------------------------------------

/// H -> V by double description of the homogenization.
VPolyhedron to_vrep(const HPolyhedron& p, const Caps& caps = {});

/// V -> H through the polar of the homogenization; an empty input maps to
/// the infeasible row 0 <= -1.
HPolyhedron to_hrep(const VPolyhedron& p, const Caps& caps = {});

/// Indices of inequality constraints of p that hold with equality on all of
/// p (detected on the V-representation: tight at every point, orthogonal to
/// every ray).
std::vector<std::size_t> implicit_equalities(const HPolyhedron& p, const VPolyhedron& v);

/// Relative-interior membership. Never throws on x outside p; that is
/// simply false.
bool in_relative_interior(const HPolyhedron& p, const RVec& x, const Caps& caps = {});
bool in_relative_interior(const VPolyhedron& p, const RVec& x, const Caps& caps = {});

}  // namespace polyvar

#endif
