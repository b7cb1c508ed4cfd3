#ifndef POLYVAR_PROX_HPP
#define POLYVAR_PROX_HPP

#include "polyvar/polyfunc.hpp"
#include "polyvar/second_order.hpp"

namespace polyvar {

/// Exact proximal point of g at x with parameter r. The optimality
/// certificate is the exact KKT system of the epigraph QP; the resolvent
/// identity v in subdifferential(y) with y + r v = x holds by
/// construction.
struct ProxResult {
    RVec x;
    Rat r;
    RVec y;         // prox point
    RVec v;         // (x - y)/r, a subgradient at y
    Rat envelope;   // g(y) + ||y-x||^2 / (2r)
    ActiveSets pattern;  // tight pieces/constraints at the optimum
};

ProxResult prox(const PolyhedralFunc& g, const Rat& r, const RVec& x, const Caps& caps = {});

Rat moreau_envelope(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                    const Caps& caps = {});

/// (x - prox(x)) / r, the exact envelope gradient.
RVec envelope_gradient(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                       const Caps& caps = {});

/// One-sided directional derivative of the prox: the projection of h onto
/// the critical cone at the prox pair. Needs no regularity assumption.
RVec prox_directional_derivative(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                                 const RVec& h, const Caps& caps = {});

enum class SmoothnessClass { C1_near, not_C1 };

/// C1_near exactly when the prox subgradient sits in the relative interior
/// of the subdifferential at the prox point; this simultaneously
/// classifies the envelope as twice continuously differentiable near x.
SmoothnessClass smoothness_classify(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                                    const Caps& caps = {});

/// Exact rational Jacobian of the prox (the projection matrix onto the
/// critical cone, a subspace here). Throws NotSmoothHere when
/// classification fails.
RMat prox_jacobian(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                   const Caps& caps = {});

/// (1/r)(I - P); cross-computed through the conjugate's critical cone
/// projection and asserted equal.
RMat envelope_hessian(const PolyhedralFunc& g, const Rat& r, const RVec& x,
                      const Caps& caps = {});

/// Exact Euclidean projection onto a polyhedron (prox of its indicator).
RVec project_polyhedron(const HPolyhedron& c, const RVec& x, const Caps& caps = {});

struct ProjectionSmoothnessResult {
    SmoothnessClass verdict;
    RVec z;               // projection of x
    PolyCone normal_cone;  // N_C(z)
};

/// Smoothness of the metric projection onto a polyhedral set, decided by
/// the relative-interior position of x - z in the normal cone at z.
ProjectionSmoothnessResult projection_smoothness(const HPolyhedron& c, const RVec& x,
                                                 const Caps& caps = {});

/// Indicator of a polyhedron as a PolyhedralFunc (single zero piece).
PolyhedralFunc indicator(const HPolyhedron& c);

}  // namespace polyvar

#endif
