#ifndef POLYVAR_SECOND_ORDER_HPP
#define POLYVAR_SECOND_ORDER_HPP

#include <utility>
#include <vector>

#include "polyvar/cone.hpp"
#include "polyvar/polyfunc.hpp"
#include "polyvar/sampling.hpp"

namespace polyvar {

/// Critical cone of g at z for lambda: the directions where the linearized
/// growth matches the subgradient pairing; equals the normal cone to the
/// subdifferential at lambda. Built two independent ways on construction
/// and cross-checked.
struct CriticalCone {
    RVec z;
    RVec lambda;
    PolyCone cone;
};

/// Inequality/equality system of the critical cone read off one
/// decomposition of lambda (equalities across positive-weight indices,
/// inequalities on the remaining active ones).
PolyCone critical_cone_from_decomposition(const PolyhedralFunc& g, const RVec& z,
                                          const Decomposition& dec, const Caps& caps = {});

CriticalCone critical_cone(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                           const Caps& caps = {});

/// lambda in ri of the subdifferential at z; computed as "critical cone is
/// a subspace" and cross-checked against the generic relative interior
/// test on the subdifferential polyhedron.
bool is_ri_subgradient(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                       const Caps& caps = {});

// ---------------------------------------------------------------------------
// Reduction certification
// ---------------------------------------------------------------------------

/// Exact members of gph of the subgradient map within the ball of radius r
/// around (z, lambda), built from perturbed decompositions; never empty
/// (contains the base pair).
std::vector<std::pair<RVec, RVec>> nearby_graph_samples(const PolyhedralFunc& g,
                                                        const RVec& z, const RVec& lambda,
                                                        const Rat& r, std::size_t count,
                                                        RatSampler& sampler,
                                                        const Caps& caps = {});

struct ReductionCertificate {
    Rat radius;
    /// transcript: every tested pair (w,u), tagged by which side generated it
    std::vector<std::pair<RVec, RVec>> tested_graph_side;   // on gph N_K
    std::vector<std::pair<RVec, RVec>> tested_subgrad_side;  // from gph samples
};

/// Halving search for a radius within which membership of (z+w, lambda+u)
/// in gph of the subgradient map and membership of (w,u) in the normal
/// cone graph of the critical cone agree on `samples` exact draws from
/// both sides. Failure below 2^-20 throws VerificationFailure: the
/// underlying result guarantees a positive radius.
ReductionCertificate reduction_certify(const PolyhedralFunc& g, const RVec& z,
                                       const RVec& lambda, std::size_t samples,
                                       std::uint64_t seed = 0, const Caps& caps = {});

/// Certified radius for the decomposition-support stability property: for
/// every vertex decomposition and every sampled nearby graph pair, the
/// positive-weight indices stay active. Shrinks by halving like
/// reduction_certify.
Rat support_stability_radius(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                             std::size_t samples, std::uint64_t seed = 0,
                             const Caps& caps = {});

// ---------------------------------------------------------------------------
// Duality and face structure
// ---------------------------------------------------------------------------

/// Critical-cone polarity against the conjugate plus relative-interior
/// reciprocity; both sides computed independently through conjugate().
bool polarity_check(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                    const Caps& caps = {});

/// For a nearby graph pair, the face pair (F1, F2) of the base critical
/// cone with K_g(z,lambda) = F1 - F2. Asserts the equality and the
/// lineality/difference sandwich exactly.
std::pair<PolyCone, PolyCone> nearby_face_pair(const PolyhedralFunc& g, const RVec& zbar,
                                               const RVec& lambdabar, const RVec& z,
                                               const RVec& lambda, const Caps& caps = {});

/// A graph pair realizing a prescribed face pair: perturbs along a
/// relative interior point of the polar face of F1 and of F2, both scaled
/// under r/2. Asserts K_g at the witness equals F1 - F2.
std::pair<RVec, RVec> face_pair_witness(const PolyhedralFunc& g, const RVec& z,
                                        const RVec& lambda, const PolyCone& f1,
                                        const PolyCone& f2, const Rat& r,
                                        const Caps& caps = {});

// ---------------------------------------------------------------------------
// Graphical derivatives, normal cones to the graph
// ---------------------------------------------------------------------------

/// The convex piece F x (K* cap F-perp) of the normal cone graph.
PolyCone graph_piece(const PolyCone& k, const PolyCone& face_cone, const Caps& caps = {});

/// (w,u) in gph N_K: w in K, u in K*, <u,w> = 0.
bool normal_graph_contains(const PolyCone& k, const RVec& w, const RVec& u);

bool graphical_derivative_membership(const PolyhedralFunc& g, const RVec& z,
                                     const RVec& lambda, const RVec& w, const RVec& u,
                                     const Caps& caps = {});

/// Membership in gph N_K - gph N_K, decided piece-pair by exact
/// feasibility; the difference set itself is never materialized.
bool strict_graphical_derivative_membership(const PolyhedralFunc& g, const RVec& z,
                                            const RVec& lambda, const RVec& w, const RVec& u,
                                            const Caps& caps = {});

/// K* x K in the doubled dimension.
PolyCone regular_normal_cone(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                             const Caps& caps = {});

/// The difference cones F1 - F2 over nested face pairs F2 within F1,
/// deduplicated. Each limiting normal piece is (D)* x (D) for one entry.
std::vector<PolyCone> limiting_difference_cones(const PolyCone& k, const Caps& caps = {});

/// Union over nested face pairs F2 within F1 of (F1-F2)* x (F1-F2).
ConeUnion limiting_normal_cone(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                               const Caps& caps = {});
ConeUnion limiting_normal_cone_of(const PolyCone& k, const Caps& caps = {});

/// u in D*(subgradient map)(z,lambda)(w), via (u,-w) in the limiting cone.
bool coderivative_membership(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                             const RVec& w, const RVec& u, const Caps& caps = {});

/// 0 on the critical cone, +infinity outside.
ExtRat second_subderivative(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                            const RVec& w, const Caps& caps = {});

/// 0 on K - K, +infinity outside.
ExtRat strict_second_subderivative(const PolyhedralFunc& g, const RVec& z,
                                   const RVec& lambda, const RVec& w, const Caps& caps = {});

// ---------------------------------------------------------------------------
// Regularity flags
// ---------------------------------------------------------------------------

/// Five equivalent regularity flags, each computed by its own criterion.
/// The theory makes them identical; the test suite asserts it rather than
/// this struct enforcing it.
struct RegularityReport {
    bool ri_flag = false;
    bool strict_proto_diff = false;
    bool strict_twice_epi_diff = false;
    bool graph_regular = false;
    bool coderivative_equals_derivative = false;

    bool all_agree() const {
        return ri_flag == strict_proto_diff && ri_flag == strict_twice_epi_diff &&
               ri_flag == graph_regular && ri_flag == coderivative_equals_derivative;
    }
};

RegularityReport regularity_report(const PolyhedralFunc& g, const RVec& z,
                                   const RVec& lambda, const Caps& caps = {});

}  // namespace polyvar

#endif
