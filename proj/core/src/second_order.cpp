#include "polyvar/second_order.hpp"

#include <algorithm>

#include "polyvar/errors.hpp"
#include "polyvar/lp.hpp"

namespace polyvar {

namespace {

RVec concat(const RVec& a, const RVec& b) {
    RVec out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Decomposition require_decomposition(const PolyhedralFunc& g, const RVec& z,
                                    const RVec& lambda) {
    if (!g.in_domain(z)) throw NotSubgradient("point outside dom g");
    auto dec = decompose(g, z, lambda);
    if (!dec) throw NotSubgradient("lambda is not a subgradient at z");
    return *dec;
}

// Scales v so that its Euclidean norm is strictly below bound (1-norm
// dominates the 2-norm, so this is exact).
RVec shrink_below(const RVec& v, const Rat& bound) {
    if (is_zero(v)) return v;
    return scale(bound / (2 * (1 + norm1(v))), v);
}

}  // namespace

PolyCone critical_cone_from_decomposition(const PolyhedralFunc& g, const RVec& z,
                                          const Decomposition& dec, const Caps& caps) {
    const ActiveSets act = active_sets(g, z);
    const auto jp = dec.positive_sigma();
    const auto ip = dec.positive_tau();
    if (jp.empty()) throw NotSubgradient("decomposition has empty piece support");
    const RVec& a0 = g.pieces[jp.front()].first;

    std::vector<RVec> eqs, ineqs;
    for (std::size_t k = 1; k < jp.size(); ++k)
        eqs.push_back(sub(g.pieces[jp[k]].first, a0));
    for (auto i : ip) eqs.push_back(g.constraints[i].first);
    for (auto j : act.J_active)
        if (std::find(jp.begin(), jp.end(), j) == jp.end())
            ineqs.push_back(sub(g.pieces[j].first, a0));
    for (auto i : act.I_active)
        if (std::find(ip.begin(), ip.end(), i) == ip.end())
            ineqs.push_back(g.constraints[i].first);
    return PolyCone::from_halfspaces(g.dim, ineqs, eqs, caps);
}

CriticalCone critical_cone(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                           const Caps& caps) {
    const Decomposition dec = require_decomposition(g, z, lambda);
    const PolyCone via_system = critical_cone_from_decomposition(g, z, dec, caps);
    // independent route: normal cone to the subdifferential at lambda
    const HPolyhedron sub_h = to_hrep(subdifferential(g, z), caps);
    const PolyCone via_normal = normal_cone(sub_h, lambda, caps);
    if (!via_system.set_equal(via_normal))
        throw VerificationFailure("critical cone construction mismatch");
    return CriticalCone{z, lambda, via_normal};
}

bool is_ri_subgradient(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                       const Caps& caps) {
    const CriticalCone k = critical_cone(g, z, lambda, caps);
    const bool by_cone = k.cone.is_subspace();
    const bool by_ri = in_relative_interior(subdifferential(g, z), lambda, caps);
    if (by_cone != by_ri)
        throw VerificationFailure("subspace test disagrees with relative interior test");
    return by_cone;
}

// ---------------------------------------------------------------------------
// Graph sampling and reduction certification
// ---------------------------------------------------------------------------

std::vector<std::pair<RVec, RVec>> nearby_graph_samples(const PolyhedralFunc& g,
                                                        const RVec& z, const RVec& lambda,
                                                        const Rat& r, std::size_t count,
                                                        RatSampler& sampler,
                                                        const Caps& caps) {
    const Decomposition base = require_decomposition(g, z, lambda);
    const TangentConeResult tan = tangent_cone(g.domain(), z, caps);
    const auto& tan_gens = tan.cone.generators();
    const Rat rsq = r * r;

    std::vector<std::pair<RVec, RVec>> out;
    out.emplace_back(z, lambda);

    const std::size_t max_attempts = 40 * count + 40;
    for (std::size_t att = 0; att < max_attempts && out.size() < count; ++att) {
        // step in the domain: tangent direction scaled under both the
        // tangent-cone identity radius and r/2
        RVec w = rvec_zero(g.dim);
        for (const auto& gdir : tan_gens)
            if (sampler.index(2) == 0) w = add(w, scale(sampler.draw_nonneg(Rat(1)), gdir));
        const Rat cap_step = rat_min(tan.radius, r / 2);
        w = is_zero(w) ? w : scale(cap_step / (2 * (1 + norm1(w))), w);
        const RVec z2 = add(z, w);
        if (!g.in_domain(z2)) continue;  // cannot happen; cheap guard

        const ActiveSets act = active_sets(g, z2);
        // multipliers: start from the base decomposition, perturb within
        // the active sets at z2
        std::vector<Rat> sigma = base.sigma, tau = base.tau;
        bool support_ok = true;
        for (std::size_t j = 0; j < sigma.size() && support_ok; ++j)
            if (sigma[j] > 0 &&
                std::find(act.J_active.begin(), act.J_active.end(), j) == act.J_active.end())
                support_ok = false;
        for (std::size_t i = 0; i < tau.size() && support_ok; ++i)
            if (tau[i] > 0 &&
                std::find(act.I_active.begin(), act.I_active.end(), i) == act.I_active.end())
                support_ok = false;
        if (!support_ok) continue;

        Rat coeff_scale = 0;
        for (auto j : act.J_active) coeff_scale = rat_max(coeff_scale, norm1(g.pieces[j].first));
        for (auto i : act.I_active)
            coeff_scale = rat_max(coeff_scale, norm1(g.constraints[i].first));
        const Rat delta_cap = r / (8 * (1 + coeff_scale));

        if (act.J_active.size() > 1) {
            const std::size_t from = act.J_active[sampler.index(act.J_active.size())];
            const std::size_t to = act.J_active[sampler.index(act.J_active.size())];
            const Rat d = rat_min(sigma[from], sampler.draw_nonneg(delta_cap));
            sigma[from] -= d;
            sigma[to] += d;
        }
        for (auto i : act.I_active) {
            const Rat d = sampler.draw(delta_cap);
            tau[i] = rat_max(Rat(0), tau[i] + d);
        }

        RVec l2 = rvec_zero(g.dim);
        for (std::size_t j = 0; j < sigma.size(); ++j)
            if (sigma[j] != 0) l2 = add(l2, scale(sigma[j], g.pieces[j].first));
        for (std::size_t i = 0; i < tau.size(); ++i)
            if (tau[i] != 0) l2 = add(l2, scale(tau[i], g.constraints[i].first));

        if (norm2_sq(w) + norm2_sq(sub(l2, lambda)) > rsq) continue;
        out.emplace_back(z2, l2);
    }
    return out;
}

ReductionCertificate reduction_certify(const PolyhedralFunc& g, const RVec& z,
                                       const RVec& lambda, std::size_t samples,
                                       std::uint64_t seed, const Caps& caps) {
    const CriticalCone crit = critical_cone(g, z, lambda, caps);
    const PolyCone& k = crit.cone;
    const PolyCone pol = k.polar();
    const std::vector<Face> fs = faces(k, caps);
    std::vector<PolyCone> polar_faces;
    polar_faces.reserve(fs.size());
    for (const auto& f : fs)
        polar_faces.push_back(
            PolyCone::from_halfspaces(g.dim, k.generators(), f.cone.generators(), caps));

    const std::size_t n_graph_side = samples / 2;
    const std::size_t n_subgrad_side = samples - n_graph_side;
    const Rat floor_radius = Rat(1) / Rat(1 << 20);

    for (Rat r = 1; r >= floor_radius; r /= 2) {
        RatSampler sampler(seed);
        ReductionCertificate cert;
        cert.radius = r;
        bool ok = true;

        // side 1: exact members of gph N_K must be shifted graph members
        for (std::size_t s = 0; s < n_graph_side && ok; ++s) {
            const std::size_t fi = s % fs.size();
            RVec w = rvec_zero(g.dim), u = rvec_zero(g.dim);
            for (const auto& gen : fs[fi].cone.generators())
                w = add(w, scale(sampler.draw_nonneg(Rat(1)), gen));
            for (const auto& gen : polar_faces[fi].generators())
                u = add(u, scale(sampler.draw_nonneg(Rat(1)), gen));
            w = shrink_below(w, r / 2);
            u = shrink_below(u, r / 2);
            cert.tested_graph_side.emplace_back(w, u);
            ok = graph_membership(g, add(z, w), add(lambda, u));
        }
        // side 2: graph members near the base must satisfy the normal
        // cone graph conditions
        if (ok) {
            auto pairs = nearby_graph_samples(g, z, lambda, r, n_subgrad_side, sampler, caps);
            for (const auto& [z2, l2] : pairs) {
                const RVec w = sub(z2, z), u = sub(l2, lambda);
                cert.tested_subgrad_side.emplace_back(w, u);
                if (!(k.contains(w) && pol.contains(u) && dot(w, u) == 0)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return cert;
    }
    throw VerificationFailure(
        "reduction certification failed above radius 2^-20: implementation bug");
}

Rat support_stability_radius(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                             std::size_t samples, std::uint64_t seed, const Caps& caps) {
    const DecompositionSet decs = all_decompositions(g, z, lambda, caps);
    const Rat floor_radius = Rat(1) / Rat(1 << 20);
    for (Rat r = 1; r >= floor_radius; r /= 2) {
        RatSampler sampler(seed);
        const auto pairs = nearby_graph_samples(g, z, lambda, r, samples, sampler, caps);
        bool ok = true;
        for (const auto& dec : decs.vertices) {
            const auto jp = dec.positive_sigma();
            const auto ip = dec.positive_tau();
            for (const auto& [z2, l2] : pairs) {
                const ActiveSets act = active_sets(g, z2);
                for (auto j : jp)
                    ok = ok && std::find(act.J_active.begin(), act.J_active.end(), j) !=
                                   act.J_active.end();
                for (auto i : ip)
                    ok = ok && std::find(act.I_active.begin(), act.I_active.end(), i) !=
                                   act.I_active.end();
                if (!ok) break;
            }
            if (!ok) break;
        }
        if (ok) return r;
    }
    throw VerificationFailure("support stability radius not certified above 2^-20");
}

// ---------------------------------------------------------------------------
// Polarity and face pairs
// ---------------------------------------------------------------------------

bool polarity_check(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                    const Caps& caps) {
    const CriticalCone k = critical_cone(g, z, lambda, caps);
    const PolyhedralFunc conj = conjugate(g, caps);
    if (!graph_membership(conj, lambda, z))
        throw VerificationFailure("conjugate graph misses the swapped pair");
    const CriticalCone kconj = critical_cone(conj, lambda, z, caps);
    const bool cones_polar = k.cone.set_equal(kconj.cone.polar());
    const bool ri_match =
        is_ri_subgradient(g, z, lambda, caps) == is_ri_subgradient(conj, lambda, z, caps);
    return cones_polar && ri_match;
}

std::pair<PolyCone, PolyCone> nearby_face_pair(const PolyhedralFunc& g, const RVec& zbar,
                                               const RVec& lambdabar, const RVec& z,
                                               const RVec& lambda, const Caps& caps) {
    const CriticalCone base = critical_cone(g, zbar, lambdabar, caps);
    require_decomposition(g, z, lambda);
    const RVec w = sub(z, zbar), u = sub(lambda, lambdabar);
    if (!normal_graph_contains(base.cone, w, u))
        throw OutOfRadius("pair is outside the reduction neighborhood");

    const PolyCone f1 =
        PolyCone::from_halfspaces(g.dim, base.cone.halfspaces(), {u}, caps);
    const std::vector<Face> fs = faces(base.cone, caps);
    const PolyCone* f2 = nullptr;
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) {  // by increasing dim
        if (it->cone.in_relative_interior(w)) {
            f2 = &it->cone;
            break;
        }
    }
    if (!f2) throw VerificationFailure("relative interiors of faces failed to cover w");

    const PolyCone diff = cone_difference(f1, *f2, caps);
    const CriticalCone probe = critical_cone(g, z, lambda, caps);
    if (!probe.cone.set_equal(diff))
        throw OutOfRadius("face pair fails to reproduce the critical cone: pair too far");
    // lineality/difference sandwich
    std::vector<RVec> lin_gens;
    for (const auto& l : base.cone.lineality_basis()) {
        lin_gens.push_back(l);
        lin_gens.push_back(negate(l));
    }
    const PolyCone lin = PolyCone::from_generators(g.dim, lin_gens, caps);
    if (!lin.subset_of(probe.cone) ||
        !probe.cone.subset_of(cone_difference(base.cone, base.cone, caps)))
        throw OutOfRadius("nearby critical cone violates the face sandwich");
    return {f1, *f2};
}

std::pair<RVec, RVec> face_pair_witness(const PolyhedralFunc& g, const RVec& z,
                                        const RVec& lambda, const PolyCone& f1,
                                        const PolyCone& f2, const Rat& r, const Caps& caps) {
    const CriticalCone base = critical_cone(g, z, lambda, caps);
    if (!f1.subset_of(base.cone) || !f2.subset_of(f1))
        throw NotAFacePair("faces must be nested inside the critical cone");
    // both inputs must be genuine faces: each equals the face cut out by
    // the base halfspaces tight on it
    for (const PolyCone* f : {&f1, &f2}) {
        std::vector<RVec> tight, rest;
        for (const auto& c : base.cone.halfspaces()) {
            bool all_tight = true;
            for (const auto& gen : f->generators()) all_tight = all_tight && dot(c, gen) == 0;
            (all_tight ? tight : rest).push_back(c);
        }
        if (!f->set_equal(PolyCone::from_halfspaces(g.dim, rest, tight, caps)))
            throw NotAFacePair("input cone is not a face of the critical cone");
    }

    const PolyCone polar_f1 =
        PolyCone::from_halfspaces(g.dim, base.cone.generators(), f1.generators(), caps);
    const RVec u = shrink_below(polar_f1.relative_interior_point(), r / 2);
    const RVec w = shrink_below(f2.relative_interior_point(), r / 2);

    const RVec z2 = add(z, w), l2 = add(lambda, u);
    if (!graph_membership(g, z2, l2))
        throw OutOfRadius("witness left the graph: radius too large");
    const CriticalCone probe = critical_cone(g, z2, l2, caps);
    if (!probe.cone.set_equal(cone_difference(f1, f2, caps)))
        throw OutOfRadius("witness critical cone mismatch: radius too large");
    return {z2, l2};
}

// ---------------------------------------------------------------------------
// Graphical derivatives and normal cones of the graph
// ---------------------------------------------------------------------------

PolyCone graph_piece(const PolyCone& k, const PolyCone& face_cone, const Caps& caps) {
    const PolyCone polar_face = PolyCone::from_halfspaces(
        k.ambient_dim(), k.generators(), face_cone.generators(), caps);
    return PolyCone::product(face_cone, polar_face);
}

bool normal_graph_contains(const PolyCone& k, const RVec& w, const RVec& u) {
    return k.contains(w) && k.polar().contains(u) && dot(w, u) == 0;
}

bool graphical_derivative_membership(const PolyhedralFunc& g, const RVec& z,
                                     const RVec& lambda, const RVec& w, const RVec& u,
                                     const Caps& caps) {
    return normal_graph_contains(critical_cone(g, z, lambda, caps).cone, w, u);
}

bool strict_graphical_derivative_membership(const PolyhedralFunc& g, const RVec& z,
                                            const RVec& lambda, const RVec& w, const RVec& u,
                                            const Caps& caps) {
    const CriticalCone crit = critical_cone(g, z, lambda, caps);
    const std::vector<Face> fs = faces(crit.cone, caps);
    std::vector<PolyCone> pieces;
    pieces.reserve(fs.size());
    for (const auto& f : fs) pieces.push_back(graph_piece(crit.cone, f.cone, caps));
    const RVec q = concat(w, u);
    for (const auto& pa : pieces)
        for (const auto& pb : pieces)
            if (minkowski_diff_contains(pa, pb, q)) return true;
    return false;
}

PolyCone regular_normal_cone(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                             const Caps& caps) {
    const CriticalCone crit = critical_cone(g, z, lambda, caps);
    return PolyCone::product(crit.cone.polar(), crit.cone);
}

std::vector<PolyCone> limiting_difference_cones(const PolyCone& k, const Caps& caps) {
    const std::vector<Face> fs = faces(k, caps);
    std::vector<PolyCone> out;
    for (const auto& f1 : fs) {
        for (const auto& f2 : fs) {
            // f2 inside f1 <=> f2's tight closure contains f1's
            if ((f1.tight_mask & ~f2.tight_mask) != 0) continue;
            PolyCone d = cone_difference(f1.cone, f2.cone, caps);
            bool dup = false;
            for (const auto& seen : out) dup = dup || seen.set_equal(d);
            if (!dup) out.push_back(std::move(d));
        }
    }
    return out;
}

ConeUnion limiting_normal_cone_of(const PolyCone& k, const Caps& caps) {
    ConeUnion u;
    u.dim = 2 * k.ambient_dim();
    for (const auto& d : limiting_difference_cones(k, caps))
        u.pieces.push_back(PolyCone::product(d.polar(), d));
    u.canonicalize();
    return u;
}

ConeUnion limiting_normal_cone(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                               const Caps& caps) {
    return limiting_normal_cone_of(critical_cone(g, z, lambda, caps).cone, caps);
}

bool coderivative_membership(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                             const RVec& w, const RVec& u, const Caps& caps) {
    return limiting_normal_cone(g, z, lambda, caps).contains(concat(u, negate(w)));
}

ExtRat second_subderivative(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                            const RVec& w, const Caps& caps) {
    const CriticalCone crit = critical_cone(g, z, lambda, caps);
    return crit.cone.contains(w) ? ExtRat::of(Rat(0)) : ExtRat::infinity();
}

ExtRat strict_second_subderivative(const PolyhedralFunc& g, const RVec& z,
                                   const RVec& lambda, const RVec& w, const Caps& caps) {
    const CriticalCone crit = critical_cone(g, z, lambda, caps);
    const PolyCone span = cone_difference(crit.cone, crit.cone, caps);
    return span.contains(w) ? ExtRat::of(Rat(0)) : ExtRat::infinity();
}

// ---------------------------------------------------------------------------
// Regularity flags
// ---------------------------------------------------------------------------

namespace {

// Exact test for cone(gens) inside gph N_K: every generator obeys the
// convex constraints and the complementarity form vanishes identically on
// the conic hull (all symmetrized pairwise products zero).
bool conic_hull_in_normal_graph(const PolyCone& k, const PolyCone& kstar,
                                const std::vector<RVec>& gens_wu) {
    const std::size_t m = k.ambient_dim();
    for (const auto& gen : gens_wu) {
        const RVec w(gen.begin(), gen.begin() + m);
        const RVec u(gen.begin() + m, gen.end());
        if (!k.contains(w) || !kstar.contains(u)) return false;
    }
    for (std::size_t s = 0; s < gens_wu.size(); ++s) {
        const RVec ws(gens_wu[s].begin(), gens_wu[s].begin() + m);
        const RVec us(gens_wu[s].begin() + m, gens_wu[s].end());
        for (std::size_t t = s; t < gens_wu.size(); ++t) {
            const RVec wt(gens_wu[t].begin(), gens_wu[t].begin() + m);
            const RVec ut(gens_wu[t].begin() + m, gens_wu[t].end());
            if (dot(ws, ut) + dot(wt, us) != 0) return false;
        }
    }
    return true;
}

}  // namespace

RegularityReport regularity_report(const PolyhedralFunc& g, const RVec& z,
                                   const RVec& lambda, const Caps& caps) {
    const CriticalCone crit = critical_cone(g, z, lambda, caps);
    const PolyCone& k = crit.cone;
    const PolyCone kstar = k.polar();
    const std::vector<Face> fs = faces(k, caps);

    RegularityReport rep;

    // (1) relative interior, via the subspace test with cross-check
    rep.ri_flag = is_ri_subgradient(g, z, lambda, caps);

    // (2) strict proto-differentiability: the self-difference of the
    // normal cone graph collapses back onto the graph
    std::vector<PolyCone> pieces;
    pieces.reserve(fs.size());
    for (const auto& f : fs) pieces.push_back(graph_piece(k, f.cone, caps));
    rep.strict_proto_diff = true;
    for (const auto& pa : pieces) {
        for (const auto& pb : pieces) {
            std::vector<RVec> gens = pa.generators();
            for (const auto& gb : pb.generators()) gens.push_back(negate(gb));
            if (!conic_hull_in_normal_graph(k, kstar, gens)) {
                rep.strict_proto_diff = false;
                break;
            }
        }
        if (!rep.strict_proto_diff) break;
    }

    // (3) strict twice epi-differentiability: the second-order difference
    // quotients keep a stable domain, i.e. K - K stays inside K
    rep.strict_twice_epi_diff = cone_difference(k, k, caps).subset_of(k);

    // (4) graph regularity: limiting normals collapse to regular normals
    const ConeUnion limiting = limiting_normal_cone_of(k, caps);
    const PolyCone regular = PolyCone::product(kstar, k);
    rep.graph_regular = true;
    for (const auto& piece : limiting.pieces)
        rep.graph_regular = rep.graph_regular && piece.subset_of(regular);

    // sanity: regular normals are always limiting normals
    for (const auto& gen : regular.generators())
        if (!limiting.contains(gen))
            throw VerificationFailure("regular normal escaped the limiting cone");

    // (5) coderivative graph inside the derivative graph (the reverse
    // inclusion always holds)
    rep.coderivative_equals_derivative = true;
    for (const auto& f1 : fs) {
        for (const auto& f2 : fs) {
            if ((f1.tight_mask & ~f2.tight_mask) != 0) continue;
            const PolyCone d = cone_difference(f1.cone, f2.cone, caps);
            const PolyCone dstar = d.polar();
            std::vector<RVec> gens;
            for (const auto& b : d.generators()) gens.push_back(concat(negate(b), rvec_zero(g.dim)));
            for (const auto& a : dstar.generators()) gens.push_back(concat(rvec_zero(g.dim), a));
            if (!conic_hull_in_normal_graph(k, kstar, gens)) {
                rep.coderivative_equals_derivative = false;
                break;
            }
        }
        if (!rep.coderivative_equals_derivative) break;
    }

    // sanity: every derivative-graph generator is a coderivative member
    for (const auto& f : fs) {
        const PolyCone piece = graph_piece(k, f.cone, caps);
        for (const auto& gen : piece.generators()) {
            const RVec w(gen.begin(), gen.begin() + g.dim);
            const RVec u(gen.begin() + g.dim, gen.end());
            if (!limiting.contains(concat(u, negate(w))))
                throw VerificationFailure("derivative graph escaped the coderivative");
        }
    }
    return rep;
}

}  // namespace polyvar
