#include "polyvar/cone.hpp"

#include <algorithm>
#include <map>

#include "polyvar/errors.hpp"
#include "polyvar/lp.hpp"

namespace polyvar {

namespace {

std::vector<RVec> gens_from_dd(const ConeGenerators& g) {
    std::vector<RVec> out = g.rays;
    for (const auto& l : g.lines) {
        out.push_back(l);
        out.push_back(negate(l));
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace

PolyCone PolyCone::from_halfspaces(std::size_t dim, const std::vector<RVec>& ineq_normals,
                                   const std::vector<RVec>& eq_normals, const Caps& caps) {
    PolyCone k;
    k.dim_ = dim;
    const ConeGenerators prim = dd_cone(dim, ineq_normals, eq_normals, caps);
    k.lineality_ = prim.lines;
    k.generators_ = gens_from_dd(prim);
    // canonical H-side: generators of the polar
    const ConeGenerators pol = dd_cone(dim, k.generators_, {}, caps);
    k.halfspaces_ = gens_from_dd(pol);
    return k;
}

PolyCone PolyCone::from_generators(std::size_t dim, const std::vector<RVec>& gens,
                                   const Caps& caps) {
    PolyCone k;
    k.dim_ = dim;
    const ConeGenerators pol = dd_cone(dim, gens, {}, caps);
    k.halfspaces_ = gens_from_dd(pol);
    const ConeGenerators prim = dd_cone(dim, k.halfspaces_, {}, caps);
    k.lineality_ = prim.lines;
    k.generators_ = gens_from_dd(prim);
    return k;
}

PolyCone PolyCone::product(const PolyCone& k1, const PolyCone& k2) {
    PolyCone k;
    k.dim_ = k1.dim_ + k2.dim_;
    auto embed_lo = [&](const RVec& v) {
        RVec w = rvec_zero(k.dim_);
        std::copy(v.begin(), v.end(), w.begin());
        return w;
    };
    auto embed_hi = [&](const RVec& v) {
        RVec w = rvec_zero(k.dim_);
        std::copy(v.begin(), v.end(), w.begin() + k1.dim_);
        return w;
    };
    for (const auto& g : k1.generators_) k.generators_.push_back(embed_lo(g));
    for (const auto& g : k2.generators_) k.generators_.push_back(embed_hi(g));
    for (const auto& c : k1.halfspaces_) k.halfspaces_.push_back(embed_lo(c));
    for (const auto& c : k2.halfspaces_) k.halfspaces_.push_back(embed_hi(c));
    for (const auto& l : k1.lineality_) k.lineality_.push_back(embed_lo(l));
    for (const auto& l : k2.lineality_) k.lineality_.push_back(embed_hi(l));
    std::sort(k.generators_.begin(), k.generators_.end(), lex_less);
    std::sort(k.halfspaces_.begin(), k.halfspaces_.end(), lex_less);
    return k;
}

PolyCone PolyCone::full_space(std::size_t dim, const Caps& caps) {
    return from_halfspaces(dim, {}, {}, caps);
}

PolyCone PolyCone::zero(std::size_t dim) {
    PolyCone k;
    k.dim_ = dim;
    for (std::size_t i = 0; i < dim; ++i) {
        RVec e = rvec_zero(dim);
        e[i] = 1;
        k.halfspaces_.push_back(e);
        k.halfspaces_.push_back(negate(e));
    }
    std::sort(k.halfspaces_.begin(), k.halfspaces_.end(), lex_less);
    return k;
}

bool PolyCone::contains(const RVec& x) const {
    if (x.size() != dim_) throw DimMismatch("PolyCone::contains");
    for (const auto& c : halfspaces_)
        if (dot(c, x) > 0) return false;
    return true;
}

bool PolyCone::is_subspace() const {
    for (const auto& g : generators_)
        if (!contains(negate(g))) return false;
    return true;
}

std::size_t PolyCone::dimension() const {
    if (generators_.empty()) return 0;
    RMat m;
    for (const auto& g : generators_) m.push_row(g);
    return rank(std::move(m));
}

PolyCone PolyCone::polar() const {
    PolyCone p;
    p.dim_ = dim_;
    p.generators_ = halfspaces_;
    p.halfspaces_ = generators_;
    // lineality of K* is the orthogonal complement of span K
    if (generators_.empty()) {
        for (std::size_t i = 0; i < dim_; ++i) {
            RVec e = rvec_zero(dim_);
            e[i] = 1;
            p.lineality_.push_back(std::move(e));
        }
    } else {
        RMat m(0, dim_);
        for (const auto& g : generators_) m.push_row(g);
        p.lineality_ = nullspace(std::move(m));
    }
    return p;
}

bool PolyCone::subset_of(const PolyCone& other) const {
    for (const auto& g : generators_)
        if (!other.contains(g)) return false;
    return true;
}

bool PolyCone::set_equal(const PolyCone& other) const {
    return subset_of(other) && other.subset_of(*this);
}

RVec PolyCone::relative_interior_point() const {
    RVec s = rvec_zero(dim_);
    for (const auto& g : generators_) s = add(s, g);
    return s;
}

bool PolyCone::in_relative_interior(const RVec& x) const {
    if (!contains(x)) return false;
    // strict on every halfspace that is not tight on the whole cone
    for (const auto& c : halfspaces_) {
        bool tight_everywhere = true;
        for (const auto& g : generators_)
            tight_everywhere = tight_everywhere && dot(c, g) == 0;
        if (!tight_everywhere && dot(c, x) == 0) return false;
    }
    return true;
}

RMat PolyCone::projection_matrix() const {
    if (!is_subspace()) throw DomainError("projection_matrix: cone is not a subspace");
    return polyvar::projection_matrix(dim_, lineality_);
}

RVec PolyCone::project(const RVec& x, const Caps& caps) const {
    if (x.size() != dim_) throw DimMismatch("PolyCone::project");
    if (is_subspace()) return mat_vec(projection_matrix(), x);
    const PolyCone pol = polar();
    for (const auto& f : faces(*this, caps)) {
        const RMat p = polyvar::projection_matrix(dim_, f.cone.generators());
        const RVec y = mat_vec(p, x);
        if (!f.cone.contains(y)) continue;
        if (!pol.contains(sub(x, y))) continue;
        return y;
    }
    throw VerificationFailure("project: no face accepted the KKT candidate");
}

// ---------------------------------------------------------------------------
// Face lattice
// ---------------------------------------------------------------------------

std::vector<Face> faces(const PolyCone& k, const Caps& caps) {
    const auto& hs = k.halfspaces();
    if (hs.size() > caps.face_halfspaces) throw CapExceeded("faces: halfspace count");
    const std::size_t n = hs.size();

    auto face_of = [&](std::uint64_t forced) {
        std::vector<RVec> eqs;
        std::vector<RVec> ineqs;
        for (std::size_t i = 0; i < n; ++i)
            (forced >> i & 1 ? eqs : ineqs).push_back(hs[i]);
        return PolyCone::from_halfspaces(k.ambient_dim(), ineqs, eqs, caps);
    };
    auto closure_of = [&](const PolyCone& f) {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool tight = true;
            for (const auto& g : f.generators()) tight = tight && dot(hs[i], g) == 0;
            if (tight) m |= (std::uint64_t{1} << i);
        }
        return m;
    };

    std::map<std::uint64_t, Face> found;
    std::vector<std::uint64_t> queue;
    {
        PolyCone top = face_of(0);
        const std::uint64_t cl = closure_of(top);
        found.emplace(cl, Face{std::move(top), cl, 0});
        queue.push_back(cl);
    }
    while (!queue.empty()) {
        const std::uint64_t base = queue.back();
        queue.pop_back();
        for (std::size_t i = 0; i < n; ++i) {
            if (base >> i & 1) continue;
            PolyCone f = face_of(base | (std::uint64_t{1} << i));
            const std::uint64_t cl = closure_of(f);
            if (found.count(cl)) continue;
            found.emplace(cl, Face{std::move(f), cl, 0});
            queue.push_back(cl);
        }
    }

    std::vector<Face> out;
    out.reserve(found.size());
    for (auto& [mask, f] : found) {
        f.dim = f.cone.dimension();
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
        if (a.dim != b.dim) return a.dim > b.dim;
        return a.tight_mask < b.tight_mask;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Tangent and normal cones of polyhedra
// ---------------------------------------------------------------------------

TangentConeResult tangent_cone(const HPolyhedron& p, const RVec& x, const Caps& caps) {
    if (!p.contains(x)) throw NotMember("tangent_cone: point is outside the polyhedron");
    std::vector<RVec> ineq, eq;
    Rat radius = 1;
    for (const auto& [c, d] : p.ineqs) {
        const Rat slack = d - dot(c, x);
        if (slack == 0) {
            ineq.push_back(c);
        } else if (!is_zero(c)) {
            // inactive constraints stay satisfied for steps below slack/|c|
            const Rat bound = slack / norm1(c);
            radius = rat_min(radius, bound);
        }
    }
    for (const auto& [c, d] : p.eqs) eq.push_back(c);
    return {PolyCone::from_halfspaces(p.dim, ineq, eq, caps), radius};
}

PolyCone normal_cone(const HPolyhedron& p, const RVec& x, const Caps& caps) {
    if (!p.contains(x)) throw NotMember("normal_cone: point is outside the polyhedron");
    std::vector<RVec> gens;
    for (const auto& [c, d] : p.ineqs)
        if (dot(c, x) == d) gens.push_back(c);
    for (const auto& [c, d] : p.eqs) {
        gens.push_back(c);
        gens.push_back(negate(c));
    }
    return PolyCone::from_generators(p.dim, gens, caps);
}

// ---------------------------------------------------------------------------
// Cone arithmetic
// ---------------------------------------------------------------------------

PolyCone cone_sum(const PolyCone& a, const PolyCone& b, const Caps& caps) {
    if (a.ambient_dim() != b.ambient_dim()) throw DimMismatch("cone_sum");
    std::vector<RVec> gens = a.generators();
    gens.insert(gens.end(), b.generators().begin(), b.generators().end());
    return PolyCone::from_generators(a.ambient_dim(), gens, caps);
}

PolyCone cone_negate(const PolyCone& a, const Caps& caps) {
    std::vector<RVec> gens;
    gens.reserve(a.generators().size());
    for (const auto& g : a.generators()) gens.push_back(negate(g));
    return PolyCone::from_generators(a.ambient_dim(), gens, caps);
}

PolyCone cone_intersect(const PolyCone& a, const PolyCone& b, const Caps& caps) {
    if (a.ambient_dim() != b.ambient_dim()) throw DimMismatch("cone_intersect");
    std::vector<RVec> hs = a.halfspaces();
    hs.insert(hs.end(), b.halfspaces().begin(), b.halfspaces().end());
    return PolyCone::from_halfspaces(a.ambient_dim(), hs, {}, caps);
}

PolyCone cone_difference(const PolyCone& a, const PolyCone& b, const Caps& caps) {
    return cone_sum(a, cone_negate(b, caps), caps);
}

bool minkowski_diff_contains(const PolyCone& a, const PolyCone& b, const RVec& q) {
    if (a.ambient_dim() != b.ambient_dim()) throw DimMismatch("minkowski_diff_contains");
    const std::size_t d = a.ambient_dim();
    if (q.size() != d) throw DimMismatch("minkowski_diff_contains point");
    LinSystem sys;
    sys.dim = 2 * d;  // (p1, p2)
    auto lift = [&](const RVec& c, std::size_t offset) {
        RVec row = rvec_zero(2 * d);
        std::copy(c.begin(), c.end(), row.begin() + offset);
        return row;
    };
    for (const auto& c : a.halfspaces()) sys.add_le(lift(c, 0), Rat(0));
    for (const auto& c : b.halfspaces()) sys.add_le(lift(c, d), Rat(0));
    for (std::size_t i = 0; i < d; ++i) {
        RVec row = rvec_zero(2 * d);
        row[i] = 1;
        row[d + i] = -1;
        sys.add_eq(std::move(row), q[i]);
    }
    return find_feasible(sys).has_value();
}

// ---------------------------------------------------------------------------
// ConeUnion
// ---------------------------------------------------------------------------

bool ConeUnion::contains(const RVec& x) const {
    for (const auto& p : pieces)
        if (p.contains(x)) return true;
    return false;
}

void ConeUnion::canonicalize() {
    std::vector<PolyCone> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pieces.size() && !dominated; ++j) {
            if (i == j) continue;
            if (!pieces[i].subset_of(pieces[j])) continue;
            // equal pieces: keep the first occurrence only
            if (pieces[j].subset_of(pieces[i]) && j > i) continue;
            dominated = true;
        }
        if (!dominated) out.push_back(pieces[i]);
    }
    pieces = std::move(out);
}

bool ConeUnion::set_equal(const ConeUnion& other) const {
    // Mutual inclusion piece by piece. A convex piece lies in a union of
    // cones only if it lies in a single piece here; that holds for the
    // unions this library constructs (each is closed under the faces used
    // to build it) and is verified, not assumed, by the membership
    // cross-checks in the test suite.
    auto covered = [](const ConeUnion& u, const PolyCone& p) {
        for (const auto& q : u.pieces)
            if (p.subset_of(q)) return true;
        return false;
    };
    for (const auto& p : pieces)
        if (!covered(other, p)) return false;
    for (const auto& q : other.pieces)
        if (!covered(*this, q)) return false;
    return true;
}

}  // namespace polyvar
