#include "polyvar/polyhedron.hpp"

#include <algorithm>
#include <map>

#include "polyvar/errors.hpp"
#include "polyvar/lp.hpp"

namespace polyvar {

bool HPolyhedron::contains(const RVec& x) const {
    if (x.size() != dim) throw DimMismatch("HPolyhedron::contains");
    for (const auto& [c, d] : ineqs)
        if (dot(c, x) > d) return false;
    for (const auto& [c, d] : eqs)
        if (dot(c, x) != d) return false;
    return true;
}

bool VPolyhedron::contains(const RVec& x) const {
    if (x.size() != dim) throw DimMismatch("VPolyhedron::contains");
    if (points.empty()) return false;
    // sigma >= 0 over points (sum 1), mu >= 0 over rays, combination = x
    const std::size_t np = points.size(), nr = rays.size();
    RMat A(dim + 1, np + nr);
    RVec b(dim + 1);
    for (std::size_t j = 0; j < np; ++j) {
        for (std::size_t i = 0; i < dim; ++i) A(i, j) = points[j][i];
        A(dim, j) = 1;
    }
    for (std::size_t j = 0; j < nr; ++j)
        for (std::size_t i = 0; i < dim; ++i) A(i, np + j) = rays[j][i];
    for (std::size_t i = 0; i < dim; ++i) b[i] = x[i];
    b[dim] = 1;
    return simplex_solve(A, b, RVec(np + nr, Rat(0))).status == LPStatus::Optimal;
}

// ---------------------------------------------------------------------------
// Double description
// ---------------------------------------------------------------------------

namespace {

struct DDState {
    std::size_t dim;
    std::vector<RVec> lines;
    std::vector<RVec> rays;
    std::vector<RVec> processed_ineqs;

    // Tight-set bitmask of a ray over the inequalities processed so far.
    // Equality rows are tight for every ray by construction and carry no
    // adjacency information.
    std::uint64_t tight_mask(const RVec& r) const {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < processed_ineqs.size(); ++i)
            if (dot(processed_ineqs[i], r) == 0) m |= (std::uint64_t{1} << i);
        return m;
    }

    void dedup_rays() {
        std::vector<RVec> out;
        for (auto& r : rays) {
            RVec p = primitive(r);
            if (is_zero(p)) continue;
            bool seen = false;
            for (const auto& q : out) seen = seen || q == p;
            if (!seen) out.push_back(std::move(p));
        }
        rays = std::move(out);
    }

    // Removes one line hit by the normal a, projecting everything else
    // onto the hyperplane <a,x> = 0. Returns the removed (unprojected)
    // line scaled so that <a,l*> = 1.
    std::optional<RVec> reduce_lineality(const RVec& a) {
        std::size_t hit = lines.size();
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (dot(a, lines[i]) != 0) {
                hit = i;
                break;
            }
        if (hit == lines.size()) return std::nullopt;
        RVec pivot = scale(Rat(1) / dot(a, lines[hit]), lines[hit]);
        lines.erase(lines.begin() + hit);
        for (auto& l : lines) {
            const Rat t = dot(a, l);
            if (t != 0) l = sub(l, scale(t, pivot));
        }
        for (auto& r : rays) {
            const Rat t = dot(a, r);
            if (t != 0) r = sub(r, scale(t, pivot));
        }
        return pivot;
    }

    void insert(const RVec& a, bool equality) {
        if (is_zero(a)) return;
        if (auto pivot = reduce_lineality(a)) {
            if (!equality) rays.push_back(negate(*pivot));  // <a,-l*> = -1
            dedup_rays();
            if (!equality) processed_ineqs.push_back(a);
            return;
        }
        // lineality already orthogonal to a: split rays by sign
        std::vector<RVec> pos, zero, neg;
        for (auto& r : rays) {
            const int s = sign(dot(a, r));
            (s > 0 ? pos : s < 0 ? neg : zero).push_back(r);
        }
        std::vector<RVec> next = equality ? zero : neg;
        if (!equality) next.insert(next.end(), zero.begin(), zero.end());
        if (equality) { /* keep zero only */ }
        if (!pos.empty() && !neg.empty()) {
            // adjacency over the cone processed so far (combinatorial test)
            std::vector<std::uint64_t> masks;
            masks.reserve(rays.size());
            for (const auto& r : rays) masks.push_back(tight_mask(r));
            auto mask_of = [&](const RVec& r) {
                for (std::size_t i = 0; i < rays.size(); ++i)
                    if (rays[i] == r) return masks[i];
                return tight_mask(r);
            };
            for (const auto& rp : pos) {
                const std::uint64_t mp = mask_of(rp);
                for (const auto& rn : neg) {
                    const std::uint64_t common = mp & mask_of(rn);
                    bool adjacent = true;
                    for (const auto& other : rays) {
                        if (other == rp || other == rn) continue;
                        if ((common & ~tight_mask(other)) == 0) {
                            adjacent = false;
                            break;
                        }
                    }
                    if (!adjacent) continue;
                    RVec combo = sub(scale(dot(a, rp), rn), scale(dot(a, rn), rp));
                    if (!is_zero(combo)) next.push_back(std::move(combo));
                }
            }
        }
        rays = std::move(next);
        dedup_rays();
        if (!equality) processed_ineqs.push_back(a);
    }
};

}  // namespace

ConeGenerators dd_cone(std::size_t dim, const std::vector<RVec>& ineq_normals,
                       const std::vector<RVec>& eq_normals, const Caps& caps) {
    if (dim > caps.dd_dim + 1)
        throw CapExceeded("dd_cone: dimension " + std::to_string(dim));
    if (ineq_normals.size() + eq_normals.size() > caps.dd_constraints + 2)
        throw CapExceeded("dd_cone: constraint count");
    if (ineq_normals.size() > 64)
        throw CapExceeded("dd_cone: tight-mask width");

    DDState st;
    st.dim = dim;
    for (std::size_t i = 0; i < dim; ++i) {
        RVec e = rvec_zero(dim);
        e[i] = 1;
        st.lines.push_back(std::move(e));
    }
    for (const auto& e : eq_normals) {
        if (e.size() != dim) throw DimMismatch("dd_cone equality normal");
        st.insert(e, true);
    }
    for (const auto& a : ineq_normals) {
        if (a.size() != dim) throw DimMismatch("dd_cone inequality normal");
        st.insert(a, false);
    }

    ConeGenerators out;
    if (!st.lines.empty()) {
        RMat m;
        for (const auto& l : st.lines) m.push_row(l);
        rref(m);
        for (std::size_t i = 0; i < m.rows; ++i) {
            RVec row = m.row(i);
            if (!is_zero(row)) out.lines.push_back(primitive_signed(row));
        }
    }
    out.rays = st.rays;
    for (auto& r : out.rays) r = primitive(r);
    std::sort(out.lines.begin(), out.lines.end(), lex_less);
    std::sort(out.rays.begin(), out.rays.end(), lex_less);
    return out;
}

// ---------------------------------------------------------------------------
// Polyhedron conversions
// ---------------------------------------------------------------------------

VPolyhedron to_vrep(const HPolyhedron& p, const Caps& caps) {
    if (p.dim > caps.dd_dim) throw CapExceeded("to_vrep: dimension");
    if (p.ineqs.size() + p.eqs.size() > caps.dd_constraints)
        throw CapExceeded("to_vrep: constraint count");

    const std::size_t hd = p.dim + 1;
    std::vector<RVec> ineq, eq;
    for (const auto& [c, d] : p.ineqs) {
        RVec row = c;
        row.push_back(-d);
        ineq.push_back(std::move(row));
    }
    {
        RVec tpos = rvec_zero(hd);
        tpos[p.dim] = -1;  // -t <= 0
        ineq.push_back(std::move(tpos));
    }
    for (const auto& [c, d] : p.eqs) {
        RVec row = c;
        row.push_back(-d);
        eq.push_back(std::move(row));
    }
    const ConeGenerators g = dd_cone(hd, ineq, eq, caps);

    VPolyhedron v;
    v.dim = p.dim;
    for (const auto& l : g.lines) {
        // homogenization forces t = 0 on lines
        RVec dir(l.begin(), l.end() - 1);
        v.rays.push_back(dir);
        v.rays.push_back(negate(dir));
    }
    for (const auto& r : g.rays) {
        const Rat t = r.back();
        RVec x(r.begin(), r.end() - 1);
        if (t > 0)
            v.points.push_back(scale(Rat(1) / t, x));
        else
            v.rays.push_back(primitive(x));
    }
    std::sort(v.points.begin(), v.points.end(), lex_less);
    std::sort(v.rays.begin(), v.rays.end(), lex_less);
    v.rays.erase(std::unique(v.rays.begin(), v.rays.end()), v.rays.end());
    return v;
}

HPolyhedron to_hrep(const VPolyhedron& p, const Caps& caps) {
    if (p.dim > caps.dd_dim) throw CapExceeded("to_hrep: dimension");
    if (p.points.size() + p.rays.size() > caps.dd_constraints)
        throw CapExceeded("to_hrep: generator count");

    HPolyhedron h(p.dim);
    if (p.empty()) {
        h.add_le(rvec_zero(p.dim), Rat(-1));
        return h;
    }
    // polar of the homogenization: normals (point,1) and (ray,0)
    const std::size_t hd = p.dim + 1;
    std::vector<RVec> normals;
    for (const auto& pt : p.points) {
        RVec row = pt;
        row.push_back(Rat(1));
        normals.push_back(std::move(row));
    }
    for (const auto& r : p.rays) {
        RVec row = r;
        row.push_back(Rat(0));
        normals.push_back(std::move(row));
    }
    const ConeGenerators g = dd_cone(hd, normals, {}, caps);
    for (const auto& l : g.lines) {
        RVec c(l.begin(), l.end() - 1);
        h.add_eq(std::move(c), -l.back());
    }
    for (const auto& r : g.rays) {
        RVec c(r.begin(), r.end() - 1);
        if (is_zero(c) && r.back() < 0) continue;  // vacuous 0 <= 1
        h.add_le(std::move(c), -r.back());
    }
    return h;
}

std::vector<std::size_t> implicit_equalities(const HPolyhedron& p, const VPolyhedron& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.ineqs.size(); ++i) {
        const auto& [c, d] = p.ineqs[i];
        bool tight = true;
        for (const auto& pt : v.points) tight = tight && dot(c, pt) == d;
        for (const auto& r : v.rays) tight = tight && dot(c, r) == 0;
        if (tight) out.push_back(i);
    }
    return out;
}

bool in_relative_interior(const HPolyhedron& p, const RVec& x, const Caps& caps) {
    const VPolyhedron v = to_vrep(p, caps);
    if (v.empty()) return false;
    for (const auto& [c, d] : p.eqs)
        if (dot(c, x) != d) return false;
    const auto implicit = implicit_equalities(p, v);
    std::vector<bool> is_implicit(p.ineqs.size(), false);
    for (auto i : implicit) is_implicit[i] = true;
    for (std::size_t i = 0; i < p.ineqs.size(); ++i) {
        const auto& [c, d] = p.ineqs[i];
        const Rat val = dot(c, x);
        if (is_implicit[i] ? val != d : val >= d) return false;
    }
    return true;
}

bool in_relative_interior(const VPolyhedron& p, const RVec& x, const Caps& caps) {
    if (p.empty()) return false;
    return in_relative_interior(to_hrep(p, caps), x, caps);
}

}  // namespace polyvar
