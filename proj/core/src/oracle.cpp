#include "polyvar/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "polyvar/errors.hpp"
#include "polyvar/prox.hpp"

namespace polyvar {

ExtRat second_diff_quotient(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                            const Rat& t, const RVec& w) {
    if (t <= 0) throw DomainError("second_diff_quotient: t must be positive");
    const ExtRat g0 = eval(g, z);
    if (g0.is_infinite()) throw NotInDomain("second_diff_quotient: base point outside dom g");
    const ExtRat g1 = eval(g, add(z, scale(t, w)));
    if (g1.is_infinite()) return ExtRat::infinity();
    const Rat num = g1.value() - g0.value() - t * dot(lambda, w);
    return ExtRat::of(num / (t * t / 2));
}

std::vector<RVec> sampled_tangent_cone(const std::function<bool(const RVec&)>& member,
                                       const RVec& x, const SampleSpec& spec) {
    RatSampler sampler(spec);
    std::vector<RVec> out;
    for (std::size_t s = 0; s < spec.count; ++s) {
        const RVec d = sampler.draw_vec(x.size(), spec.radius);
        if (is_zero(d)) continue;
        Rat t(1, 2);
        for (int k = 0; k < 10; ++k, t /= 2) {
            if (member(add(x, scale(t, d)))) {
                out.push_back(primitive(d));
                break;
            }
        }
    }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<RVec> sampled_paratingent(const std::function<bool(const RVec&)>& member,
                                      const RVec& x, const SampleSpec& spec) {
    RatSampler sampler(spec);
    std::vector<RVec> out;
    for (std::size_t s = 0; s < spec.count; ++s) {
        const RVec shift = sampler.draw_vec(x.size(), spec.radius);
        const RVec base = add(x, shift);
        if (!member(base)) continue;
        const RVec d = sampler.draw_vec(x.size(), spec.radius);
        if (is_zero(d)) continue;
        Rat t(1, 2);
        for (int k = 0; k < 10; ++k, t /= 2) {
            if (member(add(base, scale(t, d)))) {
                out.push_back(primitive(d));
                break;
            }
        }
    }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<RVec> chord_directions(const std::vector<RVec>& members, const RVec& base) {
    std::vector<RVec> out;
    for (const auto& q : members) {
        const RVec d = primitive(sub(q, base));
        if (!is_zero(d)) out.push_back(d);
    }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<RVec> pairwise_chord_directions(const std::vector<RVec>& members) {
    std::vector<RVec> out;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j) {
            if (i == j) continue;
            const RVec d = primitive(sub(members[j], members[i]));
            if (!is_zero(d)) out.push_back(d);
        }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double mr_probe(const GEProblem& p, const Eigen::VectorXd& xbar, const SampleSpec& spec,
                const Caps& caps) {
    RatSampler sampler(spec);
    double kappa = 0;
    for (std::size_t s = 0; s < spec.count; ++s) {
        const Eigen::VectorXd y = to_float(sampler.draw_vec(p.dim, spec.radius));
        Eigen::VectorXd solution;
        try {
            solution = solve_localization(p, xbar, y, caps).x;
        } catch (const NoConvergence&) {
            return std::numeric_limits<double>::infinity();
        }
        // probe points around xbar
        for (int probe = 0; probe < 4; ++probe) {
            const RVec xs_rat = add(rationalize(xbar), sampler.draw_vec(p.dim, spec.radius));
            if (!p.g.in_domain(xs_rat)) continue;
            const Eigen::VectorXd xs = to_float(xs_rat);
            const RVec residual_rat = rationalize(Eigen::VectorXd(y - p.psi(xs)));
            const HPolyhedron sub_h = to_hrep(subdifferential(p.g, xs_rat), caps);
            const RVec proj = project_polyhedron(sub_h, residual_rat, caps);
            const double dist_y = std::sqrt(to_double(norm2_sq(sub(residual_rat, proj))));
            const double dist_x = (xs - solution).norm();
            if (dist_y < 1e-14) continue;  // xs already solves for y
            kappa = std::max(kappa, dist_x / dist_y);
        }
    }
    return kappa;
}

Eigen::MatrixXd finite_diff(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd out(f0.size(), x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Eigen::VectorXd xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        out.col(k) = (f(xp) - f(xm)) / (2 * h);
    }
    return out;
}

}  // namespace polyvar
