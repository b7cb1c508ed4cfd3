#ifndef POLYVAR_ORACLE_HPP
#define POLYVAR_ORACLE_HPP

#include <functional>

#include "polyvar/geneq.hpp"
#include "polyvar/polyfunc.hpp"
#include "polyvar/sampling.hpp"

namespace polyvar {

/// Exact second-order difference quotient
/// [g(z+tw) - g(z) - t<lambda,w>] / (t^2/2); +infinity off the domain.
ExtRat second_diff_quotient(const PolyhedralFunc& g, const RVec& z, const RVec& lambda,
                            const Rat& t, const RVec& w);

/// Directions d with x + t d in the set for some dyadic scale t; harvested
/// from seeded rational draws. Used only to test inclusion into exactly
/// computed cones, never as ground truth.
std::vector<RVec> sampled_tangent_cone(const std::function<bool(const RVec&)>& member,
                                       const RVec& x, const SampleSpec& spec);

/// Paratingent-style directions: difference quotients between pairs of
/// member points drifting to x. Also inclusion-only.
std::vector<RVec> sampled_paratingent(const std::function<bool(const RVec&)>& member,
                                      const RVec& x, const SampleSpec& spec);

/// Chord directions (q - base) between exact member points; primitive and
/// deduplicated. The workhorse behind the sampled tangent/paratingent
/// inclusion checks on subgradient graphs, where random probing cannot hit
/// the (thin) set.
std::vector<RVec> chord_directions(const std::vector<RVec>& members, const RVec& base);
std::vector<RVec> pairwise_chord_directions(const std::vector<RVec>& members);

/// Empirical regularity modulus: max over a seeded grid of
/// dist(x, S(y)) / dist(y, G(x)). Returns +infinity as a divergence
/// sentinel when localization fails, signalling a non-regular instance.
double mr_probe(const GEProblem& p, const Eigen::VectorXd& xbar, const SampleSpec& spec,
                const Caps& caps = {});

/// Central-difference Jacobian.
Eigen::MatrixXd finite_diff(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h = 1e-5);

}  // namespace polyvar

#endif
