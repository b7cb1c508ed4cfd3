#ifndef POLYVAR_JSON_IO_HPP
#define POLYVAR_JSON_IO_HPP

#include <json.hpp>

#include <string>

#include "polyvar/geneq.hpp"
#include "polyvar/polyfunc.hpp"
#include "polyvar/polyhedron.hpp"

namespace polyvar {

// Deterministic key order so identical requests produce byte-identical
// reports.
using json = nlohmann::ordered_json;

json rat_to_json(const Rat& q);
Rat rat_from_json(const json& j);

json rvec_to_json(const RVec& v);
RVec rvec_from_json(const json& j);

json rmat_to_json(const RMat& m);

/// {"ineq": [[c..., d], ...], "eq": [[c..., d], ...]}
json hpoly_to_json(const HPolyhedron& p);
HPolyhedron hpoly_from_json(const json& j);

/// {"points": [...], "rays": [...]}
json vpoly_to_json(const VPolyhedron& p);
VPolyhedron vpoly_from_json(const json& j);

/// {"m": int, "pieces": [{"a": [...], "alpha": s}...],
///  "constraints": [{"b": [...], "beta": s}...]}
json polyfunc_to_json(const PolyhedralFunc& g);
PolyhedralFunc polyfunc_from_json(const json& j);

/// H-form with zero right-hand sides; +/- halfspace pairs folded into "eq".
json cone_to_json(const PolyCone& k);

PolyMap polymap_from_json(const json& j, std::size_t in_dim);
/// {"m": int, "psi": [[{"coef": f, "powers": [...]}, ...], ...], "g": {...}}
GEProblem geproblem_from_json(const json& j);
/// {"n": int, "m": int, "phi": [[term...]], "Phi": [[term...] x m], "g": {...}}
KKTProblem kkt_from_json(const json& j);

/// Shortest spelling with 17 significant digits: lossless round trip.
std::string format_double(double x);

/// Comma-separated rational literals ("1/2,-3,0") to a vector.
RVec parse_point(const std::string& s);

}  // namespace polyvar

#endif
