#include "polyvar/json_io.hpp"

#include <cstdio>

#include "polyvar/errors.hpp"

namespace polyvar {

json rat_to_json(const Rat& q) { return rat_str(q); }

Rat rat_from_json(const json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>());
    if (j.is_number_float()) return rat_of_double(j.get<double>());
    throw DomainError("expected a rational literal");
}

json rvec_to_json(const RVec& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(rat_to_json(q));
    return out;
}

RVec rvec_from_json(const json& j) {
    if (!j.is_array()) throw DomainError("expected an array of rationals");
    RVec out;
    for (const auto& e : j) out.push_back(rat_from_json(e));
    return out;
}

json rmat_to_json(const RMat& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) out.push_back(rvec_to_json(m.row(i)));
    return out;
}

json hpoly_to_json(const HPolyhedron& p) {
    json out;
    out["ineq"] = json::array();
    out["eq"] = json::array();
    for (const auto& [c, d] : p.ineqs) {
        json row = rvec_to_json(c);
        row.push_back(rat_to_json(d));
        out["ineq"].push_back(std::move(row));
    }
    for (const auto& [c, d] : p.eqs) {
        json row = rvec_to_json(c);
        row.push_back(rat_to_json(d));
        out["eq"].push_back(std::move(row));
    }
    return out;
}

HPolyhedron hpoly_from_json(const json& j) {
    HPolyhedron p;
    auto read_rows = [&](const char* key, bool eq) {
        if (!j.contains(key)) return;
        for (const auto& row : j.at(key)) {
            RVec full = rvec_from_json(row);
            if (full.empty()) throw DomainError("empty constraint row");
            RVec c(full.begin(), full.end() - 1);
            if (p.dim == 0) p.dim = c.size();
            if (c.size() != p.dim) throw DimMismatch("constraint row width");
            if (eq)
                p.add_eq(std::move(c), full.back());
            else
                p.add_le(std::move(c), full.back());
        }
    };
    read_rows("ineq", false);
    read_rows("eq", true);
    if (j.contains("dim")) p.dim = j.at("dim").get<std::size_t>();
    return p;
}

json vpoly_to_json(const VPolyhedron& p) {
    json out;
    out["points"] = json::array();
    out["rays"] = json::array();
    for (const auto& v : p.points) out["points"].push_back(rvec_to_json(v));
    for (const auto& v : p.rays) out["rays"].push_back(rvec_to_json(v));
    return out;
}

VPolyhedron vpoly_from_json(const json& j) {
    VPolyhedron p;
    if (j.contains("points"))
        for (const auto& e : j.at("points")) p.points.push_back(rvec_from_json(e));
    if (j.contains("rays"))
        for (const auto& e : j.at("rays")) p.rays.push_back(rvec_from_json(e));
    for (const auto& v : p.points) p.dim = v.size();
    for (const auto& v : p.rays) p.dim = v.size();
    if (j.contains("dim")) p.dim = j.at("dim").get<std::size_t>();
    return p;
}

json polyfunc_to_json(const PolyhedralFunc& g) {
    json out;
    out["m"] = g.dim;
    out["pieces"] = json::array();
    out["constraints"] = json::array();
    for (const auto& [a, alpha] : g.pieces)
        out["pieces"].push_back({{"a", rvec_to_json(a)}, {"alpha", rat_to_json(alpha)}});
    for (const auto& [b, beta] : g.constraints)
        out["constraints"].push_back({{"b", rvec_to_json(b)}, {"beta", rat_to_json(beta)}});
    return out;
}

PolyhedralFunc polyfunc_from_json(const json& j) {
    PolyhedralFunc g;
    g.dim = j.at("m").get<std::size_t>();
    for (const auto& p : j.at("pieces"))
        g.pieces.emplace_back(rvec_from_json(p.at("a")), rat_from_json(p.at("alpha")));
    if (j.contains("constraints"))
        for (const auto& c : j.at("constraints"))
            g.constraints.emplace_back(rvec_from_json(c.at("b")), rat_from_json(c.at("beta")));
    g.validate();
    return g;
}

json cone_to_json(const PolyCone& k) {
    json out;
    out["dim"] = k.ambient_dim();
    out["ineq"] = json::array();
    out["eq"] = json::array();
    const auto& hs = k.halfspaces();
    std::vector<bool> used(hs.size(), false);
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (used[i]) continue;
        std::size_t partner = hs.size();
        const RVec neg = negate(hs[i]);
        for (std::size_t j = i + 1; j < hs.size() && partner == hs.size(); ++j)
            if (!used[j] && hs[j] == neg) partner = j;
        json row = rvec_to_json(hs[i]);
        row.push_back("0");
        if (partner < hs.size()) {
            used[partner] = true;
            out["eq"].push_back(std::move(row));
        } else {
            out["ineq"].push_back(std::move(row));
        }
        used[i] = true;
    }
    return out;
}

PolyMap polymap_from_json(const json& j, std::size_t in_dim) {
    PolyMap map;
    map.in_dim = in_dim;
    for (const auto& row : j) {
        std::vector<PolyTerm> terms;
        for (const auto& t : row) {
            PolyTerm term;
            term.coef = t.at("coef").get<double>();
            for (const auto& p : t.at("powers")) term.powers.push_back(p.get<unsigned>());
            if (term.powers.size() != in_dim) throw DimMismatch("term powers length");
            terms.push_back(std::move(term));
        }
        map.rows.push_back(std::move(terms));
    }
    map.out_dim = map.rows.size();
    return map;
}

GEProblem geproblem_from_json(const json& j) {
    const std::size_t m = j.at("m").get<std::size_t>();
    PolyhedralFunc g = polyfunc_from_json(j.at("g"));
    if (g.dim != m) throw DimMismatch("geneq problem: g dimension");
    const PolyMap map = polymap_from_json(j.at("psi"), m);
    if (map.out_dim != m) throw DimMismatch("geneq problem: psi output dimension");
    return GEProblem::from_poly(map, std::move(g));
}

KKTProblem kkt_from_json(const json& j) {
    KKTProblem k;
    k.n = j.at("n").get<std::size_t>();
    k.m = j.at("m").get<std::size_t>();
    k.phi = polymap_from_json(j.at("phi"), k.n);
    if (k.phi.out_dim != 1) throw DimMismatch("kkt problem: phi must have one output row");
    k.big_phi = polymap_from_json(j.at("Phi"), k.n);
    if (k.big_phi.out_dim != k.m) throw DimMismatch("kkt problem: Phi output dimension");
    k.g = polyfunc_from_json(j.at("g"));
    if (k.g.dim != k.m) throw DimMismatch("kkt problem: g dimension");
    return k;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

RVec parse_point(const std::string& s) {
    RVec out;
    std::string token;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(parse_rat(token));
            token.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            token += ch;
        }
    }
    if (!token.empty()) out.push_back(parse_rat(token));
    return out;
}

}  // namespace polyvar
