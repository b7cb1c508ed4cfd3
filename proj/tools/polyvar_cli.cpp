// Command-line front end: polyhedral function analyses with exact
// arithmetic, JSON reports on stdout, diagnostics on stderr.
//
// Exit codes: 0 success, 2 domain error (NotSubgradient, NotInDomain, ...),
// 3 enumeration cap exceeded, 4 verification failure (a guaranteed
// property failed -- bug signal), 1 usage/file errors.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "polyvar/json_io.hpp"
#include "polyvar/oracle.hpp"
#include "polyvar/prox.hpp"

namespace pv = polyvar;
using pv::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& report, const std::string& format) {
    if (format == "text") {
        for (const auto& [key, value] : report.items())
            std::cout << key << ": " << value.dump() << "\n";
    } else {
        std::cout << report.dump(2) << "\n";
    }
}

json float_vec_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(pv::format_double(v[i]));
    return out;
}

json float_mat_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(pv::format_double(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::VectorXd float_point(const std::string& s) { return pv::to_float(pv::parse_point(s)); }

struct Options {
    std::string file;
    std::string z, lambda, x, x0, y, h;
    std::string r = "1";
    std::string format = "json";
    double tol = 1e-8;
    std::size_t samples = 200;
    std::uint64_t seed = 0;
};

json classify_report(const pv::PolyhedralFunc& g, const pv::RVec& z, const pv::RVec& lambda,
                     std::size_t samples, std::uint64_t seed) {
    const pv::RegularityReport rep = pv::regularity_report(g, z, lambda);
    const pv::CriticalCone crit = pv::critical_cone(g, z, lambda);
    const pv::ReductionCertificate cert = pv::reduction_certify(g, z, lambda, samples, seed);
    json out;
    out["ri"] = rep.ri_flag;
    out["graph_regular"] = rep.graph_regular;
    out["strict_proto"] = rep.strict_proto_diff;
    out["strict_twice_epi"] = rep.strict_twice_epi_diff;
    out["coderiv_eq_deriv"] = rep.coderivative_equals_derivative;
    out["critical_cone"] = pv::cone_to_json(crit.cone);
    out["certified_radius"] = pv::rat_str(cert.radius);
    return out;
}

int run(const std::string& command, const Options& opt) {
    json report;
    if (command == "eval") {
        const auto g = pv::polyfunc_from_json(load_json(opt.file));
        report["value"] = pv::to_string(pv::eval(g, pv::parse_point(opt.z)));
    } else if (command == "subdiff") {
        const auto g = pv::polyfunc_from_json(load_json(opt.file));
        report = pv::vpoly_to_json(pv::subdifferential(g, pv::parse_point(opt.z)));
    } else if (command == "critcone") {
        const auto g = pv::polyfunc_from_json(load_json(opt.file));
        const auto crit = pv::critical_cone(g, pv::parse_point(opt.z), pv::parse_point(opt.lambda));
        report["critical_cone"] = pv::cone_to_json(crit.cone);
        report["is_subspace"] = crit.cone.is_subspace();
    } else if (command == "classify") {
        const auto g = pv::polyfunc_from_json(load_json(opt.file));
        report = classify_report(g, pv::parse_point(opt.z), pv::parse_point(opt.lambda),
                                 opt.samples, opt.seed);
    } else if (command == "prox") {
        const auto g = pv::polyfunc_from_json(load_json(opt.file));
        const pv::Rat r = pv::parse_rat(opt.r);
        const pv::RVec x = pv::parse_point(opt.x);
        const pv::ProxResult p = pv::prox(g, r, x);
        const bool smooth = pv::smoothness_classify(g, r, x) == pv::SmoothnessClass::C1_near;
        report["y"] = pv::rvec_to_json(p.y);
        report["v"] = pv::rvec_to_json(p.v);
        report["envelope"] = pv::rat_str(p.envelope);
        report["class"] = smooth ? "C1_near" : "not_C1";
        if (smooth) {
            report["jacobian"] = pv::rmat_to_json(pv::prox_jacobian(g, r, x));
            report["envelope_hessian"] = pv::rmat_to_json(pv::envelope_hessian(g, r, x));
        }
    } else if (command == "envelope") {
        const auto g = pv::polyfunc_from_json(load_json(opt.file));
        const pv::Rat r = pv::parse_rat(opt.r);
        const pv::RVec x = pv::parse_point(opt.x);
        report["envelope"] = pv::rat_str(pv::moreau_envelope(g, r, x));
        report["gradient"] = pv::rvec_to_json(pv::envelope_gradient(g, r, x));
    } else if (command == "geneq-analyze") {
        const auto p = pv::geproblem_from_json(load_json(opt.file));
        const Eigen::VectorXd x = float_point(opt.x);
        const auto status = pv::regularity_status(p, x, opt.tol);
        report["status"] = status == pv::RegularityStatus::strongly_metrically_regular
                               ? "strongly_metrically_regular"
                               : "not_metrically_regular";
        bool nondeg = false;
        try {
            nondeg = pv::nondegeneracy_test(p, x, opt.tol);
        } catch (const pv::NotSolution&) {
        }
        report["nondegenerate"] = nondeg;
        pv::SampleSpec spec;
        spec.count = std::min<std::size_t>(opt.samples, 16);
        spec.radius = pv::rat(1, 8);
        spec.seed = opt.seed;
        double kappa = std::numeric_limits<double>::infinity();
        try {
            kappa = pv::mr_probe(p, x, spec);
        } catch (const std::exception&) {
        }
        report["kappa_estimate"] =
            std::isinf(kappa) ? json("divergent") : json(pv::format_double(kappa));
    } else if (command == "geneq-solve") {
        const auto p = pv::geproblem_from_json(load_json(opt.file));
        const Eigen::VectorXd x0 = float_point(opt.x0.empty() ? opt.x : opt.x0);
        const Eigen::VectorXd y = float_point(opt.y);
        const pv::LocalizationResult res = pv::solve_localization(p, x0, y);
        report["status"] = "converged";
        report["x"] = float_vec_json(res.x);
        report["jacobian_sigma"] =
            res.jacobian_sigma ? float_mat_json(*res.jacobian_sigma) : json();
        report["iterations"] = res.newton_iterations;
        report["residual"] = pv::format_double(res.residual);
    } else if (command == "kkt-analyze") {
        const auto k = pv::kkt_from_json(load_json(opt.file));
        const bool regular =
            pv::kkt_regularity(k, float_point(opt.x), float_point(opt.lambda), opt.tol);
        report["regular"] = regular;
        report["status"] = regular ? "strongly_metrically_regular" : "not_metrically_regular";
    } else {
        std::cerr << "unknown command: " << command << "\n";
        return 1;
    }
    emit(report, opt.format);
    return 0;
}

int run_verify(const std::string& target, const Options& opt) {
    const auto g = pv::polyfunc_from_json(load_json(opt.file));
    json report;
    if (target == "reduction") {
        const auto cert = pv::reduction_certify(g, pv::parse_point(opt.z),
                                                pv::parse_point(opt.lambda), opt.samples,
                                                opt.seed);
        report["certified_radius"] = pv::rat_str(cert.radius);
        report["agreements"] =
            cert.tested_graph_side.size() + cert.tested_subgrad_side.size();
    } else if (target == "polarity") {
        const bool ok =
            pv::polarity_check(g, pv::parse_point(opt.z), pv::parse_point(opt.lambda));
        if (!ok) throw pv::VerificationFailure("critical-cone polarity failed");
        report["polarity"] = true;
    } else if (target == "flags") {
        const auto rep =
            pv::regularity_report(g, pv::parse_point(opt.z), pv::parse_point(opt.lambda));
        if (!rep.all_agree())
            throw pv::VerificationFailure("regularity flags disagree");
        report["flags_agree"] = true;
        report["ri"] = rep.ri_flag;
    } else if (target == "support") {
        const pv::Rat r = pv::support_stability_radius(
            g, pv::parse_point(opt.z), pv::parse_point(opt.lambda), opt.samples, opt.seed);
        report["certified_radius"] = pv::rat_str(r);
    } else {
        std::cerr << "unknown verify target: " << target << "\n";
        return 1;
    }
    emit(report, opt.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact variational analysis of polyhedral functions"};
    app.require_subcommand(1);

    Options opt;
    std::string verify_target;

    auto add_common = [&](CLI::App* cmd, bool needs_file = true) {
        if (needs_file) cmd->add_option("file", opt.file, "problem file (JSON)")->required();
        cmd->add_option("--format", opt.format, "json|text")->check(CLI::IsMember({"json", "text"}));
    };

    auto* c_eval = app.add_subcommand("eval", "evaluate g at a point");
    add_common(c_eval);
    c_eval->add_option("--z", opt.z)->required();

    auto* c_sub = app.add_subcommand("subdiff", "subdifferential at a point");
    add_common(c_sub);
    c_sub->add_option("--z", opt.z)->required();

    auto* c_crit = app.add_subcommand("critcone", "critical cone at a graph pair");
    add_common(c_crit);
    c_crit->add_option("--z", opt.z)->required();
    c_crit->add_option("--lambda", opt.lambda)->required();

    auto* c_classify = app.add_subcommand("classify", "regularity flags and certified radius");
    add_common(c_classify);
    c_classify->add_option("--z", opt.z)->required();
    c_classify->add_option("--lambda", opt.lambda)->required();
    c_classify->add_option("--samples", opt.samples);
    c_classify->add_option("--seed", opt.seed);

    auto* c_prox = app.add_subcommand("prox", "proximal point, envelope, jacobians");
    add_common(c_prox);
    c_prox->add_option("--r", opt.r);
    c_prox->add_option("--x", opt.x)->required();

    auto* c_env = app.add_subcommand("envelope", "Moreau envelope and gradient");
    add_common(c_env);
    c_env->add_option("--r", opt.r);
    c_env->add_option("--x", opt.x)->required();

    auto* c_ga = app.add_subcommand("geneq-analyze", "regularity of a generalized equation");
    add_common(c_ga);
    c_ga->add_option("--x", opt.x)->required();
    c_ga->add_option("--tol", opt.tol);
    c_ga->add_option("--samples", opt.samples);
    c_ga->add_option("--seed", opt.seed);

    auto* c_gs = app.add_subcommand("geneq-solve", "Newton localization solve");
    add_common(c_gs);
    c_gs->add_option("--x0", opt.x0)->required();
    c_gs->add_option("--y", opt.y)->required();

    auto* c_kkt = app.add_subcommand("kkt-analyze", "KKT-system regularity");
    add_common(c_kkt);
    c_kkt->add_option("--x", opt.x)->required();
    c_kkt->add_option("--lambda", opt.lambda)->required();
    c_kkt->add_option("--tol", opt.tol);

    auto* c_verify = app.add_subcommand("verify", "check a guaranteed property");
    c_verify->add_option("target", verify_target, "reduction|polarity|flags|support")->required();
    add_common(c_verify);
    c_verify->add_option("--z", opt.z)->required();
    c_verify->add_option("--lambda", opt.lambda)->required();
    c_verify->add_option("--samples", opt.samples);
    c_verify->add_option("--seed", opt.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "verify") return run_verify(verify_target, opt);
        return run(name, opt);
    } catch (const pv::CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 3;
    } catch (const pv::VerificationFailure& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 4;
    } catch (const pv::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
