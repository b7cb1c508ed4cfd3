#include <doctest.h>

#include "polyvar/geneq.hpp"
#include "polyvar/oracle.hpp"
#include "test_helpers.hpp"

using namespace polyvar;
using namespace polyvar::testing;

namespace {

Eigen::VectorXd fvec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// psi(x) = x - 1 on R
PolyMap shift_map() {
    PolyMap m;
    m.in_dim = m.out_dim = 1;
    m.rows = {{PolyTerm{1.0, {1}}, PolyTerm{-1.0, {0}}}};
    return m;
}

// psi(x) = x on R
PolyMap identity_map(std::size_t d) {
    PolyMap m;
    m.in_dim = m.out_dim = d;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<unsigned> p(d, 0);
        p[i] = 1;
        m.rows.push_back({PolyTerm{1.0, p}});
    }
    return m;
}

// psi(x) = x + (1,1) on R^2
PolyMap shifted_identity2() {
    PolyMap m = identity_map(2);
    m.rows[0].push_back(PolyTerm{1.0, {0, 0}});
    m.rows[1].push_back(PolyTerm{1.0, {0, 0}});
    return m;
}

PolyMap zero_map(std::size_t d) {
    PolyMap m;
    m.in_dim = m.out_dim = d;
    for (std::size_t i = 0; i < d; ++i) m.rows.push_back({});
    return m;
}

}  // namespace

TEST_CASE("polynomial maps evaluate with analytic derivatives") {
    PolyMap m;
    m.in_dim = 2;
    m.out_dim = 1;
    m.rows = {{PolyTerm{3.0, {2, 1}}, PolyTerm{-1.0, {0, 0}}}};  // 3 x^2 y - 1
    const Eigen::VectorXd x = fvec({2.0, 5.0});
    CHECK(m.eval(x)[0] == doctest::Approx(59.0));
    CHECK(m.jacobian(x)(0, 0) == doctest::Approx(60.0));  // 6xy
    CHECK(m.jacobian(x)(0, 1) == doctest::Approx(12.0));  // 3x^2
    CHECK(m.hessian_of_row(0, x)(0, 0) == doctest::Approx(30.0));
    CHECK(m.hessian_of_row(0, x)(0, 1) == doctest::Approx(12.0));
    CHECK(m.hessian_of_row(0, x)(1, 0) == doctest::Approx(12.0));
    CHECK(m.hessian_of_row(0, x)(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("nondegeneracy tests on the worked examples") {
    CHECK(nondegeneracy_test(GEProblem::from_poly(identity_map(1), abs_fn()), fvec({0.0})));
    CHECK(nondegeneracy_test(GEProblem::from_poly(shift_map(), ind_halfline()), fvec({1.0})));
    // 0 in x - 1 + d|x| solves at x = 0 with boundary subgradient 1
    CHECK_FALSE(nondegeneracy_test(GEProblem::from_poly(shift_map(), abs_fn()), fvec({0.0})));
    CHECK_THROWS_AS(
        nondegeneracy_test(GEProblem::from_poly(identity_map(1), abs_fn()), fvec({5.0})),
        NotSolution);
}

TEST_CASE("regularity criteria at nondegenerate solutions") {
    SUBCASE("full critical subspace with invertible reduction") {
        const auto c = mr_criteria(GEProblem::from_poly(shift_map(), ind_halfline()),
                                   fvec({1.0}));
        CHECK(c.range_cover);
        CHECK(c.kernel_trivial);
    }
    SUBCASE("zero critical subspace: empty-matrix convention") {
        const auto c = mr_criteria(GEProblem::from_poly(identity_map(1), abs_fn()),
                                   fvec({0.0}));
        CHECK(c.range_cover);
        CHECK(c.kernel_trivial);
    }
    SUBCASE("constant map fails both") {
        const auto c = mr_criteria(GEProblem::from_poly(zero_map(1), ind_halfline()),
                                   fvec({1.0}));
        CHECK_FALSE(c.range_cover);
        CHECK_FALSE(c.kernel_trivial);
    }
}

TEST_CASE("regularity status never yields an intermediate verdict") {
    CHECK(regularity_status(GEProblem::from_poly(shift_map(), ind_halfline()), fvec({1.0})) ==
          RegularityStatus::strongly_metrically_regular);
    CHECK(regularity_status(GEProblem::from_poly(zero_map(1), ind_halfline()), fvec({1.0})) ==
          RegularityStatus::not_metrically_regular);
    CHECK(regularity_status(GEProblem::from_poly(identity_map(1), abs_fn()), fvec({0.0})) ==
          RegularityStatus::strongly_metrically_regular);
}

TEST_CASE("degenerate solutions go through the piecewise criterion") {
    // 0 in x - 1 + d|x|: solution x = 0 with -psi(0) = 1 on the boundary.
    // The localized solution map still solves uniquely: x(y) = 0 for
    // y near 0, so the verdict is strong regularity.
    const auto p = GEProblem::from_poly(shift_map(), abs_fn());
    CHECK(regularity_status(p, fvec({0.0})) == RegularityStatus::strongly_metrically_regular);
    // while the constant map at the same degenerate pair is not regular
    PolyMap negone;  // psi(x) = -1
    negone.in_dim = negone.out_dim = 1;
    negone.rows = {{PolyTerm{-1.0, {0}}}};
    const auto p2 = GEProblem::from_poly(negone, abs_fn());
    CHECK(regularity_status(p2, fvec({0.0})) == RegularityStatus::not_metrically_regular);
}

TEST_CASE("localization solves and differentiates") {
    SUBCASE("affine instance: sigma(y) = 1 + y") {
        const auto p = GEProblem::from_poly(shift_map(), ind_halfline());
        for (double y : {-0.05, 0.0, 0.1}) {
            const auto res = solve_localization(p, fvec({1.0}), fvec({y}));
            CHECK(std::abs(res.x[0] - (1.0 + y)) < 1e-12);
            REQUIRE(res.jacobian_sigma.has_value());
            CHECK((*res.jacobian_sigma)(0, 0) == doctest::Approx(1.0));
        }
    }
    SUBCASE("kink instance: sigma constant, zero jacobian from the empty basis") {
        const auto p = GEProblem::from_poly(identity_map(1), abs_fn());
        for (double y : {-0.5, 0.25}) {
            const auto res = solve_localization(p, fvec({0.0}), fvec({y}));
            CHECK(std::abs(res.x[0]) < 1e-12);
            REQUIRE(res.jacobian_sigma.has_value());
            CHECK((*res.jacobian_sigma)(0, 0) == doctest::Approx(0.0));
        }
    }
    SUBCASE("planar nondegenerate instance against finite differences") {
        const auto p = GEProblem::from_poly(shifted_identity2(), max2_fn());
        const Eigen::VectorXd xbar = fvec({-1.5, -1.5});
        CHECK(nondegeneracy_test(p, xbar));
        const auto at0 = solve_localization(p, xbar, fvec({0.0, 0.0}));
        CHECK((at0.x - xbar).norm() < 1e-10);
        REQUIRE(at0.jacobian_sigma.has_value());
        auto sigma = [&](const Eigen::VectorXd& y) {
            return solve_localization(p, xbar, y).x;
        };
        const Eigen::MatrixXd fd = finite_diff(sigma, fvec({0.0, 0.0}), 1e-5);
        CHECK((fd - *at0.jacobian_sigma).lpNorm<Eigen::Infinity>() < 1e-6);
        // hand value: projection onto the diagonal
        CHECK((*at0.jacobian_sigma)(0, 0) == doctest::Approx(0.5));
        CHECK((*at0.jacobian_sigma)(0, 1) == doctest::Approx(0.5));
    }
}

TEST_CASE("newton element matches finite differences of the natural map at smooth points") {
    const auto p = GEProblem::from_poly(shift_map(), ind_halfline());
    const Eigen::VectorXd x = fvec({1.3});
    // natural map F(x) = x - prox(x - psi(x)); smooth near x
    auto natural = [&](const Eigen::VectorXd& xs) {
        const RVec u = rationalize(Eigen::VectorXd(xs - p.psi(xs)));
        return Eigen::VectorXd(xs - to_float(prox(p.g, Rat(1), u).y));
    };
    const auto pr = prox(p.g, Rat(1), rationalize(Eigen::VectorXd(x - p.psi(x))));
    const auto crit = critical_cone(p.g, pr.y, pr.v);
    const Eigen::MatrixXd P = to_float(projection_matrix(1, crit.cone.lineality_basis()));
    const Eigen::MatrixXd J =
        Eigen::MatrixXd::Identity(1, 1) - P * (Eigen::MatrixXd::Identity(1, 1) - p.jpsi(x));
    const Eigen::MatrixXd fd = finite_diff(natural, x, 1e-5);
    CHECK((fd - J).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("mr probe is bounded exactly when the criteria pass") {
    SampleSpec spec;
    spec.count = 6;
    spec.radius = rat(1, 8);
    spec.seed = 3;
    SUBCASE("regular instance: kappa near 1") {
        const double kappa =
            mr_probe(GEProblem::from_poly(shift_map(), ind_halfline()), fvec({1.0}), spec);
        CHECK(std::isfinite(kappa));
        CHECK(kappa <= 2.0);
    }
    SUBCASE("kink instance: bounded") {
        const double kappa =
            mr_probe(GEProblem::from_poly(identity_map(1), abs_fn()), fvec({0.0}), spec);
        CHECK(std::isfinite(kappa));
        CHECK(kappa <= 1.5);
    }
    SUBCASE("constant map diverges") {
        const double kappa =
            mr_probe(GEProblem::from_poly(zero_map(1), ind_halfline()), fvec({1.0}), spec);
        CHECK(std::isinf(kappa));
    }
}

TEST_CASE("kkt regularity") {
    SUBCASE("strongly convex composite at the origin") {
        KKTProblem k;
        k.n = k.m = 1;
        k.phi.in_dim = 1;
        k.phi.out_dim = 1;
        k.phi.rows = {{PolyTerm{0.5, {2}}}};  // x^2/2
        k.big_phi = identity_map(1);
        k.g = abs_fn();
        CHECK(kkt_regularity(k, fvec({0.0}), fvec({0.0})));
        CHECK_THROWS_AS(kkt_regularity(k, fvec({1.0}), fvec({0.5})), NotKKTPoint);
    }
    SUBCASE("identity constraints reduce to hessian nonsingularity") {
        KKTProblem k;
        k.n = k.m = 1;
        k.phi.in_dim = 1;
        k.phi.out_dim = 1;
        k.phi.rows = {{PolyTerm{0.5, {2}}}};
        k.big_phi = identity_map(1);
        PolyhedralFunc zero_fn;
        zero_fn.dim = 1;
        zero_fn.pieces = {{rvec_zero(1), rat(0)}};
        zero_fn.validate();
        k.g = zero_fn;
        CHECK(kkt_regularity(k, fvec({0.0}), fvec({0.0})));
        // flat objective: singular hessian, nonzero kernel detected
        KKTProblem flat = k;
        flat.phi.rows = {{}};
        CHECK_FALSE(kkt_regularity(flat, fvec({0.0}), fvec({0.0})));
    }
    SUBCASE("linear objective over |.| at a boundary multiplier") {
        // phi(x) = -x, Phi = id, g = |.|: KKT at (0, 1); the piece
        // R- x R+ of the limiting cone carries nonzero directions
        KKTProblem k;
        k.n = k.m = 1;
        k.phi.in_dim = 1;
        k.phi.out_dim = 1;
        k.phi.rows = {{PolyTerm{-1.0, {1}}}};
        k.big_phi = identity_map(1);
        k.g = abs_fn();
        CHECK_FALSE(kkt_regularity(k, fvec({0.0}), fvec({1.0})));
    }
}

TEST_CASE("jacobian spot check rejects wrong derivatives") {
    GEProblem p = GEProblem::from_poly(identity_map(1), abs_fn());
    p.jpsi = [](const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Constant(1, 1, 2.0);  // wrong on purpose
    };
    CHECK_THROWS_AS(verify_jacobian(p, fvec({0.3})), VerificationFailure);
}

TEST_CASE("orthant nonzero detection") {
    // the diagonal line in R^2 has nonzero members; the origin system none
    CHECK(cone_system_has_nonzero(2, {{rat(1), rat(-1)}}, {}));
    CHECK_FALSE(cone_system_has_nonzero(2, {{rat(1), rat(0)}, {rat(0), rat(1)}}, {}));
    CHECK(cone_system_has_nonzero(1, {}, {{rat(1)}}));  // the nonpositive halfline
}
