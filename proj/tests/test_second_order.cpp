#include <doctest.h>

#include "polyvar/oracle.hpp"
#include "polyvar/second_order.hpp"
#include "test_helpers.hpp"

using namespace polyvar;
using namespace polyvar::testing;

namespace {
RVec v1(long a) { return {rat(a)}; }
RVec v2(long a, long b) { return {rat(a), rat(b)}; }
}  // namespace

TEST_CASE("critical cones of |.|") {
    const auto g = abs_fn();
    SUBCASE("interior subgradient collapses the cone to the origin") {
        const auto k = critical_cone(g, v1(0), v1(0));
        CHECK(k.cone.dimension() == 0);
    }
    SUBCASE("boundary subgradient gives the halfline") {
        const auto k = critical_cone(g, v1(0), v1(1));
        CHECK(k.cone.contains(v1(2)));
        CHECK_FALSE(k.cone.contains(v1(-1)));
    }
    SUBCASE("midpoint subgradient of max gives the diagonal") {
        const auto k = critical_cone(max2_fn(), v2(0, 0), {rat(1, 2), rat(1, 2)});
        CHECK(k.cone.is_subspace());
        CHECK(k.cone.contains(v2(3, 3)));
        CHECK_FALSE(k.cone.contains(v2(1, 0)));
    }
    SUBCASE("non-subgradient throws") {
        CHECK_THROWS_AS(critical_cone(g, v1(0), v1(2)), NotSubgradient);
    }
}

TEST_CASE("critical cone is independent of the decomposition") {
    // a degenerate representation with several vertex decompositions
    PolyhedralFunc g;
    g.dim = 2;
    g.pieces = {{v2(1, 0), rat(0)}, {v2(0, 1), rat(0)}, {v2(1, 1), rat(0)}, {v2(0, 0), rat(0)}};
    g.validate();
    const RVec z = v2(0, 0);
    const RVec lambda = {rat(1, 2), rat(1, 2)};
    const auto base = critical_cone(g, z, lambda);
    const auto decs = all_decompositions(g, z, lambda);
    REQUIRE(decs.vertices.size() >= 2);
    for (const auto& dec : decs.vertices) {
        const auto cone = critical_cone_from_decomposition(g, z, dec);
        CHECK(cone.set_equal(base.cone));
    }
    // and equals the normal cone to the subdifferential
    const auto nc = normal_cone(to_hrep(subdifferential(g, z)), lambda);
    CHECK(nc.set_equal(base.cone));
}

TEST_CASE("relative-interior subgradient detection") {
    CHECK(is_ri_subgradient(abs_fn(), v1(0), v1(0)));
    CHECK_FALSE(is_ri_subgradient(abs_fn(), v1(0), v1(1)));
    CHECK_FALSE(is_ri_subgradient(ind_quadrant(), v2(0, 0), v2(-1, 0)));
    CHECK(is_ri_subgradient(ind_quadrant(), v2(0, 0), v2(0, 0)));
}

TEST_CASE("reduction certification on the worked examples") {
    SUBCASE("boundary subgradient of |.|") {
        const auto cert = reduction_certify(abs_fn(), v1(0), v1(1), 60, 7);
        CHECK(cert.radius >= rat(1, 1 << 20));
        CHECK(cert.tested_graph_side.size() + cert.tested_subgrad_side.size() >= 60);
    }
    SUBCASE("interior subgradient of |.|") {
        CHECK(reduction_certify(abs_fn(), v1(0), v1(0), 60, 7).radius >= rat(1, 1 << 20));
    }
    SUBCASE("halfline indicator: the graph is itself a normal cone graph") {
        CHECK(reduction_certify(ind_halfline(), v1(0), v1(0), 60, 7).radius >=
              rat(1, 1 << 20));
    }
}

TEST_CASE("polarity against the conjugate") {
    CHECK(polarity_check(abs_fn(), v1(0), v1(1)));
    CHECK(polarity_check(ind_halfline(), v1(0), v1(-1)));
    CHECK(polarity_check(max2_fn(), v2(0, 0), {rat(1, 2), rat(1, 2)}));
}

TEST_CASE("nearby face pairs") {
    const auto g = abs_fn();
    SUBCASE("smooth probe point gives the full pair") {
        const auto [f1, f2] = nearby_face_pair(g, v1(0), v1(1), {rat(1, 4)}, v1(1));
        // F1 = R+, F2 = R+ (1/4 lies in its relative interior)
        CHECK(f1.contains(v1(1)));
        CHECK(f2.contains(v1(1)));
        CHECK(cone_difference(f1, f2).contains(v1(-9)));
    }
    SUBCASE("interior probe subgradient collapses both faces") {
        const auto [f1, f2] = nearby_face_pair(g, v1(0), v1(1), v1(0), {rat(3, 4)});
        CHECK(f1.dimension() == 0);
        CHECK(f2.dimension() == 0);
    }
    SUBCASE("base pair reproduces the critical cone") {
        const auto [f1, f2] = nearby_face_pair(g, v1(0), v1(1), v1(0), v1(1));
        const auto k = critical_cone(g, v1(0), v1(1));
        CHECK(cone_difference(f1, f2).set_equal(k.cone));
    }
    SUBCASE("far pairs are rejected") {
        CHECK_THROWS_AS(nearby_face_pair(g, v1(0), v1(1), v1(0), v1(-1)), OutOfRadius);
    }
}

TEST_CASE("face pair witnesses realize every nested pair") {
    const auto g = abs_fn();
    const auto base = critical_cone(g, v1(0), v1(1));
    const auto fs = faces(base.cone);
    REQUIRE(fs.size() == 2);  // halfline and origin
    const Rat r(1, 2);
    for (const auto& f1 : fs) {
        for (const auto& f2 : fs) {
            if (!f2.cone.subset_of(f1.cone)) continue;
            const auto [z2, l2] = face_pair_witness(g, v1(0), v1(1), f1.cone, f2.cone, r);
            const auto probe = critical_cone(g, z2, l2);
            CHECK(probe.cone.set_equal(cone_difference(f1.cone, f2.cone)));
        }
    }
    SUBCASE("non-faces are rejected") {
        const auto not_face = PolyCone::from_generators(1, {v1(-1)});
        CHECK_THROWS_AS(face_pair_witness(g, v1(0), v1(1), not_face, not_face, r),
                        NotAFacePair);
    }
}

TEST_CASE("graphical derivative membership table") {
    const auto g = abs_fn();
    CHECK(graphical_derivative_membership(g, v1(0), v1(1), v1(1), v1(0)));
    CHECK_FALSE(graphical_derivative_membership(g, v1(0), v1(1), v1(1), v1(-1)));
    CHECK(graphical_derivative_membership(g, v1(0), v1(1), v1(0), v1(-5)));
}

TEST_CASE("strict graphical derivative membership table") {
    const auto g = abs_fn();
    CHECK(strict_graphical_derivative_membership(g, v1(0), v1(1), v1(1), v1(1)));
    CHECK_FALSE(strict_graphical_derivative_membership(g, v1(0), v1(1), v1(1), v1(-1)));
    // subspace case: the self-difference is {0} x R
    CHECK(strict_graphical_derivative_membership(g, v1(0), v1(0), v1(0), {rat(7)}));
    CHECK_FALSE(strict_graphical_derivative_membership(g, v1(0), v1(0), v1(1), v1(0)));
}

TEST_CASE("graphical membership implies strict membership on samples") {
    RatSampler sampler(29);
    for (const auto& inst : make_corpus(6, 99)) {
        for (int s = 0; s < 8; ++s) {
            const RVec w = sampler.draw_vec(inst.g.dim, rat(2));
            const RVec u = sampler.draw_vec(inst.g.dim, rat(2));
            if (graphical_derivative_membership(inst.g, inst.zbar, inst.lambdabar, w, u))
                CHECK(strict_graphical_derivative_membership(inst.g, inst.zbar,
                                                             inst.lambdabar, w, u));
        }
    }
}

TEST_CASE("regular normal cone products") {
    const auto g = abs_fn();
    SUBCASE("boundary pair: polar halfline times halfline") {
        const auto n = regular_normal_cone(g, v1(0), v1(1));
        CHECK(n.contains(v2(-1, 1)));
        CHECK_FALSE(n.contains(v2(1, 1)));
        CHECK_FALSE(n.contains(v2(-1, -1)));
    }
    SUBCASE("interior pair: line times origin") {
        const auto n = regular_normal_cone(g, v1(0), v1(0));
        CHECK(n.contains(v2(5, 0)));
        CHECK(n.contains(v2(-5, 0)));
        CHECK_FALSE(n.contains(v2(0, 1)));
    }
    SUBCASE("indicator at an interior point: origin times line") {
        const auto n = regular_normal_cone(ind_halfline(), v1(1), v1(0));
        CHECK(n.contains(v2(0, 9)));
        CHECK_FALSE(n.contains(v2(1, 0)));
    }
}

TEST_CASE("limiting normal cone of |.| at the boundary pair") {
    // by hand from the three nested face pairs:
    // (R x {0}) u (R- x R+) u ({0} x R)
    const auto lim = limiting_normal_cone(abs_fn(), v1(0), v1(1));
    CHECK(lim.contains(v2(-1, 0)));
    CHECK(lim.contains(v2(1, 0)));
    CHECK(lim.contains(v2(-1, 1)));
    CHECK(lim.contains(v2(0, -3)));
    CHECK(lim.contains(v2(0, 3)));
    CHECK_FALSE(lim.contains(v2(1, 1)));
    CHECK_FALSE(lim.contains(v2(1, -1)));
    CHECK_FALSE(lim.contains(v2(-1, -1)));

    // piecewise-exact equality with the by-hand union
    ConeUnion expected;
    expected.dim = 2;
    expected.pieces = {
        PolyCone::from_generators(2, {v2(1, 0), v2(-1, 0)}),
        PolyCone::from_generators(2, {v2(-1, 0), v2(0, 1)}),
        PolyCone::from_generators(2, {v2(0, 1), v2(0, -1)}),
    };
    CHECK(lim.set_equal(expected));

    SUBCASE("interior pair collapses to a single piece") {
        const auto lim0 = limiting_normal_cone(abs_fn(), v1(0), v1(0));
        CHECK(lim0.pieces.size() == 1);
        CHECK(lim0.contains(v2(4, 0)));
        CHECK_FALSE(lim0.contains(v2(0, 1)));
    }
}

TEST_CASE("coderivative membership") {
    const auto g = abs_fn();
    CHECK(coderivative_membership(g, v1(0), v1(1), v1(-1), v1(-1)));
    CHECK(coderivative_membership(g, v1(0), v1(0), v1(0), v1(3)));
    CHECK_FALSE(coderivative_membership(g, v1(0), v1(0), v1(1), v1(0)));
    CHECK(coderivative_membership(ind_halfline(), v1(1), v1(0), v1(2), v1(0)));
}

TEST_CASE("second subderivatives as indicators") {
    const auto g = abs_fn();
    CHECK(second_subderivative(g, v1(0), v1(1), v1(2)) == ExtRat::of(rat(0)));
    CHECK(second_subderivative(g, v1(0), v1(1), v1(-2)).is_infinite());
    CHECK(second_subderivative(g, v1(0), v1(0), v1(0)) == ExtRat::of(rat(0)));
    CHECK(strict_second_subderivative(g, v1(0), v1(1), v1(-2)) == ExtRat::of(rat(0)));
    CHECK(strict_second_subderivative(g, v1(0), v1(0), v1(1)).is_infinite());
    CHECK(strict_second_subderivative(max2_fn(), v2(0, 0), {rat(1, 2), rat(1, 2)},
                                      v2(0, 0)) == ExtRat::of(rat(0)));
}

TEST_CASE("second subderivative dominates the strict one pointwise") {
    RatSampler sampler(31);
    for (const auto& inst : make_corpus(6, 41)) {
        for (int s = 0; s < 10; ++s) {
            const RVec w = sampler.draw_vec(inst.g.dim, rat(2));
            const auto d2 = second_subderivative(inst.g, inst.zbar, inst.lambdabar, w);
            const auto ds2 = strict_second_subderivative(inst.g, inst.zbar, inst.lambdabar, w);
            if (ds2.is_infinite()) CHECK(d2.is_infinite());
        }
    }
}

TEST_CASE("regularity reports on the worked examples") {
    auto check_all = [](const RegularityReport& rep, bool expected) {
        CHECK(rep.all_agree());
        CHECK(rep.ri_flag == expected);
    };
    check_all(regularity_report(abs_fn(), v1(0), {rat(1, 2)}), true);
    check_all(regularity_report(abs_fn(), v1(0), v1(1)), false);
    check_all(regularity_report(max2_fn(), v2(0, 0), {rat(1, 2), rat(1, 2)}), true);
    check_all(regularity_report(ind_quadrant(), v2(0, 0), v2(-1, 0)), false);
}

TEST_CASE("nearby critical cones: constancy in the regular case, sandwich always") {
    for (const auto& inst : make_corpus(8, 57)) {
        const auto base = critical_cone(inst.g, inst.zbar, inst.lambdabar);
        const bool ri = is_ri_subgradient(inst.g, inst.zbar, inst.lambdabar);
        const Rat r = reduction_certify(inst.g, inst.zbar, inst.lambdabar, 40, 5).radius;
        RatSampler sampler(inst.g.dim + 13);
        const auto pairs =
            nearby_graph_samples(inst.g, inst.zbar, inst.lambdabar, r, 10, sampler);
        const auto span = cone_difference(base.cone, base.cone);
        for (const auto& [z2, l2] : pairs) {
            const auto probe = critical_cone(inst.g, z2, l2);
            for (const auto& l : base.cone.lineality_basis()) {
                CHECK(probe.cone.contains(l));
                CHECK(probe.cone.contains(negate(l)));
            }
            CHECK(probe.cone.subset_of(span));
            if (ri) {
                CHECK(probe.cone.set_equal(base.cone));
                CHECK(is_ri_subgradient(inst.g, z2, l2));
            }
        }
    }
}

TEST_CASE("sampled graph chords stay in the exact derivative objects") {
    const auto g = abs_fn();
    const RVec base_z = v1(0), base_l = v1(1);
    const Rat r = reduction_certify(g, base_z, base_l, 40, 11).radius;
    RatSampler sampler(19);
    const auto pairs = nearby_graph_samples(g, base_z, base_l, r, 15, sampler);
    std::vector<RVec> flat;
    for (const auto& [z2, l2] : pairs) {
        RVec p = z2;
        p.insert(p.end(), l2.begin(), l2.end());
        flat.push_back(std::move(p));
    }
    RVec base_flat = base_z;
    base_flat.insert(base_flat.end(), base_l.begin(), base_l.end());

    const auto k = critical_cone(g, base_z, base_l);
    for (const auto& d : chord_directions(flat, base_flat)) {
        const RVec w(d.begin(), d.begin() + 1), u(d.begin() + 1, d.end());
        CHECK(normal_graph_contains(k.cone, w, u));
    }
    for (const auto& d : pairwise_chord_directions(flat)) {
        const RVec w(d.begin(), d.begin() + 1), u(d.begin() + 1, d.end());
        CHECK(strict_graphical_derivative_membership(g, base_z, base_l, w, u));
    }
}
