#include <doctest.h>

#include "polyvar/second_order.hpp"
#include "test_helpers.hpp"

using namespace polyvar;
using namespace polyvar::testing;

namespace {
RVec v1(long a) { return {rat(a)}; }
RVec v2(long a, long b) { return {rat(a), rat(b)}; }
}  // namespace

TEST_CASE("evaluation") {
    CHECK(eval(abs_fn(), v1(-3)) == ExtRat::of(rat(3)));
    CHECK(eval(ind_halfline(), v1(-1)).is_infinite());
    CHECK(eval(max2_fn(), v2(2, 5)) == ExtRat::of(rat(5)));
    CHECK_THROWS_AS(eval(abs_fn(), v2(0, 0)), DimMismatch);
}

TEST_CASE("active sets") {
    const auto g = abs_fn();
    auto s = active_sets(g, v1(0));
    CHECK(s.J_active == std::vector<std::size_t>{0, 1});
    CHECK(s.I_active.empty());
    s = active_sets(g, v1(2));
    CHECK(s.J_active == std::vector<std::size_t>{0});

    const auto q = ind_quadrant();
    s = active_sets(q, v2(0, 3));
    CHECK(s.J_active == std::vector<std::size_t>{0});
    CHECK(s.I_active == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(active_sets(q, v2(-1, 0)), NotInDomain);
}

TEST_CASE("subdifferential via active generators") {
    // Eq.-style construction checked by hand
    auto sd = subdifferential(abs_fn(), v1(0));
    CHECK(sd.points.size() == 2);
    CHECK(sd.contains(v1(1)));
    CHECK(sd.contains({rat(-1, 2)}));
    CHECK_FALSE(sd.contains({rat(3, 2)}));

    sd = subdifferential(max2_fn(), v2(0, 0));
    CHECK(sd.contains({rat(1, 2), rat(1, 2)}));
    CHECK_FALSE(sd.contains({rat(1, 2), rat(1, 4)}));

    sd = subdifferential(ind_quadrant(), v2(0, 0));
    CHECK(sd.contains(v2(-3, -4)));
    CHECK_FALSE(sd.contains(v2(1, 0)));
}

TEST_CASE("subdifferential is membership-equivalent to decomposability") {
    RatSampler sampler(5);
    for (const auto& g : {abs_fn(), max2_fn(), ind_quadrant()}) {
        const RVec z = rvec_zero(g.dim);
        const auto sd = subdifferential(g, z);
        for (int s = 0; s < 20; ++s) {
            const RVec lambda = sampler.draw_vec(g.dim, rat(2));
            CHECK(sd.contains(lambda) == decompose(g, z, lambda).has_value());
        }
    }
}

TEST_CASE("subderivative") {
    CHECK(subderivative(abs_fn(), v1(0), v1(-2)) == ExtRat::of(rat(2)));
    CHECK(subderivative(ind_halfline(), v1(0), v1(-1)).is_infinite());
    // max over active pieces
    CHECK(subderivative(max2_fn(), v2(0, 0), {rat(1), rat(3)}) == ExtRat::of(rat(3)));
}

TEST_CASE("local exactness radius from slack") {
    CHECK(local_exactness_radius(abs_fn(), v1(0)) == 1);
    // slack formula by hand: inactive piece slack 2 over norm sum 2
    CHECK(local_exactness_radius(abs_fn(), v1(1)) == 1);
    CHECK(local_exactness_radius(ind_unit_interval(), v1(1)) == 1);
    // the identity g(z+w) = g(z) + dg(z)(w) holds within the radius
    for (const auto& g : {abs_fn(), max2_fn()}) {
        RatSampler sampler(3);
        for (int s = 0; s < 10; ++s) {
            const RVec z = sampler.draw_vec(g.dim, rat(2));
            const Rat r = local_exactness_radius(g, z);
            const RVec wraw = sampler.draw_vec(g.dim, rat(1));
            if (is_zero(wraw)) continue;
            const RVec w = scale(r / (2 * (1 + norm1(wraw))), wraw);
            const Rat expect = eval(g, z).value() + subderivative(g, z, w).value();
            CHECK(eval(g, add(z, w)) == ExtRat::of(expect));
        }
    }
}

TEST_CASE("decompose") {
    SUBCASE("unique multipliers for |.| at the kink: 2x2 solve by hand") {
        const auto d = decompose(abs_fn(), v1(0), v1(0));
        REQUIRE(d.has_value());
        CHECK(d->sigma == std::vector<Rat>{rat(1, 2), rat(1, 2)});
    }
    SUBCASE("infeasible means not a subgradient") {
        CHECK_FALSE(decompose(abs_fn(), v1(0), v1(2)).has_value());
    }
    SUBCASE("constraint multipliers on the quadrant") {
        const auto d = decompose(ind_quadrant(), v2(0, 0), v2(-1, 0));
        REQUIRE(d.has_value());
        CHECK(d->tau == std::vector<Rat>{rat(1), rat(0)});
    }
    SUBCASE("all vertex decompositions of a degenerate representation") {
        // three pieces +1, -1, 0 all active at the origin; lambda = 0 has
        // a segment of valid sigma; vertices found by hand are
        // (1/2, 1/2, 0) and (0, 0, 1)
        PolyhedralFunc g;
        g.dim = 1;
        g.pieces = {{v1(1), rat(0)}, {v1(-1), rat(0)}, {v1(0), rat(0)}};
        g.validate();
        const auto set = all_decompositions(g, v1(0), v1(0));
        REQUIRE(set.vertices.size() == 2);
        CHECK(set.rays.empty());
        for (const auto& dec : set.vertices) {
            RVec combo = rvec_zero(1);
            Rat total = 0;
            for (std::size_t j = 0; j < 3; ++j) {
                combo = add(combo, scale(dec.sigma[j], g.pieces[j].first));
                total += dec.sigma[j];
            }
            CHECK(total == 1);
            CHECK(combo == v1(0));
        }
    }
    SUBCASE("unbounded multiplier directions appear as rays") {
        // two opposite constraint normals active at 0: tau can grow along
        // (1,1)
        PolyhedralFunc g;
        g.dim = 1;
        g.pieces = {{v1(0), rat(0)}};
        g.constraints = {{v1(1), rat(0)}, {v1(-1), rat(0)}};
        g.validate();
        const auto set = all_decompositions(g, v1(0), v1(0));
        CHECK(!set.rays.empty());
    }
}

TEST_CASE("conjugates") {
    SUBCASE("absolute value conjugates to the unit-interval indicator") {
        const auto conj = conjugate(abs_fn());
        CHECK(eval(conj, {rat(1, 2)}) == ExtRat::of(rat(0)));
        CHECK(eval(conj, v1(1)) == ExtRat::of(rat(0)));
        CHECK(eval(conj, v1(2)).is_infinite());
    }
    SUBCASE("halfline indicator conjugates to the polar indicator") {
        const auto conj = conjugate(ind_halfline());
        CHECK(eval(conj, v1(-3)) == ExtRat::of(rat(0)));
        CHECK(eval(conj, v1(1)).is_infinite());
    }
    SUBCASE("max conjugates to the simplex indicator") {
        const auto conj = conjugate(max2_fn());
        CHECK(eval(conj, {rat(1, 2), rat(1, 2)}) == ExtRat::of(rat(0)));
        CHECK(eval(conj, v2(1, 0)) == ExtRat::of(rat(0)));
        CHECK(eval(conj, v2(1, 1)).is_infinite());
        CHECK(eval(conj, {rat(1, 2), rat(1, 4)}).is_infinite());
    }
}

TEST_CASE("biconjugation recovers the function on a rational grid") {
    for (const auto& g : {abs_fn(), ind_unit_interval(), max2_fn(), ind_quadrant()}) {
        const auto gss = conjugate(conjugate(g));
        RatSampler sampler(17);
        for (int s = 0; s < 40; ++s) {
            const RVec z = sampler.draw_vec(g.dim, rat(3));
            CHECK(eval(g, z) == eval(gss, z));
        }
    }
}

TEST_CASE("Fenchel-Young equality characterizes the graph") {
    RatSampler sampler(23);
    for (const auto& g : {abs_fn(), max2_fn(), ind_quadrant()}) {
        const auto conj = conjugate(g);
        for (int s = 0; s < 25; ++s) {
            const RVec z = sampler.draw_vec(g.dim, rat(2));
            const RVec lambda = sampler.draw_vec(g.dim, rat(2));
            const ExtRat gz = eval(g, z), gl = eval(conj, lambda);
            if (gz.is_infinite()) continue;
            const bool member = graph_membership(g, z, lambda);
            const bool young = !gl.is_infinite() && gz.value() + gl.value() == dot(lambda, z);
            CHECK(member == young);
        }
    }
}

TEST_CASE("graph membership basics") {
    CHECK(graph_membership(abs_fn(), v1(0), v1(1)));
    CHECK_FALSE(graph_membership(abs_fn(), v1(1), {rat(1, 2)}));
    CHECK(graph_membership(ind_quadrant(), v2(0, 0), v2(-3, -4)));
    CHECK_FALSE(graph_membership(ind_halfline(), v1(-1), v1(0)));
}

TEST_CASE("subgradient pair caches validated data") {
    const auto pair = SubgradientPair::make(abs_fn(), v1(0), v1(1));
    CHECK(pair.active.J_active.size() == 2);
    CHECK(pair.subdiff.contains(v1(1)));
    CHECK_THROWS_AS(SubgradientPair::make(abs_fn(), v1(0), v1(2)), NotSubgradient);
}

TEST_CASE("support stability radius certifies the index inclusions") {
    CHECK(support_stability_radius(abs_fn(), v1(0), v1(1), 40, 3) >= rat(1, 1 << 20));
    CHECK(support_stability_radius(max2_fn(), v2(0, 0), {rat(1, 2), rat(1, 2)}, 40, 3) >=
          rat(1, 1 << 20));
    CHECK(support_stability_radius(ind_quadrant(), v2(0, 0), v2(-1, 0), 40, 3) >=
          rat(1, 1 << 20));
}

TEST_CASE("proper-function validation") {
    PolyhedralFunc empty_dom;
    empty_dom.dim = 1;
    empty_dom.pieces = {{v1(0), rat(0)}};
    empty_dom.constraints = {{v1(1), rat(-1)}, {v1(-1), rat(-1)}};  // x <= -1 and x >= 1
    CHECK_THROWS_AS(empty_dom.validate(), DomainError);
    PolyhedralFunc no_pieces;
    no_pieces.dim = 1;
    CHECK_THROWS_AS(no_pieces.validate(), DomainError);
}
