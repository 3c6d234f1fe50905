#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "metrikit/rug.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using metrikit::RugPoint;

TEST_CASE("parabolic norm charges the square root of the vertical part") {
    CHECK(metrikit::rug_norm({2.0, 4.0}) == 4.0);
    CHECK(metrikit::rug_norm({-1.0, -9.0}) == 4.0);
    CHECK(metrikit::rug_norm({0.0, 0.0}) == 0.0);
    CHECK(metrikit::rug_norm({0.5, 0.0}) == 0.5);
    CHECK(metrikit::rug_distance({0.0, 0.0}, {0.0, 4.0}) == 2.0);
    CHECK(metrikit::rug_distance({1.0, 0.25}, {1.0, 0.0}) == 0.5);
    CHECK(metrikit::rug_distance({3.0, 1.0}, {1.0, 0.0}) == 3.0);
}

TEST_CASE("dilations scale the norm linearly") {
    const RugPoint p{0.75, -2.5};
    for (double r : {0.5, 2.0, 4.0}) {  // powers of two keep the identity exact
        const auto q = metrikit::dilate(p, r);
        CHECK(metrikit::rug_norm(q) == r * metrikit::rug_norm(p));
    }
    testgen::Rng rng(20240820);
    for (int round = 0; round < 200; ++round) {
        const RugPoint x{testgen::uniform(rng, -5.0, 5.0), testgen::uniform(rng, -5.0, 5.0)};
        const double r = testgen::uniform(rng, 0.1, 10.0);
        CHECK(metrikit::rug_norm(metrikit::dilate(x, r)) ==
              Catch::Approx(r * metrikit::rug_norm(x)).epsilon(1e-12));
        const double s = testgen::uniform(rng, 0.1, 10.0);
        const auto twice = metrikit::dilate(metrikit::dilate(x, r), s);
        const auto once = metrikit::dilate(x, r * s);
        CHECK(twice.x1 == Catch::Approx(once.x1).epsilon(1e-12));
        CHECK(twice.x2 == Catch::Approx(once.x2).epsilon(1e-12));
    }
    CHECK_THROWS_AS(metrikit::dilate(p, 0.0), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::dilate(p, -2.0), metrikit::DomainError);
}

TEST_CASE("sampled rug planes are genuine metric spaces") {
    testgen::Rng rng(20240821);
    for (int round = 0; round < 30; ++round) {
        std::vector<RugPoint> points;
        const std::size_t n = 3 + testgen::pick(rng, 8);
        for (std::size_t i = 0; i < n; ++i)
            points.push_back({testgen::uniform(rng, -3.0, 3.0), testgen::uniform(rng, -3.0, 3.0)});
        const auto space = metrikit::rug_space(points);
        CHECK(metrikit::verify_metric(space, 0.0).is_metric);
        CHECK(oracle::metric_ok(space, 1e-9));
    }
    // Collinear horizontal points defeat the strong triangle inequality.
    const auto line = metrikit::rug_space({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
    CHECK_FALSE(metrikit::verify_ultrametric(line, 0.0).is_ultrametric);
}

TEST_CASE("rug metric functor rejects wrong arity") {
    CHECK_THROWS_AS(metrikit::RugMetric{}({1.0}, {1.0, 2.0}), metrikit::StructuralError);
    CHECK_THROWS_AS(metrikit::FiniteMetricSpace::induced({{0.0}, {1.0}}, metrikit::RugMetric{}),
                    metrikit::StructuralError);
}

TEST_CASE("anisotropic grids put both neighbors at mesh distance") {
    const double h = 0.25;
    const auto points = metrikit::rug_grid(h, 3, 4);
    REQUIRE(points.size() == 12);
    CHECK(points[0].x1 == 0.0);
    CHECK(points[1].x2 == h * h);       // vertical index runs fastest
    CHECK(points[4].x1 == h);           // then the horizontal index
    CHECK(metrikit::rug_distance(points[0], points[1]) == h);
    CHECK(metrikit::rug_distance(points[0], points[4]) == h);
    CHECK_THROWS_AS(metrikit::rug_grid(0.0, 2, 2), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::rug_grid(0.5, 0, 2), metrikit::DomainError);
}

TEST_CASE("quadrature and the closed form agree on the ball area") {
    for (double t : {0.25, 0.5, 1.0, 2.0, 3.5}) {
        const double closed = (4.0 / 3.0) * t * t * t;
        CHECK(oracle::rug_ball_area(t) == Catch::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("sampling reproduces the ball area within its own error bars") {
    for (double t : {0.5, 1.0, 2.0}) {
        const auto est = metrikit::ball_measure(t, 200000, 42);
        const double expected = oracle::rug_ball_area(t);
        CHECK(est.std_error > 0.0);
        CHECK(std::abs(est.estimate - expected) <= 3.0 * est.std_error);
    }
}

TEST_CASE("ball sampling is reproducible and seed sensitive") {
    const auto a = metrikit::ball_measure(1.0, 50000, 7);
    const auto b = metrikit::ball_measure(1.0, 50000, 7);
    CHECK(a.hits == b.hits);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    const auto c = metrikit::ball_measure(1.0, 50000, 8);
    CHECK(a.hits != c.hits);
    // Below the sharding threshold a single stream serves all draws.
    const auto small = metrikit::ball_measure(1.0, 1000, 7);
    CHECK(small.samples == 1000);
    CHECK(small.hits <= 1000);
}

TEST_CASE("ball estimates scale like the cube of the radius") {
    const auto one = metrikit::ball_measure(1.0, 400000, 11);
    const auto two = metrikit::ball_measure(2.0, 400000, 12);
    const double ratio = two.estimate / one.estimate;
    const double rel = std::sqrt(std::pow(one.std_error / one.estimate, 2) +
                                 std::pow(two.std_error / two.estimate, 2));
    CHECK(std::abs(ratio - 8.0) <= 3.0 * 8.0 * rel);
}

TEST_CASE("ball sampling guards") {
    CHECK_THROWS_AS(metrikit::ball_measure(0.0, 10000, 1), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::ball_measure(-1.0, 10000, 1), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::ball_measure(1.0, 999, 1), metrikit::DomainError);
}

TEST_CASE("vertical profiles double their order under the parabolic metric") {
    const auto points = metrikit::rug_grid(0.25, 1, 9);
    const auto space = metrikit::rug_space(points);
    const auto field = metrikit::vertical_field([](double v) { return v; }, 1.0, points);
    const auto fit = metrikit::fit_constant(space, field, 2.0);
    CHECK(fit.constant == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(metrikit::verify_lipschitz(space, field, 2.0, 1.0, 1e-9).empty());
}

TEST_CASE("orders above one only admit constant profiles") {
    const auto points = metrikit::rug_grid(0.5, 2, 3);
    const auto flat = metrikit::vertical_field([](double) { return 3.0; }, 1.5, points);
    CHECK(flat.values == std::vector<double>(points.size(), 3.0));
    CHECK_THROWS_AS(metrikit::vertical_field([](double v) { return v; }, 1.5, points),
                    metrikit::PreconditionError);
    CHECK_THROWS_AS(metrikit::vertical_field([](double v) { return v; }, 0.0, points),
                    metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::vertical_field([](double) { return std::nan(""); }, 1.0, points),
                    metrikit::InvalidDataError);
}
