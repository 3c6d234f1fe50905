#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "metrikit/chains.hpp"
#include "metrikit/lipschitz.hpp"
#include "metrikit/metric_space.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using metrikit::FiniteMetricSpace;
using metrikit::ScalarField;

namespace {

FiniteMetricSpace line_space(const std::vector<double>& xs) {
    std::vector<std::vector<double>> points;
    for (double x : xs) points.push_back({x});
    return FiniteMetricSpace::induced(points, metrikit::ManhattanMetric{});
}

}  // namespace

TEST_CASE("fit on a doubled line gives constant two at the first pair") {
    const auto space = line_space({0.0, 1.0, 2.0});
    const ScalarField field{{0.0, 2.0, 4.0}};
    const auto fit = metrikit::fit_constant(space, field, 1.0);
    CHECK(fit.alpha == 1.0);
    CHECK(fit.constant == 2.0);
    REQUIRE(fit.witness.has_value());
    CHECK(*fit.witness == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("constant fields fit with constant zero and a witness") {
    const auto space = line_space({0.0, 1.0, 3.0});
    const auto fit = metrikit::fit_constant(space, ScalarField{{7.0, 7.0, 7.0}}, 0.5);
    CHECK(fit.constant == 0.0);
    REQUIRE(fit.witness.has_value());
    CHECK(*fit.witness == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("one-point spaces fit trivially without a witness") {
    const auto point = FiniteMetricSpace::from_rows({{0.0}});
    const auto fit = metrikit::fit_constant(point, ScalarField{{3.0}}, 1.0);
    CHECK(fit.constant == 0.0);
    CHECK_FALSE(fit.witness.has_value());
}

TEST_CASE("underflowed denominators constrain nothing or everything") {
    const auto tiny = FiniteMetricSpace::from_rows({{0.0, 1e-200}, {1e-200, 0.0}});
    const auto flat = metrikit::fit_constant(tiny, ScalarField{{4.0, 4.0}}, 2.0);
    CHECK(flat.constant == 0.0);
    const auto jump = metrikit::fit_constant(tiny, ScalarField{{0.0, 1.0}}, 2.0);
    CHECK(std::isinf(jump.constant));
    REQUIRE(jump.witness.has_value());
    CHECK(*jump.witness == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("fit guards its inputs") {
    const auto space = line_space({0.0, 1.0});
    CHECK_THROWS_AS(metrikit::fit_constant(space, ScalarField{{1.0}}, 1.0),
                    metrikit::StructuralError);
    CHECK_THROWS_AS(metrikit::fit_constant(space, ScalarField{{1.0, std::nan("")}}, 1.0),
                    metrikit::InvalidDataError);
    CHECK_THROWS_AS(metrikit::fit_constant(space, ScalarField{{0.0, 1.0}}, 0.0),
                    metrikit::DomainError);
    const auto lopsided = FiniteMetricSpace::from_rows({{0, 1}, {2, 0}});
    CHECK_THROWS_AS(metrikit::fit_constant(lopsided, ScalarField{{0.0, 1.0}}, 1.0),
                    metrikit::PreconditionError);
}

TEST_CASE("fitted constant matches the direct pair scan") {
    testgen::Rng rng(20240816);
    for (int round = 0; round < 80; ++round) {
        const std::size_t n = 2 + testgen::pick(rng, 8);
        const auto space = testgen::random_metric(rng, n);
        const auto field = testgen::random_field(rng, n);
        const double alpha = testgen::uniform(rng, 0.3, 2.5);
        const auto fit = metrikit::fit_constant(space, field, alpha);
        CHECK(fit.constant == oracle::lipschitz_fit_direct(space, field, alpha));
        REQUIRE(fit.witness.has_value());
        const auto [i, j] = *fit.witness;
        const double df = std::abs(field.values[i] - field.values[j]);
        CHECK(df / std::pow(space.distance(i, j), alpha) == fit.constant);
    }
}

TEST_CASE("the fitted constant always dominates its own field") {
    testgen::Rng rng(20240817);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 2 + testgen::pick(rng, 7);
        const auto space = testgen::random_metric(rng, n);
        const auto field = testgen::random_field(rng, n);
        const double alpha = testgen::uniform(rng, 0.3, 2.0);
        const auto fit = metrikit::fit_constant(space, field, alpha);
        CHECK(metrikit::verify_lipschitz(space, field, alpha, fit.constant, 0.0).empty());
    }
}

TEST_CASE("snowflaking rescales the fitted order accordingly") {
    // Fitting order alpha on the a-snowflake agrees with fitting order
    // a * alpha on the original, up to powering roundoff; the extremal pair
    // is the same in both parameterizations.
    testgen::Rng rng(20240818);
    for (int round = 0; round < 40; ++round) {
        const std::size_t n = 2 + testgen::pick(rng, 6);
        const auto space = testgen::random_metric(rng, n);
        const auto field = testgen::random_field(rng, n);
        const double a = testgen::uniform(rng, 0.4, 0.9);
        const double alpha = testgen::uniform(rng, 0.5, 2.0);
        const auto direct = metrikit::fit_constant(space, field, a * alpha);
        const auto flaked = metrikit::fit_constant(metrikit::snowflake(space, a), field, alpha);
        CHECK(flaked.constant == Catch::Approx(direct.constant).epsilon(1e-12));
        REQUIRE(flaked.witness.has_value());
        REQUIRE(direct.witness.has_value());
        CHECK(*flaked.witness == *direct.witness);
    }
}

TEST_CASE("violations come back sorted by defect, then by pair") {
    const auto space = line_space({0.0, 1.0, 2.0, 3.0});
    const ScalarField field{{0.0, 5.0, 6.0, 10.0}};
    const auto violations = metrikit::verify_lipschitz(space, field, 1.0, 1.0, 0.0);
    REQUIRE(violations.size() == 5);
    CHECK(violations[0].pair == std::pair<std::size_t, std::size_t>{0, 3});
    CHECK(violations[0].defect == Catch::Approx(7.0));
    CHECK(violations[1].pair == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(violations[2].pair == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(violations[1].defect == Catch::Approx(4.0));
    CHECK(violations[2].defect == Catch::Approx(4.0));
    CHECK(violations[3].pair == std::pair<std::size_t, std::size_t>{1, 3});
    CHECK(violations[4].pair == std::pair<std::size_t, std::size_t>{2, 3});
}

TEST_CASE("verification honours tolerance and rejects bad constants") {
    const auto space = line_space({0.0, 1.0});
    const ScalarField field{{0.0, 1.05}};
    CHECK(metrikit::verify_lipschitz(space, field, 1.0, 1.0, 0.1).empty());
    CHECK(metrikit::verify_lipschitz(space, field, 1.0, 1.0, 0.0).size() == 1);
    CHECK_THROWS_AS(metrikit::verify_lipschitz(space, field, 1.0, -0.5, 0.0),
                    metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::verify_lipschitz(space, field, 1.0, 1.0, -1.0),
                    metrikit::DomainError);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(metrikit::verify_lipschitz(space, field, 1.0, inf, 0.0),
                    metrikit::DomainError);
}

TEST_CASE("distance fields vanish on anchors and contract at order one") {
    const auto space = line_space({0.0, 0.5, 1.0});
    const auto field = metrikit::distance_field(space, {0, 2});
    CHECK(field.values == std::vector<double>{0.0, 0.5, 0.0});

    testgen::Rng rng(20240819);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 2 + testgen::pick(rng, 8);
        const auto random = testgen::random_metric(rng, n);
        std::vector<std::size_t> anchors{testgen::pick(rng, n)};
        if (n > 2 && testgen::pick(rng, 2) == 0) anchors.push_back(testgen::pick(rng, n));
        const auto radii = metrikit::distance_field(random, anchors);
        for (std::size_t a : anchors) CHECK(radii.values[a] == 0.0);
        CHECK(metrikit::verify_lipschitz(random, radii, 1.0, 1.0, 0.0).empty());
        const auto fit = metrikit::fit_constant(random, radii, 1.0);
        CHECK_FALSE(metrikit::exceeds(fit.constant, 1.0, 0.0));
    }
}

TEST_CASE("distance field guards") {
    const auto space = line_space({0.0, 1.0});
    CHECK_THROWS_AS(metrikit::distance_field(space, {}), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::distance_field(space, {5}), metrikit::StructuralError);
}

TEST_CASE("half-space indicators on dust price the central gap") {
    for (const auto& [depth, ratio] : {std::pair<std::size_t, double>{4, 0.3}, {5, 1.0 / 3.0}}) {
        const auto dust = metrikit::cantor_space(depth, ratio);
        const std::size_t n = dust.size();
        ScalarField side;
        side.values.assign(n, 0.0);
        for (std::size_t i = n / 2; i < n; ++i) side.values[i] = 1.0;
        const double gap = 1.0 - 2.0 * ratio + std::pow(ratio, static_cast<double>(depth));
        for (double alpha : {0.5, 1.0, 2.0}) {
            const auto fit = metrikit::fit_constant(dust, side, alpha);
            CHECK(fit.constant == Catch::Approx(std::pow(gap, -alpha)).epsilon(1e-12));
            REQUIRE(fit.witness.has_value());
            CHECK(*fit.witness == std::pair<std::size_t, std::size_t>{n / 2 - 1, n / 2});
        }
    }
}

TEST_CASE("refinement probe on the identity doubles with each dyadic split") {
    const auto probe = metrikit::refinement_probe(
        0.0, 1.0, [](double x) { return x; }, {0.5, 0.25}, 2.0);
    REQUIRE(probe.size() == 2);
    CHECK(probe[0].mesh == 0.5);
    CHECK(probe[0].fit.constant == 2.0);
    REQUIRE(probe[0].fit.witness.has_value());
    CHECK(*probe[0].fit.witness == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(probe[1].mesh == 0.25);
    CHECK(probe[1].fit.constant == 4.0);
}

TEST_CASE("refinement probe grows without bound on smooth nonconstant samples") {
    const auto probe = metrikit::refinement_probe(
        0.0, 1.0, [](double x) { return x * x; }, {0.5, 0.25, 0.125}, 2.0);
    REQUIRE(probe.size() == 3);
    CHECK(probe[0].fit.constant == 3.0);
    CHECK(probe[1].fit.constant == 7.0);
    CHECK(probe[2].fit.constant == 15.0);
    CHECK(probe[0].fit.constant < probe[1].fit.constant);
    CHECK(probe[1].fit.constant < probe[2].fit.constant);
}

TEST_CASE("refinement probe stays flat on constant samples") {
    const auto probe = metrikit::refinement_probe(
        -1.0, 1.0, [](double) { return 2.5; }, {0.5, 0.25}, 1.5);
    for (const auto& point : probe) CHECK(point.fit.constant == 0.0);
}

TEST_CASE("refinement probe guards") {
    const auto id = [](double x) { return x; };
    CHECK_THROWS_AS(metrikit::refinement_probe(1.0, 0.0, id, {0.5}, 2.0), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::refinement_probe(0.0, 1.0, id, {0.5}, 1.0), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::refinement_probe(0.0, 1.0, id, {}, 2.0), metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::refinement_probe(0.0, 1.0, id, {0.25, 0.5}, 2.0),
                    metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::refinement_probe(0.0, 1.0, id, {0.5, -0.25}, 2.0),
                    metrikit::DomainError);
    CHECK_THROWS_AS(metrikit::refinement_probe(0.0, 1.0, id, {0.3}, 2.0), metrikit::DomainError);
}
