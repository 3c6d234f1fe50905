#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "metric_space.hpp"
#include "tolerance.hpp"

namespace metrikit {

/// One real value per point of an associated space.
struct ScalarField {
    std::vector<double> values;
};

/// Result of fitting |f(x) - f(y)| <= C * d(x, y)^alpha over all pairs.
/// The constant is zero exactly when the field is constant; the witness is
/// the lexicographically smallest argmax pair (absent on one-point spaces).
struct LipschitzFit {
    double alpha = 1.0;
    double constant = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

struct PairViolation {
    std::pair<std::size_t, std::size_t> pair;
    double defect;
};

namespace detail {

inline void require_field(const FiniteMetricSpace& space, const ScalarField& field) {
    if (field.values.size() != space.size())
        throw StructuralError("field length does not match the space");
    for (std::size_t i = 0; i < field.values.size(); ++i)
        if (!std::isfinite(field.values[i]))
            throw InvalidDataError("non-finite field value at point " + std::to_string(i));
}

inline void require_order(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("order must be a positive real");
}

/// Growth ratio |df| / d^alpha with the zero-denominator corner pinned:
/// an underflowed power with a vanishing difference constrains nothing.
inline double pair_ratio(double df, double d, double alpha) {
    const double denom = std::pow(d, alpha);
    if (denom == 0.0) return df == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return df / denom;
}

}  // namespace detail

inline LipschitzFit fit_constant(const FiniteMetricSpace& space, const ScalarField& field,
                                 double alpha) {
    detail::require_order(alpha);
    detail::require_field(space, field);
    detail::require_cheap_metric(space, "space");
    LipschitzFit fit;
    fit.alpha = alpha;
    const std::size_t n = space.size();
    if (n < 2) return fit;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double df = std::abs(field.values[i] - field.values[j]);
            const double ratio = detail::pair_ratio(df, space.distance(i, j), alpha);
            if (ratio > best) {
                best = ratio;
                fit.witness = {i, j};
            }
        }
    fit.constant = std::max(best, 0.0);
    return fit;
}

/// Pairs where |f(x) - f(y)| overshoots C * d(x, y)^alpha by more than tol
/// (plus the fixed relative slack), sorted worst first. The reported defect
/// is the overshoot past C * d^alpha itself.
inline std::vector<PairViolation> verify_lipschitz(const FiniteMetricSpace& space,
                                                   const ScalarField& field, double alpha,
                                                   double constant, double tol) {
    detail::require_order(alpha);
    if (!(constant >= 0.0) || !std::isfinite(constant))
        throw DomainError("constant must be a nonnegative real");
    detail::require_tolerance(tol);
    detail::require_field(space, field);
    detail::require_cheap_metric(space, "space");
    std::vector<PairViolation> violations;
    const std::size_t n = space.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double df = std::abs(field.values[i] - field.values[j]);
            const double allowed = constant * std::pow(space.distance(i, j), alpha);
            if (exceeds(df, allowed, tol)) violations.push_back({{i, j}, df - allowed});
        }
    std::sort(violations.begin(), violations.end(), [](const PairViolation& a, const PairViolation& b) {
        if (a.defect != b.defect) return a.defect > b.defect;
        return a.pair < b.pair;
    });
    return violations;
}

/// Pointwise minimum distance to a nonempty anchor set. Always Lipschitz of
/// order 1 with constant at most 1 on a genuine metric.
inline ScalarField distance_field(const FiniteMetricSpace& space,
                                  const std::vector<std::size_t>& anchors) {
    if (anchors.empty()) throw DomainError("anchor set must be nonempty");
    for (std::size_t a : anchors)
        if (a >= space.size())
            throw StructuralError("anchor index " + std::to_string(a) + " is out of range");
    detail::require_finite(space);
    ScalarField field;
    field.values.reserve(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t a : anchors) nearest = std::min(nearest, space.distance(i, a));
        field.values.push_back(nearest);
    }
    return field;
}

struct RefinementPoint {
    double mesh;
    LipschitzFit fit;
};

/// Samples f on successively finer uniform grids over [a, b] (metric |x - y|)
/// and fits the order-alpha constant at each mesh. For orders above 1 and a
/// nonconstant f the fitted constant blows up as the mesh shrinks; nested
/// (for example dyadic) mesh chains make the growth monotone because the
/// pair set only ever gains members.
template <typename F>
std::vector<RefinementPoint> refinement_probe(double a, double b, F&& sample,
                                              const std::vector<double>& meshes, double alpha) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
        throw DomainError("interval must satisfy a < b");
    if (!(alpha > 1.0) || !std::isfinite(alpha))
        throw DomainError("refinement probing needs an order above 1");
    if (meshes.empty()) throw DomainError("at least one mesh size is required");
    for (std::size_t m = 0; m < meshes.size(); ++m) {
        if (!(meshes[m] > 0.0) || !std::isfinite(meshes[m]))
            throw DomainError("mesh sizes must be positive reals");
        if (m > 0 && !(meshes[m] < meshes[m - 1]))
            throw DomainError("mesh sizes must be strictly decreasing");
    }
    const double span = b - a;
    std::vector<RefinementPoint> probe;
    probe.reserve(meshes.size());
    for (double h : meshes) {
        const auto steps = static_cast<std::size_t>(std::llround(span / h));
        if (steps < 1 || std::abs(static_cast<double>(steps) * h - span) > 1e-9 * span)
            throw DomainError("mesh must divide the interval length");
        std::vector<std::vector<double>> points;
        ScalarField field;
        points.reserve(steps + 1);
        field.values.reserve(steps + 1);
        for (std::size_t i = 0; i <= steps; ++i) {
            const double x = a + span * static_cast<double>(i) / static_cast<double>(steps);
            points.push_back({x});
            field.values.push_back(sample(x));
        }
        const auto grid = FiniteMetricSpace::induced(points, ManhattanMetric{});
        probe.push_back({h, fit_constant(grid, field, alpha)});
    }
    return probe;
}

}  // namespace metrikit
