#pragma once

// Seeded random instances for property-style tests.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "metrikit/grid_set.hpp"
#include "metrikit/lipschitz.hpp"
#include "metrikit/metric_space.hpp"

namespace testgen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline std::vector<std::vector<double>> point_cloud(Rng& rng, std::size_t n, std::size_t dim,
                                                    double lo = 0.0, double hi = 1.0) {
    std::vector<std::vector<double>> points(n, std::vector<double>(dim));
    for (auto& p : points)
        for (auto& c : p) c = uniform(rng, lo, hi);
    return points;
}

inline metrikit::FiniteMetricSpace euclidean_cloud(Rng& rng, std::size_t n, std::size_t dim) {
    return metrikit::FiniteMetricSpace::induced(point_cloud(rng, n, dim),
                                                metrikit::EuclideanMetric{});
}

/// Shortest-path completion of a random symmetric weight matrix; the result
/// satisfies the triangle inequality up to rounding.
inline metrikit::FiniteMetricSpace path_completion(Rng& rng, std::size_t n) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = uniform(rng, 0.5, 2.0);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
    return metrikit::FiniteMetricSpace::from_rows(d);
}

inline metrikit::FiniteMetricSpace random_metric(Rng& rng, std::size_t n) {
    if (pick(rng, 2) == 0) return euclidean_cloud(rng, n, 1 + pick(rng, 3));
    return path_completion(rng, n);
}

/// Bottom-up random merge tree with strictly increasing merge heights; the
/// distance between two points is the height of the merge joining them.
inline metrikit::FiniteMetricSpace random_ultrametric(Rng& rng, std::size_t n) {
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    double height = 0.0;
    while (clusters.size() > 1) {
        height += uniform(rng, 0.1, 1.0);
        const std::size_t a = pick(rng, clusters.size());
        std::size_t b = pick(rng, clusters.size() - 1);
        if (b >= a) ++b;
        for (std::size_t x : clusters[a])
            for (std::size_t y : clusters[b]) d[x][y] = d[y][x] = height;
        clusters[std::min(a, b)].insert(clusters[std::min(a, b)].end(),
                                        clusters[std::max(a, b)].begin(),
                                        clusters[std::max(a, b)].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(std::max(a, b)));
    }
    return metrikit::FiniteMetricSpace::from_rows(d);
}

inline metrikit::ScalarField random_field(Rng& rng, std::size_t n, double lo = -2.0,
                                          double hi = 2.0) {
    metrikit::ScalarField field;
    field.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) field.values.push_back(uniform(rng, lo, hi));
    return field;
}

inline metrikit::GridSet random_mask(Rng& rng, std::size_t dim, std::size_t resolution,
                                     double fill) {
    metrikit::GridSet set = metrikit::GridSet::empty(dim, resolution);
    for (std::size_t c = 0; c < set.cells(); ++c)
        if (uniform(rng, 0.0, 1.0) < fill) set.set_occupied(c, true);
    return set;
}

namespace detail {

inline void clear_square(metrikit::GridSet& set, std::size_t lx, std::size_t ly, std::size_t side) {
    for (std::size_t x = lx; x < lx + side; ++x)
        for (std::size_t y = ly; y < ly + side; ++y) set.set_occupied(set.flatten({x, y}), false);
}

inline void carve(metrikit::GridSet& set, Rng& rng, std::size_t arity, std::size_t lx,
                  std::size_t ly, std::size_t side) {
    if (side < arity) return;
    const std::size_t child = side / arity;
    const std::size_t hole = pick(rng, arity * arity);
    for (std::size_t cx = 0; cx < arity; ++cx)
        for (std::size_t cy = 0; cy < arity; ++cy) {
            const std::size_t x = lx + cx * child;
            const std::size_t y = ly + cy * child;
            if (cx * arity + cy == hole)
                clear_square(set, x, y, child);
            else
                carve(set, rng, arity, x, y, child);
        }
}

}  // namespace detail

/// Two-dimensional mask that is porous by construction: after a random fill,
/// one child of every aligned cube at every level is carved empty. Cleared
/// regions stay empty, so every cube down the tree keeps an empty child.
inline metrikit::GridSet random_porous_mask_2d(Rng& rng, std::size_t arity, std::size_t levels,
                                               double fill = 0.7) {
    std::size_t resolution = 1;
    for (std::size_t k = 0; k < levels; ++k) resolution *= arity;
    metrikit::GridSet set = random_mask(rng, 2, resolution, fill);
    detail::carve(set, rng, arity, 0, 0, resolution);
    return set;
}

}  // namespace testgen
