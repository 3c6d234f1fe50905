#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lipschitz.hpp"
#include "metric_space.hpp"
#include "parallel.hpp"

namespace metrikit {

/// A point of the plane carrying the parabolic norm |x1| + sqrt(|x2|),
/// which scales linearly under the anisotropic dilations
/// (x1, x2) -> (r*x1, r^2*x2).
struct RugPoint {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline RugPoint operator+(RugPoint p, RugPoint q) { return {p.x1 + q.x1, p.x2 + q.x2}; }
inline RugPoint operator-(RugPoint p, RugPoint q) { return {p.x1 - q.x1, p.x2 - q.x2}; }

inline double rug_norm(RugPoint p) { return std::abs(p.x1) + std::sqrt(std::abs(p.x2)); }

inline double rug_distance(RugPoint p, RugPoint q) { return rug_norm(p - q); }

inline RugPoint dilate(RugPoint p, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("dilation scale must be a positive real");
    return {r * p.x1, (r * r) * p.x2};
}

/// Metric functor over 2-column point rows, for induced spaces.
struct RugMetric {
    double operator()(const std::vector<double>& a, const std::vector<double>& b) const {
        if (a.size() != 2 || b.size() != 2)
            throw StructuralError("rug points need exactly two coordinates");
        return std::abs(a[0] - b[0]) + std::sqrt(std::abs(a[1] - b[1]));
    }
};

inline FiniteMetricSpace rug_space(const std::vector<RugPoint>& points,
                                   std::vector<std::string> labels = {}) {
    std::vector<std::vector<double>> rows;
    rows.reserve(points.size());
    for (const auto& p : points) rows.push_back({p.x1, p.x2});
    return FiniteMetricSpace::induced(rows, RugMetric{}, std::move(labels));
}

/// Uniform grid with anisotropic spacing (h, h^2), matching the dilation
/// structure: nearest neighbors sit at parabolic distance about h along
/// either axis. Points run with the vertical index fastest.
inline std::vector<RugPoint> rug_grid(double mesh, std::size_t nx, std::size_t ny) {
    if (!(mesh > 0.0) || !std::isfinite(mesh)) throw DomainError("mesh must be a positive real");
    if (nx == 0 || ny == 0) throw DomainError("grid needs at least one point per axis");
    std::vector<RugPoint> points;
    points.reserve(nx * ny);
    const double v = mesh * mesh;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            points.push_back({mesh * static_cast<double>(i), v * static_cast<double>(j)});
    return points;
}

struct BallEstimate {
    double t = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t hits = 0;
    double estimate = 0.0;
    double std_error = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Monte Carlo area of the parabolic ball {p : rug_norm(p) < t} by rejection
/// over its exact bounding box [-t, t] x [-t^2, t^2] (box area 4*t^3, so the
/// acceptance ratio is 1/3 at every t). The stream is split into a fixed
/// number of shards, each seeded from (seed, shard); worker count never
/// changes the estimate.
inline BallEstimate ball_measure(double t, std::uint64_t samples, std::uint64_t seed) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("radius must be a positive real");
    if (samples < 1000) throw DomainError("at least 1000 samples are needed for a standard error");
    const std::size_t shards = samples >= 32768 ? 32 : 1;
    std::vector<std::uint64_t> hits_by_shard(shards, 0);
    const std::uint64_t base = samples / shards;
    const std::uint64_t extra = samples % shards;
    parallel_index(shards, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            std::mt19937_64 engine(detail::splitmix64(seed + 0x9E3779B97F4A7C15ull * (s + 1)));
            std::uniform_real_distribution<double> unit(-1.0, 1.0);
            const std::uint64_t draws = base + (s < extra ? 1 : 0);
            std::uint64_t hit = 0;
            for (std::uint64_t k = 0; k < draws; ++k) {
                const double u1 = unit(engine);
                const double u2 = unit(engine);
                if (rug_norm(dilate({u1, u2}, t)) < t) ++hit;
            }
            hits_by_shard[s] = hit;
        }
    });
    BallEstimate out;
    out.t = t;
    out.samples = samples;
    out.seed = seed;
    for (std::uint64_t h : hits_by_shard) out.hits += h;
    const double box = 4.0 * t * t * t;
    const double p = static_cast<double>(out.hits) / static_cast<double>(samples);
    out.estimate = box * p;
    out.std_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return out;
}

/// Field depending on the vertical coordinate only: f(p) = g(p.x2). When g is
/// Lipschitz of order beta <= 1 on the line, the result is Lipschitz of order
/// 2*beta under the parabolic metric with the same constant, which is how
/// nonconstant examples of orders in (1, 2] arise. Orders beta > 1 force g to
/// be constant on the sampled values; anything else is rejected.
template <typename G>
ScalarField vertical_field(G&& g, double beta, const std::vector<RugPoint>& points) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("order must be a positive real");
    ScalarField field;
    field.values.reserve(points.size());
    for (const auto& p : points) {
        const double v = g(p.x2);
        if (!std::isfinite(v)) throw InvalidDataError("profile produced a non-finite value");
        field.values.push_back(v);
    }
    if (beta > 1.0)
        for (std::size_t i = 1; i < field.values.size(); ++i)
            if (field.values[i] != field.values[0])
                throw PreconditionError("orders above 1 need a constant profile");
    return field;
}

}  // namespace metrikit
