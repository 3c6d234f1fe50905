#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid_set.hpp"
#include "tolerance.hpp"

namespace metrikit {

struct PorosityFailure {
    std::size_t cell;
    double radius;
};

/// Outcome of a ball-based porosity probe. `constant` is the smallest value
/// that would make every probed (center, radius) pair pass, clamped to at
/// least 1 (infinite when some ball holds no usable witness at all).
struct PorosityReport {
    bool porous = false;
    double constant = 1.0;
    std::vector<PorosityFailure> failures;
};

namespace detail {

inline bool any_occupied_in_box(const GridSet& set, const std::vector<std::size_t>& low,
                                std::size_t side) {
    std::vector<std::size_t> coords = low;
    for (;;) {
        if (set.occupied(set.flatten(coords))) return true;
        std::size_t axis = set.dim() - 1;
        for (;;) {
            if (++coords[axis] < low[axis] + side) break;
            coords[axis] = low[axis];
            if (axis == 0) return false;
            --axis;
        }
    }
}

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double delta = a[k] - b[k];
        acc += delta * delta;
    }
    return std::sqrt(acc);
}

/// Per-cell Euclidean distance from the cell's center to the nearest occupied
/// center; infinite when the set is empty.
inline std::vector<double> center_distances_to_set(const GridSet& set) {
    std::vector<std::size_t> occupied;
    for (std::size_t c = 0; c < set.cells(); ++c)
        if (set.occupied(c)) occupied.push_back(c);
    std::vector<double> dist(set.cells(), std::numeric_limits<double>::infinity());
    if (occupied.empty()) return dist;
    std::vector<std::vector<double>> occupied_centers;
    occupied_centers.reserve(occupied.size());
    for (std::size_t c : occupied) occupied_centers.push_back(set.center(c));
    for (std::size_t c = 0; c < set.cells(); ++c) {
        const auto here = set.center(c);
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& target : occupied_centers) nearest = std::min(nearest, euclid(here, target));
        dist[c] = nearest;
    }
    return dist;
}

inline std::uint64_t checked_u64_power(std::uint64_t base, std::size_t exp, const char* what) {
    std::uint64_t result = 1;
    for (std::size_t k = 0; k < exp; ++k) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base)
            throw ResourceError(std::string(what) + " overflows");
        result *= base;
    }
    return result;
}

}  // namespace detail

/// Ball-based porosity test: every cell center x and every probed radius r
/// must admit a cell center y within Euclidean distance r of x whose distance
/// to the occupied set is at least r/C. The search maximizes that distance
/// over the whole ball, so the report also carries the best constant the mask
/// could ever satisfy at these radii.
inline PorosityReport porosity_probe(const GridSet& set, double constant,
                                     const std::vector<double>& radii) {
    if (!(constant >= 1.0) || !std::isfinite(constant))
        throw DomainError("porosity constant must be at least 1");
    if (radii.empty()) throw DomainError("at least one radius is required");
    for (double r : radii) {
        if (!(r > 0.0) || !(r <= 1.0) || !std::isfinite(r))
            throw DomainError("radii must lie in (0, 1]");
        if (r <= set.cell_size())
            throw ResolutionError("radius " + std::to_string(r) +
                                  " is below the grid resolution");
    }
    const auto to_set = detail::center_distances_to_set(set);
    std::vector<std::vector<double>> centers;
    centers.reserve(set.cells());
    for (std::size_t c = 0; c < set.cells(); ++c) centers.push_back(set.center(c));
    PorosityReport report;
    double needed = 1.0;
    for (std::size_t x = 0; x < set.cells(); ++x) {
        for (double r : radii) {
            double best = 0.0;
            for (std::size_t y = 0; y < set.cells(); ++y)
                if (detail::euclid(centers[x], centers[y]) <= r) best = std::max(best, to_set[y]);
            if (exceeds(r / constant, best, 0.0)) report.failures.push_back({x, r});
            needed = std::max(needed, best == 0.0 ? std::numeric_limits<double>::infinity() : r / best);
        }
    }
    report.porous = report.failures.empty();
    report.constant = needed;
    return report;
}

/// An axis-aligned cube given by its low corner (in cell coordinates) and its
/// side length in cells.
struct SubcubeSpec {
    std::vector<std::size_t> offset;
    std::size_t side = 0;
};

inline SubcubeSpec whole_cube(const GridSet& set) {
    return {std::vector<std::size_t>(set.dim(), 0), set.resolution()};
}

/// First (row-major) of the L^n child subcubes that contains no occupied
/// cell, or nothing when every child meets the set.
inline std::optional<std::size_t> subcube_witness(const GridSet& set, std::size_t arity,
                                                  const SubcubeSpec& cube) {
    if (arity < 2) throw DomainError("arity must be at least 2");
    if (cube.offset.size() != set.dim()) throw StructuralError("cube offset arity mismatch");
    if (cube.side < 1 || cube.side % arity != 0)
        throw StructuralError("cube side is not divisible by the arity");
    for (std::size_t axis = 0; axis < set.dim(); ++axis)
        if (cube.offset[axis] + cube.side > set.resolution())
            throw StructuralError("cube leaves the grid on axis " + std::to_string(axis));
    const std::size_t child_side = cube.side / arity;
    std::size_t children = 1;
    for (std::size_t axis = 0; axis < set.dim(); ++axis) children *= arity;
    for (std::size_t child = 0; child < children; ++child) {
        std::vector<std::size_t> low(set.dim());
        std::size_t rest = child;
        for (std::size_t axis = set.dim(); axis-- > 0;) {
            low[axis] = cube.offset[axis] + (rest % arity) * child_side;
            rest /= arity;
        }
        if (!detail::any_occupied_in_box(set, low, child_side)) return child;
    }
    return std::nullopt;
}

/// True iff every aligned L-adic cube at every level above single cells has a
/// child subcube disjoint from the set. Requires the resolution to be a
/// positive power of the arity.
inline bool porous_by_subdivision(const GridSet& set, std::size_t arity) {
    if (arity < 2) throw DomainError("arity must be at least 2");
    std::size_t levels = 0;
    std::size_t power = 1;
    while (power < set.resolution()) {
        power *= arity;
        ++levels;
    }
    if (power != set.resolution() || levels < 1)
        throw StructuralError("resolution is not a positive power of the arity");
    for (std::size_t level = 0, side = set.resolution(); level < levels; ++level, side /= arity) {
        std::vector<std::size_t> low(set.dim(), 0);
        for (;;) {
            if (!subcube_witness(set, arity, {low, side}).has_value()) return false;
            std::size_t axis = set.dim() - 1;
            for (;;) {
                low[axis] += side;
                if (low[axis] < set.resolution()) break;
                low[axis] = 0;
                if (axis == 0) goto next_level;
                --axis;
            }
        }
    next_level:;
    }
    return true;
}

struct CoverRecord {
    std::size_t arity;
    std::size_t depth;
    std::uint64_t count;
    std::uint64_t bound;
};

/// Number of depth-k subcubes of the unit cube meeting the set, together with
/// the ceiling (L^n - 1)^k that a subdivision-porous set can never exceed.
inline CoverRecord covering_count(const GridSet& set, std::size_t arity, std::size_t depth) {
    if (arity < 2) throw DomainError("arity must be at least 2");
    if (depth < 1) throw DomainError("depth must be at least 1");
    std::size_t blocks = 1;
    for (std::size_t k = 0; k < depth; ++k) {
        blocks *= arity;
        if (blocks > set.resolution()) throw ResolutionError("depth exceeds the resolution");
    }
    if (set.resolution() % blocks != 0)
        throw ResolutionError("depth does not align with the resolution");
    const std::size_t side = set.resolution() / blocks;
    std::size_t slots = 1;
    for (std::size_t axis = 0; axis < set.dim(); ++axis) slots *= blocks;
    std::vector<std::uint8_t> hit(slots, 0);
    for (std::size_t c = 0; c < set.cells(); ++c) {
        if (!set.occupied(c)) continue;
        const auto coords = set.unflatten(c);
        std::size_t slot = 0;
        for (std::size_t axis = 0; axis < set.dim(); ++axis)
            slot = slot * blocks + coords[axis] / side;
        hit[slot] = 1;
    }
    std::uint64_t count = 0;
    for (std::uint8_t h : hit) count += h;
    const std::uint64_t full = detail::checked_u64_power(arity, set.dim(), "subcube count");
    const std::uint64_t bound = detail::checked_u64_power(full - 1, depth, "covering bound");
    return {arity, depth, count, bound};
}

/// log(L^n - 1) / log L, the dimension ceiling forced on subdivision-porous
/// sets; strictly below n for every arity.
inline double dimension_upper_bound(std::size_t arity, std::size_t dim) {
    if (arity < 2) throw DomainError("arity must be at least 2");
    if (dim < 1) throw DomainError("dimension must be at least 1");
    const double full = std::pow(static_cast<double>(arity), static_cast<double>(dim));
    return std::log(full - 1.0) / std::log(static_cast<double>(arity));
}

struct BoxDimension {
    double slope = 0.0;
    std::vector<CoverRecord> records;
};

/// Least-squares slope of log(count_k) against k*log(L) for k = 1..k_max.
/// On exactly self-similar data the slope reproduces the similarity dimension
/// to rounding error.
inline BoxDimension box_dimension_estimate(const GridSet& set, std::size_t arity,
                                           std::size_t k_max) {
    if (k_max < 2) throw DomainError("at least two depths are needed for a slope");
    BoxDimension out;
    out.records.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) out.records.push_back(covering_count(set, arity, k));
    if (out.records.front().count == 0) throw DomainError("empty set has no box dimension");
    const double n = static_cast<double>(k_max);
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& rec : out.records) {
        mean_x += static_cast<double>(rec.depth) * std::log(static_cast<double>(arity));
        mean_y += std::log(static_cast<double>(rec.count));
    }
    mean_x /= n;
    mean_y /= n;
    double cov = 0.0;
    double var = 0.0;
    for (const auto& rec : out.records) {
        const double dx = static_cast<double>(rec.depth) * std::log(static_cast<double>(arity)) - mean_x;
        const double dy = std::log(static_cast<double>(rec.count)) - mean_y;
        cov += dx * dy;
        var += dx * dx;
    }
    out.slope = cov / var;
    return out;
}

}  // namespace metrikit
