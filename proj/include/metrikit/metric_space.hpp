#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "tolerance.hpp"

namespace metrikit {

namespace detail {

inline std::vector<std::string> index_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return labels;
}

}  // namespace detail

/// A finite point set with a fully materialized distance matrix.
/// Construction checks shape only; axiom verification is a separate,
/// explicit operation and entries are never silently repaired.
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> distances)
        : labels_(std::move(labels)), dist_(std::move(distances)), n_(labels_.size()) {
        if (n_ == 0) throw StructuralError("a space needs at least one point");
        if (dist_.size() != n_ * n_) throw StructuralError("distance matrix is not n by n");
    }

    static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> labels = {}) {
        const std::size_t n = rows.size();
        if (n == 0) throw StructuralError("a space needs at least one point");
        std::vector<double> flat;
        flat.reserve(n * n);
        for (const auto& row : rows) {
            if (row.size() != n) throw StructuralError("distance matrix is not n by n");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        if (labels.empty()) labels = detail::index_labels(n);
        return FiniteMetricSpace(std::move(labels), std::move(flat));
    }

    /// Distance matrix induced by a point cloud. The diagonal is exactly zero
    /// and each unordered pair is evaluated once, so symmetry holds bit for bit.
    template <typename Metric>
    static FiniteMetricSpace induced(const std::vector<std::vector<double>>& points, Metric metric,
                                     std::vector<std::string> labels = {}) {
        const std::size_t n = points.size();
        if (n == 0) throw StructuralError("a space needs at least one point");
        const std::size_t dim = points.front().size();
        for (const auto& p : points)
            if (p.size() != dim) throw StructuralError("points must share one dimension");
        std::vector<double> flat(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = metric(points[i], points[j]);
                flat[i * n + j] = d;
                flat[j * n + i] = d;
            }
        if (labels.empty()) labels = detail::index_labels(n);
        return FiniteMetricSpace(std::move(labels), std::move(flat));
    }

    std::size_t size() const { return n_; }
    double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& data() const { return dist_; }

    /// Same labels, different matrix. Used by entrywise transforms.
    FiniteMetricSpace with_distances(std::vector<double> distances) const {
        return FiniteMetricSpace(labels_, std::move(distances));
    }

private:
    std::vector<std::string> labels_;
    std::vector<double> dist_;
    std::size_t n_;
};

struct EuclideanMetric {
    double operator()(const std::vector<double>& a, const std::vector<double>& b) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double delta = a[k] - b[k];
            acc += delta * delta;
        }
        return std::sqrt(acc);
    }
};

struct ManhattanMetric {
    double operator()(const std::vector<double>& a, const std::vector<double>& b) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
        return acc;
    }
};

enum class ViolationKind { nonneg, identity, symmetry, triangle, ultra };

inline const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::nonneg: return "nonneg";
        case ViolationKind::identity: return "identity";
        case ViolationKind::symmetry: return "symmetry";
        case ViolationKind::triangle: return "triangle";
        case ViolationKind::ultra: return "ultra";
    }
    return "unknown";
}

struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> witness;
    double defect;
};

/// Outcome of an axiom scan. Both flags are always computed; the violation
/// list details only the variant that was asked for (triangle or ultra),
/// plus any entry-level and symmetry defects.
struct MetricReport {
    bool is_metric = false;
    bool is_ultrametric = false;
    std::vector<Violation> violations;
};

namespace detail {

inline void require_finite(const FiniteMetricSpace& s) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(s.distance(i, j)))
                throw InvalidDataError("non-finite distance entry at (" + std::to_string(i) +
                                       ", " + std::to_string(j) + ")");
}

/// Cheap (quadratic) sanity gate for operations whose contracts assume a
/// metric: finite entries, near-zero diagonal, positive off-diagonal,
/// symmetry. The cubic triangle scan stays in verify_metric.
inline void require_cheap_metric(const FiniteMetricSpace& s, const char* who) {
    require_finite(s);
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(s.distance(i, i)) > tau_rel)
            throw PreconditionError(std::string(who) + " has a nonzero self-distance at point " +
                                    std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!(s.distance(i, j) > 0.0))
                throw PreconditionError(std::string(who) +
                                        " has a nonpositive distance between points " +
                                        std::to_string(i) + " and " + std::to_string(j));
            if (differs(s.distance(i, j), s.distance(j, i), 0.0))
                throw PreconditionError(std::string(who) + " is not symmetric at points " +
                                        std::to_string(i) + " and " + std::to_string(j));
        }
    }
}

inline void scan_entries(const FiniteMetricSpace& s, double tol, std::vector<Violation>& out) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = s.distance(i, j);
            if (exceeds(0.0, d, tol)) {
                out.push_back({ViolationKind::nonneg, {i, j}, -d});
            } else if (i == j && exceeds(d, 0.0, tol)) {
                out.push_back({ViolationKind::identity, {i}, d});
            } else if (i != j && d <= 0.0) {
                // Distinct points must sit at strictly positive distance; a zero
                // here is a structural defect no tolerance can excuse.
                out.push_back({ViolationKind::identity, {i, j}, -d});
            }
        }
}

inline void scan_symmetry(const FiniteMetricSpace& s, double tol, std::vector<Violation>& out) {
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (differs(s.distance(i, j), s.distance(j, i), tol))
                out.push_back({ViolationKind::symmetry,
                               {i, j},
                               std::abs(s.distance(i, j) - s.distance(j, i))});
}

/// Scans ordered triples with x < z and y ranging over the remaining points.
/// Returns true when no defect was found; with `out` null it stops early.
template <typename Bound>
inline bool scan_triples(const FiniteMetricSpace& s, double tol, Bound bound, ViolationKind kind,
                         std::vector<Violation>* out) {
    const std::size_t n = s.size();
    bool clean = true;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t z = x + 1; z < n; ++z)
            for (std::size_t y = 0; y < n; ++y) {
                if (y == x || y == z) continue;
                const double lhs = s.distance(x, z);
                const double rhs = bound(s.distance(x, y), s.distance(y, z));
                if (exceeds(lhs, rhs, tol)) {
                    clean = false;
                    if (out == nullptr) return false;
                    out->push_back({kind, {x, y, z}, lhs - rhs});
                }
            }
    return clean;
}

inline double leg_sum(double a, double b) { return a + b; }
inline double leg_max(double a, double b) { return std::max(a, b); }

inline void require_tolerance(double tol) {
    if (!(tol >= 0.0) || !std::isfinite(tol))
        throw DomainError("tolerance must be a nonnegative real");
}

}  // namespace detail

inline MetricReport verify_metric(const FiniteMetricSpace& space, double tol) {
    detail::require_tolerance(tol);
    detail::require_finite(space);
    MetricReport report;
    detail::scan_entries(space, tol, report.violations);
    detail::scan_symmetry(space, tol, report.violations);
    const bool base_clean = report.violations.empty();
    detail::scan_triples(space, tol, detail::leg_sum, ViolationKind::triangle, &report.violations);
    report.is_metric = report.violations.empty();
    report.is_ultrametric =
        base_clean && detail::scan_triples(space, tol, detail::leg_max, ViolationKind::ultra, nullptr);
    return report;
}

inline MetricReport verify_ultrametric(const FiniteMetricSpace& space, double tol) {
    detail::require_tolerance(tol);
    detail::require_finite(space);
    MetricReport report;
    detail::scan_entries(space, tol, report.violations);
    detail::scan_symmetry(space, tol, report.violations);
    const bool base_clean = report.violations.empty();
    detail::scan_triples(space, tol, detail::leg_max, ViolationKind::ultra, &report.violations);
    report.is_ultrametric = report.violations.empty();
    report.is_metric =
        base_clean && detail::scan_triples(space, tol, detail::leg_sum, ViolationKind::triangle, nullptr);
    return report;
}

/// Entrywise power transform d -> d^q. Taking q <= 1 preserves the triangle
/// inequality; an ultrametric survives every positive q.
inline FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("exponent must be a positive real");
    detail::require_finite(space);
    for (double d : space.data())
        if (d < 0.0) throw PreconditionError("snowflake needs nonnegative distances");
    if (q == 1.0) return space;
    std::vector<double> powered;
    powered.reserve(space.data().size());
    for (double d : space.data()) powered.push_back(std::pow(d, q));
    return space.with_distances(std::move(powered));
}

/// (a^q + b^q)^(1/q), evaluated with the larger argument factored out so the
/// intermediate stays near 1 and the result dominates max(a, b) even after
/// rounding.
inline double qsum(double a, double b, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("exponent must be a positive real");
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("inputs must be nonnegative reals");
    const double m = std::max(a, b);
    if (m == 0.0) return 0.0;
    const double s = std::pow(a / m, q) + std::pow(b / m, q);
    return m * std::pow(s, 1.0 / q);
}

/// A pairing of two equal-sized index sets; image[i] is the partner of
/// point i in the second space.
struct Correspondence {
    std::vector<std::size_t> image;

    static Correspondence identity(std::size_t n) {
        Correspondence corr;
        corr.image.resize(n);
        std::iota(corr.image.begin(), corr.image.end(), std::size_t{0});
        return corr;
    }

    bool is_bijection(std::size_t n) const {
        if (image.size() != n) return false;
        std::vector<bool> seen(n, false);
        for (std::size_t v : image) {
            if (v >= n || seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }
};

/// Least C >= 1 with d1/C <= d2 <= C*d1 across all pairs under the given
/// pairing: the max over pairs of max(d2/d1, d1/d2). Exactly 1 on isometries.
inline double distortion(const FiniteMetricSpace& first, const FiniteMetricSpace& second,
                         const Correspondence& corr) {
    if (first.size() != second.size() || !corr.is_bijection(first.size()))
        throw StructuralError("correspondence must pair the two point sets one to one");
    if (first.size() < 2) throw DegenerateInputError("distortion needs at least two points");
    detail::require_cheap_metric(first, "first space");
    detail::require_cheap_metric(second, "second space");
    double worst = 1.0;
    const std::size_t n = first.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d1 = first.distance(i, j);
            const double d2 = second.distance(corr.image[i], corr.image[j]);
            worst = std::max(worst, std::max(d2 / d1, d1 / d2));
        }
    return worst;
}

}  // namespace metrikit
