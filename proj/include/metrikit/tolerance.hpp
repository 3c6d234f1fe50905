#pragma once

#include <algorithm>
#include <cmath>

namespace metrikit {

/// Fixed relative slack applied on top of caller-supplied absolute tolerances
/// in every axiom comparison. Power transforms round; the slack keeps that
/// rounding from surfacing as spurious violations.
inline constexpr double tau_rel = 1e-9;

/// lhs > rhs beyond the absolute tolerance plus relative slack.
inline bool exceeds(double lhs, double rhs, double tol) {
    return lhs > rhs + tol + tau_rel * std::max(std::abs(lhs), std::abs(rhs));
}

/// |a - b| beyond the absolute tolerance plus relative slack.
inline bool differs(double a, double b, double tol) {
    return std::abs(a - b) > tol + tau_rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace metrikit
