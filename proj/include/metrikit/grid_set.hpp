#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace metrikit {

/// An occupancy mask over the unit cube [0,1]^n cut into resolution^n equal
/// cells. Cells are addressed flat in row-major order with axis 0 slowest.
class GridSet {
public:
    GridSet(std::size_t dim, std::size_t resolution, std::vector<std::uint8_t> mask)
        : dim_(dim), resolution_(resolution), mask_(std::move(mask)) {
        if (dim_ < 1) throw StructuralError("dimension must be at least 1");
        if (resolution_ < 1) throw StructuralError("resolution must be at least 1");
        cells_ = checked_power(resolution_, dim_);
        if (mask_.size() != cells_)
            throw StructuralError("mask size does not match resolution^dimension");
        for (std::uint8_t c : mask_)
            if (c > 1) throw StructuralError("mask cells must be 0 or 1");
    }

    static GridSet empty(std::size_t dim, std::size_t resolution) {
        return GridSet(dim, resolution, std::vector<std::uint8_t>(checked_power(resolution, dim), 0));
    }

    std::size_t dim() const { return dim_; }
    std::size_t resolution() const { return resolution_; }
    std::size_t cells() const { return cells_; }
    double cell_size() const { return 1.0 / static_cast<double>(resolution_); }

    bool occupied(std::size_t flat) const { return mask_[flat] != 0; }
    void set_occupied(std::size_t flat, bool value) { mask_[flat] = value ? 1 : 0; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    std::size_t occupied_count() const {
        std::size_t count = 0;
        for (std::uint8_t c : mask_) count += c;
        return count;
    }

    std::size_t flatten(const std::vector<std::size_t>& coords) const {
        if (coords.size() != dim_) throw StructuralError("coordinate arity mismatch");
        std::size_t flat = 0;
        for (std::size_t axis = 0; axis < dim_; ++axis) {
            if (coords[axis] >= resolution_)
                throw StructuralError("coordinate out of range on axis " + std::to_string(axis));
            flat = flat * resolution_ + coords[axis];
        }
        return flat;
    }

    std::vector<std::size_t> unflatten(std::size_t flat) const {
        std::vector<std::size_t> coords(dim_);
        for (std::size_t axis = dim_; axis-- > 0;) {
            coords[axis] = flat % resolution_;
            flat /= resolution_;
        }
        return coords;
    }

    /// Geometric center of a cell inside the unit cube.
    std::vector<double> center(std::size_t flat) const {
        const auto coords = unflatten(flat);
        std::vector<double> point(dim_);
        for (std::size_t axis = 0; axis < dim_; ++axis)
            point[axis] = (static_cast<double>(coords[axis]) + 0.5) * cell_size();
        return point;
    }

private:
    static std::size_t checked_power(std::size_t base, std::size_t exp) {
        std::size_t result = 1;
        for (std::size_t k = 0; k < exp; ++k) {
            if (base != 0 && result > (std::size_t{1} << 40) / base)
                throw ResourceError("grid would exceed the addressable cell budget");
            result *= base;
        }
        return result;
    }

    std::size_t dim_;
    std::size_t resolution_;
    std::vector<std::uint8_t> mask_;
    std::size_t cells_ = 0;
};

}  // namespace metrikit
