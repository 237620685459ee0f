#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "loglab/grid.hpp"

namespace loglab {

/// Nodal values of a function on a Grid with zero Dirichlet trace.
class Field {
public:
    /// Zero field.
    explicit Field(GridPtr grid);
    /// Takes ownership of nodal values; they must be finite and vanish on
    /// the boundary.
    Field(GridPtr grid, std::vector<double> values);

    /// Copies values and overwrites the boundary trace with zeros.
    static Field with_zero_trace(GridPtr grid, std::vector<double> values);
    /// Samples fn at every node (grid coordinates; radius for radial grids),
    /// then zeroes the boundary trace.
    static Field from_function(GridPtr grid, const std::function<double(std::span<const double>)>& fn);

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t node) const noexcept { return values_[node]; }
    double& operator[](std::size_t node) noexcept { return values_[node]; }

    double sup_norm() const noexcept;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Non-owning view of nodal values on a grid. Unlike Field the boundary
/// trace is unconstrained, which lets operators act on sampled functions
/// such as the Gausson that do not vanish on the box boundary.
struct FieldView {
    const Grid* grid = nullptr;
    std::span<const double> values;

    FieldView(const Grid& g, std::span<const double> v) : grid(&g), values(v) {}
    FieldView(const Field& f) : grid(&f.grid()), values(f.values()) {}  // NOLINT(google-explicit-constructor)

    double operator[](std::size_t node) const noexcept { return values[node]; }
    double sup_norm() const noexcept;
};

/// Trapezoidal integral of nodal values.
double integrate(const Grid& grid, std::span<const double> values);
/// Trapezoidal integral of g(u) over the nodes.
double integrate(FieldView field, const std::function<double(double)>& g);

}  // namespace loglab
