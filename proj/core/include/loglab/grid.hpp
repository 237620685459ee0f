#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace loglab {

enum class DomainKind { interval, box, ball };

/// Convex computational domain: an interval (-b, b), a box prod(-b_i, b_i)
/// with d <= 3 axes, or a ball of radius R in R^N handled through its
/// radial profile.
class Domain {
public:
    static Domain interval(double halfwidth);
    static Domain box(std::vector<double> halfwidths);
    static Domain ball(double radius, int ambient_dim);

    DomainKind kind() const noexcept { return kind_; }
    int ambient_dim() const noexcept { return ambient_dim_; }

    /// Halfwidths of an interval or box; empty for balls.
    std::span<const double> halfwidths() const noexcept { return halfwidths_; }
    /// Radius of a ball; throws for other kinds.
    double radius() const;

    std::string describe() const;

    bool operator==(const Domain&) const = default;

private:
    Domain(DomainKind kind, std::vector<double> halfwidths, double radius, int ambient_dim)
        : kind_(kind), halfwidths_(std::move(halfwidths)), radius_(radius), ambient_dim_(ambient_dim) {}

    DomainKind kind_;
    std::vector<double> halfwidths_;
    double radius_ = 0.0;
    int ambient_dim_ = 1;
};

struct GeometrySummary {
    double diameter = 0.0;
    /// Circumradius over inradius.
    double eccentricity = 1.0;
};

GeometrySummary geometry_summary(const Domain& domain);

using MultiIndex = std::array<int, 3>;

/// Uniform node-centred grid on a Domain. Boxes use a tensor grid with the
/// first axis varying fastest; balls use a radial grid r_k = k R/(n-1) whose
/// last node is the only boundary node. Immutable after construction.
class Grid {
public:
    Grid(Domain domain, std::vector<int> resolution);

    const Domain& domain() const noexcept { return domain_; }
    bool radial() const noexcept { return domain_.kind() == DomainKind::ball; }
    /// Number of grid axes (1 for radial grids).
    int dim() const noexcept { return static_cast<int>(shape_.size()); }
    int ambient_dim() const noexcept { return domain_.ambient_dim(); }

    std::span<const int> shape() const noexcept { return shape_; }
    std::span<const double> spacing() const noexcept { return spacing_; }
    double spacing(int axis) const { return spacing_.at(static_cast<std::size_t>(axis)); }
    double min_spacing() const noexcept;
    double max_spacing() const noexcept;

    std::size_t size() const noexcept { return size_; }
    std::size_t interior_count() const noexcept { return interior_.size(); }
    std::span<const std::size_t> interior_nodes() const noexcept { return interior_; }

    MultiIndex multi_index(std::size_t node) const noexcept;
    std::size_t linear_index(const MultiIndex& idx) const noexcept;
    std::size_t stride(int axis) const noexcept { return strides_[static_cast<std::size_t>(axis)]; }

    /// Coordinate of index i along a grid axis (radius for radial grids).
    double coordinate(int axis, int i) const noexcept;
    /// Grid coordinates of a node; one entry per grid axis.
    std::array<double, 3> coordinates(std::size_t node) const noexcept;

    bool is_boundary(std::size_t node) const noexcept { return boundary_[node] != 0; }
    /// Smallest number of grid steps between a node and the boundary.
    int boundary_distance(std::size_t node) const noexcept;

    /// Trapezoidal weights for integrals over the physical domain; radial
    /// grids include the surface factor |S^{N-1}| r^{N-1}.
    std::span<const double> quadrature_weights() const noexcept { return weights_; }

private:
    Domain domain_;
    std::vector<int> shape_;
    std::vector<double> spacing_;
    std::array<std::size_t, 3> strides_{1, 0, 0};
    std::size_t size_ = 0;
    std::vector<unsigned char> boundary_;
    std::vector<std::size_t> interior_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Same resolution on every axis.
GridPtr make_grid(const Domain& domain, int resolution);
GridPtr make_grid(const Domain& domain, std::vector<int> resolution);

}  // namespace loglab
