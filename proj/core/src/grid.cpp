#include "loglab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "loglab/error.hpp"

namespace loglab {

namespace {

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be a positive finite number");
    }
}

double unit_sphere_area(int n) {
    // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace

Domain Domain::interval(double halfwidth) {
    require_positive(halfwidth, "interval halfwidth");
    return Domain(DomainKind::interval, {halfwidth}, 0.0, 1);
}

Domain Domain::box(std::vector<double> halfwidths) {
    if (halfwidths.empty() || halfwidths.size() > 3) {
        throw DomainError("box dimension must be 1, 2 or 3");
    }
    for (double b : halfwidths) require_positive(b, "box halfwidth");
    const int d = static_cast<int>(halfwidths.size());
    return Domain(DomainKind::box, std::move(halfwidths), 0.0, d);
}

Domain Domain::ball(double radius, int ambient_dim) {
    require_positive(radius, "ball radius");
    if (ambient_dim < 1) throw DomainError("ball ambient dimension must be >= 1");
    return Domain(DomainKind::ball, {}, radius, ambient_dim);
}

double Domain::radius() const {
    if (kind_ != DomainKind::ball) throw DomainError("radius() requested on a non-ball domain");
    return radius_;
}

std::string Domain::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case DomainKind::interval:
            os << "interval(" << halfwidths_[0] << ")";
            break;
        case DomainKind::box:
            os << "box(";
            for (std::size_t i = 0; i < halfwidths_.size(); ++i) os << (i ? "," : "") << halfwidths_[i];
            os << ")";
            break;
        case DomainKind::ball:
            os << "ball(R=" << radius_ << ",N=" << ambient_dim_ << ")";
            break;
    }
    return os.str();
}

GeometrySummary geometry_summary(const Domain& domain) {
    if (domain.kind() == DomainKind::ball) {
        return {2.0 * domain.radius(), 1.0};
    }
    const auto b = domain.halfwidths();
    const double sum_sq = std::inner_product(b.begin(), b.end(), b.begin(), 0.0);
    const double circumradius = std::sqrt(sum_sq);
    const double inradius = *std::min_element(b.begin(), b.end());
    return {2.0 * circumradius, circumradius / inradius};
}

Grid::Grid(Domain domain, std::vector<int> resolution) : domain_(std::move(domain)) {
    const int axes = radial() ? 1 : static_cast<int>(domain_.halfwidths().size());
    if (resolution.size() == 1 && axes > 1) resolution.assign(static_cast<std::size_t>(axes), resolution[0]);
    if (static_cast<int>(resolution.size()) != axes) {
        throw DomainError("resolution must give one node count per axis");
    }
    for (int n : resolution) {
        if (n < 3) throw DomainError("resolution must be at least 3 nodes per axis");
    }
    shape_ = std::move(resolution);

    size_ = 1;
    for (int a = 0; a < axes; ++a) {
        strides_[static_cast<std::size_t>(a)] = size_;
        size_ *= static_cast<std::size_t>(shape_[static_cast<std::size_t>(a)]);
        const double extent = radial() ? domain_.radius() : 2.0 * domain_.halfwidths()[static_cast<std::size_t>(a)];
        spacing_.push_back(extent / (shape_[static_cast<std::size_t>(a)] - 1));
    }

    boundary_.assign(size_, 0);
    weights_.assign(size_, 1.0);
    for (std::size_t node = 0; node < size_; ++node) {
        const MultiIndex idx = multi_index(node);
        bool on_boundary = false;
        double w = 1.0;
        for (int a = 0; a < axes; ++a) {
            const int n = shape_[static_cast<std::size_t>(a)];
            const int i = idx[static_cast<std::size_t>(a)];
            const bool end = (i == 0 || i == n - 1);
            if (radial()) {
                on_boundary = on_boundary || (i == n - 1);
            } else {
                on_boundary = on_boundary || end;
            }
            w *= spacing_[static_cast<std::size_t>(a)] * (end ? 0.5 : 1.0);
        }
        if (radial()) {
            const int N = ambient_dim();
            const double r = coordinate(0, idx[0]);
            w *= unit_sphere_area(N) * (N == 1 ? 1.0 : std::pow(r, N - 1));
        }
        boundary_[node] = on_boundary ? 1 : 0;
        weights_[node] = w;
        if (!on_boundary) interior_.push_back(node);
    }
}

double Grid::min_spacing() const noexcept { return *std::min_element(spacing_.begin(), spacing_.end()); }
double Grid::max_spacing() const noexcept { return *std::max_element(spacing_.begin(), spacing_.end()); }

MultiIndex Grid::multi_index(std::size_t node) const noexcept {
    MultiIndex idx{0, 0, 0};
    for (int a = 0; a < dim(); ++a) {
        const auto n = static_cast<std::size_t>(shape_[static_cast<std::size_t>(a)]);
        idx[static_cast<std::size_t>(a)] = static_cast<int>(node % n);
        node /= n;
    }
    return idx;
}

std::size_t Grid::linear_index(const MultiIndex& idx) const noexcept {
    std::size_t node = 0;
    for (int a = 0; a < dim(); ++a) {
        node += static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]) * strides_[static_cast<std::size_t>(a)];
    }
    return node;
}

double Grid::coordinate(int axis, int i) const noexcept {
    const double h = spacing_[static_cast<std::size_t>(axis)];
    if (radial()) return i * h;
    const double b = domain_.halfwidths()[static_cast<std::size_t>(axis)];
    const int last = shape_[static_cast<std::size_t>(axis)] - 1;
    // Integer numerator keeps the grid exactly symmetric with x = 0 on odd grids.
    return static_cast<double>(2 * i - last) * b / static_cast<double>(last);
}

std::array<double, 3> Grid::coordinates(std::size_t node) const noexcept {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    const MultiIndex idx = multi_index(node);
    for (int a = 0; a < dim(); ++a) {
        x[static_cast<std::size_t>(a)] = coordinate(a, idx[static_cast<std::size_t>(a)]);
    }
    return x;
}

int Grid::boundary_distance(std::size_t node) const noexcept {
    const MultiIndex idx = multi_index(node);
    if (radial()) return shape_[0] - 1 - idx[0];
    int dist = shape_[0];
    for (int a = 0; a < dim(); ++a) {
        const int n = shape_[static_cast<std::size_t>(a)];
        const int i = idx[static_cast<std::size_t>(a)];
        dist = std::min({dist, i, n - 1 - i});
    }
    return dist;
}

GridPtr make_grid(const Domain& domain, int resolution) {
    return std::make_shared<const Grid>(domain, std::vector<int>{resolution});
}

GridPtr make_grid(const Domain& domain, std::vector<int> resolution) {
    return std::make_shared<const Grid>(domain, std::move(resolution));
}

}  // namespace loglab
