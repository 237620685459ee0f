#include "loglab/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loglab/error.hpp"

namespace loglab {

namespace {

double sup_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw DomainError("Field requires a grid");
    values_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw DomainError("Field requires a grid");
    if (values_.size() != grid_->size()) throw DomainError("Field value count does not match grid size");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw DomainError("Field values must be finite");
        if (grid_->is_boundary(i) && values_[i] != 0.0) {
            throw DomainError("Field boundary trace must be zero (node " + std::to_string(i) + ")");
        }
    }
}

Field Field::with_zero_trace(GridPtr grid, std::vector<double> values) {
    if (!grid) throw DomainError("Field requires a grid");
    if (values.size() != grid->size()) throw DomainError("Field value count does not match grid size");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (grid->is_boundary(i)) values[i] = 0.0;
    }
    return Field(std::move(grid), std::move(values));
}

Field Field::from_function(GridPtr grid, const std::function<double(std::span<const double>)>& fn) {
    std::vector<double> values(grid->size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto x = grid->coordinates(i);
        values[i] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(grid->dim())));
    }
    return with_zero_trace(std::move(grid), std::move(values));
}

double Field::sup_norm() const noexcept { return sup_abs(values_); }

double FieldView::sup_norm() const noexcept { return sup_abs(values); }

double integrate(const Grid& grid, std::span<const double> values) {
    const auto w = grid.quadrature_weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += w[i] * values[i];
    return sum;
}

double integrate(FieldView field, const std::function<double(double)>& g) {
    const auto w = field.grid->quadrature_weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < field.values.size(); ++i) sum += w[i] * g(field.values[i]);
    return sum;
}

}  // namespace loglab
