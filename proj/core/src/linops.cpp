#include "loglab/linops.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "loglab/error.hpp"

namespace loglab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double laplacian_at(const Grid& g, std::span<const double> u, std::size_t node) {
    const MultiIndex idx = g.multi_index(node);
    if (g.radial()) {
        const double h = g.spacing(0);
        const int k = idx[0];
        const int N = g.ambient_dim();
        if (k == 0) return N * 2.0 * (u[1] - u[0]) / (h * h);
        const double r = g.coordinate(0, k);
        const double upp = (u[node + 1] - 2.0 * u[node] + u[node - 1]) / (h * h);
        const double up = (u[node + 1] - u[node - 1]) / (2.0 * h);
        return upp + (N - 1) / r * up;
    }
    double sum = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        const double h = g.spacing(a);
        const std::size_t s = g.stride(a);
        sum += (u[node + s] - 2.0 * u[node] + u[node - s]) / (h * h);
    }
    return sum;
}

}  // namespace

void apply_laplacian(FieldView u, std::span<double> out) {
    const Grid& g = *u.grid;
    if (u.values.size() != g.size() || out.size() != g.size()) {
        throw DomainError("apply_laplacian: size mismatch");
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t node : g.interior_nodes()) out[node] = laplacian_at(g, u.values, node);
}

std::vector<double> apply_laplacian(FieldView u) {
    std::vector<double> out(u.grid->size(), 0.0);
    apply_laplacian(u, out);
    return out;
}

DirichletLaplacian::DirichletLaplacian(GridPtr grid) : grid_(std::move(grid)) {
    const Grid& g = *grid_;
    std::vector<long> unknown_of(g.size(), -1);
    const auto interior = g.interior_nodes();
    for (std::size_t k = 0; k < interior.size(); ++k) unknown_of[interior[k]] = static_cast<long>(k);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(interior.size() * static_cast<std::size_t>(2 * g.dim() + 1));
    auto add = [&](long row, std::size_t col_node, double value) {
        const long col = unknown_of[col_node];
        if (col >= 0) triplets.emplace_back(row, col, value);
    };

    for (std::size_t k = 0; k < interior.size(); ++k) {
        const std::size_t node = interior[k];
        const long row = static_cast<long>(k);
        const MultiIndex idx = g.multi_index(node);
        if (g.radial()) {
            const double h = g.spacing(0);
            const int N = g.ambient_dim();
            if (idx[0] == 0) {
                add(row, node, 2.0 * N / (h * h));
                add(row, node + 1, -2.0 * N / (h * h));
            } else {
                const double r = g.coordinate(0, idx[0]);
                const double c = (N - 1) / (2.0 * h * r);
                add(row, node, 2.0 / (h * h));
                add(row, node + 1, -1.0 / (h * h) - c);
                add(row, node - 1, -1.0 / (h * h) + c);
            }
            continue;
        }
        double diag = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double h2 = g.spacing(a) * g.spacing(a);
            const std::size_t s = g.stride(a);
            diag += 2.0 / h2;
            add(row, node + s, -1.0 / h2);
            add(row, node - s, -1.0 / h2);
        }
        add(row, node, diag);
    }

    const auto n = static_cast<Eigen::Index>(interior.size());
    matrix_.resize(n, n);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();

    // Row sums of |a_ij|, computed on the transpose's columns.
    SparseMatrix rows = matrix_.transpose();
    for (Eigen::Index j = 0; j < rows.outerSize(); ++j) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(rows, j); it; ++it) sum += std::abs(it.value());
        norm_inf_ = std::max(norm_inf_, sum);
    }
}

Eigen::VectorXd DirichletLaplacian::restrict_to_unknowns(std::span<const double> nodal) const {
    const auto interior = grid_->interior_nodes();
    Eigen::VectorXd v(static_cast<Eigen::Index>(interior.size()));
    for (std::size_t k = 0; k < interior.size(); ++k) v[static_cast<Eigen::Index>(k)] = nodal[interior[k]];
    return v;
}

std::vector<double> DirichletLaplacian::to_nodal(const Eigen::VectorXd& unknowns) const {
    std::vector<double> nodal(grid_->size(), 0.0);
    const auto interior = grid_->interior_nodes();
    for (std::size_t k = 0; k < interior.size(); ++k) nodal[interior[k]] = unknowns[static_cast<Eigen::Index>(k)];
    return nodal;
}

struct SparseFactorization::Impl {
    std::optional<Eigen::SimplicialLDLT<SparseMatrix>> ldlt;
    std::optional<Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>> lu;
};

SparseFactorization::SparseFactorization(const SparseMatrix& a, bool symmetric) : impl_(std::make_unique<Impl>()) {
    if (symmetric) {
        impl_->ldlt.emplace(a);
        if (impl_->ldlt->info() == Eigen::Success) return;
        impl_->ldlt.reset();
    }
    impl_->lu.emplace();
    impl_->lu->analyzePattern(a);
    impl_->lu->factorize(a);
    if (impl_->lu->info() != Eigen::Success) {
        throw NumericalError("sparse factorization failed: " + impl_->lu->lastErrorMessage());
    }
}

SparseFactorization::~SparseFactorization() = default;
SparseFactorization::SparseFactorization(SparseFactorization&&) noexcept = default;
SparseFactorization& SparseFactorization::operator=(SparseFactorization&&) noexcept = default;

Eigen::VectorXd SparseFactorization::solve(const Eigen::VectorXd& rhs) const {
    if (impl_->ldlt) return impl_->ldlt->solve(rhs);
    return impl_->lu->solve(rhs);
}

PoissonSolver::PoissonSolver(GridPtr grid, int max_refinements)
    : laplacian_(std::move(grid)),
      factorization_(laplacian_.matrix(), laplacian_.symmetric()),
      max_refinements_(max_refinements) {}

Eigen::VectorXd PoissonSolver::solve_unknowns(const Eigen::VectorXd& rhs, double tol, double* rel_residual,
                                              int* refinements, bool* converged) const {
    if (!(tol > 0.0)) throw DomainError("solve_poisson: tol must be positive");
    const double rhs_norm = rhs.norm();
    const auto& a = laplacian_.matrix();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(rhs.size());
    double res_norm = 0.0;
    int steps = 0;
    bool ok = rhs_norm == 0.0;
    if (!ok) {
        v = factorization_.solve(rhs);
        for (;; ++steps) {
            const Eigen::VectorXd r = rhs - a * v;
            res_norm = r.norm();
            const double floor = 64.0 * kEps * laplacian_.operator_norm() * v.norm();
            if (res_norm <= std::max(tol * rhs_norm, floor)) {
                ok = true;
                break;
            }
            if (steps == max_refinements_) break;
            v += factorization_.solve(r);
        }
    }
    if (rel_residual) *rel_residual = rhs_norm == 0.0 ? 0.0 : res_norm / rhs_norm;
    if (refinements) *refinements = steps;
    if (converged) *converged = ok;
    return v;
}

PoissonResult PoissonSolver::solve(FieldView rhs, double tol) const {
    const Grid& g = laplacian_.grid();
    if (rhs.grid != &g && rhs.values.size() != g.size()) throw DomainError("solve_poisson: grid mismatch");
    double rel = 0.0;
    int steps = 0;
    bool ok = false;
    const Eigen::VectorXd v = solve_unknowns(laplacian_.restrict_to_unknowns(rhs.values), tol, &rel, &steps, &ok);
    return PoissonResult{Field(laplacian_.grid_ptr(), laplacian_.to_nodal(v)), rel, steps, ok};
}

PoissonResult solve_poisson(const Field& rhs, double tol) {
    return PoissonSolver(rhs.grid_ptr()).solve(rhs, tol);
}

double inner(const Grid& grid, std::span<const double> u, std::span<const double> v) {
    const auto w = grid.quadrature_weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += w[i] * u[i] * v[i];
    return sum;
}

Eigenpair principal_eigenpair(GridPtr grid, double tol, int max_iterations) {
    if (!(tol > 0.0)) throw DomainError("principal_eigenpair: tol must be positive");
    const PoissonSolver solver(grid);
    const auto& lap = solver.laplacian();
    const Grid& g = *grid;

    // Weights restricted to the unknowns make the Rayleigh-type quotient
    // consistent with the quadrature used everywhere else.
    const Eigen::VectorXd w = lap.restrict_to_unknowns(g.quadrature_weights());
    Eigen::VectorXd x = Eigen::VectorXd::Ones(w.size());
    double lambda = std::numeric_limits<double>::infinity();

    for (int it = 1; it <= max_iterations; ++it) {
        bool ok = false;
        Eigen::VectorXd y = solver.solve_unknowns(x, 1e-12, nullptr, nullptr, &ok);
        if (!ok) throw NumericalError("principal_eigenpair: inner Poisson solve did not converge");
        const double num = (w.array() * x.array() * x.array()).sum();
        const double den = (w.array() * x.array() * y.array()).sum();
        const double next = num / den;
        const double scale = y.cwiseAbs().maxCoeff();
        x = y / scale;
        if (std::abs(next - lambda) < tol) {
            lambda = next;
            if (x.sum() < 0) x = -x;
            x /= x.cwiseAbs().maxCoeff();
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (!(x[i] > 0.0)) {
                    throw NumericalError("principal_eigenpair: eigenvector is not strictly positive");
                }
            }
            const Eigen::VectorXd r = lap.matrix() * x - lambda * x;
            Field phi(grid, lap.to_nodal(x));
            return Eigenpair{lambda, std::move(phi), r.cwiseAbs().maxCoeff(), it};
        }
        lambda = next;
    }
    throw NumericalError("principal_eigenpair: no convergence after " + std::to_string(max_iterations) +
                         " iterations");
}

}  // namespace loglab
