#pragma once

#include <Eigen/Sparse>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "loglab/field.hpp"
#include "loglab/grid.hpp"

namespace loglab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete Laplacian Δ_h at the interior nodes of a view; boundary entries of
/// the result are zero. Second-order central stencil on boxes; on radial
/// grids u'' + (N-1)/r u' with Δu(0) = N u''(0).
std::vector<double> apply_laplacian(FieldView u);
/// Same, writing into out (size grid.size()).
void apply_laplacian(FieldView u, std::span<double> out);

/// Assembled -Δ_h acting on the interior unknowns (zero Dirichlet data).
class DirichletLaplacian {
public:
    explicit DirichletLaplacian(GridPtr grid);

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const SparseMatrix& matrix() const noexcept { return matrix_; }
    std::size_t unknowns() const noexcept { return grid_->interior_count(); }
    /// Row-sum norm of -Δ_h.
    double operator_norm() const noexcept { return norm_inf_; }
    /// True for box grids (the radial operator is not symmetric).
    bool symmetric() const noexcept { return !grid_->radial(); }

    Eigen::VectorXd restrict_to_unknowns(std::span<const double> nodal) const;
    std::vector<double> to_nodal(const Eigen::VectorXd& unknowns) const;

private:
    GridPtr grid_;
    SparseMatrix matrix_;
    double norm_inf_ = 0.0;
};

/// Factorization of a square sparse matrix: LDLᵀ for symmetric input, LU
/// otherwise (and as a fallback when LDLᵀ breaks down).
class SparseFactorization {
public:
    SparseFactorization(const SparseMatrix& a, bool symmetric);
    ~SparseFactorization();
    SparseFactorization(SparseFactorization&&) noexcept;
    SparseFactorization& operator=(SparseFactorization&&) noexcept;

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PoissonResult {
    Field solution;
    /// ‖-Δ_h v - rhs‖₂ / ‖rhs‖₂ (0 for a zero right-hand side).
    double relative_residual = 0.0;
    int refinements = 0;
    bool converged = false;
};

/// Reusable solver for -Δ_h v = rhs with zero Dirichlet data.
class PoissonSolver {
public:
    explicit PoissonSolver(GridPtr grid, int max_refinements = 8);

    const DirichletLaplacian& laplacian() const noexcept { return laplacian_; }

    /// The residual target is tol‖rhs‖₂, floored at the rounding level
    /// 64 ε ‖A‖∞ ‖v‖₂ that no backward-stable solve can beat.
    PoissonResult solve(FieldView rhs, double tol) const;
    Eigen::VectorXd solve_unknowns(const Eigen::VectorXd& rhs, double tol, double* rel_residual = nullptr,
                                   int* refinements = nullptr, bool* converged = nullptr) const;

private:
    DirichletLaplacian laplacian_;
    SparseFactorization factorization_;
    int max_refinements_;
};

PoissonResult solve_poisson(const Field& rhs, double tol);

struct Eigenpair {
    double lambda1 = 0.0;
    /// Sup-normalized, positive in the interior.
    Field phi1;
    double residual_sup = 0.0;
    int iterations = 0;
};

/// Principal Dirichlet eigenpair by inverse power iteration; converged when
/// successive eigenvalue estimates differ by less than tol. Throws
/// NumericalError after max_iterations.
Eigenpair principal_eigenpair(GridPtr grid, double tol, int max_iterations = 500);

/// Weighted inner product ⟨u, v⟩_h with the grid's quadrature weights.
double inner(const Grid& grid, std::span<const double> u, std::span<const double> v);

}  // namespace loglab
