#pragma once

#include <span>
#include <string>
#include <vector>

#include "loglab/field.hpp"
#include "loglab/linops.hpp"
#include "loglab/reactions.hpp"

namespace loglab {

struct NewtonOptions {
    /// Relative residual target: success iff ‖G(u)‖∞ ≤ tol·max(1, ‖u‖∞)
    /// (floored at the rounding level of evaluating G).
    double tol = 1e-10;
    int max_iterations = 100;
    int max_halvings = 30;
    double backtrack = 0.5;
    /// Lower clamp for f'(u) in the Jacobian only.
    double jacobian_floor = -1e6;
    /// Sup norms below this count as convergence to u ≡ 0.
    double trivial_threshold = 1e-6;
};

enum class SolveStatus { converged, max_iterations, trivial_solution, line_search_failed };

std::string to_string(SolveStatus status);

struct SolveResult {
    Field field;
    double residual_sup = 0.0;
    int newton_iters = 0;
    double sup_norm = 0.0;
    double energy = 0.0;
    double nehari_residual = 0.0;
    SolveStatus status = SolveStatus::max_iterations;
    /// Absolute residual threshold that decided convergence.
    double residual_threshold = 0.0;

    bool converged() const noexcept { return status == SolveStatus::converged; }
};

/// ‖-Δ_h u - f(u)‖∞ over interior nodes, evaluated without any clamping.
double residual_sup(FieldView u, const Reaction& reaction);
// Residual over the core region {u >= floor_rel * sup u}. Near the boundary the
// log nonlinearity makes the stencil truncation error O(h) rather than O(h^2).
double residual_sup(FieldView u, const Reaction& reaction, double floor_rel);

/// Discrete Dirichlet form: squared forward differences summed over grid
/// edges, so that it equals ⟨-Δ_h u, u⟩_h for zero boundary data.
double dirichlet_integral(FieldView u);

/// J(u) = ½∫|Du|² - ∫F(u).
double energy(FieldView u, const Reaction& reaction);

/// ⟨J'(u), u⟩ = ⟨-Δ_h u, u⟩_h - ⟨f(u), u⟩_h with the discrete operator, so
/// that it is bounded by the Newton residual.
double nehari_residual(FieldView u, const Reaction& reaction);

/// Nehari-scaled multiple of φ₁. Lane-Emden uses
/// t̄ = [(1 + λ₁/σ)‖φ₁‖₂²/‖φ₁‖_{q+1}^{q+1}]^{1/(q-1)}; the other families
/// bisect the scalar Nehari condition for c·φ₁. Throws NumericalError when
/// no scaling exists (no sign change).
Field initial_guess(const Eigenpair& eigen, const Reaction& reaction);
Field initial_guess(const GridPtr& grid, const Reaction& reaction);

/// Scalar Nehari function g(c) = ⟨-Δ_h cφ, cφ⟩_h - ⟨f(cφ), cφ⟩_h divided by c².
double nehari_fiber(const Field& phi, const Reaction& reaction, double c);

/// Damped Newton for -Δ_h u = f(u), u = 0 on the boundary.
SolveResult newton_solve(const Reaction& reaction, const Field& guess, const NewtonOptions& options = {});

enum class SigmaRuleKind { fixed, log_path };

struct SigmaRule {
    SigmaRuleKind kind = SigmaRuleKind::fixed;
    double sigma = 1.0;

    static SigmaRule fixed(double sigma) { return {SigmaRuleKind::fixed, sigma}; }
    /// σ = 2/(q-1).
    static SigmaRule log_path() { return {SigmaRuleKind::log_path, 0.0}; }
    double sigma_for(double q) const;
    std::string describe() const;
};

struct BranchPoint {
    double q = 0.0;
    double sigma = 0.0;
    SolveResult result;
};

struct Branch {
    SigmaRule rule;
    double lambda1 = 0.0;
    std::vector<BranchPoint> points;
    bool complete = false;
    std::string failure;
};

/// Steps per decade of q-1 used by the geometric schedule default.
inline constexpr int kStepsPerDecade = 12;

/// q values with q-1 geometrically spaced from q_hi-1 to q_lo-1 (steps+1 points).
std::vector<double> geometric_schedule(double q_hi, double q_lo, int steps);
int default_branch_steps(double q_hi, double q_lo);

/// Lane-Emden solves along a monotone q schedule. Each solve is warm-started
/// from the previous field, rescaled by the ratio of the predicted sup norms
/// (1 + λ₁/σ)^{1/(q-1)}. Stops at the first failure and returns the partial
/// branch.
Branch continuation_branch(const GridPtr& grid, std::span<const double> q_schedule, SigmaRule rule,
                           const NewtonOptions& options = {});
Branch continuation_branch(const GridPtr& grid, double q_hi, double q_lo, int steps, SigmaRule rule,
                           const NewtonOptions& options = {});

struct PohozaevReport {
    double sup_norm = 0.0;
    /// e^{N/4}.
    double threshold = 0.0;
    bool pass = false;
};

PohozaevReport pohozaev_check(const SolveResult& result, const Domain& domain);

/// Upper bound for the ground-state level c_{q,σ} obtained from a test
/// function φ (right-hand side of the energy estimate). Throws DomainError
/// unless ∫φ² > (1-q)/2 ∫φ² log φ² and φ ≢ 0.
double energy_upper_bound(double q, double sigma, FieldView test_field);

/// q → 1⁺ limit of the bound along σ = 2/(q-1):
/// ‖φ‖₂²/2 · exp(‖Dφ‖₂²/‖φ‖₂²) · exp(-∫φ² log φ²/‖φ‖₂²).
double energy_upper_bound_log_limit(FieldView test_field);

}  // namespace loglab
