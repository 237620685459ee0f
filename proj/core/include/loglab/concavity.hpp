#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loglab/field.hpp"
#include "loglab/reactions.hpp"

namespace loglab {

/// Central-difference Hessian in ambient coordinates (d×d on boxes, N×N in
/// the frame (e_r, tangents) on radial grids). Needs at least two grid steps
/// to the boundary.
Eigen::MatrixXd hessian_at(FieldView u, std::size_t node);
/// Central-difference gradient in the same coordinates.
Eigen::VectorXd gradient_at(FieldView u, std::size_t node);

struct ConcavityOptions {
    /// Nodes with u < eps_floor_rel·‖u‖∞ are excluded.
    double eps_floor_rel = 1e-3;
    /// Nodes closer than layer_k grid steps to ∂Ω are excluded (minimum 2).
    int layer_k = 3;
    /// Strictness margin relative to the largest |eigenvalue| on the check set.
    double strict_margin_rel = 1e-8;
    /// Weak-hold tolerance relative to the same scale; a negative value
    /// selects h_max², the size of the O(h²) truncation error.
    double weak_tol_rel = -1.0;
    /// Optionally drop nodes with u > (1 - exclude_near_max_rel)‖u‖∞, for
    /// transforms that are singular at the maximum.
    double exclude_near_max_rel = 0.0;
};

enum class Verdict { holds_strictly, holds_weakly, fails };

std::string to_string(Verdict verdict);

struct ConcavityReport {
    std::string transform;
    /// True when concavity was checked (increasing φ), false for convexity.
    bool concavity = true;
    std::size_t check_set_size = 0;
    /// Largest eigenvalue of D²φ(u) for concavity checks, smallest for
    /// convexity checks, at the witness node.
    double extreme_eigenvalue = 0.0;
    std::size_t witness_node = 0;
    std::array<double, 3> witness_coordinates{0.0, 0.0, 0.0};
    double scale = 0.0;
    double strict_margin = 0.0;
    double weak_tolerance = 0.0;
    double eps_floor = 0.0;
    double layer_width = 0.0;
    Verdict verdict = Verdict::fails;
};

/// Interior nodes retained for concavity checks.
std::vector<std::size_t> check_set(FieldView u, const ConcavityOptions& options);

/// Checks D²φ(u) ≤ 0 (increasing φ) or ≥ 0 (decreasing φ) on the check set
/// using the chain rule on hessian_at and gradient_at. Throws DomainError on
/// an empty check set or when u leaves the validity interval of φ there.
ConcavityReport check_transform_concavity(FieldView u, const Transform& transform,
                                          const ConcavityOptions& options = {});

struct AlphaVerdict {
    double alpha = 0.0;
    Verdict verdict = Verdict::fails;
    double extreme_eigenvalue = 0.0;
};

struct AlphaSweepResult {
    /// Largest α whose power(α) report holds (weakly or strictly).
    std::optional<double> largest_passing;
    std::vector<AlphaVerdict> verdicts;
    /// False if some α passes while a smaller one fails (a numerical artifact,
    /// since α-concavity implies β-concavity for β < α).
    bool consistent = true;
};

AlphaSweepResult alpha_sweep(FieldView u, std::span<const double> alphas, const ConcavityOptions& options = {});

struct LevelCheck {
    double level = 0.0;
    std::size_t set_size = 0;
    std::size_t pairs = 0;
    std::size_t violations = 0;
    /// Largest (t - δ_h) - u(midpoint) over the sampled pairs (≤ 0 on success).
    double worst_deficit = 0.0;
};

struct QuasiConcavityReport {
    bool pass = true;
    double slack = 0.0;  // δ_h = 2h·max|Du|
    std::vector<LevelCheck> levels;
};

/// Seeded statistical test of convexity of the superlevel sets {u ≥ t}.
QuasiConcavityReport quasiconcavity_check(FieldView u, std::span<const double> levels, std::size_t sample_pairs,
                                          std::uint64_t seed);

struct LevelSetCurvature {
    double ii_min = 0.0;
    double ii_max = 0.0;
    /// Trace of the second fundamental form on the tangent space.
    double mean_curvature = 0.0;
    double grad_norm = 0.0;
    /// |Δ_h u - (⟨D²u Du, Du⟩/|Du|² + K|Du|)|.
    double identity_residual = 0.0;
};

/// Second fundamental form II(z) = ⟨D²u z, z⟩/|Du| of the level set through
/// a node. Throws DomainError if |Du| ≤ grad_floor.
LevelSetCurvature level_set_curvature(FieldView u, std::size_t node, double grad_floor = 1e-6);

/// φ(u) at every node where u lies in the validity interval, NaN elsewhere.
std::vector<double> transform_values(FieldView u, const Transform& transform);

/// max over the check set of |Δ_h w - b(w, D_h w)| for w = φ(u), where
/// b is transformed_rhs.
double transformed_equation_residual(FieldView u, const Reaction& reaction, const Transform& transform,
                                     const ConcavityOptions& options = {});

}  // namespace loglab
