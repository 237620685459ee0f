#pragma once

#include <span>
#include <vector>

#include "loglab/field.hpp"
#include "loglab/grid.hpp"

namespace loglab::oned {

/// F(t) = ½ t² (log t² - 1), the antiderivative of t log t².
double F(double t);

/// Halfwidth b of the interval on which the positive solution of
/// -u'' = u log u² has sup norm m:
///   b = ∫₀ᵐ (2F(m) - 2F(t))^{-1/2} dt.
/// Adaptive Simpson on [0, m/2]; the endpoint singularity is removed on
/// [m/2, m] by t = m - s². Throws DomainError unless m > √e.
double time_map(double m, double quad_tol = 1e-12);

/// Inverse of time_map by bisection on m ∈ (√e, cap); the cap starts at 10
/// and doubles up to 1e6. Throws NumericalError if b is too small for the cap.
double solve_m_of_b(double b, double tol = 1e-12);

/// |u'(±b)| = √(2F(m)).
double boundary_slope(double m);

/// α ↦ α/(1-α) e^{-1/α}, increasing from 0 to ∞ on (0,1).
double alpha_criterion(double alpha);

/// The exponent α(b) ∈ (0,1) at which (1-α)|u'(b)|² = α e^{-1/α}; the
/// profile on (-b, b) is α-concave exactly for α ≤ α(b).
double alpha_star(double b, double tol = 1e-13);

/// Halfwidth b with alpha_star(b) = alpha.
double halfwidth_for_alpha(double alpha, double tol = 1e-12);

struct ShotProfile {
    /// Abscissa where the integrated profile crosses zero.
    double b_shoot = 0.0;
    /// |u'(b_shoot)|.
    double slope = 0.0;
    /// Samples from x = 0 to the last step before the crossing.
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> du;
    /// max |u'²/2 + F(u) - F(m)| over the samples.
    double energy_drift = 0.0;
    /// Point in (0, b_shoot) with u = 1, located on the Hermite interpolant.
    double x_star = 0.0;
    /// u'' at x_star from the Hermite interpolant of the samples.
    double d2u_at_x_star = 0.0;
};

/// Integrates u'' = -u log u², u(0) = m, u'(0) = 0 with classical RK4 and n
/// steps across [0, b]; the step is sized from a coarse pre-pass, and the
/// crossing is located on the cubic Hermite interpolant of the last step.
ShotProfile shoot_profile(double m, int n);

struct SqrtLogVerdict {
    bool pass = false;
    /// max over samples of (log(t²/m²) + 1) t²/m² - 1.
    double max_criterion = 0.0;
};

/// Pointwise criterion for concavity of -√(-log(u/m)) on a 1D profile.
double sqrtlog_criterion(double t, double m);
SqrtLogVerdict sqrtlog_concavity_check(std::span<const double> profile, double m);

/// Half profile on [0, b]: u(x) for the solution with sup norm m(b), from
/// RK4 with `steps` uniform steps, usable for Hermite interpolation.
class HalfProfile {
public:
    HalfProfile(double b, int steps = 20000, double tol = 1e-12);

    double b() const noexcept { return b_; }
    double m() const noexcept { return m_; }
    /// Monotone cubic interpolation, mirrored by evenness; 0 for |x| ≥ b.
    double operator()(double x) const;

private:
    double b_;
    double m_;
    double h_;
    std::vector<double> u_;
    std::vector<double> du_;
};

/// Product ∏ u_{b_i}(x_i) sampled on the box grid; the boundary trace is zero.
Field tensor_solution(std::span<const double> halfwidths, int resolution);
Field tensor_solution(const GridPtr& box_grid);

/// e^{N/2} e^{-|x|²/2} at one point.
double gausson(int ambient_dim, std::span<const double> x);
/// Gausson sampled at every node of a box grid (nonzero boundary values).
std::vector<double> gausson_samples(const Grid& grid);

}  // namespace loglab::oned
