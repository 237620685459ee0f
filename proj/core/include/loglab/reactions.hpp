#pragma once

#include <string>

namespace loglab {

enum class ReactionKind { lane_emden, log_schrodinger, dispersive_lane_emden, dispersive_log };

/// Reaction term f of -Δu = f(u), with f(0) = 0 for every family:
///   lane_emden             σ(t^q - t)
///   log_schrodinger        t log t²
///   dispersive_lane_emden  σ(t - t^q)
///   dispersive_log         -t log t²
class Reaction {
public:
    static Reaction lane_emden(double q, double sigma);
    static Reaction log_schrodinger();
    static Reaction dispersive_lane_emden(double q, double sigma);
    static Reaction dispersive_log();

    ReactionKind kind() const noexcept { return kind_; }
    /// Exponent q (0 for the logarithmic families).
    double q() const noexcept { return q_; }
    /// Coupling σ (0 for the logarithmic families).
    double sigma() const noexcept { return sigma_; }
    bool logarithmic() const noexcept {
        return kind_ == ReactionKind::log_schrodinger || kind_ == ReactionKind::dispersive_log;
    }
    bool dispersive() const noexcept {
        return kind_ == ReactionKind::dispersive_lane_emden || kind_ == ReactionKind::dispersive_log;
    }

    /// Throws DomainError unless q < 2* - 1 for the ambient dimension
    /// (2* = 2N/(N-2) when N >= 3, unbounded otherwise).
    void validate_for_dimension(int ambient_dim) const;

    double f(double t) const;
    /// Throws DomainError at t = 0 for the logarithmic families.
    double f_prime(double t) const;
    /// Antiderivative F(t) = ∫₀ᵗ f.
    double F(double t) const;

    std::string describe() const;

    bool operator==(const Reaction&) const = default;

private:
    Reaction(ReactionKind kind, double q, double sigma) : kind_(kind), q_(q), sigma_(sigma) {}

    ReactionKind kind_;
    double q_ = 0.0;
    double sigma_ = 0.0;
};

/// Upper end of the admissible exponent range, 2* - 1 (infinity for N <= 2).
double critical_exponent(int ambient_dim);

enum class TransformKind { power, log, sqrt_log, atanh_poly, sqrt_one_minus_log };

/// Concavity transformation φ with closed-form derivatives:
///   power(α)              t^α            α ∈ (0,1) or α < 0
///   log                   log t
///   sqrt_log(m)           -√(-log(t/m))  on (0, m]
///   atanh_poly(q)         atanh(√(1 - 2/(q+1) t^{q-1}))  on (0, ((q+1)/2)^{1/(q-1)}]
///   sqrt_one_minus_log    √(1 - log t²)  on (0, 1)
/// A negated transform is -φ. φ-concavity is checked for increasing φ and
/// φ-convexity for decreasing φ.
class Transform {
public:
    static Transform power(double alpha);
    static Transform log();
    static Transform sqrt_log(double m);
    static Transform atanh_poly(double q);
    static Transform sqrt_one_minus_log();

    Transform negated() const;

    TransformKind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return param_; }
    bool is_negated() const noexcept { return negated_; }
    bool increasing() const noexcept;

    /// Validity interval (lower, upper); the lower end is always open.
    double lower() const noexcept { return 0.0; }
    double upper() const noexcept;
    /// Whether the upper end itself is admissible for value().
    bool upper_closed() const noexcept;
    bool valid(double t) const noexcept;

    double value(double t) const;
    /// Derivatives; +-infinity at a closed upper endpoint where they diverge.
    double d1(double t) const;
    double d2(double t) const;
    /// ψ = φ⁻¹.
    double inverse(double w) const;

    std::string describe() const;

    bool operator==(const Transform&) const = default;

private:
    Transform(TransformKind kind, double param) : kind_(kind), param_(param) {}
    void require_valid(double t) const;

    TransformKind kind_;
    double param_ = 0.0;
    bool negated_ = false;
};

/// Right-hand side b(w, z) of the equation Δw = b(w, Dw) satisfied by
/// w = φ(u) when -Δu = f(u):
///   b = -(ψ''(w)|z|² + f(ψ(w)))/ψ'(w) = φ''(t)/φ'(t)² |z|² - f(t) φ'(t),
/// evaluated at t = ψ(w) with |z|² = grad_norm_sq.
double transformed_rhs(const Reaction& reaction, const Transform& transform, double t, double grad_norm_sq);

}  // namespace loglab
