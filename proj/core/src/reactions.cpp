#include "loglab/reactions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "loglab/error.hpp"

namespace loglab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lane_emden_params(double q, double sigma) {
    if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("Lane-Emden exponent q must exceed 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("coupling sigma must be positive");
}

// t² log t² with the continuous extension 0 at t = 0.
double t2_log_t2(double t) { return t == 0.0 ? 0.0 : t * t * 2.0 * std::log(t); }

}  // namespace

Reaction Reaction::lane_emden(double q, double sigma) {
    require_lane_emden_params(q, sigma);
    return Reaction(ReactionKind::lane_emden, q, sigma);
}

Reaction Reaction::log_schrodinger() { return Reaction(ReactionKind::log_schrodinger, 0.0, 0.0); }

Reaction Reaction::dispersive_lane_emden(double q, double sigma) {
    require_lane_emden_params(q, sigma);
    return Reaction(ReactionKind::dispersive_lane_emden, q, sigma);
}

Reaction Reaction::dispersive_log() { return Reaction(ReactionKind::dispersive_log, 0.0, 0.0); }

double critical_exponent(int ambient_dim) {
    if (ambient_dim <= 2) return kInf;
    const double n = ambient_dim;
    return 2.0 * n / (n - 2.0) - 1.0;
}

void Reaction::validate_for_dimension(int ambient_dim) const {
    if (logarithmic()) return;
    if (!(q_ < critical_exponent(ambient_dim))) {
        std::ostringstream os;
        os << "exponent q=" << q_ << " is not below 2*-1=" << critical_exponent(ambient_dim) << " for N="
           << ambient_dim;
        throw DomainError(os.str());
    }
}

double Reaction::f(double t) const {
    if (!(t >= 0.0)) throw DomainError("reaction evaluated at negative t");
    switch (kind_) {
        case ReactionKind::lane_emden:
            return sigma_ * (std::pow(t, q_) - t);
        case ReactionKind::dispersive_lane_emden:
            return sigma_ * (t - std::pow(t, q_));
        case ReactionKind::log_schrodinger:
            return t == 0.0 ? 0.0 : t * 2.0 * std::log(t);
        case ReactionKind::dispersive_log:
            return t == 0.0 ? 0.0 : -t * 2.0 * std::log(t);
    }
    return 0.0;
}

double Reaction::f_prime(double t) const {
    if (!(t >= 0.0)) throw DomainError("reaction derivative evaluated at negative t");
    switch (kind_) {
        case ReactionKind::lane_emden:
            return sigma_ * (q_ * std::pow(t, q_ - 1.0) - 1.0);
        case ReactionKind::dispersive_lane_emden:
            return sigma_ * (1.0 - q_ * std::pow(t, q_ - 1.0));
        case ReactionKind::log_schrodinger:
        case ReactionKind::dispersive_log: {
            if (t == 0.0) throw DomainError("derivative of t log t² diverges at t = 0");
            const double d = 2.0 * std::log(t) + 2.0;
            return kind_ == ReactionKind::log_schrodinger ? d : -d;
        }
    }
    return 0.0;
}

double Reaction::F(double t) const {
    if (!(t >= 0.0)) throw DomainError("antiderivative evaluated at negative t");
    switch (kind_) {
        case ReactionKind::lane_emden:
            return sigma_ * (std::pow(t, q_ + 1.0) / (q_ + 1.0) - 0.5 * t * t);
        case ReactionKind::dispersive_lane_emden:
            return -sigma_ * (std::pow(t, q_ + 1.0) / (q_ + 1.0) - 0.5 * t * t);
        case ReactionKind::log_schrodinger:
            return 0.5 * (t2_log_t2(t) - t * t);
        case ReactionKind::dispersive_log:
            return -0.5 * (t2_log_t2(t) - t * t);
    }
    return 0.0;
}

std::string Reaction::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case ReactionKind::lane_emden:
            os << "lane_emden(q=" << q_ << ",sigma=" << sigma_ << ")";
            break;
        case ReactionKind::dispersive_lane_emden:
            os << "dispersive_lane_emden(q=" << q_ << ",sigma=" << sigma_ << ")";
            break;
        case ReactionKind::log_schrodinger:
            os << "log_schrodinger";
            break;
        case ReactionKind::dispersive_log:
            os << "dispersive_log";
            break;
    }
    return os.str();
}

Transform Transform::power(double alpha) {
    if (!std::isfinite(alpha) || alpha == 0.0 || alpha >= 1.0) {
        throw DomainError("power transform exponent must lie in (0,1) or be negative");
    }
    return Transform(TransformKind::power, alpha);
}

Transform Transform::log() { return Transform(TransformKind::log, 0.0); }

Transform Transform::sqrt_log(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("sqrt_log scale m must be positive");
    return Transform(TransformKind::sqrt_log, m);
}

Transform Transform::atanh_poly(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("atanh_poly exponent q must exceed 1");
    return Transform(TransformKind::atanh_poly, q);
}

Transform Transform::sqrt_one_minus_log() { return Transform(TransformKind::sqrt_one_minus_log, 0.0); }

Transform Transform::negated() const {
    Transform t = *this;
    t.negated_ = !negated_;
    return t;
}

bool Transform::increasing() const noexcept {
    bool inc = true;
    switch (kind_) {
        case TransformKind::power:
            inc = param_ > 0.0;
            break;
        case TransformKind::log:
        case TransformKind::sqrt_log:
            inc = true;
            break;
        case TransformKind::atanh_poly:
        case TransformKind::sqrt_one_minus_log:
            inc = false;
            break;
    }
    return negated_ ? !inc : inc;
}

double Transform::upper() const noexcept {
    switch (kind_) {
        case TransformKind::power:
        case TransformKind::log:
            return kInf;
        case TransformKind::sqrt_log:
            return param_;
        case TransformKind::atanh_poly:
            return std::pow(0.5 * (param_ + 1.0), 1.0 / (param_ - 1.0));
        case TransformKind::sqrt_one_minus_log:
            return 1.0;
    }
    return kInf;
}

bool Transform::upper_closed() const noexcept {
    return kind_ == TransformKind::sqrt_log || kind_ == TransformKind::atanh_poly;
}

bool Transform::valid(double t) const noexcept {
    if (!(t > lower())) return false;
    const double up = upper();
    return upper_closed() ? t <= up : t < up;
}

void Transform::require_valid(double t) const {
    if (!valid(t)) {
        std::ostringstream os;
        os.precision(17);
        os << describe() << ": t=" << t << " outside the validity interval";
        throw DomainError(os.str());
    }
}

double Transform::value(double t) const {
    require_valid(t);
    double v = 0.0;
    switch (kind_) {
        case TransformKind::power:
            v = std::pow(t, param_);
            break;
        case TransformKind::log:
            v = std::log(t);
            break;
        case TransformKind::sqrt_log:
            v = -std::sqrt(std::max(0.0, -std::log(t / param_)));
            break;
        case TransformKind::atanh_poly: {
            const double s2 = 1.0 - 2.0 / (param_ + 1.0) * std::pow(t, param_ - 1.0);
            v = std::atanh(std::sqrt(std::max(0.0, s2)));
            break;
        }
        case TransformKind::sqrt_one_minus_log:
            v = std::sqrt(1.0 - 2.0 * std::log(t));
            break;
    }
    return negated_ ? -v : v;
}

double Transform::d1(double t) const {
    require_valid(t);
    double d = 0.0;
    switch (kind_) {
        case TransformKind::power:
            d = param_ * std::pow(t, param_ - 1.0);
            break;
        case TransformKind::log:
            d = 1.0 / t;
            break;
        case TransformKind::sqrt_log: {
            const double L = -std::log(t / param_);
            d = L > 0.0 ? 1.0 / (2.0 * t * std::sqrt(L)) : kInf;
            break;
        }
        case TransformKind::atanh_poly: {
            const double p = param_ - 1.0;
            const double s2 = 1.0 - 2.0 / (param_ + 1.0) * std::pow(t, p);
            d = s2 > 0.0 ? -p / (2.0 * t * std::sqrt(s2)) : -kInf;
            break;
        }
        case TransformKind::sqrt_one_minus_log:
            d = -1.0 / (t * std::sqrt(1.0 - 2.0 * std::log(t)));
            break;
    }
    return negated_ ? -d : d;
}

double Transform::d2(double t) const {
    require_valid(t);
    double d = 0.0;
    switch (kind_) {
        case TransformKind::power:
            d = param_ * (param_ - 1.0) * std::pow(t, param_ - 2.0);
            break;
        case TransformKind::log:
            d = -1.0 / (t * t);
            break;
        case TransformKind::sqrt_log: {
            const double L = -std::log(t / param_);
            d = L > 0.0 ? (1.0 - 2.0 * L) / (4.0 * t * t * std::pow(L, 1.5)) : kInf;
            break;
        }
        case TransformKind::atanh_poly: {
            const double p = param_ - 1.0;
            const double a = 2.0 / (param_ + 1.0);
            const double tp = std::pow(t, p);
            const double s2 = 1.0 - a * tp;
            d = s2 > 0.0 ? p * (2.0 * s2 - a * p * tp) / (4.0 * t * t * std::pow(s2, 1.5)) : kInf;
            break;
        }
        case TransformKind::sqrt_one_minus_log: {
            const double g = 1.0 - 2.0 * std::log(t);
            d = (g - 1.0) / (t * t * std::pow(g, 1.5));
            break;
        }
    }
    return negated_ ? -d : d;
}

double Transform::inverse(double w) const {
    const double v = negated_ ? -w : w;
    double t = 0.0;
    switch (kind_) {
        case TransformKind::power:
            if (!(v > 0.0)) throw DomainError("power transform inverse needs a positive value");
            t = std::pow(v, 1.0 / param_);
            break;
        case TransformKind::log:
            t = std::exp(v);
            break;
        case TransformKind::sqrt_log:
            if (v > 0.0) throw DomainError("sqrt_log inverse needs a non-positive value");
            t = param_ * std::exp(-v * v);
            break;
        case TransformKind::atanh_poly: {
            if (v < 0.0) throw DomainError("atanh_poly inverse needs a non-negative value");
            const double s = std::tanh(v);
            t = std::pow((1.0 - s * s) * 0.5 * (param_ + 1.0), 1.0 / (param_ - 1.0));
            break;
        }
        case TransformKind::sqrt_one_minus_log:
            if (!(v > 1.0)) throw DomainError("sqrt_one_minus_log inverse needs a value above 1");
            t = std::exp(0.5 * (1.0 - v * v));
            break;
    }
    return t;
}

std::string Transform::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (negated_) os << "-";
    switch (kind_) {
        case TransformKind::power:
            os << "power(" << param_ << ")";
            break;
        case TransformKind::log:
            os << "log";
            break;
        case TransformKind::sqrt_log:
            os << "sqrt_log(" << param_ << ")";
            break;
        case TransformKind::atanh_poly:
            os << "atanh_poly(" << param_ << ")";
            break;
        case TransformKind::sqrt_one_minus_log:
            os << "sqrt_one_minus_log";
            break;
    }
    return os.str();
}

double transformed_rhs(const Reaction& reaction, const Transform& transform, double t, double grad_norm_sq) {
    const double d1 = transform.d1(t);
    const double d2 = transform.d2(t);
    if (d1 == 0.0 || !std::isfinite(d1) || !std::isfinite(d2)) {
        throw DomainError("transformed_rhs: psi' vanishes (phi' is zero or infinite) at t");
    }
    return d2 / (d1 * d1) * grad_norm_sq - reaction.f(t) * d1;
}

}  // namespace loglab
