#include "loglab/oned.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "loglab/error.hpp"

namespace loglab::oned {

namespace {

const double kSqrtE = std::sqrt(std::exp(1.0));

double f(double t) { return t == 0.0 ? 0.0 : t * 2.0 * std::log(t); }

// Cap on the amplitude search; m = 1e6 corresponds to b of about 0.31.
constexpr double kMaxAmplitude = 1e6;

// F(m) - F(m - d), with a Taylor expansion about m for small gaps d.
double delta_F(double m, double d) {
    if (std::abs(d) < 1e-3 * m) {
        const double f0 = f(m);
        const double f1 = 2.0 * std::log(m) + 2.0;
        const double f2 = 2.0 / m;
        const double f3 = -2.0 / (m * m);
        return d * (f0 - d * (f1 / 2.0 - d * (f2 / 6.0 - d * f3 / 24.0)));
    }
    return F(m) - F(m - d);
}

constexpr int kMaxEvaluations = 4000000;

struct SimpsonState {
    const std::function<double(double)>& fn;
    int evaluations = 0;
};

double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = st.fn(lm);
    const double frm = st.fn(rm);
    st.evaluations += 2;
    if (st.evaluations > kMaxEvaluations) throw NumericalError("adaptive_simpson: evaluation budget exhausted");
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (depth <= 0 || !std::isfinite(diff) || std::abs(diff) <= 15.0 * std::max(tol, floor)) return left + right + diff / 15.0;
    return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson with Richardson correction; the interval is pre-split so
// that narrow features are not missed by the first coarse estimate.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol) {
    constexpr int kPieces = 16;
    SimpsonState st{fn};
    double total = 0.0;
    const double w = (b - a) / kPieces;
    for (int i = 0; i < kPieces; ++i) {
        const double lo = a + i * w;
        const double hi = (i == kPieces - 1) ? b : lo + w;
        const double flo = fn(lo);
        const double fmid = fn(0.5 * (lo + hi));
        const double fhi = fn(hi);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += simpson_recurse(st, lo, hi, flo, fmid, fhi, whole, tol / kPieces, 48);
    }
    return total;
}

struct Rk4State {
    double u;
    double du;
};

Rk4State rk4_step(const Rk4State& s, double h) {
    auto acc = [](double u) { return -f(std::abs(u)) * (u < 0.0 ? -1.0 : 1.0); };
    const double k1u = s.du;
    const double k1v = acc(s.u);
    const double k2u = s.du + 0.5 * h * k1v;
    const double k2v = acc(s.u + 0.5 * h * k1u);
    const double k3u = s.du + 0.5 * h * k2v;
    const double k3v = acc(s.u + 0.5 * h * k2u);
    const double k4u = s.du + h * k3v;
    const double k4v = acc(s.u + h * k3u);
    return {s.u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            s.du + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

// Cubic Hermite on one step of length h, parameter tau ∈ [0, 1].
struct Hermite {
    double u0, d0, u1, d1, h;

    double value(double tau) const {
        const double t2 = tau * tau;
        const double t3 = t2 * tau;
        return (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + tau) * h * d0 + (-2 * t3 + 3 * t2) * u1 +
               (t3 - t2) * h * d1;
    }
    double slope(double tau) const {
        const double t2 = tau * tau;
        return ((6 * t2 - 6 * tau) * u0 + (3 * t2 - 4 * tau + 1) * h * d0 + (-6 * t2 + 6 * tau) * u1 +
                (3 * t2 - 2 * tau) * h * d1) /
               h;
    }
    double curvature(double tau) const {
        return ((12 * tau - 6) * u0 + (6 * tau - 4) * h * d0 + (-12 * tau + 6) * u1 + (6 * tau - 2) * h * d1) /
               (h * h);
    }
    // Root of value(tau) = level, assuming a sign change on [0, 1].
    double solve(double level) const {
        double lo = 0.0;
        double hi = 1.0;
        const bool rising = value(1.0) > value(0.0);
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((value(mid) < level) == rising) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
};

// Bisection for an increasing function g on [lo, hi] with g(lo) < target < g(hi).
template <class G>
double bisect_increasing(G g, double target, double lo, double hi, double rel_width) {
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rel_width * std::abs(mid)) break;
        if (g(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double F(double t) {
    if (t == 0.0) return 0.0;
    return 0.5 * t * t * (2.0 * std::log(t) - 1.0);
}

double time_map(double m, double quad_tol) {
    if (!(m > kSqrtE) || !std::isfinite(m)) throw DomainError("time_map: m must exceed sqrt(e)");
    if (!(quad_tol > 0.0)) throw DomainError("time_map: quad_tol must be positive");
    if (!(F(m) > 0.0)) throw NumericalError("time_map: m indistinguishable from sqrt(e)");
    const double half = 0.5 * m;
    const std::function<double(double)> outer = [m](double t) { return 1.0 / std::sqrt(2.0 * delta_F(m, m - t)); };
    const double fm = f(m);
    const std::function<double(double)> inner = [m, fm](double s) {
        if (s == 0.0) return 2.0 / std::sqrt(2.0 * fm);
        return 2.0 * s / std::sqrt(2.0 * delta_F(m, s * s));
    };
    return adaptive_simpson(outer, 0.0, half, 0.5 * quad_tol) +
           adaptive_simpson(inner, 0.0, std::sqrt(half), 0.5 * quad_tol);
}

double solve_m_of_b(double b, double tol) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("solve_m_of_b: b must be positive");
    const double quad_tol = std::min(1e-12, 0.1 * tol);
    double lo = kSqrtE;
    double hi = 10.0;
    while (time_map(hi, quad_tol) > b) {
        lo = hi;
        hi *= 2.0;
        if (hi > kMaxAmplitude) {
            std::ostringstream os;
            os << "solve_m_of_b: b=" << b << " needs m above the 1e6 cap";
            throw NumericalError(os.str());
        }
    }
    // time_map is decreasing in m; bisect -time_map.
    const auto neg_time_map = [&](double x) {
        if (!(x > lo)) return -HUGE_VAL;
        try {
            return -time_map(x, quad_tol);
        } catch (const NumericalError&) {
            return -HUGE_VAL;
        }
    };
    const double m = bisect_increasing(neg_time_map, -b, lo, hi, 4.0 * std::numeric_limits<double>::epsilon());
    if (!(std::abs(time_map(m, quad_tol) - b) <= tol)) {
        std::ostringstream os;
        os.precision(17);
        os << "solve_m_of_b: residual above tolerance at b=" << b;
        throw NumericalError(os.str());
    }
    return m;
}

double boundary_slope(double m) {
    if (!(m >= kSqrtE)) throw DomainError("boundary_slope: m must be at least sqrt(e)");
    return std::sqrt(std::max(0.0, 2.0 * F(m)));
}

double alpha_criterion(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw DomainError("alpha_criterion: alpha must lie in (0,1)");
    return alpha / (1.0 - alpha) * std::exp(-1.0 / alpha);
}

double alpha_star(double b, double tol) {
    const double slope = boundary_slope(solve_m_of_b(b));
    const double target = slope * slope;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (alpha_criterion(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double halfwidth_for_alpha(double alpha, double tol) {
    const double target = alpha_criterion(alpha);  // = 2F(m)
    double hi = 10.0;
    while (2.0 * F(hi) < target) {
        hi *= 2.0;
        if (hi > kMaxAmplitude) throw NumericalError("halfwidth_for_alpha: alpha too close to 1");
    }
    const double m = bisect_increasing([](double x) { return 2.0 * F(x); }, target, kSqrtE, hi,
                                       4.0 * std::numeric_limits<double>::epsilon());
    return time_map(m, std::min(1e-12, 0.1 * tol));
}

ShotProfile shoot_profile(double m, int n) {
    if (!(m > kSqrtE)) throw DomainError("shoot_profile: m must exceed sqrt(e)");
    if (n < 100) throw DomainError("shoot_profile: need at least 100 steps");

    // Coarse pass for the step size.
    constexpr double kCoarse = 1e-3;
    constexpr long kMaxCoarse = 50'000'000;
    Rk4State s{m, 0.0};
    double x = 0.0;
    long k = 0;
    for (; k < kMaxCoarse && s.u > 0.0; ++k) {
        s = rk4_step(s, kCoarse);
        x += kCoarse;
    }
    if (s.u > 0.0) throw NumericalError("shoot_profile: no zero crossing (is m above sqrt(e)?)");
    const double h = x / n;

    ShotProfile out;
    out.x.reserve(static_cast<std::size_t>(n) + 8);
    out.u.reserve(static_cast<std::size_t>(n) + 8);
    out.du.reserve(static_cast<std::size_t>(n) + 8);
    s = {m, 0.0};
    const double Fm = F(m);
    const long cap = 2L * n + 100;
    for (long i = 0; i <= cap; ++i) {
        out.x.push_back(i * h);
        out.u.push_back(s.u);
        out.du.push_back(s.du);
        out.energy_drift = std::max(out.energy_drift, std::abs(0.5 * s.du * s.du + F(s.u) - Fm));
        const Rk4State next = rk4_step(s, h);
        if (next.u <= 0.0) {
            const Hermite seg{s.u, s.du, next.u, next.du, h};
            const double tau = seg.solve(0.0);
            out.b_shoot = (i + tau) * h;
            out.slope = std::abs(seg.slope(tau));
            break;
        }
        s = next;
    }
    if (out.b_shoot == 0.0) throw NumericalError("shoot_profile: step cap reached before the zero crossing");

    for (std::size_t i = 0; i + 1 < out.u.size(); ++i) {
        if (out.u[i] >= 1.0 && out.u[i + 1] < 1.0) {
            const Hermite seg{out.u[i], out.du[i], out.u[i + 1], out.du[i + 1], h};
            const double tau = seg.solve(1.0);
            out.x_star = (static_cast<double>(i) + tau) * h;
            out.d2u_at_x_star = seg.curvature(tau);
            break;
        }
    }
    return out;
}

double sqrtlog_criterion(double t, double m) {
    const double r = t * t / (m * m);
    return (std::log(r) + 1.0) * r - 1.0;
}

SqrtLogVerdict sqrtlog_concavity_check(std::span<const double> profile, double m) {
    SqrtLogVerdict v;
    v.max_criterion = -std::numeric_limits<double>::infinity();
    for (double t : profile) {
        if (!(t > 0.0) || t > m) continue;
        v.max_criterion = std::max(v.max_criterion, sqrtlog_criterion(t, m));
    }
    v.pass = v.max_criterion <= 1e-12;
    return v;
}

HalfProfile::HalfProfile(double b, int steps, double tol) : b_(b), m_(solve_m_of_b(b, tol)), h_(b / steps) {
    if (steps < 10) throw DomainError("HalfProfile: too few steps");
    u_.reserve(static_cast<std::size_t>(steps) + 1);
    du_.reserve(static_cast<std::size_t>(steps) + 1);
    Rk4State s{m_, 0.0};
    for (int i = 0; i <= steps; ++i) {
        u_.push_back(s.u);
        du_.push_back(s.du);
        s = rk4_step(s, h_);
    }
    // Fritsch-Carlson limiter; with exact slopes it only acts on round-off.
    for (std::size_t i = 0; i + 1 < u_.size(); ++i) {
        const double secant = (u_[i + 1] - u_[i]) / h_;
        if (secant == 0.0) {
            du_[i] = du_[i + 1] = 0.0;
            continue;
        }
        const double a = du_[i] / secant;
        const double c = du_[i + 1] / secant;
        if (a < 0.0) du_[i] = 0.0;
        if (c < 0.0) du_[i + 1] = 0.0;
        const double r = a * a + c * c;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            du_[i] = tau * a * secant;
            du_[i + 1] = tau * c * secant;
        }
    }
}

double HalfProfile::operator()(double x) const {
    const double ax = std::abs(x);
    if (ax >= b_) return 0.0;
    const double pos = ax / h_;
    const auto i = std::min(static_cast<std::size_t>(pos), u_.size() - 2);
    const double tau = pos - static_cast<double>(i);
    const Hermite seg{u_[i], du_[i], u_[i + 1], du_[i + 1], h_};
    return std::max(0.0, seg.value(tau));
}

Field tensor_solution(const GridPtr& box_grid) {
    const Grid& g = *box_grid;
    if (g.radial()) throw DomainError("tensor_solution: needs an interval or box grid");
    std::vector<HalfProfile> profiles;
    for (double b : g.domain().halfwidths()) profiles.emplace_back(b);
    // Separable sampling: evaluate each axis once.
    std::vector<std::vector<double>> axis_values(static_cast<std::size_t>(g.dim()));
    for (int a = 0; a < g.dim(); ++a) {
        const int n = g.shape()[static_cast<std::size_t>(a)];
        auto& vals = axis_values[static_cast<std::size_t>(a)];
        vals.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) vals[static_cast<std::size_t>(i)] = profiles[static_cast<std::size_t>(a)](g.coordinate(a, i));
    }
    std::vector<double> values(g.size());
    for (std::size_t node = 0; node < g.size(); ++node) {
        const MultiIndex idx = g.multi_index(node);
        double v = 1.0;
        for (int a = 0; a < g.dim(); ++a) {
            v *= axis_values[static_cast<std::size_t>(a)][static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
        }
        values[node] = v;
    }
    return Field::with_zero_trace(box_grid, std::move(values));
}

Field tensor_solution(std::span<const double> halfwidths, int resolution) {
    return tensor_solution(make_grid(Domain::box(std::vector<double>(halfwidths.begin(), halfwidths.end())), resolution));
}

double gausson(int ambient_dim, std::span<const double> x) {
    if (ambient_dim < 1) throw DomainError("gausson: N must be at least 1");
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return std::exp(0.5 * ambient_dim - 0.5 * r2);
}

std::vector<double> gausson_samples(const Grid& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t node = 0; node < grid.size(); ++node) {
        const auto x = grid.coordinates(node);
        v[node] = gausson(grid.ambient_dim(), std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim())));
    }
    return v;
}

}  // namespace loglab::oned
