#include <cmath>
#include <vector>

#include "doctest.h"
#include "loglab/error.hpp"
#include "loglab/oned.hpp"

#ifdef LOGLAB_HAVE_BOOST_QUADRATURE
#include <boost/math/quadrature/tanh_sinh.hpp>
#endif

using namespace loglab;

TEST_SUITE("oned") {
    TEST_CASE("antiderivative and boundary slope") {
        CHECK(oned::F(1.0) == doctest::Approx(-0.5));
        CHECK(oned::F(std::exp(0.5)) == doctest::Approx(0.0).scale(1.0));
        // 2F(e) = e^2 (2 - 1), so the slope at m = e is e.
        CHECK(oned::boundary_slope(std::exp(1.0)) == doctest::Approx(std::exp(1.0)));
    }

    TEST_CASE("sqrt-log criterion at reference points") {
        const double m = 3.0;
        CHECK(oned::sqrtlog_criterion(m, m) == doctest::Approx(0.0).scale(1.0));
        CHECK(oned::sqrtlog_criterion(m / std::exp(0.5), m) == doctest::Approx(-1.0));
        const std::vector<double> profile{0.5, 1.0, 2.0, 3.0};
        const oned::SqrtLogVerdict v = oned::sqrtlog_concavity_check(profile, m);
        CHECK(v.pass);
        CHECK(v.max_criterion <= 0.0);
    }

#ifdef LOGLAB_HAVE_BOOST_QUADRATURE
    TEST_CASE("time map matches tanh-sinh quadrature") {
        boost::math::quadrature::tanh_sinh<double> integrator;
        for (double m : {1.7, std::exp(1.0), 5.0, 40.0}) {
            const double Fm = oned::F(m);
            auto integrand = [&](double t, double tc) {
                // tc is m - t on the right half, which avoids cancellation.
                double gap = Fm - oned::F(t);
                if (t > 0.5 * m) {
                    const double d = tc;
                    // Second-order Taylor of F(m) - F(m - d) once the difference cancels.
                    gap = d < 1e-4 * m ? 2.0 * m * std::log(m) * d - (std::log(m) + 1.0) * d * d
                                       : Fm - oned::F(m - d);
                }
                return 1.0 / std::sqrt(2.0 * gap);
            };
            const double ref = integrator.integrate(integrand, 0.0, m);
            CHECK(oned::time_map(m) == doctest::Approx(ref).epsilon(1e-9));
        }
    }
#endif

    TEST_CASE("time map is decreasing and rejects small amplitudes") {
        double prev = HUGE_VAL;
        for (double m : {1.7, 2.0, 3.0, 10.0, 100.0}) {
            const double b = oned::time_map(m);
            CHECK(b < prev);
            prev = b;
        }
        CHECK_THROWS_AS(oned::time_map(1.6), DomainError);
        CHECK_THROWS_AS(oned::time_map(-1.0), DomainError);
    }

    TEST_CASE("amplitude inversion round trip") {
        for (double m : {1.7, 2.0, std::exp(1.0), 5.0, 50.0}) {
            const double b = oned::time_map(m);
            CHECK(oned::solve_m_of_b(b) == doctest::Approx(m).epsilon(1e-9));
        }
        CHECK_THROWS_AS(oned::solve_m_of_b(0.1), NumericalError);
    }

    TEST_CASE("shooting reproduces the time map") {
        const double m = 2.0;
        const oned::ShotProfile s = oned::shoot_profile(m, 100000);
        CHECK(s.b_shoot == doctest::Approx(oned::time_map(m)).epsilon(1e-8));
        CHECK(s.slope == doctest::Approx(oned::boundary_slope(m)).epsilon(1e-6));
        CHECK(s.energy_drift < 1e-10);
        CHECK(s.x_star > 0.0);
        CHECK(s.x_star < s.b_shoot);
        // u = 1 is the inflection point of -u'' = u log u^2.
        CHECK(std::abs(s.d2u_at_x_star) < 1e-4);
    }

    TEST_CASE("alpha criterion and alpha star") {
        double prev = 0.0;
        for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double c = oned::alpha_criterion(a);
            CHECK(c > prev);
            prev = c;
        }
        CHECK(oned::alpha_criterion(0.5) == doctest::Approx(std::exp(-2.0)));
        for (double a : {0.25, 0.5, 0.75}) {
            const double b = oned::halfwidth_for_alpha(a);
            CHECK(oned::alpha_star(b) == doctest::Approx(a).epsilon(1e-9));
            const double m = oned::solve_m_of_b(b);
            CHECK((1.0 - a) * 2.0 * oned::F(m) == doctest::Approx(a * std::exp(-1.0 / a)).epsilon(1e-8));
        }
        CHECK(oned::alpha_star(1.0) > oned::alpha_star(2.0));
    }

    TEST_CASE("half profile and tensor solution") {
        const double b = 1.5;
        const oned::HalfProfile p(b);
        CHECK(p(0.0) == doctest::Approx(p.m()));
        CHECK(p(b) == 0.0);
        CHECK(p(-0.7) == doctest::Approx(p(0.7)));
        const GridPtr g = make_grid(Domain::box({b, 1.0}), 21);
        const Field t = oned::tensor_solution(g);
        const oned::HalfProfile q(1.0);
        CHECK(t.sup_norm() == doctest::Approx(p.m() * q.m()).epsilon(1e-12));
    }

    TEST_CASE("Gausson values") {
        const std::vector<double> origin{0.0, 0.0, 0.0};
        CHECK(oned::gausson(3, origin) == doctest::Approx(std::exp(1.5)));
        const std::vector<double> x{1.0, 1.0};
        CHECK(oned::gausson(2, x) == doctest::Approx(1.0));
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 5);
        const auto s = oned::gausson_samples(*g);
        CHECK(s[0] == doctest::Approx(1.0));
    }
}
