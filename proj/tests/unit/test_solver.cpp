#include <cmath>

#include "doctest.h"
#include "loglab/error.hpp"
#include "loglab/oned.hpp"
#include "loglab/solver.hpp"

using namespace loglab;

TEST_SUITE("solver") {
    TEST_CASE("Lane-Emden initial guess lies on the Nehari fiber") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 41);
        const Eigenpair e = principal_eigenpair(g, 1e-13);
        const Reaction r = Reaction::lane_emden(2.5, 1.5);
        // Oracle: t^{q-1} = (||D phi||^2 + sigma ||phi||^2) / (sigma ||phi||_{q+1}^{q+1}), ||D phi||^2 = lambda ||phi||^2.
        const double l2 = integrate(e.phi1, [](double t) { return t * t; });
        const double lq = integrate(e.phi1, [](double t) { return std::pow(t, 3.5); });
        const double tbar = std::pow((e.lambda1 * l2 + 1.5 * l2) / (1.5 * lq), 1.0 / 1.5);
        const Field guess = initial_guess(e, r);
        CHECK(guess.sup_norm() == doctest::Approx(tbar).epsilon(1e-12));
        CHECK(std::abs(nehari_fiber(e.phi1, r, tbar)) < 1e-9 * l2 * e.lambda1);
    }

    TEST_CASE("log initial guess bisects the Nehari fiber") {
        const GridPtr g = make_grid(Domain::interval(1.0), 101);
        const Eigenpair e = principal_eigenpair(g, 1e-13);
        const Field guess = initial_guess(e, Reaction::log_schrodinger());
        CHECK(std::abs(nehari_fiber(e.phi1, Reaction::log_schrodinger(), guess.sup_norm())) < 1e-9);
    }

    TEST_CASE("Lane-Emden solve converges quadratically and satisfies the identities") {
        const GridPtr g = make_grid(Domain::interval(1.0), 401);
        const Reaction r = Reaction::lane_emden(3.0, 1.0);
        const SolveResult s = newton_solve(r, initial_guess(g, r));
        REQUIRE(s.converged());
        CHECK(s.newton_iters < 15);
        CHECK(s.residual_sup <= s.residual_threshold);
        CHECK(residual_sup(s.field, r) == doctest::Approx(s.residual_sup));
        CHECK(std::abs(s.nehari_residual) < 1e-8);
        const double neq = (0.5 - 0.25) * integrate(s.field, [](double t) { return t * t * t * t; });
        CHECK(s.energy == doctest::Approx(neq).epsilon(1e-8));
        CHECK(s.sup_norm > 1.0);  // a-priori bound ||u||^{q-1} > 1
    }

    TEST_CASE("log solve on a square agrees with the tensor product at second order") {
        auto diff = [](int n) {
            const GridPtr g = make_grid(Domain::box({1.0, 1.0}), n);
            const Reaction r = Reaction::log_schrodinger();
            const SolveResult s = newton_solve(r, initial_guess(g, r));
            REQUIRE(s.converged());
            const Field t = oned::tensor_solution(g);
            double d = 0.0;
            for (std::size_t i = 0; i < g->size(); ++i) d = std::max(d, std::abs(s.field[i] - t[i]));
            return d;
        };
        const double d1 = diff(41);
        const double d2 = diff(81);
        CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1));
    }

    TEST_CASE("dispersive Lane-Emden below lambda1 has only the trivial solution") {
        const GridPtr g = make_grid(Domain::interval(1.0), 101);
        const Eigenpair e = principal_eigenpair(g, 1e-13);
        const Reaction r = Reaction::dispersive_lane_emden(2.0, 0.5 * e.lambda1);
        CHECK_THROWS_AS(initial_guess(e, r), NumericalError);
        const SolveResult s = newton_solve(r, e.phi1);
        CHECK(s.status == SolveStatus::trivial_solution);
    }

    TEST_CASE("newton rejects invalid inputs") {
        const GridPtr g = make_grid(Domain::interval(1.0), 11);
        std::vector<double> v(g->size(), 0.0);
        v[5] = -1.0;
        CHECK_THROWS_AS(newton_solve(Reaction::log_schrodinger(), Field(g, v)), DomainError);
        NewtonOptions o;
        o.tol = 0.0;
        CHECK_THROWS_AS(newton_solve(Reaction::log_schrodinger(), Field(g), o), DomainError);
    }

    TEST_CASE("geometric schedules and sigma rules") {
        const auto s = geometric_schedule(1.5, 1.01, 10);
        CHECK(s.size() == 11);
        CHECK(s.front() == 1.5);
        CHECK(s.back() == 1.01);
        for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
        CHECK(SigmaRule::log_path().sigma_for(1.1) == doctest::Approx(20.0));
        CHECK(SigmaRule::fixed(3.0).sigma_for(1.1) == 3.0);
        CHECK(default_branch_steps(1.1, 1.01) >= kStepsPerDecade);
    }

    TEST_CASE("fixed-sigma branch approaches the eigenvalue limit") {
        const GridPtr g = make_grid(Domain::interval(1.0), 201);
        const std::vector<double> qs{2.0, 1.5, 1.2};
        const Branch b = continuation_branch(g, qs, SigmaRule::fixed(1.0));
        REQUIRE(b.complete);
        REQUIRE(b.points.size() == 3);
        double prev = HUGE_VAL;
        for (const auto& p : b.points) {
            const double err = std::abs(std::pow(p.result.sup_norm, p.q - 1.0) - (1.0 + b.lambda1));
            CHECK(err < prev);
            prev = err;
        }
        const std::vector<double> bad{1.5, 1.2, 1.3};
        CHECK_THROWS_AS(continuation_branch(g, bad, SigmaRule::fixed(1.0)), DomainError);
    }

    TEST_CASE("Pohozaev threshold on a square") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 41);
        const Reaction r = Reaction::log_schrodinger();
        const SolveResult s = newton_solve(r, initial_guess(g, r));
        const PohozaevReport p = pohozaev_check(s, g->domain());
        CHECK(p.threshold == doctest::Approx(std::exp(0.5)));
        CHECK(p.pass);
    }

    TEST_CASE("energy upper bound dominates the ground state and has the log limit") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 41);
        const Eigenpair e = principal_eigenpair(g, 1e-13);
        const Reaction r = Reaction::lane_emden(2.0, 1.0);
        const SolveResult s = newton_solve(r, initial_guess(e, r));
        CHECK(s.energy <= energy_upper_bound(2.0, 1.0, e.phi1));
        const double q = 1.0 + 1e-7;
        CHECK(energy_upper_bound(q, 2.0 / (q - 1.0), e.phi1) ==
              doctest::Approx(energy_upper_bound_log_limit(e.phi1)).epsilon(1e-4));
        const Reaction lg = Reaction::log_schrodinger();
        const SolveResult sl = newton_solve(lg, initial_guess(e, lg));
        CHECK(sl.energy <= energy_upper_bound_log_limit(e.phi1));
    }

    TEST_CASE("discrete Dirichlet form pairs with the operator") {
        const GridPtr g = make_grid(Domain::box({1.0, 2.0}), {21, 31});
        const Field u = Field::from_function(g, [](std::span<const double> x) {
            return (1.0 - x[0] * x[0]) * (4.0 - x[1] * x[1]) * std::exp(x[0]);
        });
        const auto lap = apply_laplacian(u);
        const auto w = g->quadrature_weights();
        double pairing = 0.0;
        for (std::size_t n : g->interior_nodes()) pairing -= w[n] * lap[n] * u[n];
        CHECK(dirichlet_integral(u) == doctest::Approx(pairing).epsilon(1e-12));
    }
}
