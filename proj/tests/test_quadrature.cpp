#include <doctest.h>

#include <cmath>
#include <random>

#include "frachardy/quadrature.hpp"

using namespace frachardy;

TEST_SUITE("quadrature") {

TEST_CASE("inverse square root singularities") {
    QuadratureSpec spec;
    auto left = integrate_singular([](double t) { return 1.0 / std::sqrt(t); }, 0, 1,
                                   spec.with_exponents(-0.5, 0.0));
    CHECK(left.value == doctest::Approx(2.0).epsilon(1e-10));
    // endpoint-aware form: the engine supplies the exact distance 1 - t
    auto right = integrate_singular(
        [](double t, double xc) {
            double d = xc < 0 ? -xc : 1.0 - t;
            return 1.0 / std::sqrt(d);
        },
        0, 1, spec.with_exponents(0.0, -0.5));
    CHECK(right.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("two independent substitutions agree on a Lambda-type integrand") {
    // f(t) = |1 - t^{1/4}|^2 / (1-t)^2 on (0,1); s = 0.5, p = 2 context.
    // Oracle: the same integral under u = 1-t and u = sqrt(1-t).
    QuadratureSpec spec;
    auto f = [](double t) {
        double d = 1.0 - std::pow(t, 0.25);
        return d * d / ((1.0 - t) * (1.0 - t));
    };
    auto direct = integrate_singular(f, 0, 1, spec);
    // u = 1 - t
    auto sub1 = integrate_singular([&](double u) { return f(1.0 - u); }, 0, 1, spec);
    // u = sqrt(1 - t), dt = 2u du
    auto sub2 = integrate_singular([&](double u) { return f(1.0 - u * u) * 2.0 * u; }, 0, 1, spec);
    CHECK(std::abs(sub1.value - sub2.value) < 1e-10);
    CHECK(direct.value == doctest::Approx(sub1.value).epsilon(1e-10));
    // frozen from a 30-digit evaluation of the antisubstituted integral
    CHECK(direct.value == doctest::Approx(0.13197175367742096).epsilon(1e-10));
}

TEST_CASE("improper integrals with known antiderivatives") {
    QuadratureSpec spec;
    auto r1 = integrate_improper([](double t) { return 1.0 / (1.0 + t * t); }, 0,
                                 spec.with_exponents(0.0, 0.0));
    CHECK(r1.value == doctest::Approx(M_PI / 2).epsilon(1e-11));
    auto r2 = integrate_improper([](double t) { return t * std::pow(1.0 + t * t, -1.5); }, 0,
                                 spec.with_exponents(0.0, 1.0));
    CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-11));
    auto r3 = integrate_improper([](double t) { return std::pow(1.0 + t * t, -2.0); }, 0,
                                 spec.with_exponents(0.0, 2.0));
    CHECK(r3.value == doctest::Approx(M_PI / 4).epsilon(1e-11));
}

TEST_CASE("linearity on random smooth integrands") {
    QuadratureSpec spec;
    std::mt19937 rng(7321);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        double a1 = coeff(rng), a2 = coeff(rng), w1 = coeff(rng), w2 = coeff(rng);
        auto f = [=](double t) { return std::sin(3.0 * t + a1) * std::exp(w1 * t); };
        auto g = [=](double t) { return std::cos(2.0 * t + a2) + w2 * t * t; };
        double alpha = coeff(rng), beta = coeff(rng);
        auto lhs = integrate_singular([&](double t) { return alpha * f(t) + beta * g(t); }, 0,
                                      2, spec);
        auto rf = integrate_singular(f, 0, 2, spec);
        auto rg = integrate_singular(g, 0, 2, spec);
        double rhs = alpha * rf.value + beta * rg.value;
        CHECK(std::abs(lhs.value - rhs) <=
              10 * spec.rel_tol * (std::abs(lhs.value) + 1.0));
    }
}

TEST_CASE("origin-anchored windows") {
    QuadratureSpec spec;
    // int_a^b r^{-0.9} dr with a << b, singularity at 0 outside the window
    auto f = [](double r) { return std::pow(r, -0.9); };
    double a = 1e-6, b = 2.0;
    auto res = integrate_algebraic_origin(f, a, b, spec.with_exponents(-0.9, 0.0));
    double exact = (std::pow(b, 0.1) - std::pow(a, 0.1)) / 0.1;
    CHECK(res.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("principal value: odd singularity cancels") {
    QuadratureSpec spec;
    auto ex = PVExcision::geometric(PVExcision::Mode::absolute);
    auto f = [](double t) { return 1.0 / (t - 0.5); };
    auto res = principal_value(f, 0.5, -0.5, 1.5, ex, spec);
    CHECK(res.converged);
    CHECK(std::abs(res.value) < 1e-10);
    CHECK(res.trace.size() == 12);
}

TEST_CASE("principal value: log antiderivative") {
    QuadratureSpec spec;
    auto ex = PVExcision::geometric(PVExcision::Mode::absolute);
    auto f = [](double t) { return 1.0 / (t - 1.0); };
    auto res = principal_value(f, 1.0, 0.0, 3.0, ex, spec);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("principal value: relative and absolute excision agree in the limit") {
    QuadratureSpec spec;
    auto f = [](double t) { return std::cos(t) / (t - 1.0); };
    auto rel = principal_value(f, 1.0, 0.0, 2.5,
                               PVExcision::geometric(PVExcision::Mode::relative), spec);
    auto abs_ = principal_value(f, 1.0, 0.0, 2.5,
                                PVExcision::geometric(PVExcision::Mode::absolute), spec);
    CHECK(rel.converged);
    CHECK(abs_.converged);
    CHECK(std::abs(rel.value - abs_.value) < 1e-7);
}

TEST_CASE("principal value divergence is reported with the trace") {
    QuadratureSpec spec;
    auto ex = PVExcision::geometric(PVExcision::Mode::absolute);
    auto f = [](double t) { double d = t - 1.0; return 1.0 / (d * d); };
    auto res = principal_value(f, 1.0, 0.0, 2.0, ex, spec);
    CHECK_FALSE(res.converged);
    CHECK(res.trace.size() == 12);
    CHECK_THROWS_AS(pv_value(res), QuadratureFailure);
}

TEST_CASE("declared non-integrable endpoint is rejected") {
    QuadratureSpec spec;
    CHECK_THROWS_AS(integrate_singular([](double t) { return 1.0 / t; }, 0, 1,
                                       spec.with_exponents(-1.0, 0.0)),
                    NonIntegrableEndpoint);
    CHECK_THROWS_AS(integrate_singular([](double t) { return 1.0 / t; }, 0, 1,
                                       spec.with_exponents(-1.5, 0.0)),
                    NonIntegrableEndpoint);
}

TEST_CASE("subdivision budget exhaustion throws with partial estimate") {
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-300;
    spec.max_subdivisions = 3;
    bool threw = false;
    try {
        integrate_singular([](double t) { return std::sin(200.0 / (t + 1e-2)); }, 0, 1, spec);
    } catch (const QuadratureFailure& e) {
        threw = true;
        CHECK(std::isfinite(e.partial));
        CHECK(e.err_est > 0.0);
    }
    CHECK(threw);
}

TEST_CASE("excision schedule validation") {
    PVExcision bad;
    bad.epsilon_schedule = {1e-2, 1e-2};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    PVExcision ok = PVExcision::geometric(PVExcision::Mode::relative, 1e-1, 5);
    CHECK(ok.epsilon_schedule.size() == 5);
    CHECK(ok.epsilon_schedule.back() == doctest::Approx(1e-1 / 16));
}

} // TEST_SUITE
