#include <doctest.h>

#include <cmath>

#include "frachardy/constants.hpp"

using namespace frachardy;

namespace {

// Gamma-function closed form for I(k;alpha), kept as a test oracle only:
// I(k;alpha) = Gamma((k+1)/2) Gamma((1+alpha)/2) / (2 Gamma((k+2+alpha)/2)).
double ik_gamma_oracle(int k, double alpha) {
    return std::tgamma(0.5 * (k + 1)) * std::tgamma(0.5 * (1 + alpha)) /
           (2.0 * std::tgamma(0.5 * (k + 2 + alpha)));
}

// Rearranged single-integral form of lambda_eps from the homogeneity trick,
// used as an independent route.
double lambda_eps_rearranged(const SPParams& par, double b, double eps) {
    const double p = par.p;
    const double sp = par.sp();
    const double q = sp - 1.0 - b * (p - 1.0);
    QuadratureSpec spec;
    auto jp = [p](double t) {
        return t == 0.0 ? 0.0 : std::pow(std::abs(t), p - 1.0) * (t > 0 ? 1.0 : -1.0);
    };
    auto f1 = [&](double t) {
        return jp(1.0 - std::pow(t, b)) * (1.0 - std::pow(t, q)) /
               std::pow(1.0 - t, 1.0 + sp);
    };
    double left = (b < 0.0) ? b * (p - 1.0) : 0.0;
    double near = integrate_singular(f1, 0.0, 1.0 - eps, spec.with_exponents(left, 0.0)).value;
    auto f2 = [&](double t) {
        return jp(std::pow(t, b) - 1.0) * std::pow(t, q) / std::pow(1.0 - t, 1.0 + sp);
    };
    double mid = integrate_singular(f2, 1.0 - eps, 1.0 / (1.0 + eps), spec).value;
    return 2.0 * near + 2.0 * mid + 2.0 / sp;
}

} // namespace

TEST_SUITE("constants") {

TEST_CASE("unit-ball volumes") {
    CHECK(omega(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(omega(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(omega(2) == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(omega(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(omega(-1), std::invalid_argument);
}

TEST_CASE("I(k;alpha) against antiderivatives and the Gamma oracle") {
    CHECK(ik_alpha(1, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ik_alpha(0, 0.0) == doctest::Approx(M_PI / 2).epsilon(1e-10));
    // I(2;1): tangent substitution turns it into int_0^{pi/2} sin^2 cos = 1/3
    QuadratureSpec spec;
    double trig = integrate_singular(
        [](double th) {
            double s = std::sin(th);
            return s * s * std::cos(th);
        },
        0.0, M_PI / 2, spec).value;
    double val = ik_alpha(2, 1.0);
    CHECK(val == doctest::Approx(trig).epsilon(1e-10));
    CHECK(val == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(val == doctest::Approx(ik_gamma_oracle(2, 1.0)).epsilon(1e-10));
}

TEST_CASE("C_{N,sp}") {
    SPParams half(0.5, 2.0);
    CHECK(c_nsp(1, half) == 1.0);
    CHECK(c_nsp(3, half) == doctest::Approx(M_PI).epsilon(1e-10));
    SPParams p43(0.4, 3.0);
    CHECK(c_nsp(2, p43) == doctest::Approx(1.88718116253595895).epsilon(1e-10));
    CHECK(c_nsp(2, p43) == doctest::Approx(omega(1) * ik_gamma_oracle(0, 1.2)).epsilon(1e-10));
    // depends on (s,p) only through sp
    SPParams a(0.25, 4.0), b(0.5, 2.0);
    CHECK(c_nsp(2, a) == doctest::Approx(c_nsp(2, b)).epsilon(1e-10));
    CHECK(c_nsp(3, a) == doctest::Approx(c_nsp(3, b)).epsilon(1e-10));
    CHECK_THROWS_AS(c_nsp(0, half), std::invalid_argument);
}

TEST_CASE("Lambda_{s,p}") {
    CHECK(lambda_sp(SPParams(0.5, 2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lambda_sp(SPParams(1.0 / 3.0, 3.0)) == doctest::Approx(2.0).epsilon(1e-12));
    // frozen from a 30-digit evaluation
    CHECK(lambda_sp(SPParams(0.75, 2.0)) ==
          doctest::Approx(1.74803836952807987).epsilon(1e-10));
    // cross-check against lambda(beta) at the maximizer
    SPParams par(0.75, 2.0);
    double viaBeta = lambda_beta(par, BetaExponent{(par.sp() - 1.0) / par.p});
    CHECK(std::abs(lambda_sp(par) - viaBeta) < 1e-9);
    // strict inequality Lambda > 2/(sp) away from sp = 1
    for (auto [s, p] : {std::pair{0.3, 2.0}, {0.75, 2.0}, {0.4, 3.0}, {0.9, 1.5}}) {
        SPParams q(s, p);
        CHECK(lambda_sp(q) > 2.0 / q.sp() + 1e-6);
    }
}

TEST_CASE("lambda(beta) special values") {
    SPParams par(0.5, 2.0);
    CHECK(lambda_beta(par, BetaExponent{0.0}) == doctest::Approx(2.0 / par.sp()).epsilon(1e-12));
    CHECK(std::abs(lambda_beta(par, BetaExponent{par.s})) < 1e-8);
    CHECK(lambda_beta(par, BetaExponent{0.25}) == doctest::Approx(M_PI / 2).epsilon(1e-10));
    SPParams par2(0.6, 3.0);
    CHECK(lambda_beta(par2, BetaExponent{(par2.sp() - 1.0) / par2.p}) ==
          doctest::Approx(1.22715690155431290).epsilon(1e-9));
    CHECK_THROWS_AS(lambda_beta(par, BetaExponent{-1.5}), InadmissibleExponent);
    CHECK_THROWS_AS(lambda_beta(par, BetaExponent{1.2}), InadmissibleExponent);
}

TEST_CASE("lambda_eps") {
    SPParams par(0.5, 2.0);
    CHECK(lambda_eps(par, BetaExponent{0.0}, 0.37) ==
          doctest::Approx(2.0 / par.sp()).epsilon(1e-12));
    // frozen; also the rearranged single-integral route agrees
    double direct = lambda_eps(par, BetaExponent{0.25}, 1e-2);
    CHECK(direct == doctest::Approx(1.56704627666290231).epsilon(1e-9));
    CHECK(std::abs(direct - lambda_eps_rearranged(par, 0.25, 1e-2)) < 1e-8);
    // |lambda_eps - lambda| decreasing in eps at the maximizer
    SPParams par2(0.75, 2.0);
    BetaExponent bopt{(par2.sp() - 1.0) / par2.p};
    double lam = lambda_beta(par2, bopt);
    double d3 = std::abs(lambda_eps(par2, bopt, 1e-3) - lam);
    double d4 = std::abs(lambda_eps(par2, bopt, 1e-4) - lam);
    CHECK(d4 < d3);
    CHECK_THROWS_AS(lambda_eps(par, BetaExponent{0.25}, 1.5), std::invalid_argument);
}

TEST_CASE("beta_star closed forms and scan oracle") {
    CHECK(beta_star(SPParams(0.3, 2.0)) == doctest::Approx(-0.7).epsilon(1e-7));
    CHECK(beta_star(SPParams(1.0 / 3.0, 3.0)) == doctest::Approx(-1.0 / 3.0).epsilon(1e-7));
    // frozen from a 30-digit root-find
    SPParams par(0.6, 3.0);
    double bs = beta_star(par);
    CHECK(bs == doctest::Approx(-0.26798999863750572).epsilon(1e-8));
    // scan oracle: lambda changes sign exactly once inside a fine grid cell
    // containing beta*
    const int n = 2000;
    const double lo = -0.9 / (par.p - 1.0);  // lambda -> -inf at -1/(p-1); stay evaluable
    const double hi = (par.sp() - 1.0) / par.p;
    int sign_changes = 0;
    double root_cell_lo = 0, root_cell_hi = 0;
    double prev = lambda_beta(par, BetaExponent{lo});
    for (int i = 1; i <= n; ++i) {
        double b = lo + (hi - lo) * i / n;
        double cur = lambda_beta(par, BetaExponent{b});
        if (prev < 0.0 && cur >= 0.0) {
            ++sign_changes;
            root_cell_lo = lo + (hi - lo) * (i - 1) / n;
            root_cell_hi = b;
        }
        prev = cur;
    }
    CHECK(sign_changes == 1);
    CHECK(bs >= root_cell_lo);
    CHECK(bs <= root_cell_hi);
}

TEST_CASE("beta*(s,2) = s-1") {
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9})
        CHECK(beta_star(SPParams(s, 2.0)) == doctest::Approx(s - 1.0).epsilon(1e-7));
}

TEST_CASE("sharp Hardy constant dispatcher") {
    auto r1 = sharp_hardy_constant(1, SPParams(0.5, 2.0), DomainClass::half_space);
    CHECK(r1.exact());
    CHECK(r1.value() == doctest::Approx(2.0).epsilon(1e-11));
    CHECK_FALSE(r1.attained);

    auto r2 = sharp_hardy_constant(3, SPParams(0.5, 2.0), DomainClass::generic_convex);
    CHECK(r2.exact());
    CHECK(r2.value() == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
    CHECK_FALSE(r2.attained);

    auto r3 = sharp_hardy_constant(1, SPParams(0.3, 3.0), DomainClass::generic_convex);
    CHECK_FALSE(r3.exact());
    CHECK(r3.source == HardyReport::Source::open_problem_bracket);
    CHECK(r3.lower == doctest::Approx(2.0 / 0.9).epsilon(1e-10));
    CHECK(r3.upper == doctest::Approx(2.22286017222487844).epsilon(1e-9));
    CHECK(r3.lower <= r3.upper);
    CHECK_FALSE(r3.attained);

    // p = 2 with sp < 1 is still exact (Main Theorem part 3)
    auto r4 = sharp_hardy_constant(2, SPParams(0.25, 2.0), DomainClass::generic_convex);
    CHECK(r4.exact());
}

TEST_CASE("lambda symmetry for p = 2") {
    for (double s : {0.5, 0.7}) {
        SPParams par(s, 2.0);
        for (double b : {-0.3, -0.1, 0.2, 0.5}) {
            if (!BetaExponent{b}.admissible_for_lambda(par)) continue;
            double mirrored = 2.0 * s - 1.0 - b;
            if (!BetaExponent{mirrored}.admissible_for_lambda(par)) continue;
            CHECK(std::abs(lambda_beta(par, BetaExponent{b}) -
                           lambda_beta(par, BetaExponent{mirrored})) < 1e-8);
        }
    }
}

TEST_CASE("monotonicity scan") {
    auto rep = lambda_monotonicity_scan(SPParams(0.6, 3.0), 32);
    CHECK(rep.passed());
    CHECK(std::abs(rep.argmax_beta - (0.6 * 3 - 1) / 3.0) <= 1.5 * (0.5 + 1.8 / 2) / 33 * 2);
    auto rep2 = lambda_monotonicity_scan(SPParams(0.5, 2.0), 32);
    CHECK(rep2.passed());
    // even symmetry at sp = 1: grid is symmetric about 0
    for (std::size_t i = 0; i < rep2.betas.size() / 2; ++i) {
        std::size_t j = rep2.betas.size() - 1 - i;
        CHECK(std::abs(rep2.lambdas[i] - rep2.lambdas[j]) < 1e-8);
    }
    CHECK_THROWS_AS(lambda_monotonicity_scan(SPParams(0.5, 2.0), 8), std::invalid_argument);
}

TEST_CASE("SPParams validation") {
    CHECK_THROWS_AS(SPParams(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(SPParams(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(SPParams(0.5, 1.0), std::invalid_argument);
    CHECK(SPParams(0.5, 2.0).sp_ge_one());
    CHECK_FALSE(SPParams(0.3, 3.0).sp_ge_one());
}

} // TEST_SUITE
