#include "frachardy/constants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frachardy/parallel.hpp"

namespace frachardy {

namespace {

double pow_abs(double x, double q) {
    if (x == 0.0) return 0.0;
    if (q == 1.0) return std::abs(x);
    if (q == 2.0) return x * x;
    return std::pow(std::abs(x), q);
}

// log(|1 - e^m|) and sign(1 - e^m) without overflow
void log_one_minus_exp(double m, double& logabs, double& sign) {
    if (m > 0.0) {
        sign = -1.0;
        logabs = m + std::log1p(-std::exp(-m));
    } else {
        sign = 1.0;
        logabs = std::log(-std::expm1(m));
    }
}

// log(t) from whichever of t and 1-t is exact at the current endpoint
double log_t_robust(double t, double one_minus_t) {
    return (t <= 0.5) ? std::log(t) : std::log1p(-one_minus_t);
}

// J_p(1 - t^beta) * (1 - t^q), evaluated through expm1/log1p for precision
// near the degenerate product and in log space when t^beta or t^q would
// overflow.
double jp_one_minus_pow_times_factor(double t, double one_minus_t, double beta, double q,
                                     double p) {
    const double lt = log_t_robust(t, one_minus_t);
    const double m1 = beta * lt;
    const double m2 = q * lt;
    if (std::abs(m1) < 200.0 && std::abs(m2) < 200.0) {
        const double y = -std::expm1(m1);     // 1 - t^beta
        const double f2 = -std::expm1(m2);    // 1 - t^q
        if (y == 0.0 || f2 == 0.0) return 0.0;
        return pow_abs(y, p - 1.0) * (y > 0 ? 1.0 : -1.0) * f2;
    }
    double l1, s1, l2, s2;
    log_one_minus_exp(m1, l1, s1);
    log_one_minus_exp(m2, l2, s2);
    return s1 * s2 * std::exp((p - 1.0) * l1 + l2);
}

double jp_scalar(double p, double t) {
    if (t == 0.0) return 0.0;
    return pow_abs(t, p - 1.0) * (t > 0 ? 1.0 : -1.0);
}

} // namespace

SPParams::SPParams(double s_, double p_) : s(s_), p(p_) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("SPParams: need 0 < s < 1");
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("SPParams: need 1 < p < infinity");
    sp_ = s * p;
}

double omega(int k) {
    if (k < 0) throw std::invalid_argument("omega: need k >= 0");
    return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

double ik_alpha(int k, double alpha, const QuadratureSpec& spec) {
    if (k < 0) throw std::invalid_argument("ik_alpha: need k >= 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("ik_alpha: need alpha >= 0");
    const double expo = -0.5 * (k + 2 + alpha);
    auto f = [k, expo](double t) { return std::pow(t, k) * std::pow(1.0 + t * t, expo); };
    QuadratureSpec q = spec.with_exponents(0.0, alpha);
    return integrate_improper(f, 0.0, q).value;
}

double c_nsp(int N, const SPParams& params, const QuadratureSpec& spec) {
    if (N < 1) throw std::invalid_argument("c_nsp: need N >= 1");
    if (N == 1) return 1.0;
    return (N - 1) * omega(N - 1) * ik_alpha(N - 2, params.sp(), spec);
}

double lambda_sp(const SPParams& params, const QuadratureSpec& spec) {
    const double sp = params.sp();
    const double p = params.p;
    const double beta = (sp - 1.0) / p;
    auto f = [beta, p, sp](double t, double xc) {
        const double one_minus_t = (xc < 0.0) ? -xc : 1.0 - t;
        const double m = beta * log_t_robust(t, one_minus_t);
        double num;
        if (m < 200.0) {
            num = pow_abs(-std::expm1(m), p);
        } else {
            num = std::exp(p * (m + std::log1p(-std::exp(-m))));
        }
        return num / std::pow(one_minus_t, 1.0 + sp);
    };
    double left = std::min(0.0, sp - 1.0);
    if (left == 0.0 && beta > 0.0 && beta < 1.0) left = beta;
    const double right = p - 1.0 - sp;
    QuadratureSpec q = spec.with_exponents(left, right);
    return 2.0 * integrate_singular(f, 0.0, 1.0, q).value + 2.0 / sp;
}

namespace {

// declared exponent of the lambda integrand at t = 0+
double lambda_left_exponent(double beta, double p, double q) {
    const double emin = std::min(beta * (p - 1.0), 0.0) + std::min(q, 0.0);
    if (emin < 0.0) return emin;
    // both factors bounded: declare the smallest fractional positive power
    double e = 1.0;
    if (beta > 0.0) e = std::min(e, beta);
    if (q > 0.0) e = std::min(e, q);
    return (e >= 1.0) ? 0.0 : e;
}

} // namespace

double lambda_beta(const SPParams& params, const BetaExponent& beta,
                   const QuadratureSpec& spec) {
    if (!beta.admissible_for_lambda(params))
        throw InadmissibleExponent("lambda_beta: beta outside (-1/(p-1), sp/(p-1))");
    const double sp = params.sp();
    const double p = params.p;
    const double b = beta.beta;
    const double q = sp - 1.0 - b * (p - 1.0);
    auto f = [b, q, p, sp](double t, double xc) {
        const double one_minus_t = (xc < 0.0) ? -xc : 1.0 - t;
        return jp_one_minus_pow_times_factor(t, one_minus_t, b, q, p) /
               std::pow(one_minus_t, 1.0 + sp);
    };
    QuadratureSpec qs = spec.with_exponents(lambda_left_exponent(b, p, q), p - 1.0 - sp);
    return 2.0 * integrate_singular(f, 0.0, 1.0, qs).value + 2.0 / sp;
}

double lambda_eps(const SPParams& params, const BetaExponent& beta, double eps,
                  const QuadratureSpec& spec) {
    if (!beta.admissible_for_lambda(params))
        throw InadmissibleExponent("lambda_eps: beta outside (-1/(p-1), sp/(p-1))");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("lambda_eps: need 0 < eps < 1");
    const double sp = params.sp();
    const double p = params.p;
    const double b = beta.beta;
    auto f = [b, p, sp](double tau) {
        const double m = b * std::log(tau);
        double jp;
        if (std::abs(m) < 200.0) {
            jp = jp_scalar(p, -std::expm1(m));
        } else {
            double l, s;
            log_one_minus_exp(m, l, s);
            jp = s * std::exp((p - 1.0) * l);
        }
        return jp / std::pow(std::abs(1.0 - tau), 1.0 + sp);
    };
    double left = 0.0;
    if (b > 0.0 && b < 1.0) left = b;
    if (b < 0.0) left = b * (p - 1.0);
    QuadratureSpec q1 = spec.with_exponents(left, 0.0);
    double near = integrate_singular(f, 0.0, 1.0 - eps, q1).value;
    const double q = sp - 1.0 - b * (p - 1.0);
    const double decay_exp = (b > 0.0) ? q : sp - 1.0;
    QuadratureSpec q2 = spec.with_exponents(0.0, decay_exp);
    double far = integrate_improper(f, 1.0 + eps, q2).value;
    return 2.0 * near + 2.0 * far + 2.0 / sp;
}

double beta_star(const SPParams& params, const QuadratureSpec& spec) {
    const double p = params.p;
    const double sp = params.sp();
    const double lo_limit = -1.0 / (p - 1.0);
    const double hi = (sp - 1.0) / p;
    const double range = hi - lo_limit;
    auto lam = [&](double b) { return lambda_beta(params, BetaExponent{b}, spec); };

    // grow the left offset geometrically until lambda is evaluable and
    // negative there (too close to the asymptote the quadrature rightly fails)
    double delta = 1e-6 * range;
    double lo = lo_limit + delta;
    double flo;
    int guard = 0;
    for (;;) {
        bool ok = true;
        try {
            flo = lam(lo);
        } catch (const QuadratureFailure&) {
            ok = false;
        }
        if (ok && flo < 0.0) break;
        delta *= 4.0;
        lo = lo_limit + delta;
        if (lo >= hi || ++guard > 60)
            throw std::runtime_error("beta_star: failed to bracket the root");
    }
    double a = lo, b = hi;
    double fa = flo, fb = lam(hi);
    if (!(fb > 0.0)) throw std::runtime_error("beta_star: lambda((sp-1)/p) not positive");
    for (int it = 0; it < 80 && (b - a) > 1e-9 * range; ++it) {
        double m = 0.5 * (a + b);
        double fm = lam(m);
        if (fm < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    // secant polish
    double x0 = a, f0 = fa, x1 = b, f1 = fb;
    for (int it = 0; it < 8; ++it) {
        double den = f1 - f0;
        if (den == 0.0) break;
        double x2 = x1 - f1 * (x1 - x0) / den;
        if (!(x2 > lo_limit && x2 < hi)) break;
        double f2 = lam(x2);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if (std::abs(x1 - x0) < 1e-12 * range) break;
    }
    return x1;
}

HardyReport sharp_hardy_constant(int N, const SPParams& params, DomainClass domain_class,
                                 const QuadratureSpec& spec) {
    if (N < 1) throw std::invalid_argument("sharp_hardy_constant: need N >= 1");
    HardyReport rep;
    rep.domain_class = domain_class;
    rep.attained = false;
    const double C = c_nsp(N, params, spec);
    const double lam = lambda_sp(params, spec);
    const bool exact = domain_class == DomainClass::half_space || params.sp_ge_one() ||
                       params.p == 2.0;
    if (exact) {
        rep.lower = rep.upper = C * lam;
        rep.source = HardyReport::Source::theorem_exact;
    } else {
        rep.lower = C * 2.0 / params.sp();
        rep.upper = C * lam;
        rep.source = HardyReport::Source::open_problem_bracket;
    }
    return rep;
}

LambdaScanReport lambda_monotonicity_scan(const SPParams& params, int grid_size,
                                          const QuadratureSpec& spec) {
    if (grid_size < 16)
        throw std::invalid_argument("lambda_monotonicity_scan: need grid_size >= 16");
    const double p = params.p;
    const double sp = params.sp();
    const double lo = -1.0 / (p - 1.0);
    const double hi = sp / (p - 1.0);
    const double cell = (hi - lo) / (grid_size + 1);

    LambdaScanReport rep;
    rep.betas.resize(grid_size);
    rep.lambdas.resize(grid_size);
    for (int i = 0; i < grid_size; ++i) rep.betas[i] = lo + cell * (i + 1);
    parallel_for(static_cast<std::size_t>(grid_size), [&](std::size_t i) {
        rep.lambdas[i] = lambda_beta(params, BetaExponent{rep.betas[i]}, spec);
    });

    double maxval = rep.lambdas[0];
    int argmax = 0;
    for (int i = 1; i < grid_size; ++i)
        if (rep.lambdas[i] > maxval) {
            maxval = rep.lambdas[i];
            argmax = i;
        }
    rep.argmax_beta = rep.betas[argmax];
    rep.max_lambda = maxval;

    double scale = 0.0;
    for (double v : rep.lambdas) scale = std::max(scale, std::abs(v));
    const double tol = 1e-9 * std::max(1.0, scale);

    rep.single_peaked = true;
    for (int i = 0; i < argmax; ++i)
        if (rep.lambdas[i + 1] < rep.lambdas[i] - tol) rep.single_peaked = false;
    for (int i = argmax; i + 1 < grid_size; ++i)
        if (rep.lambdas[i + 1] > rep.lambdas[i] + tol) rep.single_peaked = false;

    const double bopt = (sp - 1.0) / p;
    rep.argmax_near_optimum = std::abs(rep.argmax_beta - bopt) <= 1.5 * cell;

    const double bs = beta_star(params, spec);
    rep.sign_pattern_ok = true;
    for (int i = 0; i < grid_size; ++i) {
        const double b = rep.betas[i];
        const double l = rep.lambdas[i];
        if (b > bs + cell && b < params.s - cell && l < -tol) rep.sign_pattern_ok = false;
        if ((b < bs - cell || b > params.s + cell) && l > tol) rep.sign_pattern_ok = false;
    }

    if (!rep.passed()) {
        std::ostringstream os;
        os << "monotonicity scan diagnostics: single_peaked=" << rep.single_peaked
           << " argmax_near_optimum=" << rep.argmax_near_optimum
           << " sign_pattern_ok=" << rep.sign_pattern_ok << " argmax_beta=" << rep.argmax_beta
           << " expected=" << bopt << " beta_star=" << bs;
        rep.diagnostic = os.str();
    }
    return rep;
}

} // namespace frachardy
