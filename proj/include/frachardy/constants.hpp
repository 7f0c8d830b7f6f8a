#pragma once

#include <string>
#include <vector>

#include "frachardy/quadrature.hpp"

namespace frachardy {

/// The fractional pair (s,p), 0 < s < 1, 1 < p < infinity.
struct SPParams {
    double s;
    double p;

    SPParams(double s_, double p_);
    double sp() const { return sp_; }
    bool sp_ge_one() const { return sp_ >= 1.0; }

private:
    double sp_;
};

/// Power exponent of a distance profile with its admissibility windows.
struct BetaExponent {
    double beta;

    bool admissible_for_lambda(const SPParams& q) const {
        return beta > -1.0 / (q.p - 1.0) && beta < q.sp() / (q.p - 1.0);
    }
    bool admissible_for_convex_supersolution(const SPParams& q) const {
        return beta >= 0.0 && beta < q.sp() / (q.p - 1.0);
    }
};

enum class DomainClass { half_space, generic_convex };

/// Sharp Hardy constant of the Main Theorem, or the open-problem bracket when
/// the point value is unknown (sp < 1, p != 2, non-half-space convex domain).
struct HardyReport {
    double lower = 0.0;
    double upper = 0.0;     // lower == upper for exact values
    bool attained = false;  // always false here (the constant is never attained)
    enum class Source { theorem_exact, open_problem_bracket } source = Source::theorem_exact;
    DomainClass domain_class = DomainClass::half_space;

    bool exact() const { return source == Source::theorem_exact; }
    double value() const { return upper; }
};

/// Volume of the unit ball in dimension k; omega(0) = 1.
double omega(int k);

/// I(k;alpha) = int_0^inf t^k (1+t^2)^{-(k+2+alpha)/2} dt, by quadrature.
double ik_alpha(int k, double alpha, const QuadratureSpec& spec = {});

/// C_{N,sp}: (N-1) omega_{N-1} I(N-2; sp) for N >= 2, and 1 for N = 1.
/// Depends on (s,p) only through the product sp.
double c_nsp(int N, const SPParams& params, const QuadratureSpec& spec = {});

/// Lambda_{s,p} = 2 int_0^1 |1-t^{(sp-1)/p}|^p / (1-t)^{1+sp} dt + 2/(sp).
double lambda_sp(const SPParams& params, const QuadratureSpec& spec = {});

/// lambda(beta) = 2 int_0^1 J_p(1-t^beta)(1-t^{sp-1-beta(p-1)})/(1-t)^{1+sp} dt + 2/(sp),
/// on the admissible range -1/(p-1) < beta < sp/(p-1).
double lambda_beta(const SPParams& params, const BetaExponent& beta,
                   const QuadratureSpec& spec = {});

/// Excised constant lambda_eps(beta); converges to lambda(beta) as eps -> 0+.
double lambda_eps(const SPParams& params, const BetaExponent& beta, double eps,
                  const QuadratureSpec& spec = {});

/// The root beta* of lambda on (-1/(p-1), (sp-1)/p); lambda(beta) >= 0 iff
/// beta in [beta*, s]. Bisection with a geometrically grown left bracket,
/// then secant polish.
double beta_star(const SPParams& params, const QuadratureSpec& spec = {});

/// Main-Theorem dispatcher. Exact for half-spaces (all s,p), for sp >= 1 and
/// for p = 2 on any convex domain; open-problem bracket otherwise.
HardyReport sharp_hardy_constant(int N, const SPParams& params, DomainClass domain_class,
                                 const QuadratureSpec& spec = {});

struct LambdaScanReport {
    std::vector<double> betas;
    std::vector<double> lambdas;
    double argmax_beta = 0.0;
    double max_lambda = 0.0;
    bool single_peaked = false;
    bool argmax_near_optimum = false;   // within one grid cell of (sp-1)/p
    bool sign_pattern_ok = false;       // lambda >= 0 iff beta in [beta*, s]
    std::string diagnostic;

    bool passed() const { return single_peaked && argmax_near_optimum && sign_pattern_ok; }
};

/// Grid scan of lambda over the admissible beta range (>= 16 points):
/// single-peak shape, argmax within one cell of (sp-1)/p, sign pattern.
LambdaScanReport lambda_monotonicity_scan(const SPParams& params, int grid_size,
                                          const QuadratureSpec& spec = {});

} // namespace frachardy
