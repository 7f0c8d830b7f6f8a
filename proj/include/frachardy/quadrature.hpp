#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "frachardy/errors.hpp"

namespace frachardy {

using RealFn = std::function<double(double)>;

/// Endpoint-aware integrand f(t, xc): xc is the signed distance from t to the
/// nearest endpoint of the integration interval (positive near the left end,
/// negative near the right end), propagated exactly through the engine's
/// substitutions. Integrands with a singular factor in (t-a) or (b-t) must use
/// this form; reconstructing the distance from the rounded t loses precision.
using RealFn2 = std::function<double(double, double)>;

/// Tolerances and declared algebraic endpoint-singularity orders for the
/// adaptive engine. An exponent e at an endpoint means the integrand behaves
/// like (distance to endpoint)^e there; 0 declares a regular endpoint.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 4000;
    double left_exponent = 0.0;
    double right_exponent = 0.0;

    QuadratureSpec with_exponents(double le, double re) const {
        QuadratureSpec s = *this;
        s.left_exponent = le;
        s.right_exponent = re;
        return s;
    }
    QuadratureSpec with_tols(double rel, double abs) const {
        QuadratureSpec s = *this;
        s.rel_tol = rel;
        s.abs_tol = abs;
        return s;
    }
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double err_est = 0.0;
};

/// Integral over a finite interval (a,b) with at most the declared algebraic
/// singularities at the endpoints. Desingularizing power substitution at each
/// declared singular endpoint, nested adaptive Gauss-Kronrod panels,
/// tanh-sinh fallback when the error estimate stalls.
QuadratureResult integrate_singular(const RealFn2& f, double a, double b,
                                    const QuadratureSpec& spec);
QuadratureResult integrate_singular(const RealFn& f, double a, double b,
                                    const QuadratureSpec& spec);

/// Integral over (a,b) with 0 <= a < b of an integrand behaving like
/// r^{spec.left_exponent} as r -> 0+. The substitution is anchored at r = 0
/// even when a > 0 (used for excised near-diagonal integrals whose steepness
/// is controlled by the distance to the origin, not to the endpoint).
QuadratureResult integrate_algebraic_origin(const RealFn& f, double a, double b,
                                            const QuadratureSpec& spec);

/// Integral over (a, +infinity) after the compactifying substitution
/// t = a + u/(1-u). spec.right_exponent declares the decay of f through
/// f(t) ~ C t^{-(2 + right_exponent)} as t -> +infinity; spec.left_exponent
/// keeps its meaning at t = a. The endpoint-aware form receives xc = t - a.
QuadratureResult integrate_improper(const RealFn2& f, double a,
                                    const QuadratureSpec& spec);
QuadratureResult integrate_improper(const RealFn& f, double a,
                                    const QuadratureSpec& spec);

/// Principal-value excision convention around a singular point t0:
/// relative mode excises ((1-eps) t0, (1+eps) t0), absolute mode (t0-eps, t0+eps).
struct PVExcision {
    enum class Mode { relative, absolute };
    Mode mode = Mode::relative;
    std::vector<double> epsilon_schedule;

    /// Geometric schedule eps_k = eps0 * 2^{-k}, k = 0..levels-1.
    static PVExcision geometric(Mode mode, double eps0 = 1e-1, int levels = 12);
    void validate() const;
};

struct PVResult {
    double value = 0.0;
    double err_est = 0.0;
    bool converged = false;                        // false = "PV divergence"
    std::vector<std::pair<double, double>> trace;  // (eps, excised partial)
};

/// Excised integrals of f over (a,b) \ I_eps(t0) along the schedule, with
/// Richardson/Aitken extrapolation of the trace. A non-Cauchy trace is
/// reported through converged = false (a legitimate diagnostic outcome, not
/// an exception); pv_value() below throws instead.
PVResult principal_value(const RealFn& f, double t0, double a, double b,
                         const PVExcision& excision, const QuadratureSpec& spec);

/// Convergence-demanding accessor: value of a PVResult, or QuadratureFailure.
double pv_value(const PVResult& r);

/// Iterated Aitken acceleration of a convergent sequence; returns the
/// extrapolated limit and an error estimate from the deepest column.
std::pair<double, double> extrapolate_sequence(const std::vector<double>& seq);

} // namespace frachardy
