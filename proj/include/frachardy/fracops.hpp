#pragma once

#include <vector>

#include "frachardy/constants.hpp"
#include "frachardy/geometry.hpp"
#include "frachardy/quadrature.hpp"

namespace frachardy {

/// J_p(t) = |t|^{p-2} t, the monotone odd map of the p-Laplacian.
double jp(double p, double t);

/// One-dimensional power-of-distance profiles, extended by zero outside the
/// support. beta = 0 on the half-line is the characteristic function of
/// (0,+inf).
class PowerProfile {
public:
    enum class Kind { half_line_power, interval_power, kelvin_interval };

    /// U_beta(t) = t^beta on (0,+inf).
    static PowerProfile half_line(const SPParams& params, double beta);
    /// d_I(t)^beta on (a,b) with d_I(t) = min(t-a, b-t).
    static PowerProfile interval(const SPParams& params, double beta, double a, double b);
    /// f_beta(t) = t^{2s-1-beta} (1-t)^beta on (0,1); p = 2, -1 < beta < 2s.
    static PowerProfile kelvin_interval(double s, double beta);

    double eval(double t) const;

    Kind kind() const { return kind_; }
    const SPParams& params() const { return params_; }
    double beta() const { return beta_; }
    double support_a() const { return a_; }
    double support_b() const { return b_; }  // +inf for the half-line
    bool bounded_support() const;
    std::vector<double> interior_kinks() const;

    /// Power of the distance to either support edge in the leading local
    /// behaviour (used to declare quadrature singularities).
    double left_edge_exponent() const;
    double right_edge_exponent() const;

    /// Values at exact distance d from a support edge (cancellation-free).
    double eval_from_left_edge(double d) const;
    double eval_from_right_edge(double d) const;

private:
    PowerProfile(Kind kind, const SPParams& params, double beta, double a, double b);
    Kind kind_;
    SPParams params_;
    double beta_;
    double a_, b_;
};

struct PVTrace {
    double value = 0.0;
    double err_est = 0.0;
    bool converged = false;
    std::vector<std::pair<double, double>> trace;  // (eps, F_eps)
};

/// Pointwise PV evaluation of the fractional p-Laplacian
/// F(t) = 2 PV int J_p(u(t) - u(y)) / |t-y|^{1+sp} dy along the excision
/// schedule, with tails over the zero set in closed form. The default
/// schedule is geometric (eps0 = 1e-1, 12 levels).
PVTrace frac_plap_pv(const PowerProfile& profile, double t, const PVExcision& excision,
                     const QuadratureSpec& spec = {});
PVTrace frac_plap_pv(const PowerProfile& profile, double t, const QuadratureSpec& spec = {});

/// The excised operator F_eps(t) at a single fixed epsilon.
double frac_plap_excised(const PowerProfile& profile, double t, double eps,
                         PVExcision::Mode mode, const QuadratureSpec& spec = {});

/// |F_eps(t) - lambda_eps(beta) t^{beta(p-1)-sp}| for the half-line profile;
/// an exact identity at every eps, so the residual is pure quadrature error.
double halfline_identity_residual(const SPParams& params, const BetaExponent& beta, double t,
                                  double eps, const QuadratureSpec& spec = {});

/// margin(t) = F(t) - lambda(beta) d_I(t)^{beta(p-1)-sp} on an interval;
/// nonnegative for 0 <= beta < sp/(p-1) (the supersolution construction),
/// admissible down to -1/(p-1) for falsification runs.
double supersolution_margin_1d(const Interval& domain, const SPParams& params,
                               const BetaExponent& beta, double t,
                               const QuadratureSpec& spec = {});

struct AppendixBValues {
    double H;
    double G;
};

/// Closed forms H(t) = -2/(t(1-t)) + (2/d_I(t)) log(4t(1-t)/(1-2t)^2) and
/// G(t) = -1/(1-t) + log(4t(1-t)/(1-2t)^2) (mirrored across 1/2).
AppendixBValues appendix_b_eval(double t);

struct AppendixBClaim {
    double lhs;  // PV fractional Laplacian of d_I^beta at t (s=1/2, p=2)
    double rhs;  // beta H(t) d_I^beta + 2 d_I^beta / (t(1-t))
    double gap;  // rhs - lhs, >= 0 up to quadrature error
};

/// Pointwise check of the borderline-case bound for -1 < beta < 0.
AppendixBClaim appendix_b_claim_check(double beta, double t,
                                      const QuadratureSpec& spec = {});

/// |c-d|^p - J_p(a-b)(c^p/a^{p-1} - d^p/b^{p-1}) >= 0, zero iff c/a = d/b.
double picone_gap(double p, double a, double b, double c, double d);

/// |1-tau^beta| <= |beta| max(tau^{beta-1},1)(1-tau) on (0,1) and the tau > 1
/// companion.
bool power_difference_bound_check(double beta, double tau);

} // namespace frachardy
