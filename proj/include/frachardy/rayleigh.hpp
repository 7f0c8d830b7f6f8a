#pragma once

#include <vector>

#include <Eigen/Core>

#include "frachardy/constants.hpp"
#include "frachardy/geometry.hpp"
#include "frachardy/quadrature.hpp"

namespace frachardy {

/// General one-dimensional profile: evaluator, support, kink (panel-split)
/// points, and the algebraic growth of |u| at the two support edges
/// (u ~ C (x-a)^{left_growth} as x -> a+; growth 0 declares a jump/plateau).
struct Profile1D {
    RealFn f;
    double support_a = 0.0;
    double support_b = 1.0;
    std::vector<double> kinks;
    double left_growth = 0.0;
    double right_growth = 0.0;

    double eval(double x) const {
        return (x <= support_a || x >= support_b) ? 0.0 : f(x);
    }
};

/// Quintic smoothstep cutoff: identically 1 on (-inf, plateau_end], 0 on
/// [support_end, +inf), C^2 across the joints, |psi'| <= (15/8)/width.
struct CutoffPsi {
    double plateau_end = 1.0;
    double support_end = 2.0;

    double eval(double x) const;
    double derivative_bound() const { return 1.875 / (support_end - plateau_end); }
};

Profile1D hat_profile(double a, double peak, double b);
Profile1D bump_profile(double a, double b);  // C^2 quintic bump, max 1 at the midpoint
/// phi_beta = U_beta * psi, the trial family of the half-line sharpness scan.
Profile1D truncated_power_profile(const SPParams& params, double beta, const CutoffPsi& psi);
Profile1D scaled_profile(const Profile1D& u, double mu);  // x -> u(x/mu)

/// Gagliardo seminorm machinery; every function returns the p-th POWER of the
/// seminorm. Declared edge growths control the desingularization and the
/// divergence detection (InfiniteSeminorm).
double gagliardo_fullline(const Profile1D& u, const SPParams& params,
                          const QuadratureSpec& spec = {});
/// Regional seminorm over E x E, E = (e1, e2), e2 may be +infinity. Cross
/// terms against the zero set inside E are integrated numerically (so that
/// the split identity below is a genuine three-route numeric check).
double gagliardo_regional(const Profile1D& u, double e1, double e2, const SPParams& params,
                          const QuadratureSpec& spec = {});
double weighted_pnorm(const Profile1D& u, const ConvexDomain& domain, const SPParams& params,
                      const QuadratureSpec& spec = {});
double hardy_quotient(const Profile1D& u, const ConvexDomain& domain, const SPParams& params,
                      const QuadratureSpec& spec = {});
/// | [u]^p_R - [u]^p_{(0,inf)} - (2/(sp)) int |u|^p x^{-sp} | for u compactly
/// supported in (0, inf); the three quantities come from separate routes.
double seminorm_split_check(const Profile1D& u, const SPParams& params,
                            const QuadratureSpec& spec = {});

struct SharpnessPoint {
    double beta;
    double quotient;
    double denominator;  // the weighted norm, diverging as beta -> (sp-1)/p
};

/// Rayleigh quotients of phi_beta along a beta schedule decreasing toward
/// (sp-1)/p; every quotient is an upper bound for the half-line constant.
std::vector<SharpnessPoint> sharpness_scan(const SPParams& params,
                                           const std::vector<double>& beta_schedule,
                                           const CutoffPsi& cutoff,
                                           const QuadratureSpec& spec = {});

/// (1/2)[u]^p + (1/2)[v]^p - [((u^p+v^p)/2)^{1/p}]^p for nonnegative u, v.
double hidden_convexity_check(const Profile1D& u, const Profile1D& v, const SPParams& params,
                              const QuadratureSpec& spec = {});

/// sup_x int |phi(x)-phi(y)|^p/|x-y|^{1+sp} dy against the constructive
/// interpolation bound (optimized split radius), N = 1.
bool besov_bound_check(const Profile1D& phi, const SPParams& params,
                       const QuadratureSpec& spec = {});

/// Both product-rule seminorm estimates for u on (0,M) truncated by eta.
bool product_rule_bound_check(const Profile1D& u, const CutoffPsi& eta, double M,
                              const SPParams& params, const QuadratureSpec& spec = {});

/// Nodes spanning [a,b], clustered algebraically toward both endpoints.
struct Mesh1D {
    Eigen::VectorXd nodes;

    static Mesh1D graded(double a, double b, int cells, double gamma);
    /// Grading exponent used by the eigenvalue bounds: max(1/s, 1/(1-s)),
    /// capped at 4.
    static double default_grading(double s);
    int cells() const { return static_cast<int>(nodes.size()) - 1; }
    void validate() const;
};

struct AssembledForms {
    Eigen::MatrixXd K;   // full-line Gagliardo form of the interior hats
    Eigen::MatrixXd Mw;  // weighted mass, weight d_I^{-2s}
};

/// Dense p = 2 forms over interior hat functions extended by zero. K uses the
/// exact double-antiderivative kernel for touching element pairs and tensor
/// Gauss panels for separated pairs; Mw is elementwise exact.
AssembledForms assemble_forms(const Mesh1D& mesh, const Interval& domain, double s,
                              const QuadratureSpec& spec = {});

/// Smallest generalized eigenvalue of (K, Mw) per mesh resolution; each value
/// is an upper bound for h_{s,2} of the interval and the sequence is
/// non-increasing under nested refinement.
std::vector<double> discrete_hardy_upper_bound(const std::vector<int>& cell_counts,
                                               const Interval& domain, double s,
                                               const QuadratureSpec& spec = {});

/// Exact piecewise-linear fast paths (values at mesh nodes, zero extension).
double pl_seminorm2(const Mesh1D& mesh, const Eigen::VectorXd& values, double s);
double pl_weighted_norm2(const Mesh1D& mesh, const Eigen::VectorXd& values,
                         const Interval& domain, double s);
double pl_dyda_weighted2(const Mesh1D& mesh, const Eigen::VectorXd& values, double s);
Profile1D piecewise_linear_profile(const Mesh1D& mesh, const Eigen::VectorXd& values);

/// [u]^2 - Lambda_{s,2} int u^2 [1/(t-a)+1/(b-t)]^{2s} over (a,b) = the mesh
/// span; nonnegative by the transplanted-supersolution inequality.
double dyda_weight_check(const Mesh1D& mesh, const Eigen::VectorXd& values, double s,
                         const QuadratureSpec& spec = {});
double dyda_weight_check(const Profile1D& u, const Interval& domain, const SPParams& params,
                         const QuadratureSpec& spec = {});

} // namespace frachardy
