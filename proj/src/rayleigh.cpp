#include "frachardy/rayleigh.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "frachardy/parallel.hpp"

namespace frachardy {

namespace {

double pow_abs_p(double x, double p) {
    if (x == 0.0) return 0.0;
    if (p == 2.0) return x * x;
    return std::pow(std::abs(x), p);
}

double smoothstep5(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

} // namespace

double CutoffPsi::eval(double x) const {
    if (x <= plateau_end) return 1.0;
    if (x >= support_end) return 0.0;
    return 1.0 - smoothstep5((x - plateau_end) / (support_end - plateau_end));
}

Profile1D hat_profile(double a, double peak, double b) {
    if (!(a < peak && peak < b)) throw std::invalid_argument("hat_profile: need a < peak < b");
    Profile1D u;
    u.support_a = a;
    u.support_b = b;
    u.kinks = {peak};
    u.left_growth = 1.0;
    u.right_growth = 1.0;
    u.f = [a, peak, b](double x) {
        if (x <= a || x >= b) return 0.0;
        return (x <= peak) ? (x - a) / (peak - a) : (b - x) / (b - peak);
    };
    return u;
}

Profile1D bump_profile(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("bump_profile: need a < b");
    const double m = 0.5 * (a + b);
    Profile1D u;
    u.support_a = a;
    u.support_b = b;
    u.kinks = {m};
    u.left_growth = 3.0;
    u.right_growth = 3.0;
    u.f = [a, b, m](double x) {
        if (x <= a || x >= b) return 0.0;
        return (x <= m) ? smoothstep5(2.0 * (x - a) / (b - a))
                        : smoothstep5(2.0 * (b - x) / (b - a));
    };
    return u;
}

Profile1D truncated_power_profile(const SPParams& params, double beta, const CutoffPsi& psi) {
    if (!(psi.plateau_end > 0.0) || !(psi.support_end > psi.plateau_end))
        throw std::invalid_argument("truncated_power_profile: bad cutoff");
    Profile1D u;
    u.support_a = 0.0;
    u.support_b = psi.support_end;
    u.kinks = {psi.plateau_end};
    u.left_growth = beta;
    u.right_growth = 3.0;  // quintic joint vanishes cubically
    u.f = [beta, psi](double x) {
        if (x <= 0.0 || x >= psi.support_end) return 0.0;
        double pw = (beta == 0.0) ? 1.0 : std::pow(x, beta);
        return pw * psi.eval(x);
    };
    (void)params;
    return u;
}

Profile1D scaled_profile(const Profile1D& u, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("scaled_profile: need mu > 0");
    Profile1D v;
    v.support_a = mu * u.support_a;
    v.support_b = mu * u.support_b;
    for (double k : u.kinks) v.kinks.push_back(mu * k);
    v.left_growth = u.left_growth;
    v.right_growth = u.right_growth;
    RealFn base = u.f;
    double a = u.support_a, b = u.support_b;
    v.f = [base, mu, a, b](double x) {
        double t = x / mu;
        if (t <= a || t >= b) return 0.0;
        return base(t);
    };
    return v;
}

namespace {

// ---- generic double-integral engine ------------------------------------

// declared inner-integrand exponent at a support edge with growth e
double inner_edge_exponent(double e, double p) {
    if (e < 0.0) return e * p;
    if (e > 0.0 && e < 1.0) return e;
    return 0.0;
}

// int_{y in (x, ytop)} |u(x)-u(y)|^p |x-y|^{-1-sp} dy, ytop <= support_b.
double inner_one_sided(const Profile1D& u, double x, double ytop, double p, double sp,
                       const QuadratureSpec& spec) {
    if (!(ytop > x)) return 0.0;
    const double ux = u.eval(x);
    std::vector<double> marks;
    for (double k : u.kinks)
        if (k > x && k < ytop) marks.push_back(k - x);
    const bool hits_edge = std::abs(ytop - u.support_b) < 1e-14 * (1.0 + std::abs(ytop));
    marks.push_back(ytop - x);
    std::sort(marks.begin(), marks.end());
    auto f = [&](double r) {
        return pow_abs_p(u.eval(x + r) - ux, p) * std::pow(r, -1.0 - sp);
    };
    double total = 0.0;
    double lo = 0.0;
    for (std::size_t i = 0; i < marks.size(); ++i) {
        double hi = marks[i];
        if (hi <= lo) continue;
        const bool last = i + 1 == marks.size();
        const double top_exp =
            (last && hits_edge) ? inner_edge_exponent(u.right_growth, p) : 0.0;
        if (top_exp != 0.0) {
            // blow-up or fractional vanishing at the support edge y = ytop
            QuadratureSpec q = spec.with_exponents(lo == 0.0 ? p - 1.0 - sp : 0.0, top_exp);
            total += integrate_singular(f, lo, hi, q).value;
        } else {
            QuadratureSpec q = spec.with_exponents(p - 1.0 - sp, 0.0);
            total += integrate_algebraic_origin(f, lo, hi, q).value;
        }
        lo = hi;
    }
    return total;
}

// outer declared exponent at an S-endpoint
double outer_exponent(bool at_support_edge, bool window_extends_beyond, double e, double p,
                      double sp, const char* what) {
    double expo = 0.0;
    if (at_support_edge) {
        if (e != 0.0)
            expo = std::min(e * p - sp, 0.0);
        else if (window_extends_beyond)
            expo = -sp;
    }
    if (expo <= -1.0)
        throw InfiniteSeminorm(std::string("infinite seminorm: ") + what);
    return expo;
}

struct OuterPieces {
    std::vector<double> splits;  // includes both ends
    double left_exp;
    double right_exp;
};

OuterPieces outer_plan(const Profile1D& u, double slo, double shi, bool beyond_left,
                       bool beyond_right, double p, double sp) {
    OuterPieces plan;
    plan.splits.push_back(slo);
    for (double k : u.kinks)
        if (k > slo && k < shi) plan.splits.push_back(k);
    plan.splits.push_back(shi);
    const bool left_is_edge = std::abs(slo - u.support_a) < 1e-14 * (1.0 + std::abs(slo));
    const bool right_is_edge = std::abs(shi - u.support_b) < 1e-14 * (1.0 + std::abs(shi));
    plan.left_exp = outer_exponent(left_is_edge, beyond_left, u.left_growth, p, sp,
                                   "left support edge");
    plan.right_exp = outer_exponent(right_is_edge, beyond_right, u.right_growth, p, sp,
                                    "right support edge");
    return plan;
}

double integrate_outer(const OuterPieces& plan, const RealFn& g, const QuadratureSpec& spec) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < plan.splits.size(); ++i) {
        double lo = plan.splits[i];
        double hi = plan.splits[i + 1];
        double le = (i == 0) ? plan.left_exp : 0.0;
        double re = (i + 2 == plan.splits.size()) ? plan.right_exp : 0.0;
        total += integrate_singular(g, lo, hi, spec.with_exponents(le, re)).value;
    }
    return total;
}

} // namespace

double gagliardo_fullline(const Profile1D& u, const SPParams& params,
                          const QuadratureSpec& spec) {
    if (!std::isfinite(u.support_a) || !std::isfinite(u.support_b) ||
        !(u.support_a < u.support_b))
        throw std::invalid_argument("gagliardo_fullline: need a bounded support");
    const double p = params.p;
    const double sp = params.sp();
    const double a = u.support_a, b = u.support_b;

    OuterPieces plan = outer_plan(u, a, b, true, true, p, sp);
    auto core = [&](double x) { return inner_one_sided(u, x, b, p, sp, spec); };
    double dss = 2.0 * integrate_outer(plan, core, spec);

    // cross terms against the complement of the support, tails in closed form
    auto cross = [&](double x) {
        return pow_abs_p(u.eval(x), p) *
               (std::pow(x - a, -sp) + std::pow(b - x, -sp)) / sp;
    };
    double dcross = 2.0 * integrate_outer(plan, cross, spec);
    return dss + dcross;
}

double gagliardo_regional(const Profile1D& u, double e1, double e2, const SPParams& params,
                          const QuadratureSpec& spec) {
    if (!(e1 < e2)) throw std::invalid_argument("gagliardo_regional: need e1 < e2");
    const double p = params.p;
    const double sp = params.sp();
    const double slo = std::max(e1, u.support_a);
    const double shi = std::min(e2, u.support_b);
    if (!(slo < shi)) return 0.0;

    OuterPieces plan = outer_plan(u, slo, shi, e1 < u.support_a, e2 > u.support_b, p, sp);
    auto core = [&](double x) { return inner_one_sided(u, x, shi, p, sp, spec); };
    double dss = 2.0 * integrate_outer(plan, core, spec);

    // numeric cross terms over the zero pieces of E
    const bool left_gap = e1 < slo;
    const bool right_gap = e2 > shi;
    double dcross = 0.0;
    if (left_gap || right_gap) {
        auto wfun = [&](double x) {
            double w = 0.0;
            if (left_gap) {
                double zlo = x - slo;
                double zhi = x - e1;
                w += integrate_singular([sp](double z) { return std::pow(z, -1.0 - sp); },
                                        zlo, zhi, spec.with_exponents(0.0, 0.0))
                         .value;
            }
            if (right_gap) {
                double zlo = shi - x;
                if (std::isfinite(e2)) {
                    double zhi = e2 - x;
                    w += integrate_singular([sp](double z) { return std::pow(z, -1.0 - sp); },
                                            zlo, zhi, spec.with_exponents(0.0, 0.0))
                             .value;
                } else {
                    w += integrate_improper([sp](double z) { return std::pow(z, -1.0 - sp); },
                                            zlo, spec.with_exponents(0.0, sp - 1.0))
                             .value;
                }
            }
            return pow_abs_p(u.eval(x), p) * w;
        };
        dcross = 2.0 * integrate_outer(plan, wfun, spec);
    }
    return dss + dcross;
}

double weighted_pnorm(const Profile1D& u, const ConvexDomain& domain, const SPParams& params,
                      const QuadratureSpec& spec) {
    if (domain.dimension() != 1)
        throw std::invalid_argument("weighted_pnorm: domain must be one-dimensional");
    const double p = params.p;
    const double sp = params.sp();

    // domain feature points: boundary points and the distance kink
    std::vector<double> features;
    if (std::holds_alternative<Interval>(domain.shape())) {
        const auto& I = std::get<Interval>(domain.shape());
        features = {I.a, 0.5 * (I.a + I.b), I.b};
    } else if (std::holds_alternative<HalfLine>(domain.shape())) {
        features = {std::get<HalfLine>(domain.shape()).origin};
    } else {
        throw std::invalid_argument("weighted_pnorm: unsupported 1d domain variant");
    }

    const double a = u.support_a, b = u.support_b;
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("weighted_pnorm: need a bounded support");
    std::vector<double> splits{a, b};
    for (double k : u.kinks)
        if (k > a && k < b) splits.push_back(k);
    for (double c : features)
        if (c > a && c < b) splits.push_back(c);
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());

    auto boundary_dist_zero = [&](double x) {
        return domain.dist(x) == 0.0 ||
               std::any_of(features.begin(), features.end(), [&](double c) {
                   return std::abs(c - x) < 1e-14 * (1.0 + std::abs(c)) &&
                          domain.dist(c) <= 0.0;
               });
    };

    auto growth_at = [&](double x) {
        if (std::abs(x - a) < 1e-14 * (1.0 + std::abs(a))) return u.left_growth;
        if (std::abs(x - b) < 1e-14 * (1.0 + std::abs(b))) return u.right_growth;
        return 0.0;  // u continuous and nonzero at interior split points
    };

    auto piece_exponent = [&](double x, const char* what) {
        const bool at_edge = std::abs(x - a) < 1e-14 * (1.0 + std::abs(a)) ||
                             std::abs(x - b) < 1e-14 * (1.0 + std::abs(b));
        double e = 0.0;
        if (at_edge) e += growth_at(x) * p;
        if (boundary_dist_zero(x)) e -= sp;
        if (e <= -1.0)
            throw InfiniteSeminorm(std::string("divergent weighted norm at ") + what);
        return e;
    };

    auto f = [&](double x) {
        double d = domain.dist(x);
        if (d <= 0.0) return 0.0;
        return pow_abs_p(u.eval(x), p) * std::pow(d, -sp);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
        double lo = splits[i], hi = splits[i + 1];
        // skip pieces fully outside the domain
        double mid = 0.5 * (lo + hi);
        if (domain.dist(mid) <= 0.0) continue;
        QuadratureSpec q = spec.with_exponents(piece_exponent(lo, "left piece end"),
                                               piece_exponent(hi, "right piece end"));
        total += integrate_singular(f, lo, hi, q).value;
    }
    return total;
}

double hardy_quotient(const Profile1D& u, const ConvexDomain& domain, const SPParams& params,
                      const QuadratureSpec& spec) {
    double num = gagliardo_fullline(u, params, spec);
    double den = weighted_pnorm(u, domain, params, spec);
    if (!(den > 0.0)) throw std::invalid_argument("hardy_quotient: zero weighted norm");
    return num / den;
}

double seminorm_split_check(const Profile1D& u, const SPParams& params,
                            const QuadratureSpec& spec) {
    if (!(u.support_a > 0.0))
        throw std::invalid_argument("seminorm_split_check: u must be supported in (0,inf)");
    double full = gagliardo_fullline(u, params, spec);
    double regional = gagliardo_regional(u, 0.0, std::numeric_limits<double>::infinity(),
                                         params, spec);
    ConvexDomain half{HalfLine{0.0, 1.0}};
    double weight = weighted_pnorm(u, half, params, spec);
    return std::abs(full - regional - (2.0 / params.sp()) * weight);
}

std::vector<SharpnessPoint> sharpness_scan(const SPParams& params,
                                           const std::vector<double>& beta_schedule,
                                           const CutoffPsi& cutoff,
                                           const QuadratureSpec& spec) {
    const double bmin = (params.sp() - 1.0) / params.p;
    for (double b : beta_schedule)
        if (!(b > bmin))
            throw InadmissibleExponent("sharpness_scan: inadmissible schedule entry");
    std::vector<SharpnessPoint> out(beta_schedule.size());
    ConvexDomain half{HalfLine{0.0, 1.0}};
    parallel_for(beta_schedule.size(), [&](std::size_t i) {
        Profile1D phi = truncated_power_profile(params, beta_schedule[i], cutoff);
        double num = gagliardo_fullline(phi, params, spec);
        double den = weighted_pnorm(phi, half, params, spec);
        out[i] = SharpnessPoint{beta_schedule[i], num / den, den};
    });
    return out;
}

double hidden_convexity_check(const Profile1D& u, const Profile1D& v, const SPParams& params,
                              const QuadratureSpec& spec) {
    const double p = params.p;
    Profile1D sigma;
    sigma.support_a = std::min(u.support_a, v.support_a);
    sigma.support_b = std::max(u.support_b, v.support_b);
    sigma.kinks = u.kinks;
    for (double k : v.kinks) sigma.kinks.push_back(k);
    // support edges of either factor are kinks of sigma unless shared
    for (double e : {u.support_a, u.support_b, v.support_a, v.support_b})
        if (e > sigma.support_a && e < sigma.support_b) sigma.kinks.push_back(e);
    std::sort(sigma.kinks.begin(), sigma.kinks.end());
    sigma.kinks.erase(std::unique(sigma.kinks.begin(), sigma.kinks.end()), sigma.kinks.end());
    auto le = [&] {
        if (u.support_a == sigma.support_a && v.support_a == sigma.support_a)
            return std::min(u.left_growth, v.left_growth);
        return (u.support_a == sigma.support_a) ? u.left_growth : v.left_growth;
    };
    auto re = [&] {
        if (u.support_b == sigma.support_b && v.support_b == sigma.support_b)
            return std::min(u.right_growth, v.right_growth);
        return (u.support_b == sigma.support_b) ? u.right_growth : v.right_growth;
    };
    sigma.left_growth = le();
    sigma.right_growth = re();
    const Profile1D* up = &u;
    const Profile1D* vp = &v;
    sigma.f = [up, vp, p](double x) {
        double a = up->eval(x), b = vp->eval(x);
        if (a < 0.0 || b < 0.0)
            throw std::invalid_argument("hidden_convexity_check: profiles must be >= 0");
        return std::pow(0.5 * (std::pow(a, p) + std::pow(b, p)), 1.0 / p);
    };
    double su = gagliardo_fullline(u, params, spec);
    double sv = gagliardo_fullline(v, params, spec);
    double ss = gagliardo_fullline(sigma, params, spec);
    return 0.5 * su + 0.5 * sv - ss;
}

bool besov_bound_check(const Profile1D& phi, const SPParams& params,
                       const QuadratureSpec& spec) {
    const double p = params.p;
    const double s = params.s;
    const double sp = params.sp();
    const double a = phi.support_a, b = phi.support_b;

    // sup over a grid of the one-point Gagliardo integral
    double lhs = 0.0;
    const int n = 64;
    for (int i = 0; i <= n; ++i) {
        double x = a + (b - a) * i / n;
        double v = inner_one_sided(phi, x, b, p, sp, spec);
        // mirrored profile turns the y < x side into a y > x computation
        Profile1D mir = phi;
        mir.support_a = -b;
        mir.support_b = -a;
        mir.kinks.clear();
        for (double k : phi.kinks) mir.kinks.push_back(-k);
        std::sort(mir.kinks.begin(), mir.kinks.end());
        std::swap(mir.left_growth, mir.right_growth);
        RealFn base = phi.f;
        mir.f = [base, a, b](double t) {
            double y = -t;
            if (y <= a || y >= b) return 0.0;
            return base(y);
        };
        v += inner_one_sided(mir, -x, -a, p, sp, spec);
        double px = phi.eval(x);
        if (px != 0.0)
            v += pow_abs_p(px, p) *
                 (std::pow(x - a, -sp) + std::pow(b - x, -sp)) / sp;
        lhs = std::max(lhs, v);
    }

    // constructive constant of the interpolation bound, N = 1: optimize
    // (2/p)(A^p delta^{p(1-s)}/(1-s) + 2^p B^p delta^{-sp}/s) over delta
    double A = 0.0, B = 0.0;
    const int m = 4096;
    const double h = (b - a) / m;
    for (int i = 0; i < m; ++i) {
        double x = a + h * (i + 0.5);
        B = std::max(B, std::abs(phi.eval(x)));
        A = std::max(A, std::abs(phi.eval(x + 0.49 * h) - phi.eval(x - 0.49 * h)) /
                            (0.98 * h));
    }
    const double q1 = p * (1.0 - s);
    const double q2 = sp;
    const double ca = std::pow(A, p) / (1.0 - s);
    const double cb = std::pow(2.0, p) * std::pow(B, p) / s;
    double delta = std::pow(q2 * cb / (q1 * ca), 1.0 / p);
    double rhs = (2.0 / p) * (ca * std::pow(delta, q1) + cb * std::pow(delta, -q2));
    return lhs <= rhs * (1.0 + 1e-9);
}

bool product_rule_bound_check(const Profile1D& u, const CutoffPsi& eta, double M,
                              const SPParams& params, const QuadratureSpec& spec) {
    if (!(u.support_a >= 0.0) || !(u.support_b <= M))
        throw std::invalid_argument("product_rule_bound_check: u must live in (0,M)");
    const double p = params.p;
    const double s = params.s;
    const double sp = params.sp();

    Profile1D ue = u;
    RealFn base = u.f;
    ue.f = [base, eta](double x) { return base(x) * eta.eval(x); };
    if (eta.plateau_end > ue.support_a && eta.plateau_end < ue.support_b)
        ue.kinks.push_back(eta.plateau_end);
    if (eta.support_end < ue.support_b) {
        ue.support_b = eta.support_end;
        ue.right_growth = 3.0;
    }
    std::sort(ue.kinks.begin(), ue.kinks.end());

    double full = gagliardo_fullline(ue, params, spec);
    double reg_ue = gagliardo_regional(ue, 0.0, M, params, spec);
    ConvexDomain half{HalfLine{0.0, 1.0}};
    double weight_ue = weighted_pnorm(ue, half, params, spec);

    // plain L^p norms by direct quadrature
    auto lp_norm_p = [&](const Profile1D& w) {
        auto f = [&](double x) { return pow_abs_p(w.eval(x), p); };
        std::vector<double> splits{w.support_a, w.support_b};
        for (double k : w.kinks) splits.push_back(k);
        std::sort(splits.begin(), splits.end());
        double tot = 0.0;
        for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
            double le = (i == 0 && w.left_growth < 0.0) ? w.left_growth * p : 0.0;
            double re = (i + 2 == splits.size() && w.right_growth < 0.0)
                            ? w.right_growth * p
                            : 0.0;
            tot += integrate_singular(f, splits[i], splits[i + 1],
                                      spec.with_exponents(le, re))
                       .value;
        }
        return tot;
    };
    double unorm_p = lp_norm_p(u);

    const double etaprime = eta.derivative_bound();
    // (eq 1): full <= reg + (2/(sp)) weight + (2 M^{p-sp}/(sp)) |eta'|^p |u|_p^p
    double rhs1 = reg_ue + (2.0 / sp) * weight_ue +
                  (2.0 * std::pow(M, p - sp) / sp) * std::pow(etaprime, p) * unorm_p;
    bool ok1 = full <= rhs1 * (1.0 + 1e-9);

    // (eq 2): [u eta]_{(0,M)} <= |eta|_inf [u]_{(0,M)} + S_eta^{1/p} |u|_p with
    // S_eta the constructive one-point bound for eta (A = |eta'|, B = 1)
    double reg_u = gagliardo_regional(u, 0.0, M, params, spec);
    const double q1 = p * (1.0 - s);
    const double q2 = sp;
    const double ca = std::pow(etaprime, p) / (1.0 - s);
    const double cb = std::pow(2.0, p) / s;
    double delta = std::pow(q2 * cb / (q1 * ca), 1.0 / p);
    double S_eta = (2.0 / p) * (ca * std::pow(delta, q1) + cb * std::pow(delta, -q2));
    double rhs2 = std::pow(std::pow(reg_u, 1.0 / p) +
                               std::pow(S_eta, 1.0 / p) * std::pow(unorm_p, 1.0 / p),
                           p);
    bool ok2 = reg_ue <= rhs2 * (1.0 + 1e-9);
    return ok1 && ok2;
}

// ---- meshes and the p = 2 discrete forms --------------------------------

Mesh1D Mesh1D::graded(double a, double b, int cells, double gamma) {
    if (cells < 2) throw std::invalid_argument("Mesh1D: need at least 2 cells");
    if (!(a < b)) throw std::invalid_argument("Mesh1D: need a < b");
    Mesh1D m;
    m.nodes.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        double xi = static_cast<double>(i) / cells;
        double g = (xi <= 0.5) ? 0.5 * std::pow(2.0 * xi, gamma)
                               : 1.0 - 0.5 * std::pow(2.0 * (1.0 - xi), gamma);
        m.nodes(i) = a + (b - a) * g;
    }
    m.nodes(0) = a;
    m.nodes(cells) = b;
    m.validate();
    return m;
}

double Mesh1D::default_grading(double s) {
    return std::min(4.0, std::max(1.0 / s, 1.0 / (1.0 - s)));
}

void Mesh1D::validate() const {
    if (nodes.size() < 3) throw std::invalid_argument("Mesh1D: need >= 3 nodes");
    for (Eigen::Index i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes(i) < nodes(i + 1)))
            throw std::invalid_argument("Mesh1D: nodes must be strictly increasing");
}

namespace {

// second antiderivative of the p = 2 kernel pairing: P'' (r) = Q(r),
// B(u,v) = sum_e sum_f u'_e v'_f * boxQ(e,f)
double Pfun(double r, double s) {
    r = std::abs(r);
    if (r == 0.0) return 0.0;
    if (s == 0.5) return 1.5 * r * r - r * r * std::log(r);
    return std::pow(r, 3.0 - 2.0 * s) /
           (s * (2.0 * s - 1.0) * (2.0 - 2.0 * s) * (3.0 - 2.0 * s));
}

constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

double boxQ_gauss(double a1, double b1, double a2, double b2, double s) {
    const double xm = 0.5 * (a1 + b1), xh = 0.5 * (b1 - a1);
    const double ym = 0.5 * (a2 + b2), yh = 0.5 * (b2 - a2);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = xm + xh * kGx[i];
        for (int j = 0; j < 8; ++j) {
            const double r = std::abs(x - (ym + yh * kGx[j]));
            double q = (s == 0.5) ? -2.0 * std::log(r)
                                  : std::pow(r, 1.0 - 2.0 * s) / (s * (2.0 * s - 1.0));
            sum += kGw[i] * kGw[j] * q;
        }
    }
    return xh * yh * sum;
}

// int over [a1,b1] x [a2,b2] of |x-y|^{-1-2s} paired kernel box. Exact
// P-difference only for touching pairs (the far-pair difference cancels
// catastrophically); Gauss panels with subdivision otherwise.
double boxQ(double a1, double b1, double a2, double b2, double s, int depth = 0) {
    const double gap = std::max(a2 - b1, a1 - b2);
    const double d = std::max(b1 - a1, b2 - a2);
    if (gap <= 0.0)
        return -(Pfun(b1 - b2, s) - Pfun(b1 - a2, s) - Pfun(a1 - b2, s) + Pfun(a1 - a2, s));
    if (gap >= 2.0 * d || depth > 24) return boxQ_gauss(a1, b1, a2, b2, s);
    if (b1 - a1 >= b2 - a2) {
        double m = 0.5 * (a1 + b1);
        return boxQ(a1, m, a2, b2, s, depth + 1) + boxQ(m, b1, a2, b2, s, depth + 1);
    }
    double m = 0.5 * (a2 + b2);
    return boxQ(a1, b1, a2, m, s, depth + 1) + boxQ(a1, b1, m, b2, s, depth + 1);
}

// exact moment int_{dlo}^{dhi} d^{k - 2s} dd (log branch at k = 2s - 1)
double weight_moment(double dlo, double dhi, int k, double s) {
    const double e = k - 2.0 * s + 1.0;
    if (std::abs(e) < 1e-14) return std::log(dhi / dlo);
    return (std::pow(dhi, e) - std::pow(dlo, e)) / e;
}

} // namespace

AssembledForms assemble_forms(const Mesh1D& mesh, const Interval& domain, double s,
                              const QuadratureSpec& spec) {
    (void)spec;
    mesh.validate();
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("assemble_forms: need 0 < s < 1");
    if (mesh.nodes(0) != domain.a || mesh.nodes(mesh.nodes.size() - 1) != domain.b)
        throw std::invalid_argument("assemble_forms: mesh must span the domain");
    const int n = static_cast<int>(mesh.nodes.size());
    const int ni = n - 2;  // interior hats
    if (ni < 1) throw std::invalid_argument("assemble_forms: no interior nodes");
    AssembledForms forms;
    forms.K = Eigen::MatrixXd::Zero(ni, ni);
    forms.Mw = Eigen::MatrixXd::Zero(ni, ni);

    // stiffness: slopes of hat i on element e are +-1/h
    const auto& x = mesh.nodes;
    std::vector<double> h(n - 1);
    for (int e = 0; e < n - 1; ++e) h[e] = x(e + 1) - x(e);
    std::vector<std::vector<double>> box(n - 1, std::vector<double>(n - 1));
    parallel_for(static_cast<std::size_t>(n - 1), [&](std::size_t e) {
        for (int f = 0; f < n - 1; ++f)
            box[e][f] = boxQ(x(e), x(e + 1), x(f), x(f + 1), s);
    });
    for (int e = 0; e < n - 1; ++e) {
        for (int f = 0; f < n - 1; ++f) {
            const double w = box[e][f];
            for (int i : {e - 1, e}) {
                if (i < 0 || i >= ni) continue;
                const double si = (i + 1 == e + 1) ? 1.0 / h[e] : -1.0 / h[e];
                for (int j : {f - 1, f}) {
                    if (j < 0 || j >= ni) continue;
                    const double sj = (j + 1 == f + 1) ? 1.0 / h[f] : -1.0 / h[f];
                    forms.K(i, j) += si * sj * w;
                }
            }
        }
    }

    // weighted mass: exact elementwise, split at the distance kink
    const double mid = 0.5 * (domain.a + domain.b);
    for (int e = 0; e < n - 1; ++e) {
        double l = x(e), r = x(e + 1);
        std::vector<std::pair<double, double>> segs;
        if (r <= mid || l >= mid)
            segs.emplace_back(l, r);
        else {
            segs.emplace_back(l, mid);
            segs.emplace_back(mid, r);
        }
        for (auto [sa, sb] : segs) {
            const bool left_side = 0.5 * (sa + sb) <= mid;
            // linear hat values in the local coordinate d (distance to the
            // nearer endpoint of the domain)
            const double ref = left_side ? domain.a : domain.b;
            const double sgn = left_side ? 1.0 : -1.0;
            const double dlo = left_side ? sa - ref : ref - sb;
            const double dhi = left_side ? sb - ref : ref - sa;
            for (int i : {e - 1, e}) {
                if (i < 0 || i >= ni) continue;
                // phi_i(t) on [l, r]: affine in t; express as alpha + beta d
                const double vl_i = (i + 1 == e) ? 1.0 : 0.0;
                const double vr_i = (i + 1 == e + 1) ? 1.0 : 0.0;
                const double slope_i = (vr_i - vl_i) / h[e];
                const double at_ref_i = vl_i + slope_i * (ref - l);
                const double alpha_i = at_ref_i;
                const double beta_i = sgn * slope_i;
                for (int j : {e - 1, e}) {
                    if (j < 0 || j >= ni) continue;
                    const double vl_j = (j + 1 == e) ? 1.0 : 0.0;
                    const double vr_j = (j + 1 == e + 1) ? 1.0 : 0.0;
                    const double slope_j = (vr_j - vl_j) / h[e];
                    const double alpha_j = vl_j + slope_j * (ref - l);
                    const double beta_j = sgn * slope_j;
                    const double c0 = alpha_i * alpha_j;
                    const double c1 = alpha_i * beta_j + alpha_j * beta_i;
                    const double c2 = beta_i * beta_j;
                    double v = 0.0;
                    if (c0 != 0.0) v += c0 * weight_moment(dlo, dhi, 0, s);
                    if (c1 != 0.0) v += c1 * weight_moment(dlo, dhi, 1, s);
                    if (c2 != 0.0) v += c2 * weight_moment(dlo, dhi, 2, s);
                    forms.Mw(i, j) += v;
                }
            }
        }
    }
    return forms;
}

std::vector<double> discrete_hardy_upper_bound(const std::vector<int>& cell_counts,
                                               const Interval& domain, double s,
                                               const QuadratureSpec& spec) {
    std::vector<double> out;
    out.reserve(cell_counts.size());
    const double gamma = Mesh1D::default_grading(s);
    for (int n : cell_counts) {
        Mesh1D mesh = Mesh1D::graded(domain.a, domain.b, n, gamma);
        AssembledForms forms = assemble_forms(mesh, domain, s, spec);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
            forms.K, forms.Mw, Eigen::EigenvaluesOnly);
        if (ges.info() != Eigen::Success)
            throw std::runtime_error("discrete_hardy_upper_bound: eigensolver failed");
        out.push_back(ges.eigenvalues()(0));
    }
    return out;
}

double pl_seminorm2(const Mesh1D& mesh, const Eigen::VectorXd& values, double s) {
    mesh.validate();
    const int n = static_cast<int>(mesh.nodes.size());
    if (values.size() != n) throw std::invalid_argument("pl_seminorm2: size mismatch");
    if (values(0) != 0.0 || values(n - 1) != 0.0)
        throw std::invalid_argument("pl_seminorm2: boundary values must vanish");
    const auto& x = mesh.nodes;
    double total = 0.0;
    std::vector<double> slope(n - 1);
    for (int e = 0; e < n - 1; ++e)
        slope[e] = (values(e + 1) - values(e)) / (x(e + 1) - x(e));
    for (int e = 0; e < n - 1; ++e) {
        if (slope[e] == 0.0) continue;
        for (int f = 0; f < n - 1; ++f) {
            if (slope[f] == 0.0) continue;
            total += slope[e] * slope[f] * boxQ(x(e), x(e + 1), x(f), x(f + 1), s);
        }
    }
    return total;
}

double pl_weighted_norm2(const Mesh1D& mesh, const Eigen::VectorXd& values,
                         const Interval& domain, double s) {
    mesh.validate();
    const int n = static_cast<int>(mesh.nodes.size());
    if (values.size() != n) throw std::invalid_argument("pl_weighted_norm2: size mismatch");
    const auto& x = mesh.nodes;
    const double mid = 0.5 * (domain.a + domain.b);
    double total = 0.0;
    for (int e = 0; e < n - 1; ++e) {
        double l = x(e), r = x(e + 1);
        double vl = values(e), vr = values(e + 1);
        double slope = (vr - vl) / (r - l);
        std::vector<std::pair<double, double>> segs;
        if (r <= mid || l >= mid)
            segs.emplace_back(l, r);
        else {
            segs.emplace_back(l, mid);
            segs.emplace_back(mid, r);
        }
        for (auto [sa, sb] : segs) {
            const bool left_side = 0.5 * (sa + sb) <= mid;
            const double ref = left_side ? domain.a : domain.b;
            const double sgn = left_side ? 1.0 : -1.0;
            const double dlo = left_side ? sa - ref : ref - sb;
            const double dhi = left_side ? sb - ref : ref - sa;
            const double at_ref = vl + slope * (ref - l);
            const double alpha = at_ref;
            const double beta = sgn * slope;
            // (alpha + beta d)^2 = alpha^2 + 2 alpha beta d + beta^2 d^2
            double v = alpha * alpha * weight_moment(dlo, dhi, 0, s) +
                       2.0 * alpha * beta * weight_moment(dlo, dhi, 1, s) +
                       beta * beta * weight_moment(dlo, dhi, 2, s);
            total += v;
        }
    }
    return total;
}

double pl_dyda_weighted2(const Mesh1D& mesh, const Eigen::VectorXd& values, double s) {
    mesh.validate();
    const int n = static_cast<int>(mesh.nodes.size());
    if (values.size() != n) throw std::invalid_argument("pl_dyda_weighted2: size mismatch");
    const auto& x = mesh.nodes;
    const double a = x(0), b = x(n - 1);
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    double total = 0.0;
    for (int e = 0; e < n - 1; ++e) {
        double l = x(e), r = x(e + 1);
        double vl = values(e), vr = values(e + 1);
        double slope = (vr - vl) / (r - l);
        auto f = [&](double t) {
            double u = vl + slope * (t - l);
            double w = std::pow(1.0 / (t - a) + 1.0 / (b - t), 2.0 * s);
            return u * u * w;
        };
        double le = (e == 0) ? 2.0 - 2.0 * s : 0.0;
        double re = (e == n - 2) ? 2.0 - 2.0 * s : 0.0;
        total += integrate_singular(f, l, r, spec.with_exponents(le, re)).value;
    }
    return total;
}

Profile1D piecewise_linear_profile(const Mesh1D& mesh, const Eigen::VectorXd& values) {
    mesh.validate();
    const int n = static_cast<int>(mesh.nodes.size());
    if (values.size() != n)
        throw std::invalid_argument("piecewise_linear_profile: size mismatch");
    Profile1D u;
    u.support_a = mesh.nodes(0);
    u.support_b = mesh.nodes(n - 1);
    for (int i = 1; i + 1 < n; ++i) u.kinks.push_back(mesh.nodes(i));
    u.left_growth = 1.0;
    u.right_growth = 1.0;
    Eigen::VectorXd xs = mesh.nodes;
    Eigen::VectorXd vs = values;
    u.f = [xs, vs](double t) {
        if (t <= xs(0) || t >= xs(xs.size() - 1)) return 0.0;
        // binary search for the element
        Eigen::Index lo = 0, hi = xs.size() - 1;
        while (hi - lo > 1) {
            Eigen::Index m = (lo + hi) / 2;
            if (xs(m) <= t)
                lo = m;
            else
                hi = m;
        }
        double w = (t - xs(lo)) / (xs(hi) - xs(lo));
        return vs(lo) * (1.0 - w) + vs(hi) * w;
    };
    return u;
}

double dyda_weight_check(const Mesh1D& mesh, const Eigen::VectorXd& values, double s,
                         const QuadratureSpec& spec) {
    double semi = pl_seminorm2(mesh, values, s);
    double weighted = pl_dyda_weighted2(mesh, values, s);
    double lam = lambda_sp(SPParams(s, 2.0), spec);
    return semi - lam * weighted;
}

double dyda_weight_check(const Profile1D& u, const Interval& domain, const SPParams& params,
                         const QuadratureSpec& spec) {
    if (params.p != 2.0)
        throw std::invalid_argument("dyda_weight_check: p = 2 only");
    double semi = gagliardo_fullline(u, params, spec);
    const double s = params.s;
    auto f = [&](double t) {
        double v = u.eval(t);
        double w = std::pow(1.0 / (t - domain.a) + 1.0 / (domain.b - t), 2.0 * s);
        return v * v * w;
    };
    std::vector<double> splits{u.support_a, u.support_b};
    for (double k : u.kinks) splits.push_back(k);
    std::sort(splits.begin(), splits.end());
    double weighted = 0.0;
    for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
        double le = 0.0, re = 0.0;
        if (i == 0 && u.support_a == domain.a) le = 2.0 * u.left_growth - 2.0 * s;
        if (i + 2 == splits.size() && u.support_b == domain.b)
            re = 2.0 * u.right_growth - 2.0 * s;
        weighted +=
            integrate_singular(f, splits[i], splits[i + 1], spec.with_exponents(le, re))
                .value;
    }
    double lam = lambda_sp(params, spec);
    return semi - lam * weighted;
}

} // namespace frachardy
