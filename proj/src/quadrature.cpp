#include "frachardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace frachardy {

namespace {

// 7-15 Gauss-Kronrod pair (QUADPACK dqk15 abscissae/weights).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using PlainFn = std::function<double(double)>;

struct Panel {
    double a, b;
    double value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const PlainFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    double fc = f(c);
    double resg = kWg[3] * fc;
    double resk = kWgk[7] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        fv[j] = f1;
        fv[7 + j] = f2;
        double fsum = f1 + f2;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    }
    fv[14] = fc;
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[7 + j] - reskh));
    resasc *= std::abs(h);
    resabs *= std::abs(h);
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    err = std::max(err, 50.0 * eps * resabs);
    return Panel{a, b, resk * h, err};
}

// Heap-driven adaptive GK15. Returns false when the subdivision budget is
// exhausted before the tolerance is met (result then holds the partial).
bool adaptive_gk(const PlainFn& f, double a, double b, double rel_tol, double abs_tol,
                 int max_subdivisions, QuadratureResult& out) {
    std::priority_queue<Panel> heap;
    Panel p0 = gk15(f, a, b);
    double total = p0.value;
    double errsum = p0.err;
    heap.push(p0);
    int splits = 0;
    while (errsum > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (splits >= max_subdivisions || heap.empty()) {
            out = {total, errsum};
            return false;
        }
        Panel worst = heap.top();
        heap.pop();
        ++splits;
        double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) {
            errsum -= worst.err;  // at rounding resolution, cannot improve
            continue;
        }
        Panel left = gk15(f, worst.a, m);
        Panel right = gk15(f, m, worst.b);
        total += left.value + right.value - worst.value;
        errsum += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    out = {total, errsum};
    return true;
}

// tanh-sinh rule on (a,b); robust for integrable endpoint singularities.
// Endpoint offsets are produced without cancellation and handed to f as the
// signed distance to the nearest endpoint. The u-range extends dynamically:
// strong algebraic singularities slow the double-exponential tail decay.
bool tanh_sinh(const RealFn2& f, double a, double b, double rel_tol, double abs_tol,
               QuadratureResult& out) {
    const double L = b - a;
    const double umax = 7.5;
    auto eval_u = [&](double u) -> double {
        const double v = 0.5 * M_PI * std::sinh(u);
        const double da = L / (1.0 + std::exp(-2.0 * v));
        const double db = L / (1.0 + std::exp(2.0 * v));
        if (da <= 0.0 || db <= 0.0) return 0.0;
        const double x = (v >= 0.0) ? (b - db) : (a + da);
        const double xc = (da <= db) ? da : -db;
        const double ch = std::cosh(v);
        const double w = 0.5 * M_PI * std::cosh(u) / (ch * ch);
        const double g = f(x, xc) * w;
        return std::isfinite(g) ? g : 0.0;
    };
    auto sweep = [&](double h, int stride_from, int stride, double& sum) {
        int quiet = 0;
        for (int k = stride_from; k * h <= umax; k += stride) {
            double tp = eval_u(k * h);
            double tm = eval_u(-k * h);
            sum += tp + tm;
            double mag = std::abs(tp) + std::abs(tm);
            if (mag < 1e-22 * (std::abs(sum) + 1e-300))
                ++quiet;
            else
                quiet = 0;
            if (quiet >= 8) break;
        }
    };
    double h = 1.0;
    double sum = eval_u(0.0);
    sweep(h, 1, 1, sum);
    double prev = sum * h * 0.5 * L;
    double prev2 = prev;
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        sweep(h, 1, 2, sum);
        double cur = sum * h * 0.5 * L;
        double diff = std::abs(cur - prev);
        if (level >= 3 && diff <= std::max(abs_tol, rel_tol * std::abs(cur))) {
            out = {cur, std::max(diff, std::abs(cur - prev2))};
            return true;
        }
        prev2 = prev;
        prev = cur;
    }
    out = {prev, std::abs(prev - prev2)};
    return std::abs(prev - prev2) <= std::max(abs_tol * 100, 100 * rel_tol * std::abs(prev));
}

bool is_regular_exponent(double e) {
    return e == 0.0 || (e > 0.0 && e == std::floor(e));
}

// Substitution order for an endpoint exponent e: for an integrable
// singularity (e < 0) we need k(1+e)-1 >= 2; for a bounded fractional
// smoothness defect t^e (0 < e < 1) we need k*e >= 2. Returns 0 when the
// required order is impractical and tanh-sinh should be used instead.
double substitution_order(double e) {
    double kreal = (e < 0.0) ? 3.0 / (1.0 + e) : 2.0 / e;
    if (kreal > 48.0) return 0.0;
    return std::max(2.0, std::ceil(kreal));
}

// One half-interval [lo,hi] of the caller's (a,b); the possibly singular
// endpoint is lo for side = -1 and hi for side = +1. xc is kept relative to
// the singular endpoint of (a,b); near the interior midpoint the recomputed
// distance is exact enough.
QuadratureResult integrate_piece(const RealFn2& f, double lo, double hi, double exponent,
                                 int side, const QuadratureSpec& spec) {
    QuadratureResult res;
    PlainFn direct = [&f, lo, hi, side](double t) {
        const double xc = (side < 0) ? t - lo : t - hi;
        return f(t, xc);
    };
    // the fallback remaps the piece-relative offset onto the singular end
    RealFn2 anchored = [&f, lo, hi, side](double t, double xc) {
        if (side < 0) return f(t, (xc > 0.0) ? xc : t - lo);
        return f(t, (xc < 0.0) ? xc : t - hi);
    };
    if (is_regular_exponent(exponent)) {
        if (adaptive_gk(direct, lo, hi, spec.rel_tol, spec.abs_tol, spec.max_subdivisions,
                        res))
            return res;
        if (tanh_sinh(anchored, lo, hi, spec.rel_tol, spec.abs_tol, res)) return res;
        throw QuadratureFailure("quadrature failure: tolerance not met on regular piece",
                                res.value, res.err_est);
    }
    const double k = substitution_order(exponent);
    if (k > 0.0) {
        const double anchor = (side < 0) ? lo : hi;
        const double span = hi - lo;
        const double wtop = std::pow(span, 1.0 / k);
        PlainFn g = [&f, anchor, side, k, lo, hi](double w) -> double {
            const double d = std::pow(w, k);  // exact distance to the anchor
            if (d <= 0.0 || d >= hi - lo) return 0.0;
            // t may round onto the endpoint; f must take the position from xc
            const double t = (side < 0) ? anchor + d : anchor - d;
            const double xc = (side < 0) ? d : -d;
            return f(t, xc) * k * std::pow(w, k - 1.0);
        };
        if (adaptive_gk(g, 0.0, wtop, spec.rel_tol, spec.abs_tol, spec.max_subdivisions,
                        res))
            return res;
    }
    // strongly singular endpoint, or the substitution stalled
    if (tanh_sinh(anchored, lo, hi, spec.rel_tol, spec.abs_tol, res)) return res;
    throw QuadratureFailure("quadrature failure: singular piece did not converge",
                            res.value, res.err_est);
}

RealFn2 lift(const RealFn& f) {
    return [&f](double t, double) { return f(t); };
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 1)
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    if (left_exponent <= -1.0 || right_exponent <= -1.0)
        throw NonIntegrableEndpoint("non-integrable endpoint: declared exponent <= -1");
}

QuadratureResult integrate_singular(const RealFn2& f, double a, double b,
                                    const QuadratureSpec& spec) {
    spec.validate();
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate_singular: need finite a < b");
    const double m = 0.5 * (a + b);
    QuadratureResult left = integrate_piece(f, a, m, spec.left_exponent, -1, spec);
    QuadratureResult right = integrate_piece(f, m, b, spec.right_exponent, +1, spec);
    return {left.value + right.value, left.err_est + right.err_est};
}

QuadratureResult integrate_singular(const RealFn& f, double a, double b,
                                    const QuadratureSpec& spec) {
    return integrate_singular(lift(f), a, b, spec);
}

QuadratureResult integrate_algebraic_origin(const RealFn& f, double a, double b,
                                            const QuadratureSpec& spec) {
    spec.validate();
    if (!(a >= 0.0) || !(a < b) || !std::isfinite(b))
        throw std::invalid_argument("integrate_algebraic_origin: need 0 <= a < b finite");
    const double e = spec.left_exponent;
    QuadratureResult res;
    if (is_regular_exponent(e) || (a > 0.0 && b / a <= 4.0)) {
        // no effective singularity inside the window
        if (adaptive_gk(f, a, b, spec.rel_tol, spec.abs_tol, spec.max_subdivisions, res))
            return res;
        if (tanh_sinh(lift(f), a, b, spec.rel_tol, spec.abs_tol, res)) return res;
        throw QuadratureFailure("quadrature failure: origin-window piece", res.value,
                                res.err_est);
    }
    const double k = std::min(40.0, std::max(2.0, std::ceil(3.0 / (1.0 + e))));
    const double wlo = (a == 0.0) ? 0.0 : std::pow(a, 1.0 / k);
    const double whi = std::pow(b, 1.0 / k);
    PlainFn g = [&f, k, a, b](double w) -> double {
        const double r = std::pow(w, k);
        if (r <= a || r >= b) return 0.0;
        return f(r) * k * std::pow(w, k - 1.0);
    };
    if (adaptive_gk(g, wlo, whi, spec.rel_tol, spec.abs_tol, spec.max_subdivisions, res))
        return res;
    if (tanh_sinh(lift(g), wlo, whi, spec.rel_tol, spec.abs_tol, res)) return res;
    throw QuadratureFailure("quadrature failure: origin-anchored substitution", res.value,
                            res.err_est);
}

QuadratureResult integrate_improper(const RealFn2& f, double a, const QuadratureSpec& spec) {
    spec.validate();
    if (!std::isfinite(a)) throw std::invalid_argument("integrate_improper: a must be finite");
    RealFn2 g = [&f, a](double u, double uc) -> double {
        const double one_minus_u = (uc < 0.0) ? -uc : 1.0 - u;
        const double uu = (uc >= 0.0) ? uc : u;
        if (one_minus_u <= 0.0 || uu < 0.0) return 0.0;
        const double d = uu / one_minus_u;  // t - a
        const double t = a + d;
        if (!std::isfinite(t)) return 0.0;
        const double val = f(t, d) / (one_minus_u * one_minus_u);
        return std::isfinite(val) ? val : 0.0;
    };
    return integrate_singular(g, 0.0, 1.0, spec);
}

QuadratureResult integrate_improper(const RealFn& f, double a, const QuadratureSpec& spec) {
    return integrate_improper(lift(f), a, spec);
}

PVExcision PVExcision::geometric(Mode mode, double eps0, int levels) {
    PVExcision e;
    e.mode = mode;
    e.epsilon_schedule.reserve(levels);
    double eps = eps0;
    for (int k = 0; k < levels; ++k, eps *= 0.5) e.epsilon_schedule.push_back(eps);
    return e;
}

void PVExcision::validate() const {
    if (epsilon_schedule.empty())
        throw std::invalid_argument("PVExcision: empty epsilon schedule");
    if (!(epsilon_schedule.back() > 0.0))
        throw std::invalid_argument("PVExcision: last epsilon must be > 0");
    for (std::size_t i = 1; i < epsilon_schedule.size(); ++i)
        if (!(epsilon_schedule[i] < epsilon_schedule[i - 1]))
            throw std::invalid_argument("PVExcision: schedule must be strictly decreasing");
}

// Iterated Aitken delta-squared acceleration over a partial-sum trace.
std::pair<double, double> extrapolate_sequence(const std::vector<double>& seq) {
    std::vector<double> cur = seq;
    double best = cur.back();
    double err = cur.size() >= 2 ? std::abs(cur.back() - cur[cur.size() - 2])
                                 : std::numeric_limits<double>::infinity();
    while (cur.size() >= 3) {
        std::vector<double> nxt;
        nxt.reserve(cur.size() - 2);
        for (std::size_t i = 0; i + 2 < cur.size(); ++i) {
            double d1 = cur[i + 1] - cur[i];
            double d2 = cur[i + 2] - cur[i + 1];
            double den = d2 - d1;
            if (std::abs(den) < 1e-300) {
                nxt.push_back(cur[i + 2]);
                continue;
            }
            nxt.push_back(cur[i + 2] - d2 * d2 / den);
        }
        if (nxt.size() >= 2) {
            double cand = std::abs(nxt.back() - nxt[nxt.size() - 2]);
            if (cand < err) {
                err = cand;
                best = nxt.back();
            }
        } else if (!nxt.empty()) {
            best = nxt.back();
        }
        cur = std::move(nxt);
    }
    return {best, err};
}

PVResult principal_value(const RealFn& f, double t0, double a, double b,
                         const PVExcision& excision, const QuadratureSpec& spec) {
    spec.validate();
    excision.validate();
    if (!(a < t0 && t0 < b))
        throw std::invalid_argument("principal_value: t0 must lie in (a,b)");
    if (excision.mode == PVExcision::Mode::relative && t0 == 0.0)
        throw std::invalid_argument("principal_value: relative excision undefined at t0 = 0");
    const double scale = (excision.mode == PVExcision::Mode::relative) ? std::abs(t0) : 1.0;
    std::vector<double> radii;
    radii.reserve(excision.epsilon_schedule.size());
    for (double eps : excision.epsilon_schedule) {
        double r = eps * scale;
        if (!(r < std::min(t0 - a, b - t0)))
            throw std::invalid_argument("principal_value: excision radius exceeds interval");
        radii.push_back(r);
    }

    PVResult out;
    QuadratureSpec inner = spec;
    inner.left_exponent = spec.left_exponent;
    inner.right_exponent = 0.0;
    QuadratureResult l0 = integrate_singular(f, a, t0 - radii[0], inner);
    inner.left_exponent = 0.0;
    inner.right_exponent = spec.right_exponent;
    QuadratureResult r0 = integrate_singular(f, t0 + radii[0], b, inner);
    double partial = l0.value + r0.value;
    double qerr = l0.err_est + r0.err_est;
    out.trace.emplace_back(excision.epsilon_schedule[0], partial);

    QuadratureSpec mid = spec.with_exponents(0.0, 0.0);
    std::vector<double> partials{partial};
    for (std::size_t k = 1; k < radii.size(); ++k) {
        QuadratureResult dl = integrate_singular(f, t0 - radii[k - 1], t0 - radii[k], mid);
        QuadratureResult dr = integrate_singular(f, t0 + radii[k], t0 + radii[k - 1], mid);
        partial += dl.value + dr.value;
        qerr += dl.err_est + dr.err_est;
        out.trace.emplace_back(excision.epsilon_schedule[k], partial);
        partials.push_back(partial);
    }

    auto [value, exerr] = extrapolate_sequence(partials);
    out.value = value;
    out.err_est = std::max(exerr, qerr);

    const double tol = std::max(100.0 * spec.abs_tol, 100.0 * spec.rel_tol * std::abs(value));
    const double last_diff = partials.size() >= 2
                                 ? std::abs(partials.back() - partials[partials.size() - 2])
                                 : std::numeric_limits<double>::infinity();
    bool raw_cauchy = last_diff <= tol;
    // non-Cauchy detection: trailing raw differences must not keep growing
    bool growing = false;
    if (partials.size() >= 4) {
        double d1 = std::abs(partials[partials.size() - 3] - partials[partials.size() - 4]);
        double d2 = std::abs(partials[partials.size() - 2] - partials[partials.size() - 3]);
        double d3 = std::abs(partials.back() - partials[partials.size() - 2]);
        growing = d3 > 1.2 * d2 && d2 > 1.2 * d1 && d3 > tol;
    }
    // accept when the extrapolation clearly beats the raw trace: the Aitken
    // plateau is then resolved even if the limit is ~0 in relative terms
    out.converged = !growing && (raw_cauchy || exerr <= tol || exerr <= 1e-4 * last_diff);
    return out;
}

double pv_value(const PVResult& r) {
    if (!r.converged)
        throw QuadratureFailure("PV divergence: excision trace is not Cauchy", r.value,
                                r.err_est);
    return r.value;
}

} // namespace frachardy
