#include "frachardy/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace frachardy {

namespace {

constexpr double kUnitNormTol = 1e-12;

int shape_dimension(const ConvexDomain::Variant& v) {
    struct {
        int operator()(const HalfLine&) const { return 1; }
        int operator()(const Interval&) const { return 1; }
        int operator()(const HalfSpace& h) const { return static_cast<int>(h.normal.size()); }
        int operator()(const Ball& b) const { return static_cast<int>(b.center.size()); }
        int operator()(const PolytopeH& p) const { return static_cast<int>(p.normals.cols()); }
    } visitor;
    return std::visit(visitor, v);
}

void validate(const ConvexDomain::Variant& v) {
    if (std::holds_alternative<Interval>(v)) {
        const auto& i = std::get<Interval>(v);
        if (!(i.a < i.b)) throw std::invalid_argument("Interval: need a < b");
    } else if (std::holds_alternative<HalfLine>(v)) {
        const auto& h = std::get<HalfLine>(v);
        if (h.direction != 1.0 && h.direction != -1.0)
            throw std::invalid_argument("HalfLine: direction must be +1 or -1");
    } else if (std::holds_alternative<HalfSpace>(v)) {
        const auto& h = std::get<HalfSpace>(v);
        if (h.normal.size() < 1 || std::abs(h.normal.norm() - 1.0) > kUnitNormTol)
            throw std::invalid_argument("HalfSpace: normal must be unit length");
    } else if (std::holds_alternative<Ball>(v)) {
        const auto& b = std::get<Ball>(v);
        if (!(b.radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
        if (b.center.size() < 1) throw std::invalid_argument("Ball: empty center");
    } else {
        const auto& p = std::get<PolytopeH>(v);
        if (p.normals.rows() < 1 || p.normals.rows() != p.offsets.size())
            throw std::invalid_argument("PolytopeH: normals/offsets size mismatch");
        for (Eigen::Index i = 0; i < p.normals.rows(); ++i)
            if (std::abs(p.normals.row(i).norm() - 1.0) > kUnitNormTol)
                throw std::invalid_argument("PolytopeH: normals must be unit length");
        // nonempty interior: look for a strictly feasible point by successive
        // projection (Agmon-Motzkin); converges geometrically when a full-
        // dimensional interior exists.
        Eigen::VectorXd x = Eigen::VectorXd::Zero(p.normals.cols());
        const double margin = 1e-3 * (1.0 + p.offsets.cwiseAbs().maxCoeff());
        bool feasible = false;
        for (int it = 0; it < 2000 && !feasible; ++it) {
            double worst = -std::numeric_limits<double>::infinity();
            Eigen::Index wi = 0;
            for (Eigen::Index i = 0; i < p.normals.rows(); ++i) {
                double v = p.normals.row(i).dot(x) - p.offsets(i);
                if (v > worst) {
                    worst = v;
                    wi = i;
                }
            }
            if (worst < -0.5 * margin) {
                feasible = true;
            } else {
                x -= (worst + margin) * p.normals.row(wi).transpose();
            }
        }
        if (!feasible)
            throw std::invalid_argument("PolytopeH: no strictly interior point found");
    }
}

} // namespace

ConvexDomain::ConvexDomain(Variant v) : shape_(std::move(v)) {
    validate(shape_);
    dim_ = shape_dimension(shape_);
}

double ConvexDomain::dist(const Point& x) const {
    if (x.size() != dim_) throw std::invalid_argument("dist: dimension mismatch");
    struct Visitor {
        const Point& x;
        double operator()(const HalfLine& h) const {
            return std::max(0.0, h.direction * (x(0) - h.origin));
        }
        double operator()(const Interval& i) const {
            return std::max(0.0, std::min(x(0) - i.a, i.b - x(0)));
        }
        double operator()(const HalfSpace& h) const {
            return std::max(0.0, h.offset - h.normal.dot(x));
        }
        double operator()(const Ball& b) const {
            return std::max(0.0, b.radius - (x - b.center).norm());
        }
        double operator()(const PolytopeH& p) const {
            double d = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < p.normals.rows(); ++i)
                d = std::min(d, p.offsets(i) - p.normals.row(i).dot(x));
            return std::max(0.0, d);
        }
    };
    return std::visit(Visitor{x}, shape_);
}

double ConvexDomain::dist(double x) const {
    if (dim_ != 1) throw std::invalid_argument("dist(double): domain is not one-dimensional");
    Point p(1);
    p(0) = x;
    return dist(p);
}

ConvexDomain ConvexDomain::scale(double mu) const {
    if (!(mu > 0.0)) throw std::invalid_argument("scale: need mu > 0");
    struct Visitor {
        double mu;
        ConvexDomain::Variant operator()(const HalfLine& h) const {
            return HalfLine{mu * h.origin, h.direction};
        }
        ConvexDomain::Variant operator()(const Interval& i) const {
            return Interval{mu * i.a, mu * i.b};
        }
        ConvexDomain::Variant operator()(const HalfSpace& h) const {
            return HalfSpace{h.normal, mu * h.offset};
        }
        ConvexDomain::Variant operator()(const Ball& b) const {
            return Ball{mu * b.center, mu * b.radius};
        }
        ConvexDomain::Variant operator()(const PolytopeH& p) const {
            return PolytopeH{p.normals, mu * p.offsets};
        }
    };
    return ConvexDomain(std::visit(Visitor{mu}, shape_));
}

namespace {

// Outward unit normal of the supporting hyperplane at the boundary point
// nearest to the interior point x, plus the offset so that the hyperplane is
// { y : <n,y> = c } with the domain inside <n,y> < c.
void supporting_hyperplane(const ConvexDomain& domain, const Point& x, Eigen::VectorXd& n,
                           double& c) {
    struct Visitor {
        const Point& x;
        Eigen::VectorXd& n;
        double& c;
        void operator()(const HalfLine& h) const {
            n.resize(1);
            n(0) = -h.direction;
            c = -h.direction * h.origin;
        }
        void operator()(const Interval& i) const {
            n.resize(1);
            if (x(0) - i.a <= i.b - x(0)) {
                n(0) = -1.0;
                c = -i.a;
            } else {
                n(0) = 1.0;
                c = i.b;
            }
        }
        void operator()(const HalfSpace& h) const {
            n = h.normal;
            c = h.offset;
        }
        void operator()(const Ball& b) const {
            Eigen::VectorXd r = x - b.center;
            double nr = r.norm();
            if (nr == 0.0) {
                // any direction supports; pick the first axis
                n = Eigen::VectorXd::Zero(b.center.size());
                n(0) = 1.0;
            } else {
                n = r / nr;
            }
            c = n.dot(b.center) + b.radius;
        }
        void operator()(const PolytopeH& p) const {
            Eigen::Index best = 0;
            double d = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < p.normals.rows(); ++i) {
                double di = p.offsets(i) - p.normals.row(i).dot(x);
                if (di < d) {
                    d = di;
                    best = i;
                }
            }
            n = p.normals.row(best).transpose();
            c = p.offsets(best);
        }
    };
    std::visit(Visitor{x, n, c}, domain.shape());
}

} // namespace

bool supporting_bound_check(const ConvexDomain& domain, const Point& x,
                            const std::vector<Point>& samples) {
    if (!(domain.dist(x) > 0.0))
        throw std::invalid_argument("supporting_bound_check: x must be strictly interior");
    Eigen::VectorXd n;
    double c;
    supporting_hyperplane(domain, x, n, c);
    constexpr double tol = 1e-12;
    for (const Point& y : samples) {
        double halfspace_dist = std::max(0.0, c - n.dot(y));
        if (domain.dist(y) > halfspace_dist + tol) return false;
    }
    return true;
}

} // namespace frachardy
