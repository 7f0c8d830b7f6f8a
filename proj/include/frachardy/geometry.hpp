#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "frachardy/errors.hpp"

namespace frachardy {

using Point = Eigen::VectorXd;

/// Convex domains with exact distance-to-boundary oracles. The distance is
/// extended by zero outside the closure, so that d^beta extended by zero is
/// dist(x)^beta guarded by dist(x) > 0.
struct HalfLine {
    double origin = 0.0;
    double direction = 1.0;  // +1: (origin, +inf), -1: (-inf, origin)
};

struct Interval {
    double a;
    double b;
};

struct HalfSpace {
    Eigen::VectorXd normal;  // unit outward normal
    double offset;           // domain = { x : <normal, x> < offset }
};

struct Ball {
    Eigen::VectorXd center;
    double radius;
};

struct PolytopeH {
    Eigen::MatrixXd normals;  // rows are unit outward normals a_i
    Eigen::VectorXd offsets;  // domain = { x : a_i . x < b_i for all i }
};

class ConvexDomain {
public:
    using Variant = std::variant<HalfLine, Interval, HalfSpace, Ball, PolytopeH>;

    explicit ConvexDomain(Variant v);

    int dimension() const { return dim_; }
    const Variant& shape() const { return shape_; }

    /// Distance to the boundary; 0 outside the closure.
    double dist(const Point& x) const;
    double dist(double x) const;  // one-dimensional domains

    /// The dilated domain mu * Omega (dilation about the origin).
    ConvexDomain scale(double mu) const;

    bool contains(const Point& x) const { return dist(x) > 0.0; }

private:
    Variant shape_;
    int dim_;
};

/// Supporting-hyperplane construction at the boundary point nearest to x:
/// returns true iff d(y) <= (signed distance of y to the supporting
/// hyperplane)_+ at every sample, which convexity forces.
bool supporting_bound_check(const ConvexDomain& domain, const Point& x,
                            const std::vector<Point>& samples);

} // namespace frachardy
