#include <doctest.h>

#include <cmath>
#include <random>

#include "frachardy/geometry.hpp"

using namespace frachardy;

namespace {

Point pt(std::initializer_list<double> xs) {
    Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double v : xs) p(i++) = v;
    return p;
}

ConvexDomain unit_square() {
    PolytopeH p;
    p.normals.resize(4, 2);
    p.normals << 1, 0, -1, 0, 0, 1, 0, -1;
    p.offsets.resize(4);
    p.offsets << 1, 0, 1, 0;  // 0 < x < 1, 0 < y < 1
    return ConvexDomain(p);
}

ConvexDomain triangle() {
    // x > 0, y > 0, x + y < 1
    PolytopeH p;
    const double r = 1.0 / std::sqrt(2.0);
    p.normals.resize(3, 2);
    p.normals << -1, 0, 0, -1, r, r;
    p.offsets.resize(3);
    p.offsets << 0, 0, r;
    return ConvexDomain(p);
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("distances on each variant") {
    ConvexDomain interval{Interval{0.0, 1.0}};
    CHECK(interval.dist(0.3) == doctest::Approx(0.3));
    CHECK(interval.dist(0.75) == doctest::Approx(0.25));
    CHECK(interval.dist(-0.1) == 0.0);
    CHECK(interval.dist(1.0) == 0.0);

    Eigen::VectorXd n(3);
    n << 0, 0, -1;  // x_3 > 0
    ConvexDomain half{HalfSpace{n, 0.0}};
    CHECK(half.dist(pt({4.0, -7.0, 2.5})) == doctest::Approx(2.5));
    CHECK(half.dist(pt({0.0, 0.0, -1.0})) == 0.0);

    ConvexDomain ball{Ball{Eigen::VectorXd::Zero(2), 1.0}};
    CHECK(ball.dist(pt({0.5, 0.0})) == doctest::Approx(0.5));
    CHECK(ball.dist(pt({2.0, 0.0})) == 0.0);

    ConvexDomain hl{HalfLine{0.0, 1.0}};
    CHECK(hl.dist(2.5) == doctest::Approx(2.5));
    CHECK(hl.dist(-1.0) == 0.0);

    auto square = unit_square();
    CHECK(square.dist(pt({0.5, 0.5})) == doctest::Approx(0.5));
    CHECK(square.dist(pt({0.9, 0.5})) == doctest::Approx(0.1));
    CHECK(square.dist(pt({1.5, 0.5})) == 0.0);
}

TEST_CASE("scaling covariance dist(mu*Omega, mu*x) = mu*dist(Omega, x)") {
    std::mt19937 rng(991);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    auto square = unit_square();
    ConvexDomain ball{Ball{Eigen::VectorXd::Zero(2), 1.0}};
    ConvexDomain interval{Interval{0.0, 1.0}};
    for (double mu : {0.5, 2.0, 3.0}) {
        auto sq = square.scale(mu);
        auto bl = ball.scale(mu);
        auto iv = interval.scale(mu);
        for (int i = 0; i < 50; ++i) {
            Point x = pt({u(rng), u(rng)});
            CHECK(sq.dist(Point(mu * x)) == doctest::Approx(mu * square.dist(x)).epsilon(1e-14));
            CHECK(bl.dist(Point(mu * x)) == doctest::Approx(mu * ball.dist(x)).epsilon(1e-14));
            double t = u(rng);
            CHECK(iv.dist(mu * t) == doctest::Approx(mu * interval.dist(t)).epsilon(1e-14));
        }
    }
    // spec spot values
    CHECK(interval.scale(3.0).dist(0.9) == doctest::Approx(0.9));
    CHECK(ball.scale(2.0).dist(pt({1.0, 0.0})) == doctest::Approx(1.0));
    CHECK(unit_square().scale(0.5).dist(pt({0.25, 0.25})) == doctest::Approx(0.25));
}

TEST_CASE("dist is 1-Lipschitz") {
    std::mt19937 rng(1702);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto tri = triangle();
    ConvexDomain ball{Ball{pt({0.25, -0.5}), 1.5}};
    for (int i = 0; i < 200; ++i) {
        Point x = pt({u(rng), u(rng)});
        Point y = pt({u(rng), u(rng)});
        double dxy = (x - y).norm();
        CHECK(std::abs(tri.dist(x) - tri.dist(y)) <= dxy + 1e-12);
        CHECK(std::abs(ball.dist(x) - ball.dist(y)) <= dxy + 1e-12);
    }
}

TEST_CASE("polytope distance agrees with brute-force facet sampling") {
    auto tri = triangle();
    std::mt19937 rng(88);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // brute force: distance to the nearest of many points on the three edges
    auto brute = [&](const Point& x) {
        double best = std::numeric_limits<double>::infinity();
        const int m = 4000;
        for (int i = 0; i <= m; ++i) {
            double t = static_cast<double>(i) / m;
            Point e1 = pt({t, 0.0});
            Point e2 = pt({0.0, t});
            Point e3 = pt({t, 1.0 - t});
            best = std::min({best, (x - e1).norm(), (x - e2).norm(), (x - e3).norm()});
        }
        return best;
    };
    int tested = 0;
    while (tested < 10) {
        Point x = pt({u(rng), u(rng)});
        if (!tri.contains(x)) continue;
        ++tested;
        CHECK(tri.dist(x) == doctest::Approx(brute(x)).epsilon(5e-4));
    }
}

TEST_CASE("supporting hyperplane bound") {
    std::mt19937 rng(404);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<Point> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(pt({u(rng), u(rng)}));

    ConvexDomain ball{Ball{Eigen::VectorXd::Zero(2), 1.0}};
    CHECK(supporting_bound_check(ball, pt({0.0, 0.5}), samples));
    CHECK(supporting_bound_check(triangle(), pt({0.2, 0.2}), samples));

    ConvexDomain interval{Interval{0.0, 1.0}};
    std::vector<Point> samples1d;
    for (int i = 0; i < 100; ++i) samples1d.push_back(pt({u(rng)}));
    CHECK(supporting_bound_check(interval, pt({0.25}), samples1d));

    CHECK_THROWS_AS(supporting_bound_check(ball, pt({3.0, 0.0}), samples),
                    std::invalid_argument);
}

TEST_CASE("validation") {
    CHECK_THROWS_AS((ConvexDomain(Interval{1.0, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS((ConvexDomain(Ball{Eigen::VectorXd::Zero(2), -1.0})), std::invalid_argument);
    Eigen::VectorXd bad(2);
    bad << 1, 1;  // not unit
    CHECK_THROWS_AS((ConvexDomain(HalfSpace{bad, 0.0})), std::invalid_argument);
    // redundant constraints are allowed and harmless
    PolytopeH p;
    p.normals.resize(3, 1);
    p.normals << 1, -1, 1;
    p.offsets.resize(3);
    p.offsets << 1, 0, 2;  // x < 1, x > 0, x < 2 (redundant)
    ConvexDomain d{p};
    CHECK(d.dist(pt({0.5})) == doctest::Approx(0.5));
    // empty interior is rejected
    PolytopeH e;
    e.normals.resize(2, 1);
    e.normals << 1, -1;
    e.offsets.resize(2);
    e.offsets << 0, 0;  // x < 0 and x > 0
    CHECK_THROWS_AS((ConvexDomain(e)), std::invalid_argument);
}

} // TEST_SUITE
