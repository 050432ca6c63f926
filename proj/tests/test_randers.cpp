#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "projcert/liealg.hpp"
#include "projcert/randers.hpp"
#include "projcert/rng.hpp"

using namespace projcert;

namespace {

Matrix leading_plane_skew(int n, double strength) {
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    Matrix c(m, m);
    c(0, 1) = strength;
    c(1, 0) = -strength;
    return c;
}

GeodesicCurve one_loop(const RandersData& metric, const SpherePoint& x0, const Vector& v0,
                       double dt = 1e-3) {
    const double f0 = evaluate_F(metric, x0, v0);
    return integrate_geodesic(metric, x0, v0, 2.0 * M_PI / f0, dt);
}

}  // namespace

TEST_CASE("validate_finsler on frozen configurations") {
    const FinslerCheck zero = validate_finsler(RandersData::riemannian(2), 1000);
    CHECK(zero.valid);
    CHECK(zero.max_norm == 0.0);

    Vector half(3);
    half[2] = 0.5;
    const FinslerCheck ok = validate_finsler(RandersData::with_covector(2, half), 10000);
    CHECK(ok.valid);
    // for constant w the exact supremum is |w|; 1e4 samples must land within 2%
    CHECK(ok.max_norm > 0.49);
    CHECK(ok.max_norm <= 0.5 + 1e-12);

    Vector unit(3);
    unit[2] = 1.0;
    const FinslerCheck bad = validate_finsler(RandersData::with_covector(2, unit), 10000);
    CHECK_FALSE(bad.valid);
    CHECK(bad.max_norm > 0.98);
}

TEST_CASE("RandersData rejects a non-skew matrix part") {
    Matrix not_skew(3, 3);
    not_skew(0, 1) = 1.0;
    CHECK_THROWS_AS(RandersData(2, Vector(3), not_skew), std::invalid_argument);
}

TEST_CASE("evaluate_F on frozen inputs") {
    const SpherePoint e1(Vector{1.0, 0.0, 0.0});
    const Vector e3{0.0, 0.0, 1.0};
    CHECK(evaluate_F(RandersData::riemannian(2), e1, Vector{0.0, 1.0, 0.0}) == doctest::Approx(1.0));

    Vector w(3);
    w[2] = 0.5;
    CHECK(evaluate_F(RandersData::with_covector(2, w), e1, e3) == doctest::Approx(1.5));

    CHECK_THROWS_AS(evaluate_F(RandersData::riemannian(2), e1, Vector(3)), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_F(RandersData::riemannian(2), e1, Vector{1.0, 0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("F is positively 1-homogeneous") {
    Rng rng(83);
    Vector w(4);
    w[3] = 0.4;
    const RandersData metric(3, w, leading_plane_skew(3, 0.2));
    for (int trial = 0; trial < 50; ++trial) {
        const SpherePoint x(rng.unit_vector(4));
        const Vector xi = random_tangent(rng, x);
        const double lambda = 0.1 + 5.0 * rng.uniform();
        const double lhs = evaluate_F(metric, x, xi * lambda);
        const double rhs = lambda * evaluate_F(metric, x, xi);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
}

TEST_CASE("a nonzero covector makes the metric non-reversible") {
    Vector w(3);
    w[2] = 0.5;
    const RandersData metric = RandersData::with_covector(2, w);
    const SpherePoint x(Vector{1.0, 0.0, 0.0});
    const Vector xi{0.0, 0.0, 1.0};
    CHECK(evaluate_F(metric, x, xi) == doctest::Approx(1.5));
    CHECK(evaluate_F(metric, x, xi * -1.0) == doctest::Approx(0.5));
}

TEST_CASE("round-metric geodesics close up on great circles") {
    const SpherePoint x0(Vector{1.0, 0.0, 0.0});
    const Vector v0{0.0, 1.0, 0.0};
    const GeodesicCurve curve = integrate_geodesic(RandersData::riemannian(2), x0, v0, 2.0 * M_PI, 1e-3);

    CHECK((curve.points.back().coords() - x0.coords()).norm() < 1e-6);
    const GeodesicCurve reference = sample_great_circle_curve(x0, v0);
    CHECK(curve_trace_distance(curve.points, reference.points) < 1e-8);

    // unit initial speed makes the parametrization match pointwise in t
    double pointwise = 0.0;
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        const double t = curve.times[k];
        const Vector expected = x0.coords() * std::cos(t) + v0 * std::sin(t);
        pointwise = std::max(pointwise, (curve.points[k].coords() - expected).norm());
    }
    CHECK(pointwise < 1e-8);

    REQUIRE(curve.points.size() == curve.times.size());
    REQUIRE(curve.points.size() == curve.velocities.size());
    REQUIRE(curve.points.size() >= 2);
    for (std::size_t k = 0; k < curve.points.size(); k += 100) {
        CHECK(std::abs(curve.points[k].coords().norm() - 1.0) <= 1e-10);
        CHECK(std::abs(curve.points[k].coords().dot(curve.velocities[k])) <= 1e-10);
    }
}

TEST_CASE("an exact 1-form leaves geodesic traces unchanged") {
    const SpherePoint x0(Vector{1.0, 0.0, 0.0});
    const Vector v0{0.0, 1.0, 0.0};
    Vector w(3);
    w[2] = 0.3;
    const GeodesicCurve curve = one_loop(RandersData::with_covector(2, w), x0, v0);
    const GeodesicCurve reference = sample_great_circle_curve(x0, v0);
    CHECK(curve_trace_distance(curve.points, reference.points) < 1e-6);
}

TEST_CASE("a non-closed 1-form bends geodesics off great circles") {
    const SpherePoint x0(Vector{1.0, 0.0, 0.0});
    const Vector v0{0.0, 1.0, 0.0};
    const GeodesicCurve curve = one_loop(RandersData::with_skew(2, leading_plane_skew(2, 0.3)), x0, v0);
    const GeodesicCurve reference = sample_great_circle_curve(x0, v0);
    CHECK(curve_trace_distance(curve.points, reference.points) > 1e-3);
}

TEST_CASE("closed-form invariance holds across covector strengths and seeds") {
    Rng rng(89);
    for (double strength : {0.2, 0.5, 0.8}) {
        for (int trial = 0; trial < 3; ++trial) {
            const Vector w = rng.unit_vector(3) * strength;
            const RandersData metric = RandersData::with_covector(2, w);
            const SpherePoint x0(rng.unit_vector(3));
            const Vector v0 = random_tangent(rng, x0);
            const GeodesicCurve curve = one_loop(metric, x0, v0);
            const GeodesicCurve reference = sample_great_circle_curve(x0, v0);
            CHECK(curve_trace_distance(curve.points, reference.points) < 1e-5);
        }
    }
}

TEST_CASE("the F-speed is conserved along geodesics") {
    Rng rng(97);
    Vector w(3);
    w[1] = 0.4;
    const RandersData metric(2, w, leading_plane_skew(2, 0.2));
    const SpherePoint x0(rng.unit_vector(3));
    const Vector v0 = random_tangent(rng, x0);
    const GeodesicCurve curve = one_loop(metric, x0, v0);
    const double f0 = evaluate_F(metric, x0, v0);
    double drift = 0.0;
    for (std::size_t k = 0; k < curve.points.size(); ++k)
        drift = std::max(drift, std::abs(evaluate_F(metric, curve.points[k], curve.velocities[k]) - f0));
    CHECK(drift <= 1e-6);
}

TEST_CASE("block-form maps carry geodesics to geodesics") {
    // map a great circle forward, then integrate from the mapped initial
    // data: the two traces must agree.
    Rng rng(101);
    Matrix gen(4, 4);
    gen(0, 0) = 0.2;
    gen(1, 1) = 0.2;
    gen(0, 1) = 0.7;
    gen(1, 0) = -0.7;
    gen(2, 2) = -0.1;
    gen(3, 3) = -0.3;
    gen(2, 3) = 0.5;
    gen(3, 2) = 0.4;
    const ProjectiveMap map(matrix_exp(gen, 1.0));

    const SpherePoint x0(rng.unit_vector(4));
    const Vector v0 = random_tangent(rng, x0);
    const GreatCircle circle = GreatCircle::from_span(x0.coords(), v0);

    std::vector<SpherePoint> mapped_circle;
    for (int k = 0; k < 256; ++k)  // closed polyline, endpoint included
        mapped_circle.push_back(apply(map, circle.at(2.0 * M_PI * k / 255.0)));

    const SpherePoint y0 = apply(map, x0);
    const Vector u0 = push_forward(map, x0, v0).normalized();
    const GeodesicCurve curve =
        integrate_geodesic(RandersData::riemannian(3), y0, u0, 2.0 * M_PI, 1e-3);

    CHECK(curve_trace_distance(curve.points, mapped_circle) < 1e-6);
}

TEST_CASE("integrate_geodesic rejects bad input") {
    const RandersData metric = RandersData::riemannian(2);
    const SpherePoint x0(Vector{1.0, 0.0, 0.0});
    const Vector v0{0.0, 1.0, 0.0};
    CHECK_THROWS_AS(integrate_geodesic(metric, x0, v0, 1.0, 0.2), std::invalid_argument);   // dt too big
    CHECK_THROWS_AS(integrate_geodesic(metric, x0, v0, -1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(integrate_geodesic(metric, x0, Vector{1.0, 0.0, 0.0}, 1.0, 1e-3),
                    std::invalid_argument);  // not tangential
    CHECK_THROWS_AS(integrate_geodesic(metric, x0, v0 * 1e-9, 1.0, 1e-3),
                    std::invalid_argument);  // forward-cone boundary
}

TEST_CASE("integrate_geodesic reports speed drift instead of hiding it") {
    // a coarse step cannot conserve the F-speed to 1e-6 over this window
    const RandersData metric = RandersData::riemannian(2);
    const SpherePoint x0(Vector{1.0, 0.0, 0.0});
    const Vector v0{0.0, 1.0, 0.0};
    CHECK_THROWS_AS(integrate_geodesic(metric, x0, v0, 3.0, 0.3), EnergyDriftError);
}

TEST_CASE("curve comparison identifies traces, not parametrizations") {
    const SpherePoint x0(Vector{1.0, 0.0, 0.0});
    const Vector v0{0.0, 1.0, 0.0};
    const GeodesicCurve a = sample_great_circle_curve(x0, v0, 100);
    const GeodesicCurve b = sample_great_circle_curve(x0, v0, 173);

    GeodesicCurve reversed = a;
    std::reverse(reversed.points.begin(), reversed.points.end());
    const CurveComparison self = curves_projectively_equal(a, reversed);
    CHECK(self.equal);
    CHECK(self.distance < 1e-12);

    const CurveComparison resampled = curves_projectively_equal(a, b);
    CHECK(resampled.equal);
    CHECK(resampled.distance < 1e-12);
}

TEST_CASE("curve comparison is invariant under ambient rotations") {
    Rng rng(113);
    const SpherePoint x0(rng.unit_vector(3));
    const Vector v0 = random_tangent(rng, x0);
    const GeodesicCurve circle = sample_great_circle_curve(x0, v0, 120);

    GeodesicCurve latitude;
    for (int k = 0; k < 150; ++k) {
        const double t = 2.0 * M_PI * k / 149.0;
        latitude.times.push_back(t);
        latitude.points.push_back(SpherePoint::normalized(Vector{std::cos(t), std::sin(t), 0.7}));
        latitude.velocities.push_back(Vector(3));
    }
    const double base = curve_trace_distance(circle.points, latitude.points);

    Matrix skew = rng.gaussian_matrix(3, 3);
    skew = (skew - skew.transpose()) * 0.5;
    const Matrix rot = matrix_exp(skew, 1.0);
    auto rotate = [&rot](const std::vector<SpherePoint>& pts) {
        std::vector<SpherePoint> out;
        for (const SpherePoint& p : pts) out.push_back(SpherePoint::normalized(rot * p.coords()));
        return out;
    };
    const double rotated = curve_trace_distance(rotate(circle.points), rotate(latitude.points));
    CHECK(std::abs(rotated - base) <= 1e-12);
}

TEST_CASE("curve comparison separates a great circle from a latitude circle") {
    const SpherePoint x0(Vector{1.0, 0.0, 0.0});
    const Vector v0{0.0, 1.0, 0.0};
    const GeodesicCurve equator = sample_great_circle_curve(x0, v0, 200);

    GeodesicCurve latitude;
    for (int k = 0; k < 200; ++k) {
        const double t = 2.0 * M_PI * k / 199.0;
        latitude.times.push_back(t);
        latitude.points.push_back(SpherePoint::normalized(Vector{std::cos(t), std::sin(t), 1.0}));
        latitude.velocities.push_back(Vector(3));
    }

    // dense-sampling oracle: every point of either curve is at least
    // sqrt(2 - sqrt(2)) from the other curve
    std::vector<Vector> ec, lc;
    for (const auto& p : equator.points) ec.push_back(p.coords());
    for (const auto& p : latitude.points) lc.push_back(p.coords());
    const double oracle_gap = oracles::dense_chordal_gap(ec, lc);
    CHECK(oracle_gap == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(2e-3));

    const CurveComparison cmp = curves_projectively_equal(equator, latitude);
    CHECK_FALSE(cmp.equal);
    CHECK(cmp.distance == doctest::Approx(oracle_gap).epsilon(2e-3));
}
