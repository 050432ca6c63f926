#pragma once

// Randers metrics F(x, xi) = |xi| + <w, xi> + <Cx, xi> on the round sphere:
// validity checking, forward-geodesic integration in ambient coordinates
// with the sphere constraint, and reparametrization-invariant comparison of
// curve traces.

#include <cmath>
#include <cstdint>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"
#include "sphere.hpp"

namespace projcert {

/// Raised when the integrator's conserved speed drifts beyond tolerance.
struct EnergyDriftError : NumericError {
    using NumericError::NumericError;
};

/// Round metric plus a 1-form given by ambient data: a constant covector w
/// (an exact form) and/or a skew matrix C (a generically non-closed form).
class RandersData {
public:
    RandersData(int n, Vector w, Matrix skew) : n_(n), w_(std::move(w)), skew_(std::move(skew)) {
        if (n < 2) throw std::invalid_argument("RandersData: n must be at least 2");
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        if (w_.dim() != m) throw std::invalid_argument("RandersData: covector dimension mismatch");
        if (skew_.rows() != m || skew_.cols() != m)
            throw std::invalid_argument("RandersData: skew matrix dimension mismatch");
        if (!w_.is_finite() || !skew_.is_finite())
            throw std::invalid_argument("RandersData: entries must be finite");
        if ((skew_ + skew_.transpose()).max_abs() > 1e-12)
            throw std::invalid_argument("RandersData: matrix part must be skew-symmetric");
        has_skew_ = skew_.max_abs() != 0.0;
    }

    static RandersData riemannian(int n) {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        return RandersData(n, Vector(m), Matrix(m, m));
    }

    static RandersData with_covector(int n, const Vector& w) {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        return RandersData(n, w, Matrix(m, m));
    }

    static RandersData with_skew(int n, const Matrix& skew) {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        return RandersData(n, Vector(m), skew);
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] const Vector& w() const { return w_; }
    [[nodiscard]] const Matrix& skew() const { return skew_; }
    [[nodiscard]] bool has_skew() const { return has_skew_; }

    /// Ambient covector of the 1-form at x: w + Cx.
    [[nodiscard]] Vector form_covector(const Vector& x) const {
        Vector u = w_;
        if (has_skew_) u += skew_ * x;
        return u;
    }

private:
    int n_;
    Vector w_;
    Matrix skew_;
    bool has_skew_;
};

struct FinslerCheck {
    bool valid;
    double max_norm;
};

/// Samples the g-norm of the 1-form over seeded uniform sphere points.
/// Valid iff the sampled supremum stays below 1 - 1e-6. For C = 0 the exact
/// supremum is |w|, attained where the covector is tangential.
inline FinslerCheck validate_finsler(const RandersData& m, int samples, std::uint64_t seed = kDefaultSeed) {
    if (samples < 100) throw std::invalid_argument("validate_finsler: need at least 100 samples");
    Rng rng(seed);
    const std::size_t dim = static_cast<std::size_t>(m.n()) + 1;
    double max_norm = 0.0;
    for (int k = 0; k < samples; ++k) {
        const Vector x = rng.unit_vector(dim);
        const Vector u = m.form_covector(x);
        const Vector tangential = u - x * x.dot(u);
        max_norm = std::max(max_norm, tangential.norm());
    }
    return FinslerCheck{max_norm < 1.0 - 1e-6, max_norm};
}

/// F(x, xi) = |xi| + <w, xi> + <Cx, xi> for tangential xi != 0.
inline double evaluate_F(const RandersData& m, const SpherePoint& x, const Vector& xi) {
    if (xi.dim() != x.ambient_dim()) throw std::invalid_argument("evaluate_F: dimension mismatch");
    const double speed = xi.norm();
    if (speed == 0.0) throw std::invalid_argument("evaluate_F: direction must be nonzero");
    if (std::abs(x.coords().dot(xi)) > 1e-9 * speed)
        throw std::invalid_argument("evaluate_F: direction must be tangential");
    return speed + m.form_covector(x.coords()).dot(xi);
}

/// A discretized forward-geodesic: points on the sphere with tangential
/// velocities at increasing times.
struct GeodesicCurve {
    std::vector<double> times;
    std::vector<SpherePoint> points;
    std::vector<Vector> velocities;
};

namespace detail {

/// Acceleration of the constrained Euler-Lagrange system of (1/2)F^2.
/// With u = w + Cx, q = v/|v| + u and F = |v| + <u, v>, the fundamental
/// tensor is M = (F/|v|)(I - vv^T/|v|^2) + qq^T and the equation of motion
/// reads M xdd + 2F C v = lambda x, the multiplier enforcing <x, xdd> = -|v|^2.
inline Vector randers_acceleration(const RandersData& m, const Vector& x, const Vector& v) {
    const std::size_t dim = x.dim();
    const double speed = v.norm();
    if (speed < 1e-12) throw NumericError("integrate_geodesic: velocity collapsed");
    const Vector u = m.form_covector(x);
    const double f = speed + u.dot(v);
    if (f <= 0.0) throw NumericError("integrate_geodesic: left the forward cone");

    Vector q = v * (1.0 / speed) + u;
    Matrix fundamental(dim, dim);
    const double c0 = f / speed;
    const double c1 = f / (speed * speed * speed);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j)
            fundamental(i, j) = -c1 * v[i] * v[j] + q[i] * q[j];
        fundamental(i, i) += c0;
    }
    const LuFactorization lu = lu_factorize(fundamental);

    const Vector s = lu_solve(lu, x);
    double lambda_num = -speed * speed;
    if (m.has_skew()) {
        const Vector magnetic = (m.skew() * v) * (2.0 * f);
        const Vector r = lu_solve(lu, magnetic);
        lambda_num += x.dot(r);
        const double lambda = lambda_num / x.dot(s);
        return s * lambda - r;
    }
    const double lambda = lambda_num / x.dot(s);
    return s * lambda;
}

}  // namespace detail

/// Fixed-step RK4 integration of the forward-geodesic from (x0, v0), with
/// tangential re-projection after every step. The F-speed is a conserved
/// quantity of the flow; drift beyond 1e-6 raises EnergyDriftError instead
/// of returning a silently degraded curve.
inline GeodesicCurve integrate_geodesic(const RandersData& m, const SpherePoint& x0, const Vector& v0,
                                        double t_max, double dt, double drift_tol = 1e-6) {
    if (v0.dim() != x0.ambient_dim()) throw std::invalid_argument("integrate_geodesic: dimension mismatch");
    if (!(t_max > 0.0) || !(dt > 0.0) || dt > t_max / 10.0)
        throw std::invalid_argument("integrate_geodesic: need 0 < dt <= t_max/10");
    if (std::abs(x0.coords().dot(v0)) > 1e-10 * std::max(1.0, v0.norm()))
        throw std::invalid_argument("integrate_geodesic: initial velocity must be tangential");
    const double f0 = evaluate_F(m, x0, v0);
    if (f0 <= 1e-8) throw std::invalid_argument("integrate_geodesic: initial data on the forward cone boundary");

    GeodesicCurve curve;
    const std::size_t n_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-12));
    curve.times.reserve(n_steps + 1);
    curve.points.reserve(n_steps + 1);
    curve.velocities.reserve(n_steps + 1);

    Vector x = x0.coords();
    Vector v = v0;
    double drift = 0.0;
    double t = 0.0;
    curve.times.push_back(t);
    curve.points.push_back(x0);
    curve.velocities.push_back(v);

    for (std::size_t step = 0; step < n_steps; ++step) {
        const double h = std::min(dt, t_max - t);
        if (h <= 0.0) break;

        const Vector k1x = v;
        const Vector k1v = detail::randers_acceleration(m, x, v);
        const Vector k2x = v + k1v * (h / 2.0);
        const Vector k2v = detail::randers_acceleration(m, x + k1x * (h / 2.0), k2x);
        const Vector k3x = v + k2v * (h / 2.0);
        const Vector k3v = detail::randers_acceleration(m, x + k2x * (h / 2.0), k3x);
        const Vector k4x = v + k3v * h;
        const Vector k4v = detail::randers_acceleration(m, x + k3x * h, k4x);

        x += (k1x + (k2x + k3x) * 2.0 + k4x) * (h / 6.0);
        v += (k1v + (k2v + k3v) * 2.0 + k4v) * (h / 6.0);

        // Re-project onto the constraint: unit position, tangential velocity.
        x = x * (1.0 / x.norm());
        v -= x * x.dot(v);

        t += h;
        SpherePoint p(x);
        drift = std::max(drift, std::abs(evaluate_F(m, p, v) - f0));
        curve.times.push_back(t);
        curve.points.push_back(std::move(p));
        curve.velocities.push_back(v);
    }

    if (drift > drift_tol)
        throw EnergyDriftError("integrate_geodesic: conserved F-speed drifted by " + std::to_string(drift));
    return curve;
}

/// Total great-circle arc length swept by the curve's points.
inline double swept_arc_length(const GeodesicCurve& curve) {
    double length = 0.0;
    for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
        const double c = curve.points[k].coords().dot(curve.points[k + 1].coords());
        length += std::acos(std::clamp(c, -1.0, 1.0));
    }
    return length;
}

/// Closed-form great circle through x0 with initial direction v0, packaged
/// as a curve over [0, extent].
inline GeodesicCurve sample_great_circle_curve(const SpherePoint& x0, const Vector& v0,
                                               std::size_t count = 256, double extent = 2.0 * M_PI) {
    if (count < 2) throw std::invalid_argument("sample_great_circle_curve: need at least 2 samples");
    const Vector dir = v0.normalized();
    GeodesicCurve curve;
    curve.times.reserve(count);
    curve.points.reserve(count);
    curve.velocities.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double s = extent * static_cast<double>(k) / static_cast<double>(count - 1);
        curve.times.push_back(s);
        curve.points.push_back(SpherePoint::normalized(x0.coords() * std::cos(s) + dir * std::sin(s)));
        curve.velocities.push_back(x0.coords() * -std::sin(s) + dir * std::cos(s));
    }
    return curve;
}

// ---------------------------------------------------------------------------
// Curve comparison
// ---------------------------------------------------------------------------

namespace detail {

/// Chordal distance from p to the minor great-circle arc from a to b.
inline double point_to_arc(const Vector& p, const Vector& a, const Vector& b) {
    const double endpoint = std::min((p - a).norm(), (p - b).norm());
    Vector tangent = b - a * a.dot(b);
    const double tangent_norm = tangent.norm();
    if (tangent_norm < 1e-14) return endpoint;  // coincident samples
    tangent = tangent * (1.0 / tangent_norm);
    const double c1 = p.dot(a);
    const double c2 = p.dot(tangent);
    const double radius = std::hypot(c1, c2);
    if (radius < 1e-14) return endpoint;
    const double angle = std::atan2(c2, c1);
    const double arc_angle = std::atan2(tangent_norm, a.dot(b));
    if (angle < 0.0 || angle > arc_angle) return endpoint;
    return (p - (a * c1 + tangent * c2) * (1.0 / radius)).norm();
}

/// Monotone matching of one curve's vertices onto the other curve as a
/// spherical polyline: each vertex matches a point of some arc, the arc
/// index never decreases, the first vertex matches the first arc and the
/// last vertex the last arc. Unmatched stretches of the polyline are swept
/// over freely, so incommensurate sampling grids cost nothing, while every
/// vertex still pays its distance to the polyline (the value dominates the
/// directed vertex-to-polyline gap).
inline double directed_frechet(const std::vector<Vector>& pts, const std::vector<Vector>& poly) {
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t m = pts.size();
    if (poly.size() < 2) {
        double worst = 0.0;
        for (const Vector& p : pts) worst = std::max(worst, (p - poly.front()).norm());
        return worst;
    }
    const std::size_t s = poly.size() - 1;  // segment count
    if (m == 1) return std::max(point_to_arc(pts[0], poly[0], poly[1]),
                                point_to_arc(pts[0], poly[s - 1], poly[s]));
    std::vector<double> prev(s, inf);
    std::vector<double> cur(s);
    prev[0] = point_to_arc(pts[0], poly[0], poly[1]);
    for (std::size_t i = 1; i < m; ++i) {
        double best_before = inf;  // min over prev[0..j]
        for (std::size_t j = 0; j < s; ++j) {
            best_before = std::min(best_before, prev[j]);
            cur[j] = std::max(point_to_arc(pts[i], poly[j], poly[j + 1]), best_before);
        }
        std::swap(prev, cur);
    }
    return prev[s - 1];
}

/// Symmetric (Frechet-style) trace distance between spherical polylines.
inline double frechet_oriented(const std::vector<Vector>& p, const std::vector<Vector>& q) {
    return std::max(directed_frechet(p, q), directed_frechet(q, p));
}

inline std::vector<Vector> subsample_coords(const std::vector<SpherePoint>& points, std::size_t cap) {
    std::vector<Vector> out;
    if (points.size() <= cap) {
        out.reserve(points.size());
        for (const SpherePoint& p : points) out.push_back(p.coords());
        return out;
    }
    out.reserve(cap);
    for (std::size_t k = 0; k < cap; ++k) {
        const std::size_t idx = static_cast<std::size_t>(
            std::llround(static_cast<double>(k) * static_cast<double>(points.size() - 1) /
                         static_cast<double>(cap - 1)));
        out.push_back(points[idx].coords());
    }
    return out;
}

}  // namespace detail

/// Reparametrization-invariant distance between traces: monotone-coupling
/// distance over spherical polylines, minimized over the two orientations of
/// the second curve.
inline double curve_trace_distance(const std::vector<SpherePoint>& c1, const std::vector<SpherePoint>& c2,
                                   std::size_t sample_cap = 512) {
    if (c1.empty() || c2.empty()) throw std::invalid_argument("curve_trace_distance: curves must be nonempty");
    const std::vector<Vector> p = detail::subsample_coords(c1, sample_cap);
    std::vector<Vector> q = detail::subsample_coords(c2, sample_cap);
    const double forward = detail::frechet_oriented(p, q);
    std::reverse(q.begin(), q.end());
    const double backward = detail::frechet_oriented(p, q);
    return std::min(forward, backward);
}

struct CurveComparison {
    bool equal;
    double distance;
};

/// Equality of unparametrized traces at the 1e-5 scale.
inline CurveComparison curves_projectively_equal(const GeodesicCurve& c1, const GeodesicCurve& c2,
                                                 double tol = 1e-5) {
    const double distance = curve_trace_distance(c1.points, c2.points);
    return CurveComparison{distance < tol, distance};
}

}  // namespace projcert
