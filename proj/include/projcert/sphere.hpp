#pragma once

// The round sphere: unit points, great circles, the projective action
// v -> Av/|Av| of invertible matrices, trace-free generators as vector
// fields, and their one-parameter flows.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"

namespace projcert {

class SpherePoint {
public:
    explicit SpherePoint(Vector coords) : coords_(std::move(coords)) {
        if (!coords_.is_finite()) throw std::invalid_argument("SpherePoint: entries must be finite");
        if (std::abs(coords_.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("SpherePoint: coordinates must have unit norm");
    }

    /// Builds the point by normalizing a nonzero ambient vector.
    static SpherePoint normalized(const Vector& v) { return SpherePoint(v.normalized()); }

    [[nodiscard]] const Vector& coords() const { return coords_; }
    [[nodiscard]] std::size_t ambient_dim() const { return coords_.dim(); }
    double operator[](std::size_t i) const { return coords_[i]; }

private:
    Vector coords_;
};

/// A great circle encoded by an orthonormal 2-frame spanning its plane.
class GreatCircle {
public:
    GreatCircle(Vector u, Vector w) : u_(std::move(u)), w_(std::move(w)) {
        if (u_.dim() != w_.dim()) throw std::invalid_argument("GreatCircle: dimension mismatch");
        if (std::abs(u_.norm() - 1.0) > 1e-12 || std::abs(w_.norm() - 1.0) > 1e-12 ||
            std::abs(u_.dot(w_)) > 1e-12)
            throw std::invalid_argument("GreatCircle: frame must be orthonormal");
    }

    /// Builds the circle through the plane spanned by two vectors.
    static GreatCircle from_span(const Vector& a, const Vector& b) {
        const Vector u = a.normalized();
        Vector w = b - u * u.dot(b);
        const double n = w.norm();
        if (n < 1e-10) throw std::invalid_argument("GreatCircle: spanning vectors are collinear");
        return GreatCircle(u, w * (1.0 / n));
    }

    [[nodiscard]] const Vector& u() const { return u_; }
    [[nodiscard]] const Vector& w() const { return w_; }

    [[nodiscard]] SpherePoint at(double theta) const {
        return SpherePoint::normalized(u_ * std::cos(theta) + w_ * std::sin(theta));
    }

    [[nodiscard]] std::vector<SpherePoint> sample(std::size_t count) const {
        std::vector<SpherePoint> points;
        points.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
            points.push_back(at(2.0 * M_PI * static_cast<double>(k) / static_cast<double>(count)));
        return points;
    }

private:
    Vector u_, w_;
};

/// An invertible matrix considered up to nonzero scalar, acting on the
/// sphere by v -> Av/|Av|.
class ProjectiveMap {
public:
    explicit ProjectiveMap(Matrix m) : matrix_(std::move(m)) {
        if (!matrix_.is_square()) throw std::invalid_argument("ProjectiveMap: matrix must be square");
        if (!matrix_.is_finite()) throw std::invalid_argument("ProjectiveMap: entries must be finite");
        if (std::abs(determinant(matrix_)) <= 1e-12)
            throw std::invalid_argument("ProjectiveMap: matrix must be invertible");
    }

    static ProjectiveMap identity(std::size_t size) { return ProjectiveMap(Matrix::identity(size)); }

    /// Seeded generic element of SL: Gaussian entries, redrawn while the
    /// determinant is below 0.1 to keep conditioning, then scaled to det 1.
    static ProjectiveMap random_sl(Rng& rng, std::size_t size) {
        for (;;) {
            Matrix m = rng.gaussian_matrix(size, size);
            const double det = determinant(m);
            if (det < 0.1) continue;
            return ProjectiveMap(m * std::pow(det, -1.0 / static_cast<double>(size)));
        }
    }

    [[nodiscard]] const Matrix& matrix() const { return matrix_; }
    [[nodiscard]] std::size_t size() const { return matrix_.rows(); }

private:
    Matrix matrix_;
};

/// Trace-free generator of a one-parameter family of projective maps.
class ProjectiveVectorField {
public:
    explicit ProjectiveVectorField(Matrix generator) : generator_(std::move(generator)) {
        if (!generator_.is_square())
            throw std::invalid_argument("ProjectiveVectorField: generator must be square");
        if (std::abs(generator_.trace()) > 1e-10)
            throw std::invalid_argument("ProjectiveVectorField: generator must be trace-free");
    }

    [[nodiscard]] const Matrix& generator() const { return generator_; }

private:
    Matrix generator_;
};

inline SpherePoint apply(const ProjectiveMap& map, const SpherePoint& v) {
    return SpherePoint::normalized(map.matrix() * v.coords());
}

/// Derivative of the projective action at x in the tangent direction xi.
inline Vector push_forward(const ProjectiveMap& map, const SpherePoint& x, const Vector& xi) {
    const Vector ax = map.matrix() * x.coords();
    const Vector axi = map.matrix() * xi;
    const double norm = ax.norm();
    const Vector image = ax * (1.0 / norm);
    return (axi - image * image.dot(axi)) * (1.0 / norm);
}

/// Samples the circle, applies the map, and fits a plane through the origin
/// to the image. The residual is ~0 exactly when the image is again a great
/// circle, which holds for every projective map.
inline std::pair<std::vector<SpherePoint>, double> map_great_circle(const ProjectiveMap& map,
                                                                    const GreatCircle& gc,
                                                                    std::size_t samples = 64) {
    if (samples < 8) throw std::invalid_argument("map_great_circle: need at least 8 samples");
    std::vector<SpherePoint> image;
    image.reserve(samples);
    std::vector<Vector> coords;
    coords.reserve(samples);
    for (const SpherePoint& p : gc.sample(samples)) {
        SpherePoint q = apply(map, p);
        coords.push_back(q.coords());
        image.push_back(std::move(q));
    }
    const PlaneFit fit = plane_fit(coords);
    return {std::move(image), fit.residual};
}

/// Value of the vector field at x: the tangential part of the linear action,
/// Ax - <x, Ax> x. Always orthogonal to x.
inline Vector vector_field_at(const ProjectiveVectorField& field, const SpherePoint& x) {
    const Vector ax = field.generator() * x.coords();
    return ax - x.coords() * x.coords().dot(ax);
}

/// One-parameter flow of the field: the projective map with matrix exp(tau*A).
inline ProjectiveMap flow(const ProjectiveVectorField& field, double tau) {
    return ProjectiveMap(matrix_exp(field.generator(), tau));
}

namespace detail {

/// Frobenius-normalizes and fixes the overall sign by the entry of largest
/// magnitude (first such entry in row-major order on ties).
inline Matrix projective_normal_form(const Matrix& m) {
    Matrix normalized = m * (1.0 / m.frobenius_norm());
    double best = 0.0;
    double sign = 1.0;
    for (double e : normalized.entries())
        if (std::abs(e) > best) {
            best = std::abs(e);
            sign = e >= 0.0 ? 1.0 : -1.0;
        }
    return normalized * sign;
}

}  // namespace detail

/// True iff the matrices are proportional by a nonzero real scalar.
inline bool projective_maps_equal(const ProjectiveMap& m1, const ProjectiveMap& m2, double tol = 1e-9) {
    if (m1.size() != m2.size()) throw std::invalid_argument("projective_maps_equal: size mismatch");
    const Matrix a = detail::projective_normal_form(m1.matrix());
    const Matrix b = detail::projective_normal_form(m2.matrix());
    return (a - b).frobenius_norm() <= tol;
}

/// Seeded great circle with a uniformly random plane.
inline GreatCircle random_great_circle(Rng& rng, std::size_t ambient_dim) {
    for (;;) {
        const Vector a = rng.unit_vector(ambient_dim);
        const Vector b = rng.unit_vector(ambient_dim);
        const Vector rejected = b - a * a.dot(b);
        if (rejected.norm() > 1e-6) return GreatCircle::from_span(a, b);
    }
}

/// Seeded tangent direction at x, unit length.
inline Vector random_tangent(Rng& rng, const SpherePoint& x) {
    for (;;) {
        const Vector g = rng.gaussian_vector(x.ambient_dim());
        const Vector t = g - x.coords() * x.coords().dot(g);
        if (t.norm() > 1e-6) return t.normalized();
    }
}

}  // namespace projcert
