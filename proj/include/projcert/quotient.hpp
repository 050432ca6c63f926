#pragma once

// The quotient of the sphere by the deck map b(v) = Bv: canonical orbit
// representatives, the free-action certificate, and the descent criterion
// deciding which projective maps pass to the quotient. The deck matrix has
// no fixed points on the sphere (every point moves by at least sqrt(2));
// its square is the half-turn of the leading plane, so orbits are closed
// over the full cyclic group it generates.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "liealg.hpp"
#include "linalg.hpp"
#include "rng.hpp"
#include "sphere.hpp"

namespace projcert {

struct QuotientSpace {
    int n;
    DeckMatrix deck;

    static QuotientSpace build(int n) { return QuotientSpace{n, DeckMatrix::build(n)}; }
};

/// A deck orbit named by its lexicographically largest element.
struct OrbitPoint {
    SpherePoint representative;
};

namespace detail {

/// Lexicographic comparison; the first differing coordinate decides.
inline int lex_compare(const Vector& a, const Vector& b) {
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a[i] > b[i]) return 1;
        if (a[i] < b[i]) return -1;
    }
    return 0;
}

}  // namespace detail

/// Deck-invariant and idempotent: the representative is the lexicographic
/// maximum over the cyclic deck orbit of v. A point fixed by the deck map
/// itself cannot occur (the map moves every sphere point) and is reported
/// as an internal error if ever detected.
inline OrbitPoint canonical_representative(const QuotientSpace& q, const SpherePoint& v) {
    if (v.ambient_dim() != q.deck.matrix.rows())
        throw std::invalid_argument("canonical_representative: dimension mismatch");
    Vector best = v.coords();
    Vector current = v.coords();
    for (int k = 0; k < 3; ++k) {
        current = q.deck.matrix * current;
        if (k == 0 && detail::lex_compare(current, v.coords()) == 0)
            throw std::logic_error("canonical_representative: deck map fixed a point");
        if (detail::lex_compare(current, best) > 0) best = current;
    }
    return OrbitPoint{SpherePoint(best)};
}

struct FreeActionCheck {
    bool free;                // min displacement >= 1
    double min_displacement;  // sampled min of |Bv - v| (analytic value sqrt(2))
    bool involution_exact;    // whether B*B equals the identity exactly
    bool no_unit_eigenvalue;  // det(B - I) != 0
};

/// Sampled displacement certificate for the deck map, together with the
/// measured involutivity and unit-eigenvalue checks. The displacement floor
/// is what rules out fixed points; the involution check records whether the
/// deck map squares to the identity (for this block structure it does not:
/// B^2 is the half-turn of the leading plane).
inline FreeActionCheck verify_free_action(const QuotientSpace& q, int samples,
                                          std::uint64_t seed = kDefaultSeed) {
    if (samples < 100) throw std::invalid_argument("verify_free_action: need at least 100 samples");
    const Matrix& b = q.deck.matrix;
    const std::size_t dim = b.rows();

    const Matrix square = b * b;
    bool involution = true;
    for (std::size_t i = 0; i < dim && involution; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (square(i, j) != (i == j ? 1.0 : 0.0)) {
                involution = false;
                break;
            }

    const bool no_unit_eigenvalue = determinant(b - Matrix::identity(dim)) != 0.0;

    Rng rng(seed);
    double min_displacement = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const Vector v = rng.unit_vector(dim);
        min_displacement = std::min(min_displacement, (b * v - v).norm());
    }

    return FreeActionCheck{min_displacement >= 1.0, min_displacement, involution, no_unit_eigenvalue};
}

struct DescentCheck {
    bool descends;
    double residual;
};

/// A projective map passes to the quotient iff it normalizes the deck
/// group, i.e. A B A^{-1} = +-B up to the projective scalar. The residual
/// is the smaller relative distance over the two signs after norm matching.
/// When the algebraic test passes, a pointwise check over seeded orbits
/// confirms the canonical representative is independent of the chosen lift.
inline DescentCheck descends(const QuotientSpace& q, const ProjectiveMap& map, double tol = 1e-9,
                             std::uint64_t seed = kDefaultSeed) {
    const Matrix& b = q.deck.matrix;
    if (map.size() != b.rows()) throw std::invalid_argument("descends: dimension mismatch");
    const Matrix conjugated = map.matrix() * b * inverse(map.matrix());
    const double b_norm = b.frobenius_norm();
    const Matrix scaled = conjugated * (b_norm / conjugated.frobenius_norm());
    const double plus = (scaled - b).frobenius_norm();
    const double minus = (scaled + b).frobenius_norm();
    const double residual = std::min(plus, minus) / b_norm;
    const bool passes = residual < tol;

    if (passes) {
        Rng rng(seed);
        for (int k = 0; k < 100; ++k) {
            const SpherePoint v(rng.unit_vector(b.rows()));
            const SpherePoint deck_image(b * v.coords());
            const Vector rep1 = canonical_representative(q, apply(map, v)).representative.coords();
            const Vector rep2 = canonical_representative(q, apply(map, deck_image)).representative.coords();
            if ((rep1 - rep2).norm() > 1e-9)
                throw NumericError("descends: algebraic and pointwise descent tests disagree");
        }
    }
    return DescentCheck{passes, residual};
}

/// Two descending maps induce the same quotient transformation iff their
/// matrices agree up to a deck factor and a scalar, i.e. m2 is proportional
/// to B^k m1 for some power k of the deck matrix.
inline bool same_quotient_map(const QuotientSpace& q, const ProjectiveMap& m1, const ProjectiveMap& m2) {
    if (!descends(q, m1).descends || !descends(q, m2).descends)
        throw std::invalid_argument("same_quotient_map: both maps must descend to the quotient");
    Matrix twisted = m1.matrix();
    for (int k = 0; k < 4; ++k) {
        if (projective_maps_equal(ProjectiveMap(twisted), m2)) return true;
        twisted = q.deck.matrix * twisted;
    }
    return false;
}

}  // namespace projcert
