#pragma once

// The trace-free matrix algebra sl(n+1), the deck involution matrix B, the
// commutator operator X -> BX - XB, its kernel (the centralizer of B), the
// block-form classifier for matrices commuting with B, and the dimension
// formulas that the verification reports compare against.

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace projcert {

/// Block-diagonal orthogonal involution: a 2x2 rotation block [[0,1],[-1,0]]
/// followed by -identity of size n-1. Acts on the sphere without fixed points.
struct DeckMatrix {
    int n;
    Matrix matrix;

    static DeckMatrix build(int n) {
        if (n < 2) throw std::invalid_argument("DeckMatrix: n must be at least 2");
        const std::size_t size = static_cast<std::size_t>(n) + 1;
        Matrix b(size, size);
        b(0, 1) = 1.0;
        b(1, 0) = -1.0;
        for (std::size_t i = 2; i < size; ++i) b(i, i) = -1.0;
        return DeckMatrix{n, std::move(b)};
    }
};

/// Ordered basis of the trace-free matrices of size m x m: the off-diagonal
/// elementary matrices E_ij (i != j) in row-major order of (i, j), followed
/// by the m-1 diagonal differences E_ii - E_{i+1,i+1}. This ordering is part
/// of the report contract; kernels are reproducible only against it.
inline std::vector<Matrix> trace_free_basis(std::size_t m) {
    if (m < 2) throw std::invalid_argument("trace_free_basis: size must be at least 2");
    std::vector<Matrix> basis;
    basis.reserve(m * m - 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            Matrix e(m, m);
            e(i, j) = 1.0;
            basis.push_back(std::move(e));
        }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        Matrix d(m, m);
        d(i, i) = 1.0;
        d(i + 1, i + 1) = -1.0;
        basis.push_back(std::move(d));
    }
    return basis;
}

/// Coordinates of a trace-free matrix in the basis above. Off-diagonal
/// coordinates are the entries themselves; the diagonal coefficients are the
/// partial sums of the diagonal (consistent exactly when the trace is zero).
inline Vector trace_free_coords(const Matrix& x, std::size_t m) {
    if (x.rows() != m || x.cols() != m) throw std::invalid_argument("trace_free_coords: size mismatch");
    Vector coords(m * m - 1);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            coords[k++] = x(i, j);
        }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        partial += x(i, i);
        coords[k++] = partial;
    }
    return coords;
}

/// Reconstruct a trace-free matrix from its coordinates in the basis above.
inline Matrix trace_free_from_coords(const Vector& coords, std::size_t m) {
    if (coords.dim() != m * m - 1) throw std::invalid_argument("trace_free_from_coords: size mismatch");
    Matrix x(m, m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            x(i, j) = coords[k++];
        }
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double gamma = coords[k++];
        x(i, i) = gamma - prev;
        prev = gamma;
    }
    x(m - 1, m - 1) = -prev;
    return x;
}

/// Matrix of the commutator map X -> BX - XB acting on the trace-free basis.
/// All entries are exact small integers.
inline Matrix sylvester_operator(const DeckMatrix& deck) {
    const std::size_t m = deck.matrix.rows();
    const std::vector<Matrix> basis = trace_free_basis(m);
    const std::size_t dim = basis.size();
    Matrix op(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const Matrix commutator = deck.matrix * basis[k] - basis[k] * deck.matrix;
        const Vector coords = trace_free_coords(commutator, m);
        for (std::size_t i = 0; i < dim; ++i) op(i, k) = coords[i];
    }
    return op;
}

/// Orthonormal (Frobenius) basis of {X in sl(n+1) : BX = XB}.
struct CentralizerBasis {
    int n;
    std::vector<Matrix> basis;
    int dim;
};

namespace detail {

/// Modified Gram-Schmidt in the Frobenius inner product, two passes.
inline std::vector<Matrix> frobenius_orthonormalize(const std::vector<Matrix>& input) {
    std::vector<Matrix> out;
    out.reserve(input.size());
    for (const Matrix& m : input) {
        Matrix v = m;
        for (int pass = 0; pass < 2; ++pass)
            for (const Matrix& q : out) v = v - q * frobenius_inner(v, q);
        const double norm = v.frobenius_norm();
        if (norm < 1e-8) throw NumericError("frobenius_orthonormalize: numerically dependent basis");
        out.push_back(v * (1.0 / norm));
    }
    return out;
}

}  // namespace detail

/// Kernel of the commutator operator inside sl(n+1), certified two ways:
/// the SVD count and the Gaussian-elimination rank must agree exactly, and
/// no singular value may land inside [0.1, 10] times the rank threshold.
inline CentralizerBasis centralizer(int n, double rel_tol = 1e-9) {
    if (n < 2) throw std::invalid_argument("centralizer: n must be at least 2");
    const DeckMatrix deck = DeckMatrix::build(n);
    const std::size_t m = deck.matrix.rows();
    const Matrix op = sylvester_operator(deck);

    const Svd svd = jacobi_svd(op);
    const double sigma_max = svd.singular_values.front();
    if (sigma_max == 0.0) throw NumericError("centralizer: commutator operator vanished");
    const double threshold = rel_tol * sigma_max;
    for (double sigma : svd.singular_values)
        if (sigma >= 0.1 * threshold && sigma <= 10.0 * threshold)
            throw RankAmbiguityError("centralizer: singular value inside the rank ambiguity window");

    std::vector<Matrix> kernel;
    for (std::size_t j = 0; j < op.cols(); ++j)
        if (svd.singular_values[j] < threshold)
            kernel.push_back(trace_free_from_coords(svd.right_vectors.col(j), m));

    const std::size_t rank = elimination_rank(op, rel_tol);
    if (op.cols() - rank != kernel.size())
        throw RankAmbiguityError("centralizer: elimination strategies disagree on the kernel dimension");

    std::vector<Matrix> basis = detail::frobenius_orthonormalize(kernel);
    return CentralizerBasis{n, std::move(basis), static_cast<int>(kernel.size())};
}

// ---------------------------------------------------------------------------
// Block-form classification
// ---------------------------------------------------------------------------

/// A matrix of the invariant block shape: a 2x2 block [[alpha,beta],
/// [-beta,alpha]] and an arbitrary (n-1)x(n-1) block, zero elsewhere.
struct BlockFormMatrix {
    double alpha;
    double beta;
    Matrix inner;
};

struct BlockFormClassification {
    std::optional<BlockFormMatrix> form;
    std::string offending_block;  // empty on success
    double offending_norm = 0.0;

    [[nodiscard]] bool matches() const { return form.has_value(); }
};

/// Checks the zero pattern and the rotation shape of the leading 2x2 block,
/// extracting (alpha, beta, inner) on success. Pattern mismatches report the
/// offending block together with its Frobenius norm.
inline BlockFormClassification classify_block_form(const Matrix& x, int n, double tol = 1e-9) {
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    if (x.rows() != m || x.cols() != m) throw std::invalid_argument("classify_block_form: size mismatch");

    double upper = 0.0, lower = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 2; j < m; ++j) {
            upper += x(i, j) * x(i, j);
            lower += x(j, i) * x(j, i);
        }
    upper = std::sqrt(upper);
    lower = std::sqrt(lower);
    if (upper > tol) return {std::nullopt, "upper-right off-diagonal block", upper};
    if (lower > tol) return {std::nullopt, "lower-left off-diagonal block", lower};

    const double sym = std::abs(x(0, 0) - x(1, 1));
    const double skew = std::abs(x(0, 1) + x(1, 0));
    const double rot_residual = std::sqrt(sym * sym + skew * skew);
    if (rot_residual > tol) return {std::nullopt, "leading 2x2 rotation block", rot_residual};

    Matrix inner(m - 2, m - 2);
    for (std::size_t i = 2; i < m; ++i)
        for (std::size_t j = 2; j < m; ++j) inner(i - 2, j - 2) = x(i, j);
    const double alpha = 0.5 * (x(0, 0) + x(1, 1));
    const double beta = 0.5 * (x(0, 1) - x(1, 0));
    return {BlockFormMatrix{alpha, beta, std::move(inner)}, "", 0.0};
}

/// Membership residual for the block-form group: |det(inner)*(a^2+b^2) - 1|.
inline double block_form_group_residual(const BlockFormMatrix& form) {
    const double scale = form.alpha * form.alpha + form.beta * form.beta;
    return std::abs(determinant(form.inner) * scale - 1.0);
}

// ---------------------------------------------------------------------------
// Dimension formulas
// ---------------------------------------------------------------------------

struct DimensionReport {
    int n;
    int dim_sl;           // n(n+2), the projective group of the sphere
    int dim_isom_bound;   // n(n+1)/2
    int dim_proj_prime;   // computed centralizer dimension
    bool chain_holds;     // dim_isom_bound < dim_proj_prime < dim_sl, both strict
};

inline int sl_dimension(int n) { return n * (n + 2); }
inline int isometry_bound_dimension(int n) { return n * (n + 1) / 2; }
inline int centralizer_dimension_formula(int n) { return n * n - 2 * n + 2; }

inline DimensionReport dimension_report(int n, double rel_tol = 1e-9) {
    if (n < 2) throw std::invalid_argument("dimension_report: n must be at least 2");
    const int dim_centralizer = centralizer(n, rel_tol).dim;
    const int dim_sl = sl_dimension(n);
    const int dim_isom = isometry_bound_dimension(n);
    const bool chain = dim_isom < dim_centralizer && dim_centralizer < dim_sl;
    return DimensionReport{n, dim_sl, dim_isom, dim_centralizer, chain};
}

}  // namespace projcert
