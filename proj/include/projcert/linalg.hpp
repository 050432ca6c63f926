#pragma once

// Dense real linear algebra on small matrices: LU factorization, one-sided
// Jacobi SVD, numerical null spaces with explicit rank thresholds, matrix
// exponentials by scaling and squaring, and best-fit planes through the
// origin. All values are immutable once constructed and every function is
// pure, so concurrent use needs no synchronization.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace projcert {

/// Raised when a computation cannot certify its result numerically.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a numerical rank decision lands inside the ambiguity window
/// around the threshold, or when two elimination strategies disagree.
struct RankAmbiguityError : NumericError {
    using NumericError::NumericError;
};

/// Raised when plane_fit receives points spanning fewer than two dimensions.
struct DegeneratePointsError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Vector {
public:
    explicit Vector(std::size_t dim) : entries_(dim, 0.0) {
        if (dim == 0) throw std::invalid_argument("Vector: dimension must be positive");
    }

    Vector(std::initializer_list<double> values) : entries_(values) {
        if (entries_.empty()) throw std::invalid_argument("Vector: dimension must be positive");
    }

    static Vector from_entries(std::vector<double> values) {
        if (values.empty()) throw std::invalid_argument("Vector: dimension must be positive");
        Vector v(values.size());
        v.entries_ = std::move(values);
        return v;
    }

    static Vector basis(std::size_t dim, std::size_t index) {
        Vector v(dim);
        v[index] = 1.0;
        return v;
    }

    [[nodiscard]] std::size_t dim() const { return entries_.size(); }
    double& operator[](std::size_t i) { return entries_[i]; }
    const double& operator[](std::size_t i) const { return entries_[i]; }
    [[nodiscard]] const std::vector<double>& entries() const { return entries_; }

    [[nodiscard]] bool is_finite() const {
        for (double e : entries_)
            if (!std::isfinite(e)) return false;
        return true;
    }

    [[nodiscard]] double dot(const Vector& other) const {
        check_same_dim(other);
        double s = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i) s += entries_[i] * other[i];
        return s;
    }

    [[nodiscard]] double norm() const { return std::sqrt(dot(*this)); }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double e : entries_) m = std::max(m, std::abs(e));
        return m;
    }

    [[nodiscard]] Vector normalized() const {
        const double n = norm();
        if (n < 1e-14) throw NumericError("Vector::normalized: vector is numerically zero");
        return *this * (1.0 / n);
    }

    Vector operator+(const Vector& other) const {
        check_same_dim(other);
        Vector r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r[i] = entries_[i] + other[i];
        return r;
    }

    Vector operator-(const Vector& other) const {
        check_same_dim(other);
        Vector r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r[i] = entries_[i] - other[i];
        return r;
    }

    Vector operator*(double s) const {
        Vector r(dim());
        for (std::size_t i = 0; i < dim(); ++i) r[i] = entries_[i] * s;
        return r;
    }

    Vector& operator+=(const Vector& other) {
        check_same_dim(other);
        for (std::size_t i = 0; i < dim(); ++i) entries_[i] += other[i];
        return *this;
    }

    Vector& operator-=(const Vector& other) {
        check_same_dim(other);
        for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= other[i];
        return *this;
    }

private:
    void check_same_dim(const Vector& other) const {
        if (other.dim() != dim()) throw std::invalid_argument("Vector: dimension mismatch");
    }

    std::vector<double> entries_;
};

inline Vector operator*(double s, const Vector& v) { return v * s; }

/// Dense real matrix, row-major entry order.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: dimensions must be positive");
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows)
        : Matrix(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != cols_) throw std::invalid_argument("Matrix: ragged rows");
            std::size_t j = 0;
            for (double e : row) (*this)(i, j++) = e;
            ++i;
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool is_square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    [[nodiscard]] const std::vector<double>& entries() const { return entries_; }

    [[nodiscard]] bool is_finite() const {
        for (double e : entries_)
            if (!std::isfinite(e)) return false;
        return true;
    }

    [[nodiscard]] double trace() const {
        if (!is_square()) throw std::invalid_argument("Matrix::trace: matrix must be square");
        double t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    [[nodiscard]] double frobenius_norm() const {
        double s = 0.0;
        for (double e : entries_) s += e * e;
        return std::sqrt(s);
    }

    [[nodiscard]] double max_abs() const {
        double m = 0.0;
        for (double e : entries_) m = std::max(m, std::abs(e));
        return m;
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator+(const Matrix& other) const {
        check_same_shape(other);
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] + other.entries_[k];
        return r;
    }

    Matrix operator-(const Matrix& other) const {
        check_same_shape(other);
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] - other.entries_[k];
        return r;
    }

    Matrix operator*(double s) const {
        Matrix r(rows_, cols_);
        for (std::size_t k = 0; k < entries_.size(); ++k) r.entries_[k] = entries_[k] * s;
        return r;
    }

    Matrix operator*(const Matrix& other) const {
        if (cols_ != other.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
            }
        return r;
    }

    Vector operator*(const Vector& v) const {
        if (cols_ != v.dim()) throw std::invalid_argument("Matrix: shape mismatch in matrix-vector product");
        Vector r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
            r[i] = s;
        }
        return r;
    }

    [[nodiscard]] Vector row(std::size_t i) const {
        Vector r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    [[nodiscard]] Vector col(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

private:
    void check_same_shape(const Matrix& other) const {
        if (other.rows_ != rows_ || other.cols_ != cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<double> entries_;
};

inline Matrix operator*(double s, const Matrix& m) { return m * s; }

/// Frobenius inner product, the metric used for orthonormal matrix bases.
inline double frobenius_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("frobenius_inner: shape mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) s += a.entries()[k] * b.entries()[k];
    return s;
}

// ---------------------------------------------------------------------------
// LU factorization with partial pivoting
// ---------------------------------------------------------------------------

struct LuFactorization {
    Matrix lu;                      // packed L (unit diagonal) and U
    std::vector<std::size_t> perm;  // row permutation applied to the input
    int sign = 1;                   // permutation parity
    bool singular = false;
};

inline LuFactorization lu_factorize(Matrix m) {
    if (!m.is_square()) throw std::invalid_argument("lu_factorize: matrix must be square");
    const std::size_t n = m.rows();
    LuFactorization f{std::move(m), {}, 1, false};
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(f.lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double cand = std::abs(f.lu(i, k));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= factor * f.lu(k, j);
        }
    }
    return f;
}

inline Vector lu_solve(const LuFactorization& f, const Vector& rhs) {
    const std::size_t n = f.lu.rows();
    if (rhs.dim() != n) throw std::invalid_argument("lu_solve: dimension mismatch");
    if (f.singular) throw NumericError("lu_solve: matrix is singular");
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s;
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x[j];
        x[ii] = s / f.lu(ii, ii);
    }
    return x;
}

inline double determinant(const Matrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: matrix must be square");
    if (!m.is_finite()) throw std::invalid_argument("determinant: entries must be finite");
    const LuFactorization f = lu_factorize(m);
    if (f.singular) return 0.0;
    double d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < m.rows(); ++i) d *= f.lu(i, i);
    return d;
}

inline Matrix inverse(const Matrix& m) {
    const LuFactorization f = lu_factorize(m);
    if (f.singular) throw NumericError("inverse: matrix is singular");
    const std::size_t n = m.rows();
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vector x = lu_solve(f, Vector::basis(n, j));
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Singular value decomposition (one-sided Jacobi)
// ---------------------------------------------------------------------------

struct Svd {
    std::vector<double> singular_values;  // descending
    Matrix right_vectors;                 // columns are the right singular vectors, same order
};

/// One-sided Jacobi SVD. Orthogonalizes the columns of the working copy by
/// plane rotations; the accumulated rotations form the right singular
/// vectors. Robust at these sizes and accurate for tiny singular values.
inline Svd jacobi_svd(const Matrix& input) {
    if (!input.is_finite()) throw std::invalid_argument("jacobi_svd: entries must be finite");
    const std::size_t r = input.rows();
    const std::size_t c = input.cols();
    Matrix a = input;
    Matrix v = Matrix::identity(c);

    constexpr double kOrthTol = 1e-14;
    constexpr int kMaxSweeps = 60;
    // Columns whose norm falls to rounding level of the whole matrix are
    // exact kernel directions for every purpose here; orthogonalizing their
    // junk content against real columns would cycle forever.
    const double tiny = 1e-14 * input.frobenius_norm();
    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < c; ++p) {
            for (std::size_t q = p + 1; q < c; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < r; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (app <= tiny * tiny || aqq <= tiny * tiny) continue;
                const double scale = std::sqrt(app * aqq);
                if (std::abs(apq) <= kOrthTol * scale) continue;
                converged = false;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t i = 0; i < r; ++i) {
                    const double ap = a(i, p), aq = a(i, q);
                    a(i, p) = cs * ap - sn * aq;
                    a(i, q) = sn * ap + cs * aq;
                }
                for (std::size_t i = 0; i < c; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = cs * vp - sn * vq;
                    v(i, q) = sn * vp + cs * vq;
                }
            }
        }
    }
    if (!converged) throw NumericError("jacobi_svd: did not converge");

    std::vector<double> sigma(c);
    for (std::size_t j = 0; j < c; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < r; ++i) s += a(i, j) * a(i, j);
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(c);
    for (std::size_t j = 0; j < c; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&sigma](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    Svd out{std::vector<double>(c), Matrix(c, c)};
    for (std::size_t j = 0; j < c; ++j) {
        out.singular_values[j] = sigma[order[j]];
        for (std::size_t i = 0; i < c; ++i) out.right_vectors(i, j) = v(i, order[j]);
    }
    return out;
}

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular values fall below rel_tol times the largest singular value.
/// The zero matrix maps to the full standard basis.
inline std::vector<Vector> null_space(const Matrix& m, double rel_tol) {
    if (!m.is_finite()) throw std::invalid_argument("null_space: entries must be finite");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("null_space: rel_tol must lie in (0, 1)");
    const Svd svd = jacobi_svd(m);
    const double sigma_max = svd.singular_values.front();
    std::vector<Vector> kernel;
    if (sigma_max == 0.0) {
        for (std::size_t j = 0; j < m.cols(); ++j) kernel.push_back(Vector::basis(m.cols(), j));
        return kernel;
    }
    const double threshold = rel_tol * sigma_max;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (svd.singular_values[j] < threshold) kernel.push_back(svd.right_vectors.col(j));
    return kernel;
}

/// Rank by Gaussian elimination with partial pivoting; the second, SVD-free
/// elimination strategy used to cross-check every dimension certificate.
inline std::size_t elimination_rank(const Matrix& m, double rel_tol) {
    if (!m.is_finite()) throw std::invalid_argument("elimination_rank: entries must be finite");
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument("elimination_rank: rel_tol must lie in (0, 1)");
    Matrix a = m;
    const double scale = a.max_abs();
    if (scale == 0.0) return 0;
    const double threshold = rel_tol * scale;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < a.cols() && rank < a.rows(); ++col) {
        std::size_t piv = rank;
        double best = std::abs(a(rank, col));
        for (std::size_t i = rank + 1; i < a.rows(); ++i) {
            const double cand = std::abs(a(i, col));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best <= threshold) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(rank, j), a(piv, j));
        for (std::size_t i = rank + 1; i < a.rows(); ++i) {
            const double factor = a(i, col) / a(rank, col);
            for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= factor * a(rank, j);
        }
        ++rank;
    }
    return rank;
}

/// exp(tau * a) by scaling and squaring around a truncated series kernel.
inline Matrix matrix_exp(const Matrix& a, double tau) {
    if (!a.is_square()) throw std::invalid_argument("matrix_exp: matrix must be square");
    if (!a.is_finite() || !std::isfinite(tau))
        throw std::invalid_argument("matrix_exp: entries must be finite");
    const std::size_t n = a.rows();
    Matrix t = a * tau;
    const double theta = t.frobenius_norm();
    int squarings = 0;
    if (theta > 0.25) {
        squarings = static_cast<int>(std::ceil(std::log2(theta / 0.25)));
        t = t * std::ldexp(1.0, -squarings);
    }

    Matrix sum = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    bool series_converged = false;
    for (int k = 1; k <= 40; ++k) {
        term = term * t;
        term = term * (1.0 / static_cast<double>(k));
        sum = sum + term;
        if (term.frobenius_norm() <= 1e-20 * sum.frobenius_norm()) {
            series_converged = true;
            break;
        }
    }
    if (!series_converged) throw NumericError("matrix_exp: series did not converge");

    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

// ---------------------------------------------------------------------------
// Best-fit plane through the origin
// ---------------------------------------------------------------------------

struct PlaneFit {
    Vector u, w;      // orthonormal spanning frame of the fitted 2-plane
    double residual;  // third singular value / first; ~0 iff points lie on a great circle
};

inline PlaneFit plane_fit(const std::vector<Vector>& points) {
    if (points.size() < 3) throw std::invalid_argument("plane_fit: need at least 3 points");
    const std::size_t d = points.front().dim();
    if (d < 3) throw std::invalid_argument("plane_fit: ambient dimension must be at least 3");
    Matrix stacked(points.size(), d);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vector& p = points[i];
        if (p.dim() != d) throw std::invalid_argument("plane_fit: mixed dimensions");
        if (!p.is_finite()) throw std::invalid_argument("plane_fit: entries must be finite");
        if (std::abs(p.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("plane_fit: points must lie on the unit sphere");
        for (std::size_t j = 0; j < d; ++j) stacked(i, j) = p[j];
    }
    const Svd svd = jacobi_svd(stacked);
    const double s0 = svd.singular_values[0];
    const double s1 = svd.singular_values[1];
    if (s0 == 0.0 || s1 <= 1e-12 * s0)
        throw DegeneratePointsError("plane_fit: points span fewer than two dimensions");
    return PlaneFit{svd.right_vectors.col(0), svd.right_vectors.col(1), svd.singular_values[2] / s0};
}

}  // namespace projcert
