#pragma once

// Deterministic sampling. mt19937_64 is fully specified by the standard and
// the uniform/gaussian transforms below avoid the implementation-defined
// std::*_distribution classes, so streams are bit-identical across builds.

#include <cmath>
#include <cstdint>
#include <random>

#include "linalg.hpp"

namespace projcert {

inline constexpr std::uint64_t kDefaultSeed = 42;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1), 53 bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (no cached second value).
    double gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    Vector gaussian_vector(std::size_t dim) {
        Vector v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

    /// Uniform point on the unit sphere in R^dim.
    Vector unit_vector(std::size_t dim) {
        for (;;) {
            const Vector v = gaussian_vector(dim);
            if (v.norm() > 1e-8) return v.normalized();
        }
    }

    Matrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian();
        return m;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace projcert
