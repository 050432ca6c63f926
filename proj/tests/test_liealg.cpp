#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "projcert/liealg.hpp"
#include "projcert/rng.hpp"

using namespace projcert;

TEST_CASE("deck matrix for n=2 is the exact integer matrix") {
    const DeckMatrix deck = DeckMatrix::build(2);
    const Matrix expected{{0.0, 1.0, 0.0}, {-1.0, 0.0, 0.0}, {0.0, 0.0, -1.0}};
    CHECK((deck.matrix - expected).max_abs() == 0.0);
    CHECK_THROWS_AS(DeckMatrix::build(1), std::invalid_argument);
}

TEST_CASE("deck matrix powers for n=5") {
    // B is orthogonal and fixed-point free, but squares to the half-turn of
    // the leading plane rather than the identity; B has order 4.
    const Matrix b = DeckMatrix::build(5).matrix;
    CHECK((b.transpose() * b - Matrix::identity(6)).max_abs() == 0.0);

    Matrix half_turn = Matrix::identity(6);
    half_turn(0, 0) = -1.0;
    half_turn(1, 1) = -1.0;
    CHECK((b * b - half_turn).max_abs() == 0.0);
    CHECK((b * b * b * b - Matrix::identity(6)).max_abs() == 0.0);
}

TEST_CASE("trace-free coordinates round-trip") {
    Rng rng(31);
    for (std::size_t m : {3u, 4u, 6u}) {
        Matrix x = rng.gaussian_matrix(m, m);
        const double shift = x.trace() / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) x(i, i) -= shift;
        const Matrix back = trace_free_from_coords(trace_free_coords(x, m), m);
        CHECK((back - x).max_abs() <= 1e-14);
    }
}

TEST_CASE("commutator operator columns match a naive commutator oracle") {
    const DeckMatrix deck = DeckMatrix::build(3);
    const Matrix op = sylvester_operator(deck);
    const auto basis = trace_free_basis(4);
    REQUIRE(op.rows() == basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const Vector expected = trace_free_coords(oracles::naive_commutator(deck.matrix, basis[k]), 4);
        const Vector got = op.col(k);
        CHECK((got - expected).max_abs() == 0.0);
    }
}

TEST_CASE("commutator operator kills the trace-free projection of the deck matrix") {
    const DeckMatrix deck = DeckMatrix::build(3);
    const Matrix op = sylvester_operator(deck);
    // remove the trace so the projection lies in the operator's domain
    const Matrix projected = deck.matrix - Matrix::identity(4) * (deck.matrix.trace() / 4.0);
    const Vector image = op * trace_free_coords(projected, 4);
    CHECK(image.max_abs() <= 1e-14);
}

TEST_CASE("commutator operator is nonzero on an off-block elementary matrix") {
    const DeckMatrix deck = DeckMatrix::build(3);
    const Matrix op = sylvester_operator(deck);
    Matrix e13(4, 4);
    e13(0, 2) = 1.0;  // trace-free already
    const Vector image = op * trace_free_coords(e13, 4);
    const Vector expected = trace_free_coords(oracles::naive_commutator(deck.matrix, e13), 4);
    CHECK((image - expected).max_abs() == 0.0);
    CHECK(image.max_abs() > 0.5);
}

TEST_CASE("commutator operator for n=2 has a 2-dimensional kernel") {
    const Matrix op = sylvester_operator(DeckMatrix::build(2));
    CHECK(null_space(op, 1e-9).size() == 2);
}

TEST_CASE("centralizer dimension follows n^2 - 2n + 2") {
    CHECK(centralizer(2).dim == 2);
    CHECK(centralizer(5).dim == 17);
}

TEST_CASE("centralizer for n=4 against the exact rational elimination oracle") {
    // sl(5) is 24-dimensional; the exact rank of the commutator operator is
    // 24 - (n^2-2n+2) = 14, certified in integer arithmetic.
    const Matrix op = sylvester_operator(DeckMatrix::build(4));
    REQUIRE(op.rows() == 24);
    const std::size_t exact_rank = oracles::bareiss_rank(oracles::to_integer_rows(op));
    CHECK(exact_rank == 14);
    CHECK(centralizer(4).dim == 24 - static_cast<int>(exact_rank));
    CHECK(centralizer(4).dim == 10);
}

TEST_CASE("centralizer bases commute with the deck matrix and are orthonormal") {
    for (int n = 2; n <= 8; ++n) {
        const CentralizerBasis cb = centralizer(n);
        CHECK(cb.dim == centralizer_dimension_formula(n));
        CHECK(cb.basis.size() == static_cast<std::size_t>(cb.dim));

        // exact-integer certificate for the same dimension
        const Matrix op = sylvester_operator(DeckMatrix::build(n));
        const std::size_t exact_rank = oracles::bareiss_rank(oracles::to_integer_rows(op));
        CHECK(static_cast<std::size_t>(cb.dim) == op.cols() - exact_rank);

        const Matrix& b = DeckMatrix::build(n).matrix;
        for (std::size_t i = 0; i < cb.basis.size(); ++i) {
            const Matrix& x = cb.basis[i];
            CHECK((b * x - x * b).frobenius_norm() <= 1e-9);
            CHECK(std::abs(x.trace()) <= 1e-10);
            for (std::size_t j = 0; j <= i; ++j) {
                const double expected = i == j ? 1.0 : 0.0;
                CHECK(std::abs(frobenius_inner(cb.basis[i], cb.basis[j]) - expected) <= 1e-12);
            }
        }
    }
}

TEST_CASE("centralizer aborts when the rank threshold is ambiguous") {
    // with rel_tol = 0.5 every nonzero singular value of the commutator
    // operator lands inside the [0.1, 10] x threshold window
    CHECK_THROWS_AS(centralizer(3, 0.5), RankAmbiguityError);
}

TEST_CASE("classify_block_form on the identity") {
    const BlockFormClassification cls = classify_block_form(Matrix::identity(4), 3);
    REQUIRE(cls.matches());
    CHECK(cls.form->alpha == doctest::Approx(1.0));
    CHECK(cls.form->beta == doctest::Approx(0.0));
    CHECK((cls.form->inner - Matrix::identity(2)).max_abs() == 0.0);
    CHECK(block_form_group_residual(*cls.form) <= 1e-12);
}

TEST_CASE("classify_block_form on the deck matrix itself") {
    const BlockFormClassification cls = classify_block_form(DeckMatrix::build(3).matrix, 3);
    REQUIRE(cls.matches());
    CHECK(cls.form->alpha == doctest::Approx(0.0));
    CHECK(cls.form->beta == doctest::Approx(1.0));
    CHECK((cls.form->inner - Matrix::identity(2) * -1.0).max_abs() == 0.0);
    CHECK(block_form_group_residual(*cls.form) <= 1e-12);
}

TEST_CASE("classify_block_form rejects an off-block entry") {
    Matrix e13(4, 4);
    e13(0, 2) = 1.0;
    const BlockFormClassification cls = classify_block_form(e13, 3);
    CHECK_FALSE(cls.matches());
    CHECK(cls.offending_block == "upper-right off-diagonal block");
    CHECK(cls.offending_norm == doctest::Approx(1.0));
}

TEST_CASE("classify_block_form rejects a non-rotation leading block") {
    Matrix x = Matrix::identity(4);
    x(0, 0) = 2.0;  // breaks the alpha = x00 = x11 pattern
    const BlockFormClassification cls = classify_block_form(x, 3);
    CHECK_FALSE(cls.matches());
    CHECK(cls.offending_block == "leading 2x2 rotation block");
}

TEST_CASE("exponentials of centralizer elements satisfy the block form") {
    for (int n : {2, 3, 5}) {
        const CentralizerBasis cb = centralizer(n);
        for (const Matrix& x : cb.basis)
            for (double t : {0.1, 1.0}) {
                const BlockFormClassification cls = classify_block_form(matrix_exp(x, t), n);
                REQUIRE(cls.matches());
                CHECK(block_form_group_residual(*cls.form) <= 1e-8);
            }
    }
}

TEST_CASE("random block-form matrices commute with the deck matrix") {
    Rng rng(37);
    for (int n : {2, 3, 6}) {
        const std::size_t m = static_cast<std::size_t>(n) + 1;
        const Matrix b = DeckMatrix::build(n).matrix;
        for (int trial = 0; trial < 10; ++trial) {
            Matrix x(m, m);
            const double alpha = rng.gaussian();
            const double beta = rng.gaussian();
            x(0, 0) = alpha;
            x(1, 1) = alpha;
            x(0, 1) = beta;
            x(1, 0) = -beta;
            for (std::size_t i = 2; i < m; ++i)
                for (std::size_t j = 2; j < m; ++j) x(i, j) = rng.gaussian();
            CHECK((b * x - x * b).frobenius_norm() <= 1e-12);
        }
    }
}

TEST_CASE("dimension_report on frozen cases") {
    const DimensionReport r5 = dimension_report(5);
    CHECK(r5.dim_sl == 35);
    CHECK(r5.dim_isom_bound == 15);
    CHECK(r5.dim_proj_prime == 17);
    CHECK(r5.chain_holds);

    const DimensionReport r4 = dimension_report(4);
    CHECK(r4.dim_sl == 24);
    CHECK(r4.dim_isom_bound == 10);
    CHECK(r4.dim_proj_prime == 10);
    CHECK_FALSE(r4.chain_holds);

    const DimensionReport r2 = dimension_report(2);
    CHECK(r2.dim_sl == 8);
    CHECK(r2.dim_isom_bound == 3);
    CHECK(r2.dim_proj_prime == 2);
    CHECK_FALSE(r2.chain_holds);
}

TEST_CASE("the inequality chain is strict exactly above n = 4") {
    for (int n = 2; n <= 8; ++n) {
        const DimensionReport r = dimension_report(n);
        CHECK(r.chain_holds == (n > 4));
        CHECK(r.dim_proj_prime < r.dim_sl);
        CHECK(r.dim_sl == n * (n + 2));
    }
}
