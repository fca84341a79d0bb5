#include <catch2/catch_amalgamated.hpp>

#include <sepmod/matrix.hpp>

#include "support/oracles.hpp"

using namespace sepmod;

TEST_CASE("finiteness guards", "[matrix]") {
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    REQUIRE(all_finite(m));
    REQUIRE_NOTHROW(require_finite(m, "m"));
    m(1, 1) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    REQUIRE_FALSE(all_finite(m));
    REQUIRE_THROWS_AS(require_finite(m, "m"), NonFiniteEntryError);
    m(1, 1) = Complex(0.0, std::numeric_limits<double>::infinity());
    REQUIRE_THROWS_AS(require_finite(m, "m"), NonFiniteEntryError);
}

TEST_CASE("shape guards", "[matrix]") {
    const ComplexMatrix a = ComplexMatrix::Zero(2, 3);
    const ComplexMatrix b = ComplexMatrix::Zero(3, 3);
    REQUIRE_THROWS_AS(require_square(a, "a"), ShapeMismatchError);
    REQUIRE_NOTHROW(require_square(b, "b"));
    REQUIRE_THROWS_AS(require_same_shape(a, b, "ab"), ShapeMismatchError);
}

TEST_CASE("singular values and operator norm of a nilpotent matrix", "[matrix]") {
    ComplexMatrix n(2, 2);
    n << 0.0, 2.0, 0.0, 0.0;
    const RealVector sv = singular_values(n);
    REQUIRE(sv.size() == 2);
    REQUIRE(sv(0) == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(sv(1) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(operator_norm(n) == Catch::Approx(2.0).margin(1e-14));
    // spectral radius is 0; the operator norm sees the off-diagonal weight
}

TEST_CASE("empty matrices", "[matrix]") {
    const ComplexMatrix e(0, 0);
    REQUIRE(operator_norm(e) == 0.0);
    REQUIRE(numerical_rank(e, Tolerance{}) == 0);
    REQUIRE_FALSE(min_positive_singular(e, Tolerance{}).has_value());
}

TEST_CASE("numerical rank uses a relative cutoff", "[matrix]") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-30;
    Tolerance tol;
    REQUIRE(numerical_rank(d, tol) == 1);
    const auto smallest = min_positive_singular(d, tol);
    REQUIRE(smallest.has_value());
    REQUIRE(*smallest == Catch::Approx(1.0));

    REQUIRE_FALSE(min_positive_singular(ComplexMatrix::Zero(3, 3), tol).has_value());

    // scaling the matrix must not change the rank decision
    REQUIRE(numerical_rank(ComplexMatrix(1e-20 * d), tol) == 1);
}

TEST_CASE("pseudoinverse of a rank-one matrix", "[matrix]") {
    ComplexMatrix a(2, 2);
    a << 1.0, 1.0, 0.0, 0.0;
    const ComplexMatrix p = moore_penrose(a, Tolerance{});
    ComplexMatrix expected(2, 2);
    expected << 0.5, 0.0, 0.5, 0.0;
    REQUIRE(operator_norm(p - expected) <= 1e-12);
    REQUIRE(oracles::penrose_ok(a, p, 1e-12));
}

TEST_CASE("pseudoinverse satisfies the Penrose conditions on random input", "[matrix]") {
    sepmod::detail::NormalStream rng(7);
    Tolerance tol;
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index rows = 2 + trial % 5;
        const Eigen::Index cols = 2 + (trial / 5) % 5;
        const Eigen::Index inner = 1 + trial % 3;
        ComplexMatrix left(rows, inner);
        ComplexMatrix right(inner, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < inner; ++j) left(i, j) = rng.next_complex();
        for (Eigen::Index i = 0; i < inner; ++i)
            for (Eigen::Index j = 0; j < cols; ++j) right(i, j) = rng.next_complex();
        const ComplexMatrix a = left * right; // rank <= inner by construction
        const ComplexMatrix p = moore_penrose(a, tol);
        REQUIRE(oracles::penrose_ok(a, p, 1e-10));
        REQUIRE(numerical_rank(a, tol) == oracles::rref_rank(a));
        REQUIRE(operator_norm(a) == Catch::Approx(oracles::power_norm(a)).epsilon(1e-8));
    }
}

TEST_CASE("projection and idempotent predicates", "[matrix]") {
    ComplexMatrix half(2, 2);
    half << 0.5, 0.5, 0.5, 0.5; // orthogonal projection onto span{(1,1)}
    REQUIRE(is_projection_matrix(half, 1e-9));
    REQUIRE(is_idempotent_matrix(half, 1e-9));

    ComplexMatrix oblique(2, 2);
    oblique << 1.0, 1.0, 0.0, 0.0; // idempotent but not self-adjoint
    REQUIRE(is_idempotent_matrix(oblique, 1e-9));
    REQUIRE_FALSE(is_projection_matrix(oblique, 1e-9));

    REQUIRE_FALSE(is_idempotent_matrix(ComplexMatrix(2.0 * half), 1e-9));
}

TEST_CASE("approx_equal is an absolute entrywise comparison", "[matrix]") {
    ComplexMatrix a = ComplexMatrix::Identity(2, 2);
    ComplexMatrix b = a;
    b(0, 1) = 5e-10;
    REQUIRE(approx_equal(a, b, 1e-9));
    b(0, 1) = 5e-9;
    REQUIRE_FALSE(approx_equal(a, b, 1e-9));
}

TEST_CASE("tolerance validation rejects out-of-range values", "[matrix]") {
    Tolerance tol;
    REQUIRE_NOTHROW(tol.validate());
    tol.rank_rel = 0.0;
    REQUIRE_THROWS_AS(tol.validate(), PreconditionError);
    tol.rank_rel = 1e-10;
    tol.eq_abs = 1.5;
    REQUIRE_THROWS_AS(tol.validate(), PreconditionError);
}
