#include <catch2/catch_amalgamated.hpp>

#include <sepmod/idempotents.hpp>

#include "support/oracles.hpp"

using namespace sepmod;

namespace {

const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

Subspace line(double x, double y) {
    ComplexMatrix gen(2, 1);
    gen << x, y;
    return orthonormalize(gen, Tolerance{});
}

std::pair<Subspace, Subspace> random_separated_pair(Eigen::Index ambient, Eigen::Index dh,
                                                    Eigen::Index dk, detail::NormalStream& rng,
                                                    const Tolerance& tol) {
    for (;;) {
        ComplexMatrix gh(ambient, dh);
        ComplexMatrix gk(ambient, dk);
        for (Eigen::Index i = 0; i < ambient; ++i) {
            for (Eigen::Index j = 0; j < dh; ++j) gh(i, j) = rng.next_complex();
            for (Eigen::Index j = 0; j < dk; ++j) gk(i, j) = rng.next_complex();
        }
        const Subspace h = orthonormalize(gh, tol);
        const Subspace k = orthonormalize(gk, tol);
        if (is_separated(h, k, tol).separated) return {h, k}; // generic, first try
    }
}

} // namespace

TEST_CASE("idempotent wrapper validates and exposes range and nullspace", "[idempotents]") {
    ComplexMatrix m(2, 2);
    m << 1.0, 1.0, 0.0, 0.0;
    const Idempotent pi(m, Tolerance{});
    REQUIRE(pi.range().dim() == 1);
    REQUIRE(pi.nullspace().dim() == 1);
    REQUIRE(subspace_equal(pi.range(), line(1.0, 0.0), 1e-9));
    REQUIRE(subspace_equal(pi.nullspace(), line(1.0, -1.0), 1e-9));
    REQUIRE(pi.norm() == Catch::Approx(std::sqrt(2.0)));

    ComplexMatrix bad(2, 2);
    bad << 1.0, 0.0, 0.0, 2.0;
    REQUIRE_THROWS_AS(Idempotent(bad, Tolerance{}), NotAnIdempotentError);
}

TEST_CASE("idempotent norm is the reciprocal angle sine between range and nullspace",
          "[idempotents]") {
    detail::NormalStream rng(41);
    const Tolerance tol;
    for (int trial = 0; trial < 10; ++trial) {
        const auto [h, k] = random_separated_pair(4, 2, 2, rng, tol);
        const CanonicalPair pair = canonical_pair(h, k, tol);
        const double c = dixmier_cosine(pair.pi1.range(), pair.pi1.nullspace());
        REQUIRE(pair.pi1.norm() == Catch::Approx(1.0 / std::sqrt(1.0 - c * c)).epsilon(1e-8));
    }
}

TEST_CASE("canonical pair for the oblique plane pair", "[idempotents]") {
    const Tolerance tol;
    const CanonicalPair pair = canonical_pair(line(1.0, 0.0), line(1.0, 1.0), tol);

    ComplexMatrix pi1_expected(2, 2);
    pi1_expected << 1.0, -1.0, 0.0, 0.0;
    ComplexMatrix pi2_expected(2, 2);
    pi2_expected << 0.0, 1.0, 0.0, 1.0;
    REQUIRE(operator_norm(pair.pi1.matrix() - pi1_expected) <= 1e-10);
    REQUIRE(operator_norm(pair.pi2.matrix() - pi2_expected) <= 1e-10);

    // both annihilation products vanish and the sum is the projection onto H + K
    REQUIRE(operator_norm(pair.pi1.matrix() * pair.pi2.matrix()) <= 1e-12);
    REQUIRE(operator_norm(pair.pi2.matrix() * pair.pi1.matrix()) <= 1e-12);
    REQUIRE(operator_norm(pair.pi1.matrix() + pair.pi2.matrix() - pair.p_tilde) <= 1e-12);
    REQUIRE(operator_norm(pair.p_tilde - ComplexMatrix::Identity(2, 2)) <= 1e-12);

    REQUIRE(pair.pi1.norm() == Catch::Approx(std::sqrt(2.0)));
    REQUIRE(pair.pi2.norm() == Catch::Approx(std::sqrt(2.0)));
    const auto [a1, a2] = separation_constants(line(1.0, 0.0), line(1.0, 1.0), tol);
    REQUIRE(a1 == Catch::Approx(inv_sqrt2));
    REQUIRE(a2 == Catch::Approx(inv_sqrt2));

    REQUIRE_THROWS_AS(canonical_pair(line(1.0, 0.0), line(1.0, 0.0), tol), NotSeparatedError);
}

TEST_CASE("canonical pair properties on random separated pairs", "[idempotents]") {
    detail::NormalStream rng(43);
    const Tolerance tol;
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index ambient = 5 + trial % 3;
        const auto [h, k] = random_separated_pair(ambient, 2, 1 + trial % 2, rng, tol);
        const CanonicalPair pair = canonical_pair(h, k, tol);

        REQUIRE(subspace_equal(pair.pi1.range(), h, 1e-8));
        REQUIRE(subspace_equal(pair.pi2.range(), k, 1e-8));
        REQUIRE(operator_norm(pair.pi1.matrix() * pair.pi2.matrix()) <= 1e-9);
        REQUIRE(operator_norm(pair.pi2.matrix() * pair.pi1.matrix()) <= 1e-9);

        // the sum projects onto H + K along its orthogonal complement
        const ComplexMatrix sum_matrix = pair.pi1.matrix() + pair.pi2.matrix();
        REQUIRE(operator_norm(sum_matrix - sum(h, k, tol).projection()) <= 1e-8);

        // restriction identities: Pi1 x = x on H, Pi1 y = 0 on K
        REQUIRE(operator_norm(pair.pi1.matrix() * h.frame() - h.frame()) <= 1e-9);
        REQUIRE(operator_norm(pair.pi1.matrix() * k.frame()) <= 1e-9);

        // norms are symmetric for the canonical construction
        REQUIRE(pair.pi1.norm() == Catch::Approx(pair.pi2.norm()).epsilon(1e-8));
        const double c0 = dixmier_cosine(h, k);
        REQUIRE(pair.pi1.norm() == Catch::Approx(1.0 / std::sqrt(1.0 - c0 * c0)).epsilon(1e-8));
    }
}

TEST_CASE("resolvent idempotent for a projection pair", "[idempotents]") {
    const Tolerance tol;
    ComplexMatrix p = ComplexMatrix::Zero(2, 2);
    p(0, 0) = 1.0;
    ComplexMatrix q(2, 2);
    q << 0.5, 0.5, 0.5, 0.5;

    const Idempotent pi = koliha_idempotent(p, q, tol);
    ComplexMatrix expected(2, 2);
    expected << 1.0, -1.0, 0.0, 0.0;
    REQUIRE(operator_norm(pi.matrix() - expected) <= 1e-10);
    REQUIRE(operator_norm(pi.matrix() * p - p) <= 1e-12);  // fixes R(P)
    REQUIRE(operator_norm(pi.matrix() * q) <= 1e-12);      // kills R(Q)

    // ||PQ|| = ||QP|| here, and both orders give matching norms
    const Idempotent pi_swapped = koliha_idempotent(q, p, tol);
    REQUIRE(pi.norm() == Catch::Approx(pi_swapped.norm()));

    // the gate: ||PQ|| must be < 1
    REQUIRE_THROWS_AS(koliha_idempotent(p, p, tol), NormNotLessThanOneError);
}

TEST_CASE("resolvent idempotent properties on random projection pairs", "[idempotents]") {
    detail::NormalStream rng(47);
    const Tolerance tol;
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index ambient = 4 + trial % 3;
        const auto [a, b] = random_separated_pair(ambient, 1 + trial % 2, 1, rng, tol);
        const ComplexMatrix p = a.projection();
        const ComplexMatrix q = b.projection();
        if (operator_norm(p * q) >= 1.0 - 1e-6) continue;

        const Idempotent pi = koliha_idempotent(p, q, tol);
        REQUIRE(subspace_equal(pi.range(), a, 1e-8));
        REQUIRE(operator_norm(pi.matrix() * p - p) <= 1e-8);
        REQUIRE(operator_norm(pi.matrix() * q) <= 1e-8);
        // nullspace = R(Q) + (N(P) ∩ N(Q))
        const Subspace expected_null =
            sum(b, intersect(orth_complement(a), orth_complement(b), tol), tol);
        REQUIRE(subspace_equal(pi.nullspace(), expected_null, 1e-8));
        // resolvent commutation: (1 - PQ)^-1 P = P (1 - QP)^-1 is verified
        // inside the constructor-side checks; equality of mixed-product norms:
        REQUIRE(operator_norm(p * q) == Catch::Approx(operator_norm(q * p)).margin(1e-10));
    }
}

TEST_CASE("pseudoinverse of an idempotent linear combination", "[idempotents]") {
    const Tolerance tol;
    ComplexMatrix d1 = ComplexMatrix::Zero(2, 2);
    d1(0, 0) = 1.0;
    ComplexMatrix d2 = ComplexMatrix::Zero(2, 2);
    d2(1, 1) = 1.0;
    const Idempotent pi1(d1, tol);
    const Idempotent pi2(d2, tol);

    const ComplexMatrix t = mp_linear_combination(pi1, pi2, Complex(3.0, 0.0), tol);
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0 / 3.0;
    REQUIRE(operator_norm(t - expected) <= 1e-12);

    REQUIRE_THROWS_AS(mp_linear_combination(pi1, pi2, Complex(0.0, 0.0), tol), LambdaZeroError);

    // non-annihilating pairs are rejected
    ComplexMatrix oblique(2, 2);
    oblique << 1.0, 1.0, 0.0, 0.0;
    REQUIRE_THROWS_AS(mp_linear_combination(Idempotent(oblique, tol), pi1, Complex(1.0, 0.0), tol),
                      AnnihilationFailureError);
}

TEST_CASE("pseudoinverse formula matches the direct computation", "[idempotents]") {
    detail::NormalStream rng(53);
    const Tolerance tol;
    const std::vector<Complex> lambdas{{1.0, 0.0}, {2.0, 0.0}, {0.5, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    for (int trial = 0; trial < 8; ++trial) {
        const Eigen::Index ambient = 5 + trial % 2;
        const auto [h, k] = random_separated_pair(ambient, 2, 2, rng, tol);
        const CanonicalPair pair = canonical_pair(h, k, tol);
        for (const Complex lambda : lambdas) {
            const ComplexMatrix formula = mp_linear_combination(pair.pi1, pair.pi2, lambda, tol);
            const ComplexMatrix combo = pair.pi1.matrix() + lambda * pair.pi2.matrix();
            REQUIRE(oracles::penrose_ok(combo, formula, 1e-8));
            REQUIRE(operator_norm(formula - moore_penrose(combo, tol)) <= 1e-8);
        }
    }
}

TEST_CASE("range of the combination is independent of lambda", "[idempotents]") {
    detail::NormalStream rng(59);
    const Tolerance tol;
    const auto [h, k] = random_separated_pair(6, 2, 2, rng, tol);
    const CanonicalPair pair = canonical_pair(h, k, tol);
    const std::vector<Complex> lambdas{{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {1e-6, 0.0},
                                       {0.0, 0.0}};
    const auto rows = range_stability_sweep(pair.pi1, pair.pi2, lambdas, tol);
    REQUIRE(rows.size() == lambdas.size());
    for (const auto& row : rows) {
        if (row.lambda == Complex(0.0, 0.0)) {
            REQUIRE(row.rank == h.dim()); // only Pi1 is left
        } else {
            REQUIRE(row.rank == h.dim() + k.dim());
            REQUIRE(row.min_positive.has_value());
        }
    }
}

TEST_CASE("sum of an annihilating pair is a projection iff both are resolvent-form",
          "[idempotents]") {
    const Tolerance tol;

    // canonical pair of an orthogonal pair: both orthogonal projections
    const CanonicalPair ortho = canonical_pair(line(1.0, 0.0), line(0.0, 1.0), tol);
    const SumProjectionCheck yes = check_sum_is_projection(ortho.pi1, ortho.pi2, tol);
    REQUIRE(yes.sum_is_projection);
    REQUIRE(yes.pi1_is_resolvent_form);
    REQUIRE(yes.pi2_is_resolvent_form);

    // oblique idempotent against zero: annihilating, sum not a projection
    ComplexMatrix oblique(2, 2);
    oblique << 1.0, 1.0, 0.0, 0.0;
    const SumProjectionCheck no =
        check_sum_is_projection(Idempotent(oblique, tol), Idempotent(ComplexMatrix::Zero(2, 2), tol),
                                tol);
    REQUIRE_FALSE(no.sum_is_projection);
    REQUIRE_FALSE(no.pi1_is_resolvent_form);

    // annihilation is a hard precondition
    REQUIRE_THROWS_AS(
        check_sum_is_projection(Idempotent(oblique, tol),
                                Idempotent(ComplexMatrix(ComplexMatrix::Identity(2, 2)), tol), tol),
        AnnihilationFailureError);
}

TEST_CASE("an idempotent is pinned down by range and nullspace containment", "[idempotents]") {
    const Tolerance tol;
    ComplexMatrix m(2, 2);
    m << 1.0, 1.0, 0.0, 0.0;
    const Idempotent a(m, tol);
    const Idempotent b(m, tol);
    const UniquenessCheck same = uniqueness_check(a, b, tol);
    REQUIRE(same.range_contained);
    REQUIRE(same.null_contained);
    REQUIRE(same.equal);

    const Idempotent p(ComplexMatrix(line(1.0, 0.0).projection()), tol);
    const UniquenessCheck diff = uniqueness_check(a, p, tol); // same range, different nullspace
    REQUIRE(diff.range_contained);
    REQUIRE_FALSE(diff.null_contained);
    REQUIRE_FALSE(diff.equal);
}
