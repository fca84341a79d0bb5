#ifndef SEPMOD_PAIRS_HPP
#define SEPMOD_PAIRS_HPP

#include <complex>
#include <optional>
#include <vector>

#include <sepmod/subspace.hpp>

namespace sepmod {

/// Everything the library knows about the mutual position of one pair of
/// subspaces.  alpha1/alpha2 are only filled once the oblique-idempotent
/// machinery has run (see separation_constants / full_pair_report).
struct PairReport {
    double c0 = 0.0;                  ///< largest principal-angle cosine
    double c = 0.0;                   ///< cosine after removing the intersection
    Eigen::Index dim_intersection = 0;
    bool separated = false;
    std::optional<double> alpha1;     ///< ||x+y|| >= alpha1 ||x||
    std::optional<double> alpha2;     ///< ||x+y|| >= alpha2 ||y||
};

/// Largest principal-angle cosine, sigma_max(F_a^* F_b), clamped to [0,1].
/// Zero-dimensional inputs give 0 (the pair is trivially separated).
inline double dixmier_cosine(const Subspace& a, const Subspace& b) {
    const RealVector cos = principal_cosines(a, b);
    return cos.size() == 0 ? 0.0 : std::max(0.0, cos(0));
}

/// Cosine of the gap that remains after factoring out the common part:
/// ||P_a P_b - P_{a∩b}||, clamped to [0,1].
inline double friedrichs_cosine(const Subspace& a, const Subspace& b, const Tolerance& tol) {
    tol.validate();
    require_same_ambient(a, b, "friedrichs_cosine");
    const Subspace common = intersect(a, b, tol);
    const double v = operator_norm(a.projection() * b.projection() - common.projection());
    return std::min(std::max(v, 0.0), 1.0);
}

/// Separation verdict.  Two independent criteria are computed -- the cosine
/// bound c0 < 1 - rank_rel and dim(a ∩ b) = 0 -- and must agree; with the
/// shared rank cutoff they coincide except on numerically pathological input,
/// which is reported as an inconsistency instead of a guess.
inline PairReport is_separated(const Subspace& a, const Subspace& b, const Tolerance& tol) {
    tol.validate();
    require_same_ambient(a, b, "is_separated");
    PairReport report;
    report.c0 = dixmier_cosine(a, b);
    report.c = friedrichs_cosine(a, b, tol);
    report.dim_intersection = intersect(a, b, tol).dim();
    const bool by_cosine = report.c0 < 1.0 - tol.rank_rel;
    const bool by_intersection = report.dim_intersection == 0;
    if (by_cosine != by_intersection)
        throw InternalInconsistencyError(
            "separation criteria disagree: c0 = " + std::to_string(report.c0) +
            ", dim intersection = " + std::to_string(report.dim_intersection));
    report.separated = by_cosine;
    return report;
}

/// Outcome of the closed-range / common-range checks for a projection pair.
struct SumEquivalences {
    Subspace common_range;            ///< R(P) + R(Q)
    bool sum_matches = false;         ///< R(P+Q) = R(P) + R(Q)
    bool complement_matches = false;  ///< R(2 - P - Q) = R(1-P) + R(1-Q)
    struct Sample {
        Complex lambda1;
        Complex lambda2;
        Eigen::Index rank = 0;
        bool matches = false;         ///< R(l1 P + l2 Q) = R(P) + R(Q)
    };
    std::vector<Sample> samples;
    bool all_hold = false;
};

/// Default sample of coefficient pairs: nonzero, with nonzero sum, including
/// complex and sign-mixed choices.
inline std::vector<std::pair<Complex, Complex>> default_lambda_samples() {
    return {{Complex(1, 0), Complex(1, 0)},
            {Complex(2, 0), Complex(-1, 0)},
            {Complex(0.5, 0), Complex(0.25, 0)},
            {Complex(0, 1), Complex(1, 0)},
            {Complex(1, 1), Complex(2, -1)}};
}

/// For orthogonal projections P, Q, all ranges R(l1 P + l2 Q) with
/// l1, l2 != 0 and l1 + l2 != 0 coincide with R(P) + R(Q), and likewise on
/// the complementary side.  This checks those equalities numerically.
inline SumEquivalences check_sum_equivalences(
    const ComplexMatrix& p, const ComplexMatrix& q, const Tolerance& tol,
    const std::vector<std::pair<Complex, Complex>>& lambdas = default_lambda_samples()) {
    tol.validate();
    require_same_shape(p, q, "check_sum_equivalences");
    require_square(p, "check_sum_equivalences P");
    if (!is_projection_matrix(p, tol.eq_abs))
        throw NotAProjectionError("check_sum_equivalences: P is not an orthogonal projection");
    if (!is_projection_matrix(q, tol.eq_abs))
        throw NotAProjectionError("check_sum_equivalences: Q is not an orthogonal projection");

    const Eigen::Index d = p.rows();
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    const Subspace rp = orthonormalize(p, tol);
    const Subspace rq = orthonormalize(q, tol);

    SumEquivalences out;
    out.common_range = sum(rp, rq, tol);
    out.sum_matches = subspace_equal(orthonormalize(p + q, tol), out.common_range, tol.eq_abs);

    const Subspace complement_sum = sum(orthonormalize(eye - p, tol), orthonormalize(eye - q, tol), tol);
    out.complement_matches =
        subspace_equal(orthonormalize(2.0 * eye - p - q, tol), complement_sum, tol.eq_abs);

    out.all_hold = out.sum_matches && out.complement_matches;
    for (const auto& [l1, l2] : lambdas) {
        if (l1 == Complex(0, 0) || l2 == Complex(0, 0) || l1 + l2 == Complex(0, 0))
            throw PreconditionError("check_sum_equivalences: lambda sample must have l1, l2, l1+l2 nonzero");
        SumEquivalences::Sample s;
        s.lambda1 = l1;
        s.lambda2 = l2;
        const Subspace range = orthonormalize(l1 * p + l2 * q, tol);
        s.rank = range.dim();
        s.matches = subspace_equal(range, out.common_range, tol.eq_abs);
        out.all_hold = out.all_hold && s.matches;
        out.samples.push_back(s);
    }
    return out;
}

} // namespace sepmod

#endif // SEPMOD_PAIRS_HPP
