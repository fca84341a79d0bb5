#ifndef SEPMOD_IDEMPOTENTS_HPP
#define SEPMOD_IDEMPOTENTS_HPP

#include <utility>
#include <vector>

#include <sepmod/pairs.hpp>

namespace sepmod {

/// A (generally oblique) idempotent together with its range and nullspace.
/// The three pieces are kept consistent: range dim + nullspace dim = ambient,
/// the matrix fixes its range and kills its nullspace.
class Idempotent {
public:
    Idempotent(ComplexMatrix mat, const Tolerance& tol) : mat_(std::move(mat)) {
        tol.validate();
        require_square(mat_, "idempotent");
        require_finite(mat_, "idempotent");
        if (!is_idempotent_matrix(mat_, tol.eq_abs))
            throw NotAnIdempotentError("matrix is not idempotent to eq_abs");
        range_ = orthonormalize(mat_, tol);
        // N(Pi) = R(Pi^*)^perp.
        nullspace_ = orth_complement(orthonormalize(mat_.adjoint(), tol));
        norm_ = operator_norm(mat_);
        if (range_.dim() + nullspace_.dim() != mat_.rows())
            throw InternalInconsistencyError("idempotent range/nullspace dimensions do not add up");
        if (range_.dim() > 0 &&
            operator_norm(mat_ * range_.frame() - range_.frame()) > 10 * tol.eq_abs)
            throw InternalInconsistencyError("idempotent does not fix its range");
        if (nullspace_.dim() > 0 &&
            operator_norm(mat_ * nullspace_.frame()) > 10 * tol.eq_abs)
            throw InternalInconsistencyError("idempotent does not kill its nullspace");
    }

    [[nodiscard]] const ComplexMatrix& matrix() const { return mat_; }
    [[nodiscard]] const Subspace& range() const { return range_; }
    [[nodiscard]] const Subspace& nullspace() const { return nullspace_; }
    [[nodiscard]] double norm() const { return norm_; }
    [[nodiscard]] Eigen::Index ambient_dim() const { return mat_.rows(); }

private:
    ComplexMatrix mat_;
    Subspace range_;
    Subspace nullspace_;
    double norm_ = 0.0;
};

/// The mutually annihilating idempotent pair attached to a separated pair of
/// subspaces, plus the orthogonal projection onto their sum.
struct CanonicalPair {
    Idempotent pi1;        ///< (x + y + z) -> x on H + K + (H+K)^perp
    Idempotent pi2;        ///< (x + y + z) -> y
    ComplexMatrix p_tilde; ///< orthogonal projection onto H + K
    double basis_condition = 0.0; ///< ||M|| * ||M^-1|| of the splitting basis
};

/// Builds the pair Pi1(x+y+z) = x, Pi2(x+y+z) = y for the splitting
/// C^d = H + K + (H+K)^perp.  Requires the pair to be separated.
inline CanonicalPair canonical_pair(const Subspace& h, const Subspace& k, const Tolerance& tol) {
    tol.validate();
    require_same_ambient(h, k, "canonical_pair");
    const PairReport report = is_separated(h, k, tol);
    if (!report.separated)
        throw NotSeparatedError("canonical_pair: subspaces are not separated (c0 = " +
                                std::to_string(report.c0) + ")");

    const Eigen::Index d = h.ambient_dim();
    const Subspace hk = sum(h, k, tol);
    const Subspace w = orth_complement(hk);
    if (h.dim() + k.dim() != hk.dim() || hk.dim() + w.dim() != d)
        throw InternalInconsistencyError("canonical_pair: splitting dimensions do not add up");

    ComplexMatrix m(d, d);
    m << h.frame(), k.frame(), w.frame();
    const Eigen::PartialPivLU<ComplexMatrix> lu(m);
    const ComplexMatrix m_inv = lu.inverse();

    ComplexMatrix sel1 = ComplexMatrix::Zero(d, d);
    sel1.topLeftCorner(h.dim(), h.dim()).setIdentity();
    ComplexMatrix sel2 = ComplexMatrix::Zero(d, d);
    sel2.block(h.dim(), h.dim(), k.dim(), k.dim()).setIdentity();

    CanonicalPair out{Idempotent(m * sel1 * m_inv, tol), Idempotent(m * sel2 * m_inv, tol),
                      hk.projection(), operator_norm(m) * operator_norm(m_inv)};

    const double slack = 10 * tol.eq_abs;
    if (operator_norm(out.pi1.matrix() * out.pi2.matrix()) > slack ||
        operator_norm(out.pi2.matrix() * out.pi1.matrix()) > slack)
        throw InternalInconsistencyError("canonical_pair: idempotents fail to annihilate");
    if (!subspace_equal(out.pi1.range(), h, slack) || !subspace_equal(out.pi2.range(), k, slack))
        throw InternalInconsistencyError("canonical_pair: ranges drifted from the inputs");
    return out;
}

/// Largest constants with ||x + y|| >= alpha1 ||x|| and >= alpha2 ||y||
/// over x in H, y in K; computed as the reciprocals of the oblique projection
/// norms of the canonical pair.
inline std::pair<double, double> separation_constants(const Subspace& h, const Subspace& k,
                                                      const Tolerance& tol) {
    if (h.dim() == 0 && k.dim() == 0) return {1.0, 1.0};
    const CanonicalPair pair = canonical_pair(h, k, tol);
    const double a1 = pair.pi1.norm() > 0.0 ? 1.0 / pair.pi1.norm() : 1.0;
    const double a2 = pair.pi2.norm() > 0.0 ? 1.0 / pair.pi2.norm() : 1.0;
    return {a1, a2};
}

/// PairReport with the separation constants filled in when the pair is
/// separated (left empty otherwise).
inline PairReport full_pair_report(const Subspace& h, const Subspace& k, const Tolerance& tol) {
    PairReport report = is_separated(h, k, tol);
    if (report.separated) {
        const auto [a1, a2] = separation_constants(h, k, tol);
        report.alpha1 = a1;
        report.alpha2 = a2;
    }
    return report;
}

/// Resolvent-style idempotent (1 - PQ)^{-1} P (1 - PQ) for orthogonal
/// projections P, Q with ||PQ|| < 1.  Its range is R(P); its nullspace is
/// R(Q) + (N(P) ∩ N(Q)); it fixes P and kills Q.
inline Idempotent koliha_idempotent(const ComplexMatrix& p, const ComplexMatrix& q,
                                    const Tolerance& tol) {
    tol.validate();
    require_same_shape(p, q, "koliha_idempotent");
    require_square(p, "koliha_idempotent P");
    if (!is_projection_matrix(p, tol.eq_abs))
        throw NotAProjectionError("koliha_idempotent: P is not an orthogonal projection");
    if (!is_projection_matrix(q, tol.eq_abs))
        throw NotAProjectionError("koliha_idempotent: Q is not an orthogonal projection");
    const double pq_norm = operator_norm(p * q);
    if (!(pq_norm < 1.0))
        throw NormNotLessThanOneError("koliha_idempotent: ||PQ|| = " + std::to_string(pq_norm));

    const Eigen::Index d = p.rows();
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
    const Eigen::PartialPivLU<ComplexMatrix> lu(eye - p * q);
    const ComplexMatrix pi = lu.solve(p * (eye - p * q));
    Idempotent result(pi, tol);

    // Conditioning of (1 - PQ)^{-1} grows like 1/(1 - ||PQ||); scale the
    // verification slack accordingly so near-degenerate inputs fail loudly
    // as inconsistencies rather than silently passing.
    const double slack = 10 * tol.eq_abs / std::max(1e-3, 1.0 - pq_norm);
    if (!subspace_equal(result.range(), orthonormalize(p, tol), slack))
        throw InternalInconsistencyError("koliha_idempotent: range is not R(P)");
    if (operator_norm(pi * p - p) > slack)
        throw InternalInconsistencyError("koliha_idempotent: Pi P != P");
    if (operator_norm(pi * q) > slack)
        throw InternalInconsistencyError("koliha_idempotent: Pi Q != 0");
    // N(Pi) = R(Q) + (N(P) ∩ N(Q)).
    const Subspace np = orth_complement(orthonormalize(p, tol));
    const Subspace nq = orth_complement(orthonormalize(q, tol));
    const Subspace expected_null = sum(orthonormalize(q, tol), intersect(np, nq, tol), tol);
    if (!subspace_equal(result.nullspace(), expected_null, slack))
        throw InternalInconsistencyError("koliha_idempotent: nullspace is not R(Q) + (N(P) ∩ N(Q))");
    // Commutation bridge (1-PQ)^{-1} P = P (1-QP)^{-1} and norm symmetry.
    const ComplexMatrix lhs = lu.solve(p);
    const ComplexMatrix rhs = p * Eigen::PartialPivLU<ComplexMatrix>(eye - q * p).inverse();
    if (operator_norm(lhs - rhs) > slack)
        throw InternalInconsistencyError("koliha_idempotent: resolvent commutation identity failed");
    if (std::abs(operator_norm(q * p) - pq_norm) > slack)
        throw InternalInconsistencyError("koliha_idempotent: ||QP|| != ||PQ||");
    return result;
}

/// Moore-Penrose inverse of Pi1 + lambda Pi2 for a mutually annihilating
/// idempotent pair, by the closed form
///   (Pi1 + Pi2)^+ (Pi1 + lambda^{-1} Pi2) (Pi1 + Pi2)^+ .
/// The result is verified against the four Penrose conditions.
inline ComplexMatrix mp_linear_combination(const Idempotent& pi1, const Idempotent& pi2,
                                           Complex lambda, const Tolerance& tol) {
    tol.validate();
    if (pi1.ambient_dim() != pi2.ambient_dim())
        throw ShapeMismatchError("mp_linear_combination: ambient dimensions differ");
    if (lambda == Complex(0, 0))
        throw LambdaZeroError("mp_linear_combination: lambda must be nonzero");
    const ComplexMatrix& a = pi1.matrix();
    const ComplexMatrix& b = pi2.matrix();
    if (operator_norm(a * b) > tol.eq_abs || operator_norm(b * a) > tol.eq_abs)
        throw AnnihilationFailureError("mp_linear_combination: Pi1 Pi2 and Pi2 Pi1 must vanish");

    const ComplexMatrix sum_pinv = moore_penrose(a + b, tol);
    const ComplexMatrix result = sum_pinv * (a + (1.0 / lambda) * b) * sum_pinv;

    const ComplexMatrix t = a + lambda * b;
    const double scale = std::max(1.0, operator_norm(t));
    const double slack = 100 * tol.eq_abs * scale;
    if (operator_norm(t * result * t - t) > slack ||
        operator_norm(result * t * result - result) > slack ||
        operator_norm((t * result).adjoint() - t * result) > slack ||
        operator_norm((result * t).adjoint() - result * t) > slack)
        throw InternalInconsistencyError("mp_linear_combination: Penrose conditions violated");
    return result;
}

/// One row of the lambda sweep: the numerical rank of Pi1 + lambda Pi2 and
/// the smallest surviving singular value.
struct RangeStabilityRow {
    Complex lambda;
    Eigen::Index rank = 0;
    std::optional<double> min_positive;
};

/// Sweeps lambda over the given values.  For an annihilating pair the rank at
/// every nonzero lambda equals rank(Pi1) + rank(Pi2); a violation is an
/// internal inconsistency.  lambda = 0 rows are reported but exempt.
inline std::vector<RangeStabilityRow> range_stability_sweep(const Idempotent& pi1,
                                                            const Idempotent& pi2,
                                                            const std::vector<Complex>& lambdas,
                                                            const Tolerance& tol) {
    tol.validate();
    if (pi1.ambient_dim() != pi2.ambient_dim())
        throw ShapeMismatchError("range_stability_sweep: ambient dimensions differ");
    if (operator_norm(pi1.matrix() * pi2.matrix()) > tol.eq_abs ||
        operator_norm(pi2.matrix() * pi1.matrix()) > tol.eq_abs)
        throw AnnihilationFailureError("range_stability_sweep: pair must annihilate");
    const Eigen::Index expected = pi1.range().dim() + pi2.range().dim();
    std::vector<RangeStabilityRow> rows;
    rows.reserve(lambdas.size());
    for (const Complex lambda : lambdas) {
        const ComplexMatrix t = pi1.matrix() + lambda * pi2.matrix();
        RangeStabilityRow row;
        row.lambda = lambda;
        row.rank = numerical_rank(t, tol);
        row.min_positive = min_positive_singular(t, tol);
        if (lambda != Complex(0, 0) && row.rank != expected)
            throw InternalInconsistencyError(
                "range_stability_sweep: rank drifted at a nonzero lambda");
        rows.push_back(row);
    }
    return rows;
}

/// Verdict of the "sum is the orthogonal projection" characterization.
struct SumProjectionCheck {
    bool sum_is_projection = false; ///< Pi1 + Pi2 = P(R(Pi1) + R(Pi2))
    bool pi1_is_resolvent_form = false;
    bool pi2_is_resolvent_form = false;
};

/// For a mutually annihilating idempotent pair, Pi1 + Pi2 equals the
/// orthogonal projection onto R(Pi1) + R(Pi2) iff both idempotents are the
/// resolvent-form ones for (P, Q) = (projection onto R(Pi1), onto R(Pi2)).
/// Both sides of the equivalence are computed and must agree.
inline SumProjectionCheck check_sum_is_projection(const Idempotent& pi1, const Idempotent& pi2,
                                                  const Tolerance& tol) {
    tol.validate();
    if (pi1.ambient_dim() != pi2.ambient_dim())
        throw ShapeMismatchError("check_sum_is_projection: ambient dimensions differ");
    if (operator_norm(pi1.matrix() * pi2.matrix()) > tol.eq_abs ||
        operator_norm(pi2.matrix() * pi1.matrix()) > tol.eq_abs)
        throw AnnihilationFailureError("check_sum_is_projection: pair must annihilate");

    const ComplexMatrix p = pi1.range().projection();
    const ComplexMatrix q = pi2.range().projection();
    const Subspace total = sum(pi1.range(), pi2.range(), tol);

    SumProjectionCheck out;
    out.sum_is_projection =
        approx_equal(pi1.matrix() + pi2.matrix(), total.projection(), 10 * tol.eq_abs);
    const Idempotent k1 = koliha_idempotent(p, q, tol);
    const Idempotent k2 = koliha_idempotent(q, p, tol);
    out.pi1_is_resolvent_form = approx_equal(pi1.matrix(), k1.matrix(), 10 * tol.eq_abs);
    out.pi2_is_resolvent_form = approx_equal(pi2.matrix(), k2.matrix(), 10 * tol.eq_abs);

    if (out.sum_is_projection != (out.pi1_is_resolvent_form && out.pi2_is_resolvent_form))
        throw InternalInconsistencyError(
            "check_sum_is_projection: the two sides of the characterization disagree");
    return out;
}

/// Containment verdict behind the rigidity of idempotents: if R(b) ⊆ R(a)
/// and N(b) ⊆ N(a) then a = b.  When both containments hold, equality is
/// asserted; a violation would contradict idempotency and is reported as an
/// inconsistency.
struct UniquenessCheck {
    bool range_contained = false; ///< R(b) ⊆ R(a)
    bool null_contained = false;  ///< N(b) ⊆ N(a)
    bool equal = false;
};

inline UniquenessCheck uniqueness_check(const Idempotent& a, const Idempotent& b,
                                        const Tolerance& tol) {
    tol.validate();
    if (a.ambient_dim() != b.ambient_dim())
        throw ShapeMismatchError("uniqueness_check: ambient dimensions differ");
    UniquenessCheck out;
    out.range_contained = contains(a.range(), b.range(), tol.eq_abs);
    out.null_contained = contains(a.nullspace(), b.nullspace(), tol.eq_abs);
    out.equal = approx_equal(a.matrix(), b.matrix(), 10 * tol.eq_abs);
    if (out.range_contained && out.null_contained && !out.equal)
        throw InternalInconsistencyError(
            "uniqueness_check: containments hold but the idempotents differ");
    return out;
}

} // namespace sepmod

#endif // SEPMOD_IDEMPOTENTS_HPP
