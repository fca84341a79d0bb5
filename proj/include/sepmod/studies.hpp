#ifndef SEPMOD_STUDIES_HPP
#define SEPMOD_STUDIES_HPP

#include <map>
#include <string>
#include <vector>

#include <sepmod/idempotents.hpp>
#include <sepmod/local_angle.hpp>

namespace sepmod {

/// One grid size of a conditioning study.
struct StudyRow {
    Eigen::Index n = 0;
    double c0 = 0.0;        ///< headline cosine of the studied pair
    double sigma_min = 0.0; ///< smallest surviving singular value (decay witness)
    std::map<std::string, bool> verdicts;
    std::map<std::string, double> metrics;
};

/// A family of checks across grid sizes, with explicit notes wherever the
/// finite model deviates from the continuum story it shadows.
struct SweepReport {
    std::string study;
    std::vector<StudyRow> rows;
    std::vector<std::string> deviations;

    [[nodiscard]] bool all_verdicts_hold() const {
        for (const StudyRow& row : rows)
            for (const auto& [key, ok] : row.verdicts)
                if (!ok) return false;
        return true;
    }
};

namespace detail {

inline void require_sweep_sizes(const std::vector<Eigen::Index>& ns, Eigen::Index minimum,
                                const std::string& study) {
    if (ns.empty()) throw PreconditionError(study + ": sweep needs at least one size");
    Eigen::Index prev = 0;
    for (const Eigen::Index n : ns) {
        if (n < minimum)
            throw PreconditionError(study + ": size " + std::to_string(n) + " below minimum " +
                                    std::to_string(minimum));
        if (n <= prev) throw PreconditionError(study + ": sizes must be strictly increasing");
        prev = n;
    }
}

/// Frame whose columns are the listed standard basis vectors of C^d.
inline Subspace coordinate_span(Eigen::Index d, const std::vector<Eigen::Index>& coords) {
    ComplexMatrix frame = ComplexMatrix::Zero(d, static_cast<Eigen::Index>(coords.size()));
    for (Eigen::Index c = 0; c < frame.cols(); ++c) frame(coords[static_cast<size_t>(c)], c) = 1.0;
    return Subspace::from_orthonormal(std::move(frame));
}

} // namespace detail

/// Shift pair: two exactly idempotent operators whose ranges stay separated
/// at a grid-independent angle while the sum Pi1 + Pi2 becomes arbitrarily
/// ill-conditioned, the finite shadow of a sum with non-closed range.
///
/// The n-th model acts on C^n ⊕ C^{n+1}:
///   Pi1 = [I  -T; 0 0],  Pi2 = [I 0; U 0]
/// with U the injective shift e_i -> e_{i+1} (an isometry into C^{n+1}) and
/// T = [diag(2/i) | 0].  The shift must stay injective for the ranges to be
/// disjoint; the decaying diagonal of T drives the conditioning decay.
inline SweepReport shift_example(const std::vector<Eigen::Index>& ns, const Tolerance& tol) {
    tol.validate();
    detail::require_sweep_sizes(ns, 2, "shift_example");
    SweepReport report;
    report.study = "shift";
    for (const Eigen::Index n : ns) {
        const Eigen::Index d = 2 * n + 1;
        ComplexMatrix u = ComplexMatrix::Zero(n + 1, n);
        for (Eigen::Index i = 0; i < n; ++i) u(i + 1, i) = 1.0;
        ComplexMatrix t = ComplexMatrix::Zero(n, n + 1);
        for (Eigen::Index i = 0; i < n; ++i) t(i, i) = 2.0 / static_cast<double>(i + 1);

        ComplexMatrix pi1 = ComplexMatrix::Zero(d, d);
        pi1.topLeftCorner(n, n).setIdentity();
        pi1.topRightCorner(n, n + 1) = -t;
        ComplexMatrix pi2 = ComplexMatrix::Zero(d, d);
        pi2.topLeftCorner(n, n).setIdentity();
        pi2.bottomLeftCorner(n + 1, n) = u;

        StudyRow row;
        row.n = n;
        row.verdicts["pi1_idempotent"] = is_idempotent_matrix(pi1, tol.eq_abs);
        row.verdicts["pi2_idempotent"] = is_idempotent_matrix(pi2, tol.eq_abs);

        const Subspace r1 = orthonormalize(pi1, tol);
        const Subspace r2 = orthonormalize(pi2, tol);
        row.verdicts["ranges_disjoint"] = intersect(r1, r2, tol).dim() == 0;
        const PairReport pair = is_separated(r1, r2, tol);
        row.verdicts["separated"] = pair.separated;
        row.c0 = pair.c0;

        // first component entirely, plus the image of the shift
        std::vector<Eigen::Index> expected;
        for (Eigen::Index i = 0; i < n; ++i) expected.push_back(i);
        for (Eigen::Index i = 1; i <= n; ++i) expected.push_back(n + i);
        const Subspace expected_sum = detail::coordinate_span(d, expected);
        row.verdicts["sum_matches_first_component_plus_shift_image"] =
            subspace_equal(sum(r1, r2, tol), expected_sum, tol.eq_abs);

        const ComplexMatrix s = pi1 + pi2;
        const Eigen::Index rank = numerical_rank(s, tol);
        row.verdicts["sum_rank_is_ambient_minus_one"] = rank == d - 1;
        row.metrics["sum_rank"] = static_cast<double>(rank);
        const auto sv = min_positive_singular(s, tol);
        row.sigma_min = sv.value_or(0.0);
        report.rows.push_back(std::move(row));
    }
    report.deviations.push_back(
        "finite model uses the injective rectangular shift C^n -> C^{n+1}; a square "
        "truncation would put (e_n, 0) into both ranges and destroy separation");
    report.deviations.push_back(
        "non-closedness of the infinite-dimensional sum appears here as the smallest "
        "surviving singular value of Pi1 + Pi2 draining to zero (about 2/(n*sqrt(5)))");
    return report;
}

/// Function-algebra idempotents on a uniform grid of [0,1] (n nodes, both
/// endpoints included): T(f1,f2) = (f1, g f1) and S(f1,f2) = (f1, -g f1)
/// with g the coordinate function.  T + S has exactly the first component as
/// range at every n, while T - S loses conditioning as the grid refines.
inline SweepReport ct_idempotent_example(const std::vector<Eigen::Index>& ns, const Tolerance& tol) {
    tol.validate();
    detail::require_sweep_sizes(ns, 2, "ct_idempotent_example");
    SweepReport report;
    report.study = "ct";
    for (const Eigen::Index n : ns) {
        const Eigen::Index d = 2 * n;
        ComplexMatrix g = ComplexMatrix::Zero(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            g(j, j) = static_cast<double>(j) / static_cast<double>(n - 1);

        ComplexMatrix tm = ComplexMatrix::Zero(d, d);
        tm.topLeftCorner(n, n).setIdentity();
        tm.bottomLeftCorner(n, n) = g;
        ComplexMatrix sm = ComplexMatrix::Zero(d, d);
        sm.topLeftCorner(n, n).setIdentity();
        sm.bottomLeftCorner(n, n) = -g;

        StudyRow row;
        row.n = n;
        row.verdicts["t_idempotent"] = is_idempotent_matrix(tm, tol.eq_abs);
        row.verdicts["s_idempotent"] = is_idempotent_matrix(sm, tol.eq_abs);

        const Subspace rt = orthonormalize(tm, tol);
        const Subspace rs = orthonormalize(sm, tol);
        row.c0 = dixmier_cosine(rt, rs);

        // R(T+S) = first copy of the algebra, exactly, at every n
        std::vector<Eigen::Index> first;
        for (Eigen::Index j = 0; j < n; ++j) first.push_back(j);
        row.verdicts["sum_range_is_first_component"] =
            subspace_equal(orthonormalize(tm + sm, tol), detail::coordinate_span(d, first), tol.eq_abs);

        // the grid intersection is exactly the lambda = 0 coordinate ...
        const Subspace common = intersect(rt, rs, tol);
        const Subspace node0 = detail::coordinate_span(d, {0});
        row.verdicts["intersection_is_lambda0_coordinate"] = subspace_equal(common, node0, tol.eq_abs);
        // ... and the ranges are disjoint away from it
        const Subspace off_node = orth_complement(node0);
        const Subspace rt_off = intersect(rt, off_node, tol);
        const Subspace rs_off = intersect(rs, off_node, tol);
        row.verdicts["disjoint_away_from_lambda0"] = intersect(rt_off, rs_off, tol).dim() == 0;

        const auto sv = min_positive_singular(tm - sm, tol);
        row.sigma_min = sv.value_or(0.0);

        // least-squares preimage of (0, 2*ones) under T - S: the grid shadow
        // of the continuum witness f_n = min(n, 1/lambda)
        ComplexVector target = ComplexVector::Zero(d);
        for (Eigen::Index j = 0; j < n; ++j) target(n + j) = 2.0;
        const ComplexVector pre = moore_penrose(tm - sm, tol) * target;
        row.metrics["witness_preimage_norm"] = pre.norm();
        row.metrics["witness_residual"] = ((tm - sm) * pre - target).norm();
        report.rows.push_back(std::move(row));
    }
    report.deviations.push_back(
        "the grid keeps the lambda = 0 node, so R(T) and R(S) share exactly that "
        "coordinate (the continuum ranges are disjoint only over positive lambda); the "
        "checks isolate the node and verify disjointness on its complement");
    report.deviations.push_back(
        "the continuum witness has no preimage in the limit; on the grid the "
        "least-squares preimage norm grows linearly with the node count and the "
        "lambda = 0 component of the target stays unreachable (residual 2)");
    return report;
}

/// Grid versions of the function-algebra angle examples over
/// X = [-2,-1] ∪ [0,1] (pair a) and [0,1] (pair b), with n nodes per
/// component interval.
///
/// Pair a: H kills [0, 2/3], K kills [1/3, 1].  On the grid the local angle
/// is 0 and the flat cosine c0 is 1 (both carried by the common [-2,-1]
/// block), while the flat Friedrichs cosine is 0: coordinate submodules
/// commute, so no finite model reproduces the continuum's claimed c = 1.
/// Pair b: H = {vanishing at 0}, K = {vanishing at 1}; the grid complements
/// are one node each (nonzero, unlike the continuum), every localized
/// intersection matches, and the grid pair is concordant.
inline SweepReport cx_concordance_example(const std::vector<Eigen::Index>& ns,
                                          const AngleSearchParams& params, const Tolerance& tol) {
    tol.validate();
    detail::require_sweep_sizes(ns, 4, "cx_concordance_example");
    SweepReport report;
    report.study = "cx";
    for (const Eigen::Index n : ns) {
        StudyRow row;
        row.n = n;

        // ---- pair a: A = C(X-grid), E = A, submodules by vanishing sets ----
        const Eigen::Index dn = 2 * n;
        const FiniteCStarAlgebra algebra_a(std::vector<Eigen::Index>(static_cast<size_t>(dn), 1));
        // nodes 0..n-1: mu_j in [-2,-1]; nodes n..2n-1: lambda_j = j/(n-1) in [0,1]
        std::vector<Eigen::Index> h_coords;
        std::vector<Eigen::Index> k_coords;
        for (Eigen::Index j = 0; j < n; ++j) {
            h_coords.push_back(j);
            k_coords.push_back(j);
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            // keep lambda_j outside the vanishing interval (integer boundary tests)
            if (3 * j > 2 * (n - 1)) h_coords.push_back(n + j); // lambda_j > 2/3
            if (3 * j < n - 1) k_coords.push_back(n + j);       // lambda_j < 1/3
        }
        const Submodule h_a(algebra_a, 1, detail::coordinate_span(dn, h_coords), tol);
        const Submodule k_a(algebra_a, 1, detail::coordinate_span(dn, k_coords), tol);

        row.verdicts["a_concordant"] = is_concordant(h_a, k_a, tol);
        const AngleEstimate alpha = local_angle(h_a, k_a, AngleKind::friedrichs, params, tol);
        row.metrics["a_alpha"] = alpha.value;
        row.verdicts["a_alpha_zero"] = alpha.value <= 1e-6;
        row.c0 = module_dixmier_cosine(h_a, k_a);
        row.verdicts["a_c0_is_one"] = row.c0 >= 1.0 - tol.eq_abs;
        row.metrics["a_c_flat"] = module_friedrichs_cosine(h_a, k_a, tol);

        const AlphaComplementCheck comp = check_alpha_complement(h_a, k_a, params, tol);
        row.metrics["a_alpha_perp"] = comp.alpha_perp;
        row.verdicts["a_alpha_complement_agrees"] = comp.within_tol;

        const auto sv = min_positive_singular(
            h_a.flat().projection() + k_a.flat().projection(), tol);
        row.sigma_min = sv.value_or(0.0);

        // ---- pair b: A = C([0,1]-grid), vanishing at the endpoints ----
        const FiniteCStarAlgebra algebra_b(std::vector<Eigen::Index>(static_cast<size_t>(n), 1));
        std::vector<Eigen::Index> hb_coords;
        std::vector<Eigen::Index> kb_coords;
        for (Eigen::Index j = 1; j < n; ++j) hb_coords.push_back(j);
        for (Eigen::Index j = 0; j + 1 < n; ++j) kb_coords.push_back(j);
        const Submodule h_b(algebra_b, 1, detail::coordinate_span(n, hb_coords), tol);
        const Submodule k_b(algebra_b, 1, detail::coordinate_span(n, kb_coords), tol);

        row.verdicts["b_concordant_on_grid"] = is_concordant(h_b, k_b, tol);
        row.metrics["b_complement_dim_h"] =
            static_cast<double>(module_orth_complement(h_b, tol).flat_dim());
        const auto states = standard_state_family(algebra_b, tol);
        row.verdicts["b_localized_intersections_match"] =
            check_intersection_localization(h_b, k_b, states, tol).all_equal;

        report.rows.push_back(std::move(row));
    }
    report.deviations.push_back(
        "pair a: every finite localization of coordinate submodules commutes, so the "
        "grid Friedrichs cosine is 0; the continuum account pairs alpha = 0 with c = 1, "
        "a gap no finite-dimensional model can reproduce (the grid value 1 appears as "
        "c0, carried by the shared [-2,-1] block)");
    report.deviations.push_back(
        "pair b: on the grid the complements H-perp and K-perp are the single boundary "
        "coordinates, not zero as in the continuum, which is exactly why the grid pair "
        "is concordant and every localized intersection matches");
    return report;
}

} // namespace sepmod

#endif // SEPMOD_STUDIES_HPP
