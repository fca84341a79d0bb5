#ifndef SEPMOD_LOCALIZATION_HPP
#define SEPMOD_LOCALIZATION_HPP

#include <optional>
#include <utility>
#include <vector>

#include <sepmod/detail/nelder_mead.hpp>
#include <sepmod/submodule.hpp>

namespace sepmod {

/// The Hilbert space a state f squeezes out of the module A^m: the flat
/// coordinates modulo the null space N_f = {x : f<x,x> = 0}, carrying the
/// inner product f<x,y>.  quotient_map (dim x D) realizes the quotient
/// concretely as sqrt(Gram) restricted to its range, so plain C^dim inner
/// products compute f<x,y> exactly:  (Qx)^* (Qy) = x^* G y = f<x,y>.
struct LocalizedSpace {
    Eigen::Index dim = 0;
    Eigen::Index null_dim = 0;
    ComplexMatrix gram;         ///< D x D Gram matrix G_{uv} = f(<b_u, b_v>)
    ComplexMatrix quotient_map; ///< dim x D, rows = sqrt(lambda_i) v_i^*
};

/// Localizes the module A^m at the state f.
///
/// The Gram matrix over the flat basis is assembled in closed form from the
/// reproducing identity <E_pq, E_rs> = delta_pr E_qs: it is block diagonal
/// with one copy of conj(rho_i) for every (coordinate, block i, row p).
inline LocalizedSpace localize(const FiniteCStarAlgebra& algebra, Eigen::Index m, const State& f,
                               const Tolerance& tol) {
    tol.validate();
    if (m < 1) throw PreconditionError("localize: m must be >= 1");
    if (f.algebra() != algebra) throw BlockMismatchError("localize: state over a different algebra");
    const Eigen::Index total = algebra.total_dim();
    const Eigen::Index d = m * total;

    LocalizedSpace out;
    out.gram = ComplexMatrix::Zero(d, d);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i) {
            const Eigen::Index n = algebra.block_dim(i);
            const ComplexMatrix block = f.density(i).conjugate();
            for (Eigen::Index p = 0; p < n; ++p) {
                const Eigen::Index off = c * total + algebra.block_offset(i) + p * n;
                out.gram.block(off, off, n, n) = block;
            }
        }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.gram);
    const RealVector& evals = es.eigenvalues(); // ascending
    const double top = std::max(evals(d - 1), 0.0);
    const double cutoff = tol.rank_rel * top;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        if (evals(i) > cutoff) ++rank;
    out.dim = rank;
    out.null_dim = d - rank;
    out.quotient_map = ComplexMatrix::Zero(rank, d);
    // descending order so the first row belongs to the largest eigenvalue
    for (Eigen::Index r = 0; r < rank; ++r) {
        const Eigen::Index src = d - 1 - r;
        out.quotient_map.row(r) = std::sqrt(evals(src)) * es.eigenvectors().col(src).adjoint();
    }
    return out;
}

/// Image of a flat subspace in the localized Hilbert space.
///
/// The quotient map is a contraction and the flat frame is orthonormal, so
/// directions the state annihilates surface here as machine-scale noise
/// rather than exact zeros.  The relative rank cutoff alone would promote
/// that noise to full rank whenever the exact image vanishes, so singular
/// values are additionally held to an absolute floor that sits well above
/// arithmetic noise (~1e-14 at these sizes) and well below any genuine
/// state mass (at least sqrt of the smallest retained Gram eigenvalue).
inline Subspace localize_subspace(const LocalizedSpace& loc, const Subspace& flat,
                                  const Tolerance& tol) {
    if (flat.ambient_dim() != loc.gram.rows())
        throw ShapeMismatchError("localize_subspace: flat ambient does not match the module");
    if (loc.dim == 0 || flat.dim() == 0) return Subspace::zero(loc.dim);
    const ComplexMatrix image = loc.quotient_map * flat.frame();
    constexpr double kAnnihilatedFloor = 1e-12;
    Eigen::JacobiSVD<ComplexMatrix> svd(image, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cutoff = std::max(tol.rank_rel * sv(0), kAnnihilatedFloor);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    if (rank == 0) return Subspace::zero(loc.dim);
    ComplexMatrix frame = svd.matrixU().leftCols(rank);
    detail::canonicalize_phases(frame);
    return Subspace::from_orthonormal(std::move(frame));
}

/// Image of a submodule in the localized Hilbert space.
inline Subspace localize_submodule(const LocalizedSpace& loc, const Submodule& h,
                                   const Tolerance& tol) {
    return localize_subspace(loc, h.flat(), tol);
}

/// Distance of the localized vector from a localized submodule.
inline double localized_distance(const LocalizedSpace& loc, const ModuleVector& x,
                                 const Subspace& target_localized) {
    const ComplexVector image = loc.quotient_map * x.flat();
    return target_localized.distance(image);
}

/// Per-state comparison of two localized pictures of "the complement":
/// first localize then complement, versus complement then localize.
struct ComplementLocalizationReport {
    struct Row {
        Eigen::Index localized_dim = 0;
        double residual = 0.0; ///< ||P[(H_f)^perp] - P[(H^perp)_f]||
        bool equal = false;
    };
    std::vector<Row> rows;
    bool all_equal = true;
};

inline ComplementLocalizationReport check_complement_localization(const Submodule& h,
                                                                  const std::vector<State>& states,
                                                                  const Tolerance& tol) {
    tol.validate();
    const Submodule hp = module_orth_complement(h, tol);
    ComplementLocalizationReport report;
    for (const State& f : states) {
        const LocalizedSpace loc = localize(h.algebra(), h.m(), f, tol);
        const Subspace lhs = orth_complement(localize_submodule(loc, h, tol));
        const Subspace rhs = localize_submodule(loc, hp, tol);
        ComplementLocalizationReport::Row row;
        row.localized_dim = loc.dim;
        row.residual = operator_norm(lhs.projection() - rhs.projection());
        row.equal = row.residual <= tol.eq_abs;
        report.all_equal = report.all_equal && row.equal;
        report.rows.push_back(row);
    }
    return report;
}

/// Per-state comparison of (H ∩ K)_f with H_f ∩ K_f.
struct IntersectionLocalizationReport {
    struct Row {
        double residual = 0.0;
        bool equal = false;
    };
    std::vector<Row> rows;
    bool all_equal = true;
};

inline IntersectionLocalizationReport check_intersection_localization(
    const Submodule& h, const Submodule& k, const std::vector<State>& states,
    const Tolerance& tol) {
    tol.validate();
    require_same_module(h, k, "check_intersection_localization");
    const Submodule common = module_intersect(h, k, tol);
    IntersectionLocalizationReport report;
    for (const State& f : states) {
        const LocalizedSpace loc = localize(h.algebra(), h.m(), f, tol);
        const Subspace lhs = localize_submodule(loc, common, tol);
        const Subspace rhs = intersect(localize_submodule(loc, h, tol),
                                       localize_submodule(loc, k, tol), tol);
        IntersectionLocalizationReport::Row row;
        row.residual = operator_norm(lhs.projection() - rhs.projection());
        row.equal = row.residual <= tol.eq_abs;
        report.all_equal = report.all_equal && row.equal;
        report.rows.push_back(row);
    }
    return report;
}

/// Per-state test of the concordance characterization
///   (H ∩ K)_f = ((H^perp)_f)^perp ∩ ((K^perp)_f)^perp .
struct ConcordanceViaStatesReport {
    struct Row {
        double residual = 0.0;
        bool equal = false;
    };
    std::vector<Row> rows;
    bool all_equal = true;
};

inline ConcordanceViaStatesReport check_concordance_via_states(const Submodule& h,
                                                               const Submodule& k,
                                                               const std::vector<State>& states,
                                                               const Tolerance& tol) {
    tol.validate();
    require_same_module(h, k, "check_concordance_via_states");
    const Submodule common = module_intersect(h, k, tol);
    const Submodule hp = module_orth_complement(h, tol);
    const Submodule kp = module_orth_complement(k, tol);
    ConcordanceViaStatesReport report;
    for (const State& f : states) {
        const LocalizedSpace loc = localize(h.algebra(), h.m(), f, tol);
        const Subspace lhs = localize_submodule(loc, common, tol);
        const Subspace rhs = intersect(orth_complement(localize_submodule(loc, hp, tol)),
                                       orth_complement(localize_submodule(loc, kp, tol)), tol);
        ConcordanceViaStatesReport::Row row;
        row.residual = operator_norm(lhs.projection() - rhs.projection());
        row.equal = row.residual <= tol.eq_abs;
        report.all_equal = report.all_equal && row.equal;
        report.rows.push_back(row);
    }
    return report;
}

/// Budget for the separating-state scan.
struct StateSearchBudget {
    Eigen::Index grid_per_block = 64;
    int refine_iters = 200;
    unsigned seed = 0;
    bool include_trace_state = true;
};

/// Searches for a state f whose localization keeps x0 at distance > eq_abs
/// from L_f, certifying x0 ∉ L.  Scans a deterministic grid of pure states
/// (plus the faithful trace state unless disabled), refines the best pure
/// candidate, and returns the best separator found; empty only when the
/// budget is exhausted without finding one (inconclusive, never a proof of
/// nonexistence).
inline std::optional<State> find_separating_state(const Submodule& l, const ModuleVector& x0,
                                                  const StateSearchBudget& budget,
                                                  const Tolerance& tol) {
    tol.validate();
    if (x0.algebra() != l.algebra() || x0.m() != l.m())
        throw BlockMismatchError("find_separating_state: vector is not in the module");
    const ComplexVector x0_flat = x0.flat();
    if (l.flat_dim() > 0) {
        const ComplexVector residual =
            x0_flat - l.flat().frame() * (l.flat().frame().adjoint() * x0_flat);
        if (residual.norm() <= tol.eq_abs)
            throw VectorInSubmoduleError("find_separating_state: x0 already lies in L");
    } else if (x0_flat.norm() <= tol.eq_abs) {
        throw VectorInSubmoduleError("find_separating_state: x0 already lies in L");
    }

    const FiniteCStarAlgebra& algebra = l.algebra();
    auto distance_at = [&](const State& f) {
        const LocalizedSpace loc = localize(algebra, l.m(), f, tol);
        return localized_distance(loc, x0, localize_submodule(loc, l, tol));
    };

    std::optional<State> best;
    double best_dist = tol.eq_abs;
    Eigen::Index best_block = -1;
    ComplexVector best_xi;
    if (budget.include_trace_state) {
        const State trace = State::trace_state(algebra, tol);
        const double d = distance_at(trace);
        if (d > best_dist) {
            best_dist = d;
            best = trace;
        }
    }
    double best_pure = -1.0;
    detail::NormalStream stream(budget.seed);
    for (Eigen::Index g = 0; g < budget.grid_per_block * algebra.num_blocks(); ++g) {
        const Eigen::Index block = g % algebra.num_blocks();
        const ComplexVector xi = stream.unit_vector(algebra.block_dim(block));
        const State f = State::pure(algebra, block, xi, tol);
        const double d = distance_at(f);
        if (d > best_pure) {
            best_pure = d;
            best_block = block;
            best_xi = xi;
        }
        if (d > best_dist) {
            best_dist = d;
            best = f;
        }
    }
    if (best_block >= 0 && budget.refine_iters > 0) {
        // refine the best pure candidate over the real parameterization of xi
        const Eigen::Index n = algebra.block_dim(best_block);
        auto objective = [&](const Eigen::VectorXd& theta) {
            ComplexVector xi(n);
            for (Eigen::Index i = 0; i < n; ++i) xi(i) = Complex(theta(2 * i), theta(2 * i + 1));
            if (xi.norm() < 1e-8) return -1.0;
            return distance_at(State::pure(algebra, best_block, xi, tol));
        };
        Eigen::VectorXd start(2 * n);
        for (Eigen::Index i = 0; i < n; ++i) {
            start(2 * i) = best_xi(i).real();
            start(2 * i + 1) = best_xi(i).imag();
        }
        const auto refined = detail::nelder_mead_maximize(objective, start, 0.15,
                                                          budget.refine_iters, 1e-6, 50);
        if (refined.value > best_dist) {
            ComplexVector xi(n);
            for (Eigen::Index i = 0; i < n; ++i)
                xi(i) = Complex(refined.argmax(2 * i), refined.argmax(2 * i + 1));
            best_dist = refined.value;
            best = State::pure(algebra, best_block, xi, tol);
        }
    }
    return best;
}

} // namespace sepmod

#endif // SEPMOD_LOCALIZATION_HPP
