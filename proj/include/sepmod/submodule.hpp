#ifndef SEPMOD_SUBMODULE_HPP
#define SEPMOD_SUBMODULE_HPP

#include <utility>
#include <vector>

#include <sepmod/algebra.hpp>
#include <sepmod/subspace.hpp>

namespace sepmod {

/// A closed submodule of A^m, represented by the subspace its elements span
/// in the flat coordinates C^{m * total_dim}.  The flat subspace is always
/// invariant under the right algebra action; the trace pairing makes the flat
/// orthogonal complement coincide with the module-theoretic one, so all
/// lattice operations (intersection, sum, complement) reduce to subspace
/// arithmetic plus an invariance audit.
class Submodule {
public:
    Submodule(FiniteCStarAlgebra algebra, Eigen::Index m, Subspace flat, const Tolerance& tol)
        : algebra_(std::move(algebra)), m_(m), flat_(std::move(flat)) {
        tol.validate();
        if (m_ < 1) throw PreconditionError("submodule needs m >= 1");
        if (flat_.ambient_dim() != m_ * algebra_.total_dim())
            throw ShapeMismatchError("submodule flat subspace has wrong ambient dimension");
        require_invariant(tol);
    }

    static Submodule zero(const FiniteCStarAlgebra& algebra, Eigen::Index m,
                          const Tolerance& tol = {}) {
        return Submodule(algebra, m, Subspace::zero(m * algebra.total_dim()), tol);
    }

    static Submodule full(const FiniteCStarAlgebra& algebra, Eigen::Index m,
                          const Tolerance& tol = {}) {
        return Submodule(algebra, m, Subspace::full(m * algebra.total_dim()), tol);
    }

    [[nodiscard]] const FiniteCStarAlgebra& algebra() const { return algebra_; }
    [[nodiscard]] Eigen::Index m() const { return m_; }
    [[nodiscard]] const Subspace& flat() const { return flat_; }
    [[nodiscard]] Eigen::Index flat_dim() const { return flat_.dim(); }
    [[nodiscard]] Eigen::Index ambient_dim() const { return flat_.ambient_dim(); }

    /// Frame columns interpreted back as module vectors.
    [[nodiscard]] std::vector<ModuleVector> frame_vectors() const {
        std::vector<ModuleVector> out;
        out.reserve(static_cast<size_t>(flat_.dim()));
        for (Eigen::Index c = 0; c < flat_.dim(); ++c)
            out.push_back(ModuleVector::from_flat(algebra_, m_, flat_.frame().col(c)));
        return out;
    }

private:
    void require_invariant(const Tolerance& tol) const {
        // x in the span and b a basis element of A must keep x*b in the span.
        for (Eigen::Index c = 0; c < flat_.dim(); ++c) {
            const ModuleVector x = ModuleVector::from_flat(algebra_, m_, flat_.frame().col(c));
            for (Eigen::Index u = 0; u < algebra_.total_dim(); ++u) {
                const AlgebraElement b = AlgebraElement::basis_element(algebra_, u);
                const ComplexVector image = x.right_mul(b).flat();
                if (image.norm() < tol.eq_abs) continue;
                const ComplexVector residual =
                    image - flat_.frame() * (flat_.frame().adjoint() * image);
                if (residual.norm() > tol.eq_abs * std::max(1.0, image.norm()))
                    throw NotInvariantError(
                        "flat subspace is not invariant under the right algebra action");
            }
        }
    }

    FiniteCStarAlgebra algebra_;
    Eigen::Index m_;
    Subspace flat_;
};

/// Smallest closed submodule containing the generators: the flat span of
/// {g * b : g generator, b basis element or identity}, iterated to a fixpoint
/// (in finite dimensions one enrichment pass already lands on it).
inline Submodule submodule_closure(const FiniteCStarAlgebra& algebra, Eigen::Index m,
                                   const std::vector<ModuleVector>& generators,
                                   const Tolerance& tol) {
    tol.validate();
    if (m < 1) throw PreconditionError("submodule_closure: m must be >= 1");
    for (const ModuleVector& g : generators) {
        if (g.algebra() != algebra || g.m() != m)
            throw BlockMismatchError("submodule_closure: generator over a different module");
    }
    const Eigen::Index ambient = m * algebra.total_dim();
    if (generators.empty()) return Submodule::zero(algebra, m, tol);

    std::vector<ComplexVector> spanning;
    for (const ModuleVector& g : generators) spanning.push_back(g.flat());

    Eigen::Index previous_dim = -1;
    Subspace span = Subspace::zero(ambient);
    while (true) {
        ComplexMatrix gens(ambient, static_cast<Eigen::Index>(spanning.size()));
        for (size_t i = 0; i < spanning.size(); ++i) gens.col(static_cast<Eigen::Index>(i)) = spanning[i];
        span = orthonormalize(gens, tol);
        if (span.dim() == previous_dim) break;
        previous_dim = span.dim();
        spanning.clear();
        for (Eigen::Index c = 0; c < span.dim(); ++c) {
            const ModuleVector x = ModuleVector::from_flat(algebra, m, span.frame().col(c));
            spanning.push_back(x.flat());
            for (Eigen::Index u = 0; u < algebra.total_dim(); ++u)
                spanning.push_back(x.right_mul(AlgebraElement::basis_element(algebra, u)).flat());
        }
    }
    return Submodule(algebra, m, span, tol);
}

inline void require_same_module(const Submodule& a, const Submodule& b, const std::string& what) {
    if (a.algebra() != b.algebra() || a.m() != b.m())
        throw BlockMismatchError(what + ": submodules live in different modules");
}

/// Module orthogonal complement {x : <x, h> = 0 for all h in H}.  Thanks to
/// the trace pairing this is the flat orthogonal complement, which is again
/// invariant (audited by the constructor).
inline Submodule module_orth_complement(const Submodule& h, const Tolerance& tol) {
    return Submodule(h.algebra(), h.m(), orth_complement(h.flat()), tol);
}

inline Submodule module_intersect(const Submodule& a, const Submodule& b, const Tolerance& tol) {
    require_same_module(a, b, "module_intersect");
    return Submodule(a.algebra(), a.m(), intersect(a.flat(), b.flat(), tol), tol);
}

inline Submodule module_sum(const Submodule& a, const Submodule& b, const Tolerance& tol) {
    require_same_module(a, b, "module_sum");
    return Submodule(a.algebra(), a.m(), sum(a.flat(), b.flat(), tol), tol);
}

inline bool submodule_equal(const Submodule& a, const Submodule& b, double eq_abs) {
    require_same_module(a, b, "submodule_equal");
    return subspace_equal(a.flat(), b.flat(), eq_abs);
}

/// H ⊕ H^perp = E, verified numerically (true for every closed submodule of
/// A^m in finite dimensions; computed honestly rather than assumed).
inline bool is_orthogonally_complemented(const Submodule& h, const Tolerance& tol) {
    const Submodule hp = module_orth_complement(h, tol);
    if (h.flat_dim() + hp.flat_dim() != h.ambient_dim()) return false;
    if (h.flat_dim() == 0 || hp.flat_dim() == 0) return true;
    return operator_norm(h.flat().projection() * hp.flat().projection()) <= tol.eq_abs;
}

/// The pair (H, K) is concordant iff E splits orthogonally as
/// (H ∩ K) ⊕ (H^perp + K^perp).  In finite dimensions this always holds;
/// the check computes both pieces and verifies the split.
inline bool is_concordant(const Submodule& h, const Submodule& k, const Tolerance& tol) {
    require_same_module(h, k, "is_concordant");
    const Submodule common = module_intersect(h, k, tol);
    const Submodule residual = module_sum(module_orth_complement(h, tol),
                                          module_orth_complement(k, tol), tol);
    if (common.flat_dim() + residual.flat_dim() != h.ambient_dim()) return false;
    if (common.flat_dim() == 0 || residual.flat_dim() == 0) return true;
    return operator_norm(common.flat().projection() * residual.flat().projection()) <= tol.eq_abs;
}

} // namespace sepmod

#endif // SEPMOD_SUBMODULE_HPP
