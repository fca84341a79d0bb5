#ifndef SEPMOD_SUBSPACE_HPP
#define SEPMOD_SUBSPACE_HPP

#include <utility>

#include <sepmod/matrix.hpp>

namespace sepmod {

namespace detail {

/// Fix the free phase of each frame column so that repeated computations of
/// the same subspace serialize identically: the entry of largest modulus
/// (lowest row index on ties) is rotated onto the positive real axis.
inline void canonicalize_phases(ComplexMatrix& frame) {
    for (Eigen::Index c = 0; c < frame.cols(); ++c) {
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < frame.rows(); ++r) {
            const double a = std::abs(frame(r, c));
            if (a > best + 1e-15) { // strict improvement; ties keep the lowest row
                best = a;
                pivot = r;
            }
        }
        if (best <= 0.0) continue;
        const Complex z = frame(pivot, c);
        if (std::abs(z) > 0.0) frame.col(c) *= std::conj(z) / std::abs(z);
    }
}

} // namespace detail

/// A subspace of C^d, held as an orthonormal frame (d x dim matrix).
/// All subspace comparisons go through projections, so they are independent
/// of the particular frame.
class Subspace {
public:
    Subspace() = default;

    /// Wraps a frame that is already orthonormal; validated to a fixed
    /// internal bound (1e-12) that is deliberately tighter than Tolerance.
    explicit Subspace(ComplexMatrix orthonormal_frame) : frame_(std::move(orthonormal_frame)) {
        require_finite(frame_, "subspace frame");
        if (frame_.cols() > frame_.rows())
            throw ShapeMismatchError("subspace frame has more columns than ambient dimension");
        if (frame_.cols() > 0) {
            const ComplexMatrix gram = frame_.adjoint() * frame_;
            const ComplexMatrix eye = ComplexMatrix::Identity(frame_.cols(), frame_.cols());
            if (operator_norm(gram - eye) > 1e-12)
                throw PreconditionError("subspace frame is not orthonormal to 1e-12");
        }
    }

    static Subspace zero(Eigen::Index ambient) {
        Subspace s;
        s.frame_ = ComplexMatrix::Zero(ambient, 0);
        return s;
    }

    static Subspace full(Eigen::Index ambient) {
        Subspace s;
        s.frame_ = ComplexMatrix::Identity(ambient, ambient);
        return s;
    }

    /// Trusted constructor for frames produced by the library's own
    /// factorizations (already orthonormal to machine precision).
    static Subspace from_orthonormal(ComplexMatrix frame) {
        Subspace s;
        s.frame_ = std::move(frame);
        return s;
    }

    [[nodiscard]] Eigen::Index ambient_dim() const { return frame_.rows(); }
    [[nodiscard]] Eigen::Index dim() const { return frame_.cols(); }
    [[nodiscard]] const ComplexMatrix& frame() const { return frame_; }

    /// Orthogonal projection onto this subspace.
    [[nodiscard]] ComplexMatrix projection() const { return frame_ * frame_.adjoint(); }

    /// Distance from v to this subspace: ||(I - P) v||.
    [[nodiscard]] double distance(const ComplexVector& v) const {
        if (v.size() != frame_.rows())
            throw ShapeMismatchError("distance: vector length does not match ambient dimension");
        return (v - frame_ * (frame_.adjoint() * v)).norm();
    }

private:
    ComplexMatrix frame_{0, 0};
};

/// Orthonormal basis of the column span of `generators` (d x k, any k >= 0),
/// with numerical rank decided by the relative cutoff.  The zero matrix (and
/// k = 0) give the zero subspace.
inline Subspace orthonormalize(const ComplexMatrix& generators, const Tolerance& tol) {
    tol.validate();
    require_finite(generators, "orthonormalize input");
    if (generators.cols() == 0)
        return Subspace::zero(generators.rows());
    Eigen::JacobiSVD<ComplexMatrix> svd(generators, Eigen::ComputeThinU);
    const RealVector& sv = svd.singularValues();
    const Eigen::Index r = numerical_rank(sv, tol);
    if (r == 0) return Subspace::zero(generators.rows());
    ComplexMatrix frame = svd.matrixU().leftCols(r);
    detail::canonicalize_phases(frame);
    return Subspace::from_orthonormal(std::move(frame));
}

inline ComplexMatrix projection(const Subspace& s) {
    return s.projection();
}

inline void require_same_ambient(const Subspace& a, const Subspace& b, const std::string& what) {
    if (a.ambient_dim() != b.ambient_dim())
        throw ShapeMismatchError(what + ": ambient dimensions " +
                                 std::to_string(a.ambient_dim()) + " vs " +
                                 std::to_string(b.ambient_dim()));
}

/// Orthogonal complement within the ambient space.
inline Subspace orth_complement(const Subspace& s) {
    const Eigen::Index d = s.ambient_dim();
    if (s.dim() == 0) return Subspace::full(d);
    if (s.dim() == d) return Subspace::zero(d);
    Eigen::JacobiSVD<ComplexMatrix> svd(s.frame(), Eigen::ComputeFullU);
    ComplexMatrix frame = svd.matrixU().rightCols(d - s.dim());
    detail::canonicalize_phases(frame);
    return Subspace::from_orthonormal(std::move(frame));
}

/// Principal-angle cosines between the two subspaces, descending; the list
/// length is min(dim a, dim b).
inline RealVector principal_cosines(const Subspace& a, const Subspace& b) {
    require_same_ambient(a, b, "principal_cosines");
    if (a.dim() == 0 || b.dim() == 0) return RealVector(0);
    RealVector sv = singular_values(a.frame().adjoint() * b.frame());
    for (Eigen::Index i = 0; i < sv.size(); ++i) sv(i) = std::min(sv(i), 1.0);
    return sv;
}

/// Intersection, read off from the principal directions whose cosine is 1 to
/// within rank_rel.
inline Subspace intersect(const Subspace& a, const Subspace& b, const Tolerance& tol) {
    tol.validate();
    require_same_ambient(a, b, "intersect");
    if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim());
    Eigen::JacobiSVD<ComplexMatrix> svd(a.frame().adjoint() * b.frame(), Eigen::ComputeFullU);
    const RealVector& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) >= 1.0 - tol.rank_rel) ++r;
    if (r == 0) return Subspace::zero(a.ambient_dim());
    // Columns of a.frame * U for cosine-1 directions already form an
    // orthonormal set; re-orthonormalize only to scrub roundoff.
    const ComplexMatrix raw = a.frame() * svd.matrixU().leftCols(r);
    return orthonormalize(raw, tol);
}

/// Span of the union of the two subspaces.
inline Subspace sum(const Subspace& a, const Subspace& b, const Tolerance& tol) {
    tol.validate();
    require_same_ambient(a, b, "sum");
    ComplexMatrix gens(a.ambient_dim(), a.dim() + b.dim());
    gens << a.frame(), b.frame();
    return orthonormalize(gens, tol);
}

/// True iff every vector of `inner` lies in `outer` to within eq_abs.
inline bool contains(const Subspace& outer, const Subspace& inner, double eq_abs) {
    require_same_ambient(outer, inner, "contains");
    if (inner.dim() == 0) return true;
    const ComplexMatrix residual =
        inner.frame() - outer.frame() * (outer.frame().adjoint() * inner.frame());
    return operator_norm(residual) <= eq_abs;
}

/// Subspace equality via projection distance ||P_a - P_b||.
inline bool subspace_equal(const Subspace& a, const Subspace& b, double eq_abs) {
    require_same_ambient(a, b, "subspace_equal");
    return operator_norm(a.projection() - b.projection()) <= eq_abs;
}

} // namespace sepmod

#endif // SEPMOD_SUBSPACE_HPP
