#ifndef SEPMOD_MATRIX_HPP
#define SEPMOD_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>

#include <sepmod/errors.hpp>
#include <sepmod/tolerance.hpp>

namespace sepmod {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

inline void require_finite(const ComplexMatrix& m, const std::string& what) {
    if (!all_finite(m))
        throw NonFiniteEntryError(what + " contains a non-finite entry");
}

inline void require_square(const ComplexMatrix& m, const std::string& what) {
    if (m.rows() != m.cols())
        throw ShapeMismatchError(what + " must be square, got " +
                                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                               const std::string& what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeMismatchError(what + ": shapes " + std::to_string(a.rows()) + "x" +
                                 std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                 "x" + std::to_string(b.cols()));
}

/// Singular values of m in descending order.
inline RealVector singular_values(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

/// Operator (spectral) norm; 0 for an empty matrix.
inline double operator_norm(const ComplexMatrix& m) {
    const RealVector sv = singular_values(m);
    return sv.size() == 0 ? 0.0 : sv(0);
}

/// Number of singular values above the relative rank cutoff.
inline Eigen::Index numerical_rank(const RealVector& sv, const Tolerance& tol) {
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double cutoff = tol.rank_rel * sv(0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    return r;
}

inline Eigen::Index numerical_rank(const ComplexMatrix& m, const Tolerance& tol) {
    return numerical_rank(singular_values(m), tol);
}

/// Smallest singular value that still counts toward the numerical rank,
/// i.e. the smallest one above rank_rel * sigma_max.  Empty for (numerically)
/// zero matrices.  Used as the finite-dimensional surrogate for detecting a
/// family of operators whose ranges degenerate (the value draining to zero).
inline std::optional<double> min_positive_singular(const ComplexMatrix& m, const Tolerance& tol) {
    tol.validate();
    require_finite(m, "min_positive_singular input");
    const RealVector sv = singular_values(m);
    const Eigen::Index r = numerical_rank(sv, tol);
    if (r == 0) return std::nullopt;
    return sv(r - 1);
}

/// Moore-Penrose pseudoinverse via SVD with the relative rank cutoff.
/// Satisfies the four Penrose conditions to machine precision on the kept part.
inline ComplexMatrix moore_penrose(const ComplexMatrix& m, const Tolerance& tol) {
    tol.validate();
    require_finite(m, "moore_penrose input");
    if (m.rows() == 0 || m.cols() == 0) return ComplexMatrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const Eigen::Index r = numerical_rank(sv, tol);
    ComplexMatrix result = ComplexMatrix::Zero(m.cols(), m.rows());
    if (r == 0) return result;
    const ComplexMatrix u = svd.matrixU().leftCols(r);
    const ComplexMatrix v = svd.matrixV().leftCols(r);
    const Eigen::ArrayXd inv = sv.head(r).array().inverse();
    result = v * inv.matrix().asDiagonal() * u.adjoint();
    return result;
}

/// Operator-norm equality test.
inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double eq_abs) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return operator_norm(a - b) <= eq_abs;
}

/// True iff p is an orthogonal projection matrix to within eq_abs.
inline bool is_projection_matrix(const ComplexMatrix& p, double eq_abs) {
    if (p.rows() != p.cols()) return false;
    return operator_norm(p * p - p) <= eq_abs && operator_norm(p - p.adjoint()) <= eq_abs;
}

/// True iff m is idempotent (m^2 = m) to within eq_abs.
inline bool is_idempotent_matrix(const ComplexMatrix& m, double eq_abs) {
    if (m.rows() != m.cols()) return false;
    return operator_norm(m * m - m) <= eq_abs;
}

} // namespace sepmod

#endif // SEPMOD_MATRIX_HPP
