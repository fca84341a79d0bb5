#ifndef SEPMOD_ALGEBRA_HPP
#define SEPMOD_ALGEBRA_HPP

#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <sepmod/matrix.hpp>

namespace sepmod {

/// A finite-dimensional C*-algebra: a direct sum of full complex matrix
/// blocks M_{n_1} ⊕ ... ⊕ M_{n_k}.  Elements are stored blockwise; the flat
/// coordinates stack the blocks row-major, giving total_dim = sum n_i^2.
class FiniteCStarAlgebra {
public:
    explicit FiniteCStarAlgebra(std::vector<Eigen::Index> block_dims)
        : block_dims_(std::move(block_dims)) {
        if (block_dims_.empty())
            throw PreconditionError("algebra needs at least one block");
        for (const Eigen::Index n : block_dims_)
            if (n < 1) throw PreconditionError("algebra block dimensions must be >= 1");
        offsets_.reserve(block_dims_.size());
        Eigen::Index off = 0;
        for (const Eigen::Index n : block_dims_) {
            offsets_.push_back(off);
            off += n * n;
        }
        total_dim_ = off;
    }

    [[nodiscard]] Eigen::Index num_blocks() const {
        return static_cast<Eigen::Index>(block_dims_.size());
    }
    [[nodiscard]] Eigen::Index block_dim(Eigen::Index i) const { return block_dims_.at(i); }
    [[nodiscard]] const std::vector<Eigen::Index>& block_dims() const { return block_dims_; }
    /// Dimension of the algebra as a complex vector space.
    [[nodiscard]] Eigen::Index total_dim() const { return total_dim_; }
    /// Offset of block i in the flat coordinates.
    [[nodiscard]] Eigen::Index block_offset(Eigen::Index i) const { return offsets_.at(i); }

    bool operator==(const FiniteCStarAlgebra& other) const {
        return block_dims_ == other.block_dims_;
    }
    bool operator!=(const FiniteCStarAlgebra& other) const { return !(*this == other); }

private:
    std::vector<Eigen::Index> block_dims_;
    std::vector<Eigen::Index> offsets_;
    Eigen::Index total_dim_ = 0;
};

/// One element of a finite-dimensional C*-algebra (a tuple of square blocks).
class AlgebraElement {
public:
    AlgebraElement(FiniteCStarAlgebra algebra, std::vector<ComplexMatrix> blocks)
        : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
        if (static_cast<Eigen::Index>(blocks_.size()) != algebra_.num_blocks())
            throw BlockMismatchError("element block count does not match the algebra");
        for (Eigen::Index i = 0; i < algebra_.num_blocks(); ++i) {
            const Eigen::Index n = algebra_.block_dim(i);
            if (blocks_[i].rows() != n || blocks_[i].cols() != n)
                throw BlockMismatchError("element block " + std::to_string(i) + " has wrong shape");
            require_finite(blocks_[i], "algebra element block");
        }
    }

    static AlgebraElement zero(const FiniteCStarAlgebra& algebra) {
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(algebra.num_blocks());
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i)
            blocks.push_back(ComplexMatrix::Zero(algebra.block_dim(i), algebra.block_dim(i)));
        return AlgebraElement(algebra, std::move(blocks));
    }

    static AlgebraElement identity(const FiniteCStarAlgebra& algebra) {
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(algebra.num_blocks());
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i)
            blocks.push_back(ComplexMatrix::Identity(algebra.block_dim(i), algebra.block_dim(i)));
        return AlgebraElement(algebra, std::move(blocks));
    }

    /// Basis element by flat index: the matrix unit E_pq of some block.
    static AlgebraElement basis_element(const FiniteCStarAlgebra& algebra, Eigen::Index flat_index) {
        AlgebraElement e = zero(algebra);
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i) {
            const Eigen::Index n = algebra.block_dim(i);
            const Eigen::Index off = algebra.block_offset(i);
            if (flat_index >= off && flat_index < off + n * n) {
                const Eigen::Index local = flat_index - off;
                e.blocks_[i](local / n, local % n) = Complex(1, 0);
                return e;
            }
        }
        throw PreconditionError("basis_element: flat index out of range");
    }

    static AlgebraElement from_flat(const FiniteCStarAlgebra& algebra, const ComplexVector& flat) {
        if (flat.size() != algebra.total_dim())
            throw ShapeMismatchError("from_flat: wrong coordinate length");
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(algebra.num_blocks());
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i) {
            const Eigen::Index n = algebra.block_dim(i);
            ComplexMatrix b(n, n);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    b(r, c) = flat(algebra.block_offset(i) + r * n + c);
            blocks.push_back(std::move(b));
        }
        return AlgebraElement(algebra, std::move(blocks));
    }

    [[nodiscard]] const FiniteCStarAlgebra& algebra() const { return algebra_; }
    [[nodiscard]] const ComplexMatrix& block(Eigen::Index i) const { return blocks_.at(i); }
    [[nodiscard]] Eigen::Index num_blocks() const { return algebra_.num_blocks(); }

    [[nodiscard]] ComplexVector flat() const {
        ComplexVector v(algebra_.total_dim());
        for (Eigen::Index i = 0; i < algebra_.num_blocks(); ++i) {
            const Eigen::Index n = algebra_.block_dim(i);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c)
                    v(algebra_.block_offset(i) + r * n + c) = blocks_[i](r, c);
        }
        return v;
    }

    [[nodiscard]] AlgebraElement adjoint() const {
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(blocks_.size());
        for (const ComplexMatrix& b : blocks_) blocks.push_back(b.adjoint());
        return AlgebraElement(algebra_, std::move(blocks));
    }

    /// C*-norm: the largest block operator norm.
    [[nodiscard]] double norm() const {
        double best = 0.0;
        for (const ComplexMatrix& b : blocks_) best = std::max(best, operator_norm(b));
        return best;
    }

    [[nodiscard]] bool is_hermitian(double eq_abs) const {
        for (const ComplexMatrix& b : blocks_)
            if (operator_norm(b - b.adjoint()) > eq_abs) return false;
        return true;
    }

    /// Positivity via the spectra of the (hermitian) blocks.
    [[nodiscard]] bool is_positive(double eq_abs) const {
        if (!is_hermitian(eq_abs)) return false;
        for (const ComplexMatrix& b : blocks_) {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().size() > 0 && es.eigenvalues()(0) < -eq_abs) return false;
        }
        return true;
    }

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
        a.require_same(b, "+");
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(a.blocks_.size());
        for (size_t i = 0; i < a.blocks_.size(); ++i) blocks.push_back(a.blocks_[i] + b.blocks_[i]);
        return AlgebraElement(a.algebra_, std::move(blocks));
    }

    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
        a.require_same(b, "-");
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(a.blocks_.size());
        for (size_t i = 0; i < a.blocks_.size(); ++i) blocks.push_back(a.blocks_[i] - b.blocks_[i]);
        return AlgebraElement(a.algebra_, std::move(blocks));
    }

    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
        a.require_same(b, "*");
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(a.blocks_.size());
        for (size_t i = 0; i < a.blocks_.size(); ++i) blocks.push_back(a.blocks_[i] * b.blocks_[i]);
        return AlgebraElement(a.algebra_, std::move(blocks));
    }

    friend AlgebraElement operator*(Complex s, const AlgebraElement& a) {
        std::vector<ComplexMatrix> blocks;
        blocks.reserve(a.blocks_.size());
        for (const ComplexMatrix& b : a.blocks_) blocks.push_back(s * b);
        return AlgebraElement(a.algebra_, std::move(blocks));
    }

private:
    void require_same(const AlgebraElement& other, const std::string& op) const {
        if (algebra_ != other.algebra_)
            throw BlockMismatchError("algebra mismatch in element operation " + op);
    }

    FiniteCStarAlgebra algebra_;
    std::vector<ComplexMatrix> blocks_;
};

/// An element of the standard module A^m over the algebra: m coordinates,
/// each an algebra element.  The module inner product is
/// <x,y> = sum_i x_i^* y_i (conjugate-linear in the first slot).
class ModuleVector {
public:
    ModuleVector(FiniteCStarAlgebra algebra, std::vector<AlgebraElement> coords)
        : algebra_(std::move(algebra)), coords_(std::move(coords)) {
        if (coords_.empty()) throw PreconditionError("module vector needs at least one coordinate");
        for (const AlgebraElement& c : coords_)
            if (c.algebra() != algebra_)
                throw BlockMismatchError("module coordinate over a different algebra");
    }

    static ModuleVector zero(const FiniteCStarAlgebra& algebra, Eigen::Index m) {
        std::vector<AlgebraElement> coords(static_cast<size_t>(m), AlgebraElement::zero(algebra));
        return ModuleVector(algebra, std::move(coords));
    }

    static ModuleVector from_flat(const FiniteCStarAlgebra& algebra, Eigen::Index m,
                                  const ComplexVector& flat) {
        if (flat.size() != m * algebra.total_dim())
            throw ShapeMismatchError("module from_flat: wrong coordinate length");
        std::vector<AlgebraElement> coords;
        coords.reserve(static_cast<size_t>(m));
        for (Eigen::Index i = 0; i < m; ++i)
            coords.push_back(AlgebraElement::from_flat(
                algebra, flat.segment(i * algebra.total_dim(), algebra.total_dim())));
        return ModuleVector(algebra, std::move(coords));
    }

    [[nodiscard]] const FiniteCStarAlgebra& algebra() const { return algebra_; }
    [[nodiscard]] Eigen::Index m() const { return static_cast<Eigen::Index>(coords_.size()); }
    [[nodiscard]] const AlgebraElement& coord(Eigen::Index i) const { return coords_.at(i); }

    [[nodiscard]] ComplexVector flat() const {
        ComplexVector v(m() * algebra_.total_dim());
        for (Eigen::Index i = 0; i < m(); ++i)
            v.segment(i * algebra_.total_dim(), algebra_.total_dim()) = coords_[i].flat();
        return v;
    }

    /// Right action x -> x * a, coordinatewise.
    [[nodiscard]] ModuleVector right_mul(const AlgebraElement& a) const {
        std::vector<AlgebraElement> coords;
        coords.reserve(coords_.size());
        for (const AlgebraElement& c : coords_) coords.push_back(c * a);
        return ModuleVector(algebra_, std::move(coords));
    }

private:
    FiniteCStarAlgebra algebra_;
    std::vector<AlgebraElement> coords_;
};

/// A-valued inner product on A^m.
inline AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y) {
    if (x.algebra() != y.algebra() || x.m() != y.m())
        throw BlockMismatchError("inner_product: module mismatch");
    AlgebraElement acc = AlgebraElement::zero(x.algebra());
    for (Eigen::Index i = 0; i < x.m(); ++i) acc = acc + x.coord(i).adjoint() * y.coord(i);
    return acc;
}

/// Module norm ||x|| = sqrt(|| <x,x> ||).
inline double module_norm(const ModuleVector& x) {
    return std::sqrt(inner_product(x, x).norm());
}

/// A state on the algebra, stored as one density block per matrix block:
/// f(a) = sum_i trace(rho_i a_i), rho_i >= 0, sum_i trace(rho_i) = 1.
class State {
public:
    State(FiniteCStarAlgebra algebra, std::vector<ComplexMatrix> densities, const Tolerance& tol)
        : algebra_(std::move(algebra)), densities_(std::move(densities)) {
        tol.validate();
        if (static_cast<Eigen::Index>(densities_.size()) != algebra_.num_blocks())
            throw NotAStateError("state density count does not match the algebra");
        double trace = 0.0;
        for (Eigen::Index i = 0; i < algebra_.num_blocks(); ++i) {
            const Eigen::Index n = algebra_.block_dim(i);
            if (densities_[i].rows() != n || densities_[i].cols() != n)
                throw NotAStateError("state density " + std::to_string(i) + " has wrong shape");
            require_finite(densities_[i], "state density");
            if (operator_norm(densities_[i] - densities_[i].adjoint()) > tol.eq_abs)
                throw NotAStateError("state density is not hermitian");
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(densities_[i], Eigen::EigenvaluesOnly);
            if (es.eigenvalues()(0) < -tol.eq_abs)
                throw NotAStateError("state density is not positive semidefinite");
            trace += densities_[i].trace().real();
        }
        if (std::abs(trace - 1.0) > tol.eq_abs)
            throw NotAStateError("state densities trace to " + std::to_string(trace) + ", not 1");
    }

    /// Vector state from a unit vector xi living in a single block.
    static State pure(const FiniteCStarAlgebra& algebra, Eigen::Index block,
                      const ComplexVector& xi, const Tolerance& tol = {}) {
        if (block < 0 || block >= algebra.num_blocks())
            throw PreconditionError("pure state: block index out of range");
        if (xi.size() != algebra.block_dim(block))
            throw ShapeMismatchError("pure state: vector length does not match the block");
        const double n = xi.norm();
        if (!(n > 0.0)) throw PreconditionError("pure state: zero vector");
        const ComplexVector unit = xi / n;
        std::vector<ComplexMatrix> densities;
        densities.reserve(algebra.num_blocks());
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i) {
            if (i == block)
                densities.push_back(unit * unit.adjoint());
            else
                densities.push_back(ComplexMatrix::Zero(algebra.block_dim(i), algebra.block_dim(i)));
        }
        return State(algebra, std::move(densities), tol);
    }

    /// The normalized trace state (faithful; mixed unless the algebra is C).
    static State trace_state(const FiniteCStarAlgebra& algebra, const Tolerance& tol = {}) {
        Eigen::Index total = 0;
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i) total += algebra.block_dim(i);
        std::vector<ComplexMatrix> densities;
        densities.reserve(algebra.num_blocks());
        for (Eigen::Index i = 0; i < algebra.num_blocks(); ++i) {
            const Eigen::Index n = algebra.block_dim(i);
            densities.push_back(ComplexMatrix::Identity(n, n) / static_cast<double>(total));
        }
        return State(algebra, std::move(densities), tol);
    }

    [[nodiscard]] const FiniteCStarAlgebra& algebra() const { return algebra_; }
    [[nodiscard]] const ComplexMatrix& density(Eigen::Index i) const { return densities_.at(i); }

    [[nodiscard]] Complex evaluate(const AlgebraElement& a) const {
        if (a.algebra() != algebra_) throw BlockMismatchError("state applied to a foreign element");
        Complex acc(0, 0);
        for (Eigen::Index i = 0; i < algebra_.num_blocks(); ++i)
            acc += (densities_[i] * a.block(i)).trace();
        return acc;
    }

    /// Faithful iff every density is positive definite (no null directions).
    [[nodiscard]] bool is_faithful(const Tolerance& tol) const {
        for (const ComplexMatrix& rho : densities_) {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
            if (es.eigenvalues()(0) <= tol.rank_rel) return false;
        }
        return true;
    }

private:
    FiniteCStarAlgebra algebra_;
    std::vector<ComplexMatrix> densities_;
};

namespace detail {

/// Deterministic standard-normal stream (explicit Box-Muller over mt19937 so
/// the sequence does not depend on the standard library's distribution
/// implementation).
class NormalStream {
public:
    explicit NormalStream(unsigned seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = std::generate_canonical<double, 53>(gen_);
        } while (u1 <= 1e-300);
        const double u2 = std::generate_canonical<double, 53>(gen_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex next_complex() {
        const double re = next();
        const double im = next();
        return Complex(re, im);
    }

    ComplexVector unit_vector(Eigen::Index n) {
        ComplexVector v(n);
        double norm_sq = 0.0;
        do {
            for (Eigen::Index i = 0; i < n; ++i) v(i) = next_complex();
            norm_sq = v.squaredNorm();
        } while (norm_sq < 1e-12);
        return v / std::sqrt(norm_sq);
    }

private:
    std::mt19937 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace detail

/// Deterministic family of random pure states (uniform unit vectors, cycling
/// through the blocks).  Extending `count` extends the same sequence, so a
/// larger budget always contains the smaller one.
inline std::vector<State> random_pure_states(const FiniteCStarAlgebra& algebra, Eigen::Index count,
                                             unsigned seed, const Tolerance& tol = {}) {
    std::vector<State> states;
    states.reserve(static_cast<size_t>(count));
    detail::NormalStream stream(seed);
    for (Eigen::Index i = 0; i < count; ++i) {
        const Eigen::Index block = i % algebra.num_blocks();
        states.push_back(State::pure(algebra, block, stream.unit_vector(algebra.block_dim(block)), tol));
    }
    return states;
}

/// The informationally complete hand-built family: the trace state plus, per
/// block, the basis vector states e_p and the superpositions
/// (e_p + e_q)/sqrt2, (e_p + i e_q)/sqrt2 for p < q.  Linear combinations of
/// these evaluate every matrix entry of every block, so two elements (or two
/// localized pictures) agreeing on the family agree outright.
inline std::vector<State> standard_state_family(const FiniteCStarAlgebra& algebra,
                                                const Tolerance& tol = {}) {
    std::vector<State> states;
    states.push_back(State::trace_state(algebra, tol));
    for (Eigen::Index b = 0; b < algebra.num_blocks(); ++b) {
        const Eigen::Index n = algebra.block_dim(b);
        for (Eigen::Index p = 0; p < n; ++p) {
            ComplexVector e = ComplexVector::Zero(n);
            e(p) = 1.0;
            states.push_back(State::pure(algebra, b, e, tol));
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                ComplexVector plus = ComplexVector::Zero(n);
                plus(p) = 1.0;
                plus(q) = 1.0;
                states.push_back(State::pure(algebra, b, plus, tol));
                ComplexVector phase = ComplexVector::Zero(n);
                phase(p) = 1.0;
                phase(q) = Complex(0, 1);
                states.push_back(State::pure(algebra, b, phase, tol));
            }
        }
    }
    return states;
}

} // namespace sepmod

#endif // SEPMOD_ALGEBRA_HPP
