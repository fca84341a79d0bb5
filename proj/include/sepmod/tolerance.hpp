#ifndef SEPMOD_TOLERANCE_HPP
#define SEPMOD_TOLERANCE_HPP

#include <sepmod/errors.hpp>

namespace sepmod {

/// Numerical policy shared by every rank / equality decision in the library.
///
/// - rank_rel: relative singular-value cutoff.  A singular (or eigen-) value
///   counts toward the rank iff it exceeds rank_rel * (largest value).
/// - eq_abs:   absolute operator-norm bound under which two operators (or the
///   projections of two subspaces) are considered equal.
struct Tolerance {
    double rank_rel = 1e-10;
    double eq_abs = 1e-9;

    void validate() const {
        if (!(rank_rel > 0.0) || !(rank_rel < 1.0))
            throw PreconditionError("Tolerance.rank_rel must lie in (0,1)");
        if (!(eq_abs > 0.0) || !(eq_abs < 1.0))
            throw PreconditionError("Tolerance.eq_abs must lie in (0,1)");
    }
};

} // namespace sepmod

#endif // SEPMOD_TOLERANCE_HPP
