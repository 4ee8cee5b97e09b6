#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace neelxyz {

/// Base for all library errors. Carries a stable machine-readable name so
/// front ends can surface it in reports without parsing the message.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define NEELXYZ_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                                 \
        explicit Name(const std::string& what) : Error(#Name, what) {}    \
    }

// A pairwise exchange sum vanishes while the matching field component is
// nonzero: the factorization condition has a pole there.
NEELXYZ_DEFINE_ERROR(DegenerateDenominator);
// Pairwise exchange sum and matching field component both vanish (0/0);
// the condition form breaks down and the caller must fall back to a direct
// eigen check.
NEELXYZ_DEFINE_ERROR(IndeterminateTerm);
// Input parameters do not lie on the factorization surface.
NEELXYZ_DEFINE_ERROR(ConditionViolated);
// The angle quadratic degenerates completely; the polarization directions
// are not determined by the parameters.
NEELXYZ_DEFINE_ERROR(AllCoefficientsZero);
// tan(theta/2) overflows at theta = pi; the invariants are undefined there.
NEELXYZ_DEFINE_ERROR(PoleDegeneracy);
// No singular value fell below the nullspace threshold.
NEELXYZ_DEFINE_ERROR(EmptyNullspace);
// A scan found no sign change in the requested range.
NEELXYZ_DEFINE_ERROR(NoRoot);
// A state vector would exceed the configured memory budget.
NEELXYZ_DEFINE_ERROR(BudgetExceeded);
// Operator/state sizes disagree.
NEELXYZ_DEFINE_ERROR(DimensionMismatch);

#undef NEELXYZ_DEFINE_ERROR

}  // namespace neelxyz
