#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghm/terms.hpp"

namespace ghm {

struct PrecisionBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionWitness {
    Subst subst;
    std::vector<std::string> derivation;  // rule names of the successful derivation, preorder
};

// U is more precise than U' under S. A variable outside dom(S) stands for itself.
bool typePrec(const Type& u, const Type& u2, const Subst& s);

// Least S with typePrec(u, u2, S), or nothing when no S exists.
std::optional<Subst> inferPrecSubst(const Type& u, const Type& u2);

// Precision of source programs (annotations compared, inference products ignored).
bool termPrecITGL(const Expr& e, const Expr& e2, const Subst& s);
std::optional<PrecisionWitness> inferTermPrecITGL(const Expr& e, const Expr& e2);

// Precision of lambda-DTI terms. u and u2 are the types of f and f2 (null means blame).
bool termPrecDTI(const Env& env, const Term& f, const Type& u, const Subst& s, const Type& u2, const Term& f2,
                 const Env& env2);
// Searches for S, treating every type variable on the right as instantiable.
std::optional<PrecisionWitness> inferTermPrecDTI(const Env& env, const Term& f, const Term& f2, const Env& env2,
                                                 const Subst& fixed = {}, long budget = 200000);

}  // namespace ghm
