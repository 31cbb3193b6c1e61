#pragma once

#include <stdexcept>
#include <string>

#include "ghm/terms.hpp"

namespace ghm {

struct IllTyped : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TranslationResult {
    Term term;
    Type type;
};

// Cast insertion state: the label counter can be shared across several translations.
class CastInserter {
public:
    explicit CastInserter(int firstLabel = 1) : next_(firstLabel) {}
    TranslationResult translate(const Env& env, const Expr& e);
    // Translate the right-hand side of a let and return the full binder list (generalized plus extra).
    struct LetResult {
        Term value;
        Type type;
        std::vector<std::string> binders;
    };
    LetResult translateLetValue(const Env& env, const Expr& v, const std::vector<std::string>& generalized);
    int nextLabel() const { return next_; }

private:
    Term cast(Term f, const Type& from, const Type& to, Span sp);
    Term go(const Env& env, const Expr& e, Type& ty);
    int next_;
};

TranslationResult castInsert(const Env& env, const Expr& annotated);

// Declarative type checker for lambda-DTI. A null result means the term is blame and fits any type.
Type typecheckDTI(const Env& env, const Term& f);

}  // namespace ghm
