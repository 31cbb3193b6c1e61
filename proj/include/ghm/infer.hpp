#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ghm/terms.hpp"

namespace ghm {

struct TypeError : std::runtime_error {
    Span span;
    explicit TypeError(const std::string& msg, Span sp = {}) : std::runtime_error(msg), span(sp) {}
};

struct ClashError : TypeError {
    using TypeError::TypeError;
};

struct OccursCheckError : TypeError {
    using TypeError::TypeError;
};

struct Constraint {
    enum Kind { Consist, Equal } kind;
    Type lhs, rhs;
};

// Incremental constraint solver. Keeps an idempotent substitution with static range.
class Solver {
public:
    explicit Solver(Fresh& fresh) : fresh_(fresh) {}

    void consist(const Type& a, const Type& b);
    void equal(const Type& a, const Type& b);
    void add(const Constraint& c) { c.kind == Constraint::Consist ? consist(c.lhs, c.rhs) : equal(c.lhs, c.rhs); }
    Type apply(const Type& t) const { return s_.apply(t); }
    const Subst& subst() const { return s_; }
    // bind a variable to a fresh arrow of fresh variables; returns the arrow
    Type splitArrow(const std::string& x);

private:
    void bindVar(const std::string& x, const Type& t);
    Subst s_;
    Fresh& fresh_;
};

Subst solve(const std::vector<Constraint>& cs, Fresh& fresh);

struct InferenceResult {
    Subst subst;
    Type type;
    Expr annotated;                    // every lambda annotated, variables instantiated
    std::vector<std::string> residual; // free type variables left in the annotated term
};

// Inference state that can be kept across several calls (REPL sessions).
class Inferencer {
public:
    Inferencer() : fresh_("a"), solver_(fresh_) {}

    InferenceResult infer(const Env& env, const Expr& e);
    // Top-level `let x = v` or `let rec`: returns the scheme and the annotated right-hand side.
    struct DeclResult {
        Subst subst;
        Scheme scheme;
        Expr annotated;  // for let rec: the LetRec node with a dummy body
    };
    DeclResult inferLet(const Env& env, const std::string& x, const Expr& v);
    void avoid(const std::set<std::string>& names) { fresh_.avoid(names); }
    const Subst& subst() const { return solver_.subst(); }

private:
    Type go(const Env& env, const Expr& e, Expr& out);
    Scheme generalize(const Env& env, const Expr& src, const Type& t);

    Fresh fresh_;
    Solver solver_;
};

InferenceResult inferPrincipal(const Env& env, const Expr& e);

std::vector<std::string> generalizableVars(const Env& env, const Expr& v, const Type& u);

// Declarative checker for fully annotated terms (all lambdas annotated, instantiations recorded).
Type checkITGL(const Env& env, const Expr& e);

}  // namespace ghm
