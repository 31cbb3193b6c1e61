#pragma once

#include <string>
#include <vector>

#include "ghm/cast.hpp"
#include "ghm/eval.hpp"
#include "ghm/infer.hpp"
#include "ghm/syntax.hpp"

namespace ghm {

struct Compiled {
    Expr source;
    InferenceResult inference;
    Term term;
    Type type;
    std::vector<std::string> notes;
};

// parse, infer principal types, insert casts
Compiled compileExpr(const Expr& e);
Compiled compileSource(const std::string& src, ParseOptions opts = {});

struct RunResult {
    Compiled compiled;
    EvalOutcome outcome;
};

RunResult runSource(const std::string& src, const EvalOptions& opts = {});

// `where 'a0 := int` for the bindings of s that mention names in vars; empty when none
std::string showWhere(const Subst& s, const std::set<std::string>& vars);
std::string showBlame(const Label& l);

// Interactive session: declarations persist, residual variables may be instantiated later.
class Session {
public:
    Session();
    // Handle one input line; returns the text to print.
    std::string handle(const std::string& line);
    bool done() const { return done_; }
    EvalOptions& options() { return opts_; }

private:
    struct Stored {
        std::string name;
        std::vector<std::string> binders;
        Term value;
    };

    std::string evalExpr(const Expr& e, bool trace);
    std::string declare(const Decl& d);
    Term closeOver(Term body) const;
    void applyToSession(const Subst& s);
    Compiled translate(const Expr& e);

    Env inferEnv_, ciEnv_;
    std::vector<Stored> stored_;
    Inferencer inferencer_;
    int nextLabel_ = 1;
    Fresh runtime_{"r"};
    EvalOptions opts_;
    bool done_ = false;
};

}  // namespace ghm
