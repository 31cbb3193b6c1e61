#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ghm/terms.hpp"

namespace ghm {

struct SyntaxError : std::runtime_error {
    Span span;
    SyntaxError(const std::string& msg, Span sp)
        : std::runtime_error("line " + std::to_string(sp.line) + ", column " + std::to_string(sp.col) + ": " + msg),
          span(sp) {}
};

struct ValueRestrictionError : SyntaxError {
    using SyntaxError::SyntaxError;
};

struct ParseOptions {
    // when false, a non-value let right-hand side is an error instead of being desugared
    bool desugarNonValueLet = true;
};

// One top-level declaration `let x = e` or `let rec f x = e`.
struct Decl {
    std::string name;
    bool rec = false;
    std::string param;
    Type paramAnn;
    Expr rhs;
    Span span;
};

struct Program {
    std::vector<Decl> decls;
    Expr body;  // may be null when the input ends with a declaration
    std::vector<std::string> notes;
};

Type parseType(const std::string& src);
Expr parseExpr(const std::string& src, std::vector<std::string>* notes = nullptr, ParseOptions opts = {});
Program parseProgram(const std::string& src, ParseOptions opts = {});
// Fold declarations into nested lets around the body.
Expr programToExpr(const Program& p, std::vector<std::string>* notes = nullptr);
// Build the expression for one declaration around a body.
Expr declToExpr(const Decl& d, Expr body, std::vector<std::string>* notes = nullptr);

Term parseTerm(const std::string& src);

std::string printExpr(const Expr& e);
std::string printTerm(const Term& f, bool labels = true);

}  // namespace ghm
