#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ghm/types.hpp"

namespace ghm {

struct Span {
    int line = 0;
    int col = 0;
};

struct Label {
    int id = 0;
    bool neg = false;
    Span span;

    Label negate() const {
        Label l = *this;
        l.neg = !l.neg;
        return l;
    }
    bool operator==(const Label& o) const { return id == o.id && neg == o.neg; }
    std::string show() const { return std::to_string(id) + (neg ? "-" : "+"); }
};

struct Const {
    Base kind = Base::Unit;
    long long i = 0;
    bool b = false;

    static Const ofInt(long long v) { return {Base::Int, v, false}; }
    static Const ofBool(bool v) { return {Base::Bool, 0, v}; }
    static Const unit() { return {Base::Unit, 0, false}; }
    bool operator==(const Const& o) const;
    std::string show() const;
};

Type constType(const Const& c);

enum class Op { Add, Sub, Mul, Eq, Lt };

struct OpSig {
    const char* name;
    Base arg1, arg2, result;
};

const OpSig& opSig(Op op);
Const applyOp(Op op, const Const& a, const Const& b);

// ---- lambda-DTI terms ----

enum class FK { Var, Const, Op, Abs, App, Cast, Blame, Let, If, Fix };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
    FK kind;
    std::string x;                    // variable, binder, let name, fix function name
    std::string y;                    // fix parameter
    std::vector<Type> targs;          // type arguments of a variable; nullptr stands for nu
    std::vector<std::string> tvars;   // let type binders
    Const c;
    Op op = Op::Add;
    Type t1, t2;                      // abs annotation, cast source/target, fix domain/codomain
    Label lbl;
    Term a, b, d;
};

Term mkVar(const std::string& x, std::vector<Type> targs = {});
Term mkConst(const Const& c);
Term mkInt(long long v);
Term mkBool(bool v);
Term mkOp(Op op, Term a, Term b);
Term mkAbs(const std::string& x, Type t, Term body);
Term mkApp(Term f, Term a);
Term mkCast(Term f, Type from, Type to, Label l);
Term mkBlame(Label l);
Term mkLet(const std::string& x, std::vector<std::string> tvars, Term w, Term body);
Term mkIf(Term c, Term t, Term e);
Term mkFix(const std::string& f, const std::string& x, Type dom, Type cod, Term body);

bool isValue(const Term& f);
bool termEq(const Term& a, const Term& b, bool withLabels = true);
int termSize(const Term& f);
bool containsNu(const Term& f);

std::set<std::string> ftv(const Term& f);
void allTyNames(const Term& f, std::set<std::string>& out);

// Type substitution, capture-avoiding under let type binders.
Term applySubst(const Subst& s, const Term& f);
// Monomorphic term substitution f[x := w] for a closed value w.
Term substTerm(const Term& f, const std::string& x, const Term& w);
// Polymorphic substitution f[x := /\X.w]; each nu becomes a fresh variable per occurrence.
Term substPoly(const Term& f, const std::string& x, const std::vector<std::string>& binders, const Term& w,
               Fresh& fresh);
// Rename let binders of f that clash with names in avoid.
Term renameBinders(const Term& f, const std::set<std::string>& clash);

// ---- ITGL terms ----

enum class EK { Var, Const, Op, Abs, App, Let, LetRec, If, Ascribe };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    EK kind;
    std::string x, y;                 // y: let rec parameter
    Const c;
    Op op = Op::Add;
    Type ty;                          // abs/let-rec parameter annotation (nullptr if omitted), ascription type
    Type ty2;                         // let-rec result type (filled by inference)
    bool implicit = false;            // annotation was filled in by inference
    std::vector<Type> targs;          // instantiation of a variable (filled by inference)
    std::vector<std::string> tvars;   // generalized variables of a let (filled by inference)
    Expr a, b, d;
    Span span;
};

Expr eVar(const std::string& x, Span sp = {});
Expr eConst(const Const& c, Span sp = {});
Expr eInt(long long v, Span sp = {});
Expr eBool(bool v, Span sp = {});
Expr eOp(Op op, Expr a, Expr b, Span sp = {});
Expr eAbs(const std::string& x, Type ann, Expr body, Span sp = {});
Expr eApp(Expr f, Expr a, Span sp = {});
Expr eLet(const std::string& x, Expr v, Expr body, Span sp = {});
Expr eLetRec(const std::string& f, const std::string& x, Type ann, Expr body, Expr in, Span sp = {});
Expr eIf(Expr c, Expr t, Expr e, Span sp = {});
Expr eAscribe(Expr e, Type t, Span sp = {});

bool isSyntacticValue(const Expr& e);
bool exprEq(const Expr& a, const Expr& b);
int exprSize(const Expr& e);
// free type variables of the explicit (user written) annotations
std::set<std::string> annotFtv(const Expr& e);
void allTyNames(const Expr& e, std::set<std::string>& out);
Expr applySubst(const Subst& s, const Expr& e);
// drop inference products so that the term looks like freshly parsed source
Expr stripInferred(const Expr& e);

}  // namespace ghm
