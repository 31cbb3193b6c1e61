#include "ghm/syntax.hpp"

#include <cctype>
#include <sstream>

namespace ghm {

namespace {

enum class T { Ident, Int, TyVar, Sym, End };

struct Token {
    T kind;
    std::string text;
    long long num = 0;
    Span span;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto adv = [&](size_t n) {
        for (size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto isId = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        Span sp{line, col};
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            Token t{T::Int, src.substr(i, j - i), 0, sp};
            try {
                t.num = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                throw SyntaxError("integer literal out of range", sp);
            }
            out.push_back(t);
            adv(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && isId(src[j])) ++j;
            out.push_back({T::Ident, src.substr(i, j - i), 0, sp});
            adv(j - i);
            continue;
        }
        if (c == '\'') {
            size_t j = i + 1;
            while (j < src.size() && isId(src[j])) ++j;
            if (j == i + 1) throw SyntaxError("expected type variable name after '", sp);
            out.push_back({T::TyVar, src.substr(i + 1, j - i - 1), 0, sp});
            adv(j - i);
            continue;
        }
        static const char* two[] = {"->", "=>", "/\\", ";;"};
        bool matched = false;
        for (auto s : two) {
            if (src.compare(i, 2, s) == 0) {
                out.push_back({T::Sym, s, 0, sp});
                adv(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("()[]:=+-*<,.?").find(c) != std::string::npos) {
            out.push_back({T::Sym, std::string(1, c), 0, sp});
            adv(1);
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", sp);
    }
    out.push_back({T::End, "", 0, {line, col}});
    return out;
}

const char* kKeywords[] = {"fun", "let", "rec", "in", "if", "then", "else", "true", "false",
                           "int", "bool", "unit", "fix", "blame", "nu"};

bool isKeyword(const std::string& s) {
    for (auto k : kKeywords)
        if (s == k) return true;
    return false;
}

class Parser {
public:
    Parser(const std::string& src, ParseOptions opts) : toks_(lex(src)), opts_(opts) {}

    std::vector<std::string> notes;

    const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool atEnd() const { return peek().kind == T::End; }
    size_t mark() const { return pos_; }
    void reset(size_t m) { pos_ = m; }

    bool isSym(const char* s, size_t k = 0) const { return peek(k).kind == T::Sym && peek(k).text == s; }
    bool isKw(const char* s, size_t k = 0) const { return peek(k).kind == T::Ident && peek(k).text == s; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string what = t.kind == T::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(msg + ", found " + what, t.span);
    }

    void expectSym(const char* s) {
        if (!isSym(s)) fail(std::string("expected '") + s + "'");
        ++pos_;
    }
    void expectKw(const char* s) {
        if (!isKw(s)) fail(std::string("expected '") + s + "'");
        ++pos_;
    }
    bool acceptSym(const char* s) {
        if (isSym(s)) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::string ident() {
        if (peek().kind != T::Ident || isKeyword(peek().text)) fail("expected identifier");
        return toks_[pos_++].text;
    }
    void expectEnd() {
        if (!atEnd()) fail("unexpected trailing input");
    }

    // ---- types ----
    Type type() {
        Type a = atomType();
        if (acceptSym("->")) return arrow(a, type());
        return a;
    }
    Type atomType() {
        const Token& t = peek();
        if (t.kind == T::Ident) {
            if (t.text == "int") return ++pos_, tint();
            if (t.text == "bool") return ++pos_, tbool();
            if (t.text == "unit") return ++pos_, tunit();
        }
        if (t.kind == T::TyVar) {
            ++pos_;
            return tvar(t.text);
        }
        if (acceptSym("?")) return dyn();
        if (acceptSym("(")) {
            Type ty = type();
            expectSym(")");
            return ty;
        }
        fail("expected a type");
    }

    // ---- ITGL ----
    Expr expr() {
        Span sp = peek().span;
        if (isKw("fun")) {
            ++pos_;
            std::vector<std::pair<std::string, Type>> ps;
            do {
                ps.push_back(param());
            } while (!isSym("->"));
            expectSym("->");
            Expr body = expr();
            for (auto it = ps.rbegin(); it != ps.rend(); ++it) body = eAbs(it->first, it->second, body, sp);
            return body;
        }
        if (isKw("let")) {
            Decl d = letHeader();
            expectKw("in");
            Expr body = expr();
            return declToExpr(d, body, &notes);
        }
        if (isKw("if")) {
            ++pos_;
            Expr c = expr();
            expectKw("then");
            Expr t = expr();
            expectKw("else");
            Expr e = expr();
            return eIf(c, t, e, sp);
        }
        return cmp();
    }

    std::pair<std::string, Type> param() {
        if (acceptSym("(")) {
            std::string x = ident();
            expectSym(":");
            Type t = type();
            expectSym(")");
            return {x, t};
        }
        return {ident(), nullptr};
    }

    Decl letHeader() {
        Decl d;
        d.span = peek().span;
        expectKw("let");
        if (isKw("rec")) {
            ++pos_;
            d.rec = true;
            d.name = ident();
            auto p = param();
            d.param = p.first;
            d.paramAnn = p.second;
        } else {
            d.name = ident();
        }
        expectSym("=");
        d.rhs = expr();
        if (!d.rec && !isSyntacticValue(d.rhs) && !opts_.desugarNonValueLet)
            throw ValueRestrictionError("right-hand side of let is not a syntactic value", d.span);
        return d;
    }

    Expr cmp() {
        Expr a = add();
        Span sp = peek().span;
        if (isSym("=") || isSym("<")) {
            Op op = peek().text == "=" ? Op::Eq : Op::Lt;
            ++pos_;
            Expr b = add();
            return eOp(op, a, b, sp);
        }
        return a;
    }
    Expr add() {
        Expr a = mul();
        while (isSym("+") || isSym("-")) {
            Span sp = peek().span;
            Op op = peek().text == "+" ? Op::Add : Op::Sub;
            ++pos_;
            a = eOp(op, a, mul(), sp);
        }
        return a;
    }
    Expr mul() {
        Expr a = app();
        while (isSym("*")) {
            Span sp = peek().span;
            ++pos_;
            a = eOp(Op::Mul, a, app(), sp);
        }
        return a;
    }
    bool atomStart() const {
        const Token& t = peek();
        if (t.kind == T::Int) return true;
        if (t.kind == T::Ident) return t.text == "true" || t.text == "false" || !isKeyword(t.text);
        return isSym("(");
    }
    Expr app() {
        Span sp = peek().span;
        Expr f = atom();
        while (atomStart()) f = eApp(f, atom(), sp);
        return f;
    }
    Expr atom() {
        const Token& t = peek();
        Span sp = t.span;
        if (t.kind == T::Int) {
            ++pos_;
            return eInt(t.num, sp);
        }
        if (isKw("true")) return ++pos_, eBool(true, sp);
        if (isKw("false")) return ++pos_, eBool(false, sp);
        if (t.kind == T::Ident && !isKeyword(t.text)) {
            ++pos_;
            return eVar(t.text, sp);
        }
        if (acceptSym("(")) {
            if (acceptSym(")")) return eConst(Const::unit(), sp);
            if (isSym("-") && peek(1).kind == T::Int && isSym(")", 2)) {
                long long v = peek(1).num;
                pos_ += 3;
                return eInt(-v, sp);
            }
            Expr e = expr();
            if (acceptSym(":")) {
                Type ty = type();
                expectSym(")");
                return eAscribe(e, ty, sp);
            }
            expectSym(")");
            return e;
        }
        fail("expected an expression");
    }

    Program program() {
        Program p;
        for (;;) {
            while (acceptSym(";;")) {
            }
            if (atEnd()) break;
            if (isKw("let")) {
                size_t m = mark();
                Decl d = letHeader();
                if (isKw("in")) {
                    reset(m);
                    p.body = expr();
                    while (acceptSym(";;")) {
                    }
                    expectEnd();
                    break;
                }
                p.decls.push_back(d);
                continue;
            }
            p.body = expr();
            while (acceptSym(";;")) {
            }
            expectEnd();
            break;
        }
        p.notes = notes;
        return p;
    }

    // ---- lambda-DTI ----
    Term term() {
        if (isKw("fun")) {
            ++pos_;
            expectSym("(");
            std::string x = ident();
            expectSym(":");
            Type t = type();
            expectSym(")");
            expectSym("->");
            return mkAbs(x, t, term());
        }
        if (isKw("let")) {
            ++pos_;
            std::string x = ident();
            expectSym("=");
            std::vector<std::string> tvs;
            if (acceptSym("/\\")) {
                while (peek().kind == T::TyVar) tvs.push_back(toks_[pos_++].text);
                expectSym(".");
            }
            Term w = term();
            expectKw("in");
            Term body = term();
            return mkLet(x, tvs, w, body);
        }
        if (isKw("if")) {
            ++pos_;
            Term c = term();
            expectKw("then");
            Term t = term();
            expectKw("else");
            Term e = term();
            return mkIf(c, t, e);
        }
        if (isKw("fix")) {
            ++pos_;
            std::string f = ident();
            expectSym("(");
            std::string x = ident();
            expectSym(":");
            Type a = type();
            expectSym(")");
            expectSym(":");
            Type b = type();
            expectSym("=");
            return mkFix(f, x, a, b, term());
        }
        Term f = tcmp();
        if (acceptSym(":")) {
            Type from = type();
            do {
                expectSym("=>");
                Label l = label();
                Type to = type();
                f = mkCast(f, from, to, l);
                from = to;
            } while (isSym("=>"));
        }
        return f;
    }
    Label label() {
        expectSym("[");
        Label l = labelBody();
        expectSym("]");
        return l;
    }
    Label labelBody() {
        if (peek().kind != T::Int) fail("expected label number");
        Label l;
        l.id = static_cast<int>(toks_[pos_++].num);
        if (acceptSym("+")) {
            l.neg = false;
        } else if (acceptSym("-")) {
            l.neg = true;
        } else {
            fail("expected label polarity '+' or '-'");
        }
        return l;
    }
    Term tcmp() {
        Term a = tadd();
        if (isSym("=") || isSym("<")) {
            Op op = peek().text == "=" ? Op::Eq : Op::Lt;
            ++pos_;
            return mkOp(op, a, tadd());
        }
        return a;
    }
    Term tadd() {
        Term a = tmul();
        while (isSym("+") || isSym("-")) {
            Op op = peek().text == "+" ? Op::Add : Op::Sub;
            ++pos_;
            a = mkOp(op, a, tmul());
        }
        return a;
    }
    Term tmul() {
        Term a = tapp();
        while (isSym("*")) {
            ++pos_;
            a = mkOp(Op::Mul, a, tapp());
        }
        return a;
    }
    bool tatomStart() const { return atomStart() || isKw("blame"); }
    Term tapp() {
        Term f = tatom();
        while (tatomStart()) f = mkApp(f, tatom());
        return f;
    }
    Term tatom() {
        const Token& t = peek();
        if (t.kind == T::Int) return ++pos_, mkInt(t.num);
        if (isKw("true")) return ++pos_, mkBool(true);
        if (isKw("false")) return ++pos_, mkBool(false);
        if (isKw("blame")) {
            ++pos_;
            return mkBlame(labelBody());
        }
        if (t.kind == T::Ident && !isKeyword(t.text)) {
            ++pos_;
            std::vector<Type> targs;
            if (acceptSym("[")) {
                do {
                    if (isKw("nu")) {
                        ++pos_;
                        targs.push_back(nullptr);
                    } else {
                        targs.push_back(type());
                    }
                } while (acceptSym(","));
                expectSym("]");
            }
            return mkVar(t.text, targs);
        }
        if (acceptSym("(")) {
            if (acceptSym(")")) return mkConst(Const::unit());
            if (isSym("-") && peek(1).kind == T::Int && isSym(")", 2)) {
                long long v = peek(1).num;
                pos_ += 3;
                return mkInt(-v);
            }
            Term f = term();
            expectSym(")");
            return f;
        }
        fail("expected a term");
    }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    ParseOptions opts_;
};

// ---- printing ----

enum Level { LTop = 0, LCast = 1, LCmp = 2, LAdd = 3, LMul = 4, LApp = 5, LAtom = 6 };

int opLevel(Op op) {
    switch (op) {
        case Op::Eq:
        case Op::Lt: return LCmp;
        case Op::Add:
        case Op::Sub: return LAdd;
        case Op::Mul: return LMul;
    }
    return LCmp;
}

std::string constText(const Const& c) {
    if (c.kind == Base::Int && c.i < 0) return "(" + c.show() + ")";
    return c.show();
}

std::string paren(const std::string& s, bool p) { return p ? "(" + s + ")" : s; }

std::string showE(const Expr& e, int ctx);

std::string paramText(const std::string& x, const Type& t) {
    if (!t) return x;
    return "(" + x + " : " + show(t) + ")";
}

std::string showE(const Expr& e, int ctx) {
    switch (e->kind) {
        case EK::Var: return e->x;
        case EK::Const: return constText(e->c);
        case EK::Ascribe: return "(" + showE(e->a, LTop) + " : " + show(e->ty) + ")";
        case EK::Op: {
            int lv = opLevel(e->op);
            int rl = lv == LCmp ? LAdd : lv + 1;
            int ll = lv == LCmp ? LAdd : lv;
            return paren(showE(e->a, ll) + " " + opSig(e->op).name + " " + showE(e->b, rl), ctx > lv);
        }
        case EK::App: return paren(showE(e->a, LApp) + " " + showE(e->b, LAtom), ctx > LApp);
        case EK::Abs: return paren("fun " + paramText(e->x, e->ty) + " -> " + showE(e->a, LTop), ctx > LTop);
        case EK::Let:
            return paren("let " + e->x + " = " + showE(e->a, LTop) + " in " + showE(e->b, LTop), ctx > LTop);
        case EK::LetRec:
            return paren("let rec " + e->x + " " + paramText(e->y, e->ty) + " = " + showE(e->a, LTop) + " in " +
                             showE(e->b, LTop),
                         ctx > LTop);
        case EK::If:
            return paren("if " + showE(e->a, LTop) + " then " + showE(e->b, LTop) + " else " + showE(e->d, LTop),
                         ctx > LTop);
    }
    return "?";
}

std::string showF(const Term& f, int ctx, bool labels);

std::string arrowText(const Label& l, bool labels) { return labels ? " =>[" + l.show() + "] " : " => "; }

std::string showF(const Term& f, int ctx, bool labels) {
    switch (f->kind) {
        case FK::Var: {
            if (f->targs.empty()) return f->x;
            std::string s = f->x + "[";
            for (size_t i = 0; i < f->targs.size(); ++i) {
                if (i) s += ", ";
                s += f->targs[i] ? show(f->targs[i]) : "nu";
            }
            return s + "]";
        }
        case FK::Const: return constText(f->c);
        case FK::Blame: return paren("blame " + f->lbl.show(), ctx > LAtom);
        case FK::Op: {
            int lv = opLevel(f->op);
            int rl = lv == LCmp ? LAdd : lv + 1;
            int ll = lv == LCmp ? LAdd : lv;
            return paren(showF(f->a, ll, labels) + " " + opSig(f->op).name + " " + showF(f->b, rl, labels), ctx > lv);
        }
        case FK::App: return paren(showF(f->a, LApp, labels) + " " + showF(f->b, LAtom, labels), ctx > LApp);
        case FK::Abs:
            return paren("fun (" + f->x + " : " + show(f->t1) + ") -> " + showF(f->a, LTop, labels), ctx > LTop);
        case FK::Fix:
            return paren("fix " + f->x + " (" + f->y + " : " + show(f->t1) + ") : " + show(f->t2) + " = " +
                             showF(f->a, LTop, labels),
                         ctx > LTop);
        case FK::Let: {
            std::string tv;
            if (!f->tvars.empty()) {
                tv = "/\\";
                for (auto& b : f->tvars) tv += " '" + b;
                tv += ". ";
            }
            return paren("let " + f->x + " = " + tv + showF(f->a, LTop, labels) + " in " + showF(f->b, LTop, labels),
                         ctx > LTop);
        }
        case FK::If:
            return paren("if " + showF(f->a, LTop, labels) + " then " + showF(f->b, LTop, labels) + " else " +
                             showF(f->d, LTop, labels),
                         ctx > LTop);
        case FK::Cast: {
            std::vector<const TermNode*> chain;
            const TermNode* cur = f.get();
            chain.push_back(cur);
            while (cur->a->kind == FK::Cast && typeEq(cur->a->t2, cur->t1)) {
                cur = cur->a.get();
                chain.push_back(cur);
            }
            std::string s = showF(cur->a, LCmp, labels) + " : " + show(cur->t1);
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) s += arrowText((*it)->lbl, labels) + show((*it)->t2);
            return paren(s, ctx > LCast);
        }
    }
    return "?";
}

}  // namespace

Type parseType(const std::string& src) {
    Parser p(src, {});
    Type t = p.type();
    p.expectEnd();
    return t;
}

Expr parseExpr(const std::string& src, std::vector<std::string>* notes, ParseOptions opts) {
    Parser p(src, opts);
    Expr e = p.expr();
    p.expectEnd();
    if (notes) notes->insert(notes->end(), p.notes.begin(), p.notes.end());
    return e;
}

Program parseProgram(const std::string& src, ParseOptions opts) {
    Parser p(src, opts);
    return p.program();
}

Expr declToExpr(const Decl& d, Expr body, std::vector<std::string>* notes) {
    if (d.rec) return eLetRec(d.name, d.param, d.paramAnn, d.rhs, body, d.span);
    if (isSyntacticValue(d.rhs)) return eLet(d.name, d.rhs, body, d.span);
    if (notes)
        notes->push_back("note: line " + std::to_string(d.span.line) + ": right-hand side of `let " + d.name +
                         "` is not a value; it is bound monomorphically");
    return eApp(eAbs(d.name, nullptr, body, d.span), d.rhs, d.span);
}

Expr programToExpr(const Program& p, std::vector<std::string>* notes) {
    if (!p.body && p.decls.empty()) throw SyntaxError("empty program", {1, 1});
    Expr body = p.body ? p.body : eVar(p.decls.back().name, p.decls.back().span);
    for (auto it = p.decls.rbegin(); it != p.decls.rend(); ++it) body = declToExpr(*it, body, notes);
    return body;
}

Term parseTerm(const std::string& src) {
    Parser p(src, {});
    Term f = p.term();
    p.expectEnd();
    return f;
}

std::string printExpr(const Expr& e) { return showE(e, LTop); }

std::string printTerm(const Term& f, bool labels) { return showF(f, LTop, labels); }

}  // namespace ghm
