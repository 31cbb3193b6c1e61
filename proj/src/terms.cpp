#include "ghm/terms.hpp"


#include <stdexcept>
#include <unordered_map>

namespace ghm {

bool Const::operator==(const Const& o) const {
    if (kind != o.kind) return false;
    if (kind == Base::Int) return i == o.i;
    if (kind == Base::Bool) return b == o.b;
    return true;
}

std::string Const::show() const {
    switch (kind) {
        case Base::Int: return std::to_string(i);
        case Base::Bool: return b ? "true" : "false";
        case Base::Unit: return "()";
    }
    return "?";
}

Type constType(const Const& c) { return tbase(c.kind); }

const OpSig& opSig(Op op) {
    static const OpSig sigs[] = {
        {"+", Base::Int, Base::Int, Base::Int},
        {"-", Base::Int, Base::Int, Base::Int},
        {"*", Base::Int, Base::Int, Base::Int},
        {"=", Base::Int, Base::Int, Base::Bool},
        {"<", Base::Int, Base::Int, Base::Bool},
    };
    return sigs[static_cast<int>(op)];
}

Const applyOp(Op op, const Const& a, const Const& b) {
    if (a.kind != Base::Int || b.kind != Base::Int) throw std::logic_error("operator applied to non-integers");
    // wrap around instead of overflowing
    auto ua = static_cast<unsigned long long>(a.i), ub = static_cast<unsigned long long>(b.i);
    switch (op) {
        case Op::Add: return Const::ofInt(static_cast<long long>(ua + ub));
        case Op::Sub: return Const::ofInt(static_cast<long long>(ua - ub));
        case Op::Mul: return Const::ofInt(static_cast<long long>(ua * ub));
        case Op::Eq: return Const::ofBool(a.i == b.i);
        case Op::Lt: return Const::ofBool(a.i < b.i);
    }
    return Const::unit();
}

// ---- constructors ----

namespace {
std::shared_ptr<TermNode> node(FK k) {
    auto n = std::make_shared<TermNode>();
    n->kind = k;
    return n;
}
}  // namespace

Term mkVar(const std::string& x, std::vector<Type> targs) {
    auto n = node(FK::Var);
    n->x = x;
    n->targs = std::move(targs);
    return n;
}

Term mkConst(const Const& c) {
    auto n = node(FK::Const);
    n->c = c;
    return n;
}

Term mkInt(long long v) { return mkConst(Const::ofInt(v)); }
Term mkBool(bool v) { return mkConst(Const::ofBool(v)); }

Term mkOp(Op op, Term a, Term b) {
    auto n = node(FK::Op);
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Term mkAbs(const std::string& x, Type t, Term body) {
    auto n = node(FK::Abs);
    n->x = x;
    n->t1 = std::move(t);
    n->a = std::move(body);
    return n;
}

Term mkApp(Term f, Term a) {
    auto n = node(FK::App);
    n->a = std::move(f);
    n->b = std::move(a);
    return n;
}

Term mkCast(Term f, Type from, Type to, Label l) {
    auto n = node(FK::Cast);
    n->a = std::move(f);
    n->t1 = std::move(from);
    n->t2 = std::move(to);
    n->lbl = l;
    return n;
}

Term mkBlame(Label l) {
    auto n = node(FK::Blame);
    n->lbl = l;
    return n;
}

Term mkLet(const std::string& x, std::vector<std::string> tvars, Term w, Term body) {
    auto n = node(FK::Let);
    n->x = x;
    n->tvars = std::move(tvars);
    n->a = std::move(w);
    n->b = std::move(body);
    return n;
}

Term mkIf(Term c, Term t, Term e) {
    auto n = node(FK::If);
    n->a = std::move(c);
    n->b = std::move(t);
    n->d = std::move(e);
    return n;
}

Term mkFix(const std::string& f, const std::string& x, Type dom, Type cod, Term body) {
    auto n = node(FK::Fix);
    n->x = f;
    n->y = x;
    n->t1 = std::move(dom);
    n->t2 = std::move(cod);
    n->a = std::move(body);
    return n;
}

bool isValue(const Term& f) {
    switch (f->kind) {
        case FK::Const:
        case FK::Abs:
        case FK::Fix: return true;
        case FK::Cast: {
            if (!isValue(f->a)) return false;
            if (f->t1->kind == TK::Arrow && f->t2->kind == TK::Arrow) return true;
            return isGround(f->t1) && f->t2->kind == TK::Dyn;
        }
        default: return false;
    }
}

static bool optTypeEq(const Type& a, const Type& b) {
    if (!a || !b) return !a && !b;
    return typeEq(a, b);
}

bool termEq(const Term& a, const Term& b, bool withLabels) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case FK::Var:
            if (a->x != b->x || a->targs.size() != b->targs.size()) return false;
            for (size_t i = 0; i < a->targs.size(); ++i)
                if (!optTypeEq(a->targs[i], b->targs[i])) return false;
            return true;
        case FK::Const: return a->c == b->c;
        case FK::Op: return a->op == b->op && termEq(a->a, b->a, withLabels) && termEq(a->b, b->b, withLabels);
        case FK::Abs: return a->x == b->x && typeEq(a->t1, b->t1) && termEq(a->a, b->a, withLabels);
        case FK::App: return termEq(a->a, b->a, withLabels) && termEq(a->b, b->b, withLabels);
        case FK::Cast:
            if (withLabels && !(a->lbl == b->lbl)) return false;
            return typeEq(a->t1, b->t1) && typeEq(a->t2, b->t2) && termEq(a->a, b->a, withLabels);
        case FK::Blame: return !withLabels || a->lbl == b->lbl;
        case FK::Let:
            return a->x == b->x && a->tvars == b->tvars && termEq(a->a, b->a, withLabels) &&
                   termEq(a->b, b->b, withLabels);
        case FK::If:
            return termEq(a->a, b->a, withLabels) && termEq(a->b, b->b, withLabels) &&
                   termEq(a->d, b->d, withLabels);
        case FK::Fix:
            return a->x == b->x && a->y == b->y && typeEq(a->t1, b->t1) && typeEq(a->t2, b->t2) &&
                   termEq(a->a, b->a, withLabels);
    }
    return false;
}

int termSize(const Term& f) {
    if (!f) return 0;
    return 1 + termSize(f->a) + termSize(f->b) + termSize(f->d);
}

bool containsNu(const Term& f) {
    if (!f) return false;
    if (f->kind == FK::Var)
        for (auto& t : f->targs)
            if (!t) return true;
    return containsNu(f->a) || containsNu(f->b) || containsNu(f->d);
}

static void ftvTerm(const Term& f, std::set<std::string>& out) {
    if (!f) return;
    switch (f->kind) {
        case FK::Var:
            for (auto& t : f->targs)
                if (t) ftvInto(t, out);
            return;
        case FK::Let: {
            std::set<std::string> inner;
            ftvTerm(f->a, inner);
            for (auto& b : f->tvars) inner.erase(b);
            out.insert(inner.begin(), inner.end());
            ftvTerm(f->b, out);
            return;
        }
        default:
            if (f->t1) ftvInto(f->t1, out);
            if (f->t2) ftvInto(f->t2, out);
            ftvTerm(f->a, out);
            ftvTerm(f->b, out);
            ftvTerm(f->d, out);
    }
}

std::set<std::string> ftv(const Term& f) {
    std::set<std::string> s;
    ftvTerm(f, s);
    return s;
}

void allTyNames(const Term& f, std::set<std::string>& out) {
    if (!f) return;
    for (auto& t : f->targs)
        if (t) ftvInto(t, out);
    for (auto& b : f->tvars) out.insert(b);
    if (f->t1) ftvInto(f->t1, out);
    if (f->t2) ftvInto(f->t2, out);
    allTyNames(f->a, out);
    allTyNames(f->b, out);
    allTyNames(f->d, out);
}

// ---- substitution ----

static Term withChildren(const Term& f, Term a, Term b, Term d) {
    if (a == f->a && b == f->b && d == f->d) return f;
    auto n = std::make_shared<TermNode>(*f);
    n->a = std::move(a);
    n->b = std::move(b);
    n->d = std::move(d);
    return n;
}

// Rename the binders of a let node that are in clash, inside its value.
static Term renameLet(const Term& let, const std::set<std::string>& clash) {
    bool any = false;
    for (auto& b : let->tvars)
        if (clash.count(b)) any = true;
    if (!any) return let;
    std::set<std::string> avoid = clash;
    allTyNames(let->a, avoid);
    for (auto& b : let->tvars) avoid.insert(b);
    Subst ren;
    std::vector<std::string> nb;
    for (auto& b : let->tvars) {
        if (clash.count(b)) {
            std::string n = freshAway(b, avoid);
            avoid.insert(n);
            ren.bind(b, tvar(n));
            nb.push_back(n);
        } else {
            nb.push_back(b);
        }
    }
    auto n = std::make_shared<TermNode>(*let);
    n->tvars = nb;
    n->a = applySubst(ren, let->a);
    return n;
}

Term renameBinders(const Term& f, const std::set<std::string>& clash) {
    if (!f) return f;
    Term g = f->kind == FK::Let ? renameLet(f, clash) : f;
    return withChildren(g, renameBinders(g->a, clash), renameBinders(g->b, clash), renameBinders(g->d, clash));
}

namespace {

// Applies a substitution to the types of a term, memoizing on shared type nodes.
struct TypeApplier {
    const Subst& s;
    std::unordered_map<const TypeNode*, Type> memo;

    Type operator()(const Type& t) {
        if (!t) return t;
        switch (t->kind) {
            case TK::Var: return s.has(t->name) ? s.lookup(t->name) : t;
            case TK::Arrow: {
                auto it = memo.find(t.get());
                if (it != memo.end()) return it->second;
                Type d = (*this)(t->dom), c = (*this)(t->cod);
                Type r = (d == t->dom && c == t->cod) ? t : arrow(d, c);
                memo.emplace(t.get(), r);
                return r;
            }
            default: return t;
        }
    }
};

Term applyWith(TypeApplier& ap, const Term& f) {
    if (!f) return f;
    switch (f->kind) {
        case FK::Var: {
            if (f->targs.empty()) return f;
            auto n = std::make_shared<TermNode>(*f);
            for (auto& t : n->targs)
                if (t) t = ap(t);
            return n;
        }
        case FK::Const:
        case FK::Blame: return f;
        case FK::Let: {
            Subst inner = ap.s;
            for (auto& b : f->tvars) inner.erase(b);
            Term g = renameLet(f, inner.rangeFtv());
            TypeApplier innerAp{inner, {}};
            Term w = applyWith(innerAp, g->a);
            Term body = applyWith(ap, g->b);
            return withChildren(g, w, body, nullptr);
        }
        default: {
            Term a = applyWith(ap, f->a), b = applyWith(ap, f->b), d = applyWith(ap, f->d);
            Type t1 = ap(f->t1);
            Type t2 = ap(f->t2);
            if (a == f->a && b == f->b && d == f->d && t1 == f->t1 && t2 == f->t2) return f;
            auto n = std::make_shared<TermNode>(*f);
            n->a = a;
            n->b = b;
            n->d = d;
            n->t1 = t1;
            n->t2 = t2;
            return n;
        }
    }
}

}  // namespace

Term applySubst(const Subst& s, const Term& f) {
    if (s.empty() || !f) return f;
    TypeApplier ap{s, {}};
    return applyWith(ap, f);
}

static Term substMono(const Term& f, const std::string& x, const Term& w, const std::set<std::string>& wftv) {
    if (!f) return f;
    switch (f->kind) {
        case FK::Var: return f->x == x ? w : f;
        case FK::Const:
        case FK::Blame: return f;
        case FK::Abs:
            if (f->x == x) return f;
            return withChildren(f, substMono(f->a, x, w, wftv), nullptr, nullptr);
        case FK::Fix:
            if (f->x == x || f->y == x) return f;
            return withChildren(f, substMono(f->a, x, w, wftv), nullptr, nullptr);
        case FK::Let: {
            Term g = renameLet(f, wftv);
            Term v = substMono(g->a, x, w, wftv);
            Term body = g->x == x ? g->b : substMono(g->b, x, w, wftv);
            return withChildren(g, v, body, nullptr);
        }
        default:
            return withChildren(f, substMono(f->a, x, w, wftv), substMono(f->b, x, w, wftv),
                                substMono(f->d, x, w, wftv));
    }
}

Term substTerm(const Term& f, const std::string& x, const Term& w) { return substMono(f, x, w, ftv(w)); }

namespace {
struct PolySubst {
    const std::string& x;
    const std::vector<std::string>& binders;
    const Term& w;
    Fresh& fresh;
    std::set<std::string> clash;  // ftv(w) minus binders

    Term go(const Term& f) {
        if (!f) return f;
        switch (f->kind) {
            case FK::Var: {
                if (f->x != x) return f;
                if (f->targs.size() != binders.size())
                    throw std::logic_error("type argument arity mismatch at " + x);
                Subst s;
                for (size_t i = 0; i < binders.size(); ++i)
                    s.bind(binders[i], f->targs[i] ? f->targs[i] : tvar(fresh()));
                return applySubst(s, w);
            }
            case FK::Const:
            case FK::Blame: return f;
            case FK::Abs:
                if (f->x == x) return f;
                return withChildren(f, go(f->a), nullptr, nullptr);
            case FK::Fix:
                if (f->x == x || f->y == x) return f;
                return withChildren(f, go(f->a), nullptr, nullptr);
            case FK::Let: {
                Term g = renameLet(f, clash);
                Term v = go(g->a);
                Term body = g->x == x ? g->b : go(g->b);
                return withChildren(g, v, body, nullptr);
            }
            default: return withChildren(f, go(f->a), go(f->b), go(f->d));
        }
    }
};
}  // namespace

Term substPoly(const Term& f, const std::string& x, const std::vector<std::string>& binders, const Term& w,
               Fresh& fresh) {
    PolySubst ps{x, binders, w, fresh, ftv(w)};
    for (auto& b : binders) ps.clash.erase(b);
    return ps.go(f);
}

// ---- ITGL ----

namespace {
std::shared_ptr<ExprNode> enode(EK k, Span sp) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->span = sp;
    return n;
}
}  // namespace

Expr eVar(const std::string& x, Span sp) {
    auto n = enode(EK::Var, sp);
    n->x = x;
    return n;
}

Expr eConst(const Const& c, Span sp) {
    auto n = enode(EK::Const, sp);
    n->c = c;
    return n;
}

Expr eInt(long long v, Span sp) { return eConst(Const::ofInt(v), sp); }
Expr eBool(bool v, Span sp) { return eConst(Const::ofBool(v), sp); }

Expr eOp(Op op, Expr a, Expr b, Span sp) {
    auto n = enode(EK::Op, sp);
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Expr eAbs(const std::string& x, Type ann, Expr body, Span sp) {
    auto n = enode(EK::Abs, sp);
    n->x = x;
    n->ty = std::move(ann);
    n->a = std::move(body);
    return n;
}

Expr eApp(Expr f, Expr a, Span sp) {
    auto n = enode(EK::App, sp);
    n->a = std::move(f);
    n->b = std::move(a);
    return n;
}

Expr eLet(const std::string& x, Expr v, Expr body, Span sp) {
    auto n = enode(EK::Let, sp);
    n->x = x;
    n->a = std::move(v);
    n->b = std::move(body);
    return n;
}

Expr eLetRec(const std::string& f, const std::string& x, Type ann, Expr body, Expr in, Span sp) {
    auto n = enode(EK::LetRec, sp);
    n->x = f;
    n->y = x;
    n->ty = std::move(ann);
    n->a = std::move(body);
    n->b = std::move(in);
    return n;
}

Expr eIf(Expr c, Expr t, Expr e, Span sp) {
    auto n = enode(EK::If, sp);
    n->a = std::move(c);
    n->b = std::move(t);
    n->d = std::move(e);
    return n;
}

Expr eAscribe(Expr e, Type t, Span sp) {
    auto n = enode(EK::Ascribe, sp);
    n->a = std::move(e);
    n->ty = std::move(t);
    return n;
}

bool isSyntacticValue(const Expr& e) { return e->kind == EK::Const || e->kind == EK::Abs; }

bool exprEq(const Expr& a, const Expr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case EK::Var: return a->x == b->x;
        case EK::Const: return a->c == b->c;
        case EK::Op: return a->op == b->op && exprEq(a->a, b->a) && exprEq(a->b, b->b);
        case EK::Abs: return a->x == b->x && optTypeEq(a->ty, b->ty) && exprEq(a->a, b->a);
        case EK::App: return exprEq(a->a, b->a) && exprEq(a->b, b->b);
        case EK::Let: return a->x == b->x && exprEq(a->a, b->a) && exprEq(a->b, b->b);
        case EK::LetRec:
            return a->x == b->x && a->y == b->y && optTypeEq(a->ty, b->ty) && exprEq(a->a, b->a) &&
                   exprEq(a->b, b->b);
        case EK::If: return exprEq(a->a, b->a) && exprEq(a->b, b->b) && exprEq(a->d, b->d);
        case EK::Ascribe: return typeEq(a->ty, b->ty) && exprEq(a->a, b->a);
    }
    return false;
}

int exprSize(const Expr& e) {
    if (!e) return 0;
    return 1 + exprSize(e->a) + exprSize(e->b) + exprSize(e->d);
}

static void annotFtvInto(const Expr& e, std::set<std::string>& out) {
    if (!e) return;
    if ((e->kind == EK::Abs || e->kind == EK::LetRec || e->kind == EK::Ascribe) && e->ty && !e->implicit)
        ftvInto(e->ty, out);
    annotFtvInto(e->a, out);
    annotFtvInto(e->b, out);
    annotFtvInto(e->d, out);
}

std::set<std::string> annotFtv(const Expr& e) {
    std::set<std::string> s;
    annotFtvInto(e, s);
    return s;
}

void allTyNames(const Expr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->ty) ftvInto(e->ty, out);
    if (e->ty2) ftvInto(e->ty2, out);
    for (auto& t : e->targs)
        if (t) ftvInto(t, out);
    for (auto& b : e->tvars) out.insert(b);
    allTyNames(e->a, out);
    allTyNames(e->b, out);
    allTyNames(e->d, out);
}

Expr applySubst(const Subst& s, const Expr& e) {
    if (!e || s.empty()) return e;
    auto n = std::make_shared<ExprNode>(*e);
    if (n->ty) n->ty = s.apply(n->ty);
    if (n->ty2) n->ty2 = s.apply(n->ty2);
    for (auto& t : n->targs)
        if (t) t = s.apply(t);
    if (e->kind == EK::Let && !e->tvars.empty()) {
        Subst inner = s;
        for (auto& b : e->tvars) inner.erase(b);
        n->a = applySubst(inner, e->a);
    } else {
        n->a = applySubst(s, e->a);
    }
    n->b = applySubst(s, e->b);
    n->d = applySubst(s, e->d);
    return n;
}

Expr stripInferred(const Expr& e) {
    if (!e) return e;
    auto n = std::make_shared<ExprNode>(*e);
    if (n->implicit) {
        n->ty = nullptr;
        n->implicit = false;
    }
    n->ty2 = nullptr;
    n->targs.clear();
    n->tvars.clear();
    n->a = stripInferred(e->a);
    n->b = stripInferred(e->b);
    n->d = stripInferred(e->d);
    return n;
}

}  // namespace ghm
