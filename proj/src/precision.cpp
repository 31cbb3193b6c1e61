#include "ghm/precision.hpp"

#include <map>

#include "ghm/cast.hpp"

namespace ghm {

bool typePrec(const Type& u, const Type& u2, const Subst& s) {
    switch (u2->kind) {
        case TK::Dyn: return true;
        case TK::Var: return typeEq(u, s.has(u2->name) ? s.lookup(u2->name) : u2);
        case TK::Base: return u->kind == TK::Base && u->base == u2->base;
        case TK::Arrow:
            return u->kind == TK::Arrow && typePrec(u->dom, u2->dom, s) && typePrec(u->cod, u2->cod, s);
    }
    return false;
}

namespace {

// Precision with instantiable variables. Bindings (including X := X) accumulate in m.
struct FlexPrec {
    std::map<std::string, Type> m;
    std::set<std::string> flex;
    bool allFlex = false;

    bool isFlex(const std::string& x) const { return allFlex || flex.count(x); }

    bool rel(const Type& u, const Type& u2) {
        if (!u || !u2) return true;
        switch (u2->kind) {
            case TK::Dyn: return true;
            case TK::Var: {
                auto it = m.find(u2->name);
                if (it != m.end()) return typeEq(u, it->second);
                if (!isFlex(u2->name)) return typeEq(u, u2);
                if (!isStatic(u)) return false;
                m[u2->name] = u;
                return true;
            }
            case TK::Base: return u->kind == TK::Base && u->base == u2->base;
            case TK::Arrow: return u->kind == TK::Arrow && rel(u->dom, u2->dom) && rel(u->cod, u2->cod);
        }
        return false;
    }

    Subst result() const {
        Subst s;
        for (auto& [x, t] : m)
            if (!(t->kind == TK::Var && t->name == x)) s.bind(x, t);
        return s;
    }
};

FlexPrec seeded(const Subst& s) {
    FlexPrec fp;
    for (auto& [x, t] : s.bindings()) fp.m[x] = t;
    return fp;
}

}  // namespace

std::optional<Subst> inferPrecSubst(const Type& u, const Type& u2) {
    FlexPrec fp;
    fp.allFlex = true;
    if (!fp.rel(u, u2)) return std::nullopt;
    return fp.result();
}

// ---- ITGL term precision ----

namespace {

struct ItglPrec {
    FlexPrec tp;
    std::vector<std::string> rules;

    Type annot(const Expr& e) const { return e->implicit ? nullptr : e->ty; }

    bool absAnn(const Type& a, const Type& b) {
        if (!a && !b) return rules.push_back("IP_AbsI"), true;
        if (!a) {
            rules.push_back("IP_AbsIE");
            return b->kind == TK::Dyn;
        }
        if (!b) {
            rules.push_back("IP_AbsEI");
            return isStatic(a);
        }
        rules.push_back("IP_AbsE");
        return tp.rel(a, b);
    }

    bool go(const Expr& e, const Expr& e2) {
        if (e->kind != e2->kind) return false;
        switch (e->kind) {
            case EK::Var: rules.push_back("IP_Var"); return e->x == e2->x;
            case EK::Const: rules.push_back("IP_Const"); return e->c == e2->c;
            case EK::Op:
                rules.push_back("IP_Op");
                return e->op == e2->op && go(e->a, e2->a) && go(e->b, e2->b);
            case EK::Abs: return e->x == e2->x && absAnn(annot(e), annot(e2)) && go(e->a, e2->a);
            case EK::App: rules.push_back("IP_App"); return go(e->a, e2->a) && go(e->b, e2->b);
            case EK::Let:
                rules.push_back("IP_LetP");
                return e->x == e2->x && go(e->a, e2->a) && go(e->b, e2->b);
            case EK::LetRec:
                rules.push_back("IP_LetRec");
                return e->x == e2->x && e->y == e2->y && absAnn(annot(e), annot(e2)) && go(e->a, e2->a) &&
                       go(e->b, e2->b);
            case EK::If:
                rules.push_back("IP_If");
                return go(e->a, e2->a) && go(e->b, e2->b) && go(e->d, e2->d);
            case EK::Ascribe:
                rules.push_back("IP_Ascribe");
                return tp.rel(e->ty, e2->ty) && go(e->a, e2->a);
        }
        return false;
    }
};

}  // namespace

bool termPrecITGL(const Expr& e, const Expr& e2, const Subst& s) {
    ItglPrec p;
    p.tp = seeded(s);
    return p.go(e, e2);
}

std::optional<PrecisionWitness> inferTermPrecITGL(const Expr& e, const Expr& e2) {
    ItglPrec p;
    p.tp.allFlex = true;
    if (!p.go(e, e2)) return std::nullopt;
    return PrecisionWitness{p.tp.result(), p.rules};
}

// ---- lambda-DTI term precision ----

namespace {

struct DtiPrec {
    FlexPrec tp;
    std::vector<std::string> rules;
    long budget;

    static Type typeOf(const Env& env, const Term& f) { return typecheckDTI(env, f); }

    // try an alternative; roll back the state when it fails
    template <class F>
    bool attempt(F&& fn) {
        FlexPrec saved = tp;
        size_t n = rules.size();
        if (fn()) return true;
        tp = std::move(saved);
        rules.resize(n);
        return false;
    }

    bool go(const Env& env, const Term& f, const Env& env2, const Term& f2) {
        if (--budget < 0) throw PrecisionBudgetExceeded("precision search budget exhausted");
        if (f->kind == FK::Blame) {
            rules.push_back("P_Blame");
            typeOf(env2, f2);
            return true;
        }
        if (f->kind == FK::Cast || f2->kind == FK::Cast) {
            if (f->kind == FK::Cast && f2->kind == FK::Cast && attempt([&] {
                    rules.push_back("P_Cast");
                    return tp.rel(f->t1, f2->t1) && tp.rel(f->t2, f2->t2) && go(env, f->a, env2, f2->a);
                }))
                return true;
            if (f->kind == FK::Cast && attempt([&] {
                    rules.push_back("P_CastL");
                    Type u2 = typeOf(env2, f2);
                    return tp.rel(f->t1, u2) && tp.rel(f->t2, u2) && go(env, f->a, env2, f2);
                }))
                return true;
            if (f2->kind == FK::Cast && attempt([&] {
                    rules.push_back("P_CastR");
                    Type u = typeOf(env, f);
                    return tp.rel(u, f2->t1) && tp.rel(u, f2->t2) && go(env, f, env2, f2->a);
                }))
                return true;
            return false;
        }
        if (f->kind != f2->kind) return false;
        switch (f->kind) {
            case FK::Var:
                rules.push_back("P_VarP");
                return f->x == f2->x && tp.rel(typeOf(env, f), typeOf(env2, f2));
            case FK::Const: rules.push_back("P_Const"); return f->c == f2->c;
            case FK::Op:
                rules.push_back("P_Op");
                return f->op == f2->op && go(env, f->a, env2, f2->a) && go(env, f->b, env2, f2->b);
            case FK::Abs: {
                rules.push_back("P_Abs");
                if (f->x != f2->x || !tp.rel(f->t1, f2->t1)) return false;
                Env e1 = env, e2 = env2;
                e1[f->x] = Scheme{{}, f->t1};
                e2[f2->x] = Scheme{{}, f2->t1};
                return go(e1, f->a, e2, f2->a);
            }
            case FK::Fix: {
                rules.push_back("P_Fix");
                if (f->x != f2->x || f->y != f2->y || !tp.rel(f->t1, f2->t1) || !tp.rel(f->t2, f2->t2)) return false;
                Env e1 = env, e2 = env2;
                e1[f->x] = Scheme{{}, arrow(f->t1, f->t2)};
                e1[f->y] = Scheme{{}, f->t1};
                e2[f2->x] = Scheme{{}, arrow(f2->t1, f2->t2)};
                e2[f2->y] = Scheme{{}, f2->t1};
                return go(e1, f->a, e2, f2->a);
            }
            case FK::App:
                rules.push_back("P_App");
                return go(env, f->a, env2, f2->a) && go(env, f->b, env2, f2->b);
            case FK::If:
                rules.push_back("P_If");
                return go(env, f->a, env2, f2->a) && go(env, f->b, env2, f2->b) && go(env, f->d, env2, f2->d);
            case FK::Let: return letP(env, f, env2, f2);
            case FK::Cast:
            case FK::Blame: break;
        }
        return false;
    }

    bool letP(const Env& env, Term f, const Env& env2, const Term& f2) {
        rules.push_back("P_LetP");
        if (f->x != f2->x) return false;
        // keep the left binders out of the range of the substitution
        std::set<std::string> rangeNames;
        for (auto& [x, t] : tp.m) ftvInto(t, rangeNames);
        for (auto& b : f->tvars)
            if (rangeNames.count(b)) {
                auto n = std::make_shared<TermNode>(*f);
                n->b = nullptr;
                Term renamed = renameBinders(Term(n), rangeNames);
                auto m = std::make_shared<TermNode>(*renamed);
                m->b = f->b;
                f = m;
                break;
            }
        // the right binders are instantiable inside the bound value only
        std::map<std::string, Type> hidden;
        std::set<std::string> addedFlex;
        for (auto& b : f2->tvars) {
            auto it = tp.m.find(b);
            if (it != tp.m.end()) {
                hidden[b] = it->second;
                tp.m.erase(it);
            }
            if (!tp.flex.count(b)) addedFlex.insert(b);
            tp.flex.insert(b);
        }
        bool ok = go(env, f->a, env2, f2->a);
        for (auto& b : f2->tvars) tp.m.erase(b);
        for (auto& [b, t] : hidden) tp.m[b] = t;
        for (auto& b : addedFlex) tp.flex.erase(b);
        if (!ok) return false;
        Type u1 = typeOf(env, f->a), u1r = typeOf(env2, f2->a);
        Env e1 = env, e2 = env2;
        e1[f->x] = Scheme{f->tvars, u1};
        e2[f2->x] = Scheme{f2->tvars, u1r};
        return go(e1, f->b, e2, f2->b);
    }
};

}  // namespace

bool termPrecDTI(const Env& env, const Term& f, const Type& u, const Subst& s, const Type& u2, const Term& f2,
                 const Env& env2) {
    try {
        DtiPrec p{seeded(s), {}, 200000};
        if (!p.tp.rel(u, u2)) return false;
        if (!p.go(env, f, env2, f2)) return false;
        Type uf = typecheckDTI(env, f), uf2 = typecheckDTI(env2, f2);
        if (uf && u && !typeEq(uf, u)) return false;
        if (uf2 && u2 && !typeEq(uf2, u2)) return false;
        return true;
    } catch (const IllTyped&) {
        return false;
    }
}

std::optional<PrecisionWitness> inferTermPrecDTI(const Env& env, const Term& f, const Term& f2, const Env& env2,
                                                 const Subst& fixed, long budget) {
    try {
        DtiPrec p{seeded(fixed), {}, budget};
        p.tp.allFlex = true;
        if (!p.go(env, f, env2, f2)) return std::nullopt;
        if (!p.tp.rel(typecheckDTI(env, f), typecheckDTI(env2, f2))) return std::nullopt;
        return PrecisionWitness{p.tp.result(), p.rules};
    } catch (const IllTyped&) {
        return std::nullopt;
    }
}

}  // namespace ghm
