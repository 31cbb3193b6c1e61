#include "ghm/cast.hpp"

#include "ghm/syntax.hpp"

namespace ghm {

Term CastInserter::cast(Term f, const Type& from, const Type& to, Span sp) {
    if (typeEq(from, to)) return f;
    if (!consistent(from, to)) throw IllTyped("cast between inconsistent types " + show(from) + " and " + show(to));
    Label l;
    l.id = next_++;
    l.span = sp;
    return mkCast(std::move(f), from, to, l);
}

CastInserter::LetResult CastInserter::translateLetValue(const Env& env, const Expr& v,
                                                        const std::vector<std::string>& generalized) {
    LetResult r;
    r.value = go(env, v, r.type);
    r.binders = generalized;
    std::set<std::string> excluded = ftv(env);
    ftvInto(r.type, excluded);
    auto ann = annotFtv(v);
    excluded.insert(ann.begin(), ann.end());
    for (auto& y : ftv(r.value))
        if (!excluded.count(y)) r.binders.push_back(y);
    return r;
}

Term CastInserter::go(const Env& env, const Expr& e, Type& ty) {
    switch (e->kind) {
        case EK::Var: {
            auto it = env.find(e->x);
            if (it == env.end()) throw IllTyped("unbound variable " + e->x);
            const Scheme& sc = it->second;
            if (e->targs.size() > sc.binders.size()) throw IllTyped("too many type arguments for " + e->x);
            Subst s;
            std::vector<Type> targs;
            for (size_t i = 0; i < sc.binders.size(); ++i) {
                if (i < e->targs.size()) {
                    s.bind(sc.binders[i], e->targs[i]);
                    targs.push_back(e->targs[i]);
                } else {
                    if (occursIn(sc.binders[i], sc.body)) throw IllTyped("nu for a binder used in the type");
                    targs.push_back(nullptr);
                }
            }
            ty = s.apply(sc.body);
            return mkVar(e->x, targs);
        }
        case EK::Const: ty = constType(e->c); return mkConst(e->c);
        case EK::Op: {
            Type t1, t2;
            Term f1 = go(env, e->a, t1);
            Term f2 = go(env, e->b, t2);
            const OpSig& sig = opSig(e->op);
            f1 = cast(f1, t1, tbase(sig.arg1), e->a->span);
            f2 = cast(f2, t2, tbase(sig.arg2), e->b->span);
            ty = tbase(sig.result);
            return mkOp(e->op, f1, f2);
        }
        case EK::Abs: {
            if (!e->ty) throw IllTyped("lambda without annotation reached cast insertion");
            Env env2 = env;
            env2[e->x] = Scheme{{}, e->ty};
            Type tb;
            Term body = go(env2, e->a, tb);
            ty = arrow(e->ty, tb);
            return mkAbs(e->x, e->ty, body);
        }
        case EK::App: {
            Type t1, t2;
            Term f1 = go(env, e->a, t1);
            Term f2 = go(env, e->b, t2);
            Type dom, cod;
            try {
                std::tie(dom, cod) = matching(t1);
            } catch (const NotMatchable& err) {
                throw IllTyped(err.what());
            }
            f1 = cast(f1, t1, arrow(dom, cod), e->span);
            f2 = cast(f2, t2, dom, e->b->span);
            ty = cod;
            return mkApp(f1, f2);
        }
        case EK::If: {
            Type tc, tt, te;
            Term fc = go(env, e->a, tc);
            Term ft = go(env, e->b, tt);
            Term fe = go(env, e->d, te);
            fc = cast(fc, tc, tbool(), e->a->span);
            fe = cast(fe, te, tt, e->d->span);
            ty = tt;
            return mkIf(fc, ft, fe);
        }
        case EK::Ascribe: {
            Type t;
            Term f = go(env, e->a, t);
            ty = e->ty;
            return cast(f, t, e->ty, e->span);
        }
        case EK::Let: {
            LetResult lr = translateLetValue(env, e->a, e->tvars);
            Env env2 = env;
            env2[e->x] = Scheme{lr.binders, lr.type};
            Term body = go(env2, e->b, ty);
            return mkLet(e->x, lr.binders, lr.value, body);
        }
        case EK::LetRec: {
            if (!e->ty || !e->ty2) throw IllTyped("recursive function without annotations");
            Type ft = arrow(e->ty, e->ty2);
            Env env1 = env;
            env1[e->x] = Scheme{{}, ft};
            env1[e->y] = Scheme{{}, e->ty};
            Type tb;
            Term body = go(env1, e->a, tb);
            body = cast(body, tb, e->ty2, e->a->span);
            Term fix = mkFix(e->x, e->y, e->ty, e->ty2, body);
            Env env2 = env;
            env2[e->x] = Scheme{{}, ft};
            Term in = go(env2, e->b, ty);
            return mkLet(e->x, {}, fix, in);
        }
    }
    throw IllTyped("unknown expression");
}

TranslationResult CastInserter::translate(const Env& env, const Expr& e) {
    TranslationResult r;
    r.term = go(env, e, r.type);
    return r;
}

TranslationResult castInsert(const Env& env, const Expr& annotated) {
    CastInserter ci;
    return ci.translate(env, annotated);
}

// ---- type checking ----

namespace {

bool fits(const Type& got, const Type& want) { return !got || typeEq(got, want); }

Type tc(const Env& env, const Term& f) {
    switch (f->kind) {
        case FK::Var: {
            auto it = env.find(f->x);
            if (it == env.end()) throw IllTyped("T_VarP: unbound variable " + f->x);
            const Scheme& sc = it->second;
            if (sc.binders.size() != f->targs.size())
                throw IllTyped("T_VarP: wrong number of type arguments in " + printTerm(f));
            Subst s;
            for (size_t i = 0; i < sc.binders.size(); ++i) {
                if (!f->targs[i]) {
                    if (occursIn(sc.binders[i], sc.body)) throw IllTyped("T_VarP: nu for a used binder in " + printTerm(f));
                } else {
                    if (!isStatic(f->targs[i])) throw IllTyped("T_VarP: non-static type argument in " + printTerm(f));
                    s.bind(sc.binders[i], f->targs[i]);
                }
            }
            return s.apply(sc.body);
        }
        case FK::Const: return constType(f->c);
        case FK::Op: {
            const OpSig& sig = opSig(f->op);
            if (!fits(tc(env, f->a), tbase(sig.arg1)) || !fits(tc(env, f->b), tbase(sig.arg2)))
                throw IllTyped("T_Op: argument type mismatch in " + printTerm(f));
            return tbase(sig.result);
        }
        case FK::Abs: {
            Env env2 = env;
            env2[f->x] = Scheme{{}, f->t1};
            Type tb = tc(env2, f->a);
            if (!tb) return nullptr;
            return arrow(f->t1, tb);
        }
        case FK::App: {
            Type t1 = tc(env, f->a);
            Type t2 = tc(env, f->b);
            if (!t1) return nullptr;
            if (t1->kind != TK::Arrow) throw IllTyped("T_App: operator is not a function in " + printTerm(f));
            if (!fits(t2, t1->dom)) throw IllTyped("T_App: argument type mismatch in " + printTerm(f));
            return t1->cod;
        }
        case FK::Cast: {
            Type t = tc(env, f->a);
            if (!fits(t, f->t1))
                throw IllTyped("T_Cast: source type " + show(f->t1) + " does not match " + show(t) + " in " +
                               printTerm(f));
            if (!consistent(f->t1, f->t2)) throw IllTyped("T_Cast: inconsistent cast in " + printTerm(f));
            return f->t2;
        }
        case FK::Blame: return nullptr;
        case FK::Let: {
            if (!isValue(f->a)) throw IllTyped("T_LetP: bound term is not a value");
            auto envF = ftv(env);
            for (auto& b : f->tvars)
                if (envF.count(b)) throw IllTyped("T_LetP: binder '" + b + " is free in the environment");
            Type tw = tc(env, f->a);
            if (!tw) throw IllTyped("T_LetP: untyped value");
            Env env2 = env;
            env2[f->x] = Scheme{f->tvars, tw};
            return tc(env2, f->b);
        }
        case FK::If: {
            if (!fits(tc(env, f->a), tbool())) throw IllTyped("T_If: condition is not bool");
            Type tt = tc(env, f->b), te = tc(env, f->d);
            if (tt && te && !typeEq(tt, te)) throw IllTyped("T_If: branch types differ");
            return tt ? tt : te;
        }
        case FK::Fix: {
            Type ft = arrow(f->t1, f->t2);
            Env env1 = env;
            env1[f->x] = Scheme{{}, ft};
            env1[f->y] = Scheme{{}, f->t1};
            if (!fits(tc(env1, f->a), f->t2)) throw IllTyped("T_Fix: body type mismatch");
            return ft;
        }
    }
    throw IllTyped("unknown term");
}

}  // namespace

Type typecheckDTI(const Env& env, const Term& f) { return tc(env, f); }

}  // namespace ghm
