#include "ghm/infer.hpp"

#include <algorithm>

#include "ghm/syntax.hpp"

namespace ghm {

// ---- solver ----

void Solver::bindVar(const std::string& x, const Type& t) {
    if (!isStatic(t)) throw ClashError("type variable '" + x + " cannot stand for " + show(t));
    Subst one = Subst::single(x, t);
    s_ = compose(one, s_);
}

Type Solver::splitArrow(const std::string& x) {
    Type arr = arrow(tvar(fresh_()), tvar(fresh_()));
    bindVar(x, arr);
    return arr;
}

void Solver::consist(const Type& a0, const Type& b0) {
    Type a = apply(a0), b = apply(b0);
    if (a->kind == TK::Dyn || b->kind == TK::Dyn) return;
    if (a->kind == TK::Var && b->kind == TK::Var && a->name == b->name) return;
    if (a->kind == TK::Var || b->kind == TK::Var) {
        const Type& v = a->kind == TK::Var ? a : b;
        const Type& t = a->kind == TK::Var ? b : a;
        if (occursIn(v->name, t)) throw OccursCheckError("occurs check: '" + v->name + " in " + show(t));
        if (isStatic(t)) {
            bindVar(v->name, t);
        } else {
            Type arr = splitArrow(v->name);
            consist(arr, t);
        }
        return;
    }
    if (a->kind == TK::Base && b->kind == TK::Base) {
        if (a->base != b->base) throw ClashError("type mismatch: " + show(a) + " vs " + show(b));
        return;
    }
    if (a->kind == TK::Arrow && b->kind == TK::Arrow) {
        consist(a->dom, b->dom);
        consist(a->cod, b->cod);
        return;
    }
    throw ClashError("type mismatch: " + show(a) + " vs " + show(b));
}

void Solver::equal(const Type& a0, const Type& b0) {
    Type a = apply(a0), b = apply(b0);
    if (a->kind == TK::Dyn && b->kind == TK::Dyn) return;
    if (a->kind == TK::Var && b->kind == TK::Var && a->name == b->name) return;
    if (a->kind == TK::Var || b->kind == TK::Var) {
        const Type& v = a->kind == TK::Var ? a : b;
        const Type& t = a->kind == TK::Var ? b : a;
        if (occursIn(v->name, t)) throw OccursCheckError("occurs check: '" + v->name + " in " + show(t));
        bindVar(v->name, t);
        return;
    }
    if (a->kind == TK::Base && b->kind == TK::Base && a->base == b->base) return;
    if (a->kind == TK::Arrow && b->kind == TK::Arrow) {
        equal(a->dom, b->dom);
        equal(a->cod, b->cod);
        return;
    }
    throw ClashError("types are not equal: " + show(a) + " vs " + show(b));
}

Subst solve(const std::vector<Constraint>& cs, Fresh& fresh) {
    Solver s(fresh);
    for (auto& c : cs) s.add(c);
    return s.subst();
}

// ---- inference ----

namespace {

[[noreturn]] void rethrowWith(const TypeError& err, const std::string& msg, Span sp) {
    if (dynamic_cast<const OccursCheckError*>(&err)) throw OccursCheckError(msg, sp);
    if (dynamic_cast<const ClashError*>(&err)) throw ClashError(msg, sp);
    throw TypeError(msg, sp);
}


std::shared_ptr<ExprNode> copyNode(const Expr& e) { return std::make_shared<ExprNode>(*e); }

void ftvExpr(const Expr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->ty) ftvInto(e->ty, out);
    if (e->ty2) ftvInto(e->ty2, out);
    for (auto& t : e->targs)
        if (t) ftvInto(t, out);
    if (e->kind == EK::Let) {
        std::set<std::string> inner;
        ftvExpr(e->a, inner);
        for (auto& b : e->tvars) inner.erase(b);
        out.insert(inner.begin(), inner.end());
        ftvExpr(e->b, out);
        return;
    }
    ftvExpr(e->a, out);
    ftvExpr(e->b, out);
    ftvExpr(e->d, out);
}

std::vector<std::string> ftvExprOrdered(const Expr& e) {
    std::set<std::string> s;
    ftvExpr(e, s);
    return {s.begin(), s.end()};
}

Type opArg(Op op, int i) { return tbase(i == 0 ? opSig(op).arg1 : opSig(op).arg2); }

}  // namespace

Scheme Inferencer::generalize(const Env& env, const Expr& src, const Type& t) {
    Type ts = solver_.apply(t);
    auto envF = ftv(applySubst(solver_.subst(), env));
    std::set<std::string> annF;
    for (auto& a : annotFtv(src)) ftvInto(solver_.apply(tvar(a)), annF);
    std::vector<std::string> ord;
    ftvOrdered(ts, ord);
    Scheme sc;
    sc.body = ts;
    for (auto& x : ord)
        if (!envF.count(x) && !annF.count(x)) sc.binders.push_back(x);
    return sc;
}

Type Inferencer::go(const Env& env, const Expr& e, Expr& out) {
    switch (e->kind) {
        case EK::Var: {
            auto it = env.find(e->x);
            if (it == env.end()) throw TypeError("unbound variable " + e->x, e->span);
            const Scheme& sc = it->second;
            auto n = copyNode(e);
            n->targs.clear();
            Subst inst;
            for (auto& b : sc.binders) {
                Type v = tvar(fresh_());
                inst.bind(b, v);
                n->targs.push_back(v);
            }
            out = n;
            return solver_.apply(inst.apply(sc.body));
        }
        case EK::Const: out = e; return constType(e->c);
        case EK::Op: {
            auto n = copyNode(e);
            Expr a, b;
            Type t1 = go(env, e->a, a);
            Type t2 = go(env, e->b, b);
            try {
                solver_.consist(t1, opArg(e->op, 0));
                solver_.consist(t2, opArg(e->op, 1));
            } catch (TypeError& err) {
                rethrowWith(err, std::string("operator ") + opSig(e->op).name + ": " + err.what(), e->span);
            }
            n->a = a;
            n->b = b;
            out = n;
            return tbase(opSig(e->op).result);
        }
        case EK::Abs: {
            auto n = copyNode(e);
            if (!n->ty) {
                n->ty = tvar(fresh_());
                n->implicit = true;
            }
            Env env2 = env;
            env2[e->x] = Scheme{{}, n->ty};
            Expr body;
            Type tb = go(env2, e->a, body);
            n->a = body;
            out = n;
            return arrow(n->ty, tb);
        }
        case EK::App: {
            auto n = copyNode(e);
            Expr a, b;
            Type t1 = solver_.apply(go(env, e->a, a));
            Type dom, cod;
            if (t1->kind == TK::Var) {
                Type arr = solver_.splitArrow(t1->name);
                dom = arr->dom;
                cod = arr->cod;
            } else {
                try {
                    std::tie(dom, cod) = matching(t1);
                } catch (const NotMatchable& err) {
                    throw TypeError(err.what(), e->span);
                }
            }
            Type t2 = go(env, e->b, b);
            try {
                solver_.consist(t2, dom);
            } catch (TypeError& err) {
                rethrowWith(err, std::string("argument: ") + err.what(), e->span);
            }
            n->a = a;
            n->b = b;
            out = n;
            return cod;
        }
        case EK::If: {
            auto n = copyNode(e);
            Expr a, b, d;
            Type tc = go(env, e->a, a);
            try {
                solver_.consist(tc, tbool());
            } catch (TypeError& err) {
                rethrowWith(err, std::string("condition: ") + err.what(), e->span);
            }
            Type tt = go(env, e->b, b);
            Type te = go(env, e->d, d);
            try {
                solver_.equal(tt, te);
            } catch (TypeError& err) {
                rethrowWith(err, std::string("branches: ") + err.what(), e->span);
            }
            n->a = a;
            n->b = b;
            n->d = d;
            out = n;
            return tt;
        }
        case EK::Ascribe: {
            auto n = copyNode(e);
            Expr a;
            Type t = go(env, e->a, a);
            try {
                solver_.consist(t, e->ty);
            } catch (TypeError& err) {
                rethrowWith(err, std::string("ascription: ") + err.what(), e->span);
            }
            n->a = a;
            out = n;
            return e->ty;
        }
        case EK::Let: {
            if (!isSyntacticValue(e->a)) throw TypeError("let-bound expression is not a value", e->span);
            auto n = copyNode(e);
            Expr v, body;
            Type tv = go(env, e->a, v);
            Scheme sc = generalize(env, e->a, tv);
            n->tvars = sc.binders;
            Env env2 = env;
            env2[e->x] = sc;
            Type tb = go(env2, e->b, body);
            n->a = v;
            n->b = body;
            out = n;
            return tb;
        }
        case EK::LetRec: {
            auto n = copyNode(e);
            if (!n->ty) {
                n->ty = tvar(fresh_());
                n->implicit = true;
            }
            n->ty2 = tvar(fresh_());
            Type ft = arrow(n->ty, n->ty2);
            Env env1 = env;
            env1[e->x] = Scheme{{}, ft};
            env1[e->y] = Scheme{{}, n->ty};
            Expr body, in;
            Type tb = go(env1, e->a, body);
            try {
                solver_.consist(tb, n->ty2);
            } catch (TypeError& err) {
                rethrowWith(err, std::string("recursive function body: ") + err.what(), e->span);
            }
            Env env2 = env;
            env2[e->x] = Scheme{{}, ft};
            Type ti = go(env2, e->b, in);
            n->a = body;
            n->b = in;
            out = n;
            return ti;
        }
    }
    throw TypeError("unknown expression");
}

InferenceResult Inferencer::infer(const Env& env, const Expr& e) {
    std::set<std::string> names;
    allTyNames(e, names);
    auto ef = ftv(env);
    names.insert(ef.begin(), ef.end());
    for (auto& [k, sc] : env)
        for (auto& b : sc.binders) names.insert(b);
    fresh_.avoid(names);
    Expr out;
    Type t = go(env, e, out);
    InferenceResult r;
    r.subst = solver_.subst();
    r.annotated = applySubst(r.subst, out);
    r.type = r.subst.apply(t);
    r.residual = ftvExprOrdered(r.annotated);
    return r;
}

Inferencer::DeclResult Inferencer::inferLet(const Env& env, const std::string& x, const Expr& v) {
    (void)x;
    std::set<std::string> names;
    allTyNames(v, names);
    auto ef = ftv(env);
    names.insert(ef.begin(), ef.end());
    for (auto& [k, sc] : env)
        for (auto& b : sc.binders) names.insert(b);
    fresh_.avoid(names);
    Expr out;
    Type t = go(env, v, out);
    DeclResult r;
    if (isSyntacticValue(v)) {
        r.scheme = generalize(env, v, t);
    } else {
        r.scheme = Scheme{{}, solver_.apply(t)};
    }
    r.subst = solver_.subst();
    Subst outer = r.subst;
    for (auto& b : r.scheme.binders) outer.erase(b);
    r.annotated = applySubst(outer, out);
    return r;
}

InferenceResult inferPrincipal(const Env& env, const Expr& e) {
    Inferencer inf;
    return inf.infer(env, e);
}

std::vector<std::string> generalizableVars(const Env& env, const Expr& v, const Type& u) {
    auto envF = ftv(env);
    auto annF = annotFtv(v);
    std::vector<std::string> ord, out;
    ftvOrdered(u, ord);
    for (auto& x : ord)
        if (!envF.count(x) && !annF.count(x)) out.push_back(x);
    return out;
}

// ---- declarative checker ----

namespace {

Type checkGo(const Env& env, const Expr& e) {
    switch (e->kind) {
        case EK::Var: {
            auto it = env.find(e->x);
            if (it == env.end()) throw TypeError("unbound variable " + e->x, e->span);
            const Scheme& sc = it->second;
            if (sc.binders.size() != e->targs.size())
                throw TypeError("wrong number of type arguments for " + e->x, e->span);
            Subst s;
            for (size_t i = 0; i < sc.binders.size(); ++i) {
                if (!e->targs[i] || !isStatic(e->targs[i]))
                    throw TypeError("instantiation of " + e->x + " must be static", e->span);
                s.bind(sc.binders[i], e->targs[i]);
            }
            return s.apply(sc.body);
        }
        case EK::Const: return constType(e->c);
        case EK::Op: {
            Type a = checkGo(env, e->a), b = checkGo(env, e->b);
            if (!consistent(a, opArg(e->op, 0)) || !consistent(b, opArg(e->op, 1)))
                throw TypeError("operator arguments inconsistent", e->span);
            return tbase(opSig(e->op).result);
        }
        case EK::Abs: {
            if (!e->ty) throw TypeError("lambda is not annotated", e->span);
            if (e->implicit && !isStatic(e->ty)) throw TypeError("inferred annotation is not static", e->span);
            Env env2 = env;
            env2[e->x] = Scheme{{}, e->ty};
            return arrow(e->ty, checkGo(env2, e->a));
        }
        case EK::App: {
            Type t1 = checkGo(env, e->a);
            Type t2 = checkGo(env, e->b);
            auto [dom, cod] = matching(t1);
            if (!consistent(t2, dom)) throw TypeError("argument inconsistent with parameter", e->span);
            return cod;
        }
        case EK::If: {
            Type tc = checkGo(env, e->a);
            if (!consistent(tc, tbool())) throw TypeError("condition inconsistent with bool", e->span);
            Type tt = checkGo(env, e->b), te = checkGo(env, e->d);
            if (!typeEq(tt, te)) throw TypeError("branches differ", e->span);
            return tt;
        }
        case EK::Ascribe: {
            Type t = checkGo(env, e->a);
            if (!consistent(t, e->ty)) throw TypeError("ascription inconsistent", e->span);
            return e->ty;
        }
        case EK::Let: {
            if (!isSyntacticValue(e->a)) throw TypeError("let-bound expression is not a value", e->span);
            Type tv = checkGo(env, e->a);
            auto expect = generalizableVars(env, e->a, tv);
            std::set<std::string> a(expect.begin(), expect.end()), b(e->tvars.begin(), e->tvars.end());
            if (a != b) throw TypeError("generalized variables do not match", e->span);
            Env env2 = env;
            env2[e->x] = Scheme{e->tvars, tv};
            return checkGo(env2, e->b);
        }
        case EK::LetRec: {
            if (!e->ty || !e->ty2) throw TypeError("recursive function is not annotated", e->span);
            if (!isStatic(e->ty2) || (e->implicit && !isStatic(e->ty)))
                throw TypeError("recursive function annotation is not static", e->span);
            Type ft = arrow(e->ty, e->ty2);
            Env env1 = env;
            env1[e->x] = Scheme{{}, ft};
            env1[e->y] = Scheme{{}, e->ty};
            if (!consistent(checkGo(env1, e->a), e->ty2)) throw TypeError("recursive body inconsistent", e->span);
            Env env2 = env;
            env2[e->x] = Scheme{{}, ft};
            return checkGo(env2, e->b);
        }
    }
    throw TypeError("unknown expression");
}

}  // namespace

Type checkITGL(const Env& env, const Expr& e) {
    try {
        return checkGo(env, e);
    } catch (const NotMatchable& err) {
        throw TypeError(err.what());
    }
}

}  // namespace ghm
