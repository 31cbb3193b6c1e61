#include "ghm/eval.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "ghm/syntax.hpp"

namespace ghm {

namespace {

struct Ctx {
    Mode mode;
    Fresh& fresh;
    std::string rule;
    Subst subst;
    bool abort = false;
    Label blame;
};

[[noreturn]] void stuck(const Term& f) { throw StuckError("stuck term: " + printTerm(f)); }

Term rebuild(const Term& f, Term a, Term b, Term d) {
    auto n = std::make_shared<TermNode>(*f);
    n->a = std::move(a);
    n->b = std::move(b);
    n->d = std::move(d);
    return n;
}

Term reduceCast(const Term& f, Ctx& cx) {
    const Type& from = f->t1;
    const Type& to = f->t2;
    const Term& w = f->a;
    if (from->kind == TK::Base && to->kind == TK::Base && from->base == to->base) {
        cx.rule = "R_IdBase";
        return w;
    }
    if (from->kind == TK::Dyn && to->kind == TK::Dyn) {
        cx.rule = "R_IdStar";
        return w;
    }
    if (to->kind == TK::Dyn) {
        if (from->kind == TK::Var) stuck(f);
        Type g = groundOf(from);
        cx.rule = "R_Ground";
        return mkCast(mkCast(w, from, g, f->lbl), g, dyn(), f->lbl);
    }
    if (from->kind == TK::Dyn) {
        if (w->kind != FK::Cast || w->t2->kind != TK::Dyn || !isGround(w->t1)) stuck(f);
        const Type& g1 = w->t1;
        if (isGround(to)) {
            if (typeEq(g1, to)) {
                cx.rule = "R_Succeed";
                return w->a;
            }
            cx.rule = "R_Fail";
            return mkBlame(f->lbl);
        }
        if (to->kind == TK::Var) {
            if (cx.mode == Mode::Baseline) throw StuckError("type variable projection in baseline mode: " + printTerm(f));
            if (g1->kind == TK::Base) {
                cx.rule = "R_InstBase";
                cx.subst = Subst::single(to->name, g1);
                return w->a;
            }
            Type x1 = tvar(cx.fresh()), x2 = tvar(cx.fresh());
            Type a = arrow(x1, x2);
            cx.rule = "R_InstArrow";
            cx.subst = Subst::single(to->name, a);
            return mkCast(mkCast(w, dyn(), dynArrow(), f->lbl), dynArrow(), a, f->lbl);
        }
        Type g = groundOf(to);
        cx.rule = "R_Expand";
        return mkCast(mkCast(w, dyn(), g, f->lbl), g, to, f->lbl);
    }
    stuck(f);
}

// Returns null when f is a value, otherwise f with its leftmost redex contracted.
Term reduce(const Term& f, Ctx& cx, int depth) {
    switch (f->kind) {
        case FK::Const:
        case FK::Abs:
        case FK::Fix: return nullptr;
        case FK::Blame:
            if (depth == 0) stuck(f);
            cx.abort = true;
            cx.blame = f->lbl;
            return f;
        case FK::Var: stuck(f);
        case FK::Op: {
            if (Term g = reduce(f->a, cx, depth + 1)) return rebuild(f, g, f->b, f->d);
            if (Term g = reduce(f->b, cx, depth + 1)) return rebuild(f, f->a, g, f->d);
            if (f->a->kind != FK::Const || f->b->kind != FK::Const) stuck(f);
            cx.rule = "R_Op";
            return mkConst(applyOp(f->op, f->a->c, f->b->c));
        }
        case FK::App: {
            if (Term g = reduce(f->a, cx, depth + 1)) return rebuild(f, g, f->b, f->d);
            if (Term g = reduce(f->b, cx, depth + 1)) return rebuild(f, f->a, g, f->d);
            const Term& fn = f->a;
            const Term& arg = f->b;
            if (fn->kind == FK::Abs) {
                cx.rule = "R_Beta";
                return substTerm(fn->a, fn->x, arg);
            }
            if (fn->kind == FK::Fix) {
                cx.rule = "R_Fix";
                Term body = fn->a;
                if (fn->x != fn->y) body = substTerm(body, fn->x, fn);
                return substTerm(body, fn->y, arg);
            }
            if (fn->kind == FK::Cast && fn->t1->kind == TK::Arrow && fn->t2->kind == TK::Arrow) {
                cx.rule = "R_AppCast";
                const Type& u1 = fn->t1;
                const Type& u2 = fn->t2;
                Term inner = mkApp(fn->a, mkCast(arg, u2->dom, u1->dom, fn->lbl.negate()));
                return mkCast(inner, u1->cod, u2->cod, fn->lbl);
            }
            stuck(f);
        }
        case FK::Cast: {
            if (Term g = reduce(f->a, cx, depth + 1)) return rebuild(f, g, nullptr, nullptr);
            if (f->t1->kind == TK::Arrow && f->t2->kind == TK::Arrow) return nullptr;
            if (f->t2->kind == TK::Dyn && isGround(f->t1)) return nullptr;
            return reduceCast(f, cx);
        }
        case FK::If: {
            if (Term g = reduce(f->a, cx, depth + 1)) return rebuild(f, g, f->b, f->d);
            if (f->a->kind != FK::Const || f->a->c.kind != Base::Bool) stuck(f);
            cx.rule = "R_If";
            return f->a->c.b ? f->b : f->d;
        }
        case FK::Let: {
            if (!isValue(f->a)) stuck(f);
            cx.rule = "R_LetP";
            return substPoly(f->b, f->x, f->tvars, f->a, cx.fresh);
        }
    }
    stuck(f);
}

// Composition of single-binding steps, each variable bound at most once.
Subst composeSteps(const std::vector<std::pair<std::string, Type>>& binds) {
    std::map<std::string, Type> resolved;
    std::function<Type(const Type&)> res = [&](const Type& t) -> Type {
        switch (t->kind) {
            case TK::Var: {
                auto it = resolved.find(t->name);
                return it == resolved.end() ? t : it->second;
            }
            case TK::Arrow: return arrow(res(t->dom), res(t->cod));
            default: return t;
        }
    };
    for (auto it = binds.rbegin(); it != binds.rend(); ++it)
        if (!resolved.count(it->first)) resolved[it->first] = res(it->second);
    Subst s;
    for (auto& [x, t] : resolved) s.bind(x, t);
    return s;
}

}  // namespace

StepResult step(const Term& f, Mode mode, Fresh& fresh) {
    StepResult r;
    if (f->kind == FK::Blame) {
        r.kind = StepResult::Aborted;
        r.label = f->lbl;
        return r;
    }
    Ctx cx{mode, fresh, {}, {}, false, {}};
    Term next = reduce(f, cx, 0);
    if (!next) {
        r.kind = StepResult::IsValue;
        return r;
    }
    r.kind = StepResult::Stepped;
    if (cx.abort) {
        r.rule = "E_Abort";
        r.next = mkBlame(cx.blame);
        return r;
    }
    r.rule = cx.rule;
    r.subst = cx.subst;
    r.next = cx.subst.empty() ? next : applySubst(cx.subst, next);
    return r;
}

EvalOutcome eval(const Term& f, const EvalOptions& opts, Fresh* fresh) {
    Fresh local("r");
    Fresh& fr = fresh ? *fresh : local;
    std::set<std::string> names;
    allTyNames(f, names);
    fr.avoid(names);
    if (opts.mode == Mode::Baseline && (!ftv(f).empty() || containsNu(f)))
        throw DomainError("baseline evaluation needs a term without type variables and nu");

    EvalOutcome out;
    out.initial = f;
    Term cur = f;
    std::vector<std::pair<std::string, Type>> binds;
    auto finish = [&](EvalOutcome::Kind k) {
        out.kind = k;
        out.accum = composeSteps(binds);
        return out;
    };
    for (;;) {
        StepResult r = step(cur, opts.mode, fr);
        if (r.kind == StepResult::IsValue) {
            out.value = cur;
            return finish(EvalOutcome::Val);
        }
        if (r.kind == StepResult::Aborted) {
            out.label = r.label;
            return finish(EvalOutcome::Blame);
        }
        if (out.steps >= opts.maxSteps) return finish(EvalOutcome::Timeout);
        ++out.steps;
        for (auto& b : r.subst.bindings()) binds.push_back(b);
        cur = r.next;
        out.trace.push_back({out.steps, r.rule, r.subst, cur});
        if (opts.traceLimit && out.trace.size() > opts.traceLimit) {
            out.trace.pop_front();
            ++out.traceDropped;
        }
    }
}

std::string outcomeKindName(EvalOutcome::Kind k) {
    switch (k) {
        case EvalOutcome::Val: return "value";
        case EvalOutcome::Blame: return "blame";
        case EvalOutcome::Timeout: return "timeout";
    }
    return "?";
}

std::string printTrace(const EvalOutcome& out, bool labels) {
    std::ostringstream os;
    if (out.traceDropped == 0 && out.initial) os << "0: " << printTerm(out.initial, labels) << "\n";
    if (out.traceDropped > 0) os << "... " << out.traceDropped << " earlier steps omitted\n";
    for (auto& e : out.trace) {
        os << e.index << ": " << e.rule << " " << (e.subst.empty() ? std::string("[]") : e.subst.show()) << " "
           << printTerm(e.term, labels) << "\n";
    }
    return os.str();
}

ValueShape classifyValue(const Term& w) {
    if (!isValue(w)) throw InvariantViolation("not a value: " + printTerm(w));
    switch (w->kind) {
        case FK::Const: return ValueShape::Constant;
        case FK::Abs:
        case FK::Fix: return ValueShape::Lambda;
        case FK::Cast: return w->t2->kind == TK::Dyn ? ValueShape::Injection : ValueShape::Wrapped;
        default: throw InvariantViolation("not a value: " + printTerm(w));
    }
}

ValueShape canonicalForm(const Term& w, const Type& u) {
    ValueShape s = classifyValue(w);
    switch (u->kind) {
        case TK::Var: throw InvariantViolation("a value typed at a type variable: " + printTerm(w));
        case TK::Base:
            if (s != ValueShape::Constant || w->c.kind != u->base)
                throw InvariantViolation("value at base type is not a constant of that type");
            break;
        case TK::Dyn:
            if (s != ValueShape::Injection) throw InvariantViolation("value at dynamic type is not an injection");
            break;
        case TK::Arrow:
            if (s != ValueShape::Lambda && s != ValueShape::Wrapped)
                throw InvariantViolation("value at function type is neither a function nor a wrapped function");
            if (s == ValueShape::Wrapped && !typeEq(w->t2, u))
                throw InvariantViolation("wrapped function target differs from its type");
            break;
    }
    return s;
}

}  // namespace ghm
