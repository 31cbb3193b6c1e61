#include "ghm/harness.hpp"

#include <functional>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "ghm/precision.hpp"

namespace ghm {

std::vector<Type> Vocabulary::types() const {
    std::vector<Type> level;
    for (Base b : bases) level.push_back(tbase(b));
    for (int d = 1; d <= depth; ++d) {
        std::vector<Type> next;
        for (Base b : bases) next.push_back(tbase(b));
        for (auto& a : level)
            for (auto& c : level) next.push_back(arrow(a, c));
        level = std::move(next);
    }
    return level;
}

std::vector<Subst> groundings(const std::vector<std::string>& vars, const std::vector<Type>& vocab, size_t limit,
                              size_t samples, uint64_t seed) {
    std::vector<Subst> out;
    if (vars.empty()) return {Subst{}};
    if (vocab.empty()) return out;
    double total = 1;
    for (size_t i = 0; i < vars.size(); ++i) total *= static_cast<double>(vocab.size());
    if (total <= static_cast<double>(limit)) {
        std::vector<size_t> idx(vars.size(), 0);
        for (;;) {
            Subst s;
            for (size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], vocab[idx[i]]);
            out.push_back(std::move(s));
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == vocab.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
        return out;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, vocab.size() - 1);
    for (size_t n = 0; n < samples; ++n) {
        Subst s;
        for (auto& v : vars) s.bind(v, vocab[pick(rng)]);
        out.push_back(std::move(s));
    }
    return out;
}

bool isRuntimeVar(const std::string& name) {
    if (name.size() < 2 || name[0] != 'r') return false;
    for (size_t i = 1; i < name.size(); ++i)
        if (name[i] < '0' || name[i] > '9') return false;
    return true;
}

namespace {

void typeVarsInOrder(const Type& t, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (!t) return;
    if (t->kind == TK::Var) {
        if (seen.insert(t->name).second) out.push_back(t->name);
    } else if (t->kind == TK::Arrow) {
        typeVarsInOrder(t->dom, out, seen);
        typeVarsInOrder(t->cod, out, seen);
    }
}

void termVarsInOrder(const Term& f, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (!f) return;
    for (auto& t : f->targs) typeVarsInOrder(t, out, seen);
    if (f->kind == FK::Cast) {
        termVarsInOrder(f->a, out, seen);
        typeVarsInOrder(f->t1, out, seen);
        typeVarsInOrder(f->t2, out, seen);
        return;
    }
    typeVarsInOrder(f->t1, out, seen);
    typeVarsInOrder(f->t2, out, seen);
    termVarsInOrder(f->a, out, seen);
    termVarsInOrder(f->b, out, seen);
    termVarsInOrder(f->d, out, seen);
}

}  // namespace

std::vector<std::string> tyVarsInOrder(const Term& f) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    termVarsInOrder(f, out, seen);
    return out;
}

Term canonicalRuntime(const Term& f) {
    Subst ren;
    int k = 0;
    for (auto& x : tyVarsInOrder(f))
        if (isRuntimeVar(x)) ren.bind(x, tvar("~" + std::to_string(k++)));
    return applySubst(ren, f);
}

namespace {

bool matchType(const Type& p, const Type& t, std::map<std::string, Type>& m) {
    if (!p || !t) return !p && !t;
    if (p->kind == TK::Var) {
        auto it = m.find(p->name);
        if (it != m.end()) return typeEq(it->second, t);
        if (!isStatic(t)) return false;
        m[p->name] = t;
        return true;
    }
    if (p->kind != t->kind) return false;
    switch (p->kind) {
        case TK::Dyn: return true;
        case TK::Base: return p->base == t->base;
        case TK::Arrow: return matchType(p->dom, t->dom, m) && matchType(p->cod, t->cod, m);
        default: return false;
    }
}

bool matchGo(const Term& p, const Term& t, std::map<std::string, Type>& m) {
    if (!p || !t) return !p && !t;
    if (p->kind != t->kind || p->x != t->x || p->y != t->y || p->tvars != t->tvars) return false;
    if (p->targs.size() != t->targs.size()) return false;
    for (size_t i = 0; i < p->targs.size(); ++i)
        if (!matchType(p->targs[i], t->targs[i], m)) return false;
    switch (p->kind) {
        case FK::Const:
            if (!(p->c == t->c)) return false;
            break;
        case FK::Op:
            if (p->op != t->op) return false;
            break;
        case FK::Cast:
        case FK::Blame:
            if (!(p->lbl == t->lbl)) return false;
            break;
        default: break;
    }
    return matchType(p->t1, t->t1, m) && matchType(p->t2, t->t2, m) && matchGo(p->a, t->a, m) &&
           matchGo(p->b, t->b, m) && matchGo(p->d, t->d, m);
}

}  // namespace

std::optional<Subst> matchTerm(const Term& pattern, const Term& target) {
    std::map<std::string, Type> m;
    if (!matchGo(pattern, target, m)) return std::nullopt;
    Subst s;
    for (auto& [x, t] : m)
        if (!(t->kind == TK::Var && t->name == x)) s.bind(x, t);
    return s;
}

void PropertyReport::merge(const PropertyReport& o) {
    ++cases;
    if (o.failures > 0) {
        ++failures;
        if (!counterexample && o.counterexample) counterexample = o.counterexample;
    } else if (o.inconclusive > 0) {
        ++inconclusive;
    }
}

std::string PropertyReport::toJson() const {
    nlohmann::json j;
    j["property"] = property;
    j["cases"] = cases;
    j["failures"] = failures;
    j["inconclusive"] = inconclusive;
    j["seed"] = seed;
    if (counterexample) j["counterexample"] = *counterexample;
    return j.dump();
}

// ---- oracle drivers ----

namespace {

EvalOptions quick(long fuel, Mode mode = Mode::DTI) { return EvalOptions{mode, fuel, 1}; }

std::vector<std::string> freeInOrder(const Term& f) {
    auto fv = ftv(f);
    std::vector<std::string> out;
    for (auto& x : tyVarsInOrder(f))
        if (fv.count(x)) out.push_back(x);
    return out;
}

}  // namespace

PropertyReport checkSoundness(const Term& f, const Vocabulary& vocab, long fuel) {
    PropertyReport rep;
    rep.property = "soundness";
    auto vt = vocab.types();
    EvalOutcome out = eval(f, quick(fuel));
    if (out.kind == EvalOutcome::Val) {
        Term sf = applySubst(out.accum, f);
        for (auto& g : groundings(freeInOrder(sf), vt)) {
            ++rep.cases;
            EvalOutcome o2 = eval(applySubst(g, sf), quick(fuel));
            if (o2.kind == EvalOutcome::Timeout) {
                ++rep.inconclusive;
            } else if (o2.kind != EvalOutcome::Val) {
                rep.fail("grounding " + g.show() + " of the instantiated program blames; program: " + printTerm(f));
            } else if (!termEq(canonicalRuntime(o2.value), canonicalRuntime(applySubst(g, out.value)))) {
                rep.fail("grounding " + g.show() + " gives " + printTerm(o2.value) + " instead of " +
                         printTerm(applySubst(g, out.value)) + "; program: " + printTerm(f));
            }
        }
        return rep;
    }
    for (auto& g : groundings(freeInOrder(f), vt)) {
        ++rep.cases;
        EvalOutcome o2 = eval(applySubst(g, f), quick(fuel));
        if (o2.kind == EvalOutcome::Val) {
            rep.fail("program " + std::string(out.kind == EvalOutcome::Blame ? "blames" : "times out") +
                     " but grounding " + g.show() + " reaches " + printTerm(o2.value) + "; program: " + printTerm(f));
        } else if (o2.kind == EvalOutcome::Timeout || out.kind == EvalOutcome::Timeout) {
            ++rep.inconclusive;
        }
    }
    return rep;
}

PropertyReport checkCompleteness(const Term& f, const Vocabulary& vocab, long fuel) {
    PropertyReport rep;
    rep.property = "completeness";
    auto vt = vocab.types();
    EvalOutcome base = eval(f, quick(fuel));
    for (auto& g : groundings(freeInOrder(f), vt)) {
        ++rep.cases;
        EvalOutcome o = eval(applySubst(g, f), quick(fuel));
        if (o.kind == EvalOutcome::Val) {
            if (base.kind == EvalOutcome::Timeout) {
                ++rep.inconclusive;
            } else if (base.kind == EvalOutcome::Blame) {
                rep.fail("grounding " + g.show() + " reaches a value but the program blames; program: " +
                         printTerm(f));
            } else if (!matchTerm(base.value, canonicalRuntime(o.value))) {
                rep.fail("no instance of " + printTerm(base.value) + " equals " + printTerm(o.value) +
                         " (grounding " + g.show() + "); program: " + printTerm(f));
            }
        } else if (o.kind == EvalOutcome::Timeout && base.kind != EvalOutcome::Timeout) {
            ++rep.inconclusive;
        }
    }
    return rep;
}

PropertyReport checkGradualGuarantee(const Expr& e, const Expr& e2, long fuel) {
    PropertyReport rep;
    rep.property = "gg";
    if (!inferTermPrecITGL(e, e2)) throw DomainError("programs are not related by precision");
    rep.cases = 1;
    Compiled cp = compileExpr(e);
    Compiled ci;
    try {
        ci = compileExpr(e2);
    } catch (const std::exception& err) {
        rep.fail(std::string("less precise program is rejected: ") + err.what());
        return rep;
    }
    EvalOutcome op = eval(cp.term, quick(fuel));
    EvalOutcome oi = eval(ci.term, quick(fuel));
    std::string pair = printExpr(e) + "  vs  " + printExpr(e2);
    if (op.kind == EvalOutcome::Val) {
        if (oi.kind == EvalOutcome::Timeout) {
            ++rep.inconclusive;
        } else if (oi.kind == EvalOutcome::Blame) {
            rep.fail("precise side reaches a value, less precise side blames: " + pair);
        } else {
            try {
                auto w = inferTermPrecDTI({}, op.value, oi.value, {});
                bool typesOk = w && typePrec(op.accum.apply(cp.type), oi.accum.apply(ci.type), w->subst);
                if (!typesOk)
                    rep.fail("values not related: " + printTerm(op.value) + "  vs  " + printTerm(oi.value) + "; " +
                             pair);
            } catch (const PrecisionBudgetExceeded&) {
                ++rep.inconclusive;
            }
        }
    } else if (op.kind == EvalOutcome::Timeout && oi.kind != EvalOutcome::Timeout) {
        ++rep.inconclusive;
    }
    return rep;
}

// ---- generation ----

namespace {

struct Gen {
    std::mt19937_64& rng;
    const GenOptions& opts;
    int names = 0;

    struct Entry {
        std::string name;
        Type ty;  // intended type, dyn when annotated with ?
    };

    double uni() { return std::uniform_real_distribution<double>(0, 1)(rng); }
    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
    bool coin(double p) { return uni() < p; }
    std::string fresh(const char* p) { return p + std::to_string(names++); }

    Type baseType() { return coin(0.6) ? tint() : tbool(); }
    Type smallType(int depth) {
        if (depth > 0 && coin(0.3)) return arrow(smallType(depth - 1), smallType(depth - 1));
        return baseType();
    }

    Expr constant(const Type& t) {
        if (t->base == Base::Int) return eInt(below(7) - 2);
        if (t->base == Base::Bool) return eBool(coin(0.5));
        return eConst(Const::unit());
    }

    Type annotation(const Type& a) {
        if (coin(opts.dynProb)) return dyn();
        if (opts.annotateAll) return a;
        return coin(0.5) ? nullptr : a;
    }

    Expr lambda(std::vector<Entry>& env, const Type& t, int size) {
        std::string x = fresh("x");
        Type ann = annotation(t->dom);
        env.push_back({x, ann && ann->kind == TK::Dyn ? dyn() : t->dom});
        Expr body = gen(env, t->cod, size - 1);
        env.pop_back();
        return eAbs(x, ann, body);
    }

    Expr gen(std::vector<Entry>& env, const Type& t, int size) {
        std::vector<const Entry*> usable;
        for (auto it = env.rbegin(); it != env.rend(); ++it) {
            bool shadowed = false;
            for (auto jt = env.rbegin(); jt != it; ++jt)
                if (jt->name == it->name) shadowed = true;
            if (!shadowed && (typeEq(it->ty, t) || it->ty->kind == TK::Dyn)) usable.push_back(&*it);
        }
        if (size <= 0) {
            if (!usable.empty() && coin(0.5)) return eVar(usable[below(static_cast<int>(usable.size()))]->name);
            if (t->kind == TK::Arrow) return lambda(env, t, 0);
            return constant(t);
        }
        for (;;) {
            switch (below(9)) {
                case 0:
                case 1:
                    if (!usable.empty()) return eVar(usable[below(static_cast<int>(usable.size()))]->name);
                    break;
                case 2:
                    if (t->kind == TK::Arrow) return lambda(env, t, size);
                    break;
                case 3: {
                    Type a = smallType(1);
                    Expr fn = gen(env, arrow(a, t), size / 2);
                    return eApp(fn, gen(env, a, size / 2));
                }
                case 4:
                    if (t->kind == TK::Base && t->base == Base::Int) {
                        Op ops[] = {Op::Add, Op::Sub, Op::Mul};
                        return eOp(ops[below(3)], gen(env, tint(), size / 2), gen(env, tint(), size / 2));
                    }
                    if (t->kind == TK::Base && t->base == Base::Bool)
                        return eOp(coin(0.5) ? Op::Lt : Op::Eq, gen(env, tint(), size / 2),
                                   gen(env, tint(), size / 2));
                    break;
                case 5:
                    if (!opts.allowIf) break;
                    return eIf(gen(env, tbool(), size / 3), gen(env, t, size / 3), gen(env, t, size / 3));
                case 6: {
                    std::string x = fresh("f");
                    Type vt = coin(0.7) ? arrow(smallType(0), smallType(1)) : baseType();
                    Expr v = vt->kind == TK::Arrow ? lambda(env, vt, size / 2) : constant(vt);
                    env.push_back({x, vt});
                    Expr body = gen(env, t, size / 2);
                    env.pop_back();
                    return eLet(x, v, body);
                }
                case 7:
                    return eAscribe(gen(env, t, size - 1), dyn());
                case 8:
                    if (coin(0.3)) return eAscribe(gen(env, smallType(1), size - 1), dyn());
                    break;
            }
        }
    }
};

}  // namespace

Expr generateWellTyped(uint64_t seed, const GenOptions& opts) {
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < opts.retries; ++attempt) {
        Gen g{rng, opts};
        std::vector<Gen::Entry> env;
        Type t = opts.size <= 0 ? g.baseType() : g.smallType(1);
        Expr e = g.gen(env, t, opts.size);
        try {
            Compiled c = compileExpr(e);
            int residual = static_cast<int>(ftv(c.term).size());
            if (opts.maxResidual >= 0 && residual > opts.maxResidual) continue;
            if (residual < opts.minResidual) continue;
            if (opts.annotateAll && (!ftv(c.term).empty() || containsNu(c.term))) continue;
            return e;
        } catch (const std::exception&) {
            continue;
        }
    }
    throw std::runtime_error("generation failed after " + std::to_string(opts.retries) + " retries");
}

Expr loosen(const Expr& e, std::mt19937_64& rng) {
    if (!e) return e;
    auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
    auto n = std::make_shared<ExprNode>(*e);
    n->a = loosen(e->a, rng);
    n->b = loosen(e->b, rng);
    n->d = loosen(e->d, rng);
    if (e->kind == EK::Abs) {
        if (!e->ty) {
            if (coin(0.3)) n->ty = dyn();
        } else if (e->ty->kind != TK::Dyn) {
            if (coin(0.4)) n->ty = dyn();
            else if (isStatic(e->ty) && coin(0.3)) n->ty = nullptr;
        }
    } else if (e->kind == EK::Ascribe && coin(0.5)) {
        n->ty = dyn();
    }
    return n;
}

uint64_t caseSeed(uint64_t seed, long i) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ---- suites ----

namespace {

PropertyReport start(const char* name, const SuiteOptions& o) {
    PropertyReport r;
    r.property = name;
    r.seed = o.seed;
    return r;
}

GenOptions genOpts(const SuiteOptions& o) {
    GenOptions g;
    g.size = o.size;
    return g;
}

std::string caseTag(const SuiteOptions& o, long i) {
    return "case " + std::to_string(i) + " (seed " + std::to_string(o.seed) + "): ";
}

}  // namespace

PropertyReport runConservative(const SuiteOptions& o) {
    PropertyReport rep = start("conservative", o);
    GenOptions g = genOpts(o);
    g.annotateAll = true;
    for (long i = 0; i < o.cases; ++i) {
        Expr e = generateWellTyped(caseSeed(o.seed, i), g);
        Term f = compileExpr(e).term;
        ++rep.cases;
        EvalOptions opt{Mode::DTI, o.fuel, 0};
        EvalOutcome a = eval(f, opt);
        opt.mode = Mode::Baseline;
        EvalOutcome b;
        try {
            b = eval(f, opt);
        } catch (const std::exception& err) {
            rep.fail(caseTag(o, i) + "baseline evaluation failed: " + err.what() + " on " + printTerm(f));
            continue;
        }
        bool same = a.kind == b.kind && a.steps == b.steps && a.trace.size() == b.trace.size();
        for (size_t k = 0; same && k < a.trace.size(); ++k)
            same = a.trace[k].rule == b.trace[k].rule && termEq(a.trace[k].term, b.trace[k].term);
        if (!same) rep.fail(caseTag(o, i) + "traces differ on " + printTerm(f));
    }
    return rep;
}

PropertyReport runSafety(const SuiteOptions& o) {
    PropertyReport rep = start("safety", o);
    GenOptions g = genOpts(o);
    for (long i = 0; i < o.cases; ++i) {
        Expr e = generateWellTyped(caseSeed(o.seed, i), g);
        Compiled c = compileExpr(e);
        ++rep.cases;
        Fresh fr("r");
        std::set<std::string> names;
        allTyNames(c.term, names);
        fr.avoid(names);
        Type u = c.type;
        Term cur = c.term;
        try {
            for (long k = 0; k <= o.fuel; ++k) {
                Type t = typecheckDTI({}, cur);
                if (t && !typeEq(t, u)) {
                    rep.fail(caseTag(o, i) + "configuration has type " + show(t) + ", expected " + show(u) + ": " +
                             printTerm(cur));
                    break;
                }
                StepResult r = step(cur, Mode::DTI, fr);
                if (r.kind == StepResult::IsValue) {
                    canonicalForm(cur, u);
                    break;
                }
                if (r.kind == StepResult::Aborted) break;
                u = r.subst.apply(u);
                cur = r.next;
            }
        } catch (const std::exception& err) {
            rep.fail(caseTag(o, i) + err.what());
        }
    }
    return rep;
}

PropertyReport runCastPreservation(const SuiteOptions& o) {
    PropertyReport rep = start("cast", o);
    GenOptions g = genOpts(o);
    for (long i = 0; i < o.cases; ++i) {
        Expr e = generateWellTyped(caseSeed(o.seed, i), g);
        ++rep.cases;
        try {
            Compiled c = compileExpr(e);
            Type t = typecheckDTI({}, c.term);
            if (!t || !typeEq(t, c.type))
                rep.fail(caseTag(o, i) + "translation type " + show(c.type) + " but checker says " +
                         (t ? show(t) : std::string("any")) + ": " + printTerm(c.term));
        } catch (const std::exception& err) {
            rep.fail(caseTag(o, i) + err.what() + " in " + printExpr(e));
        }
    }
    return rep;
}

namespace {

PropertyReport runOracle(const char* name, const SuiteOptions& o,
                         const std::function<PropertyReport(const Term&, const Vocabulary&, long)>& check) {
    PropertyReport rep = start(name, o);
    GenOptions g = genOpts(o);
    g.maxResidual = 2;
    g.minResidual = 1;
    Vocabulary v;
    v.depth = o.depth;
    for (long i = 0; i < o.cases; ++i) {
        Expr e = generateWellTyped(caseSeed(o.seed, i), g);
        Term f = compileExpr(e).term;
        PropertyReport r = check(f, v, o.fuel);
        if (r.counterexample) r.counterexample = caseTag(o, i) + *r.counterexample;
        rep.merge(r);
    }
    return rep;
}

}  // namespace

PropertyReport runSoundness(const SuiteOptions& o) { return runOracle("soundness", o, checkSoundness); }

PropertyReport runCompleteness(const SuiteOptions& o) { return runOracle("completeness", o, checkCompleteness); }

PropertyReport runGradualGuarantee(const SuiteOptions& o) {
    PropertyReport rep = start("gg", o);
    GenOptions g = genOpts(o);
    g.allowIf = false;
    for (long i = 0; i < o.cases; ++i) {
        uint64_t s = caseSeed(o.seed, i);
        Expr e = generateWellTyped(s, g);
        std::mt19937_64 rng(s ^ 0x5bd1e995ULL);
        Expr e2 = loosen(e, rng);
        PropertyReport r = checkGradualGuarantee(e, e2, o.fuel);
        if (r.counterexample) r.counterexample = caseTag(o, i) + *r.counterexample;
        rep.merge(r);
    }
    return rep;
}

PropertyReport runRoundTrip(const SuiteOptions& o) {
    PropertyReport rep = start("roundtrip", o);
    GenOptions g = genOpts(o);
    for (long i = 0; i < o.cases; ++i) {
        Expr e = generateWellTyped(caseSeed(o.seed, i), g);
        ++rep.cases;
        try {
            std::string src = printExpr(e);
            if (!exprEq(e, parseExpr(src))) {
                rep.fail(caseTag(o, i) + "source does not reparse: " + src);
                continue;
            }
            Term f = compileExpr(e).term;
            std::string printed = printTerm(f);
            if (!termEq(f, parseTerm(printed))) rep.fail(caseTag(o, i) + "translation does not reparse: " + printed);
        } catch (const std::exception& err) {
            rep.fail(caseTag(o, i) + err.what());
        }
    }
    return rep;
}

std::vector<std::string> propertyNames() {
    return {"soundness", "completeness", "conservative", "safety", "gg", "cast", "roundtrip"};
}

PropertyReport runProperty(const std::string& name, const SuiteOptions& o) {
    if (name == "soundness") return runSoundness(o);
    if (name == "completeness") return runCompleteness(o);
    if (name == "conservative") return runConservative(o);
    if (name == "safety") return runSafety(o);
    if (name == "gg") return runGradualGuarantee(o);
    if (name == "cast") return runCastPreservation(o);
    if (name == "roundtrip") return runRoundTrip(o);
    throw std::invalid_argument("unknown property " + name);
}

}  // namespace ghm
