#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ghm/harness.hpp"
#include "ghm/precision.hpp"

using namespace ghm;

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::vector<std::string> rules(const EvalOutcome& o) {
    std::vector<std::string> out;
    for (auto& e : o.trace) out.push_back(e.rule);
    return out;
}

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (auto& x : xs) s += (s.empty() ? "" : ", ") + x;
    return s;
}

Check introSuccess() {
    Check c;
    auto t0 = Clock::now();
    Compiled comp = compileSource("(fun (x:?) -> x 2) (fun y -> y)");
    EvalOutcome o = eval(comp.term);
    double ms = msSince(t0);
    c.require(o.kind == EvalOutcome::Val, "reaches a value");
    if (o.kind != EvalOutcome::Val) return c;
    c.detail << "value " << printTerm(o.value, false) << ", " << o.steps << " steps, " << ms << " ms";
    c.require(printTerm(o.value, false) == "2 : int => ?", "value prints as 2 : int => ?");
    c.require(printTerm(o.value) == "2 : int =>[3+] ?", "value carries the function cast label");
    c.require(comp.inference.residual.size() == 1, "one residual variable");
    if (comp.inference.residual.size() == 1) {
        Type r = o.accum.apply(tvar(comp.inference.residual[0]));
        c.detail << ", '" << comp.inference.residual[0] << " := " << show(r);
        c.require(typeEq(r, tint()), "residual variable bound to int");
    }
    c.require(o.steps <= 20, "at most 20 steps");
    c.require(ms < 10, "under 10 ms");
    std::vector<std::string> golden{"R_Ground", "R_Beta", "R_Succeed", "R_AppCast", "R_InstBase", "R_Beta"};
    c.require(rules(o) == golden, "golden rule sequence, got " + join(rules(o)));
    return c;
}

Check introBlame() {
    Check c;
    Compiled comp = compileSource("(fun (x:?->?->?) -> x 2 true) (fun y1 -> fun y2 -> if true then y1 else y2)");
    EvalOutcome o = eval(comp.term);
    c.require(o.kind == EvalOutcome::Blame, "evaluates to blame");
    if (o.kind != EvalOutcome::Blame) return c;
    c.detail << "blame " << o.label.show() << " after " << o.steps << " steps";
    c.require(o.label.neg, "negative polarity");
    c.require(o.label.id == 3, "label 3");
    bool onFunctionCast = comp.term->b->kind == FK::Cast && comp.term->b->lbl.id == o.label.id;
    c.require(onFunctionCast, "label of the cast around the argument function");
    c.require(o.steps <= 30, "at most 30 steps");
    return c;
}

Check instArrowChain() {
    Check c;
    Term f = parseTerm(
        "((fun (y : int) -> y + 1) : int -> int =>[1+] ? =>[2+] 'X =>[3+] ? =>[4+] ? -> ?) (3 : int =>[5+] ?)");
    EvalOutcome o = eval(f);
    c.require(o.kind == EvalOutcome::Val, "reaches a value");
    if (o.kind != EvalOutcome::Val) return c;
    c.detail << "value " << printTerm(o.value) << ", accumulated " << o.accum.show();
    Type x;
    for (auto& e : o.trace)
        if (e.rule == "R_InstArrow" && e.subst.has("X")) x = e.subst.lookup("X");
    c.require(x && x->kind == TK::Arrow && x->dom->kind == TK::Var && x->cod->kind == TK::Var &&
                  isRuntimeVar(x->dom->name) && isRuntimeVar(x->cod->name),
              "X instantiated to an arrow of two run-time variables");
    if (x && x->kind == TK::Arrow) {
        c.require(typeEq(o.accum.apply(x->dom), tint()) && typeEq(o.accum.apply(x->cod), tint()),
                  "both run-time variables instantiated to int");
    }
    c.require(printTerm(o.value) == "4 : int =>[4+] ?", "value 4 : int =>[4+] ?");
    if (printTerm(o.value) != "4 : int =>[4+] ?")
        c.detail << " (R_Succeed discards the label 4 projection and keeps the label 3 cast; see README)";
    return c;
}

Check letPoly() {
    Check c;
    Compiled comp = compileSource("let g = fun x -> ((fun y -> y) : ?->?) x in let a = g 2 in g true");
    EvalOutcome o = eval(comp.term);
    c.require(o.kind == EvalOutcome::Val, "no blame");
    if (o.kind != EvalOutcome::Val) return c;
    std::vector<std::pair<std::string, Type>> inst;
    for (auto& e : o.trace)
        if (e.rule == "R_InstBase")
            for (auto& [x, t] : e.subst.bindings())
                if (isRuntimeVar(x)) inst.push_back({x, t});
    c.detail << "value " << printTerm(o.value, false);
    for (auto& [x, t] : inst) c.detail << ", '" << x << " := " << show(t);
    c.require(containsNu(comp.term), "translation instantiates the extra binder with nu");
    c.require(inst.size() == 2, "two run-time instantiations");
    if (inst.size() == 2) {
        c.require(inst[0].first != inst[1].first, "independent run-time variables");
        c.require(typeEq(inst[0].second, tint()) && typeEq(inst[1].second, tbool()), "int then bool");
    }
    return c;
}

Check divergence() {
    Check c;
    auto t0 = Clock::now();
    Term f = parseTerm(
        "((fun (x : 'X) -> (x : 'X =>[1+] ? =>[1+] ? -> ?) (x : 'X =>[1+] ?)) : 'X -> ? =>[1+] ? -> ?) "
        "((fun (x : ?) -> (x : ? =>[1+] ? -> ?) x) : ? -> ? =>[1+] ?)");
    EvalOptions dti;
    dti.maxSteps = 10000;
    dti.traceLimit = 1;
    EvalOutcome o = eval(f, dti);
    c.require(o.kind == EvalOutcome::Timeout, "times out at 10^4 steps");
    EvalOptions base;
    base.mode = Mode::Baseline;
    base.maxSteps = 1000;
    base.traceLimit = 1;
    long blamed = 0, total = 0;
    for (auto& g : groundings({"X"}, Vocabulary{}.types())) {
        ++total;
        if (eval(applySubst(g, f), base).kind == EvalOutcome::Blame) ++blamed;
    }
    double ms = msSince(t0);
    c.detail << "dti " << outcomeKindName(o.kind) << " after " << o.steps << " steps, " << blamed << "/" << total
             << " groundings blame, " << ms / 1000 << " s";
    c.require(blamed == total, "every grounding blames within 10^3 baseline steps");
    c.require(ms < 30000, "under 30 s");
    return c;
}

Check suite(const std::function<PropertyReport()>& run, double limitMs = 0) {
    Check c;
    auto t0 = Clock::now();
    PropertyReport r = run();
    double ms = msSince(t0);
    c.detail << r.property << ": " << r.cases << " cases, " << r.failures << " failures, " << r.inconclusive
             << " inconclusive, " << ms / 1000 << " s";
    c.require(r.failures == 0, r.counterexample.value_or("no failures"));
    if (limitMs > 0) c.require(ms < limitMs, "time limit");
    return c;
}

Check oracles() {
    Check c;
    auto t0 = Clock::now();
    SuiteOptions o;
    o.cases = 200;
    o.depth = 2;
    o.fuel = 10000;
    PropertyReport s = runSoundness(o);
    PropertyReport k = runCompleteness(o);
    double ms = msSince(t0);
    c.detail << "soundness " << s.cases << " programs, " << s.failures << " failures, " << s.inconclusive
             << " inconclusive; completeness " << k.cases << " programs, " << k.failures << " failures, "
             << k.inconclusive << " inconclusive; " << ms / 1000 << " s";
    c.require(s.failures == 0, s.counterexample.value_or(""));
    c.require(k.failures == 0, k.counterexample.value_or(""));
    c.require(ms < 300000, "under 5 min");
    return c;
}

Check curatedGuarantee() {
    Check c;
    auto prog = [](const std::string& ann) { return parseExpr("(fun (x:?->?) -> x 2) (fun (y:" + ann + ") -> y)"); };
    std::vector<std::string> anns{"?", "int", "bool"};
    int pairs = 0;
    for (auto& a : anns)
        for (auto& b : anns) {
            Expr e = prog(a), e2 = prog(b);
            if (!inferTermPrecITGL(e, e2)) continue;
            ++pairs;
            PropertyReport r = checkGradualGuarantee(e, e2, 10000);
            c.require(r.failures == 0, a + " vs " + b + ": " + r.counterexample.value_or(""));
        }
    c.require(pairs == 5, "five related pairs");
    EvalOutcome pb = eval(compileExpr(prog("bool")).term);
    EvalOutcome pi = eval(compileExpr(prog("int")).term);
    EvalOutcome pd = eval(compileExpr(prog("?")).term);
    c.detail << pairs << " related pairs; int: " << outcomeKindName(pi.kind) << ", bool: " << outcomeKindName(pb.kind)
             << ", ?: " << outcomeKindName(pd.kind);
    c.require(pb.kind == EvalOutcome::Blame && pd.kind == EvalOutcome::Val, "bool blames while ? succeeds");
    c.require(pi.kind == EvalOutcome::Val, "int succeeds");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Check()> run;
    };
    SuiteOptions thousand;
    thousand.cases = 1000;
    std::vector<Criterion> all{
        {"intro success trace", introSuccess},
        {"intro blame trace", introBlame},
        {"arrow instantiation chain", instArrowChain},
        {"let polymorphism with nu", letPoly},
        {"divergence witness", divergence},
        {"conservative extension", [&] { return suite([&] { return runConservative(thousand); }); }},
        {"soundness and completeness oracles", oracles},
        {"type safety instrumentation",
         [&] {
             SuiteOptions o = thousand;
             o.fuel = 1000;
             return suite([&] { return runSafety(o); });
         }},
        {"cast insertion preservation", [&] { return suite([&] { return runCastPreservation(thousand); }); }},
        {"gradual guarantee, curated", curatedGuarantee},
    };
    int failed = 0;
    for (size_t i = 0; i < all.size(); ++i) {
        Check c;
        try {
            c = all[i].run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail << " [exception: " << e.what() << "]";
        }
        if (!c.ok) ++failed;
        std::cout << "criterion " << i + 1 << ": " << (c.ok ? "PASS" : "FAIL") << " " << all[i].name << " -- "
                  << c.detail.str() << std::endl;
    }
    std::cout << (all.size() - failed) << "/" << all.size() << " criteria pass" << std::endl;
    return failed == 0 ? 0 : 1;
}
