#include <doctest.h>

#include "ghm/harness.hpp"

using namespace ghm;

namespace {

StepResult step1(const std::string& s, Mode m = Mode::DTI) {
    Fresh fr("r");
    return step(parseTerm(s), m, fr);
}

std::vector<std::string> rules(const EvalOutcome& o) {
    std::vector<std::string> out;
    for (auto& e : o.trace) out.push_back(e.rule);
    return out;
}

const char* kWitness =
    "((fun (x : 'X) -> (x : 'X =>[1+] ? =>[1+] ? -> ?) (x : 'X =>[1+] ?)) : 'X -> ? =>[1+] ? -> ?) "
    "((fun (x : ?) -> (x : ? =>[1+] ? -> ?) x) : ? -> ? =>[1+] ?)";

}  // namespace

TEST_CASE("single steps") {
    StepResult r = step1("2 : int =>[2+] ? =>[3-] 'Y");
    CHECK(r.rule == "R_InstBase");
    CHECK(r.subst.show() == "['Y := int]");
    CHECK(printTerm(r.next) == "2");

    r = step1("(fun (x : ?) -> x) : ? -> ? =>[1+] ? =>[2+] 'X");
    CHECK(r.rule == "R_InstArrow");
    CHECK(printTerm(r.next) == "(fun (x : ?) -> x) : ? -> ? =>[1+] ? =>[2+] ? -> ? =>[2+] 'r0 -> 'r1");
    CHECK(r.subst.show() == "['X := 'r0 -> 'r1]");

    r = step1("true : bool =>[2+] ? =>[3-] int");
    CHECK(r.rule == "R_Fail");
    CHECK(printTerm(r.next) == "blame 3-");

    r = step1("(fun (x : int) -> x) 5");
    CHECK(r.rule == "R_Beta");
    CHECK(r.subst.empty());
    CHECK(printTerm(r.next) == "5");

    r = step1("(blame 3-) + 1");
    CHECK(r.rule == "E_Abort");
    CHECK(printTerm(r.next) == "blame 3-");

    CHECK(step1("blame 3-").kind == StepResult::Aborted);
}

TEST_CASE("the baseline evaluator has no type variable projection") {
    CHECK_THROWS_AS(step1("2 : int =>[2+] ? =>[3-] 'Y", Mode::Baseline), StuckError);
    EvalOptions o;
    o.mode = Mode::Baseline;
    CHECK_THROWS_AS(eval(parseTerm("2 : int =>[2+] ? =>[3-] 'Y"), o), DomainError);
}

TEST_CASE("values") {
    CHECK(isValue(parseTerm("2 : int =>[1+] ?")));
    CHECK_FALSE(isValue(parseTerm("2 : int =>[1+] int")));
    CHECK(isValue(parseTerm("(fun (x : int) -> x) : int -> int =>[1+] ? -> ?")));
    CHECK_FALSE(isValue(parseTerm("2 : int =>[1+] ? =>[2+] ?")));
    CHECK(classifyValue(parseTerm("2 : int =>[1+] ?")) == ValueShape::Injection);
    CHECK_THROWS_AS(canonicalForm(parseTerm("fun (x : int) -> x"), tvar("X")), InvariantViolation);
}

TEST_CASE("polymorphic substitution instantiates nu freshly per occurrence") {
    Term w = parseTerm("fun (z : 'X) -> (fun (y : 'Y) -> y) : 'Y -> 'Y =>[1+] ?");
    Term body = parseTerm("(x[int, nu] 1) + (x[int, nu] 2)");
    Fresh fr("r");
    Term out = substPoly(body, "x", {"X", "Y"}, w, fr);
    auto vars = ftv(out);
    CHECK(vars.size() == 2);
    CHECK(vars.count("r0"));
    CHECK(vars.count("r1"));
    Term other = parseTerm("x2[int, nu]");
    CHECK(termEq(substPoly(other, "x", {"X", "Y"}, w, fr), other));
}

TEST_CASE("introductory program reaches a value by inference at run time") {
    Compiled c = compileSource("(fun (x:?) -> x 2) (fun y -> y)");
    EvalOutcome o = eval(c.term);
    REQUIRE(o.kind == EvalOutcome::Val);
    CHECK(printTerm(o.value) == "2 : int =>[3+] ?");
    CHECK(o.accum.show() == "['a0 := int]");
    std::vector<std::string> golden{"R_Ground", "R_Beta", "R_Succeed", "R_AppCast", "R_InstBase", "R_Beta"};
    CHECK(rules(o) == golden);
    CHECK(printTrace(o) ==
          "0: (fun (x : ?) -> (x : ? =>[1+] ? -> ?) (2 : int =>[2+] ?)) ((fun (y : 'a0) -> y) : 'a0 -> 'a0 =>[3+] ?)\n"
          "1: R_Ground [] (fun (x : ?) -> (x : ? =>[1+] ? -> ?) (2 : int =>[2+] ?)) ((fun (y : 'a0) -> y) : 'a0 -> "
          "'a0 =>[3+] ? -> ? =>[3+] ?)\n"
          "2: R_Beta [] ((fun (y : 'a0) -> y) : 'a0 -> 'a0 =>[3+] ? -> ? =>[3+] ? =>[1+] ? -> ?) (2 : int =>[2+] ?)\n"
          "3: R_Succeed [] ((fun (y : 'a0) -> y) : 'a0 -> 'a0 =>[3+] ? -> ?) (2 : int =>[2+] ?)\n"
          "4: R_AppCast [] (fun (y : 'a0) -> y) (2 : int =>[2+] ? =>[3-] 'a0) : 'a0 =>[3+] ?\n"
          "5: R_InstBase ['a0 := int] (fun (y : int) -> y) 2 : int =>[3+] ?\n"
          "6: R_Beta [] 2 : int =>[3+] ?\n");
}

TEST_CASE("conditional program blames the function cast negatively") {
    Compiled c = compileSource("(fun (x:?->?->?) -> x 2 true) (fun y1 -> fun y2 -> if true then y1 else y2)");
    EvalOutcome o = eval(c.term);
    REQUIRE(o.kind == EvalOutcome::Blame);
    CHECK(o.label.show() == "3-");
    CHECK(o.steps == 7);
    CHECK(o.trace.back().rule == "E_Abort");
    REQUIRE(c.term->b->kind == FK::Cast);
    CHECK(o.label.id == c.term->b->lbl.id);
}

TEST_CASE("arrow instantiation chain") {
    Term f = parseTerm(
        "((fun (y : int) -> y + 1) : int -> int =>[1+] ? =>[2+] 'X =>[3+] ? =>[4+] ? -> ?) (3 : int =>[5+] ?)");
    EvalOutcome o = eval(f);
    REQUIRE(o.kind == EvalOutcome::Val);
    CHECK(printTerm(o.value) == "4 : int =>[3+] ?");
    CHECK(typeEq(o.accum.apply(tvar("X")), parseType("int -> int")));
    Type x = o.trace[1].subst.lookup("X");
    REQUIRE(x);
    REQUIRE(x->kind == TK::Arrow);
    CHECK(typeEq(o.accum.apply(x->dom), tint()));
    CHECK(typeEq(o.accum.apply(x->cod), tint()));
}

TEST_CASE("let-bound functions get independent run-time variables per use") {
    Compiled c = compileSource("let g = fun x -> ((fun y -> y) : ?->?) x in let a = g 2 in g true");
    EvalOutcome o = eval(c.term);
    REQUIRE(o.kind == EvalOutcome::Val);
    CHECK(printTerm(o.value) == "true : bool =>[1+] ?");
    std::vector<Type> inst;
    for (auto& e : o.trace)
        if (e.rule == "R_InstBase")
            for (auto& [x, t] : e.subst.bindings())
                if (isRuntimeVar(x)) inst.push_back(t);
    REQUIRE(inst.size() == 2);
    CHECK(typeEq(inst[0], tint()));
    CHECK(typeEq(inst[1], tbool()));
}

TEST_CASE("divergence witness") {
    Term f = parseTerm(kWitness);
    EvalOptions o;
    o.maxSteps = 1000;
    EvalOutcome out = eval(f, o);
    CHECK(out.kind == EvalOutcome::Timeout);
    CHECK(out.steps == 1000);
    CHECK(out.trace.size() == 1000);
    Vocabulary v;
    v.depth = 1;
    EvalOptions b;
    b.mode = Mode::Baseline;
    b.maxSteps = 1000;
    for (auto& g : groundings({"X"}, v.types())) CHECK(eval(applySubst(g, f), b).kind == EvalOutcome::Blame);
}

TEST_CASE("trace retention is bounded") {
    EvalOptions o;
    o.maxSteps = 3000;
    EvalOutcome out = eval(parseTerm(kWitness), o);
    CHECK(out.trace.size() == 1000);
    CHECK(out.traceDropped == 2000);
    CHECK(out.trace.front().index == 2001);
    CHECK(printTrace(out).rfind("... 2000 earlier steps omitted\n", 0) == 0);
}

TEST_CASE("accumulated substitution is the composition of the step substitutions") {
    GenOptions g;
    g.minResidual = 1;
    for (long i = 0; i < 300; ++i) {
        Term f = compileExpr(generateWellTyped(caseSeed(41, i), g)).term;
        EvalOptions o;
        o.traceLimit = 0;
        EvalOutcome out = eval(f, o);
        Subst s;
        for (auto& e : out.trace) s = compose(e.subst, s);
        for (auto& x : ftv(f)) CHECK(typeEq(s.apply(tvar(x)), out.accum.apply(tvar(x))));
    }
}

TEST_CASE("conservative extension and safety on generated programs") {
    SuiteOptions o;
    o.cases = 300;
    o.seed = 42;
    o.fuel = 1000;
    CHECK(runConservative(o).failures == 0);
    CHECK(runSafety(o).failures == 0);
}
