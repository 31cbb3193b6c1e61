#include <doctest.h>

#include <json.hpp>

#include "ghm/harness.hpp"
#include "ghm/precision.hpp"

using namespace ghm;

namespace {

long vocabSize(int bases, int depth) {
    long n = bases;
    for (int d = 1; d <= depth; ++d) n = bases + n * n;
    return n;
}

int arrowDepth(const Type& t) {
    return t->kind == TK::Arrow ? 1 + std::max(arrowDepth(t->dom), arrowDepth(t->cod)) : 0;
}

}  // namespace

TEST_CASE("grounding vocabulary") {
    for (int d = 0; d <= 3; ++d) {
        Vocabulary v;
        v.depth = d;
        auto ts = v.types();
        CHECK(static_cast<long>(ts.size()) == vocabSize(2, d));
        std::set<std::string> distinct;
        for (auto& t : ts) {
            CHECK(isStatic(t));
            CHECK(ftv(t).empty());
            CHECK(arrowDepth(t) <= d);
            distinct.insert(show(t));
        }
        CHECK(distinct.size() == ts.size());
    }
    CHECK(Vocabulary{}.types().size() == 38);
}

TEST_CASE("groundings") {
    auto ts = Vocabulary{}.types();
    CHECK(groundings({}, ts).size() == 1);
    CHECK(groundings({"X"}, ts).size() == 38);
    CHECK(groundings({"X", "Y"}, ts).size() == 38 * 38);
    auto sampled = groundings({"X", "Y", "Z"}, ts);
    CHECK(sampled.size() == 500);
    auto again = groundings({"X", "Y", "Z"}, ts);
    for (size_t i = 0; i < sampled.size(); ++i) CHECK(sampled[i] == again[i]);
}

TEST_CASE("run-time variable renaming and matching") {
    Term a = parseTerm("(fun (y : 'r4) -> y) : 'r4 -> 'r7 =>[1+] ? -> ?");
    Term b = parseTerm("(fun (y : 'r0) -> y) : 'r0 -> 'r2 =>[1+] ? -> ?");
    CHECK(termEq(canonicalRuntime(a), canonicalRuntime(b)));
    CHECK(isRuntimeVar("r12"));
    CHECK_FALSE(isRuntimeVar("a0"));

    auto m = matchTerm(parseTerm("(fun (y : 'X) -> y) : 'X -> 'X =>[1+] ?"),
                       parseTerm("(fun (y : int) -> y) : int -> int =>[1+] ?"));
    REQUIRE(m);
    CHECK(m->show() == "['X := int]");
    CHECK_FALSE(matchTerm(parseTerm("(fun (y : 'X) -> y) : 'X -> 'X =>[1+] ?"),
                          parseTerm("(fun (y : int) -> y) : int -> bool =>[1+] ?")));
    CHECK_FALSE(matchTerm(parseTerm("2 : int =>[1+] ?"), parseTerm("2 : int =>[2+] ?")));
}

TEST_CASE("soundness oracle on the introductory programs") {
    Vocabulary v;
    auto ok = checkSoundness(compileSource("(fun (x:?) -> x 2) (fun y -> y)").term, v, 10000);
    CHECK(ok.failures == 0);
    CHECK(ok.cases == 1);
    auto bl = checkSoundness(
        compileSource("(fun (x:?->?->?) -> x 2 true) (fun y1 -> fun y2 -> if true then y1 else y2)").term, v, 10000);
    CHECK(bl.failures == 0);
    CHECK(bl.cases == 38);
    auto vacuous = checkSoundness(parseTerm("(fun (x : int) -> x) 1"), v, 100);
    CHECK(vacuous.cases == 1);
    CHECK(vacuous.failures == 0);
}

TEST_CASE("completeness oracle") {
    Vocabulary v;
    auto r = checkCompleteness(parseTerm("2 : int =>[1+] ? =>[2+] 'X"), v, 100);
    CHECK(r.failures == 0);
    CHECK(r.cases == 38);
    auto id = checkCompleteness(parseTerm("fun (x : int) -> x"), v, 100);
    CHECK(id.failures == 0);
    auto wit = checkCompleteness(compileSource("(fun (x:?) -> x 2) (fun y -> y)").term, v, 10000);
    CHECK(wit.failures == 0);
}

TEST_CASE("oracles report failures") {
    // a value that differs from every grounded run is caught by the matcher
    CHECK_FALSE(matchTerm(parseTerm("2 : int =>[1+] ?"), parseTerm("3 : int =>[1+] ?")));
    PropertyReport r;
    r.fail("first");
    r.fail("second");
    CHECK(r.failures == 2);
    CHECK(*r.counterexample == "first");
    auto j = nlohmann::json::parse(r.toJson());
    for (auto* k : {"property", "cases", "failures", "inconclusive", "seed"}) CHECK(j.contains(k));
}

TEST_CASE("gradual guarantee on the curated triple") {
    auto prog = [](const std::string& ann) {
        return parseExpr("(fun (x:?->?) -> x 2) (fun (y:" + ann + ") -> y)");
    };
    Expr e = prog("int"), eb = prog("bool"), ed = prog("?");
    CHECK(checkGradualGuarantee(e, ed, 1000).failures == 0);
    CHECK(checkGradualGuarantee(eb, ed, 1000).failures == 0);
    CHECK(checkGradualGuarantee(ed, ed, 1000).failures == 0);
    CHECK_THROWS_AS(checkGradualGuarantee(ed, e, 1000), DomainError);
}

TEST_CASE("equal branch types reject some less precise programs") {
    Expr e = parseExpr("if true then (fun (x:bool) -> x) true else false");
    Expr e2 = parseExpr("if true then (fun (x:?) -> x) true else false");
    CHECK(inferTermPrecITGL(e, e2));
    auto r = checkGradualGuarantee(e, e2, 1000);
    CHECK(r.failures == 1);
}

TEST_CASE("generator") {
    GenOptions zero;
    zero.size = 0;
    for (long i = 0; i < 50; ++i) CHECK(generateWellTyped(caseSeed(0, i), zero)->kind == EK::Const);

    GenOptions three;
    three.size = 3;
    CHECK(printExpr(generateWellTyped(0, three)) == printExpr(generateWellTyped(0, three)));
    CHECK(printExpr(generateWellTyped(0, three)) ==
          "if if false then true else true then fun (x2 : int) -> false else if true then fun (x1 : int) -> false "
          "else fun (x0 : int) -> false");

    for (long i = 0; i < 10000; ++i) {
        Expr e = generateWellTyped(caseSeed(61, i));
        CHECK_NOTHROW(inferPrincipal({}, e));
    }
}

TEST_CASE("property runs replay from their seed") {
    SuiteOptions o;
    o.cases = 50;
    o.seed = 62;
    for (auto& name : propertyNames()) {
        auto a = runProperty(name, o);
        auto b = runProperty(name, o);
        CHECK(a.toJson() == b.toJson());
        CHECK(a.failures == 0);
    }
    CHECK_THROWS(runProperty("nonsense", o));
}
