#include <doctest.h>

#include "ghm/syntax.hpp"

using namespace ghm;

TEST_CASE("parse the introductory program") {
    Expr e = parseExpr("(fun (x:?) -> x 2) (fun y -> y)");
    Expr expected = eApp(eAbs("x", dyn(), eApp(eVar("x"), eInt(2))), eAbs("y", nullptr, eVar("y")));
    CHECK(exprEq(e, expected));
    CHECK(exprEq(parseExpr("2"), eInt(2)));
}

TEST_CASE("non-value let") {
    std::vector<std::string> notes;
    Expr e = parseExpr("let x = 1 + 2 in x", &notes);
    CHECK(e->kind == EK::App);
    CHECK(notes.size() == 1);
    ParseOptions strict;
    strict.desugarNonValueLet = false;
    CHECK_THROWS_AS(parseExpr("let x = 1 + 2 in x", nullptr, strict), ValueRestrictionError);
}

TEST_CASE("syntax errors carry positions") {
    try {
        parseExpr("fun x ->");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.span.line == 1);
    }
    CHECK_THROWS_AS(parseExpr("(1"), SyntaxError);
    CHECK_THROWS_AS(parseType("int ->"), SyntaxError);
}

TEST_CASE("casts print in the textual form") {
    Term f = mkCast(mkInt(2), tint(), dyn(), Label{3, false, {}});
    CHECK(printTerm(f) == "2 : int =>[3+] ?");
    CHECK(printTerm(f, false) == "2 : int => ?");
    CHECK(printTerm(mkBlame(Label{3, true, {}})) == "blame 3-");
}

TEST_CASE("terms round trip through the printer") {
    const char* samples[] = {
        "2 : int =>[1+] ? =>[2-] 'X",
        "(fun (x : ?) -> (x : ? =>[1+] ? -> ?) (2 : int =>[2+] ?)) ((fun (y : 'Y) -> y) : 'Y -> 'Y =>[3+] ?)",
        "let g = /\\ 'X 'Y. fun (x : 'X) -> x in g[int, nu] 1",
        "fix f (x : int) : int = if x < 1 then 0 else f (x - 1)",
        "(-3) + 4 * 2",
        "blame 7-",
    };
    for (auto* s : samples) {
        Term f = parseTerm(s);
        CHECK(printTerm(f) == s);
        CHECK(termEq(parseTerm(printTerm(f)), f));
    }
}

TEST_CASE("programs with declarations") {
    Program p = parseProgram("-- comment\nlet id = fun x -> x;;\nlet rec f x = f x;;\nid 3");
    CHECK(p.decls.size() == 2);
    CHECK(p.decls[1].rec);
    CHECK(p.body);
    Expr e = programToExpr(p);
    CHECK(e->kind == EK::Let);
}
