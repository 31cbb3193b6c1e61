#include <doctest.h>

#include <map>

#include "ghm/harness.hpp"
#include "ghm/infer.hpp"
#include "ghm/syntax.hpp"

using namespace ghm;

namespace {

InferenceResult inferSrc(const std::string& s) { return inferPrincipal({}, parseExpr(s)); }

}  // namespace

TEST_CASE("fully static program") {
    auto r = inferSrc("(fun x -> x 2) (fun (y:int) -> y)");
    CHECK(show(r.type) == "int");
    CHECK(r.residual.empty());
    Expr a = r.annotated;
    CHECK(typeEq(a->a->ty, parseType("int -> int")));
    CHECK(typeEq(a->b->ty, tint()));
}

TEST_CASE("dynamic parameter leaves a residual variable") {
    auto r = inferSrc("(fun (x:?) -> x 2) (fun y -> y)");
    CHECK(show(r.type) == "?");
    REQUIRE(r.residual.size() == 1);
    Type y = r.annotated->b->ty;
    REQUIRE(y->kind == TK::Var);
    CHECK(y->name == r.residual[0]);
}

TEST_CASE("static errors") {
    CHECK_THROWS_AS(inferSrc("1 true"), TypeError);
    CHECK_THROWS_AS(inferSrc("fun x -> x x"), OccursCheckError);
    CHECK_THROWS_AS(inferSrc("if 1 then 2 else 3"), TypeError);
    CHECK_THROWS_AS(inferSrc("if true then 2 else false"), TypeError);
    CHECK_THROWS_AS(inferSrc("let x = fun (y:'a0) -> y in (fun z -> x true) (x 2)"), TypeError);
}

TEST_CASE("solver") {
    Fresh fr("c");
    Subst s = solve({{Constraint::Consist, tvar("X"), tint()}}, fr);
    CHECK(typeEq(s.apply(tvar("X")), tint()));

    Fresh fr2("c");
    Subst s2 = solve({{Constraint::Consist, tvar("X"), parseType("? -> int")}}, fr2);
    Type x = s2.apply(tvar("X"));
    REQUIRE(x->kind == TK::Arrow);
    CHECK(x->dom->kind == TK::Var);
    CHECK(typeEq(x->cod, tint()));

    Fresh fr3("c");
    CHECK_THROWS_AS(solve({{Constraint::Consist, tint(), tbool()}}, fr3), ClashError);
}

TEST_CASE("generalizable variables") {
    Expr v = parseExpr("fun y -> y");
    auto r = inferPrincipal({}, v);
    auto gv = generalizableVars({}, r.annotated, r.type);
    CHECK(gv.size() == 1);

    Expr v2 = parseExpr("fun (y:'a) -> y");
    CHECK(generalizableVars({}, v2, parseType("'a -> 'a")).empty());

    Env env{{"z", Scheme{{}, tvar("X")}}};
    CHECK(generalizableVars(env, parseExpr("fun y -> y"), parseType("'X -> 'X")).empty());
}

TEST_CASE("let polymorphism") {
    auto r = inferSrc("let id = fun x -> x in let a = id 1 in id true");
    CHECK(show(r.type) == "bool");
    CHECK_THROWS_AS(inferSrc("(fun id -> let a = id 1 in id true) (fun x -> x)"), TypeError);
}

TEST_CASE("inference is sound for the declarative checker") {
    for (long i = 0; i < 1000; ++i) {
        Expr e = generateWellTyped(caseSeed(21, i));
        auto r = inferPrincipal({}, e);
        Type t = checkITGL({}, r.annotated);
        CHECK(typeEq(t, r.type));
    }
}

TEST_CASE("residual variables never become the dynamic type") {
    for (long i = 0; i < 300; ++i) {
        Expr e = generateWellTyped(caseSeed(22, i));
        auto r = inferPrincipal({}, e);
        for (auto& [x, t] : r.subst.bindings()) CHECK(isStatic(t));
    }
}

namespace {

void absAnnotations(const Expr& e, std::vector<Type>& out) {
    if (!e) return;
    if (e->kind == EK::Abs) out.push_back(e->ty);
    absAnnotations(e->a, out);
    absAnnotations(e->b, out);
    absAnnotations(e->d, out);
}

Expr fillOmitted(const Expr& e, const std::vector<Type>& fill, size_t& k) {
    if (!e) return e;
    auto n = std::make_shared<ExprNode>(*e);
    if (e->kind == EK::Abs && !e->ty) n->ty = fill[k++];
    n->a = fillOmitted(e->a, fill, k);
    n->b = fillOmitted(e->b, fill, k);
    n->d = fillOmitted(e->d, fill, k);
    return n;
}

bool matchInto(const Type& p, const Type& t, std::map<std::string, Type>& m) {
    if (p->kind == TK::Var) {
        auto it = m.find(p->name);
        if (it != m.end()) return typeEq(it->second, t);
        m[p->name] = t;
        return true;
    }
    if (p->kind != t->kind) return false;
    if (p->kind == TK::Base) return p->base == t->base;
    if (p->kind == TK::Arrow) return matchInto(p->dom, t->dom, m) && matchInto(p->cod, t->cod, m);
    return true;
}

}  // namespace

TEST_CASE("principality over the grounding vocabulary") {
    // every accepted annotation of the omitted parameters factors through the principal one
    Vocabulary voc;
    voc.depth = 1;
    auto types = voc.types();
    int accepted = 0;
    for (long i = 0; i < 60; ++i) {
        Expr e = generateWellTyped(caseSeed(23, i));
        std::vector<Type> src, principal;
        absAnnotations(e, src);
        auto r = inferPrincipal({}, e);
        absAnnotations(r.annotated, principal);
        REQUIRE(src.size() == principal.size());
        std::vector<std::string> slots;
        std::vector<Type> slotPrincipal;
        for (size_t k = 0; k < src.size(); ++k)
            if (!src[k]) {
                slots.push_back("slot" + std::to_string(k));
                slotPrincipal.push_back(principal[k]);
            }
        if (slots.empty() || slots.size() > 3) continue;
        for (auto& g : groundings(slots, types)) {
            std::vector<Type> fill;
            for (auto& x : slots) fill.push_back(g.lookup(x));
            size_t k = 0;
            Expr candidate = fillOmitted(e, fill, k);
            try {
                inferPrincipal({}, candidate);
            } catch (const TypeError&) {
                continue;
            }
            ++accepted;
            std::map<std::string, Type> m;
            bool factors = true;
            for (size_t j = 0; j < fill.size(); ++j) factors = factors && matchInto(slotPrincipal[j], fill[j], m);
            CHECK_MESSAGE(factors, printExpr(candidate));
        }
    }
    CHECK(accepted > 0);
}
