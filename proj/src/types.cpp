#include "ghm/types.hpp"

#include <cassert>
#include <sstream>

namespace ghm {

namespace {

Type mk(TK k) {
    auto n = std::make_shared<TypeNode>();
    n->kind = k;
    return n;
}

const Type kDyn = mk(TK::Dyn);

Type mkBase(Base b) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TK::Base;
    n->base = b;
    return n;
}

const Type kInt = mkBase(Base::Int);
const Type kBool = mkBase(Base::Bool);
const Type kUnit = mkBase(Base::Unit);

}  // namespace

Type dyn() { return kDyn; }

Type tvar(const std::string& name) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TK::Var;
    n->name = name;
    return n;
}

Type tbase(Base b) {
    switch (b) {
        case Base::Int: return kInt;
        case Base::Bool: return kBool;
        case Base::Unit: return kUnit;
    }
    return kInt;
}

Type tint() { return kInt; }
Type tbool() { return kBool; }
Type tunit() { return kUnit; }

Type arrow(Type a, Type b) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TK::Arrow;
    n->dom = std::move(a);
    n->cod = std::move(b);
    return n;
}

Type dynArrow() {
    static const Type t = arrow(dyn(), dyn());
    return t;
}

bool isStatic(const Type& t) {
    switch (t->kind) {
        case TK::Dyn: return false;
        case TK::Arrow: return isStatic(t->dom) && isStatic(t->cod);
        default: return true;
    }
}

bool typeEq(const Type& a, const Type& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TK::Dyn: return true;
        case TK::Var: return a->name == b->name;
        case TK::Base: return a->base == b->base;
        case TK::Arrow: return typeEq(a->dom, b->dom) && typeEq(a->cod, b->cod);
    }
    return false;
}

bool consistent(const Type& a, const Type& b) {
    if (a->kind == TK::Dyn || b->kind == TK::Dyn) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TK::Var: return a->name == b->name;
        case TK::Base: return a->base == b->base;
        case TK::Arrow: return consistent(a->dom, b->dom) && consistent(a->cod, b->cod);
        default: return true;
    }
}

bool isGround(const Type& t) {
    if (t->kind == TK::Base) return true;
    return t->kind == TK::Arrow && t->dom->kind == TK::Dyn && t->cod->kind == TK::Dyn;
}

Type groundOf(const Type& t) {
    if (t->kind == TK::Base) return t;
    if (t->kind == TK::Arrow) return dynArrow();
    throw DomainError("no ground type for " + show(t));
}

std::pair<Type, Type> matching(const Type& t) {
    if (t->kind == TK::Dyn) return {dyn(), dyn()};
    if (t->kind == TK::Arrow) return {t->dom, t->cod};
    throw NotMatchable("type " + show(t) + " is not a function type");
}

void ftvInto(const Type& t, std::set<std::string>& out) {
    if (t->kind == TK::Var) {
        out.insert(t->name);
    } else if (t->kind == TK::Arrow) {
        ftvInto(t->dom, out);
        ftvInto(t->cod, out);
    }
}

std::set<std::string> ftv(const Type& t) {
    std::set<std::string> s;
    ftvInto(t, s);
    return s;
}

void ftvOrdered(const Type& t, std::vector<std::string>& out) {
    if (t->kind == TK::Var) {
        for (auto& n : out)
            if (n == t->name) return;
        out.push_back(t->name);
    } else if (t->kind == TK::Arrow) {
        ftvOrdered(t->dom, out);
        ftvOrdered(t->cod, out);
    }
}

bool occursIn(const std::string& x, const Type& t) {
    if (t->kind == TK::Var) return t->name == x;
    if (t->kind == TK::Arrow) return occursIn(x, t->dom) || occursIn(x, t->cod);
    return false;
}

int typeSize(const Type& t) {
    if (t->kind == TK::Arrow) return 1 + typeSize(t->dom) + typeSize(t->cod);
    return 1;
}

const char* baseName(Base b) {
    switch (b) {
        case Base::Int: return "int";
        case Base::Bool: return "bool";
        case Base::Unit: return "unit";
    }
    return "?";
}

static void showInto(const Type& t, std::ostringstream& os, bool left) {
    switch (t->kind) {
        case TK::Dyn: os << "?"; break;
        case TK::Var: os << "'" << t->name; break;
        case TK::Base: os << baseName(t->base); break;
        case TK::Arrow:
            if (left) os << "(";
            showInto(t->dom, os, true);
            os << " -> ";
            showInto(t->cod, os, false);
            if (left) os << ")";
            break;
    }
}

std::string show(const Type& t) {
    if (!t) return "_";
    std::ostringstream os;
    showInto(t, os, false);
    return os.str();
}

Subst Subst::single(const std::string& x, Type t) {
    Subst s;
    s.bind(x, std::move(t));
    return s;
}

void Subst::bind(const std::string& x, Type t) {
    assert(isStatic(t) && "substitution range must be static");
    if (!isStatic(t)) throw DomainError("non-static type in substitution: " + ghm::show(t));
    m_[x] = std::move(t);
}

Type Subst::lookup(const std::string& x) const {
    auto it = m_.find(x);
    return it == m_.end() ? nullptr : it->second;
}

std::set<std::string> Subst::domain() const {
    std::set<std::string> d;
    for (auto& [k, v] : m_) d.insert(k);
    return d;
}

std::set<std::string> Subst::rangeFtv() const {
    std::set<std::string> r;
    for (auto& [k, v] : m_) ftvInto(v, r);
    return r;
}

Type Subst::apply(const Type& t) const {
    if (m_.empty()) return t;
    switch (t->kind) {
        case TK::Var: {
            auto it = m_.find(t->name);
            return it == m_.end() ? t : it->second;
        }
        case TK::Arrow: {
            Type d = apply(t->dom), c = apply(t->cod);
            if (d == t->dom && c == t->cod) return t;
            return arrow(d, c);
        }
        default: return t;
    }
}

std::string Subst::show() const {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (auto& [k, v] : m_) {
        if (!first) os << ", ";
        first = false;
        os << "'" << k << " := " << ghm::show(v);
    }
    os << "]";
    return os.str();
}

bool Subst::operator==(const Subst& o) const {
    if (m_.size() != o.m_.size()) return false;
    for (auto& [k, v] : m_) {
        auto it = o.m_.find(k);
        if (it == o.m_.end() || !typeEq(v, it->second)) return false;
    }
    return true;
}

Subst compose(const Subst& s2, const Subst& s1) {
    Subst r;
    for (auto& [k, v] : s1.bindings()) r.bind(k, s2.apply(v));
    for (auto& [k, v] : s2.bindings())
        if (!s1.has(k)) r.bind(k, v);
    return r;
}

Subst disjointUnion(const Subst& a, const Subst& b) {
    Subst r = a;
    for (auto& [k, v] : b.bindings()) {
        if (a.has(k)) throw DomainError("overlapping domains in disjoint union at '" + k);
        r.bind(k, v);
    }
    return r;
}

std::set<std::string> ftv(const Scheme& s) {
    auto f = ftv(s.body);
    for (auto& b : s.binders) f.erase(b);
    return f;
}

std::set<std::string> ftv(const Env& env) {
    std::set<std::string> out;
    for (auto& [k, sc] : env) {
        auto f = ftv(sc);
        out.insert(f.begin(), f.end());
    }
    return out;
}

Scheme applySubst(const Subst& s, const Scheme& sc) {
    if (sc.binders.empty()) return {{}, s.apply(sc.body)};
    Subst inner = s;
    for (auto& b : sc.binders) inner.erase(b);
    // binders never clash with range variables in practice, but rename if they do
    auto range = inner.rangeFtv();
    Scheme out = sc;
    Subst ren;
    auto avoid = range;
    auto bf = ftv(sc.body);
    avoid.insert(bf.begin(), bf.end());
    for (auto& b : out.binders) {
        if (range.count(b)) {
            std::string nb = freshAway(b, avoid);
            avoid.insert(nb);
            ren.bind(b, tvar(nb));
            b = nb;
        }
    }
    out.body = inner.apply(ren.apply(sc.body));
    return out;
}

Env applySubst(const Subst& s, const Env& env) {
    if (s.empty()) return env;
    Env out;
    for (auto& [k, sc] : env) out[k] = applySubst(s, sc);
    return out;
}

std::string freshAway(const std::string& base, const std::set<std::string>& avoid) {
    if (!avoid.count(base)) return base;
    for (int i = 1;; ++i) {
        std::string c = base + "_" + std::to_string(i);
        if (!avoid.count(c)) return c;
    }
}

std::string Fresh::operator()() {
    for (;;) {
        std::string n = prefix_ + std::to_string(next_++);
        if (!avoid_.count(n)) return n;
    }
}

}  // namespace ghm
