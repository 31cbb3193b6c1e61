#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ghm {

struct DomainError : std::logic_error {
    using std::logic_error::logic_error;
};

struct NotMatchable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Base { Int, Bool, Unit };

enum class TK { Dyn, Var, Base, Arrow };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
    TK kind;
    Base base = Base::Int;
    std::string name;
    Type dom, cod;
};

Type dyn();
Type tvar(const std::string& name);
Type tbase(Base b);
Type tint();
Type tbool();
Type tunit();
Type arrow(Type a, Type b);
Type dynArrow();

bool isStatic(const Type& t);
bool typeEq(const Type& a, const Type& b);
bool consistent(const Type& a, const Type& b);
bool isGround(const Type& t);
Type groundOf(const Type& t);
std::pair<Type, Type> matching(const Type& t);

void ftvInto(const Type& t, std::set<std::string>& out);
std::set<std::string> ftv(const Type& t);
// free variables in first-occurrence order
void ftvOrdered(const Type& t, std::vector<std::string>& out);
bool occursIn(const std::string& x, const Type& t);
int typeSize(const Type& t);

const char* baseName(Base b);
std::string show(const Type& t);

// Finite map from type variables to static types.
class Subst {
public:
    Subst() = default;
    static Subst single(const std::string& x, Type t);

    void bind(const std::string& x, Type t);
    Type lookup(const std::string& x) const;
    bool has(const std::string& x) const { return m_.count(x) != 0; }
    bool empty() const { return m_.empty(); }
    size_t size() const { return m_.size(); }
    void erase(const std::string& x) { m_.erase(x); }
    const std::map<std::string, Type>& bindings() const { return m_; }
    std::set<std::string> domain() const;
    std::set<std::string> rangeFtv() const;

    Type apply(const Type& t) const;
    std::string show() const;

    bool operator==(const Subst& o) const;

private:
    std::map<std::string, Type> m_;
};

// compose(s2, s1) behaves like applying s1 then s2
Subst compose(const Subst& s2, const Subst& s1);
Subst disjointUnion(const Subst& a, const Subst& b);

struct Scheme {
    std::vector<std::string> binders;
    Type body;
};

using Env = std::map<std::string, Scheme>;

std::set<std::string> ftv(const Scheme& s);
std::set<std::string> ftv(const Env& env);
Env applySubst(const Subst& s, const Env& env);
Scheme applySubst(const Subst& s, const Scheme& sc);

// first name of the form base_N (or base itself) not in avoid
std::string freshAway(const std::string& base, const std::set<std::string>& avoid);

// Counter-backed generator of fresh type variable names with a fixed prefix.
class Fresh {
public:
    explicit Fresh(std::string prefix = "r", int start = 0) : prefix_(std::move(prefix)), next_(start) {}
    std::string operator()();
    void avoid(const std::set<std::string>& names) { avoid_.insert(names.begin(), names.end()); }
    int counter() const { return next_; }

private:
    std::string prefix_;
    int next_;
    std::set<std::string> avoid_;
};

}  // namespace ghm
