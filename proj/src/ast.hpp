#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "value.hpp"

namespace vlens {

// --------------------------------------------------------------------------
// Terms
// --------------------------------------------------------------------------

enum class TermKind { Variable, Anonymous, Constant };

struct Term {
    TermKind kind = TermKind::Anonymous;
    std::string name;  // variable name
    Value value;       // constant payload

    static Term var(std::string n) { return {TermKind::Variable, std::move(n), {}}; }
    static Term anon() { return {TermKind::Anonymous, {}, {}}; }
    static Term constant(Value v) { return {TermKind::Constant, {}, std::move(v)}; }

    bool is_var() const { return kind == TermKind::Variable; }
    bool is_anon() const { return kind == TermKind::Anonymous; }
    bool is_const() const { return kind == TermKind::Constant; }

    friend bool operator==(const Term& a, const Term& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == TermKind::Variable) return a.name == b.name;
        if (a.kind == TermKind::Constant) return a.value == b.value;
        return true;
    }
    friend auto operator<=>(const Term& a, const Term& b) {
        if (auto c = a.kind <=> b.kind; c != 0) return c;
        if (a.kind == TermKind::Variable) return a.name <=> b.name;
        if (a.kind == TermKind::Constant) return a.value <=> b.value;
        return std::strong_ordering::equal;
    }
};

// --------------------------------------------------------------------------
// Predicates and atoms
// --------------------------------------------------------------------------

/// How a predicate name is used. Delta predicates (+r / -r) carry the name of
/// the relation they update; `name` is always the base relation name.
enum class PredKind { Source, View, DeltaInsert, DeltaDelete, Intermediate };

struct PredicateRef {
    std::string name;
    PredKind kind = PredKind::Intermediate;

    /// Canonical spelling: "+r" / "-r" for deltas, the bare name otherwise.
    std::string key() const {
        switch (kind) {
            case PredKind::DeltaInsert: return "+" + name;
            case PredKind::DeltaDelete: return "-" + name;
            default: return name;
        }
    }
    bool is_delta() const {
        return kind == PredKind::DeltaInsert || kind == PredKind::DeltaDelete;
    }
    friend bool operator==(const PredicateRef&, const PredicateRef&) = default;
    friend auto operator<=>(const PredicateRef& a, const PredicateRef& b) {
        if (auto c = a.name <=> b.name; c != 0) return c;
        return a.kind <=> b.kind;
    }
};

struct Atom {
    PredicateRef pred;
    std::vector<Term> args;
    friend bool operator==(const Atom&, const Atom&) = default;
};

// --------------------------------------------------------------------------
// Literals and rules
// --------------------------------------------------------------------------

enum class BuiltinOp { Eq, Lt, Gt };

/// A body literal: a (possibly negated) atom, equality, or comparison.
struct Literal {
    enum class Tag { Atom, Equality, Comparison } tag = Tag::Atom;
    bool negated = false;
    Atom atom;          // Tag::Atom
    Term lhs, rhs;      // builtins
    BuiltinOp op = BuiltinOp::Eq;

    static Literal positive(Atom a) { return {Tag::Atom, false, std::move(a), {}, {}, BuiltinOp::Eq}; }
    static Literal negative(Atom a) { return {Tag::Atom, true, std::move(a), {}, {}, BuiltinOp::Eq}; }
    static Literal equality(Term l, Term r, bool neg = false) {
        return {Tag::Equality, neg, {}, std::move(l), std::move(r), BuiltinOp::Eq};
    }
    static Literal comparison(BuiltinOp o, Term l, Term r, bool neg = false) {
        return {Tag::Comparison, neg, {}, std::move(l), std::move(r), o};
    }

    bool is_atom() const { return tag == Tag::Atom; }
    bool is_builtin() const { return tag != Tag::Atom; }
    friend bool operator==(const Literal&, const Literal&) = default;
};

/// A rule. A missing head denotes a constraint (head _|_): the body must
/// never be satisfiable on admissible database states.
struct Rule {
    std::optional<Atom> head;
    std::vector<Literal> body;
    int line = 0;

    bool is_constraint() const { return !head.has_value(); }
    friend bool operator==(const Rule& a, const Rule& b) {
        return a.head == b.head && a.body == b.body;
    }
};

// --------------------------------------------------------------------------
// Schema and program
// --------------------------------------------------------------------------

struct Attribute {
    std::string name;
    AttrType type = AttrType::Int;
    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct RelationDecl {
    std::string name;
    std::vector<Attribute> attrs;
    size_t arity() const { return attrs.size(); }
    std::vector<AttrType> types() const {
        std::vector<AttrType> ts;
        for (auto& a : attrs) ts.push_back(a.type);
        return ts;
    }
    friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};

struct Schema {
    std::vector<RelationDecl> sources;
    RelationDecl view;

    const RelationDecl* find_source(const std::string& n) const {
        for (auto& s : sources)
            if (s.name == n) return &s;
        return nullptr;
    }
    friend bool operator==(const Schema&, const Schema&) = default;
};

/// A parsed program unit: declarations, ordinary rules, and constraints.
/// Intermediate predicate signatures are inferred during parsing.
struct Program {
    Schema schema;
    std::vector<Rule> rules;
    std::vector<Rule> constraints;
    std::map<std::string, std::vector<AttrType>> intermediates;

    friend bool operator==(const Program& a, const Program& b) {
        return a.schema == b.schema && a.rules == b.rules && a.constraints == b.constraints;
    }
};

// --------------------------------------------------------------------------
// Printing (deterministic; parse(print(p)) == p)
// --------------------------------------------------------------------------

std::string print_term(const Term& t);
std::string print_atom(const Atom& a);
std::string print_literal(const Literal& l);
std::string print_rule(const Rule& r);
std::string print_program(const Program& p);

/// Named variables of a term list, in order of first occurrence.
std::vector<std::string> term_vars(const std::vector<Term>& ts);
/// Named variables of a literal.
std::vector<std::string> literal_vars(const Literal& l);
/// Named variables of a whole rule (head + body), first-occurrence order.
std::vector<std::string> rule_vars(const Rule& r);

}  // namespace vlens
