#include "ast.hpp"

#include <algorithm>

namespace vlens {

std::string print_term(const Term& t) {
    switch (t.kind) {
        case TermKind::Variable: return t.name;
        case TermKind::Anonymous: return "_";
        case TermKind::Constant: return t.value.repr();
    }
    return "?";
}

std::string print_atom(const Atom& a) {
    std::string s = a.pred.key() + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ", ";
        s += print_term(a.args[i]);
    }
    return s + ")";
}

std::string print_literal(const Literal& l) {
    std::string s;
    if (l.negated) s += "not ";
    if (l.is_atom()) return s + print_atom(l.atom);
    const char* op = l.tag == Literal::Tag::Equality ? " = "
                     : l.op == BuiltinOp::Lt         ? " < "
                                                     : " > ";
    return s + print_term(l.lhs) + op + print_term(l.rhs);
}

std::string print_rule(const Rule& r) {
    std::string s = r.head ? print_atom(*r.head) : "_|_";
    s += " :- ";
    for (size_t i = 0; i < r.body.size(); ++i) {
        if (i) s += ", ";
        s += print_literal(r.body[i]);
    }
    return s + ".";
}

static std::string print_decl(const char* kw, const RelationDecl& d) {
    std::string s = std::string(kw) + " " + d.name + "(";
    for (size_t i = 0; i < d.attrs.size(); ++i) {
        if (i) s += ", ";
        s += d.attrs[i].name + ":" + to_string(d.attrs[i].type);
    }
    return s + ").";
}

std::string print_program(const Program& p) {
    std::string s;
    for (auto& src : p.schema.sources) s += print_decl("source", src) + "\n";
    if (!p.schema.view.name.empty()) s += print_decl("view", p.schema.view) + "\n";
    for (auto& r : p.rules) s += print_rule(r) + "\n";
    for (auto& c : p.constraints) s += print_rule(c) + "\n";
    return s;
}

std::vector<std::string> term_vars(const std::vector<Term>& ts) {
    std::vector<std::string> vs;
    for (auto& t : ts)
        if (t.is_var() && std::find(vs.begin(), vs.end(), t.name) == vs.end())
            vs.push_back(t.name);
    return vs;
}

std::vector<std::string> literal_vars(const Literal& l) {
    if (l.is_atom()) return term_vars(l.atom.args);
    return term_vars({l.lhs, l.rhs});
}

std::vector<std::string> rule_vars(const Rule& r) {
    std::vector<std::string> vs;
    auto add = [&](const std::vector<std::string>& more) {
        for (auto& v : more)
            if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    };
    if (r.head) add(term_vars(r.head->args));
    for (auto& l : r.body) add(literal_vars(l));
    return vs;
}

}  // namespace vlens
