#include "formula.hpp"

#include <algorithm>
#include <stdexcept>

namespace vlens {

namespace F {

FPtr tru() {
    static FPtr t = std::make_shared<Formula>(Formula{FK::True, {}, {}, {}, {}, BuiltinOp::Eq, {}, {}});
    return t;
}

FPtr fls() {
    static FPtr f = std::make_shared<Formula>(Formula{FK::False, {}, {}, {}, {}, BuiltinOp::Eq, {}, {}});
    return f;
}

FPtr atom(std::string pred, std::vector<Term> args) {
    for (const auto& t : args)
        if (t.is_anon()) throw std::invalid_argument("anonymous term in formula atom " + pred);
    Formula f;
    f.kind = FK::Atom;
    f.pred = std::move(pred);
    f.args = std::move(args);
    return std::make_shared<Formula>(std::move(f));
}

FPtr eq(Term l, Term r) {
    if (l.is_anon() || r.is_anon()) throw std::invalid_argument("anonymous term in equality");
    // A ground equality decides itself.
    if (l.is_const() && r.is_const()) return l.value == r.value ? tru() : fls();
    if (l == r) return tru();
    Formula f;
    f.kind = FK::Eq;
    f.lhs = std::move(l);
    f.rhs = std::move(r);
    return std::make_shared<Formula>(std::move(f));
}

FPtr cmp(BuiltinOp op, Term l, Term r) {
    if (op == BuiltinOp::Eq) return eq(std::move(l), std::move(r));
    if (l.is_anon() || r.is_anon()) throw std::invalid_argument("anonymous term in comparison");
    if (l.is_const() && r.is_const()) {
        if (l.value.type() != r.value.type()) return fls();
        bool lt = l.value < r.value;
        bool gt = r.value < l.value;
        return (op == BuiltinOp::Lt ? lt : gt) ? tru() : fls();
    }
    Formula f;
    f.kind = FK::Cmp;
    f.op = op;
    f.lhs = std::move(l);
    f.rhs = std::move(r);
    return std::make_shared<Formula>(std::move(f));
}

FPtr negate(FPtr f) {
    if (f->kind == FK::True) return fls();
    if (f->kind == FK::False) return tru();
    Formula n;
    n.kind = FK::Not;
    n.kids = {std::move(f)};
    return std::make_shared<Formula>(std::move(n));
}

static FPtr nary(FK kind, std::vector<FPtr> fs) {
    const bool is_and = kind == FK::And;
    const FPtr neutral = is_and ? tru() : fls();
    const FK dominator = is_and ? FK::False : FK::True;
    std::vector<FPtr> flat;
    std::set<std::string> seen;
    // Flatten one level at a time (children are already flat by construction).
    std::function<bool(const std::vector<FPtr>&)> take = [&](const std::vector<FPtr>& xs) {
        for (const auto& x : xs) {
            if (x->kind == kind) {
                if (!take(x->kids)) return false;
                continue;
            }
            if (x->kind == neutral->kind) continue;
            if (x->kind == dominator) return false;
            if (seen.insert(print_formula(x)).second) flat.push_back(x);
        }
        return true;
    };
    if (!take(fs)) return is_and ? fls() : tru();
    if (flat.empty()) return neutral;
    if (flat.size() == 1) return flat[0];
    Formula f;
    f.kind = kind;
    f.kids = std::move(flat);
    return std::make_shared<Formula>(std::move(f));
}

FPtr conj(std::vector<FPtr> fs) { return nary(FK::And, std::move(fs)); }
FPtr disj(std::vector<FPtr> fs) { return nary(FK::Or, std::move(fs)); }

FPtr exists(std::vector<std::string> vs, FPtr f) {
    if (f->kind == FK::True || f->kind == FK::False) return f;
    // Keep only variables that are actually free in the body.
    auto fv = free_vars(f);
    std::vector<std::string> kept;
    for (auto& v : vs)
        if (fv.count(v) && std::find(kept.begin(), kept.end(), v) == kept.end()) kept.push_back(v);
    if (kept.empty()) return f;
    // Merge directly nested quantifiers: ∃x (∃y φ) = ∃x,y φ.
    if (f->kind == FK::Exists) {
        for (auto& v : f->vars)
            if (std::find(kept.begin(), kept.end(), v) == kept.end()) kept.push_back(v);
        f = f->kids[0];
    }
    Formula e;
    e.kind = FK::Exists;
    e.vars = std::move(kept);
    e.kids = {std::move(f)};
    return std::make_shared<Formula>(std::move(e));
}

FPtr forall(std::vector<std::string> vs, FPtr f) {
    if (f->kind == FK::True || f->kind == FK::False) return f;
    auto fv = free_vars(f);
    std::vector<std::string> kept;
    for (auto& v : vs)
        if (fv.count(v) && std::find(kept.begin(), kept.end(), v) == kept.end()) kept.push_back(v);
    if (kept.empty()) return f;
    if (f->kind == FK::Forall) {
        for (auto& v : f->vars)
            if (std::find(kept.begin(), kept.end(), v) == kept.end()) kept.push_back(v);
        f = f->kids[0];
    }
    Formula e;
    e.kind = FK::Forall;
    e.vars = std::move(kept);
    e.kids = {std::move(f)};
    return std::make_shared<Formula>(std::move(e));
}

FPtr implies(FPtr lhs, FPtr rhs) {
    if (lhs->kind == FK::True) return rhs;
    if (lhs->kind == FK::False) return tru();
    if (rhs->kind == FK::True) return tru();
    if (rhs->kind == FK::False) return negate(std::move(lhs));
    Formula f;
    f.kind = FK::Implies;
    f.kids = {std::move(lhs), std::move(rhs)};
    return std::make_shared<Formula>(std::move(f));
}

}  // namespace F

// ---------------------------------------------------------------------------

namespace {

// And/Or nodes print their own parentheses; equalities and comparisons are
// the only children that need explicit wrapping under ¬.
bool needs_parens_under_not(const Formula& f) {
    return f.kind == FK::Eq || f.kind == FK::Cmp;
}

}  // namespace

std::string print_formula(const FPtr& f) {
    switch (f->kind) {
        case FK::True: return "⊤";
        case FK::False: return "⊥";
        case FK::Atom: {
            std::string s = f->pred + "(";
            for (size_t i = 0; i < f->args.size(); ++i) {
                if (i) s += ", ";
                s += print_term(f->args[i]);
            }
            return s + ")";
        }
        case FK::Eq: return print_term(f->lhs) + " = " + print_term(f->rhs);
        case FK::Cmp:
            return print_term(f->lhs) + (f->op == BuiltinOp::Lt ? " < " : " > ") + print_term(f->rhs);
        case FK::Not: {
            const FPtr& k = f->kids[0];
            if (needs_parens_under_not(*k)) return "¬(" + print_formula(k) + ")";
            return "¬" + print_formula(k);
        }
        case FK::And:
        case FK::Or: {
            std::string sep = f->kind == FK::And ? " ∧ " : " ∨ ";
            std::string s = "(";
            for (size_t i = 0; i < f->kids.size(); ++i) {
                if (i) s += sep;
                s += print_formula(f->kids[i]);
            }
            return s + ")";
        }
        case FK::Exists:
        case FK::Forall: {
            std::string s = f->kind == FK::Exists ? "∃" : "∀";
            for (size_t i = 0; i < f->vars.size(); ++i) {
                if (i) s += ",";
                s += f->vars[i];
            }
            const FPtr& k = f->kids[0];
            if (k->kind == FK::And || k->kind == FK::Or || k->kind == FK::Implies)
                return s + " " + print_formula(k);
            return s + " (" + print_formula(k) + ")";
        }
        case FK::Implies:
            return "(" + print_formula(f->kids[0]) + " → " + print_formula(f->kids[1]) + ")";
    }
    return "?";
}

std::set<std::string> free_vars(const FPtr& f) {
    std::set<std::string> out;
    std::function<void(const FPtr&, std::set<std::string>&)> go = [&](const FPtr& g,
                                                                      std::set<std::string>& bound) {
        switch (g->kind) {
            case FK::Atom:
                for (const auto& t : g->args)
                    if (t.is_var() && !bound.count(t.name)) out.insert(t.name);
                return;
            case FK::Eq:
            case FK::Cmp:
                for (const Term* t : {&g->lhs, &g->rhs})
                    if (t->is_var() && !bound.count(t->name)) out.insert(t->name);
                return;
            case FK::Exists:
            case FK::Forall: {
                std::set<std::string> b2 = bound;
                for (const auto& v : g->vars) b2.insert(v);
                go(g->kids[0], b2);
                return;
            }
            default:
                for (const auto& k : g->kids) go(k, bound);
                return;
        }
    };
    std::set<std::string> bound;
    go(f, bound);
    return out;
}

std::set<std::string> all_vars(const FPtr& f) {
    std::set<std::string> out;
    std::function<void(const FPtr&)> go = [&](const FPtr& g) {
        switch (g->kind) {
            case FK::Atom:
                for (const auto& t : g->args)
                    if (t.is_var()) out.insert(t.name);
                return;
            case FK::Eq:
            case FK::Cmp:
                for (const Term* t : {&g->lhs, &g->rhs})
                    if (t->is_var()) out.insert(t->name);
                return;
            case FK::Exists:
            case FK::Forall:
                for (const auto& v : g->vars) out.insert(v);
                go(g->kids[0]);
                return;
            default:
                for (const auto& k : g->kids) go(k);
                return;
        }
    };
    go(f);
    return out;
}

std::map<AttrType, std::set<Value>> formula_constants(const FPtr& f) {
    std::map<AttrType, std::set<Value>> out;
    std::function<void(const FPtr&)> go = [&](const FPtr& g) {
        auto note = [&](const Term& t) {
            if (t.is_const()) out[t.value.type()].insert(t.value);
        };
        switch (g->kind) {
            case FK::Atom:
                for (const auto& t : g->args) note(t);
                return;
            case FK::Eq:
            case FK::Cmp:
                note(g->lhs);
                note(g->rhs);
                return;
            default:
                for (const auto& k : g->kids) go(k);
                return;
        }
    };
    go(f);
    return out;
}

std::map<std::string, size_t> formula_predicates(const FPtr& f) {
    std::map<std::string, size_t> out;
    std::function<void(const FPtr&)> go = [&](const FPtr& g) {
        if (g->kind == FK::Atom) {
            out[g->pred] = g->args.size();
            return;
        }
        for (const auto& k : g->kids) go(k);
    };
    go(f);
    return out;
}

void FreshGen::reserve_all(const FPtr& f) {
    for (const auto& v : all_vars(f)) used_.insert(v);
}

void FreshGen::reserve_program(const Program& p) {
    auto take = [&](const Rule& r) {
        for (const auto& v : rule_vars(r)) used_.insert(v);
    };
    for (const auto& r : p.rules) take(r);
    for (const auto& c : p.constraints) take(c);
}

std::string FreshGen::fresh(const std::string& base) {
    int& n = next_[base];
    while (true) {
        ++n;
        std::string cand = base + std::to_string(n);
        if (used_.insert(cand).second) return cand;
    }
}

FPtr substitute(const FPtr& f, const std::map<std::string, Term>& sub) {
    if (sub.empty()) return f;
    // Variables that occur in the substitution's range; binding any of these
    // would capture, so such binders get renamed on the way down.
    std::set<std::string> range_vars;
    for (const auto& [k, t] : sub)
        if (t.is_var()) range_vars.insert(t.name);
    FreshGen fg;
    fg.reserve_all(f);
    for (const auto& v : range_vars) fg.reserve(v);
    for (const auto& [k, _] : sub) fg.reserve(k);

    std::function<FPtr(const FPtr&, const std::map<std::string, Term>&)> go =
        [&](const FPtr& g, const std::map<std::string, Term>& s) -> FPtr {
        auto term = [&](const Term& t) {
            if (!t.is_var()) return t;
            auto it = s.find(t.name);
            return it == s.end() ? t : it->second;
        };
        switch (g->kind) {
            case FK::True:
            case FK::False: return g;
            case FK::Atom: {
                std::vector<Term> as;
                for (const auto& a : g->args) as.push_back(term(a));
                return F::atom(g->pred, std::move(as));
            }
            case FK::Eq: return F::eq(term(g->lhs), term(g->rhs));
            case FK::Cmp: return F::cmp(g->op, term(g->lhs), term(g->rhs));
            case FK::Not: return F::negate(go(g->kids[0], s));
            case FK::And:
            case FK::Or: {
                std::vector<FPtr> ks;
                for (const auto& k : g->kids) ks.push_back(go(k, s));
                return g->kind == FK::And ? F::conj(std::move(ks)) : F::disj(std::move(ks));
            }
            case FK::Implies: return F::implies(go(g->kids[0], s), go(g->kids[1], s));
            case FK::Exists:
            case FK::Forall: {
                std::map<std::string, Term> s2 = s;
                std::vector<std::string> vs;
                std::map<std::string, Term> renames;
                for (const auto& v : g->vars) {
                    s2.erase(v);  // the binder shadows the substitution
                    if (range_vars.count(v)) {
                        std::string nv = fg.fresh(v);
                        renames[v] = Term::var(nv);
                        vs.push_back(nv);
                    } else {
                        vs.push_back(v);
                    }
                }
                FPtr body = g->kids[0];
                if (!renames.empty()) body = substitute(body, renames);
                FPtr inner = go(body, s2);
                return g->kind == FK::Exists ? F::exists(std::move(vs), std::move(inner))
                                             : F::forall(std::move(vs), std::move(inner));
            }
        }
        return g;
    };
    return go(f, sub);
}

FPtr replace_atoms(const FPtr& f, const AtomRewriter& rw) {
    std::function<FPtr(const FPtr&)> go = [&](const FPtr& g) -> FPtr {
        switch (g->kind) {
            case FK::Atom: {
                auto r = rw(g->pred, g->args);
                return r ? *r : g;
            }
            case FK::Not: return F::negate(go(g->kids[0]));
            case FK::And:
            case FK::Or: {
                std::vector<FPtr> ks;
                for (const auto& k : g->kids) ks.push_back(go(k));
                return g->kind == FK::And ? F::conj(std::move(ks)) : F::disj(std::move(ks));
            }
            case FK::Implies: return F::implies(go(g->kids[0]), go(g->kids[1]));
            case FK::Exists: return F::exists(g->vars, go(g->kids[0]));
            case FK::Forall: return F::forall(g->vars, go(g->kids[0]));
            default: return g;
        }
    };
    return go(f);
}

}  // namespace vlens
