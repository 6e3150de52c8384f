#include "normalize.hpp"

#include <functional>
#include <map>
#include <utility>

namespace vlens {

namespace {

using RR = std::optional<std::set<std::string>>;

// ---------------------------------------------------------------------------
// Negation pushing
// ---------------------------------------------------------------------------

/// ¬g for g already normalized: flips ⊤/⊥, cancels ¬¬, drives the negation
/// through ∧/∨, and stops at atoms, builtins, and quantifiers.
FPtr push_not(const FPtr& g) {
    switch (g->kind) {
        case FK::True: return F::fls();
        case FK::False: return F::tru();
        case FK::Atom:
        case FK::Eq:
        case FK::Cmp:
        case FK::Exists: return F::negate(g);
        case FK::Not: return g->kids[0];
        case FK::And:
        case FK::Or: {
            std::vector<FPtr> ks;
            ks.reserve(g->kids.size());
            for (const auto& k : g->kids) ks.push_back(push_not(k));
            return g->kind == FK::And ? F::disj(std::move(ks)) : F::conj(std::move(ks));
        }
        case FK::Forall:
        case FK::Implies: break;
    }
    throw std::logic_error("push_not applied before normalization: " + print_formula(g));
}

}  // namespace

FPtr to_srnf(const FPtr& f) {
    switch (f->kind) {
        case FK::True:
        case FK::False:
        case FK::Atom:
        case FK::Eq:
        case FK::Cmp: return f;
        case FK::Not: return push_not(to_srnf(f->kids[0]));
        case FK::And:
        case FK::Or: {
            std::vector<FPtr> ks;
            ks.reserve(f->kids.size());
            for (const auto& k : f->kids) ks.push_back(to_srnf(k));
            return f->kind == FK::And ? F::conj(std::move(ks)) : F::disj(std::move(ks));
        }
        case FK::Exists: return F::exists(f->vars, to_srnf(f->kids[0]));
        case FK::Forall:
            // ∀x⃗ ψ = ¬∃x⃗ ¬ψ
            return push_not(F::exists(f->vars, push_not(to_srnf(f->kids[0]))));
        case FK::Implies:
            // ψ1 → ψ2 = ¬ψ1 ∨ ψ2
            return F::disj({push_not(to_srnf(f->kids[0])), to_srnf(f->kids[1])});
    }
    return f;
}

// ---------------------------------------------------------------------------
// Range restriction
// ---------------------------------------------------------------------------

RR range_restricted_vars(const FPtr& f) {
    switch (f->kind) {
        case FK::True:
        case FK::False:
        case FK::Cmp: return std::set<std::string>{};
        case FK::Atom: {
            std::set<std::string> s;
            for (const auto& t : f->args)
                if (t.is_var()) s.insert(t.name);
            return s;
        }
        case FK::Eq: {
            if (f->lhs.is_var() && f->rhs.is_const()) return std::set<std::string>{f->lhs.name};
            if (f->rhs.is_var() && f->lhs.is_const()) return std::set<std::string>{f->rhs.name};
            return std::set<std::string>{};  // x = y restricts nothing by itself
        }
        case FK::Not: {
            // Restrictions under ¬ do not escape, but a failure inside does.
            if (!range_restricted_vars(f->kids[0])) return std::nullopt;
            return std::set<std::string>{};
        }
        case FK::Or: {
            std::optional<std::set<std::string>> acc;
            for (const auto& k : f->kids) {
                RR r = range_restricted_vars(k);
                if (!r) return std::nullopt;
                if (!acc) {
                    acc = std::move(*r);
                } else {
                    std::set<std::string> both;
                    for (const auto& v : *acc)
                        if (r->count(v)) both.insert(v);
                    acc = std::move(both);
                }
            }
            return acc ? *acc : std::set<std::string>{};
        }
        case FK::And: {
            // Union over the conjuncts, then propagate through the var-to-var
            // equalities: restricting either side restricts both.
            std::set<std::string> s;
            std::vector<std::pair<std::string, std::string>> eqs;
            for (const auto& k : f->kids) {
                if (k->kind == FK::Eq && k->lhs.is_var() && k->rhs.is_var()) {
                    eqs.emplace_back(k->lhs.name, k->rhs.name);
                    continue;
                }
                RR r = range_restricted_vars(k);
                if (!r) return std::nullopt;
                s.insert(r->begin(), r->end());
            }
            for (bool changed = true; changed;) {
                changed = false;
                for (const auto& [a, b] : eqs)
                    if (s.count(a) || s.count(b)) {
                        if (s.insert(a).second) changed = true;
                        if (s.insert(b).second) changed = true;
                    }
            }
            return s;
        }
        case FK::Exists: {
            RR r = range_restricted_vars(f->kids[0]);
            if (!r) return std::nullopt;
            for (const auto& v : f->vars)
                if (!r->count(v)) return std::nullopt;  // a bound variable escapes
            for (const auto& v : f->vars) r->erase(v);
            return r;
        }
        case FK::Forall:
        case FK::Implies: break;
    }
    throw std::logic_error("range restriction requires normalized input: " + print_formula(f));
}

bool is_safe_range(const FPtr& f) {
    FPtr g = to_srnf(f);
    RR r = range_restricted_vars(g);
    return r && *r == free_vars(g);
}

// ---------------------------------------------------------------------------
// RANF
// ---------------------------------------------------------------------------

namespace {

/// No ∀/→ and nothing but atoms, builtins, and ∃ directly under ¬.
bool srnf_shaped(const FPtr& f) {
    switch (f->kind) {
        case FK::Forall:
        case FK::Implies: return false;
        case FK::Not: {
            const FPtr& k = f->kids[0];
            if (k->kind != FK::Atom && k->kind != FK::Eq && k->kind != FK::Cmp &&
                k->kind != FK::Exists)
                return false;
            return srnf_shaped(k);
        }
        default:
            for (const auto& k : f->kids)
                if (!srnf_shaped(k)) return false;
            return true;
    }
}

bool restricts_exactly_its_frees(const FPtr& f) {
    RR r = range_restricted_vars(f);
    return r && *r == free_vars(f);
}

}  // namespace

bool is_ranf(const FPtr& f) {
    if (!srnf_shaped(f)) return false;
    std::function<bool(const FPtr&)> go = [&](const FPtr& g) -> bool {
        switch (g->kind) {
            case FK::Or:
                if (!restricts_exactly_its_frees(g)) return false;
                break;
            case FK::Exists:
                if (!restricts_exactly_its_frees(g->kids[0])) return false;
                break;
            default: break;
        }
        for (const auto& k : g->kids)
            if (!go(k)) return false;
        return true;
    };
    return go(f);
}

namespace {

FPtr ranf_fix(const FPtr& f);

/// Rebuild the disjunction with the first `n` of `others` conjoined into
/// every branch; nullptr when that still fails to close it.
FPtr try_or_push(const FPtr& orNode, const std::vector<FPtr>& others, size_t n) {
    std::vector<FPtr> branches;
    branches.reserve(orNode->kids.size());
    for (const auto& b : orNode->kids) {
        std::vector<FPtr> c;
        c.reserve(n + 1);
        c.push_back(b);
        c.insert(c.end(), others.begin(), others.begin() + n);
        branches.push_back(F::conj(std::move(c)));
    }
    FPtr cand = F::disj(std::move(branches));
    return restricts_exactly_its_frees(cand) ? cand : nullptr;
}

/// Rebuild ∃x⃗ ξ with the first `n` of `others` conjoined into the body,
/// renaming x⃗ away from their free variables; nullptr when the body still
/// is not safe-range.
FPtr try_quant_push(const FPtr& exNode, const std::vector<FPtr>& others, size_t n) {
    std::vector<std::string> vs = exNode->vars;
    FPtr body = exNode->kids[0];
    std::set<std::string> avoid;
    for (size_t j = 0; j < n; ++j) {
        auto fv = free_vars(others[j]);
        avoid.insert(fv.begin(), fv.end());
    }
    FreshGen fg;
    fg.reserve_all(exNode);
    for (size_t j = 0; j < n; ++j) fg.reserve_all(others[j]);
    std::map<std::string, Term> ren;
    for (auto& v : vs)
        if (avoid.count(v)) {
            std::string nv = fg.fresh(v);
            ren[v] = Term::var(nv);
            v = nv;
        }
    if (!ren.empty()) body = substitute(body, ren);
    std::vector<FPtr> inner(others.begin(), others.begin() + n);
    inner.push_back(body);
    FPtr cinner = F::conj(std::move(inner));
    if (!restricts_exactly_its_frees(cinner)) return nullptr;
    return F::exists(std::move(vs), std::move(cinner));
}

/// The conjunction-level repair loop: any disjunct or quantified body that
/// does not restrict its own free variables absorbs the smallest prefix of
/// its sibling conjuncts that closes it. Pushed siblings disappear from the
/// conjunction except under negation, where removing them would not be
/// equivalence-preserving.
std::vector<FPtr> repair_conjuncts(std::vector<FPtr> kids) {
    auto others_of = [&](size_t i) {
        std::vector<FPtr> o;
        o.reserve(kids.size() - 1);
        for (size_t j = 0; j < kids.size(); ++j)
            if (j != i) o.push_back(kids[j]);
        return o;
    };
    for (bool progress = true; progress;) {
        progress = false;
        for (size_t i = 0; i < kids.size() && !progress; ++i) {
            const FPtr k = kids[i];
            if (k->kind == FK::Or && !restricts_exactly_its_frees(k)) {
                std::vector<FPtr> others = others_of(i);
                for (size_t n = 0; n <= others.size(); ++n) {
                    if (FPtr cand = try_or_push(k, others, n)) {
                        std::vector<FPtr> next(others.begin() + n, others.end());
                        next.push_back(std::move(cand));
                        kids = std::move(next);
                        progress = true;
                        break;
                    }
                }
                if (!progress)
                    throw NormalizeError("cannot close the disjunction: " + print_formula(k));
            } else if (k->kind == FK::Exists && !restricts_exactly_its_frees(k->kids[0])) {
                std::vector<FPtr> others = others_of(i);
                for (size_t n = 0; n <= others.size(); ++n) {
                    if (FPtr cand = try_quant_push(k, others, n)) {
                        std::vector<FPtr> next(others.begin() + n, others.end());
                        next.push_back(std::move(cand));
                        kids = std::move(next);
                        progress = true;
                        break;
                    }
                }
                if (!progress)
                    throw NormalizeError("cannot close the quantified body: " + print_formula(k));
            } else if (k->kind == FK::Not && k->kids[0]->kind == FK::Exists &&
                       !restricts_exactly_its_frees(k->kids[0]->kids[0])) {
                std::vector<FPtr> others = others_of(i);
                for (size_t n = 0; n <= others.size(); ++n) {
                    if (FPtr cand = try_quant_push(k->kids[0], others, n)) {
                        kids[i] = F::negate(std::move(cand));  // siblings stay
                        progress = true;
                        break;
                    }
                }
                if (!progress)
                    throw NormalizeError("cannot close the negated quantified body: " +
                                         print_formula(k));
            }
        }
    }
    return kids;
}

FPtr ranf_fix(const FPtr& f) {
    switch (f->kind) {
        case FK::True:
        case FK::False:
        case FK::Atom:
        case FK::Eq:
        case FK::Cmp: return f;
        case FK::Not: return F::negate(ranf_fix(f->kids[0]));
        case FK::Or: {
            if (!restricts_exactly_its_frees(f))
                throw NormalizeError("disjunction is not self-contained: " + print_formula(f));
            std::vector<FPtr> ks;
            ks.reserve(f->kids.size());
            for (const auto& k : f->kids) ks.push_back(ranf_fix(k));
            return F::disj(std::move(ks));
        }
        case FK::Exists: {
            if (!restricts_exactly_its_frees(f->kids[0]))
                throw NormalizeError("quantified body is not safe-range: " + print_formula(f));
            return F::exists(f->vars, ranf_fix(f->kids[0]));
        }
        case FK::And: {
            std::vector<FPtr> kids = repair_conjuncts(f->kids);
            for (auto& k : kids) k = ranf_fix(k);
            return F::conj(std::move(kids));
        }
        case FK::Forall:
        case FK::Implies: break;
    }
    throw std::logic_error("ranf_fix applied before normalization: " + print_formula(f));
}

}  // namespace

FPtr to_ranf(const FPtr& f0) {
    FPtr f = to_srnf(f0);
    RR r = range_restricted_vars(f);
    if (!r || *r != free_vars(f))
        throw NormalizeError("formula is not safe-range: " + print_formula(f));
    return ranf_fix(f);
}

// ---------------------------------------------------------------------------
// RANF → Datalog
// ---------------------------------------------------------------------------

namespace {

PredicateRef pred_for_key(const std::string& key) {
    if (key.size() > 1 && (key[0] == '+' || key[0] == '-'))
        return {key.substr(1), key[0] == '+' ? PredKind::DeltaInsert : PredKind::DeltaDelete};
    return {key, PredKind::Intermediate};
}

std::vector<std::string> sorted_free(const FPtr& f) {
    auto s = free_vars(f);
    return {s.begin(), s.end()};
}

/// Builtin literal for an Eq/Cmp node, oriented variable-first.
Literal builtin_literal(const FPtr& g, bool negated) {
    Term l = g->lhs, r = g->rhs;
    if (g->kind == FK::Eq) {
        if (l.is_const() && r.is_var()) std::swap(l, r);
        return Literal::equality(std::move(l), std::move(r), negated);
    }
    BuiltinOp op = g->op;
    if (l.is_const() && r.is_var()) {
        std::swap(l, r);
        op = op == BuiltinOp::Lt ? BuiltinOp::Gt : BuiltinOp::Lt;
    }
    return Literal::comparison(op, std::move(l), std::move(r), negated);
}

struct QueryBuilder {
    FreshGen& pg;
    std::vector<Rule> rules;

    void add_rule(const std::string& G, const std::vector<std::string>& xs,
                  std::vector<Literal> body) {
        Rule r;
        std::vector<Term> hargs;
        hargs.reserve(xs.size());
        for (const auto& x : xs) hargs.push_back(Term::var(x));
        r.head = Atom{pred_for_key(G), std::move(hargs)};
        r.body = std::move(body);
        rules.push_back(std::move(r));
    }

    /// ∃x⃗ ξ as a single body literal: the bound positions become wildcards.
    /// A one-use-per-variable atom body needs no auxiliary predicate; any
    /// other body gets one, over its own free variables.
    Literal quantified_literal(const FPtr& ex, bool negated) {
        std::set<std::string> bound(ex->vars.begin(), ex->vars.end());
        const FPtr& body = ex->kids[0];
        if (body->kind == FK::Atom) {
            std::map<std::string, int> uses;
            for (const auto& a : body->args)
                if (a.is_var()) ++uses[a.name];
            bool once = true;
            for (const auto& v : ex->vars)
                if (uses[v] != 1) once = false;
            if (once) {
                std::vector<Term> as;
                as.reserve(body->args.size());
                for (const auto& a : body->args)
                    as.push_back(a.is_var() && bound.count(a.name) ? Term::anon() : a);
                Atom at{pred_for_key(body->pred), std::move(as)};
                return negated ? Literal::negative(std::move(at))
                               : Literal::positive(std::move(at));
            }
        }
        std::vector<std::string> ws = sorted_free(body);
        std::string q = pg.fresh("q");
        translate(body, q, ws);
        std::vector<Term> as;
        as.reserve(ws.size());
        for (const auto& w : ws) as.push_back(bound.count(w) ? Term::anon() : Term::var(w));
        Atom at{PredicateRef{q, PredKind::Intermediate}, std::move(as)};
        return negated ? Literal::negative(std::move(at)) : Literal::positive(std::move(at));
    }

    void translate(const FPtr& f, const std::string& G, const std::vector<std::string>& xs) {
        switch (f->kind) {
            case FK::False: return;  // no rules: the goal is empty
            case FK::Atom:
                add_rule(G, xs, {Literal::positive(Atom{pred_for_key(f->pred), f->args})});
                return;
            case FK::Eq:
                if ((f->lhs.is_var() && f->rhs.is_const()) ||
                    (f->rhs.is_var() && f->lhs.is_const())) {
                    add_rule(G, xs, {builtin_literal(f, false)});
                    return;
                }
                break;
            case FK::Or: {
                const std::set<std::string> gs(xs.begin(), xs.end());
                for (const auto& b : f->kids) {
                    if (free_vars(b) != gs)
                        throw NormalizeError("disjunct changes the free variables: " +
                                             print_formula(b));
                    translate(b, G, xs);
                }
                return;
            }
            case FK::Exists: {
                const FPtr& body = f->kids[0];
                if (body->kind == FK::Atom) {
                    // Projection is implicit: body variables missing from the
                    // head are existential.
                    add_rule(G, xs,
                             {Literal::positive(Atom{pred_for_key(body->pred), body->args})});
                    return;
                }
                std::vector<std::string> zs = sorted_free(body);
                std::string q = pg.fresh("q");
                translate(body, q, zs);
                std::vector<Term> as;
                as.reserve(zs.size());
                for (const auto& z : zs) as.push_back(Term::var(z));
                add_rule(G, xs,
                         {Literal::positive(Atom{PredicateRef{q, PredKind::Intermediate},
                                                 std::move(as)})});
                return;
            }
            case FK::And: {
                std::vector<Literal> pos, builtins, negs;
                for (const auto& k : f->kids) {
                    switch (k->kind) {
                        case FK::Atom:
                            pos.push_back(
                                Literal::positive(Atom{pred_for_key(k->pred), k->args}));
                            break;
                        case FK::Eq:
                        case FK::Cmp: builtins.push_back(builtin_literal(k, false)); break;
                        case FK::Exists: pos.push_back(quantified_literal(k, false)); break;
                        case FK::Or: {
                            std::vector<std::string> zs = sorted_free(k);
                            if (zs.empty())
                                throw NormalizeError("closed subformula in a conjunction: " +
                                                     print_formula(k));
                            std::string q = pg.fresh("q");
                            translate(k, q, zs);
                            std::vector<Term> as;
                            as.reserve(zs.size());
                            for (const auto& z : zs) as.push_back(Term::var(z));
                            pos.push_back(Literal::positive(
                                Atom{PredicateRef{q, PredKind::Intermediate}, std::move(as)}));
                            break;
                        }
                        case FK::Not: {
                            const FPtr& inner = k->kids[0];
                            switch (inner->kind) {
                                case FK::Atom:
                                    negs.push_back(Literal::negative(
                                        Atom{pred_for_key(inner->pred), inner->args}));
                                    break;
                                case FK::Eq:
                                case FK::Cmp:
                                    negs.push_back(builtin_literal(inner, true));
                                    break;
                                case FK::Exists:
                                    negs.push_back(quantified_literal(inner, true));
                                    break;
                                default:
                                    throw NormalizeError("negation is not over an atom, "
                                                         "builtin, or quantifier: " +
                                                         print_formula(k));
                            }
                            break;
                        }
                        default:
                            throw NormalizeError("conjunct is not translatable: " +
                                                 print_formula(k));
                    }
                }
                std::vector<Literal> body = std::move(pos);
                body.insert(body.end(), builtins.begin(), builtins.end());
                body.insert(body.end(), negs.begin(), negs.end());
                add_rule(G, xs, std::move(body));
                return;
            }
            default: break;
        }
        throw NormalizeError("formula is not in relational normal form: " + print_formula(f));
    }
};

}  // namespace

DatalogQuery ranf_to_datalog(const FPtr& f, const std::string& goal,
                             const std::vector<std::string>& goal_vars, FreshGen& predgen) {
    std::set<std::string> gs(goal_vars.begin(), goal_vars.end());
    if (gs.size() != goal_vars.size())
        throw NormalizeError("repeated goal variable for " + goal);
    if (f->kind != FK::False) {
        if (free_vars(f) != gs)
            throw NormalizeError("goal variables must be exactly the free variables of: " +
                                 print_formula(f));
        if (goal_vars.empty())
            throw NormalizeError("zero-arity goal for: " + print_formula(f));
    }
    predgen.reserve(goal);
    for (const auto& [k, a] : formula_predicates(f)) {
        (void)a;
        predgen.reserve(k);
    }
    QueryBuilder qb{predgen, {}};
    qb.translate(f, goal, goal_vars);
    return {std::move(qb.rules), goal, goal_vars};
}

// ---------------------------------------------------------------------------
// Constant elimination
// ---------------------------------------------------------------------------

Rule eliminate_atom_constants(const Rule& r) {
    FreshGen fg;
    for (const auto& v : rule_vars(r)) fg.reserve(v);
    std::vector<Literal> eqs;
    auto strip = [&](Atom a) {
        for (auto& t : a.args)
            if (t.is_const()) {
                Term v = Term::var(fg.fresh("X"));
                eqs.push_back(Literal::equality(v, t));
                t = std::move(v);
            }
        return a;
    };
    Rule out;
    out.line = r.line;
    if (r.head) out.head = strip(*r.head);
    for (const auto& l : r.body) {
        if (l.is_atom()) {
            Literal c = l;
            c.atom = strip(c.atom);
            out.body.push_back(std::move(c));
        } else {
            out.body.push_back(l);
        }
    }
    out.body.insert(out.body.end(), eqs.begin(), eqs.end());
    return out;
}

}  // namespace vlens
