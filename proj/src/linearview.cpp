#include "linearview.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fo_bridge.hpp"

namespace vlens {

namespace {

bool mentions(const FPtr& f, const std::string& view) {
    return formula_predicates(f).count(view) != 0;
}

/// Rename every binder of `g` that appears in `avoid`, rewriting the view
/// arguments and the body to match.
void rename_clashing_binders(ViewGroup& g, const std::set<std::string>& avoid, FreshGen& fg) {
    std::map<std::string, Term> ren;
    for (auto& b : g.binders) {
        if (!avoid.count(b)) continue;
        std::string nb = fg.fresh(b);
        ren.emplace(b, Term::var(nb));
        b = nb;
    }
    if (ren.empty()) return;
    for (auto& t : g.view_args) {
        if (!t.is_var()) continue;
        auto it = ren.find(t.name);
        if (it != ren.end()) t = it->second;
    }
    g.body = substitute(g.body, ren);
}

LinearViewForm lvf(const FPtr& f, const std::string& view, FreshGen& fg) {
    LinearViewForm out;
    out.residual = F::fls();
    if (!mentions(f, view)) {
        out.residual = f;
        return out;
    }
    switch (f->kind) {
        case FK::Atom: {
            // `f` mentions the view and is an atom, so it IS the view atom.
            ViewGroup g;
            g.view_args = f->args;
            g.body = F::tru();
            out.positives.push_back(std::move(g));
            return out;
        }
        case FK::Not: {
            const FPtr& k = f->kids[0];
            if (k->kind == FK::Atom && k->pred == view) {
                ViewGroup g;
                g.view_args = k->args;
                g.body = F::tru();
                out.negatives.push_back(std::move(g));
                return out;
            }
            throw LinearViewError("view predicate " + view +
                                  " occurs inside a negated compound: " + print_formula(f));
        }
        case FK::Or: {
            std::vector<FPtr> res;
            for (const auto& k : f->kids) {
                LinearViewForm sub = lvf(k, view, fg);
                std::move(sub.positives.begin(), sub.positives.end(),
                          std::back_inserter(out.positives));
                std::move(sub.negatives.begin(), sub.negatives.end(),
                          std::back_inserter(out.negatives));
                if (sub.residual->kind != FK::False) res.push_back(sub.residual);
            }
            out.residual = F::disj(std::move(res));
            return out;
        }
        case FK::Exists: {
            LinearViewForm sub = lvf(f->kids[0], view, fg);
            for (auto* groups : {&sub.positives, &sub.negatives}) {
                for (auto& g : *groups) {
                    // The quantifier distributes over the disjuncts, so each
                    // group absorbs the outer binders it actually uses;
                    // shadowed names stay with the inner group.
                    std::set<std::string> needed = free_vars(g.body);
                    for (const auto& t : g.view_args)
                        if (t.is_var()) needed.insert(t.name);
                    std::set<std::string> have(g.binders.begin(), g.binders.end());
                    std::vector<std::string> add;
                    for (const auto& v : f->vars)
                        if (needed.count(v) && !have.count(v)) add.push_back(v);
                    g.binders.insert(g.binders.begin(), add.begin(), add.end());
                }
            }
            out.positives = std::move(sub.positives);
            out.negatives = std::move(sub.negatives);
            out.residual = F::exists(f->vars, sub.residual);
            return out;
        }
        case FK::And: {
            size_t vi = f->kids.size();
            for (size_t i = 0; i < f->kids.size(); ++i) {
                if (!mentions(f->kids[i], view)) continue;
                if (vi != f->kids.size())
                    throw LinearViewError("view predicate " + view +
                                          " is joined with itself: " + print_formula(f));
                vi = i;
            }
            std::vector<FPtr> rest;
            for (size_t i = 0; i < f->kids.size(); ++i)
                if (i != vi) rest.push_back(f->kids[i]);
            std::set<std::string> restfree;
            for (const auto& r : rest)
                for (const auto& v : free_vars(r)) restfree.insert(v);

            LinearViewForm sub = lvf(f->kids[vi], view, fg);
            for (auto* groups : {&sub.positives, &sub.negatives}) {
                for (auto& g : *groups) {
                    // The view-free conjuncts slide under the group binders,
                    // which must not capture their variables.
                    rename_clashing_binders(g, restfree, fg);
                    std::vector<FPtr> parts = rest;
                    parts.push_back(g.body);
                    g.body = F::conj(std::move(parts));
                }
            }
            out.positives = std::move(sub.positives);
            out.negatives = std::move(sub.negatives);
            if (sub.residual->kind != FK::False) {
                std::vector<FPtr> parts = std::move(rest);
                parts.push_back(sub.residual);
                out.residual = F::conj(std::move(parts));
            }
            return out;
        }
        default:
            throw LinearViewError("view predicate " + view +
                                  " under an unsupported connective: " + print_formula(f));
    }
}

/// Reassemble a regrouped formula for an invariant check or test oracle.
FPtr group_formula(const ViewGroup& g, const std::string& view, bool positive) {
    FPtr va = F::atom(view, g.view_args);
    if (!positive) va = F::negate(std::move(va));
    return F::exists(g.binders, F::conj({std::move(va), g.body}));
}

/// The canonical body of one group: view arguments become V1..Vk (constants,
/// repeated variables, and free variables turn into explicit equalities), and
/// the binders that are not view positions stay existentially quantified.
FPtr canonical_body(const ViewGroup& g0, const std::vector<std::string>& vvars, FreshGen& fg) {
    ViewGroup g = g0;
    rename_clashing_binders(g, std::set<std::string>(vvars.begin(), vvars.end()), fg);

    const std::set<std::string> bset(g.binders.begin(), g.binders.end());
    std::map<std::string, Term> map;
    for (size_t j = 0; j < g.view_args.size(); ++j) {
        const Term& t = g.view_args[j];
        if (t.is_var() && bset.count(t.name) && !map.count(t.name))
            map.emplace(t.name, Term::var(vvars[j]));
    }
    std::vector<FPtr> parts;
    for (size_t j = 0; j < g.view_args.size(); ++j) {
        const Term& t = g.view_args[j];
        Term canon = Term::var(vvars[j]);
        if (t.is_anon()) continue;  // unconstrained position
        if (t.is_const()) {
            parts.push_back(F::eq(canon, t));
            continue;
        }
        auto it = map.find(t.name);
        if (it == map.end()) parts.push_back(F::eq(canon, t));  // free variable
        else if (!(it->second == canon)) parts.push_back(F::eq(canon, it->second));
    }
    parts.push_back(substitute(g.body, map));

    std::vector<std::string> zs;
    for (const auto& b : g.binders)
        if (!map.count(b)) zs.push_back(b);
    return F::exists(std::move(zs), F::conj(std::move(parts)));
}

}  // namespace

FPtr reassemble(const LinearViewForm& lv, const std::string& view) {
    std::vector<FPtr> parts;
    for (const auto& g : lv.positives) parts.push_back(group_formula(g, view, true));
    for (const auto& g : lv.negatives) parts.push_back(group_formula(g, view, false));
    if (lv.residual->kind != FK::False) parts.push_back(lv.residual);
    return F::disj(std::move(parts));
}

LinearViewForm to_linear_view_form(const FPtr& f, const std::string& view) {
    FreshGen fg;
    fg.reserve_all(f);
    LinearViewForm lv = lvf(f, view, fg);
    for (const auto* groups : {&lv.positives, &lv.negatives})
        for (const auto& g : *groups)
            if (mentions(g.body, view))
                throw LinearViewError("regrouping left the view inside a group body: " +
                                      print_formula(g.body));
    if (mentions(lv.residual, view))
        throw LinearViewError("regrouping left the view inside the residual: " +
                              print_formula(lv.residual));
    return lv;
}

GetPutDecomposition build_getput_decomposition(const Program& putdelta, FreshGen& fg) {
    const std::string view = putdelta.schema.view.name;
    const size_t arity = putdelta.schema.view.arity();

    std::vector<std::string> vvars;
    for (size_t i = 0; i < arity; ++i) vvars.push_back("V" + std::to_string(i + 1));
    fg.reserve_program(putdelta);
    for (const auto& v : vvars) fg.reserve(v);

    auto has_rules_for = [&](const std::string& key) {
        for (const auto& r : putdelta.rules)
            if (r.head && r.head->pred.key() == key) return true;
        return false;
    };

    // The sentences a steady state must falsify: per source, unwarranted
    // deletions and unapplied insertions; per constraint, a firing body.
    std::vector<FPtr> sentences;
    for (const auto& s : putdelta.schema.sources) {
        std::vector<Term> xs;
        std::vector<std::string> xnames;
        for (size_t i = 0; i < s.arity(); ++i) {
            xnames.push_back(fg.fresh("X"));
            xs.push_back(Term::var(xnames.back()));
        }
        std::vector<FPtr> parts;
        if (has_rules_for("-" + s.name))
            parts.push_back(
                F::conj({datalog_to_fo(putdelta, "-" + s.name, xs, fg), F::atom(s.name, xs)}));
        if (has_rules_for("+" + s.name))
            parts.push_back(F::conj(
                {datalog_to_fo(putdelta, "+" + s.name, xs, fg), F::negate(F::atom(s.name, xs))}));
        if (parts.empty()) continue;
        sentences.push_back(F::exists(std::move(xnames), F::disj(std::move(parts))));
    }
    for (auto& c : constraint_sentences(putdelta, fg)) sentences.push_back(std::move(c));

    std::vector<FPtr> pos, neg, res;
    for (const auto& s : sentences) {
        LinearViewForm lv = to_linear_view_form(s, view);
        for (const auto& g : lv.positives) pos.push_back(canonical_body(g, vvars, fg));
        for (const auto& g : lv.negatives) neg.push_back(canonical_body(g, vvars, fg));
        if (lv.residual->kind != FK::False) res.push_back(lv.residual);
    }

    GetPutDecomposition d;
    d.phi1 = F::disj(std::move(pos));
    d.phi2 = F::disj(std::move(neg));
    d.phi3 = F::disj(std::move(res));
    d.view_vars = std::move(vvars);
    for (const FPtr& phi : {d.phi1, d.phi2, d.phi3})
        if (mentions(phi, view))
            throw LinearViewError("decomposition still mentions the view: " + print_formula(phi));
    return d;
}

std::pair<FPtr, FPtr> build_putget_sentences(const Program& putget, const std::string& new_view_key,
                                             FreshGen& fg) {
    const std::string view = putget.schema.view.name;
    const size_t arity = putget.schema.view.arity();
    fg.reserve_program(putget);
    std::vector<std::string> vvars;
    std::vector<Term> args;
    for (size_t i = 0; i < arity; ++i) {
        vvars.push_back("V" + std::to_string(i + 1));
        fg.reserve(vvars.back());
        args.push_back(Term::var(vvars.back()));
    }
    FPtr recomputed = datalog_to_fo(putget, new_view_key, args, fg);
    FPtr extra = F::exists(vvars, F::conj({recomputed, F::negate(F::atom(view, args))}));
    FPtr lost = F::exists(vvars, F::conj({F::atom(view, args), F::negate(recomputed)}));
    return {std::move(extra), std::move(lost)};
}

}  // namespace vlens
