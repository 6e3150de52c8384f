#include "fo_bridge.hpp"

#include <map>
#include <set>

namespace vlens {

namespace {

class Translator {
public:
    Translator(const Program& p, FreshGen& fg) : fg_(fg) {
        for (const auto& r : p.rules) by_head_[r.head->pred.key()].push_back(&r);
    }

    FPtr pred(const std::string& key, const std::vector<Term>& args) {
        auto it = by_head_.find(key);
        if (it == by_head_.end()) return F::atom(key, args);
        if (!expanding_.insert(key).second)
            throw EvalError("predicate " + key + " is recursive; cannot translate to a formula");
        std::vector<FPtr> branches;
        for (const Rule* r : it->second) branches.push_back(rule_branch(*r, args));
        expanding_.erase(key);
        return F::disj(std::move(branches));
    }

    /// One rule instantiated at `args`: head unification equalities plus the
    /// translated body, body-local variables existentially quantified.
    FPtr rule_branch(const Rule& r, const std::vector<Term>& args) {
        std::map<std::string, Term> pin;
        std::vector<FPtr> conjuncts;
        const auto& head_args = r.head->args;
        for (size_t i = 0; i < head_args.size(); ++i) {
            const Term& h = head_args[i];
            if (h.is_const()) {
                conjuncts.push_back(F::eq(args[i], h));
            } else {
                auto it = pin.find(h.name);
                if (it != pin.end()) conjuncts.push_back(F::eq(args[i], it->second));
                else pin.emplace(h.name, args[i]);
            }
        }
        return body(r, pin, std::move(conjuncts));
    }

    /// Translate a rule body under a partial variable pinning; remaining rule
    /// variables become fresh existentials.
    FPtr body(const Rule& r, std::map<std::string, Term> m, std::vector<FPtr> conjuncts) {
        std::vector<std::string> exvars;
        for (const auto& v : rule_vars(r)) {
            if (m.count(v)) continue;
            std::string nv = fg_.fresh(v);
            m.emplace(v, Term::var(nv));
            exvars.push_back(nv);
        }
        for (const auto& l : r.body) {
            // Anonymous arguments quantify inside the literal itself, so that
            // `not q(X, _)` means "no q-tuple with first column X".
            std::vector<std::string> local;
            auto term = [&](const Term& t) -> Term {
                if (t.is_var()) return m.at(t.name);
                if (t.is_anon()) {
                    std::string nv = fg_.fresh("W");
                    local.push_back(nv);
                    return Term::var(nv);
                }
                return t;
            };
            FPtr c;
            switch (l.tag) {
                case Literal::Tag::Atom: {
                    std::vector<Term> as;
                    for (const auto& a : l.atom.args) as.push_back(term(a));
                    c = pred(l.atom.pred.key(), as);
                    break;
                }
                case Literal::Tag::Equality: c = F::eq(term(l.lhs), term(l.rhs)); break;
                case Literal::Tag::Comparison: c = F::cmp(l.op, term(l.lhs), term(l.rhs)); break;
            }
            if (!local.empty()) c = F::exists(std::move(local), std::move(c));
            conjuncts.push_back(l.negated ? F::negate(std::move(c)) : std::move(c));
        }
        return F::exists(std::move(exvars), F::conj(std::move(conjuncts)));
    }

private:
    FreshGen& fg_;
    std::map<std::string, std::vector<const Rule*>> by_head_;
    std::set<std::string> expanding_;
};

}  // namespace

FPtr datalog_to_fo(const Program& p, const std::string& key, const std::vector<Term>& args,
                   FreshGen& fg) {
    for (const auto& a : args)
        if (a.is_var()) fg.reserve(a.name);
    fg.reserve_program(p);
    Translator tr(p, fg);
    return tr.pred(key, args);
}

std::vector<FPtr> constraint_sentences(const Program& p, FreshGen& fg) {
    fg.reserve_program(p);
    std::vector<FPtr> out;
    for (const auto& c : p.constraints) {
        Translator tr(p, fg);
        out.push_back(tr.body(c, {}, {}));
    }
    return out;
}

FPtr unfold_predicate(const FPtr& f, const std::string& key, const Program& defs, FreshGen& fg) {
    fg.reserve_all(f);
    fg.reserve_program(defs);
    return replace_atoms(f, [&](const std::string& pk, const std::vector<Term>& args)
                                -> std::optional<FPtr> {
        if (pk != key) return std::nullopt;
        return datalog_to_fo(defs, key, args, fg);
    });
}

}  // namespace vlens
