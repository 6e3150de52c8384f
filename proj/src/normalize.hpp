#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ast.hpp"
#include "formula.hpp"

namespace vlens {

/// A formula that should have been safe-range turned out not to be, or a
/// rewrite got stuck; the message names the offending subformula.
class NormalizeError : public std::runtime_error {
public:
    explicit NormalizeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rewrites into the normal form where ∀ and → are gone, no ∧/∨ sits directly
/// under ¬, and there is no ¬¬. Equivalence-preserving; idempotent.
FPtr to_srnf(const FPtr& f);

/// The set of variables guaranteed a binding by the formula's own relational
/// structure. `nullopt` is the failure marker: some quantified variable
/// escapes restriction, which poisons every enclosing formula. Input must be
/// in the form produced by to_srnf.
std::optional<std::set<std::string>> range_restricted_vars(const FPtr& f);

/// True when every free variable is range-restricted (checked on to_srnf(f)).
/// Such formulas are domain-independent and translatable to Datalog.
bool is_safe_range(const FPtr& f);

/// True when every disjunction and quantification in f is self-contained:
/// disjunctions restrict exactly their free variables, and quantified bodies
/// are safe-range on their own. Implies the form produced by to_srnf.
bool is_ranf(const FPtr& f);

/// Rewrites a safe-range formula into relational-algebra normal form by
/// pushing restricting conjuncts into disjunctions and quantifier bodies.
/// Accepts anything is_safe_range accepts (normalizing first); throws
/// NormalizeError on formulas that are not safe-range or on a stuck rewrite.
FPtr to_ranf(const FPtr& f);

/// A nonrecursive Datalog program computing a formula's answer set: rules
/// defining auxiliary predicates followed by the rules for `goal`, whose head
/// argument order is `goal_vars`.
struct DatalogQuery {
    std::vector<Rule> rules;
    std::string goal;
    std::vector<std::string> goal_vars;
};

/// Translates a RANF formula into Datalog rules with head goal(goal_vars);
/// goal_vars must list exactly the formula's free variables. Auxiliary
/// predicate names are drawn from predgen (reserve taken names beforehand).
/// Guarantees: a database satisfies f under a binding iff evaluating the
/// rules derives the corresponding goal tuple.
DatalogQuery ranf_to_datalog(const FPtr& f, const std::string& goal,
                             const std::vector<std::string>& goal_vars, FreshGen& predgen);

/// Replaces every constant argument of a relation atom (head or body) by a
/// fresh variable and appends the defining equalities to the body, leaving
/// builtin literals untouched:
///   h(Z, 1) :- p(Z, W, 3), not r(W, 4).
///   becomes
///   h(Z, X1) :- p(Z, W, X2), not r(W, X3), X1 = 1, X2 = 3, X3 = 4.
Rule eliminate_atom_constants(const Rule& r);

}  // namespace vlens
