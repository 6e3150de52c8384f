#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ast.hpp"

namespace vlens {

// ---------------------------------------------------------------------------
// First-order formulas over relation symbols, equality, and order comparisons.
// Formulas are immutable and shared. ∀ and → exist as input forms only; the
// normalizer rewrites them away, and nothing downstream produces them.
// ---------------------------------------------------------------------------

enum class FK { True, False, Atom, Eq, Cmp, Not, And, Or, Exists, Forall, Implies };

struct Formula;
using FPtr = std::shared_ptr<const Formula>;

struct Formula {
    FK kind = FK::True;
    std::string pred;               // Atom: predicate key ("r", "+r", "v__new", ...)
    std::vector<Term> args;         // Atom: arguments (variables or constants)
    Term lhs, rhs;                  // Eq / Cmp operands
    BuiltinOp op = BuiltinOp::Eq;   // Cmp operator (Lt or Gt)
    std::vector<FPtr> kids;         // Not: 1, And / Or: >= 2, Exists: 1
    std::vector<std::string> vars;  // Exists: quantified variable names
};

// Smart constructors. `conj`/`disj` flatten nested conjunctions/disjunctions,
// drop neutral elements, short-circuit on dominating elements, and remove
// structurally duplicate operands; they return the single operand unwrapped
// and the neutral element for an empty list.
namespace F {

FPtr tru();
FPtr fls();
FPtr atom(std::string pred, std::vector<Term> args);
FPtr eq(Term l, Term r);
FPtr cmp(BuiltinOp op, Term l, Term r);
FPtr negate(FPtr f);
FPtr conj(std::vector<FPtr> fs);
FPtr disj(std::vector<FPtr> fs);
FPtr exists(std::vector<std::string> vs, FPtr f);
FPtr forall(std::vector<std::string> vs, FPtr f);
FPtr implies(FPtr lhs, FPtr rhs);

}  // namespace F

/// Deterministic rendering; structural equality of formulas coincides with
/// equality of the printed strings.
std::string print_formula(const FPtr& f);

std::set<std::string> free_vars(const FPtr& f);
std::set<std::string> all_vars(const FPtr& f);
/// Every constant appearing in the formula (atom arguments and builtin
/// operands), keyed by type.
std::map<AttrType, std::set<Value>> formula_constants(const FPtr& f);
/// Every predicate key referenced by the formula, with its arity.
std::map<std::string, size_t> formula_predicates(const FPtr& f);

/// Fresh variable names: fresh("V") yields V1, V2, ... skipping reserved ones.
class FreshGen {
public:
    FreshGen() = default;
    void reserve(const std::string& name) { used_.insert(name); }
    void reserve_all(const FPtr& f);
    void reserve_program(const Program& p);
    std::string fresh(const std::string& base);

private:
    std::set<std::string> used_;
    std::map<std::string, int> next_;
};

/// Capture-avoiding substitution of free variables by terms. Bound variables
/// that would capture a substituted term are renamed.
FPtr substitute(const FPtr& f, const std::map<std::string, Term>& sub);

/// Rewrite every atom for which `rw` returns a formula; atoms mapped to
/// nullopt stay as they are. The returned formula's free variables must be
/// exactly the atom's argument variables (bound variables inside it should be
/// fresh, so no capture can occur).
using AtomRewriter =
    std::function<std::optional<FPtr>(const std::string& pred, const std::vector<Term>& args)>;
FPtr replace_atoms(const FPtr& f, const AtomRewriter& rw);

}  // namespace vlens
