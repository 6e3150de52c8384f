#pragma once

#include <string>
#include <vector>

#include "formula.hpp"
#include "value.hpp"

namespace vlens {

/// Name of the unary predicate standing in for the comparison `X op c` when
/// comparisons are abstracted: one fresh relation symbol per (operator,
/// constant) pair, deterministic across runs. `op` must be Lt or Gt.
std::string cmp_pred_name(BuiltinOp op, const Value& c);

/// Replace every variable-versus-constant comparison by an atom over its
/// abstraction predicate (`c op X` is flipped to the `X op' c` reading
/// first). Comparisons between two variables are left in place: they are
/// outside the strategy grammar, and leaving them visible lets callers
/// reject them. Constant-versus-constant comparisons never reach here; the
/// smart constructors fold them to ⊤/⊥.
FPtr abstract_comparisons(const FPtr& f);

/// Guarded-negation membership test. Atoms, equalities, conjunction,
/// disjunction, and existential quantification are free; a negated
/// subformula must sit in a conjunction next to a positive atom covering
/// its free variables. Comparisons of the form X<c / X>c count as atoms
/// (per the abstraction above) and may serve as guards; two-variable
/// comparisons, universal quantifiers, and implications are rejected.
/// Double negations and negations of pure-negation conjunctions or
/// disjunctions are simplified away first, so complements of clause-shaped
/// formulas pass on their underlying shape.
bool is_gnfo(const FPtr& f);

/// The sentence tying the abstraction predicates back to the order they
/// stand for: every element falls into one of the regions cut out by the
/// constants — below all of them, equal to one, strictly between two
/// adjacent ones, or above all of them — with regions the domain cannot
/// inhabit dropped. `constants` must be sorted, duplicate-free, and all of
/// type `domain`; int and date domains are supported (the strategy grammar
/// admits no other comparison operands). An empty list yields ⊤.
FPtr axiomatize_comparisons(const std::vector<Value>& constants, AttrType domain);

}  // namespace vlens
