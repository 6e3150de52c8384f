#pragma once

#include <string>
#include <vector>

#include "ast.hpp"
#include "engine.hpp"
#include "formula.hpp"

namespace vlens {

/// The relation key(args) as a first-order formula: predicates that head
/// rules in `p` unfold through their rule bodies (disjunction over rules,
/// existential closure of body-local variables); all other predicates stay
/// atomic. `args` supplies the terms the head is instantiated with. The
/// program must be nonrecursive; recursion raises EvalError.
FPtr datalog_to_fo(const Program& p, const std::string& key, const std::vector<Term>& args,
                   FreshGen& fg);

/// Existential closures of the constraint bodies, one sentence per
/// constraint, with rule-defined predicates unfolded as above. The
/// constraint itself is the negation of the returned sentence.
std::vector<FPtr> constraint_sentences(const Program& p, FreshGen& fg);

/// Replace every `key` atom in `f` by the formula that `defs` derives for it
/// (instantiated at the atom's arguments).
FPtr unfold_predicate(const FPtr& f, const std::string& key, const Program& defs, FreshGen& fg);

}  // namespace vlens
