#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "formula.hpp"

namespace vlens {

class LinearViewError : public std::runtime_error {
public:
    explicit LinearViewError(const std::string& m) : std::runtime_error(m) {}
};

/// One disjunct of the linear-view form: ∃ binders, (¬)view(viewArgs) ∧ body,
/// with the view predicate absent from `body` (⊤ when the literal stands
/// alone). Binders cover every variable local to the disjunct; free variables
/// of the original formula stay free.
struct ViewGroup {
    std::vector<std::string> binders;
    std::vector<Term> view_args;
    FPtr body;
};

/// A formula regrouped by how each disjunct uses the view predicate:
/// positive occurrence, negated occurrence, or none (the residual).
struct LinearViewForm {
    std::vector<ViewGroup> positives;
    std::vector<ViewGroup> negatives;
    FPtr residual;  // view-free disjunction of the remaining disjuncts; ⊥ when none
};

/// Regroup `f` around the predicate `view`, which may occur at most once per
/// conjunction and only as a positive or negated atom. Throws LinearViewError
/// when the view is joined with itself or sits under an unsupported
/// connective — shapes a linear-view program can never produce.
LinearViewForm to_linear_view_form(const FPtr& f, const std::string& view);

/// Fold the form back into one formula (equivalent to the regrouped input).
FPtr reassemble(const LinearViewForm& lv, const std::string& view);

/// The steady-state condition of a putback program, folded into three
/// view-free formulas: a view V is steady for source S exactly when V avoids
/// every phi1 tuple, contains every phi2 tuple, and phi3 fails on S. phi1
/// and phi2 are open over the canonical view variables `view_vars` (V1..Vk);
/// phi3 is a sentence.
struct GetPutDecomposition {
    FPtr phi1;
    FPtr phi2;
    FPtr phi3;
    std::vector<std::string> view_vars;
};

/// Build the decomposition from the program's delta rules and constraints:
/// per source r, the sentences ∃X⃗ (φ₋ᵣ(X⃗) ∧ r(X⃗)) and ∃X⃗ (φ₊ᵣ(X⃗) ∧ ¬r(X⃗))
/// must fail, as must each constraint body's existential closure; every
/// sentence is regrouped around the view and aggregated by occurrence sign.
GetPutDecomposition build_getput_decomposition(const Program& putdelta, FreshGen& fg);

/// The two refutation sentences behind the round-trip law "reading the view
/// back after a write returns what was written": with φ the formula of the
/// re-derived view `new_view_key` in `putget`,
///   first  = ∃V⃗ (φ(V⃗) ∧ ¬view(V⃗))   (the write created extra view tuples)
///   second = ∃V⃗ (view(V⃗) ∧ ¬φ(V⃗))   (the write lost view tuples).
/// Both unsatisfiable ⇔ the law holds.
std::pair<FPtr, FPtr> build_putget_sentences(const Program& putget, const std::string& new_view_key,
                                             FreshGen& fg);

}  // namespace vlens
