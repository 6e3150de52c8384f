#pragma once

#include <string>
#include <vector>

#include "ast.hpp"

namespace vlens {

/// A static-analysis finding. `rule_index` counts rules first, then
/// constraints, in program order; diagnostics are emitted in that order.
struct Violation {
    int rule_index = 0;
    std::string rule;
    std::string message;
    std::string str() const { return "rule " + std::to_string(rule_index) + " (" + rule + "): " + message; }
};

/// Ordered strata of IDB predicate keys. Predicates in later strata never
/// feed predicates in earlier ones; every reference crosses strictly forward.
struct Stratification {
    std::vector<std::vector<std::string>> strata;
    std::vector<std::string> flat() const {
        std::vector<std::string> out;
        for (auto& s : strata) out.insert(out.end(), s.begin(), s.end());
        return out;
    }
};

class StratifyError : public std::runtime_error {
public:
    explicit StratifyError(const std::string& m) : std::runtime_error(m) {}
};

/// Range restriction: every variable of a rule must be limited — bound by a
/// positive body atom, by a positive equality with a constant, or by a
/// positive equality with an already-limited variable.
std::vector<Violation> check_safety(const Program& p);

/// Dependency strata of the IDB predicates (rule heads). Groups are ordered
/// so that all references point to strictly earlier groups; ties broken
/// lexicographically. Throws StratifyError on recursion, naming the cycle.
Stratification stratify(const Program& p);

/// The view may occur only in delta-headed rules and constraints, at most
/// once per rule, and never with an anonymous argument.
std::vector<Violation> check_linear_view(const Program& p);

/// Every head atom, negated atom, and negated builtin must be guarded: its
/// variables covered by a single positive body atom together with variables
/// equated to constants.
std::vector<Violation> check_guarded_negation(const Program& p);

/// Conjunction of: safety, stratifiability (nonrecursion), linear view,
/// guarded negation, and comparisons restricted to variable-vs-constant.
bool is_lvgn(const Program& p);

/// All violations that make `is_lvgn` false, for reporting.
std::vector<Violation> lvgn_violations(const Program& p);

}  // namespace vlens
