#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "database.hpp"
#include "formula.hpp"

namespace vlens {

/// Candidate values for quantified variables, grouped by type. Quantifiers
/// range over the union of all pools; ill-typed bindings simply fail the
/// subformulas they reach.
struct Pools {
    std::map<AttrType, std::vector<Value>> by_type;

    std::vector<Value> all() const {
        std::vector<Value> out;
        for (const auto& [t, vs] : by_type) out.insert(out.end(), vs.begin(), vs.end());
        return out;
    }
};

/// The active domain of a database together with a formula's constants.
Pools active_domain(const Database& db, const FPtr& f);

/// Evaluate a formula under an environment by exhaustive quantifier
/// expansion over the pools. Free variables must all be bound by `env`.
/// Comparisons and equalities between values of different types are false.
bool fo_holds(const FPtr& f, const Database& db, const std::map<std::string, Value>& env,
              const Pools& pools);

/// Sentence evaluation (no free variables).
bool fo_holds(const FPtr& f, const Database& db, const Pools& pools);

/// All assignments of the free variables (in the given order) that satisfy
/// the formula, drawn from the pools.
Relation fo_answers(const FPtr& f, const std::vector<std::string>& vars, const Database& db,
                    const Pools& pools);

/// Enumerate every database over the given relation schemas whose relations
/// draw their tuples from the per-type pools. Invokes `fn` for each database;
/// stops early when `fn` returns false. Returns false iff stopped early.
/// The number of databases is the product over relations of 2^|candidates|,
/// so keep pools tiny.
bool for_each_database(const std::vector<RelationDecl>& decls, const Pools& pools,
                       const std::function<bool(const Database&)>& fn);

/// All candidate tuples for one relation schema from the pools.
std::vector<Tuple> tuple_space(const RelationDecl& decl, const Pools& pools);

}  // namespace vlens
