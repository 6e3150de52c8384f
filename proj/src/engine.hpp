#pragma once

#include <optional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "ast.hpp"
#include "database.hpp"

namespace vlens {

class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& m) : std::runtime_error(m) {}
};

/// One violated constraint together with the variable bindings that fired it.
struct ConstraintWitness {
    int constraint_index = 0;  // position in Program::constraints
    std::string rule;
    std::vector<std::string> vars;  // body variables, first-occurrence order
    Relation witnesses;             // bindings of those variables
};

/// Result of evaluating a program over an EDB: every IDB relation (delta
/// heads under their "+r"/"-r" keys) plus the fired-constraint witnesses.
struct EvalOutput {
    Database idb;
    std::vector<ConstraintWitness> violations;
    bool bottom() const { return !violations.empty(); }
};

/// Evaluate all rules bottom-up in stratification order, then constraints.
EvalOutput evaluate(const Program& p, const Database& edb);

/// Same, but with a caller-supplied evaluation order over the IDB keys
/// (must list every head predicate once). Exposed so tests can verify the
/// result is independent of the chosen topological order.
EvalOutput evaluate_with_order(const Program& p, const Database& edb, const std::vector<std::string>& order);

/// Evaluate a single rule against a database; returns derived head tuples,
/// or for a constraint the witness bindings of its body variables.
Relation eval_rule(const Rule& r, const Database& db);

/// Extract the per-source deltas ("+r"/"-r" relations) from an IDB result.
DeltaSet source_deltas(const Program& p, const Database& idb);

class PutError : public std::runtime_error {
public:
    enum class Kind { ConstraintViolation, ContradictoryDelta };
    PutError(Kind k, std::string msg, std::vector<ConstraintWitness> w, std::map<std::string, Relation> c)
        : std::runtime_error(std::move(msg)), kind(k), violations(std::move(w)), contradictions(std::move(c)) {}
    Kind kind;
    std::vector<ConstraintWitness> violations;            // when Kind::ConstraintViolation
    std::map<std::string, Relation> contradictions;       // relation -> tuples in both +r and -r
};

/// put(S, V): evaluate the putback program over sources + view, reject on
/// fired constraints or contradictory deltas, else apply the deltas.
Database put(const Program& p, const Database& sources, const Relation& view);

/// Compose the putback's deltas with a get program: sources advance to
/// <r>_new via their deltas, and get re-derives the view as <v>_new.
/// Name collisions with existing predicates are resolved by appending
/// underscores; every rename is reported through `notes` when present.
Program build_putget_program(const Program& putdelta, const Program& get, std::vector<std::string>* notes = nullptr);

// ---- view update statements ----------------------------------------------

/// One conjunct of a WHERE clause: <attr> <op> <value>.
struct Condition {
    std::string attr;
    BuiltinOp op = BuiltinOp::Eq;
    Value value = Value::of_int(0);
};

struct UpdateStatement {
    enum class Kind { Insert, Delete, Update } kind = Kind::Insert;
    Tuple row;                                       // Insert
    std::vector<Condition> where;                    // Delete / Update
    std::vector<std::pair<std::string, Value>> set;  // Update
};

/// Fold a statement sequence over the current view content into a single
/// insertion/deletion pair (disjoint by construction). An update statement
/// acts as the deletion of the matching rows followed by the insertion of
/// their modified copies.
Delta derive_view_delta(const std::vector<UpdateStatement>& stmts, const Relation& view, const RelationDecl& decl);

/// Parse statements from JSON: {"statements": [...]} or a bare array; each
/// statement {"insert": [..]} | {"delete_where": [cond..]} |
/// {"update": {"set": {attr: value,..}, "where": [cond..]}} with
/// cond = {"attr":.., "op": "="|"<"|">", "value": ..}.
std::vector<UpdateStatement> parse_update_statements(const std::string& text, const RelationDecl& decl);

}  // namespace vlens
