#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "value.hpp"

namespace vlens {

/// A database instance: relation name (predicate key) -> set of tuples.
/// Set semantics throughout; iteration order is the tuples' natural order.
struct Database {
    std::map<std::string, Relation> rels;

    Relation& operator[](const std::string& name) { return rels[name]; }
    const Relation& at(const std::string& name) const;  // empty relation if absent
    bool operator==(const Database&) const = default;
};

/// Insertions and deletions against one relation.
struct Delta {
    Relation ins, del;
    bool empty() const { return ins.empty() && del.empty(); }
    bool operator==(const Delta&) const = default;
};

/// Per-relation deltas keyed by relation name.
struct DeltaSet {
    std::map<std::string, Delta> per_relation;
    bool operator==(const DeltaSet&) const = default;
};

/// (R minus deletions) union insertions.
Relation apply_delta(const Relation& r, const Delta& d);
Database apply_delta(const Database& db, const DeltaSet& ds);

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

/// Parse one cell according to the declared attribute type.
Value parse_value(const std::string& text, AttrType type);

// ---- CSV ----------------------------------------------------------------
// One file per relation, named <relation>.csv, first row = attribute names.
// Fields may be double-quoted; embedded quotes are doubled.

Relation load_csv_relation(const std::string& path, const RelationDecl& decl);
void save_csv_relation(const std::string& path, const RelationDecl& decl, const Relation& rel);
Database load_csv_dir(const std::string& dir, const std::vector<RelationDecl>& decls);
void save_csv_dir(const std::string& dir, const std::vector<RelationDecl>& decls, const Database& db);

// ---- JSON ---------------------------------------------------------------
// {"rel": [[v, ...], ...], ...}; ints as numbers, strings/dates as strings.

Database load_json_db(const std::string& text, const std::vector<RelationDecl>& decls);
std::string save_json_db(const Database& db, const std::vector<RelationDecl>& decls);

/// {"insert": [[...], ...], "delete": [[...], ...]} for a single relation.
Delta load_json_delta(const std::string& text, const RelationDecl& decl);
std::string save_json_delta(const Delta& d, const RelationDecl& decl);

/// Load a relation from a .csv or .json file, chosen by extension.
Relation load_relation_file(const std::string& path, const RelationDecl& decl);

}  // namespace vlens
