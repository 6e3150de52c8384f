#include "database.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace vlens {

namespace fs = std::filesystem;
using nlohmann::json;

const Relation& Database::at(const std::string& name) const {
    static const Relation empty;
    auto it = rels.find(name);
    return it == rels.end() ? empty : it->second;
}

Relation apply_delta(const Relation& r, const Delta& d) {
    Relation out;
    for (const auto& t : r)
        if (!d.del.count(t)) out.insert(t);
    for (const auto& t : d.ins) out.insert(t);
    return out;
}

Database apply_delta(const Database& db, const DeltaSet& ds) {
    Database out = db;
    for (const auto& [name, d] : ds.per_relation) out.rels[name] = apply_delta(db.at(name), d);
    return out;
}

Value parse_value(const std::string& text, AttrType type) {
    switch (type) {
        case AttrType::Int: {
            size_t pos = 0;
            long long v;
            try {
                v = std::stoll(text, &pos);
            } catch (const std::exception&) {
                throw IoError("not an integer: '" + text + "'");
            }
            if (pos != text.size()) throw IoError("not an integer: '" + text + "'");
            return Value::of_int(v);
        }
        case AttrType::String:
            return Value::of_string(text);
        case AttrType::Date:
            if (!is_valid_date(text)) throw IoError("not a date (YYYY-MM-DD): '" + text + "'");
            return Value::of_date(text);
    }
    throw IoError("unknown attribute type");
}

// ---- CSV ----------------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line, int lineno, const std::string& path) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    size_t i = 0;
    bool cell_quoted = false;
    while (i < line.size()) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                continue;
            }
            cur += c;
            ++i;
            continue;
        }
        if (c == '"' && cur.empty() && !cell_quoted) {
            in_quotes = true;
            cell_quoted = true;
            ++i;
            continue;
        }
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
            cell_quoted = false;
            ++i;
            continue;
        }
        cur += c;
        ++i;
    }
    if (in_quotes) throw IoError(path + ":" + std::to_string(lineno) + ": unterminated quoted field");
    out.push_back(cur);
    return out;
}

std::string csv_quote(const std::string& s) {
    bool need = s.find_first_of(",\"\n\r") != std::string::npos;
    if (!need) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string render_cell(const Value& v) { return v.raw(); }

}  // namespace

Relation load_csv_relation(const std::string& path, const RelationDecl& decl) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    int lineno = 0;
    Relation rel;
    auto types = decl.types();
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && !header_seen) continue;
        auto cells = split_csv_line(line, lineno, path);
        if (!header_seen) {
            if (cells.size() != decl.attrs.size())
                throw IoError(path + ": header has " + std::to_string(cells.size()) + " columns, expected " +
                              std::to_string(decl.attrs.size()) + " for " + decl.name);
            for (size_t i = 0; i < cells.size(); ++i)
                if (cells[i] != decl.attrs[i].name)
                    throw IoError(path + ": header column " + std::to_string(i + 1) + " is '" + cells[i] +
                                  "', expected '" + decl.attrs[i].name + "'");
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        if (cells.size() != types.size())
            throw IoError(path + ":" + std::to_string(lineno) + ": row has " + std::to_string(cells.size()) +
                          " columns, expected " + std::to_string(types.size()));
        Tuple t;
        for (size_t i = 0; i < cells.size(); ++i) {
            try {
                t.push_back(parse_value(cells[i], types[i]));
            } catch (const std::exception& e) {
                throw IoError(path + ":" + std::to_string(lineno) + ": column " + decl.attrs[i].name + ": " +
                              e.what());
            }
        }
        rel.insert(std::move(t));
    }
    if (!header_seen) throw IoError(path + ": missing header row");
    return rel;
}

void save_csv_relation(const std::string& path, const RelationDecl& decl, const Relation& rel) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (size_t i = 0; i < decl.attrs.size(); ++i) out << (i ? "," : "") << csv_quote(decl.attrs[i].name);
    out << "\n";
    for (const auto& t : rel) {
        for (size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << csv_quote(render_cell(t[i]));
        out << "\n";
    }
}

Database load_csv_dir(const std::string& dir, const std::vector<RelationDecl>& decls) {
    Database db;
    for (const auto& d : decls) {
        fs::path p = fs::path(dir) / (d.name + ".csv");
        if (fs::exists(p)) db[d.name] = load_csv_relation(p.string(), d);
        else db[d.name] = {};
    }
    return db;
}

void save_csv_dir(const std::string& dir, const std::vector<RelationDecl>& decls, const Database& db) {
    fs::create_directories(dir);
    for (const auto& d : decls) {
        fs::path p = fs::path(dir) / (d.name + ".csv");
        save_csv_relation(p.string(), d, db.at(d.name));
    }
}

// ---- JSON ---------------------------------------------------------------

namespace {

Value value_from_json(const json& j, AttrType type, const std::string& where) {
    switch (type) {
        case AttrType::Int:
            if (!j.is_number_integer()) throw IoError(where + ": expected integer, got " + j.dump());
            return Value::of_int(j.get<long long>());
        case AttrType::String:
            if (!j.is_string()) throw IoError(where + ": expected string, got " + j.dump());
            return Value::of_string(j.get<std::string>());
        case AttrType::Date:
            if (!j.is_string()) throw IoError(where + ": expected date string, got " + j.dump());
            return Value::of_date(j.get<std::string>());
    }
    throw IoError("unknown attribute type");
}

json value_to_json(const Value& v) {
    if (v.type() == AttrType::Int) return v.as_int();
    return v.raw();
}

Tuple tuple_from_json(const json& row, const RelationDecl& decl, const std::string& where) {
    if (!row.is_array()) throw IoError(where + ": expected an array for a tuple, got " + row.dump());
    auto types = decl.types();
    if (row.size() != types.size())
        throw IoError(where + ": tuple has " + std::to_string(row.size()) + " values, expected " +
                      std::to_string(types.size()));
    Tuple t;
    for (size_t i = 0; i < types.size(); ++i)
        t.push_back(value_from_json(row[i], types[i], where + ", column " + decl.attrs[i].name));
    return t;
}

Relation relation_from_json(const json& arr, const RelationDecl& decl, const std::string& where) {
    if (!arr.is_array()) throw IoError(where + ": expected an array of tuples, got " + arr.dump());
    Relation rel;
    for (const auto& row : arr) rel.insert(tuple_from_json(row, decl, where));
    return rel;
}

json relation_to_json(const Relation& rel) {
    json arr = json::array();
    for (const auto& t : rel) {
        json row = json::array();
        for (const auto& v : t) row.push_back(value_to_json(v));
        arr.push_back(row);
    }
    return arr;
}

}  // namespace

Database load_json_db(const std::string& text, const std::vector<RelationDecl>& decls) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw IoError("database JSON must be an object of relation name -> tuples");
    Database db;
    for (const auto& d : decls) {
        if (j.contains(d.name)) db[d.name] = relation_from_json(j[d.name], d, "relation " + d.name);
        else db[d.name] = {};
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const auto& d : decls)
            if (d.name == it.key()) known = true;
        if (!known) throw IoError("unknown relation '" + it.key() + "' in database JSON");
    }
    return db;
}

std::string save_json_db(const Database& db, const std::vector<RelationDecl>& decls) {
    json j = json::object();
    for (const auto& d : decls) j[d.name] = relation_to_json(db.at(d.name));
    return j.dump(2);
}

Delta load_json_delta(const std::string& text, const RelationDecl& decl) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw IoError("delta JSON must be an object with 'insert' and/or 'delete'");
    Delta d;
    if (j.contains("insert")) d.ins = relation_from_json(j["insert"], decl, "insert");
    if (j.contains("delete")) d.del = relation_from_json(j["delete"], decl, "delete");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "insert" && it.key() != "delete")
            throw IoError("unknown key '" + it.key() + "' in delta JSON");
    return d;
}

std::string save_json_delta(const Delta& d, const RelationDecl&) {
    json j = json::object();
    j["insert"] = relation_to_json(d.ins);
    j["delete"] = relation_to_json(d.del);
    return j.dump(2);
}

Relation load_relation_file(const std::string& path, const RelationDecl& decl) {
    fs::path p(path);
    auto ext = p.extension().string();
    if (ext == ".csv") return load_csv_relation(path, decl);
    if (ext == ".json") {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        json j;
        try {
            j = json::parse(ss.str());
        } catch (const json::parse_error& e) {
            throw IoError(path + ": invalid JSON: " + e.what());
        }
        // Accept either a bare tuple array or {"<name>": [...]}
        if (j.is_object()) {
            if (!j.contains(decl.name)) throw IoError(path + ": no entry for relation " + decl.name);
            return relation_from_json(j[decl.name], decl, decl.name);
        }
        return relation_from_json(j, decl, decl.name);
    }
    throw IoError(path + ": unsupported extension (use .csv or .json)");
}

}  // namespace vlens
