#include "engine.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "json.hpp"

namespace vlens {

namespace {

using Env = std::map<std::string, Value>;

// Order body literals so that each one is evaluable when reached: positive
// atoms enumerate, a positive equality binds as soon as one side is known,
// everything else only tests and needs all its variables bound.
std::vector<const Literal*> plan_body(const Rule& r) {
    std::vector<const Literal*> out;
    std::vector<bool> used(r.body.size(), false);
    std::set<std::string> bound;
    auto all_bound = [&](const Literal& l) {
        for (const auto& v : literal_vars(l))
            if (!bound.count(v)) return false;
        return true;
    };
    for (size_t step = 0; step < r.body.size(); ++step) {
        int pick = -1;
        for (size_t i = 0; i < r.body.size(); ++i) {
            if (used[i]) continue;
            const Literal& l = r.body[i];
            bool ready;
            if (l.is_atom() && !l.negated) {
                ready = true;
            } else if (l.tag == Literal::Tag::Equality && !l.negated) {
                auto known = [&](const Term& t) { return t.is_const() || bound.count(t.name); };
                ready = known(l.lhs) || known(l.rhs);
            } else {
                ready = all_bound(l);
            }
            if (ready) {
                pick = static_cast<int>(i);
                break;
            }
        }
        if (pick < 0) throw EvalError("rule cannot be evaluated safely: " + print_rule(r));
        used[pick] = true;
        const Literal& l = r.body[pick];
        if ((l.is_atom() || l.tag == Literal::Tag::Equality) && !l.negated)
            for (const auto& v : literal_vars(l)) bound.insert(v);
        out.push_back(&r.body[pick]);
    }
    return out;
}

void exec(const std::vector<const Literal*>& plan, size_t i, Env& env, const Database& db,
          const std::function<void(const Env&)>& emit) {
    if (i == plan.size()) {
        emit(env);
        return;
    }
    const Literal& l = *plan[i];
    auto eval_term = [&](const Term& t) -> const Value& {
        if (t.is_const()) return t.value;
        return env.at(t.name);
    };
    switch (l.tag) {
        case Literal::Tag::Atom: {
            const Relation& rel = db.at(l.atom.pred.key());
            if (!rel.empty() && rel.begin()->size() != l.atom.args.size())
                throw EvalError("arity mismatch for " + l.atom.pred.key() + ": data has " +
                                std::to_string(rel.begin()->size()) + " columns, atom has " +
                                std::to_string(l.atom.args.size()));
            if (!l.negated) {
                for (const Tuple& tup : rel) {
                    std::vector<const std::string*> newly;
                    bool ok = true;
                    for (size_t k = 0; k < l.atom.args.size() && ok; ++k) {
                        const Term& t = l.atom.args[k];
                        if (t.is_anon()) continue;
                        if (t.is_const()) {
                            if (!(t.value == tup[k])) ok = false;
                            continue;
                        }
                        auto it = env.find(t.name);
                        if (it != env.end()) {
                            if (!(it->second == tup[k])) ok = false;
                        } else {
                            env.emplace(t.name, tup[k]);
                            newly.push_back(&t.name);
                        }
                    }
                    if (ok) exec(plan, i + 1, env, db, emit);
                    for (auto* v : newly) env.erase(*v);
                }
            } else {
                bool exists = false;
                for (const Tuple& tup : rel) {
                    bool ok = true;
                    for (size_t k = 0; k < l.atom.args.size() && ok; ++k) {
                        const Term& t = l.atom.args[k];
                        if (t.is_anon()) continue;
                        if (!(eval_term(t) == tup[k])) ok = false;
                    }
                    if (ok) {
                        exists = true;
                        break;
                    }
                }
                if (!exists) exec(plan, i + 1, env, db, emit);
            }
            break;
        }
        case Literal::Tag::Equality: {
            auto known = [&](const Term& t) { return t.is_const() || env.count(t.name); };
            if (!l.negated) {
                if (known(l.lhs) && known(l.rhs)) {
                    if (eval_term(l.lhs) == eval_term(l.rhs)) exec(plan, i + 1, env, db, emit);
                } else if (known(l.lhs)) {
                    env.emplace(l.rhs.name, eval_term(l.lhs));
                    exec(plan, i + 1, env, db, emit);
                    env.erase(l.rhs.name);
                } else {
                    env.emplace(l.lhs.name, eval_term(l.rhs));
                    exec(plan, i + 1, env, db, emit);
                    env.erase(l.lhs.name);
                }
            } else {
                if (!(eval_term(l.lhs) == eval_term(l.rhs))) exec(plan, i + 1, env, db, emit);
            }
            break;
        }
        case Literal::Tag::Comparison: {
            const Value& a = eval_term(l.lhs);
            const Value& b = eval_term(l.rhs);
            if (a.type() != b.type())
                throw EvalError("comparison between " + a.repr() + " and " + b.repr() + " of different types");
            bool res = (l.op == BuiltinOp::Lt) ? (a < b) : (b < a);
            if (res != l.negated) exec(plan, i + 1, env, db, emit);
            break;
        }
    }
}

}  // namespace

Relation eval_rule(const Rule& r, const Database& db) {
    auto plan = plan_body(r);
    Relation out;
    std::vector<std::string> witness_vars;
    if (!r.head) witness_vars = rule_vars(r);
    Env env;
    exec(plan, 0, env, db, [&](const Env& e) {
        Tuple t;
        if (r.head) {
            for (const Term& a : r.head->args) t.push_back(a.is_const() ? a.value : e.at(a.name));
        } else {
            for (const auto& v : witness_vars) t.push_back(e.at(v));
        }
        out.insert(std::move(t));
    });
    return out;
}

EvalOutput evaluate_with_order(const Program& p, const Database& edb, const std::vector<std::string>& order) {
    std::map<std::string, std::vector<const Rule*>> by_head;
    for (const auto& r : p.rules) by_head[r.head->pred.key()].push_back(&r);
    std::set<std::string> seen;
    for (const auto& k : order) {
        if (!by_head.count(k)) throw EvalError("evaluation order names unknown predicate " + k);
        if (!seen.insert(k).second) throw EvalError("evaluation order repeats predicate " + k);
    }
    if (seen.size() != by_head.size()) throw EvalError("evaluation order must cover every rule head");

    EvalOutput out;
    Database db = edb;
    for (const auto& k : order) {
        Relation rel;
        for (const auto* r : by_head[k]) {
            auto part = eval_rule(*r, db);
            rel.insert(part.begin(), part.end());
        }
        db[k] = std::move(rel);
    }
    for (size_t i = 0; i < p.constraints.size(); ++i) {
        auto w = eval_rule(p.constraints[i], db);
        if (!w.empty())
            out.violations.push_back(
                {static_cast<int>(i), print_rule(p.constraints[i]), rule_vars(p.constraints[i]), std::move(w)});
    }
    out.idb = std::move(db);
    return out;
}

EvalOutput evaluate(const Program& p, const Database& edb) {
    return evaluate_with_order(p, edb, stratify(p).flat());
}

DeltaSet source_deltas(const Program& p, const Database& idb) {
    DeltaSet ds;
    for (const auto& s : p.schema.sources) {
        Delta d{idb.at("+" + s.name), idb.at("-" + s.name)};
        if (!d.empty()) ds.per_relation[s.name] = std::move(d);
    }
    return ds;
}

Database put(const Program& p, const Database& sources, const Relation& view) {
    Database edb = sources;
    edb[p.schema.view.name] = view;
    auto out = evaluate(p, edb);
    if (!out.violations.empty()) {
        std::string msg = "constraint violation:";
        for (const auto& v : out.violations) msg += "\n  " + v.rule;
        throw PutError(PutError::Kind::ConstraintViolation, msg, out.violations, {});
    }
    auto ds = source_deltas(p, out.idb);
    std::map<std::string, Relation> contra;
    for (const auto& [name, d] : ds.per_relation) {
        Relation both;
        for (const auto& t : d.ins)
            if (d.del.count(t)) both.insert(t);
        if (!both.empty()) contra[name] = std::move(both);
    }
    if (!contra.empty()) {
        std::string msg = "contradictory delta:";
        for (const auto& [name, ts] : contra)
            for (const auto& t : ts) msg += "\n  " + name + tuple_repr(t) + " both inserted and deleted";
        throw PutError(PutError::Kind::ContradictoryDelta, msg, {}, contra);
    }
    Database result = sources;
    for (const auto& [name, d] : ds.per_relation) result[name] = apply_delta(sources.at(name), d);
    return result;
}

Program build_putget_program(const Program& pd, const Program& get, std::vector<std::string>* notes) {
    std::set<std::string> used;
    for (const auto& s : pd.schema.sources) used.insert(s.name);
    used.insert(pd.schema.view.name);
    for (const auto& [n, _] : pd.intermediates) used.insert(n);
    auto freshname = [&](const std::string& base) {
        std::string n = base;
        while (used.count(n)) n += "_";
        if (n != base && notes) notes->push_back("renamed " + base + " to " + n + " to avoid a collision");
        used.insert(n);
        return n;
    };

    Program out;
    out.schema = pd.schema;
    out.intermediates = pd.intermediates;
    out.rules = pd.rules;  // the putback's delta and helper rules, unchanged

    auto has_rules_for = [&](const std::string& key) {
        for (const auto& r : pd.rules)
            if (r.head->pred.key() == key) return true;
        return false;
    };

    // Advance each source through its deltas into <r>_new.
    std::map<std::string, std::string> src_new;
    for (const auto& s : pd.schema.sources) {
        bool plus = has_rules_for("+" + s.name);
        bool minus = has_rules_for("-" + s.name);
        std::string rnew = freshname(s.name + "_new");
        src_new[s.name] = rnew;
        out.intermediates[rnew] = s.types();
        std::vector<Term> xs;
        for (size_t i = 0; i < s.arity(); ++i) xs.push_back(Term::var("X" + std::to_string(i + 1)));
        Atom keep_head{PredicateRef{rnew, PredKind::Intermediate}, xs};
        Rule keep;
        keep.head = keep_head;
        keep.body.push_back(Literal::positive(Atom{PredicateRef{s.name, PredKind::Source}, xs}));
        if (minus) keep.body.push_back(Literal::negative(Atom{PredicateRef{s.name, PredKind::DeltaDelete}, xs}));
        out.rules.push_back(std::move(keep));
        if (plus) {
            Rule add;
            add.head = keep_head;
            add.body.push_back(Literal::positive(Atom{PredicateRef{s.name, PredKind::DeltaInsert}, xs}));
            out.rules.push_back(std::move(add));
        }
    }

    // Re-derive the view over the advanced sources as <v>_new.
    std::string vnew = freshname(pd.schema.view.name + "_new");
    out.intermediates[vnew] = pd.schema.view.types();

    std::map<std::string, std::string> get_rename;
    for (const auto& [n, sig] : get.intermediates) {
        std::string nn = freshname(n);
        get_rename[n] = nn;
        out.intermediates[nn] = sig;
    }
    auto map_ref = [&](const PredicateRef& ref) -> PredicateRef {
        switch (ref.kind) {
            case PredKind::Source: {
                auto it = src_new.find(ref.name);
                if (it == src_new.end()) throw EvalError("get program references unknown source " + ref.name);
                return PredicateRef{it->second, PredKind::Intermediate};
            }
            case PredKind::View:
                throw EvalError("get program may not reference the view " + ref.name);
            case PredKind::DeltaInsert:
            case PredKind::DeltaDelete:
                throw EvalError("get program may not reference delta predicate " + ref.key());
            case PredKind::Intermediate: {
                auto it = get_rename.find(ref.name);
                if (it == get_rename.end()) throw EvalError("unknown predicate " + ref.name + " in get program");
                return PredicateRef{it->second, PredKind::Intermediate};
            }
        }
        throw EvalError("unreachable");
    };
    for (const auto& r : get.rules) {
        Rule nr;
        Atom head = *r.head;
        if (head.pred.kind == PredKind::View) head.pred = PredicateRef{vnew, PredKind::Intermediate};
        else head.pred = map_ref(head.pred);
        nr.head = head;
        for (const auto& l : r.body) {
            Literal nl = l;
            if (nl.is_atom()) nl.atom.pred = map_ref(nl.atom.pred);
            nr.body.push_back(std::move(nl));
        }
        out.rules.push_back(std::move(nr));
    }
    return out;
}

// ---- view update statements ----------------------------------------------

namespace {

int attr_index(const RelationDecl& decl, const std::string& attr) {
    for (size_t i = 0; i < decl.attrs.size(); ++i)
        if (decl.attrs[i].name == attr) return static_cast<int>(i);
    throw IoError("relation " + decl.name + " has no attribute '" + attr + "'");
}

bool row_matches(const Tuple& t, const std::vector<Condition>& where, const RelationDecl& decl) {
    for (const auto& c : where) {
        const Value& v = t[attr_index(decl, c.attr)];
        bool ok;
        switch (c.op) {
            case BuiltinOp::Eq: ok = (v == c.value); break;
            case BuiltinOp::Lt: ok = (v < c.value); break;
            case BuiltinOp::Gt: ok = (c.value < v); break;
            default: ok = false;
        }
        if (!ok) return false;
    }
    return true;
}

void check_row(const Tuple& row, const RelationDecl& decl) {
    auto types = decl.types();
    if (row.size() != types.size())
        throw IoError("tuple has " + std::to_string(row.size()) + " values, expected " +
                      std::to_string(types.size()) + " for " + decl.name);
    for (size_t i = 0; i < types.size(); ++i)
        if (row[i].type() != types[i])
            throw IoError("column " + decl.attrs[i].name + ": expected " + to_string(types[i]) + ", got " +
                          row[i].repr());
}

}  // namespace

Delta derive_view_delta(const std::vector<UpdateStatement>& stmts, const Relation& view, const RelationDecl& decl) {
    Relation cur = view;
    Relation plus, minus;
    // One fold step: delta_plus and delta_minus are disjoint per step.
    auto fold = [&](const Relation& dplus, const Relation& dminus) {
        for (const auto& t : dminus) plus.erase(t);
        for (const auto& t : dplus) minus.erase(t);
        for (const auto& t : dplus) plus.insert(t);
        for (const auto& t : dminus) minus.insert(t);
        cur = apply_delta(cur, Delta{dplus, dminus});
    };
    for (const auto& s : stmts) {
        switch (s.kind) {
            case UpdateStatement::Kind::Insert: {
                check_row(s.row, decl);
                fold({s.row}, {});
                break;
            }
            case UpdateStatement::Kind::Delete: {
                Relation m;
                for (const auto& t : cur)
                    if (row_matches(t, s.where, decl)) m.insert(t);
                fold({}, m);
                break;
            }
            case UpdateStatement::Kind::Update: {
                Relation m, ins;
                for (const auto& t : cur)
                    if (row_matches(t, s.where, decl)) m.insert(t);
                for (const auto& t : m) {
                    Tuple t2 = t;
                    for (const auto& [attr, val] : s.set) t2[attr_index(decl, attr)] = val;
                    ins.insert(std::move(t2));
                }
                // An update is the deletion of the matching rows followed by
                // the insertion of their modified copies, folded in turn.
                fold({}, m);
                fold(ins, {});
                break;
            }
        }
    }
    return {std::move(plus), std::move(minus)};
}

std::vector<UpdateStatement> parse_update_statements(const std::string& text, const RelationDecl& decl) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("invalid JSON: ") + e.what());
    }
    json arr;
    if (j.is_object() && j.contains("statements")) arr = j["statements"];
    else if (j.is_array()) arr = j;
    else throw IoError("expected {\"statements\": [...]} or a bare array of statements");

    auto parse_conditions = [&](const json& w) {
        std::vector<Condition> out;
        if (!w.is_array()) throw IoError("'where' must be an array of conditions");
        for (const auto& c : w) {
            if (!c.is_object() || !c.contains("attr") || !c.contains("op") || !c.contains("value"))
                throw IoError("condition needs 'attr', 'op' and 'value': " + c.dump());
            std::string attr = c["attr"].get<std::string>();
            int idx = attr_index(decl, attr);
            AttrType ty = decl.attrs[idx].type;
            std::string op = c["op"].get<std::string>();
            BuiltinOp bop;
            if (op == "=") bop = BuiltinOp::Eq;
            else if (op == "<") bop = BuiltinOp::Lt;
            else if (op == ">") bop = BuiltinOp::Gt;
            else throw IoError("unknown operator '" + op + "' (use =, < or >)");
            if (bop != BuiltinOp::Eq && ty == AttrType::String)
                throw IoError("comparison on string attribute '" + attr + "' is not supported");
            Value v = Value::of_int(0);
            const json& jv = c["value"];
            if (ty == AttrType::Int) {
                if (!jv.is_number_integer()) throw IoError("attribute '" + attr + "' needs an integer value");
                v = Value::of_int(jv.get<long long>());
            } else if (ty == AttrType::String) {
                if (!jv.is_string()) throw IoError("attribute '" + attr + "' needs a string value");
                v = Value::of_string(jv.get<std::string>());
            } else {
                if (!jv.is_string()) throw IoError("attribute '" + attr + "' needs a date string value");
                v = Value::of_date(jv.get<std::string>());
            }
            out.push_back({attr, bop, v});
        }
        return out;
    };

    std::vector<UpdateStatement> out;
    auto types = decl.types();
    for (const auto& s : arr) {
        if (!s.is_object() || s.size() != 1)
            throw IoError("each statement must be exactly one of 'insert', 'delete_where', 'update': " + s.dump());
        UpdateStatement st;
        if (s.contains("insert")) {
            st.kind = UpdateStatement::Kind::Insert;
            const json& row = s["insert"];
            if (!row.is_array() || row.size() != types.size())
                throw IoError("'insert' needs a tuple of " + std::to_string(types.size()) + " values");
            for (size_t i = 0; i < types.size(); ++i) {
                const json& jv = row[i];
                if (types[i] == AttrType::Int) {
                    if (!jv.is_number_integer()) throw IoError("column " + decl.attrs[i].name + ": expected integer");
                    st.row.push_back(Value::of_int(jv.get<long long>()));
                } else if (types[i] == AttrType::String) {
                    if (!jv.is_string()) throw IoError("column " + decl.attrs[i].name + ": expected string");
                    st.row.push_back(Value::of_string(jv.get<std::string>()));
                } else {
                    if (!jv.is_string()) throw IoError("column " + decl.attrs[i].name + ": expected date string");
                    st.row.push_back(Value::of_date(jv.get<std::string>()));
                }
            }
        } else if (s.contains("delete_where")) {
            st.kind = UpdateStatement::Kind::Delete;
            st.where = parse_conditions(s["delete_where"]);
        } else if (s.contains("update")) {
            st.kind = UpdateStatement::Kind::Update;
            const json& u = s["update"];
            if (!u.is_object() || !u.contains("set")) throw IoError("'update' needs a 'set' object");
            if (u.contains("where")) st.where = parse_conditions(u["where"]);
            if (!u["set"].is_object() || u["set"].empty()) throw IoError("'set' must be a non-empty object");
            for (auto it = u["set"].begin(); it != u["set"].end(); ++it) {
                int idx = attr_index(decl, it.key());
                AttrType ty = decl.attrs[idx].type;
                const json& jv = it.value();
                Value v = Value::of_int(0);
                if (ty == AttrType::Int) {
                    if (!jv.is_number_integer()) throw IoError("attribute '" + it.key() + "' needs an integer value");
                    v = Value::of_int(jv.get<long long>());
                } else if (ty == AttrType::String) {
                    if (!jv.is_string()) throw IoError("attribute '" + it.key() + "' needs a string value");
                    v = Value::of_string(jv.get<std::string>());
                } else {
                    if (!jv.is_string()) throw IoError("attribute '" + it.key() + "' needs a date string value");
                    v = Value::of_date(jv.get<std::string>());
                }
                st.set.emplace_back(it.key(), v);
            }
        } else {
            throw IoError("unknown statement kind in " + s.dump());
        }
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace vlens
