#include "fo_eval.hpp"

#include <stdexcept>

namespace vlens {

Pools active_domain(const Database& db, const FPtr& f) {
    Pools p;
    std::map<AttrType, std::set<Value>> seen;
    for (const auto& [name, rel] : db.rels)
        for (const auto& t : rel)
            for (const auto& v : t) seen[v.type()].insert(v);
    if (f)
        for (const auto& [ty, vs] : formula_constants(f))
            for (const auto& v : vs) seen[ty].insert(v);
    for (const auto& [ty, vs] : seen) p.by_type[ty] = std::vector<Value>(vs.begin(), vs.end());
    return p;
}

namespace {

Value term_value(const Term& t, const std::map<std::string, Value>& env) {
    if (t.is_const()) return t.value;
    auto it = env.find(t.name);
    if (it == env.end()) throw std::logic_error("unbound variable " + t.name + " in formula evaluation");
    return it->second;
}

bool holds(const FPtr& f, const Database& db, std::map<std::string, Value>& env,
           const std::vector<Value>& universe) {
    switch (f->kind) {
        case FK::True: return true;
        case FK::False: return false;
        case FK::Atom: {
            Tuple t;
            for (const auto& a : f->args) t.push_back(term_value(a, env));
            return db.at(f->pred).count(t) > 0;
        }
        case FK::Eq: {
            Value l = term_value(f->lhs, env);
            Value r = term_value(f->rhs, env);
            return l == r;
        }
        case FK::Cmp: {
            Value l = term_value(f->lhs, env);
            Value r = term_value(f->rhs, env);
            if (l.type() != r.type()) return false;
            return f->op == BuiltinOp::Lt ? l < r : r < l;
        }
        case FK::Not: return !holds(f->kids[0], db, env, universe);
        case FK::And:
            for (const auto& k : f->kids)
                if (!holds(k, db, env, universe)) return false;
            return true;
        case FK::Or:
            for (const auto& k : f->kids)
                if (holds(k, db, env, universe)) return true;
            return false;
        case FK::Implies:
            return !holds(f->kids[0], db, env, universe) || holds(f->kids[1], db, env, universe);
        case FK::Exists:
        case FK::Forall: {
            // Expand one bound variable at a time over the whole universe; ∃
            // searches for a hit, ∀ for a miss.
            const bool want = f->kind == FK::Exists;
            std::function<bool(size_t)> expand = [&](size_t i) -> bool {
                if (i == f->vars.size()) return holds(f->kids[0], db, env, universe) == want;
                const std::string& v = f->vars[i];
                auto saved = env.find(v) != env.end() ? std::optional<Value>(env.at(v))
                                                      : std::optional<Value>();
                for (const auto& val : universe) {
                    env[v] = val;
                    if (expand(i + 1)) {
                        if (saved) env[v] = *saved; else env.erase(v);
                        return true;
                    }
                }
                if (saved) env[v] = *saved; else env.erase(v);
                return false;
            };
            return expand(0) == want;
        }
    }
    return false;
}

}  // namespace

bool fo_holds(const FPtr& f, const Database& db, const std::map<std::string, Value>& env,
              const Pools& pools) {
    auto universe = pools.all();
    std::map<std::string, Value> e = env;
    return holds(f, db, e, universe);
}

bool fo_holds(const FPtr& f, const Database& db, const Pools& pools) {
    return fo_holds(f, db, {}, pools);
}

Relation fo_answers(const FPtr& f, const std::vector<std::string>& vars, const Database& db,
                    const Pools& pools) {
    auto universe = pools.all();
    Relation out;
    std::map<std::string, Value> env;
    std::function<void(size_t)> assign = [&](size_t i) {
        if (i == vars.size()) {
            if (holds(f, db, env, universe)) {
                Tuple t;
                for (const auto& v : vars) t.push_back(env.at(v));
                out.insert(std::move(t));
            }
            return;
        }
        for (const auto& val : universe) {
            env[vars[i]] = val;
            assign(i + 1);
        }
        env.erase(vars[i]);
    };
    assign(0);
    return out;
}

std::vector<Tuple> tuple_space(const RelationDecl& decl, const Pools& pools) {
    std::vector<Tuple> out;
    Tuple cur(decl.arity(), Value::of_int(0));
    std::function<void(size_t)> fill = [&](size_t i) {
        if (i == decl.arity()) {
            out.push_back(cur);
            return;
        }
        auto it = pools.by_type.find(decl.attrs[i].type);
        if (it == pools.by_type.end()) return;
        for (const auto& v : it->second) {
            cur[i] = v;
            fill(i + 1);
        }
    };
    fill(0);
    return out;
}

bool for_each_database(const std::vector<RelationDecl>& decls, const Pools& pools,
                       const std::function<bool(const Database&)>& fn) {
    // Candidate tuples per relation, then one bit per candidate.
    std::vector<std::vector<Tuple>> spaces;
    for (const auto& d : decls) spaces.push_back(tuple_space(d, pools));
    Database db;
    for (const auto& d : decls) db[d.name] = {};
    std::function<bool(size_t)> pick = [&](size_t ri) -> bool {
        if (ri == decls.size()) return fn(db);
        // Enumerate subsets of spaces[ri] by binary counter.
        const auto& space = spaces[ri];
        if (space.size() > 20)
            throw std::invalid_argument("tuple space too large to enumerate for " + decls[ri].name);
        size_t n = space.size();
        for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
            Relation rel;
            for (size_t b = 0; b < n; ++b)
                if (mask & (size_t{1} << b)) rel.insert(space[b]);
            db[decls[ri].name] = std::move(rel);
            if (!pick(ri + 1)) return false;
        }
        db[decls[ri].name] = {};
        return true;
    };
    return pick(0);
}

}  // namespace vlens
