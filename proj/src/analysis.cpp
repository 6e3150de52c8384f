#include "analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace vlens {

namespace {

// Iterate rules then constraints with a running index.
template <typename F>
void for_each_rule(const Program& p, F f) {
    int idx = 0;
    for (const auto& r : p.rules) f(idx++, r);
    for (const auto& r : p.constraints) f(idx++, r);
}

std::set<std::string> limited_vars(const Rule& r) {
    std::set<std::string> lim;
    for (const auto& l : r.body) {
        if (l.is_atom() && !l.negated) {
            for (const auto& t : l.atom.args)
                if (t.is_var()) lim.insert(t.name);
        }
    }
    // Propagate through positive equalities until stable.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& l : r.body) {
            if (l.tag != Literal::Tag::Equality || l.negated) continue;
            const Term& a = l.lhs;
            const Term& b = l.rhs;
            auto lim_side = [&](const Term& t) { return t.is_const() || (t.is_var() && lim.count(t.name)); };
            if (a.is_var() && !lim.count(a.name) && lim_side(b)) {
                lim.insert(a.name);
                changed = true;
            }
            if (b.is_var() && !lim.count(b.name) && lim_side(a)) {
                lim.insert(b.name);
                changed = true;
            }
        }
    }
    return lim;
}

}  // namespace

std::vector<Violation> check_safety(const Program& p) {
    std::vector<Violation> out;
    for_each_rule(p, [&](int idx, const Rule& r) {
        auto lim = limited_vars(r);
        for (const auto& v : rule_vars(r)) {
            if (!lim.count(v))
                out.push_back({idx, print_rule(r), "variable " + v + " is not limited by a positive atom or equality"});
        }
    });
    return out;
}

Stratification stratify(const Program& p) {
    // Nodes: IDB predicate keys (heads of rules). Edge h -> b whenever some
    // rule for h references IDB predicate b in its body.
    std::set<std::string> idb;
    for (const auto& r : p.rules) idb.insert(r.head->pred.key());
    std::map<std::string, std::set<std::string>> deps;  // head -> referenced IDBs
    for (const auto& r : p.rules) {
        auto& d = deps[r.head->pred.key()];
        for (const auto& l : r.body)
            if (l.is_atom() && idb.count(l.atom.pred.key())) d.insert(l.atom.pred.key());
    }

    // Reject recursion (including self-loops) with an explicit cycle path.
    std::map<std::string, int> state;  // 0 unvisited, 1 on stack, 2 done
    std::vector<std::string> stack;
    std::function<void(const std::string&)> dfs = [&](const std::string& n) {
        state[n] = 1;
        stack.push_back(n);
        for (const auto& m : deps[n]) {
            if (state[m] == 1) {
                std::string cyc;
                auto it = std::find(stack.begin(), stack.end(), m);
                for (; it != stack.end(); ++it) cyc += *it + " -> ";
                cyc += m;
                throw StratifyError("program is recursive: " + cyc);
            }
            if (state[m] == 0) dfs(m);
        }
        stack.pop_back();
        state[n] = 2;
    };
    for (const auto& n : idb)
        if (state[n] == 0) dfs(n);

    // Height above the dependency sinks: predicates nobody references come
    // last; a predicate sits one group before everything that references it.
    std::map<std::string, std::set<std::string>> rdeps;
    for (const auto& [h, ds] : deps)
        for (const auto& d : ds) rdeps[d].insert(h);
    std::map<std::string, int> height;
    std::function<int(const std::string&)> h_of = [&](const std::string& n) -> int {
        auto it = height.find(n);
        if (it != height.end()) return it->second;
        int h = 0;
        for (const auto& m : rdeps[n]) h = std::max(h, 1 + h_of(m));
        height[n] = h;
        return h;
    };
    int maxh = 0;
    for (const auto& n : idb) maxh = std::max(maxh, h_of(n));

    Stratification s;
    for (int h = maxh; h >= 0; --h) {
        std::vector<std::string> group;
        for (const auto& n : idb)
            if (height[n] == h) group.push_back(n);
        std::sort(group.begin(), group.end());
        if (!group.empty()) s.strata.push_back(std::move(group));
    }
    return s;
}

std::vector<Violation> check_linear_view(const Program& p) {
    std::vector<Violation> out;
    const std::string vname = p.schema.view.name;
    for_each_rule(p, [&](int idx, const Rule& r) {
        std::string txt = print_rule(r);
        if (r.head && r.head->pred.kind == PredKind::View)
            out.push_back({idx, txt, "view " + vname + " may not appear in a rule head of a putback program"});
        int view_atoms = 0;
        for (const auto& l : r.body) {
            if (!l.is_atom() || l.atom.pred.kind != PredKind::View) continue;
            ++view_atoms;
            for (const auto& t : l.atom.args)
                if (t.is_anon())
                    out.push_back({idx, txt, "anonymous variable in view atom " + print_atom(l.atom)});
        }
        if (view_atoms > 1)
            out.push_back({idx, txt, "view " + vname + " occurs " + std::to_string(view_atoms) +
                                         " times in one body (self-join of the view)"});
        if (view_atoms > 0 && r.head && !r.head->pred.is_delta())
            out.push_back({idx, txt, "view " + vname + " may occur only in delta rules and constraints"});
    });
    return out;
}

std::vector<Violation> check_guarded_negation(const Program& p) {
    std::vector<Violation> out;
    for_each_rule(p, [&](int idx, const Rule& r) {
        std::string txt = print_rule(r);
        // Variables equated to a constant by a positive equality.
        std::set<std::string> const_eq;
        for (const auto& l : r.body) {
            if (l.tag != Literal::Tag::Equality || l.negated) continue;
            if (l.lhs.is_var() && l.rhs.is_const()) const_eq.insert(l.lhs.name);
            if (l.rhs.is_var() && l.lhs.is_const()) const_eq.insert(l.rhs.name);
        }
        // Candidate guards: positive body atoms.
        std::vector<std::set<std::string>> guards;
        for (const auto& l : r.body) {
            if (l.is_atom() && !l.negated) {
                std::set<std::string> vs;
                for (const auto& t : l.atom.args)
                    if (t.is_var()) vs.insert(t.name);
                guards.push_back(std::move(vs));
            }
        }
        auto guarded = [&](const std::set<std::string>& vars) {
            auto covered = [&](const std::set<std::string>& g) {
                for (const auto& v : vars)
                    if (!g.count(v) && !const_eq.count(v)) return false;
                return true;
            };
            if (covered({})) return true;  // all variables constant-equated
            for (const auto& g : guards)
                if (covered(g)) return true;
            return false;
        };
        auto vars_of = [&](const Literal& l) {
            std::set<std::string> vs;
            for (const auto& v : literal_vars(l)) vs.insert(v);
            return vs;
        };
        if (r.head) {
            std::set<std::string> hv;
            for (const auto& t : r.head->args)
                if (t.is_var()) hv.insert(t.name);
            if (!guarded(hv))
                out.push_back({idx, txt, "head atom " + print_atom(*r.head) + " is not guarded by a single positive atom"});
        }
        for (const auto& l : r.body) {
            if (!l.negated) continue;
            if (!guarded(vars_of(l)))
                out.push_back({idx, txt, "negated literal " + print_literal(l) + " is not guarded by a single positive atom"});
        }
    });
    return out;
}

std::vector<Violation> lvgn_violations(const Program& p) {
    std::vector<Violation> out = check_safety(p);
    try {
        stratify(p);
    } catch (const StratifyError& e) {
        out.push_back({0, "", e.what()});
    }
    auto lv = check_linear_view(p);
    out.insert(out.end(), lv.begin(), lv.end());
    auto gn = check_guarded_negation(p);
    out.insert(out.end(), gn.begin(), gn.end());
    for_each_rule(p, [&](int idx, const Rule& r) {
        for (const auto& l : r.body) {
            if (l.tag != Literal::Tag::Comparison) continue;
            bool var_const = (l.lhs.is_var() && l.rhs.is_const()) || (l.lhs.is_const() && l.rhs.is_var());
            if (!var_const)
                out.push_back({idx, print_rule(r),
                               "comparison " + print_literal(l) + " must compare a variable with a constant"});
        }
    });
    return out;
}

bool is_lvgn(const Program& p) { return lvgn_violations(p).empty(); }

}  // namespace vlens
