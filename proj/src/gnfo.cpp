#include "gnfo.hpp"

#include <cctype>
#include <chrono>
#include <set>
#include <stdexcept>

namespace vlens {

namespace {

constexpr const char* kDateMin = "0000-01-01";
constexpr const char* kDateMax = "9999-12-31";

long long date_serial(const std::string& iso) {
    std::chrono::year_month_day ymd{
        std::chrono::year{std::stoi(iso.substr(0, 4))},
        std::chrono::month{static_cast<unsigned>(std::stoi(iso.substr(5, 2)))},
        std::chrono::day{static_cast<unsigned>(std::stoi(iso.substr(8, 2)))}};
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

bool domain_has_below(const Value& c, AttrType dom) {
    return dom == AttrType::Int || c.as_text() > kDateMin;
}

bool domain_has_above(const Value& c, AttrType dom) {
    return dom == AttrType::Int || c.as_text() < kDateMax;
}

bool domain_has_between(const Value& a, const Value& b, AttrType dom) {
    if (dom == AttrType::Int) return b.as_int() - a.as_int() >= 2;
    return date_serial(b.as_text()) - date_serial(a.as_text()) >= 2;
}

// A comparison whose operands are one variable and one constant, read as
// `X op c`; the abstraction treats these as atoms.
bool atom_shaped_cmp(const FPtr& f) {
    return f->kind == FK::Cmp && ((f->lhs.is_var() && f->rhs.is_const()) ||
                                  (f->lhs.is_const() && f->rhs.is_var()));
}

// ¬¬φ → φ, and ¬ over a conjunction (disjunction) all of whose members are
// negations flips into the disjunction (conjunction) of the bodies. Keeps
// everything else intact; purely equivalence-preserving.
FPtr simplify_negations(const FPtr& f) {
    auto rebuild = [](const FPtr& g) {
        std::vector<FPtr> ks;
        ks.reserve(g->kids.size());
        for (const auto& k : g->kids) ks.push_back(simplify_negations(k));
        return ks;
    };
    switch (f->kind) {
        case FK::And: return F::conj(rebuild(f));
        case FK::Or: return F::disj(rebuild(f));
        case FK::Exists: return F::exists(f->vars, simplify_negations(f->kids[0]));
        case FK::Forall: return F::forall(f->vars, simplify_negations(f->kids[0]));
        case FK::Implies:
            return F::implies(simplify_negations(f->kids[0]), simplify_negations(f->kids[1]));
        case FK::Not: {
            FPtr b = simplify_negations(f->kids[0]);
            if (b->kind == FK::Not) return b->kids[0];
            if (b->kind == FK::And || b->kind == FK::Or) {
                bool allNeg = true;
                for (const auto& k : b->kids) allNeg = allNeg && k->kind == FK::Not;
                if (allNeg) {
                    std::vector<FPtr> flipped;
                    for (const auto& k : b->kids) flipped.push_back(k->kids[0]);
                    return b->kind == FK::And ? F::disj(std::move(flipped))
                                              : F::conj(std::move(flipped));
                }
            }
            return F::negate(b);
        }
        default: return f;
    }
}

std::set<std::string> term_vars(const std::vector<Term>& ts) {
    std::set<std::string> out;
    for (const auto& t : ts)
        if (t.is_var()) out.insert(t.name);
    return out;
}

bool gnfo(const FPtr& f) {
    switch (f->kind) {
        case FK::True:
        case FK::False:
        case FK::Atom:
        case FK::Eq: return true;
        case FK::Cmp: return atom_shaped_cmp(f);
        case FK::Or:
            for (const auto& k : f->kids)
                if (!gnfo(k)) return false;
            return true;
        case FK::Exists: return gnfo(f->kids[0]);
        case FK::And: {
            std::vector<std::set<std::string>> guards;
            for (const auto& k : f->kids) {
                if (k->kind == FK::Atom) guards.push_back(term_vars(k->args));
                else if (atom_shaped_cmp(k))
                    guards.push_back(term_vars({k->lhs, k->rhs}));
            }
            for (const auto& k : f->kids) {
                if (k->kind == FK::Not) {
                    if (!gnfo(k->kids[0])) return false;
                    std::set<std::string> fv = free_vars(k->kids[0]);
                    bool covered = false;
                    for (const auto& g : guards) {
                        bool all = true;
                        for (const auto& x : fv) all = all && g.count(x);
                        if (all) {
                            covered = true;
                            break;
                        }
                    }
                    if (!covered) return false;
                } else if (!gnfo(k)) {
                    return false;
                }
            }
            return true;
        }
        case FK::Not:
        case FK::Forall:
        case FK::Implies: return false;
    }
    return false;
}

}  // namespace

std::string cmp_pred_name(BuiltinOp op, const Value& c) {
    if (op == BuiltinOp::Eq) throw std::invalid_argument("equality has no abstraction predicate");
    std::string tag;
    switch (c.type()) {
        case AttrType::Int: tag = "i" + std::to_string(c.as_int()); break;
        case AttrType::Date: tag = "d" + c.as_text(); break;
        case AttrType::String: tag = "s" + c.as_text(); break;
    }
    for (auto& ch : tag)
        if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
    return (op == BuiltinOp::Lt ? "C_lt_" : "C_gt_") + tag;
}

FPtr abstract_comparisons(const FPtr& f) {
    switch (f->kind) {
        case FK::Cmp: {
            if (f->lhs.is_var() && f->rhs.is_const())
                return F::atom(cmp_pred_name(f->op, f->rhs.value), {f->lhs});
            if (f->lhs.is_const() && f->rhs.is_var()) {
                BuiltinOp flipped = f->op == BuiltinOp::Lt ? BuiltinOp::Gt : BuiltinOp::Lt;
                return F::atom(cmp_pred_name(flipped, f->lhs.value), {f->rhs});
            }
            return f;
        }
        case FK::Not: return F::negate(abstract_comparisons(f->kids[0]));
        case FK::And:
        case FK::Or: {
            std::vector<FPtr> ks;
            ks.reserve(f->kids.size());
            for (const auto& k : f->kids) ks.push_back(abstract_comparisons(k));
            return f->kind == FK::And ? F::conj(std::move(ks)) : F::disj(std::move(ks));
        }
        case FK::Exists: return F::exists(f->vars, abstract_comparisons(f->kids[0]));
        case FK::Forall: return F::forall(f->vars, abstract_comparisons(f->kids[0]));
        case FK::Implies:
            return F::implies(abstract_comparisons(f->kids[0]),
                              abstract_comparisons(f->kids[1]));
        default: return f;
    }
}

bool is_gnfo(const FPtr& f) { return gnfo(simplify_negations(f)); }

FPtr axiomatize_comparisons(const std::vector<Value>& constants, AttrType domain) {
    if (constants.empty()) return F::top();
    if (domain == AttrType::String)
        throw std::invalid_argument("comparisons range over int or date domains");
    for (size_t i = 0; i < constants.size(); ++i) {
        if (constants[i].type() != domain)
            throw std::invalid_argument("comparison constant type does not match the domain");
        if (i > 0 && !(constants[i - 1] < constants[i]))
            throw std::invalid_argument("comparison constants must be sorted and distinct");
    }

    Term x = Term::var("X");
    auto lt = [&](const Value& c) { return F::atom(cmp_pred_name(BuiltinOp::Lt, c), {x}); };
    auto gt = [&](const Value& c) { return F::atom(cmp_pred_name(BuiltinOp::Gt, c), {x}); };
    auto eq = [&](const Value& c) { return F::eq(x, Term::constant(c)); };

    // The three-literal blocks saying where X sits relative to one constant.
    auto sits_below = [&](const Value& c, std::vector<FPtr>& out) {
        out.push_back(lt(c));
        out.push_back(F::negate(eq(c)));
        out.push_back(F::negate(gt(c)));
    };
    auto sits_above = [&](const Value& c, std::vector<FPtr>& out) {
        out.push_back(gt(c));
        out.push_back(F::negate(eq(c)));
        out.push_back(F::negate(lt(c)));
    };

    const size_t n = constants.size();
    std::vector<FPtr> regions;

    if (domain_has_below(constants.front(), domain)) {
        std::vector<FPtr> parts;
        for (const auto& c : constants) sits_below(c, parts);
        regions.push_back(F::conj(std::move(parts)));
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<FPtr> parts;
        parts.push_back(eq(constants[i]));
        parts.push_back(F::negate(lt(constants[i])));
        parts.push_back(F::negate(gt(constants[i])));
        for (size_t j = 0; j < i; ++j) sits_above(constants[j], parts);
        for (size_t j = i + 1; j < n; ++j) sits_below(constants[j], parts);
        regions.push_back(F::conj(std::move(parts)));

        if (i + 1 < n && domain_has_between(constants[i], constants[i + 1], domain)) {
            std::vector<FPtr> gap;
            for (size_t j = 0; j <= i; ++j) sits_above(constants[j], gap);
            for (size_t j = i + 1; j < n; ++j) sits_below(constants[j], gap);
            regions.push_back(F::conj(std::move(gap)));
        }
    }
    if (domain_has_above(constants.back(), domain)) {
        std::vector<FPtr> parts;
        for (const auto& c : constants) sits_above(c, parts);
        regions.push_back(F::conj(std::move(parts)));
    }
    return F::forall({"X"}, F::disj(std::move(regions)));
}

}  // namespace vlens
