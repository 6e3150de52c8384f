#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "formula.hpp"
#include "parser.hpp"

using namespace vlens;

namespace {

Term V(const std::string& n) { return Term::var(n); }
Term I(long long v) { return Term::constant(Value::of_int(v)); }
Term S(const std::string& s) { return Term::constant(Value::of_string(s)); }
Term D(const std::string& d) { return Term::constant(Value::of_date(d)); }
FPtr at(const std::string& p, std::vector<Term> ts) { return F::atom(p, std::move(ts)); }
std::string P(const FPtr& f) { return print_formula(f); }

}  // namespace

TEST_CASE("conjunction and disjunction flatten, deduplicate, and simplify") {
    auto rX = at("r", {V("X")});
    auto sX = at("s", {V("X")});
    auto tX = at("t", {V("X")});

    CHECK(P(F::conj({})) == "⊤");
    CHECK(P(F::disj({})) == "⊥");
    CHECK(P(F::conj({rX})) == "r(X)");

    // Structural duplicates collapse.
    CHECK(P(F::conj({rX, rX})) == "r(X)");
    CHECK(P(F::disj({rX, rX})) == "r(X)");

    // Nested same-kind nodes flatten, and duplicates collapse across levels.
    CHECK(P(F::conj({F::conj({rX, sX}), tX})) == "(r(X) ∧ s(X) ∧ t(X))");
    CHECK(P(F::conj({F::conj({rX, sX}), sX})) == "(r(X) ∧ s(X))");

    // Neutral elements drop; dominating elements decide the whole node.
    CHECK(P(F::conj({F::tru(), rX})) == "r(X)");
    CHECK(P(F::disj({F::fls(), rX})) == "r(X)");
    CHECK(P(F::conj({rX, F::fls()})) == "⊥");
    CHECK(P(F::disj({rX, F::tru()})) == "⊤");

    // First-occurrence order is preserved.
    CHECK(P(F::conj({sX, rX, sX})) == "(s(X) ∧ r(X))");

    // A union-style view body stays two plain disjuncts even when each
    // branch arrives as a redundant conjunction.
    auto r1 = at("r1", {V("V1")});
    auto r2 = at("r2", {V("V1")});
    CHECK(P(F::disj({F::conj({r1, r1}), F::conj({r2, r2})})) == "(r1(V1) ∨ r2(V1))");
}

TEST_CASE("ground builtins decide themselves") {
    CHECK(P(F::eq(I(3), I(3))) == "⊤");
    CHECK(P(F::eq(I(3), I(4))) == "⊥");
    CHECK(P(F::eq(V("X"), V("X"))) == "⊤");
    CHECK(P(F::eq(S("a"), I(1))) == "⊥");
    CHECK(P(F::eq(V("X"), I(3))) == "X = 3");

    CHECK(P(F::cmp(BuiltinOp::Lt, I(1), I(2))) == "⊤");
    CHECK(P(F::cmp(BuiltinOp::Gt, I(1), I(2))) == "⊥");
    CHECK(P(F::cmp(BuiltinOp::Lt, S("a"), I(1))) == "⊥");
    CHECK(P(F::cmp(BuiltinOp::Lt, D("1962-01-01"), D("1963-01-01"))) == "⊤");
    CHECK(P(F::cmp(BuiltinOp::Eq, V("X"), I(3))) == "X = 3");
    CHECK(P(F::cmp(BuiltinOp::Gt, V("B"), D("1962-12-31"))) == "B > '1962-12-31'");
}

TEST_CASE("negation folds constants and prints unambiguously") {
    auto rX = at("r", {V("X")});
    auto sX = at("s", {V("X")});
    CHECK(P(F::negate(F::tru())) == "⊥");
    CHECK(P(F::negate(F::fls())) == "⊤");
    CHECK(P(F::negate(rX)) == "¬r(X)");
    CHECK(P(F::negate(F::negate(rX))) == "¬¬r(X)");
    CHECK(P(F::negate(F::eq(V("X"), I(3)))) == "¬(X = 3)");
    CHECK(P(F::negate(F::cmp(BuiltinOp::Lt, V("X"), I(3)))) == "¬(X < 3)");
    CHECK(P(F::negate(F::conj({rX, sX}))) == "¬(r(X) ∧ s(X))");
    CHECK(P(F::negate(F::exists({"X"}, rX))) == "¬∃X (r(X))");
}

TEST_CASE("existential quantification keeps live variables and merges") {
    auto rX = at("r", {V("X")});
    auto rXY = at("r", {V("X"), V("Y")});

    CHECK(P(F::exists({"X", "Z"}, rX)) == "∃X (r(X))");
    CHECK(P(F::exists({"Z"}, rX)) == "r(X)");
    CHECK(P(F::exists({}, rXY)) == "r(X, Y)");
    CHECK(P(F::exists({"X", "X"}, rX)) == "∃X (r(X))");
    CHECK(P(F::exists({"X"}, F::tru())) == "⊤");
    CHECK(P(F::exists({"X"}, F::fls())) == "⊥");

    // Directly nested quantifiers merge into one block.
    CHECK(P(F::exists({"X"}, F::exists({"Y"}, rXY))) == "∃X,Y (r(X, Y))");

    // Conjunction and disjunction bodies bring their own parentheses.
    CHECK(P(F::exists({"X"}, F::conj({rX, F::negate(at("v", {V("X")}))}))) ==
          "∃X (r(X) ∧ ¬v(X))");
    CHECK(P(F::exists({"X"}, F::disj({rX, at("v", {V("X")})}))) == "∃X (r(X) ∨ v(X))");
}

TEST_CASE("variables, constants, and predicates are reported") {
    auto f = F::exists({"X"}, F::conj({at("r", {V("X"), V("Y")}), F::eq(V("Z"), S("F"))}));
    CHECK(free_vars(f) == std::set<std::string>{"Y", "Z"});
    CHECK(all_vars(f) == std::set<std::string>{"X", "Y", "Z"});

    auto g = F::conj({F::eq(V("G"), S("F")), at("q", {I(3), D("1962-05-01")})});
    auto cs = formula_constants(g);
    CHECK(cs[AttrType::String] == std::set<Value>{Value::of_string("F")});
    CHECK(cs[AttrType::Int] == std::set<Value>{Value::of_int(3)});
    CHECK(cs[AttrType::Date] == std::set<Value>{Value::of_date("1962-05-01")});

    auto h = F::negate(
        F::exists({"X"}, F::conj({at("r", {V("X"), V("Y")}), F::negate(at("+q", {V("X")}))})));
    CHECK(formula_predicates(h) == std::map<std::string, size_t>{{"r", 2}, {"+q", 1}});
}

TEST_CASE("substitution replaces free occurrences and avoids capture") {
    CHECK(P(substitute(at("r", {V("X"), V("Y")}), {{"X", I(3)}})) == "r(3, Y)");
    CHECK(P(substitute(F::eq(V("X"), I(3)), {{"X", I(3)}})) == "⊤");

    // Bound occurrences are shadowed.
    CHECK(P(substitute(F::exists({"X"}, at("r", {V("X")})), {{"X", I(3)}})) == "∃X (r(X))");

    // A binder that would capture a substituted variable is renamed.
    CHECK(P(substitute(F::exists({"X"}, at("r", {V("X"), V("Y")})), {{"Y", V("X")}})) ==
          "∃X1 (r(X1, X))");

    // The rename cascades through nested binders.
    auto h = F::exists({"X"}, F::conj({at("r", {V("X"), V("Y")}),
                                       F::exists({"X"}, at("q", {V("X")}))}));
    CHECK(P(h) == "∃X (r(X, Y) ∧ ∃X (q(X)))");
    CHECK(P(substitute(h, {{"Y", V("X")}})) == "∃X1 (r(X1, X) ∧ ∃X2 (q(X2)))");
}

TEST_CASE("fresh names skip reserved and existing ones") {
    FreshGen fg;
    fg.reserve("V1");
    CHECK(fg.fresh("V") == "V2");
    CHECK(fg.fresh("V") == "V3");
    CHECK(fg.fresh("W") == "W1");

    FreshGen fg2;
    fg2.reserve_all(F::exists({"X1"}, at("r", {V("X1"), V("X")})));
    CHECK(fg2.fresh("X") == "X2");

    Program p = parse_program(
        "source r(a:int).\nview v(a:int).\n"
        "+r(X) :- v(X), not r(X).\n"
        "-r(X1) :- r(X1), not v(X1).\n");
    FreshGen fg3;
    fg3.reserve_program(p);
    CHECK(fg3.fresh("X") == "X2");
}

TEST_CASE("atom rewriting substitutes formulas for atoms in place") {
    auto f = F::conj({at("v", {V("A")}), F::negate(at("v", {V("B")})), at("r1", {V("A")})});
    AtomRewriter rw = [](const std::string& p,
                         const std::vector<Term>& args) -> std::optional<FPtr> {
        if (p != "v") return std::nullopt;
        return F::disj({F::atom("r1", args), F::atom("r2", args)});
    };
    CHECK(P(replace_atoms(f, rw)) == "((r1(A) ∨ r2(A)) ∧ ¬(r1(B) ∨ r2(B)) ∧ r1(A))");

    // Atoms the rewriter declines stay untouched, wherever they sit.
    auto g = F::exists({"A"}, at("v", {V("A")}));
    CHECK(P(replace_atoms(g, rw)) == "∃A (r1(A) ∨ r2(A))");
    AtomRewriter keep = [](const std::string&, const std::vector<Term>&) {
        return std::optional<FPtr>{};
    };
    CHECK(P(replace_atoms(f, keep)) == P(f));
}

TEST_CASE("universal quantifiers and implications build and fold like the rest") {
    auto rX = at("r", {V("X")});
    auto sX = at("s", {V("X")});

    CHECK(P(F::forall({"X"}, rX)) == "∀X (r(X))");
    CHECK(P(F::implies(rX, sX)) == "(r(X) → s(X))");

    // Vacuous binders drop; nested universals merge.
    CHECK(P(F::forall({"Y"}, rX)) == "r(X)");
    CHECK(P(F::forall({"X"}, F::forall({"Y"}, at("p", {V("X"), V("Y")})))) ==
          "∀X,Y (p(X, Y))");

    // Implication folds against constants.
    CHECK(P(F::implies(F::tru(), rX)) == "r(X)");
    CHECK(P(F::implies(F::fls(), rX)) == "⊤");
    CHECK(P(F::implies(rX, F::tru())) == "⊤");
    CHECK(P(F::implies(rX, F::fls())) == "¬r(X)");

    // Substitution respects universal binders and recurses into implications.
    auto f = F::forall({"X"}, F::implies(at("p", {V("X"), V("Y")}), rX));
    std::map<std::string, Term> s{{"Y", Term::constant(Value::of_int(3))},
                                  {"X", Term::var("Z")}};
    CHECK(P(substitute(f, s)) == "∀X (p(X, 3) → r(X))");
    CHECK(free_vars(f) == std::set<std::string>{"Y"});
    CHECK(all_vars(f) == std::set<std::string>{"X", "Y"});
}
