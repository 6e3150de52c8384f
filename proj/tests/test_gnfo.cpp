// Tests for guarded-negation membership, comparison abstraction, and the
// order axiomatization.  The axiomatization's key property — that a
// comparison-bearing sentence is satisfiable natively if and only if its
// abstraction is satisfiable alongside the axiom sentence — is checked
// differentially by exhaustive enumeration on both sides.

#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "fo_eval.hpp"
#include "gnfo.hpp"
#include "linearview.hpp"
#include "parser.hpp"

using namespace vlens;

namespace {

Term V(const std::string& n) { return Term::var(n); }
Term I(long long v) { return Term::constant(Value::of_int(v)); }
Term D(const std::string& iso) { return Term::constant(Value::of_date(iso)); }
FPtr at(const std::string& p, std::vector<Term> ts) { return F::atom(p, std::move(ts)); }
std::string P(const FPtr& f) { return print_formula(f); }

Pools int_pools(std::vector<long long> vals) {
    Pools p;
    for (long long v : vals) p.by_type[AttrType::Int].push_back(Value::of_int(v));
    return p;
}

Pools date_pools(std::vector<std::string> isos) {
    Pools p;
    for (const auto& s : isos) p.by_type[AttrType::Date].push_back(Value::of_date(s));
    return p;
}

// Is the sentence satisfiable by some database over `decls` and `pools`?
bool enum_satisfiable(const FPtr& sentence, const std::vector<RelationDecl>& decls,
                      const Pools& pools) {
    bool sat = false;
    for_each_database(decls, pools, [&](const Database& db) {
        if (fo_holds(sentence, db, pools)) {
            sat = true;
            return false;
        }
        return true;
    });
    return sat;
}

// Native side: one unary relation r over the given type, comparisons
// interpreted over the actual value order.
bool native_satisfiable(const FPtr& psi, AttrType type, const Pools& pools) {
    std::vector<RelationDecl> decls = {RelationDecl{"r", {Attribute{"a", type}}}};
    return enum_satisfiable(psi, decls, pools);
}

// Abstract side: comparisons become free unary predicates, constrained only
// by the axiom sentence; every predicate of the combined sentence is
// enumerated as a free unary relation.
bool abstract_satisfiable(const FPtr& psi, const std::vector<Value>& constants, AttrType type,
                          const Pools& pools) {
    FPtr whole = F::conj({axiomatize_comparisons(constants, type), abstract_comparisons(psi)});
    std::vector<RelationDecl> decls;
    for (const auto& [name, arity] : formula_predicates(whole)) {
        REQUIRE(arity == 1);
        decls.push_back(RelationDecl{name, {Attribute{"a", type}}});
    }
    return enum_satisfiable(whole, decls, pools);
}

}  // namespace

TEST_CASE("comparisons abstract into stable predicate names") {
    CHECK(cmp_pred_name(BuiltinOp::Lt, Value::of_int(3)) == "C_lt_i3");
    CHECK(cmp_pred_name(BuiltinOp::Gt, Value::of_int(-2)) == "C_gt_i_2");
    CHECK(cmp_pred_name(BuiltinOp::Lt, Value::of_date("1962-12-31")) == "C_lt_d1962_12_31");
    CHECK_THROWS_AS(cmp_pred_name(BuiltinOp::Eq, Value::of_int(1)), std::invalid_argument);

    FPtr f = F::conj({at("r", {V("X")}), F::cmp(BuiltinOp::Gt, V("X"), I(2))});
    CHECK(P(abstract_comparisons(f)) == "(r(X) ∧ C_gt_i2(X))");

    // A constant on the left reads as the flipped comparison on the right.
    CHECK(P(abstract_comparisons(F::cmp(BuiltinOp::Lt, I(2), V("X")))) == "C_gt_i2(X)");
    CHECK(P(abstract_comparisons(F::cmp(BuiltinOp::Gt, I(2), V("X")))) == "C_lt_i2(X)");

    // Two-variable comparisons stay visible.
    FPtr vv = F::cmp(BuiltinOp::Lt, V("X"), V("Y"));
    CHECK(P(abstract_comparisons(vv)) == "X < Y");

    // Rebuilding descends through every connective.
    FPtr g = F::exists({"X"}, F::negate(F::disj({F::cmp(BuiltinOp::Lt, V("X"), I(1)),
                                                 at("s", {V("X")})})));
    CHECK(P(abstract_comparisons(g)) == "∃X (¬(C_lt_i1(X) ∨ s(X)))");
}

TEST_CASE("guarded negation membership follows the grammar") {
    FPtr rX = at("r", {V("X")});
    FPtr sX = at("s", {V("X")});

    SUBCASE("accepted shapes") {
        CHECK(is_gnfo(F::top()));
        CHECK(is_gnfo(F::bottom()));
        CHECK(is_gnfo(rX));
        CHECK(is_gnfo(F::eq(V("X"), I(1))));
        CHECK(is_gnfo(F::conj({rX, F::negate(sX)})));
        CHECK(is_gnfo(F::exists({"X"}, F::conj({rX, F::negate(sX)}))));
        CHECK(is_gnfo(F::disj({rX, sX})));

        // The guard may cover more variables than the negated part needs.
        CHECK(is_gnfo(F::conj({at("p", {V("X"), V("Y")}), F::negate(at("t", {V("Y")}))})));

        // An abstracted comparison is an atom, so it can guard.
        CHECK(is_gnfo(F::conj({F::cmp(BuiltinOp::Gt, V("X"), I(2)),
                               F::negate(F::eq(V("X"), I(1)))})));

        // Closed negations need a guard in the conjunction, but cover ∅.
        CHECK(is_gnfo(F::conj({rX, F::negate(F::exists({"Y"}, at("s", {V("Y")})))})));

        // Negation bodies may themselves contain guarded negation.
        CHECK(is_gnfo(F::conj({rX, F::negate(F::conj({sX, F::negate(at("t", {V("X")}))}))})));

        // Double negation and complements of pure-negation clauses simplify.
        CHECK(is_gnfo(F::negate(F::negate(rX))));
        CHECK(is_gnfo(F::negate(F::conj({F::negate(rX), F::negate(sX)}))));
    }

    SUBCASE("rejected shapes") {
        CHECK(!is_gnfo(F::negate(rX)));
        CHECK(!is_gnfo(F::exists({"X"}, F::negate(rX))));
        CHECK(!is_gnfo(F::negate(F::exists({"Y"}, at("s", {V("Y")})))));

        // Equalities do not guard.
        CHECK(!is_gnfo(F::conj({F::eq(V("X"), I(1)), F::negate(rX)})));

        // The guard must cover every free variable of the negated part.
        CHECK(!is_gnfo(F::conj({rX, F::negate(at("p", {V("X"), V("Y")}))})));

        // Two-variable comparisons, universals, implications are out.
        CHECK(!is_gnfo(F::cmp(BuiltinOp::Lt, V("X"), V("Y"))));
        CHECK(!is_gnfo(F::forall({"X"}, rX)));
        CHECK(!is_gnfo(F::implies(rX, sX)));

        // An unguarded negation inside a disjunct taints the whole.
        CHECK(!is_gnfo(F::disj({rX, F::negate(sX)})));
    }

    SUBCASE("formulas from the decomposition") {
        Program p = parse_program(fixtures::kExample1);
        FreshGen fg;
        GetPutDecomposition d = build_getput_decomposition(p, fg);

        // The complement of the avoid-part simplifies to a disjunction.
        CHECK(is_gnfo(F::negate(d.phi1)));
        // The lower bound is a plain union of atoms.
        CHECK(is_gnfo(d.phi2));
        // Guarded by a view atom, the avoid-part is admissible as-is.
        CHECK(is_gnfo(F::conj({at("v", {V("V1")}), d.phi1})));
        // Unguarded, its negations are bare.
        CHECK(!is_gnfo(d.phi1));
    }
}

TEST_CASE("the order axiomatization lists every inhabitable region") {
    SUBCASE("no constants means no obligations") {
        CHECK(P(axiomatize_comparisons({}, AttrType::Int)) == "⊤");
    }

    SUBCASE("a single int constant cuts three regions") {
        FPtr f = axiomatize_comparisons({Value::of_int(3)}, AttrType::Int);
        CHECK(P(f) ==
              "∀X ((C_lt_i3(X) ∧ ¬(X = 3) ∧ ¬C_gt_i3(X)) ∨ "
              "(X = 3 ∧ ¬C_lt_i3(X) ∧ ¬C_gt_i3(X)) ∨ "
              "(C_gt_i3(X) ∧ ¬(X = 3) ∧ ¬C_lt_i3(X)))");
    }

    SUBCASE("adjacent ints leave no room between") {
        FPtr f = axiomatize_comparisons({Value::of_int(1), Value::of_int(2)}, AttrType::Int);
        REQUIRE(f->kind == FK::Forall);
        REQUIRE(f->kids[0]->kind == FK::Or);
        CHECK(f->kids[0]->kids.size() == 4);  // below, =1, =2, above
    }

    SUBCASE("ints two apart leave a gap region") {
        FPtr f = axiomatize_comparisons({Value::of_int(1), Value::of_int(3)}, AttrType::Int);
        REQUIRE(f->kind == FK::Forall);
        REQUIRE(f->kids[0]->kind == FK::Or);
        REQUIRE(f->kids[0]->kids.size() == 5);  // below, =1, between, =3, above
        CHECK(P(f->kids[0]->kids[2]) ==
              "(C_gt_i1(X) ∧ ¬(X = 1) ∧ ¬C_lt_i1(X) ∧ "
              "C_lt_i3(X) ∧ ¬(X = 3) ∧ ¬C_gt_i3(X))");
    }

    SUBCASE("date gaps follow civil-day arithmetic") {
        auto regions = [](const char* a, const char* b) {
            FPtr f = axiomatize_comparisons({Value::of_date(a), Value::of_date(b)},
                                            AttrType::Date);
            return f->kids[0]->kids.size();
        };
        CHECK(regions("1962-01-01", "1962-01-02") == 4);  // consecutive days
        CHECK(regions("1962-01-01", "1962-01-03") == 5);
        CHECK(regions("1962-01-31", "1962-02-01") == 4);  // month boundary
        CHECK(regions("2000-02-28", "2000-03-01") == 5);  // Feb 29 exists
        CHECK(regions("1900-02-28", "1900-03-01") == 4);  // 1900 is no leap year
    }

    SUBCASE("the date domain is bounded on both ends") {
        FPtr lo = axiomatize_comparisons({Value::of_date("0000-01-01")}, AttrType::Date);
        CHECK(lo->kids[0]->kids.size() == 2);  // no below region
        FPtr hi = axiomatize_comparisons({Value::of_date("9999-12-31")}, AttrType::Date);
        CHECK(hi->kids[0]->kids.size() == 2);  // no above region
        FPtr mid = axiomatize_comparisons({Value::of_date("1962-06-15")}, AttrType::Date);
        CHECK(mid->kids[0]->kids.size() == 3);
    }

    SUBCASE("preconditions are enforced") {
        CHECK_THROWS_AS(axiomatize_comparisons({Value::of_int(2), Value::of_int(1)},
                                               AttrType::Int),
                        std::invalid_argument);
        CHECK_THROWS_AS(axiomatize_comparisons({Value::of_int(1), Value::of_int(1)},
                                               AttrType::Int),
                        std::invalid_argument);
        CHECK_THROWS_AS(axiomatize_comparisons({Value::of_string("a")}, AttrType::String),
                        std::invalid_argument);
        CHECK_THROWS_AS(axiomatize_comparisons({Value::of_int(1)}, AttrType::Date),
                        std::invalid_argument);
    }
}

TEST_CASE("the intended order interpretation satisfies the axiom sentence") {
    FPtr phi = axiomatize_comparisons({Value::of_int(1), Value::of_int(3)}, AttrType::Int);
    Pools pools = int_pools({0, 1, 2, 3, 4});

    Database db;
    db["C_lt_i1"] = {{Value::of_int(0)}};
    db["C_gt_i1"] = {{Value::of_int(2)}, {Value::of_int(3)}, {Value::of_int(4)}};
    db["C_lt_i3"] = {{Value::of_int(0)}, {Value::of_int(1)}, {Value::of_int(2)}};
    db["C_gt_i3"] = {{Value::of_int(4)}};
    CHECK(fo_holds(phi, db, pools));

    // Misplacing a single value breaks it.
    Database wrong = db;
    wrong["C_lt_i1"].insert({Value::of_int(2)});
    CHECK(!fo_holds(phi, wrong, pools));

    Database missing = db;
    missing["C_gt_i1"].erase({Value::of_int(2)});
    CHECK(!fo_holds(phi, missing, pools));
}

TEST_CASE("abstraction plus axiom is equisatisfiable with native order") {
    FPtr rX = at("r", {V("X")});
    auto ex = [&](std::vector<FPtr> parts) { return F::exists({"X"}, F::conj(std::move(parts))); };

    struct Case {
        FPtr psi;
        std::vector<Value> constants;
        bool expectSat;
    };

    SUBCASE("int cases") {
        Pools nativePool = int_pools({0, 1, 2, 3, 4});
        std::vector<Case> cases = {
            {ex({rX, F::cmp(BuiltinOp::Gt, V("X"), I(1)), F::cmp(BuiltinOp::Lt, V("X"), I(3))}),
             {Value::of_int(1), Value::of_int(3)},
             true},
            {ex({rX, F::cmp(BuiltinOp::Gt, V("X"), I(1)), F::cmp(BuiltinOp::Lt, V("X"), I(2))}),
             {Value::of_int(1), Value::of_int(2)},
             false},
            {ex({rX, F::cmp(BuiltinOp::Lt, V("X"), I(1)), F::cmp(BuiltinOp::Gt, V("X"), I(3))}),
             {Value::of_int(1), Value::of_int(3)},
             false},
            {ex({rX, F::cmp(BuiltinOp::Gt, V("X"), I(3))}), {Value::of_int(3)}, true},
            {ex({rX, F::cmp(BuiltinOp::Lt, V("X"), I(1))}), {Value::of_int(1)}, true},
        };
        for (const auto& c : cases) {
            Pools abstractPool = int_pools({100});
            for (const auto& v : c.constants)
                abstractPool.by_type[AttrType::Int].push_back(v);
            CHECK(native_satisfiable(c.psi, AttrType::Int, nativePool) == c.expectSat);
            CHECK(abstract_satisfiable(c.psi, c.constants, AttrType::Int, abstractPool) ==
                  c.expectSat);
        }
    }

    SUBCASE("date cases") {
        Pools nativePool =
            date_pools({"0000-01-01", "1962-01-01", "1962-01-02", "1962-01-03", "1999-12-31"});
        std::vector<Case> cases = {
            {ex({rX, F::cmp(BuiltinOp::Gt, V("X"), D("1962-01-01")),
                 F::cmp(BuiltinOp::Lt, V("X"), D("1962-01-02"))}),
             {Value::of_date("1962-01-01"), Value::of_date("1962-01-02")},
             false},
            {ex({rX, F::cmp(BuiltinOp::Gt, V("X"), D("1962-01-01")),
                 F::cmp(BuiltinOp::Lt, V("X"), D("1962-01-03"))}),
             {Value::of_date("1962-01-01"), Value::of_date("1962-01-03")},
             true},
            {ex({rX, F::cmp(BuiltinOp::Lt, V("X"), D("0000-01-01"))}),
             {Value::of_date("0000-01-01")},
             false},
        };
        for (const auto& c : cases) {
            Pools abstractPool = date_pools({"5000-01-01"});
            for (const auto& v : c.constants)
                abstractPool.by_type[AttrType::Date].push_back(v);
            CHECK(native_satisfiable(c.psi, AttrType::Date, nativePool) == c.expectSat);
            CHECK(abstract_satisfiable(c.psi, c.constants, AttrType::Date, abstractPool) ==
                  c.expectSat);
        }
    }
}
