#include "doctest.h"
#include "fitch/surface.hpp"
#include "fitch/syntax.hpp"

using namespace fitch;

TEST_CASE("free variables") {
    CHECK(free_vars(parse_term("\\x:A. x")).empty());
    CHECK(free_vars(parse_term("(open f) (open x)")) == std::set<std::string>{"f", "x"});
    CHECK(free_vars(parse_term("let dia y:A = x in dia y")) == std::set<std::string>{"x"});
    CHECK(free_vars(parse_term("case s of inl a -> a | inr b -> c")) == std::set<std::string>{"s", "c"});
}

TEST_CASE("substitution avoids capture") {
    Term u = Term::var("u");
    CHECK(alpha_eq(subst(Term::var("x"), "x", u), u));
    Term r = subst(parse_term("\\y:A. x"), "x", Term::var("y"));
    REQUIRE(r.is(TermKind::Lam));
    CHECK(r.name() != "y");
    CHECK(alpha_eq(r, parse_term("\\z:A. y")));
    Term body = parse_term("let dia y:A = x in dia (f y)");
    Term s = subst(body, "f", parse_term("\\w:A. y"));
    CHECK(free_vars(s) == std::set<std::string>{"x", "y"});
}

TEST_CASE("alpha equivalence") {
    CHECK(alpha_eq(parse_term("\\x:A. x"), parse_term("\\y:A. y")));
    CHECK_FALSE(alpha_eq(parse_term("\\x:A. x"), parse_term("\\x:A. shut (open x)")));
    CHECK_FALSE(alpha_eq(parse_term("shut ((open f) (open x))"), parse_term("shut ((open x) (open f))")));
    CHECK_FALSE(alpha_eq(parse_term("\\x:A. \\y:A. x"), parse_term("\\x:A. \\y:A. y")));
    CHECK(alpha_eq(parse_term("case s of inl a -> a | inr b -> b"),
                   parse_term("case s of inl c -> c | inr d -> d")));
}

TEST_CASE("formula translation") {
    Ty a = Ty::base("A");
    CHECK(formula_translation(Ctx{}, a) == a);
    CHECK(formula_translation(parse_ctx("#"), a) == Ty::box(a));
    CHECK(formula_translation(parse_ctx("f : [](A -> B), x : []A, #"), parse_type("B")) ==
          parse_type("[](A -> B) -> []A -> []B"));
}

TEST_CASE("contexts") {
    Ctx c = parse_ctx("x : A, #, y : B");
    CHECK(c.size() == 3);
    CHECK(c.rightmost_lock() == std::optional<std::size_t>(1));
    CHECK(c.index_of("y") == std::optional<std::size_t>(2));
    CHECK_THROWS(c.with_var("x", Ty::base("A")));
    CHECK(parse_ctx("").empty());
}

TEST_CASE("subtypes") {
    Ty t = parse_type("[](A -> B)");
    CHECK(parse_type("A").is_subtype_of(t));
    CHECK(parse_type("A -> B").is_subtype_of(t));
    CHECK_FALSE(parse_type("[]A").is_subtype_of(t));
}
