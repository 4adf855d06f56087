#include "doctest.h"
#include "fitch/error.hpp"
#include "fitch/surface.hpp"

using namespace fitch;

TEST_CASE("parse examples") {
    Term k = parse_term("shut ((open f) (open x))");
    CHECK(alpha_eq(k, Term::shut(Term::app(Term::open(Term::var("f")), Term::open(Term::var("x"))))));
    Term four = parse_term("\\x:[]A. shut (shut (open x))");
    CHECK(four.is(TermKind::Lam));
    CHECK(alpha_eq(parse_term("open shut ()"), Term::open(Term::shut(Term::unit()))));
    CHECK(alpha_eq(parse_term("f a b"), Term::app(Term::app(Term::var("f"), Term::var("a")), Term::var("b"))));
}

TEST_CASE("type precedence") {
    CHECK(parse_type("A -> B -> C") == Ty::fun(Ty::base("A"), Ty::fun(Ty::base("B"), Ty::base("C"))));
    CHECK(parse_type("A * B + C") == Ty::sum(Ty::prod(Ty::base("A"), Ty::base("B")), Ty::base("C")));
    CHECK(parse_type("[]A -> B") == Ty::fun(Ty::box(Ty::base("A")), Ty::base("B")));
    CHECK(parse_type("<>[]1 + 0") == Ty::sum(Ty::dia(Ty::box(Ty::unit())), Ty::empty()));
}

TEST_CASE("round trips") {
    for (const char* s : {"shut ((open f) (open x))", "\\x:[]A. shut (shut (open x))",
                          "let dia y:[]A = x in open y", "(\\x:A. x) (fst (p, q))",
                          "case s of inl a -> inl[B] a | inr b -> abort[A + B] b",
                          "\\f:A -> A. \\x:A. f (f x)", "dia open shut dia ()",
                          "(let dia y:A = x in \\z:<>A. dia y) x"}) {
        Term t = parse_term(s);
        CHECK(alpha_eq(parse_term(print(t)), t));
    }
    Ty ty = parse_type("[](A -> B) -> []A -> []B");
    CHECK(parse_type(print(ty)) == ty);
    CHECK(parse_type(print(parse_type("(A -> B) -> (A + B) * C"))) == parse_type("(A -> B) -> (A + B) * C"));
    CHECK(print(Ctx{}).empty());
    Ctx c = parse_ctx("f : [](A -> B), x : []A, #");
    CHECK(parse_ctx(print(c)) == c);
}

TEST_CASE("parse errors") {
    try {
        parse_term("\\x:A x");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        REQUIRE(e.span());
        CHECK(e.span()->line == 1);
        CHECK(e.span()->column == 6);
        CHECK(std::string(e.what()).find("'.'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_type("A ->"), Error);
    try {
        parse_ctx("x : A, x : B");
        FAIL("expected duplicate");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DuplicateVariable);
    }
}

TEST_CASE("source files") {
    SourceFile f = parse_source(R"(
-- a comment
mode ik
def k [f : [](A -> B), x : []A |- shut ((open f) (open x)) : []B]
def bare [ |- () ]
goal g [x : []A |- shut (open x) == x : []A]
model chain1 { kind = chain(1); A = sizes [1,2] trans [[0]]; B = sizes [0, 1] trans [[]] }
model id { kind = identity; A = sizes [3] }
)");
    REQUIRE(f.mode);
    CHECK(*f.mode == Mode::ik());
    CHECK(f.defs.size() == 2);
    CHECK_FALSE(f.find_def("bare")->type);
    CHECK(f.find_goal("g")->type == Ty::box(Ty::base("A")));
    const auto* m = f.find_model("chain1");
    REQUIRE(m);
    CHECK(m->config.kind == ModelKind::Chain);
    CHECK(m->config.bases.at("B").trans.size() == 1);
    SourceFile again = parse_source(print_model("chain1", m->config));
    CHECK(again.models[0].config.bases.at("A").trans == m->config.bases.at("A").trans);
    CHECK_THROWS_AS(parse_source("model bad { kind = chain(1); A = sizes [1,2] trans [[0,0]] }"), Error);
    CHECK_THROWS_AS(parse_source("def a [|- ()] def a [|- ()]"), Error);
}
