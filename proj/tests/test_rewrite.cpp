#include "doctest.h"
#include "fitch/error.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/surface.hpp"

using namespace fitch;

namespace {
Term T(const char* s) { return parse_term(s); }
}

TEST_CASE("single steps") {
    auto s = step(T("open (shut t0)"));
    REQUIRE(s);
    CHECK(s->tag == RedexTag::BetaBox);
    CHECK(alpha_eq(s->term, T("t0")));
    s = step(T("let dia y:A = dia t0 in u0 y"));
    REQUIRE(s);
    CHECK(s->tag == RedexTag::BetaDia);
    CHECK(alpha_eq(s->term, T("u0 t0")));
    s = step(T("open (abort[[]A] t0)"));
    REQUIRE(s);
    CHECK(s->tag == RedexTag::CCOpenAbort);
    CHECK(alpha_eq(s->term, T("abort[A] t0")));
    s = step(T("open (case s of inl a -> f a | inr b -> g b)"));
    REQUIRE(s);
    CHECK(s->tag == RedexTag::CCOpenCase);
    CHECK(alpha_eq(s->term, T("case s of inl a -> open (f a) | inr b -> open (g b)")));
    CHECK_FALSE(step(T("\\x:A. x")));
}

TEST_CASE("leftmost outermost order") {
    auto s = step(T("(\\x:A. x) ((\\y:A. y) z)"));
    REQUIRE(s);
    CHECK(alpha_eq(s->term, T("(\\y:A. y) z")));
    auto i = step_innermost(T("(\\x:A. x) ((\\y:A. y) z)"));
    REQUIRE(i);
    CHECK(alpha_eq(i->term, T("(\\x:A. x) z")));
}

TEST_CASE("commuting conversions avoid capture") {
    auto s = step(T("(case s of inl a -> f | inr b -> g) a"));
    REQUIRE(s);
    CHECK(s->tag == RedexTag::CCAppCase);
    CHECK(alpha_eq(s->term, T("case s of inl c -> f a | inr b -> g a")));
}

TEST_CASE("normalize") {
    Normalized n = normalize(T("\\x:[]A. open (shut (shut (open x)))"));
    CHECK(n.steps == 1);
    CHECK(alpha_eq(n.term, T("\\x:[]A. shut (open x)")));
    CHECK(normalize(T("\\x:A. x")).steps == 0);
    CHECK_THROWS_AS(normalize(T("(\\x:A. x x) (\\x:A. x x)"), 50), Error);
    Normalized tr = normalize(T("fst (open shut (a, b))"), 10, Strategy::Outermost, true);
    REQUIRE(tr.trace.size() == 2);
    CHECK(tr.trace[0].tag == RedexTag::BetaBox);
    CHECK(tr.trace[1].tag == RedexTag::BetaPair1);
}

TEST_CASE("eta steps") {
    Derivation d = check(Mode::is4(), parse_ctx("x : []A"), T("shut (open x)"), parse_type("[]A"));
    auto e = eta_step(Mode::is4(), d);
    REQUIRE(e);
    CHECK(alpha_eq(e->term, T("x")));
    Derivation dd = check(Mode::ik_dia(), parse_ctx("x : <>A"), T("let dia y:A = x in dia y"), parse_type("<>A"));
    auto f = eta_step(Mode::ik_dia(), dd);
    REQUIRE(f);
    CHECK(alpha_eq(f->term, T("x")));
    Derivation n = check(Mode::ik(), parse_ctx("x : A"), T("x"), parse_type("A"));
    CHECK_FALSE(eta_step(Mode::ik(), n));
}

TEST_CASE("definitional equality") {
    auto eq = [](Mode m, const char* ctx, const char* a, const char* b, const char* ty) {
        return def_eq(m, parse_ctx(ctx), T(a), T(b), parse_type(ty), 32).verdict;
    };
    CHECK(eq(Mode::ik_dia(), "x : []A", "shut (let dia y:[]A = open (shut (dia x)) in open y)", "x", "[]A") ==
          Verdict::Equal);
    CHECK(eq(Mode::ik_dia(), "x : <>A", "let dia w:[]<>A = (let dia y:A = x in dia (shut (dia y))) in open w",
             "x", "<>A") == Verdict::Equal);
    CHECK(eq(Mode::ik_dia(), "x : <>A", "(let dia y:A = x in \\z:<>A. dia y) x", "x", "<>A") == Verdict::Equal);
    CHECK(eq(Mode::is4(), "x : [][]A", "shut (shut (open (open x)))", "x", "[][]A") == Verdict::Equal);
    CHECK(eq(Mode::ik(), "x : A, y : A", "x", "y", "A") == Verdict::Distinct);
    CHECK_THROWS_AS(eq(Mode::ik(), "x : A", "x", "()", "A"), Error);
}
