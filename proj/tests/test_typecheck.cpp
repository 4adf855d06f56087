#include "doctest.h"
#include "fitch/error.hpp"
#include "fitch/surface.hpp"
#include "fitch/typecheck.hpp"

using namespace fitch;

namespace {
ErrorKind kind_of(Mode m, const char* ctx, const char* term) {
    try {
        infer(m, parse_ctx(ctx), parse_term(term));
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::ParseError;
}
Ty ty_of(Mode m, const char* ctx, const char* term) {
    Inferred r = infer(m, parse_ctx(ctx), parse_term(term));
    CHECK(validation_error(m, r.deriv) == "");
    return r.ty;
}
}  // namespace

TEST_CASE("axiom derivations") {
    CHECK(ty_of(Mode::ik(), "f : [](A -> B), x : []A", "shut ((open f) (open x))") == parse_type("[]B"));
    CHECK(ty_of(Mode::is4(), "x : []A", "shut (shut (open x))") == parse_type("[][]A"));
    CHECK(ty_of(Mode::is4(), "x : []A", "open x") == parse_type("A"));
    CHECK(ty_of(Mode::ir(), "x : A", "shut x") == parse_type("[]A"));
    CHECK(ty_of(Mode::ik_dia(), "x : <>[]A", "let dia y:[]A = x in open y") == parse_type("A"));
    CHECK(ty_of(Mode::ik_dia(), "x : A", "shut dia x") == parse_type("[]<>A"));
}

TEST_CASE("rule side conditions") {
    CHECK(kind_of(Mode::ik(), "x : A", "shut x") == ErrorKind::VariableBehindLock);
    CHECK(kind_of(Mode::is4(), "x : A", "shut x") == ErrorKind::VariableBehindLock);
    CHECK(kind_of(Mode::ik(), "x : []A", "open x") == ErrorKind::NoLockForOpen);
    CHECK(kind_of(Mode::ik(), "x : []A", "shut shut open x") == ErrorKind::VariableBehindLock);
    CHECK(kind_of(Mode::ik(), "", "y") == ErrorKind::UnboundVariable);
    CHECK(kind_of(Mode::ik(), "x : A", "dia x") == ErrorKind::DiaDisabled);
    CHECK(kind_of(Mode::ik_dia(), "x : <>A, z : B", "let dia y:A = x in dia z") == ErrorKind::SharedVariableInLetDia);
    CHECK(kind_of(Mode::ik(), "x : A", "fst x") == ErrorKind::TypeMismatch);
    CHECK_THROWS_AS(check(Mode::ik(), parse_ctx("f : [](A -> B), x : []A"), parse_term("shut ((open f) (open x))"),
                          parse_type("B")),
                    Error);
}

TEST_CASE("ik implies is4 and ir on a sample") {
    for (const char* t : {"shut ((open f) (open x))", "\\y:A. shut (open f)", "(f, ())"}) {
        for (Mode m : {Mode::is4(), Mode::ir()}) {
            Ctx c = parse_ctx("f : [](A -> B), x : []A");
            Ty a = infer(Mode::ik(), c, parse_term(t)).ty;
            CHECK(infer(m, c, parse_term(t)).ty == a);
        }
    }
}

TEST_CASE("case split moves right when needed") {
    Mode m = Mode::ik();
    Ctx c = parse_ctx("y : [](A + B), #");
    Term t = parse_term("case open y of inl a -> inr[B] a | inr b -> inl[A] b");
    Inferred r = infer(m, c, t);
    CHECK(r.ty == parse_type("B + A"));
    CHECK(r.deriv.split == std::optional<std::size_t>(2));
    CHECK(is_valid(m, r.deriv));
}

TEST_CASE("binders that clash with the context are renamed") {
    Ctx c = parse_ctx("x : B");
    Inferred r = infer(Mode::ik(), c, parse_term("\\x:A. (x, ())"));
    CHECK(r.ty == parse_type("A -> A * 1"));
    CHECK(is_valid(Mode::ik(), r.deriv));
}

TEST_CASE("derivation enumeration") {
    Ctx c = parse_ctx("x : [][]A, #, #");
    Term t = parse_term("open (open x)");
    Ty a = parse_type("A");
    auto is4 = enumerate_derivations(Mode::is4(), c, t, a, 64);
    CHECK(is4.size() >= 2);
    for (const auto& d : is4) CHECK(is_valid(Mode::is4(), d));
    CHECK(enumerate_derivations(Mode::ik(), c, t, a, 64).size() == 1);
    CHECK(enumerate_derivations(Mode::ik(), parse_ctx("x : A"), parse_term("x"), a, 64).size() == 1);
    CHECK(enumerate_derivations(Mode::ir(), parse_ctx("x : []A, #, #"), parse_term("open x"), a, 64).size() == 2);
    CHECK_THROWS_AS(enumerate_derivations(Mode::is4(), c, t, a, 1), Error);
}

TEST_CASE("determinism and validator catches tampering") {
    Ctx c = parse_ctx("x : [][]A, #, #");
    Term t = parse_term("open (open x)");
    Derivation d1 = infer(Mode::is4(), c, t).deriv;
    Derivation d2 = infer(Mode::is4(), c, t).deriv;
    CHECK(d1.split_vector() == d2.split_vector());
    CHECK(print_derivation(d1) == print_derivation(d2));
    Derivation bad = infer(Mode::ik(), c, t).deriv;
    CHECK(is_valid(Mode::ik(), bad));
    bad.split = 0;
    CHECK_FALSE(is_valid(Mode::ik(), bad));
}
