#include "doctest.h"
#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/surface.hpp"

using namespace fitch;

TEST_CASE("context types and terms") {
    Ctx g = parse_ctx("y : A, #, z : B");
    CHECK(ctx_type(g) == parse_type("<>(1 * A) * B"));
    CHECK(print(context_term(g)) == "(dia ((), y), z)");
    check(Mode::ik_dia(), g, context_term(g), ctx_type(g));
    CHECK(ctx_type(Ctx{}) == Ty::unit());
}

TEST_CASE("term-model maps") {
    CHECK(print(box_map_term("x", parse_term("(x, x)"))) == "shut (open x, open x)");
    CHECK(print(dia_map_term("x", parse_type("A"), parse_term("(x, x)"))) == "let dia x:A = x in dia (x, x)");
    CHECK(print(compose_terms("x", parse_term("snd x"), parse_term("(x, x)"))) == "snd (x, x)");

    Ctx head = parse_ctx("a : A");
    CHECK(print(lock_repl_term("x", head, Ctx{})) == "dia x");
    CHECK(print(lock_repl_term("x", head, parse_ctx("b : B"))) == "dia fst x");
    CHECK(print(weakening_term("x", head, parse_ctx("b : B"))) == "fst x");
    Ctx tail = parse_ctx("#, b : B, #");
    Ctx whole = head.concat(tail);
    Ctx over = Ctx{}.with_var("x", ctx_type(whole));
    check(Mode::is4_dia(), over, lock_repl_term("x", head, tail), Ty::dia(ctx_type(head)));
    check(Mode::ir_dia(), over, weakening_term("x", head, tail), ctx_type(head));
}

TEST_CASE("term-model denotation") {
    Mode m = Mode::ik_dia();
    Derivation d = infer(m, parse_ctx("y : A, z : B"), parse_term("y")).deriv;
    CHECK(print(term_model_denote(m, "x", d)) == "snd fst x");
    CHECK_THROWS_AS(term_model_denote(Mode::ik(), "x", d), Error);

    // denotations type-check, and substituting the context term gives back t
    for (Mode md : {Mode::ik_dia(), Mode::is4_dia(), Mode::ir_dia()}) {
        for (std::uint64_t s = 0; s < 40; ++s) {
            GenConfig cfg;
            cfg.mode = md;
            cfg.max_size = 10;
            cfg.seed = s;
            Generated g = gen_typed_term(cfg);
            std::set<std::string> avoid = g.ctx.names();
            for (const auto& n : all_names(g.term)) avoid.insert(n);
            std::string x = fresh_name("x", avoid);
            Term den = term_model_denote(md, x, g.deriv);
            CHECK_NOTHROW(check(md, Ctx{}.with_var(x, ctx_type(g.ctx)), den, g.ty));
            auto e = def_eq(md, g.ctx, g.term, subst(den, x, context_term(g.ctx)), g.ty, 32);
            CHECK_MESSAGE(e.verdict == Verdict::Equal, print(g.ctx) << " |- " << print(g.term));
        }
    }
}

TEST_CASE("appendix goals") {
    auto gs = appendix_goals();
    CHECK(gs.size() > 100);
    std::set<std::string> names;
    for (const auto& g : gs) {
        CAPTURE(g.name);
        CHECK(names.insert(g.name).second);
        CHECK_NOTHROW(check(g.mode, g.ctx, g.lhs, g.ty));
        CHECK_NOTHROW(check(g.mode, g.ctx, g.rhs, g.ty));
        CHECK(def_eq(g.mode, g.ctx, g.lhs, g.rhs, g.ty, 32).verdict == Verdict::Equal);
    }
}
