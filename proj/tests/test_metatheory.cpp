#include "doctest.h"
#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/surface.hpp"

using namespace fitch;

namespace {
Derivation D(Mode m, const char* ctx, const char* term) { return infer(m, parse_ctx(ctx), parse_term(term)).deriv; }

template <class F>
ErrorKind kind_of(F f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::ParseError;
}

void same_judgment(Mode m, const Derivation& d, const char* ctx, const Term& t, const Ty& ty) {
    CHECK(validation_error(m, d) == "");
    CHECK(d.ctx == parse_ctx(ctx));
    CHECK(alpha_eq(d.term, t));
    CHECK(d.ty == ty);
}
}  // namespace

TEST_CASE("axiom witnesses") {
    Judgment k = axiom_term(Axiom::K, Mode::ik());
    CHECK(print(k.term) == "shut (open f (open x))");
    CHECK(k.ty == parse_type("[]B"));
    Judgment e = axiom_term(Axiom::EpsM, Mode::ik_dia());
    CHECK(alpha_eq(e.term, parse_term("let dia y:[]A = x in open y")));
    CHECK(kind_of([] { axiom_term(Axiom::T, Mode::ik()); }) == ErrorKind::AxiomUnavailableInMode);
    CHECK(kind_of([] { axiom_term(Axiom::R, Mode::is4()); }) == ErrorKind::AxiomUnavailableInMode);
    CHECK(kind_of([] { axiom_term(Axiom::EtaM, Mode::ik()); }) == ErrorKind::AxiomUnavailableInMode);
    Judgment mono = axiom_term(Axiom::Mono, Mode::ik_dia(), parse_term("\\z:A. (z, z)"));
    CHECK(mono.ty == parse_type("<>(A * A)"));
    CHECK(axiom_term(Axiom::Four, Mode::is4()).ty == parse_type("[][]A"));
    CHECK(axiom_term(Axiom::R, Mode::ir()).ty == parse_type("[]A"));
    CHECK(parse_axiom("four") == Axiom::Four);
}

TEST_CASE("variable weakening") {
    Mode m = Mode::ik();
    Derivation k = D(m, "f : [](A -> B), x : []A", "shut ((open f) (open x))");
    for (std::size_t at = 0; at <= 2; ++at) {
        Derivation w = weaken_var(m, k, at, "z", parse_type("C"));
        CHECK(validation_error(m, w) == "");
        CHECK(w.ty == parse_type("[]B"));
        CHECK(alpha_eq(w.term, k.term));
        Derivation back = strengthen(m, w, at, 1);
        CHECK(back.ctx == k.ctx);
        CHECK(validation_error(m, back) == "");
    }
    CHECK(kind_of([&] { weaken_var(m, k, 0, "x", parse_type("C")); }) == ErrorKind::NameClash);

    // the new name collides with an inner binder, which gets renamed
    Derivation lam = D(m, "x : A", "\\z:B. x");
    Derivation w = weaken_var(m, lam, 1, "z", parse_type("C"));
    CHECK(validation_error(m, w) == "");
    CHECK(alpha_eq(w.term, lam.term));
}

TEST_CASE("left weakening") {
    Mode m = Mode::ik();
    Derivation k = D(m, "f : [](A -> B), x : []A", "shut ((open f) (open x))");
    Derivation l = left_weaken(m, k, parse_ctx("w : C, #"));
    same_judgment(m, l, "w : C, #, f : [](A -> B), x : []A", k.term, k.ty);
    CHECK(left_weaken(m, k, Ctx{}).ctx == k.ctx);
    Derivation closed = D(Mode::ik(), "", "\\y:A. y");
    CHECK(validation_error(m, left_weaken(m, closed, parse_ctx("a : A, #, b : B"))) == "");
}

TEST_CASE("lock weakening in IR") {
    Mode m = Mode::ir();
    Derivation r = D(m, "x : A", "shut x");
    for (std::size_t at : {0u, 1u}) {
        Derivation w = lock_weaken(m, r, at);
        CHECK(validation_error(m, w) == "");
        CHECK(w.ctx.size() == 2);
    }
    CHECK(validation_error(m, lock_weaken(m, D(m, "", "()"), 0)) == "");
    Derivation o = D(m, "x : []A, #", "open x");
    CHECK(validation_error(m, lock_weaken(m, o, 2)) == "");
    CHECK(validation_error(m, lock_weaken(m, o, 1)) == "");
    CHECK(kind_of([&] { lock_weaken(Mode::ik(), r, 0); }) == ErrorKind::ModeUnsupported);
}

TEST_CASE("lock replacement in IS4") {
    Mode m = Mode::is4();
    Derivation inner = D(m, "x : []A, #, #", "open x");
    for (const char* rep : {"a : B, b : C", "", "#, #"}) {
        Derivation r = lock_replace(m, inner, 1, parse_ctx(rep));
        CHECK(validation_error(m, r) == "");
        CHECK(r.ctx.size() == 3 - 1 + parse_ctx(rep).size());
    }
    Derivation four = D(m, "x : []A", "shut (shut (open x))");
    CHECK(validation_error(m, lock_replace(m, four.children[0].children[0], 1, parse_ctx("y : B"))) == "");
    CHECK(kind_of([&] { lock_replace(m, inner, 0, Ctx{}); }) == ErrorKind::NotALock);
    CHECK(kind_of([&] { lock_replace(Mode::ik(), inner, 1, Ctx{}); }) == ErrorKind::ModeUnsupported);
}

TEST_CASE("strengthening") {
    Mode m = Mode::is4();
    auto ds = enumerate_derivations(m, parse_ctx("x : [][]A, #, #"), parse_term("open open x"), parse_type("A"), 64);
    for (const auto& d : ds) {
        Derivation s = strengthen(m, d, 1, 1);
        CHECK(validation_error(m, s) == "");
        CHECK(s.ctx == parse_ctx("x : [][]A, #"));
    }
    Derivation used = D(m, "x : A, y : B", "x");
    CHECK(kind_of([&] { strengthen(m, used, 0, 1); }) == ErrorKind::VariableIsFree);
    CHECK(validation_error(m, strengthen(m, used, 1, 1)) == "");
    CHECK(kind_of([&] { strengthen(Mode::ik(), D(Mode::ik(), "x : []A, #", "open x"), 1, 1); }) ==
          ErrorKind::ModeUnsupported);
}

TEST_CASE("substitution") {
    Mode m = Mode::ik();
    auto subst_ok = [](Mode md, const Derivation& d, std::size_t at, const Derivation& u) {
        Derivation s = substitute_deriv(md, d, at, u);
        CHECK(validation_error(md, s) == "");
        CHECK(alpha_eq(s.term, subst(d.term, d.ctx[at].name, u.term)));
        CHECK(s.ty == d.ty);
        CHECK(s.ctx == d.ctx.prefix(at).concat(d.ctx.suffix(at + 1)));
        return s;
    };
    Derivation body = D(m, "y : []A, f : [](A -> B), x : []A", "shut ((open f) (open x))");
    subst_ok(m, body, 2, D(m, "y : []A, f : [](A -> B)", "shut (open y)"));
    CHECK(kind_of([&] { substitute_deriv(m, body, 2, D(m, "y : []A", "y")); }) == ErrorKind::ContextMismatch);
    CHECK(kind_of([&] { substitute_deriv(m, body, 2, D(m, "y : []A, f : [](A -> B)", "f")); }) ==
          ErrorKind::ContextMismatch);

    // x unused
    subst_ok(m, D(m, "a : A, x : 1", "a"), 1, D(m, "a : A", "()"));
    // a case branch inserts a variable in front of x
    subst_ok(m, D(m, "y : A, s : A + B, x : A", "case s of inl a -> a | inr b -> x"), 2, D(m, "y : A, s : A + B", "y"));
    // IR: x behind a lock
    subst_ok(Mode::ir(), D(Mode::ir(), "x : 1", "shut x"), 0, D(Mode::ir(), "", "()"));

    // contractum of let dia x = dia z in dia x, built as in subject reduction
    Mode md = Mode::ik_dia();
    Derivation u = D(md, "x : A, #", "dia x");
    Derivation lw = left_weaken(md, u, parse_ctx("z : A"));
    Derivation s = subst_ok(md, lw, 1, D(md, "z : A", "z"));
    CHECK(print(s.term) == "dia z");
}

TEST_CASE("canonicity") {
    Mode m = Mode::ik();
    CHECK(canonicity_check(D(m, "", "shut ()")).ok);
    CHECK(canonicity_check(D(m, "#", "()")).ok);
    CHECK(canonicity_check(D(Mode::is4_dia(), "#, #", "dia (shut ())")).ok);
    CHECK(kind_of([&] { canonicity_check(D(m, "x : A", "x")); }) == ErrorKind::PreconditionViolated);
    CHECK(kind_of([&] { canonicity_check(D(m, "", "(\\y:1. y) ()")); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("subformula property") {
    Mode m = Mode::ik();
    auto k = D(m, "f : [](A -> B), x : []A", "shut ((open f) (open x))");
    CHECK(subformula_check(k).holds);
    CHECK(subformula_check(D(m, "x : A", "x")).holds);
    CHECK(kind_of([&] { subformula_check(D(m, "", "(\\y:1. y) ()")); }) == ErrorKind::NotNormal);

    Mode md = Mode::ik_dia();
    auto bad = D(md, "x : <>A", "(let dia y:A = x in \\z:<>A. dia y) x");
    auto r = subformula_check(bad);
    CHECK_FALSE(r.holds);
    bool lam = false;
    for (const auto& v : r.violations)
        if (v.term.is(TermKind::Lam) && v.ty == parse_type("<>A -> <>A")) lam = true;
    CHECK(lam);
}

TEST_CASE("coherence") {
    ModelConfig c;
    c.kind = ModelKind::ConstantComonad;
    c.stages = 1;
    c.bases["A"] = {{2, 3}, {{0, 2}}};
    Model k(c);
    auto r = coherence_check(k, Mode::is4(), parse_ctx("x : [][]A, #, #"), parse_term("open open x"), parse_type("A"), 64);
    CHECK(r.ok);
    CHECK(r.derivations >= 2);

    c.kind = ModelKind::Chain;
    Model ch(c);
    auto ir = coherence_check(ch, Mode::ir(), parse_ctx("x : []A, #, #"), parse_term("open x"), parse_type("A"), 64);
    CHECK(ir.ok);
    CHECK(ir.derivations == 2);
    auto ik = coherence_check(ch, Mode::ik(), parse_ctx("x : []A, #"), parse_term("open x"), parse_type("A"), 64);
    CHECK(ik.derivations == 1);
    CHECK(kind_of([&] {
              coherence_check(ch, Mode::is4(), parse_ctx("x : []A"), parse_term("open x"), parse_type("A"), 64);
          }) == ErrorKind::ModeUnsupported);
}

TEST_CASE("generator") {
    for (Mode m : {Mode::ik(), Mode::ik_dia(), Mode::is4(), Mode::ir_dia()}) {
        GenConfig cfg;
        cfg.mode = m;
        cfg.max_size = 10;
        cfg.seed = 7;
        Generated a = gen_typed_term(cfg);
        Generated b = gen_typed_term(cfg);
        CHECK(print(a.term) == print(b.term));
        CHECK(print(a.ctx) == print(b.ctx));
        std::set<Rule> seen;
        for (std::uint64_t s = 0; s < 400; ++s) {
            cfg.seed = s;
            cfg.max_size = 30;
            Generated g = gen_typed_term(cfg);
            CHECK(validation_error(m, g.deriv) == "");
            std::vector<const Derivation*> st{&g.deriv};
            while (!st.empty()) {
                const Derivation* d = st.back();
                st.pop_back();
                seen.insert(d->rule);
                for (const auto& c : d->children) st.push_back(&c);
            }
        }
        CHECK(seen.size() == (m.dia_enabled ? 15u : 13u));
    }
}
