#include "doctest.h"
#include "fitch/error.hpp"
#include "fitch/semantics.hpp"
#include "fitch/surface.hpp"

using namespace fitch;

namespace {
ModelConfig cfg(ModelKind k, int n, std::vector<int> sizes, std::vector<std::vector<int>> trans = {}) {
    ModelConfig c;
    c.kind = k;
    c.stages = n;
    c.bases["A"] = {std::move(sizes), std::move(trans)};
    return c;
}
Model chain1() { return Model(cfg(ModelKind::Chain, 1, {1, 2}, {{0}})); }
Model const1() { return Model(cfg(ModelKind::ConstantComonad, 1, {2, 3}, {{0, 2}})); }
Model ident() { return Model(cfg(ModelKind::Identity, 0, {3})); }

Mor den(const Model& m, Mode mode, const char* ctx, const char* term) {
    return denote(m, mode, infer(mode, parse_ctx(ctx), parse_term(term)).deriv);
}
}  // namespace

TEST_CASE("type denotations") {
    Model id = ident();
    CHECK(denote_type(id, parse_type("[]A"))->sizes == std::vector<int>{3});

    Model c = chain1();
    Obj dia = denote_type(c, parse_type("<>A"));
    CHECK(dia->sizes == std::vector<int>{0, 1});
    Obj box = denote_type(c, parse_type("[]A"));
    CHECK(box->sizes == std::vector<int>{2, 1});
    CHECK(box->trans[0] == std::vector<int>{0, 0});
    CHECK(denote_type(c, parse_type("0"))->sizes == std::vector<int>{0, 0});
    CHECK_THROWS_AS(denote_type(c, parse_type("B")), Error);

    CHECK(denote_ctx(c, Ctx{})->key == c.unit()->key);
    CHECK(denote_ctx(c, parse_ctx("x : A, #"))->key == c.dia(c.prod(c.unit(), c.base("A")))->key);
    CHECK(denote_ctx(c, parse_ctx("#"))->key == c.dia(c.unit())->key);
}

TEST_CASE("exponentials are natural families") {
    Model c = chain1();
    Obj a = c.base("A");
    Obj e = c.exp(a, a);
    // stage 1: all maps 2 -> 2; stage 0: those fixing b
    CHECK(e->sizes == std::vector<int>{2, 4});
    Mor ev = c.eval(a, a);
    CHECK(mor_eq(c.compose(ev, c.prod_map(c.curry(ev), c.id(a))), ev));
}

TEST_CASE("model laws in small models") {
    for (const Model& m : {ident(), chain1(), const1()}) {
        Obj a = m.base("A");
        Obj pa = m.prod(a, m.sum(a, m.unit()));
        for (const Obj& x : {a, pa, m.exp(a, a)}) {
            Mor g = m.counit_m(m.dia(x));
            CHECK(mor_eq(m.untranspose(m.transpose(g)), g));
            // triangle identities
            CHECK(mor_eq(m.compose(m.counit_m(m.dia(x)), m.dia_map(m.unit_m(x))), m.id(m.dia(x))));
            CHECK(mor_eq(m.compose(m.box_map(m.counit_m(x)), m.unit_m(m.box(x))), m.id(m.box(x))));
            if (m.has_monad()) {
                Mor mu = m.monad_mult(x);
                CHECK(mor_eq(m.compose(mu, m.monad_unit(m.dia(x))), m.id(m.dia(x))));
                CHECK(mor_eq(m.compose(m.monad_unit(m.dia(x)), mu), m.id(m.dia(m.dia(x)))));
                CHECK(mor_eq(m.compose(mu, m.dia_map(m.monad_unit(x))), m.id(m.dia(x))));
            }
            if (m.has_point()) {
                CHECK(mor_eq(m.box_map(m.point_r(x)), m.point_r(m.box(x))));
                CHECK(mor_eq(m.point_q(m.dia(x)), m.dia_map(m.point_q(x))));
            }
            // diamond preserves sums stage-wise
            CHECK(m.dia(m.sum(x, a))->sizes == m.sum(m.dia(x), m.dia(a))->sizes);
        }
    }
}

TEST_CASE("lock replacement and weakening") {
    Model k = const1();
    Obj a = k.base("A");
    CHECK(mor_eq(lock_repl_nat(k, Ctx{}, Ctx{}), k.monad_unit(k.unit())));
    CHECK(mor_eq(lock_repl_nat(k, Ctx{}, parse_ctx("#")), k.id(k.dia(k.unit()))));
    CHECK(mor_eq(lock_repl_nat(k, Ctx{}, parse_ctx("x : A")),
                 k.compose(k.monad_unit(k.unit()), k.fst(k.unit(), a))));
    CHECK_THROWS_AS(weakening_nat(k, Ctx{}, parse_ctx("#")), Error);

    Model c = chain1();
    Ctx hx = parse_ctx("x : A");
    CHECK(mor_eq(weakening_nat(c, hx, Ctx{}), c.id(denote_ctx(c, hx))));
    Mor w = weakening_nat(c, hx, parse_ctx("#"));
    CHECK(mor_eq(w, c.point_q(denote_ctx(c, hx))));
    // stage 1 of <>(1 x A) is A_0 = {a}, sent along a -> b
    CHECK(w.tables[0].empty());
    CHECK(w.tables[1] == std::vector<int>{0});
    CHECK_THROWS_AS(lock_repl_nat(c, Ctx{}, Ctx{}), Error);
}

TEST_CASE("denotations of terms") {
    Model id = ident();
    Mor s = den(id, Mode::ir(), "x : A", "shut x");
    CHECK(s.tables[0] == std::vector<int>{0, 1, 2});

    Model c = chain1();
    Mode ik = Mode::ik();
    auto kd = infer(ik, Ctx{}, parse_term("\\f:[](A -> A). \\x:[]A. shut ((open f) (open x))"));
    auto el = eval_closed(c, ik, kd.deriv);
    CHECK(el.size() == 2);
    CHECK_THROWS_AS(denote(c, Mode::is4(), kd.deriv), Error);

    CHECK(eval_closed(id, ik, infer(ik, Ctx{}, parse_term("()")).deriv) == std::vector<int>{0});
    CHECK(eval_closed(id, ik, infer(ik, Ctx{}, parse_term("shut ()")).deriv) == std::vector<int>{0});
    CHECK(eval_closed(c, ik, infer(ik, Ctx{}, parse_term("inl[A] ()")).deriv) == std::vector<int>{0, 0});
    CHECK(eval_closed(c, ik, infer(ik, Ctx{}, parse_term("inr[A] ()")).deriv) == std::vector<int>{1, 2});

    Mor sw = den(c, ik, "p : A + 1", "case p of inl a -> inr[1] a | inr b -> inl[A] b");
    CHECK(sw.tables[1] == std::vector<int>{1, 2, 0});
}

TEST_CASE("coherence of open open x") {
    Model k = const1();
    Mode m = Mode::is4();
    auto ds = enumerate_derivations(m, parse_ctx("x : [][]A, #, #"), parse_term("open open x"), parse_type("A"), 64);
    REQUIRE(ds.size() >= 2);
    Mor first = denote(k, m, ds[0]);
    for (const auto& d : ds) CHECK(mor_eq(denote(k, m, d), first));
}

TEST_CASE("mor_eq") {
    Model id = Model(cfg(ModelKind::Identity, 0, {2}));
    Obj a = id.base("A");
    CHECK(mor_eq(id.id(a), id.id(a)));
    Mor swap = id.tabulate(a, a, [](int, int e) { return 1 - e; });
    CHECK_FALSE(mor_eq(id.id(a), swap));
    CHECK(mor_eq(id.compose(swap, swap), id.id(a)));
    CHECK_THROWS_AS(mor_eq(id.id(a), id.id(id.unit())), Error);
}

TEST_CASE("model laws over denotable objects") {
    for (const Model& m : {ident(), chain1(), const1()}) {
        LawOutcome o = check_model_laws(m, 2);
        CHECK(o.ok());
        CHECK(o.objects > 100);
        CHECK(o.checks > 1000);
    }
    std::size_t skipped = 0;
    auto objs = denotable_objects(chain1(), 0, &skipped);
    CHECK(objs.size() == 3);
    CHECK(skipped == 0);
}
