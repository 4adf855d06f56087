#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/surface.hpp"

namespace fitch {

Ty ctx_type(const Ctx& ctx) {
    Ty t = Ty::unit();
    for (const auto& e : ctx) t = e.lock ? Ty::dia(t) : Ty::prod(t, *e.ty);
    return t;
}

Term context_term(const Ctx& ctx) {
    Term c = Term::unit();
    for (const auto& e : ctx) c = e.lock ? Term::dia(c) : Term::pair(c, Term::var(e.name));
    return c;
}

Term box_map_term(const std::string& x, const Term& t) { return Term::shut(subst(t, x, Term::open(Term::var(x)))); }

Term dia_map_term(const std::string& x, const Ty& a, const Term& t) {
    return Term::let_dia(x, a, Term::var(x), Term::dia(t));
}

Term compose_terms(const std::string& x, const Term& u, const Term& t) { return subst(u, x, t); }

Term lock_repl_term(const std::string& x, const Ctx& head, const Ctx& tail) {
    Term v = Term::var(x);
    if (tail.size() == 0) return Term::dia(v);
    const Entry& last = tail[tail.size() - 1];
    Ctx rest = tail.prefix(tail.size() - 1);
    Term l = lock_repl_term(x, head, rest);
    if (!last.lock) return subst(l, x, Term::fst(v));
    Term inner = Term::let_dia(x, ctx_type(head), l, Term::shut(Term::dia(v)));
    return Term::let_dia(x, ctx_type(head.concat(rest)), v, Term::open(inner));
}

Term weakening_term(const std::string& x, const Ctx& head, const Ctx& tail) {
    Term v = Term::var(x);
    if (tail.size() == 0) return v;
    const Entry& last = tail[tail.size() - 1];
    Ctx rest = tail.prefix(tail.size() - 1);
    Term w = weakening_term(x, head, rest);
    if (!last.lock) return subst(w, x, Term::fst(v));
    return subst(w, x, Term::let_dia(x, ctx_type(head.concat(rest)), v, v));
}

namespace {

Term eps_m(const std::string& x, const Ty& a) {
    return Term::let_dia("y", Ty::box(a), Term::var(x), Term::open(Term::var("y")));
}

class TermModel {
public:
    TermModel(Mode mode, std::string x) : mode_(mode), x_(std::move(x)) {}

    Term go(const Derivation& d) {
        const Term& t = d.term;
        const Ctx& g = d.ctx;
        Term v = Term::var(x_);
        auto kid = [&](std::size_t i) { return go(d.children[i]); };
        switch (d.rule) {
        case Rule::Var: {
            std::size_t i = *d.split;
            return Term::snd(weakening_term(x_, g.prefix(i + 1), g.suffix(i + 1)));
        }
        case Rule::Lam: {
            Term body = kid(0);
            std::string y = t.name() == x_ ? fresh_name(x_, {x_}) : t.name();
            return Term::lam(y, t.annot(), subst(body, x_, Term::pair(v, Term::var(y))));
        }
        case Rule::App: return Term::app(kid(0), kid(1));
        case Rule::Unit: return Term::unit();
        case Rule::Pair: return Term::pair(kid(0), kid(1));
        case Rule::Fst: return Term::fst(kid(0));
        case Rule::Snd: return Term::snd(kid(0));
        case Rule::Inl: return Term::inl(t.annot(), kid(0));
        case Rule::Inr: return Term::inr(t.annot(), kid(0));
        case Rule::Shut: {
            // box [[t]] after the unit shut (dia x)
            Term eta = Term::shut(Term::dia(v));
            return compose_terms(x_, box_map_term(x_, kid(0)), eta);
        }
        case Rule::Open: {
            std::size_t k = *d.split;
            Ty inner = ctx_type(g.prefix(k));
            Term mapped = compose_terms(x_, dia_map_term(x_, inner, kid(0)), to_lock(g, k));
            return compose_terms(x_, eps_m(x_, d.ty), mapped);
        }
        case Rule::Dia: {
            std::size_t k = *d.split;
            return compose_terms(x_, dia_map_term(x_, ctx_type(g.prefix(k)), kid(0)), to_lock(g, k));
        }
        case Rule::LetDia: {
            const Ty& a = d.children[0].ty.operand();
            Term pairing = Term::let_dia(x_, a, Term::var(x_), Term::dia(Term::pair(Term::unit(), v)));
            return compose_terms(x_, kid(1), compose_terms(x_, pairing, kid(0)));
        }
        case Rule::Case: {
            std::size_t k = *d.split;
            const Ty& st = d.children[0].ty;
            Ctx head = g.prefix(k), tail = g.suffix(k);
            Term dist = distribute(kid(0), head, tail, st);
            std::set<std::string> avoid{x_};
            Term l = kid(1), r = kid(2);
            for (const auto& n : all_names(l)) avoid.insert(n);
            for (const auto& n : all_names(r)) avoid.insert(n);
            std::string p = fresh_name("p", avoid);
            std::string q = fresh_name("q", avoid);
            return Term::case_of(dist, p, subst(l, x_, Term::var(p)), q, subst(r, x_, Term::var(q)));
        }
        case Rule::Abort: {
            std::size_t k = *d.split;
            return Term::abort(d.ty, refute(kid(0), g.prefix(k), g.suffix(k)));
        }
        }
        throw std::logic_error("unhandled rule in term model");
    }

private:
    /// x:[[G]] to <>[[G.prefix(k)]] for open/dia at split k.
    Term to_lock(const Ctx& g, std::size_t k) const {
        if (mode_.calculus == Calculus::IS4) return lock_repl_term(x_, g.prefix(k), g.suffix(k));
        return weakening_term(x_, g.prefix(k + 1), g.suffix(k + 1));
    }

    /// x:[[head, tail]] to [[head, A, tail]] + [[head, B, tail]], pushing the
    /// scrutinee s : A + B (over x:[[head]]) through products and diamonds.
    Term distribute(const Term& s, const Ctx& head, const Ctx& tail, const Ty& st) {
        Term v = Term::var(x_);
        auto sides = [&](const Ctx& t) {
            return std::pair{ctx_type(head.with_var("_", st.lhs()).concat(t)),
                             ctx_type(head.with_var("_", st.rhs()).concat(t))};
        };
        if (tail.size() == 0) {
            auto [l, r] = sides(Ctx{});
            std::set<std::string> avoid = all_names(s);
            avoid.insert(x_);
            std::string a = fresh_name("a", avoid);
            return Term::case_of(s, a, Term::inl(r, Term::pair(v, Term::var(a))), a,
                                 Term::inr(l, Term::pair(v, Term::var(a))));
        }
        const Entry& last = tail[tail.size() - 1];
        Ctx rest = tail.prefix(tail.size() - 1);
        Term inner = distribute(s, head, rest, st);
        if (!last.lock) {
            auto [l, r] = sides(tail);
            Term y = Term::snd(v);
            Term sc = subst(inner, x_, Term::fst(v));
            std::set<std::string> avoid = all_names(sc);
            avoid.insert(x_);
            std::string p = fresh_name("p", avoid);
            return Term::case_of(sc, p, Term::inl(r, Term::pair(Term::var(p), y)), p,
                                 Term::inr(l, Term::pair(Term::var(p), y)));
        }
        auto [l, r] = sides(tail);
        std::string z = x_ == "z" ? "z1" : "z";
        std::set<std::string> avoid = all_names(inner);
        avoid.insert(x_);
        avoid.insert(z);
        std::string p = fresh_name("p", avoid);
        Term body = Term::case_of(subst(inner, x_, Term::var(z)), p, Term::inl(r, Term::dia(Term::var(p))), p,
                                  Term::inr(l, Term::dia(Term::var(p))));
        return Term::let_dia(z, ctx_type(head.concat(rest)), Term::var(x_), body);
    }

    /// x:[[head, tail]] to 0 from s : 0 over x:[[head]].
    Term refute(const Term& s, const Ctx& head, const Ctx& tail) {
        if (tail.size() == 0) return s;
        const Entry& last = tail[tail.size() - 1];
        Ctx rest = tail.prefix(tail.size() - 1);
        Term inner = refute(s, head, rest);
        if (!last.lock) return subst(inner, x_, Term::fst(Term::var(x_)));
        return Term::let_dia(x_, ctx_type(head.concat(rest)), Term::var(x_), Term::abort(Ty::empty(), inner));
    }

    Mode mode_;
    std::string x_;
};

}  // namespace

Term term_model_denote(Mode mode, const std::string& x, const Derivation& d) {
    if (!mode.dia_enabled)
        throw Error(ErrorKind::ModeUnsupported, "the term model interprets locks with <>, which " + mode_name(mode) +
                                                    " lacks");
    return TermModel(mode, x).go(d);
}


namespace {

const std::string kX = "x";

Term vx() { return Term::var(kX); }
Term eta_m() { return Term::shut(Term::dia(vx())); }
Term eps_m_at(const Ty& a) { return eps_m(kX, a); }
Term delta() { return Term::shut(Term::shut(Term::open(vx()))); }

// sample morphisms X -> X * X and X * X -> X
Term dup() { return Term::pair(vx(), vx()); }
Term second() { return Term::snd(vx()); }

Ctx over(const Ty& a) { return Ctx{}.with_var(kX, a); }

void add(std::vector<Goal>& gs, const std::string& name, Mode m, Ctx ctx, Term lhs, Term rhs, Ty ty) {
    gs.push_back({name, m, std::move(ctx), std::move(lhs), std::move(rhs), std::move(ty)});
}

void context_term_goal(std::vector<Goal>& gs, const std::string& name, Mode m, const char* ctx, const char* term) {
    Ctx g = parse_ctx(ctx);
    Term t = parse_term(term);
    Inferred r = infer(m, g, t);
    std::set<std::string> avoid = g.names();
    for (const auto& n : all_names(t)) avoid.insert(n);
    std::string x = fresh_name("x", avoid);
    Term den = term_model_denote(m, x, r.deriv);
    add(gs, name, m, g, t, subst(den, x, context_term(g)), r.ty);
}

}  // namespace

std::vector<Goal> appendix_goals() {
    std::vector<Goal> gs;
    const Mode ik = Mode::ik_dia(), s4 = Mode::is4_dia(), ir = Mode::ir_dia();
    const Ty a = Ty::base("A");
    for (const Ty& x : {a, Ty::box(a), Ty::dia(a), Ty::fun(a, a)}) {
        const std::string at = "/" + print(x);
        const Ty xx = Ty::prod(x, x);
        add(gs, "box-functor-id" + at, ik, over(Ty::box(x)), box_map_term(kX, vx()), vx(), Ty::box(x));
        add(gs, "box-functor-comp" + at, ik, over(Ty::box(x)),
            compose_terms(kX, box_map_term(kX, second()), box_map_term(kX, dup())),
            box_map_term(kX, compose_terms(kX, second(), dup())), Ty::box(x));
        add(gs, "dia-functor-id" + at, ik, over(Ty::dia(x)), dia_map_term(kX, x, vx()), vx(), Ty::dia(x));
        add(gs, "dia-functor-comp" + at, ik, over(Ty::dia(x)),
            compose_terms(kX, dia_map_term(kX, xx, second()), dia_map_term(kX, x, dup())),
            dia_map_term(kX, x, compose_terms(kX, second(), dup())), Ty::dia(x));
        add(gs, "eta-m-natural" + at, ik, over(x),
            compose_terms(kX, box_map_term(kX, dia_map_term(kX, x, dup())), eta_m()), compose_terms(kX, eta_m(), dup()),
            Ty::box(Ty::dia(xx)));
        add(gs, "eps-m-natural" + at, ik, over(Ty::dia(Ty::box(x))),
            compose_terms(kX, eps_m_at(xx), dia_map_term(kX, Ty::box(x), box_map_term(kX, dup()))),
            compose_terms(kX, dup(), eps_m_at(x)), xx);
        add(gs, "triangle-box" + at, ik, over(Ty::box(x)),
            compose_terms(kX, box_map_term(kX, eps_m_at(x)), eta_m()), vx(), Ty::box(x));
        add(gs, "triangle-dia" + at, ik, over(Ty::dia(x)),
            compose_terms(kX, eps_m_at(Ty::dia(x)), dia_map_term(kX, x, eta_m())), vx(), Ty::dia(x));

        const Term r = Term::shut(vx());
        add(gs, "r-natural" + at, ir, over(x), compose_terms(kX, box_map_term(kX, dup()), r),
            compose_terms(kX, r, dup()), Ty::box(xx));
        add(gs, "box-r" + at, ir, over(Ty::box(x)), box_map_term(kX, r), r, Ty::box(Ty::box(x)));

        const Term eps = Term::open(vx());
        add(gs, "eps-natural" + at, s4, over(Ty::box(x)), compose_terms(kX, dup(), eps),
            compose_terms(kX, eps, box_map_term(kX, dup())), xx);
        add(gs, "delta-natural" + at, s4, over(Ty::box(x)), compose_terms(kX, delta(), box_map_term(kX, dup())),
            compose_terms(kX, box_map_term(kX, box_map_term(kX, dup())), delta()), Ty::box(Ty::box(xx)));
        add(gs, "comonad-assoc" + at, s4, over(Ty::box(x)), compose_terms(kX, delta(), delta()),
            compose_terms(kX, box_map_term(kX, delta()), delta()), Ty::box(Ty::box(Ty::box(x))));
        add(gs, "comonad-counit-outer" + at, s4, over(Ty::box(x)), compose_terms(kX, eps, delta()), vx(),
            Ty::box(x));
        add(gs, "comonad-counit-inner" + at, s4, over(Ty::box(x)),
            compose_terms(kX, box_map_term(kX, eps), delta()), vx(), Ty::box(x));

        // l and w against context terms, for a few tails over x
        const Ctx head = Ctx{}.with_var("a", a);
        const Ctx tails[] = {Ctx{},
                             Ctx{}.with_var("b", x),
                             Ctx{}.with_lock(),
                             Ctx{}.with_var("b", x).with_lock(),
                             Ctx{}.with_lock().with_lock(),
                             Ctx{}.with_lock().with_var("b", x)};
        for (std::size_t i = 0; i < std::size(tails); ++i) {
            const Ctx g = head.concat(tails[i]);
            const std::string tag = at + "/tail" + std::to_string(i);
            add(gs, "lock-repl-context" + tag, s4, g, subst(lock_repl_term(kX, head, tails[i]), kX, context_term(g)),
                Term::dia(context_term(head)), Ty::dia(ctx_type(head)));
            add(gs, "weakening-context" + tag, ir, g, subst(weakening_term(kX, head, tails[i]), kX, context_term(g)),
                context_term(head), ctx_type(head));
        }
    }

    // one instance per typing rule of the context-term lemma
    struct Case {
        const char* name;
        Mode mode;
        const char* ctx;
        const char* term;
    };
    const Case cases[] = {
        {"var", ik, "y : A, z : B", "y"},
        {"lam", ik, "y : A", "\\w:B. (y, w)"},
        {"app", ik, "f : A -> B, y : A", "f y"},
        {"unit", ik, "y : A", "()"},
        {"pair", ik, "y : A, z : B", "(z, y)"},
        {"fst", ik, "p : A * B", "fst p"},
        {"snd", ik, "p : A * B", "snd p"},
        {"inl", ik, "y : A", "inl[B] y"},
        {"inr", ik, "y : A", "inr[B] y"},
        {"case", ik, "s : A + B", "case s of inl a -> inr[B] a | inr b -> inl[A] b"},
        {"case-under-lock", ik, "s : A + B, #", "shut (case s of inl a -> () | inr b -> ())"},
        {"abort", ik, "s : 0, #, y : A", "abort[A] s"},
        {"shut", ik, "y : A", "shut ()"},
        {"open", ik, "f : [](A -> B), y : []A", "shut ((open f) (open y))"},
        {"dia", ik, "y : A, #, z : B", "dia y"},
        {"letdia", ik, "y : <>A", "let dia w:A = y in dia (w, w)"},
        {"open-is4", s4, "y : [][]A, #, #", "open open y"},
        {"open-is4-no-lock", s4, "y : []A", "open y"},
        {"dia-is4", s4, "y : A, #, z : B, #", "dia y"},
        {"var-ir", ir, "y : A, #, z : B, #", "y"},
        {"open-ir", ir, "y : []A, #, z : B, #", "open y"},
        {"dia-ir", ir, "y : A, #, z : B, #", "dia y"},
    };
    for (const auto& c : cases)
        context_term_goal(gs, std::string("context-term/") + c.name + "/" + mode_name(c.mode), c.mode, c.ctx, c.term);
    return gs;
}

}  // namespace fitch
