#include "fitch/rewrite.hpp"

#include <map>

#include "fitch/error.hpp"
#include "fitch/surface.hpp"

namespace fitch {

const char* redex_name(RedexTag t) {
    switch (t) {
    case RedexTag::BetaFun: return "BetaFun";
    case RedexTag::BetaPair1: return "BetaPair1";
    case RedexTag::BetaPair2: return "BetaPair2";
    case RedexTag::BetaCase1: return "BetaCase1";
    case RedexTag::BetaCase2: return "BetaCase2";
    case RedexTag::BetaBox: return "BetaBox";
    case RedexTag::BetaDia: return "BetaDia";
    case RedexTag::CCOpenCase: return "CCOpenCase";
    case RedexTag::CCOpenAbort: return "CCOpenAbort";
    case RedexTag::CCAppCase: return "CCAppCase";
    case RedexTag::CCAppAbort: return "CCAppAbort";
    case RedexTag::CCFstCase: return "CCFstCase";
    case RedexTag::CCFstAbort: return "CCFstAbort";
    case RedexTag::CCSndCase: return "CCSndCase";
    case RedexTag::CCSndAbort: return "CCSndAbort";
    case RedexTag::CCCaseCase: return "CCCaseCase";
    case RedexTag::CCCaseAbort: return "CCCaseAbort";
    case RedexTag::CCAbortCase: return "CCAbortCase";
    case RedexTag::CCAbortAbort: return "CCAbortAbort";
    }
    return "?";
}

namespace {

std::set<std::string> minus(std::set<std::string> s, const std::string& x) {
    s.erase(x);
    return s;
}

/// case s of x.l | y.r  becomes  case s of x.wrap(l) | y.wrap(r), renaming
/// the branch binders away from `outside`.
template <class F>
Term push_case(const Term& c, const std::set<std::string>& outside, F wrap) {
    auto branch = [&](const std::string& x, const Term& b) -> std::pair<std::string, Term> {
        if (!outside.count(x)) return {x, b};
        std::set<std::string> avoid = outside;
        for (const auto& n : all_names(b)) avoid.insert(n);
        std::string x2 = fresh_name(x, avoid);
        return {x2, subst(b, x, Term::var(x2))};
    };
    auto [x, l] = branch(c.name(), c.child(1));
    auto [y, r] = branch(c.name2(), c.child(2));
    return Term::case_of(c.child(0), x, wrap(l), y, wrap(r));
}

std::optional<Contraction> hit(Term t, RedexTag tag) { return Contraction{std::move(t), tag}; }

}  // namespace

std::optional<Contraction> contract(const Term& t) {
    switch (t.kind()) {
    case TermKind::App: {
        const Term& f = t.child(0);
        const Term& a = t.child(1);
        if (f.is(TermKind::Lam)) return hit(subst(f.child(0), f.name(), a), RedexTag::BetaFun);
        if (f.is(TermKind::Case))
            return hit(push_case(f, free_vars(a), [&](const Term& b) { return Term::app(b, a); }),
                       RedexTag::CCAppCase);
        if (f.is(TermKind::Abort) && f.annot().is(TyKind::Fun))
            return hit(Term::abort(f.annot().rhs(), f.child(0)), RedexTag::CCAppAbort);
        return std::nullopt;
    }
    case TermKind::Fst:
    case TermKind::Snd: {
        bool first = t.is(TermKind::Fst);
        const Term& p = t.child(0);
        if (p.is(TermKind::Pair))
            return hit(p.child(first ? 0 : 1), first ? RedexTag::BetaPair1 : RedexTag::BetaPair2);
        if (p.is(TermKind::Case))
            return hit(push_case(p, {}, [&](const Term& b) { return first ? Term::fst(b) : Term::snd(b); }),
                       first ? RedexTag::CCFstCase : RedexTag::CCSndCase);
        if (p.is(TermKind::Abort) && p.annot().is(TyKind::Prod))
            return hit(Term::abort(first ? p.annot().lhs() : p.annot().rhs(), p.child(0)),
                       first ? RedexTag::CCFstAbort : RedexTag::CCSndAbort);
        return std::nullopt;
    }
    case TermKind::Case: {
        const Term& s = t.child(0);
        if (s.is(TermKind::Inl)) return hit(subst(t.child(1), t.name(), s.child(0)), RedexTag::BetaCase1);
        if (s.is(TermKind::Inr)) return hit(subst(t.child(2), t.name2(), s.child(0)), RedexTag::BetaCase2);
        if (s.is(TermKind::Case)) {
            std::set<std::string> outside = minus(free_vars(t.child(1)), t.name());
            for (const auto& v : minus(free_vars(t.child(2)), t.name2())) outside.insert(v);
            return hit(push_case(s, outside,
                                 [&](const Term& b) {
                                     return Term::case_of(b, t.name(), t.child(1), t.name2(), t.child(2));
                                 }),
                       RedexTag::CCCaseCase);
        }
        if (s.is(TermKind::Abort) && s.annot().is(TyKind::Sum))
            return hit(subst(t.child(1), t.name(), Term::abort(s.annot().lhs(), s.child(0))),
                       RedexTag::CCCaseAbort);
        return std::nullopt;
    }
    case TermKind::Abort: {
        const Term& u = t.child(0);
        if (u.is(TermKind::Case))
            return hit(push_case(u, {}, [&](const Term& b) { return Term::abort(t.annot(), b); }),
                       RedexTag::CCAbortCase);
        if (u.is(TermKind::Abort) && u.annot().is(TyKind::Empty))
            return hit(Term::abort(t.annot(), u.child(0)), RedexTag::CCAbortAbort);
        return std::nullopt;
    }
    case TermKind::Open: {
        const Term& u = t.child(0);
        if (u.is(TermKind::Shut)) return hit(u.child(0), RedexTag::BetaBox);
        if (u.is(TermKind::Case))
            return hit(push_case(u, {}, [](const Term& b) { return Term::open(b); }), RedexTag::CCOpenCase);
        if (u.is(TermKind::Abort) && u.annot().is(TyKind::Box))
            return hit(Term::abort(u.annot().operand(), u.child(0)), RedexTag::CCOpenAbort);
        return std::nullopt;
    }
    case TermKind::LetDia:
        if (t.child(0).is(TermKind::Dia))
            return hit(subst(t.child(1), t.name(), t.child(0).child(0)), RedexTag::BetaDia);
        return std::nullopt;
    default: return std::nullopt;
    }
}

namespace {
std::optional<Contraction> in_child(const Term& t, bool outer) {
    for (std::size_t i = 0; i < t.arity(); ++i) {
        auto c = outer ? step(t.child(i)) : step_innermost(t.child(i));
        if (c) {
            std::vector<Term> kids = t.children();
            kids[i] = std::move(c->term);
            return Contraction{t.with_children(std::move(kids)), c->tag};
        }
    }
    return std::nullopt;
}
}  // namespace

std::optional<Contraction> step(const Term& t) {
    if (auto c = contract(t)) return c;
    return in_child(t, true);
}

std::optional<Contraction> step_innermost(const Term& t) {
    if (auto c = in_child(t, false)) return c;
    return contract(t);
}

bool is_normal(const Term& t) { return !step(t).has_value(); }

std::size_t default_fuel(const Term& t) {
    std::size_t n = t.size();
    return 10 * n * n;
}

Normalized normalize(const Term& t, std::size_t fuel, Strategy s, bool keep_trace) {
    Normalized r{t, 0, {}};
    while (true) {
        auto c = s == Strategy::Outermost ? step(r.term) : step_innermost(r.term);
        if (!c) return r;
        if (r.steps == fuel)
            throw Error(ErrorKind::FuelExhausted,
                        "no normal form within " + std::to_string(fuel) + " steps");
        ++r.steps;
        r.term = c->term;
        if (keep_trace) r.trace.push_back(*c);
    }
}

Normalized normalize(const Term& t) { return normalize(t, default_fuel(t)); }

// ---------------------------------------------------------------------------

const Term& subterm_at(const Term& t, const Path& p) {
    const Term* cur = &t;
    for (std::size_t i : p) cur = &cur->child(i);
    return *cur;
}

namespace {
Term replace_from(const Term& t, const Path& p, std::size_t at, const Term& u) {
    if (at == p.size()) return u;
    std::vector<Term> kids = t.children();
    kids.at(p[at]) = replace_from(t.child(p[at]), p, at + 1, u);
    return t.with_children(std::move(kids));
}

Term freshen_rec(const Term& t, std::map<std::string, std::string>& env, std::set<std::string>& used) {
    auto bind = [&](const std::string& x) {
        std::string y = used.count(x) ? fresh_name(x, used) : x;
        used.insert(y);
        return y;
    };
    auto under = [&](const std::string& x, const std::string& y, const Term& body) {
        auto old = env.find(x);
        std::optional<std::string> saved;
        if (old != env.end()) saved = old->second;
        env[x] = y;
        Term r = freshen_rec(body, env, used);
        if (saved) env[x] = *saved;
        else env.erase(x);
        return r;
    };
    switch (t.kind()) {
    case TermKind::Var: {
        auto it = env.find(t.name());
        return it == env.end() ? t : Term::var(it->second);
    }
    case TermKind::Lam: {
        std::string y = bind(t.name());
        return Term::lam(y, t.annot(), under(t.name(), y, t.child(0)));
    }
    case TermKind::LetDia: {
        Term s = freshen_rec(t.child(0), env, used);
        std::string y = bind(t.name());
        return Term::let_dia(y, t.annot(), s, under(t.name(), y, t.child(1)));
    }
    case TermKind::Case: {
        Term s = freshen_rec(t.child(0), env, used);
        std::string x = bind(t.name());
        Term l = under(t.name(), x, t.child(1));
        std::string y = bind(t.name2());
        Term r = under(t.name2(), y, t.child(2));
        return Term::case_of(s, x, l, y, r);
    }
    default: {
        std::vector<Term> kids;
        for (const auto& c : t.children()) kids.push_back(freshen_rec(c, env, used));
        return t.with_children(std::move(kids));
    }
    }
}

void key_rec(const Term& t, std::vector<std::string>& env, std::string& out) {
    auto bound = [&](const std::string& x, const Term& body) {
        env.push_back(x);
        key_rec(body, env, out);
        env.pop_back();
    };
    out += '(';
    out += std::to_string(static_cast<int>(t.kind()));
    switch (t.kind()) {
    case TermKind::Var: {
        for (std::size_t i = env.size(); i-- > 0;)
            if (env[i] == t.name()) {
                out += " #" + std::to_string(env.size() - 1 - i) + ")";
                return;
            }
        out += " " + t.name() + ")";
        return;
    }
    case TermKind::Lam:
        out += " " + print(t.annot()) + " ";
        bound(t.name(), t.child(0));
        break;
    case TermKind::LetDia:
        out += " " + print(t.annot()) + " ";
        key_rec(t.child(0), env, out);
        bound(t.name(), t.child(1));
        break;
    case TermKind::Case:
        key_rec(t.child(0), env, out);
        bound(t.name(), t.child(1));
        bound(t.name2(), t.child(2));
        break;
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Abort:
        out += " " + print(t.annot()) + " ";
        key_rec(t.child(0), env, out);
        break;
    default:
        for (const auto& c : t.children()) key_rec(c, env, out);
    }
    out += ')';
}
}  // namespace

Term replace_at(const Term& t, const Path& p, const Term& u) { return replace_from(t, p, 0, u); }

Term freshen_binders(const Term& t, const std::set<std::string>& avoid) {
    std::map<std::string, std::string> env;
    std::set<std::string> used = avoid;
    for (const auto& v : free_vars(t)) used.insert(v);
    return freshen_rec(t, env, used);
}

std::string alpha_key(const Term& t) {
    std::vector<std::string> env;
    std::string out;
    key_rec(t, env, out);
    return out;
}

// ---------------------------------------------------------------------------

namespace {
void preorder(const Derivation& d, Path& p, std::vector<std::pair<Path, const Derivation*>>& out) {
    out.emplace_back(p, &d);
    for (std::size_t i = 0; i < d.children.size(); ++i) {
        p.push_back(i);
        preorder(d.children[i], p, out);
        p.pop_back();
    }
}
}  // namespace

std::optional<Derivation> eta_step(Mode mode, const Derivation& d) {
    Term t = freshen_binders(d.term, d.ctx.names());
    Derivation fresh = check(mode, d.ctx, t, d.ty);
    std::vector<std::pair<Path, const Derivation*>> nodes;
    Path p;
    preorder(fresh, p, nodes);
    for (const auto& [path, n] : nodes) {
        const Term& s = n->term;
        std::optional<Term> repl;
        if (s.is(TermKind::Shut) && s.child(0).is(TermKind::Open)) {
            const Term& inner = s.child(0).child(0);
            try {
                if (infer(mode, n->ctx, inner).ty == n->ty) repl = inner;
            } catch (const Error&) {
            }
        } else if (s.is(TermKind::LetDia) && s.child(1).is(TermKind::Dia) &&
                   s.child(1).child(0).is(TermKind::Var) && s.child(1).child(0).name() == s.name()) {
            repl = s.child(0);
        }
        if (!repl) continue;
        try {
            return check(mode, d.ctx, replace_at(t, path, *repl), d.ty);
        } catch (const Error&) {
        }
    }
    return std::nullopt;
}

}  // namespace fitch
