#include "fitch/typecheck.hpp"

#include <set>

#include "fitch/error.hpp"
#include "fitch/surface.hpp"

namespace fitch {

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::Var: return "Var";
    case Rule::Lam: return "Lam";
    case Rule::App: return "App";
    case Rule::Unit: return "Unit";
    case Rule::Pair: return "Pair";
    case Rule::Fst: return "Proj1";
    case Rule::Snd: return "Proj2";
    case Rule::Inl: return "Inl";
    case Rule::Inr: return "Inr";
    case Rule::Case: return "Case";
    case Rule::Abort: return "Abort";
    case Rule::Shut: return "Shut";
    case Rule::Open: return "Open";
    case Rule::Dia: return "DiaIntro";
    case Rule::LetDia: return "LetDia";
    }
    return "?";
}

Rule rule_for(TermKind k) {
    switch (k) {
    case TermKind::Var: return Rule::Var;
    case TermKind::Lam: return Rule::Lam;
    case TermKind::App: return Rule::App;
    case TermKind::Unit: return Rule::Unit;
    case TermKind::Pair: return Rule::Pair;
    case TermKind::Fst: return Rule::Fst;
    case TermKind::Snd: return Rule::Snd;
    case TermKind::Inl: return Rule::Inl;
    case TermKind::Inr: return Rule::Inr;
    case TermKind::Case: return Rule::Case;
    case TermKind::Abort: return Rule::Abort;
    case TermKind::Shut: return Rule::Shut;
    case TermKind::Open: return Rule::Open;
    case TermKind::Dia: return Rule::Dia;
    case TermKind::LetDia: return Rule::LetDia;
    }
    return Rule::Unit;
}

namespace {

void collect_splits(const Derivation& d, std::vector<std::size_t>& out) {
    if (d.split) out.push_back(*d.split);
    for (const auto& c : d.children) collect_splits(c, out);
}

bool has_dia(const Ty& t) {
    switch (t.kind()) {
    case TyKind::Dia: return true;
    case TyKind::Box: return has_dia(t.operand());
    case TyKind::Prod:
    case TyKind::Sum:
    case TyKind::Fun: return has_dia(t.lhs()) || has_dia(t.rhs());
    default: return false;
    }
}

Term renamed(const Term& body, const std::string& x, const std::string& y) {
    return x == y ? body : subst(body, x, Term::var(y));
}

bool lock_after(const Ctx& ctx, std::size_t i) {
    for (std::size_t j = i + 1; j < ctx.size(); ++j)
        if (ctx[j].lock) return true;
    return false;
}

/// Smallest prefix length whose bindings cover `names`.
std::size_t covering_prefix(const Ctx& ctx, const std::set<std::string>& names) {
    std::size_t k = 0;
    for (const auto& x : names)
        if (auto i = ctx.index_of(x)) k = std::max(k, *i + 1);
    return k;
}

Ctx insert_var(const Ctx& ctx, std::size_t k, const std::string& x, const Ty& a) {
    return ctx.prefix(k).with_var(x, a).concat(ctx.suffix(k));
}

using Derivs = std::vector<Derivation>;

class Engine {
public:
    Engine(Mode mode, bool all, std::size_t bound) : mode_(mode), all_(all), bound_(bound) {}

    Derivs go(const Ctx& ctx, const Term& t) {
        switch (t.kind()) {
        case TermKind::Var: return var(ctx, t);
        case TermKind::Lam: {
            need_no_dia(t.annot(), t);
            std::string y = binder_name(ctx, t.name(), t.child(0));
            Derivs out;
            for (auto& d : go(ctx.with_var(y, t.annot()), renamed(t.child(0), t.name(), y))) {
                Ty ty = Ty::fun(t.annot(), d.ty);
                out.push_back(node(Rule::Lam, ctx, t, ty, std::nullopt, {std::move(d)}));
            }
            return out;
        }
        case TermKind::App: {
            Derivs fs = go(ctx, t.child(0));
            Derivs as = go(ctx, t.child(1));
            const Ty& f = fs.front().ty;
            if (!f.is(TyKind::Fun)) mismatch_shape("a function type", f, t.child(0));
            if (f.lhs() != as.front().ty) mismatch(f.lhs(), as.front().ty, t.child(1));
            return combine(Rule::App, ctx, t, f.rhs(), std::nullopt, {fs, as});
        }
        case TermKind::Unit: return {node(Rule::Unit, ctx, t, Ty::unit(), std::nullopt, {})};
        case TermKind::Pair: {
            Derivs as = go(ctx, t.child(0));
            Derivs bs = go(ctx, t.child(1));
            return combine(Rule::Pair, ctx, t, Ty::prod(as.front().ty, bs.front().ty), std::nullopt, {as, bs});
        }
        case TermKind::Fst:
        case TermKind::Snd: {
            Derivs ps = go(ctx, t.child(0));
            const Ty& p = ps.front().ty;
            if (!p.is(TyKind::Prod)) mismatch_shape("a product type", p, t.child(0));
            bool first = t.is(TermKind::Fst);
            return combine(first ? Rule::Fst : Rule::Snd, ctx, t, first ? p.lhs() : p.rhs(), std::nullopt, {ps});
        }
        case TermKind::Inl:
        case TermKind::Inr: {
            need_no_dia(t.annot(), t);
            Derivs ds = go(ctx, t.child(0));
            bool left = t.is(TermKind::Inl);
            Ty ty = left ? Ty::sum(ds.front().ty, t.annot()) : Ty::sum(t.annot(), ds.front().ty);
            return combine(left ? Rule::Inl : Rule::Inr, ctx, t, ty, std::nullopt, {ds});
        }
        case TermKind::Case: return case_of(ctx, t);
        case TermKind::Abort: {
            need_no_dia(t.annot(), t);
            auto cands = range(covering_prefix(ctx, free_vars(t.child(0))), ctx.size());
            return over(cands, t, [&](std::size_t k) {
                Derivs ds = go(ctx.prefix(k), t.child(0));
                if (!ds.front().ty.is(TyKind::Empty)) mismatch(Ty::empty(), ds.front().ty, t.child(0));
                return combine(Rule::Abort, ctx, t, t.annot(), k, {ds});
            });
        }
        case TermKind::Shut: {
            Derivs out;
            for (auto& d : go(ctx.with_lock(), t.child(0))) {
                Ty ty = Ty::box(d.ty);
                out.push_back(node(Rule::Shut, ctx, t, ty, std::nullopt, {std::move(d)}));
            }
            return out;
        }
        case TermKind::Open:
            return over(modal_splits(ctx, t, false), t, [&](std::size_t k) {
                Derivs ds = go(ctx.prefix(k), t.child(0));
                const Ty& b = ds.front().ty;
                if (!b.is(TyKind::Box)) mismatch_shape("a box type", b, t.child(0));
                return combine(Rule::Open, ctx, t, b.operand(), k, {ds});
            });
        case TermKind::Dia:
            need_dia(t);
            return over(modal_splits(ctx, t, true), t, [&](std::size_t k) {
                Derivs ds = go(ctx.prefix(k), t.child(0));
                return combine(Rule::Dia, ctx, t, Ty::dia(ds.front().ty), k, {ds});
            });
        case TermKind::LetDia: {
            need_dia(t);
            Derivs ts = go(ctx, t.child(0));
            Ty want = Ty::dia(t.annot());
            if (ts.front().ty != want) mismatch(want, ts.front().ty, t.child(0));
            for (const auto& y : free_vars(t.child(1)))
                if (y != t.name())
                    throw Error(ErrorKind::SharedVariableInLetDia,
                                "variable '" + y + "' is used in the body of a let dia", span_of(t.child(1)));
            Ctx inner = Ctx{}.with_var(t.name(), t.annot()).with_lock();
            Derivs us = go(inner, t.child(1));
            return combine(Rule::LetDia, ctx, t, us.front().ty, std::nullopt, {ts, us});
        }
        }
        throw Error(ErrorKind::IllTyped, "unknown term former");
    }

private:
    static std::optional<Span> span_of(const Term& t) { return t.span(); }

    [[noreturn]] static void mismatch(const Ty& want, const Ty& got, const Term& at) {
        throw Error(ErrorKind::TypeMismatch, "expected " + print(want) + ", got " + print(got) + " for '" +
                                                 print(at) + "'",
                    at.span());
    }
    [[noreturn]] static void mismatch_shape(const char* want, const Ty& got, const Term& at) {
        throw Error(ErrorKind::TypeMismatch,
                    std::string("expected ") + want + ", got " + print(got) + " for '" + print(at) + "'", at.span());
    }

    void need_dia(const Term& t) const {
        if (!mode_.dia_enabled)
            throw Error(ErrorKind::DiaDisabled, "diamond syntax needs a mode with <> enabled", t.span());
    }
    void need_no_dia(const Ty& ty, const Term& t) const {
        if (!mode_.dia_enabled && has_dia(ty))
            throw Error(ErrorKind::DiaDisabled, "type " + print(ty) + " uses <> in a mode without it", t.span());
    }

    static std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
        std::vector<std::size_t> v;
        for (std::size_t k = lo; k <= hi; ++k) v.push_back(k);
        return v;
    }

    std::vector<std::size_t> modal_splits(const Ctx& ctx, const Term& t, bool is_dia) const {
        std::vector<std::size_t> v;
        switch (mode_.calculus) {
        case Calculus::IK:
            if (auto l = ctx.rightmost_lock()) v.push_back(*l);
            break;
        case Calculus::IR:
            for (std::size_t k = ctx.size(); k-- > 0;)
                if (ctx[k].lock) v.push_back(k);
            break;
        case Calculus::IS4:
            return range(covering_prefix(ctx, free_vars(t.child(0))), ctx.size());
        }
        if (v.empty())
            throw Error(ErrorKind::NoLockForOpen,
                        std::string(is_dia ? "dia" : "open") + " needs a lock in the context", t.span());
        return v;
    }

    Derivs var(const Ctx& ctx, const Term& t) const {
        auto i = ctx.index_of(t.name());
        if (!i) throw Error(ErrorKind::UnboundVariable, "unbound variable '" + t.name() + "'", t.span());
        if (mode_.calculus != Calculus::IR && lock_after(ctx, *i))
            throw Error(ErrorKind::VariableBehindLock, "variable '" + t.name() + "' is behind a lock", t.span());
        return {node(Rule::Var, ctx, t, *ctx[*i].ty, *i, {})};
    }

    Derivs case_of(const Ctx& ctx, const Term& t) {
        auto cands = range(covering_prefix(ctx, free_vars(t.child(0))), ctx.size());
        return over(cands, t, [&](std::size_t k) {
            Derivs ss = go(ctx.prefix(k), t.child(0));
            const Ty& s = ss.front().ty;
            if (!s.is(TyKind::Sum)) mismatch_shape("a sum type", s, t.child(0));
            std::string x = binder_name(ctx, t.name(), t.child(1));
            std::string y = binder_name(ctx, t.name2(), t.child(2));
            Derivs ls = go(insert_var(ctx, k, x, s.lhs()), renamed(t.child(1), t.name(), x));
            Derivs rs = go(insert_var(ctx, k, y, s.rhs()), renamed(t.child(2), t.name2(), y));
            if (ls.front().ty != rs.front().ty) mismatch(ls.front().ty, rs.front().ty, t.child(2));
            return combine(Rule::Case, ctx, t, ls.front().ty, k, {ss, ls, rs});
        });
    }

    /// Tries candidate splits in order. Single mode keeps the first that
    /// works; enumeration mode keeps all of them.
    template <class F>
    Derivs over(const std::vector<std::size_t>& cands, const Term& t, F f) {
        Derivs out;
        std::optional<Error> first;
        for (std::size_t k : cands) {
            try {
                Derivs ds = f(k);
                if (!all_) return ds;
                for (auto& d : ds) out.push_back(std::move(d));
                check_bound(out.size());
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::BoundExceeded) throw;
                if (!first) first = e;
            }
        }
        if (out.empty()) {
            if (first) throw *first;
            throw Error(ErrorKind::NoLockForOpen, "no admissible split", t.span());
        }
        return out;
    }

    void check_bound(std::size_t n) const {
        if (all_ && n > bound_)
            throw Error(ErrorKind::BoundExceeded,
                        "more than " + std::to_string(bound_) + " derivations exist");
    }

    static Derivation node(Rule r, const Ctx& ctx, const Term& t, const Ty& ty, std::optional<std::size_t> split,
                           std::vector<Derivation> kids) {
        Derivation d;
        d.rule = r;
        d.ctx = ctx;
        d.term = t;
        d.ty = ty;
        d.split = split;
        d.children = std::move(kids);
        return d;
    }

    Derivs combine(Rule r, const Ctx& ctx, const Term& t, const Ty& ty, std::optional<std::size_t> split,
                   const std::vector<Derivs>& kids) {
        std::size_t total = 1;
        for (const auto& k : kids) {
            total *= k.size();
            check_bound(total);
        }
        Derivs out;
        std::vector<std::size_t> idx(kids.size(), 0);
        while (true) {
            std::vector<Derivation> pick;
            for (std::size_t i = 0; i < kids.size(); ++i) pick.push_back(kids[i][idx[i]]);
            out.push_back(node(r, ctx, t, ty, split, std::move(pick)));
            std::size_t i = 0;
            for (; i < kids.size(); ++i) {
                if (++idx[i] < kids[i].size()) break;
                idx[i] = 0;
            }
            if (i == kids.size()) break;
        }
        return out;
    }

    Mode mode_;
    bool all_;
    std::size_t bound_;
};

void need_ctx_ok(Mode mode, const Ctx& ctx) {
    if (mode.dia_enabled) return;
    for (const auto& e : ctx)
        if (!e.lock && has_dia(*e.ty))
            throw Error(ErrorKind::DiaDisabled, "context type " + print(*e.ty) + " uses <> in a mode without it");
}

}  // namespace

std::vector<std::size_t> Derivation::split_vector() const {
    std::vector<std::size_t> v;
    collect_splits(*this, v);
    return v;
}

std::size_t Derivation::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

std::string binder_name(const Ctx& ctx, const std::string& x, const Term& body) {
    if (!ctx.has_var(x)) return x;
    std::set<std::string> avoid = ctx.names();
    for (const auto& n : all_names(body)) avoid.insert(n);
    return fresh_name(x, avoid);
}

Inferred infer(Mode mode, const Ctx& ctx, const Term& t) {
    need_ctx_ok(mode, ctx);
    Engine e(mode, false, 1);
    Derivation d = std::move(e.go(ctx, t).front());
    Ty ty = d.ty;
    return {ty, std::move(d)};
}

Derivation check(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty) {
    Inferred r = infer(mode, ctx, t);
    if (r.ty != ty)
        throw Error(ErrorKind::TypeMismatch, "expected " + print(ty) + ", got " + print(r.ty), t.span());
    return std::move(r.deriv);
}

std::vector<Derivation> enumerate_derivations(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty,
                                              std::size_t bound) {
    check(mode, ctx, t, ty);
    Engine e(mode, true, bound);
    std::vector<Derivation> all = e.go(ctx, t);
    std::set<std::vector<std::size_t>> seen;
    std::vector<Derivation> out;
    for (auto& d : all)
        if (seen.insert(d.split_vector()).second) out.push_back(std::move(d));
    return out;
}

// ---------------------------------------------------------------------------
// Validator

namespace {

struct Invalid {
    std::string why;
};

void require(bool ok, const Derivation& d, const std::string& what) {
    if (!ok)
        throw Invalid{std::string(rule_name(d.rule)) + " node '" + print(d.term) + "' in [" + print(d.ctx) +
                      "]: " + what};
}

void validate_node(Mode mode, const Derivation& d) {
    const Term& t = d.term;
    const Ctx& ctx = d.ctx;
    const std::size_t n = ctx.size();
    require(rule_for(t.kind()) == d.rule, d, "rule does not match the term former");
    require(d.children.size() == t.arity(), d, "wrong number of premises");
    auto kid = [&](std::size_t i) -> const Derivation& { return d.children[i]; };
    auto same_term = [&](std::size_t i) {
        require(alpha_eq(kid(i).term, t.child(i)), d, "premise term differs from the subterm");
    };
    auto split = [&]() -> std::size_t {
        require(d.split.has_value(), d, "missing split");
        require(*d.split <= n, d, "split out of range");
        return *d.split;
    };
    auto bound_premise = [&](const Derivation& c, const Ctx& before, std::size_t at, const Ty& a,
                             const std::string& x, const Term& body) {
        require(c.ctx.size() == n + 1, d, "branch context has the wrong length");
        const Entry& e = c.ctx[at];
        require(!e.lock && e.ty == a, d, "bound variable has the wrong type");
        require(!before.has_var(e.name), d, "bound variable clashes with the context");
        Ctx expect = before.prefix(at).with_var(e.name, a).concat(before.suffix(at));
        require(c.ctx == expect, d, "branch context is not the extended context");
        require(alpha_eq(c.term, renamed(body, x, e.name)), d, "branch term is not the renamed body");
    };
    auto modal_split = [&](std::size_t k) {
        if (mode.calculus == Calculus::IS4) return;
        require(k < n && ctx[k].lock, d, "split entry is not a lock");
        if (mode.calculus == Calculus::IK) require(!lock_after(ctx, k), d, "lock to the right of the split");
    };
    if (!mode.dia_enabled) require(d.rule != Rule::Dia && d.rule != Rule::LetDia, d, "<> is disabled");

    switch (d.rule) {
    case Rule::Var: {
        std::size_t k = split();
        require(k < n && !ctx[k].lock && ctx[k].name == t.name(), d, "split is not the binding");
        require(*ctx[k].ty == d.ty, d, "type differs from the binding");
        if (mode.calculus != Calculus::IR) require(!lock_after(ctx, k), d, "variable is behind a lock");
        return;
    }
    case Rule::Lam:
        bound_premise(kid(0), ctx, n, t.annot(), t.name(), t.child(0));
        require(d.ty == Ty::fun(t.annot(), kid(0).ty), d, "type is not the function type");
        return;
    case Rule::App:
        require(kid(0).ctx == ctx && kid(1).ctx == ctx, d, "premise context differs");
        same_term(0);
        same_term(1);
        require(kid(0).ty == Ty::fun(kid(1).ty, d.ty), d, "function and argument types disagree");
        return;
    case Rule::Unit: require(d.ty == Ty::unit(), d, "type is not 1"); return;
    case Rule::Pair:
        require(kid(0).ctx == ctx && kid(1).ctx == ctx, d, "premise context differs");
        same_term(0);
        same_term(1);
        require(d.ty == Ty::prod(kid(0).ty, kid(1).ty), d, "type is not the product");
        return;
    case Rule::Fst:
    case Rule::Snd: {
        require(kid(0).ctx == ctx, d, "premise context differs");
        same_term(0);
        const Ty& p = kid(0).ty;
        require(p.is(TyKind::Prod), d, "premise is not a product");
        require(d.ty == (d.rule == Rule::Fst ? p.lhs() : p.rhs()), d, "projection type differs");
        return;
    }
    case Rule::Inl:
    case Rule::Inr:
        require(kid(0).ctx == ctx, d, "premise context differs");
        same_term(0);
        require(d.ty == (d.rule == Rule::Inl ? Ty::sum(kid(0).ty, t.annot()) : Ty::sum(t.annot(), kid(0).ty)), d,
                "injection type differs");
        return;
    case Rule::Case: {
        std::size_t k = split();
        require(kid(0).ctx == ctx.prefix(k), d, "scrutinee context is not the prefix");
        same_term(0);
        const Ty& s = kid(0).ty;
        require(s.is(TyKind::Sum), d, "scrutinee is not a sum");
        bound_premise(kid(1), ctx, k, s.lhs(), t.name(), t.child(1));
        bound_premise(kid(2), ctx, k, s.rhs(), t.name2(), t.child(2));
        require(kid(1).ty == d.ty && kid(2).ty == d.ty, d, "branch types differ");
        return;
    }
    case Rule::Abort: {
        std::size_t k = split();
        require(kid(0).ctx == ctx.prefix(k), d, "premise context is not the prefix");
        same_term(0);
        require(kid(0).ty == Ty::empty(), d, "premise is not 0");
        require(d.ty == t.annot(), d, "type differs from the annotation");
        return;
    }
    case Rule::Shut:
        require(kid(0).ctx == ctx.with_lock(), d, "premise context is not the locked context");
        same_term(0);
        require(d.ty == Ty::box(kid(0).ty), d, "type is not the box");
        return;
    case Rule::Open:
    case Rule::Dia: {
        std::size_t k = split();
        modal_split(k);
        require(kid(0).ctx == ctx.prefix(k), d, "premise context is not the prefix");
        same_term(0);
        if (d.rule == Rule::Open) require(kid(0).ty == Ty::box(d.ty), d, "premise is not the box");
        else require(d.ty == Ty::dia(kid(0).ty), d, "type is not the diamond");
        return;
    }
    case Rule::LetDia:
        require(kid(0).ctx == ctx, d, "first premise context differs");
        same_term(0);
        require(kid(0).ty == Ty::dia(t.annot()), d, "first premise is not the diamond of the annotation");
        require(kid(1).ctx == Ctx{}.with_var(t.name(), t.annot()).with_lock(), d,
                "second premise context is not x:A, #");
        same_term(1);
        require(d.ty == kid(1).ty, d, "type differs from the body");
        return;
    }
}

void validate_rec(Mode mode, const Derivation& d) {
    validate_node(mode, d);
    for (const auto& c : d.children) validate_rec(mode, c);
}

}  // namespace

std::string validation_error(Mode mode, const Derivation& d) {
    try {
        validate_rec(mode, d);
        return {};
    } catch (const Invalid& e) {
        return e.why;
    } catch (const std::exception& e) {
        return e.what();
    }
}

bool is_valid(Mode mode, const Derivation& d) { return validation_error(mode, d).empty(); }

namespace {
void print_rec(const Derivation& d, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += rule_name(d.rule);
    if (d.split) out += " @" + std::to_string(*d.split);
    out += "  " + print(d.ctx) + " |- " + print(d.term) + " : " + print(d.ty) + "\n";
    for (const auto& c : d.children) print_rec(c, depth + 1, out);
}
}  // namespace

std::string print_derivation(const Derivation& d) {
    std::string s;
    print_rec(d, 0, s);
    return s;
}

}  // namespace fitch
