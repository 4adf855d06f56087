#include "fitch/syntax.hpp"

#include <map>
#include <stdexcept>

namespace fitch {

// Types ---------------------------------------------------------------------

Ty Ty::make(TyKind k, std::string name, const Ty* a, const Ty* b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    if (a) n->lhs = std::make_shared<const Ty>(*a);
    if (b) n->rhs = std::make_shared<const Ty>(*b);
    return Ty(std::move(n));
}

Ty Ty::base(std::string name) {
    if (name.empty()) throw std::invalid_argument("base type name must be nonempty");
    return make(TyKind::Base, std::move(name), nullptr, nullptr);
}
Ty Ty::unit() { return make(TyKind::Unit, {}, nullptr, nullptr); }
Ty Ty::empty() { return make(TyKind::Empty, {}, nullptr, nullptr); }
Ty Ty::prod(Ty a, Ty b) { return make(TyKind::Prod, {}, &a, &b); }
Ty Ty::sum(Ty a, Ty b) { return make(TyKind::Sum, {}, &a, &b); }
Ty Ty::fun(Ty a, Ty b) { return make(TyKind::Fun, {}, &a, &b); }
Ty Ty::box(Ty a) { return make(TyKind::Box, {}, &a, nullptr); }
Ty Ty::dia(Ty a) { return make(TyKind::Dia, {}, &a, nullptr); }

std::size_t Ty::size() const {
    switch (kind()) {
    case TyKind::Base:
    case TyKind::Unit:
    case TyKind::Empty: return 1;
    case TyKind::Box:
    case TyKind::Dia: return 1 + operand().size();
    default: return 1 + lhs().size() + rhs().size();
    }
}

bool operator==(const Ty& a, const Ty& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case TyKind::Base: return a.name() == b.name();
    case TyKind::Unit:
    case TyKind::Empty: return true;
    case TyKind::Box:
    case TyKind::Dia: return a.operand() == b.operand();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

bool operator<(const Ty& a, const Ty& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    switch (a.kind()) {
    case TyKind::Base: return a.name() < b.name();
    case TyKind::Unit:
    case TyKind::Empty: return false;
    case TyKind::Box:
    case TyKind::Dia: return a.operand() < b.operand();
    default:
        if (a.lhs() != b.lhs()) return a.lhs() < b.lhs();
        return a.rhs() < b.rhs();
    }
}

bool Ty::is_subtype_of(const Ty& other) const {
    if (*this == other) return true;
    switch (other.kind()) {
    case TyKind::Base:
    case TyKind::Unit:
    case TyKind::Empty: return false;
    case TyKind::Box:
    case TyKind::Dia: return is_subtype_of(other.operand());
    default: return is_subtype_of(other.lhs()) || is_subtype_of(other.rhs());
    }
}

// Terms ---------------------------------------------------------------------

Term Term::make(Node n) { return Term(std::make_shared<const Node>(std::move(n))); }

Term Term::var(std::string x) { return make({TermKind::Var, std::move(x), {}, std::nullopt, {}, std::nullopt}); }
Term Term::lam(std::string x, Ty a, Term body) {
    return make({TermKind::Lam, std::move(x), {}, std::move(a), {std::move(body)}, std::nullopt});
}
Term Term::app(Term f, Term a) {
    return make({TermKind::App, {}, {}, std::nullopt, {std::move(f), std::move(a)}, std::nullopt});
}
Term Term::unit() { return make({TermKind::Unit, {}, {}, std::nullopt, {}, std::nullopt}); }
Term Term::pair(Term a, Term b) {
    return make({TermKind::Pair, {}, {}, std::nullopt, {std::move(a), std::move(b)}, std::nullopt});
}
Term Term::fst(Term t) { return make({TermKind::Fst, {}, {}, std::nullopt, {std::move(t)}, std::nullopt}); }
Term Term::snd(Term t) { return make({TermKind::Snd, {}, {}, std::nullopt, {std::move(t)}, std::nullopt}); }
Term Term::inl(Ty other, Term t) {
    return make({TermKind::Inl, {}, {}, std::move(other), {std::move(t)}, std::nullopt});
}
Term Term::inr(Ty other, Term t) {
    return make({TermKind::Inr, {}, {}, std::move(other), {std::move(t)}, std::nullopt});
}
Term Term::case_of(Term s, std::string x, Term l, std::string y, Term r) {
    return make({TermKind::Case, std::move(x), std::move(y), std::nullopt,
                 {std::move(s), std::move(l), std::move(r)}, std::nullopt});
}
Term Term::abort(Ty result, Term t) {
    return make({TermKind::Abort, {}, {}, std::move(result), {std::move(t)}, std::nullopt});
}
Term Term::shut(Term t) { return make({TermKind::Shut, {}, {}, std::nullopt, {std::move(t)}, std::nullopt}); }
Term Term::open(Term t) { return make({TermKind::Open, {}, {}, std::nullopt, {std::move(t)}, std::nullopt}); }
Term Term::dia(Term t) { return make({TermKind::Dia, {}, {}, std::nullopt, {std::move(t)}, std::nullopt}); }
Term Term::let_dia(std::string x, Ty a, Term t, Term body) {
    return make({TermKind::LetDia, std::move(x), {}, std::move(a), {std::move(t), std::move(body)},
                 std::nullopt});
}

Term Term::with_span(Span s) const {
    Node n = *node_;
    n.span = s;
    return make(std::move(n));
}

Term Term::with_children(std::vector<Term> kids) const {
    if (kids.size() != node_->kids.size()) throw std::logic_error("with_children: arity mismatch");
    Node n = *node_;
    n.kids = std::move(kids);
    return make(std::move(n));
}

std::size_t Term::size() const {
    std::size_t s = 1;
    for (const auto& k : children()) s += k.size();
    return s;
}

bool binds_over_child(const Term& t, std::size_t i, std::string* bound) {
    auto set = [&](const std::string& n) {
        if (bound) *bound = n;
        return true;
    };
    switch (t.kind()) {
    case TermKind::Lam: return set(t.name());
    case TermKind::Case:
        if (i == 1) return set(t.name());
        if (i == 2) return set(t.name2());
        return false;
    case TermKind::LetDia:
        if (i == 1) return set(t.name());
        return false;
    default: return false;
    }
}

// Contexts ------------------------------------------------------------------

bool operator==(const Entry& a, const Entry& b) {
    if (a.lock != b.lock) return false;
    if (a.lock) return true;
    return a.name == b.name && a.ty == b.ty;
}

Ctx::Ctx(std::vector<Entry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& e : entries_) {
        if (e.lock) continue;
        if (!seen.insert(e.name).second)
            throw std::invalid_argument("duplicate variable in context: " + e.name);
    }
}

Ctx Ctx::with_var(std::string x, Ty a) const {
    auto v = entries_;
    v.push_back(Entry::var(std::move(x), std::move(a)));
    return Ctx(std::move(v));
}

Ctx Ctx::with_lock() const {
    Ctx c = *this;
    c.entries_.push_back(Entry::lock_entry());
    return c;
}

Ctx Ctx::prefix(std::size_t n) const {
    Ctx c;
    c.entries_.assign(entries_.begin(), entries_.begin() + std::min(n, entries_.size()));
    return c;
}

Ctx Ctx::suffix(std::size_t from) const {
    Ctx c;
    if (from < entries_.size()) c.entries_.assign(entries_.begin() + from, entries_.end());
    return c;
}

Ctx Ctx::concat(const Ctx& tail) const {
    auto v = entries_;
    v.insert(v.end(), tail.entries_.begin(), tail.entries_.end());
    return Ctx(std::move(v));
}

bool Ctx::has_var(std::string_view x) const { return index_of(x).has_value(); }

std::optional<std::size_t> Ctx::index_of(std::string_view x) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!entries_[i].lock && entries_[i].name == x) return i;
    return std::nullopt;
}

bool Ctx::has_lock() const { return rightmost_lock().has_value(); }

std::optional<std::size_t> Ctx::rightmost_lock() const {
    for (std::size_t i = entries_.size(); i-- > 0;)
        if (entries_[i].lock) return i;
    return std::nullopt;
}

bool Ctx::has_vars() const {
    for (const auto& e : entries_)
        if (!e.lock) return true;
    return false;
}

std::set<std::string> Ctx::names() const {
    std::set<std::string> s;
    for (const auto& e : entries_)
        if (!e.lock) s.insert(e.name);
    return s;
}

// Modes ---------------------------------------------------------------------

std::optional<Mode> parse_mode(std::string_view s) {
    static const std::map<std::string, Mode, std::less<>> table = {
        {"ik", Mode::ik()},       {"ikd", Mode::ik_dia()},   {"ik-dia", Mode::ik_dia()},
        {"is4", Mode::is4()},     {"is4d", Mode::is4_dia()}, {"is4-dia", Mode::is4_dia()},
        {"ir", Mode::ir()},       {"ird", Mode::ir_dia()},   {"ir-dia", Mode::ir_dia()},
    };
    auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::string mode_name(Mode m) {
    std::string base;
    switch (m.calculus) {
    case Calculus::IK: base = "ik"; break;
    case Calculus::IS4: base = "is4"; break;
    case Calculus::IR: base = "ir"; break;
    }
    return m.dia_enabled ? base + "d" : base;
}

// Operations ----------------------------------------------------------------

namespace {

void collect_free(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
    if (t.is(TermKind::Var)) {
        if (!bound.count(t.name())) out.insert(t.name());
        return;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) {
        std::string b;
        if (binds_over_child(t, i, &b) && !bound.count(b)) {
            bound.insert(b);
            collect_free(t.child(i), bound, out);
            bound.erase(b);
        } else {
            collect_free(t.child(i), bound, out);
        }
    }
}

void collect_all(const Term& t, std::set<std::string>& out) {
    if (t.is(TermKind::Var)) out.insert(t.name());
    if (t.is(TermKind::Lam) || t.is(TermKind::LetDia)) out.insert(t.name());
    if (t.is(TermKind::Case)) {
        out.insert(t.name());
        out.insert(t.name2());
    }
    for (const auto& k : t.children()) collect_all(k, out);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> bound, out;
    collect_free(t, bound, out);
    return out;
}

bool occurs_free(const Term& t, std::string_view x) {
    if (t.is(TermKind::Var)) return t.name() == x;
    for (std::size_t i = 0; i < t.arity(); ++i) {
        std::string b;
        if (binds_over_child(t, i, &b) && b == x) continue;
        if (occurs_free(t.child(i), x)) return true;
    }
    return false;
}

std::set<std::string> all_names(const Term& t) {
    std::set<std::string> s;
    collect_all(t, s);
    return s;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    if (!avoid.count(base)) return base;
    // Strip a previous numeric suffix so repeated freshening stays short.
    std::string stem = base;
    auto us = stem.rfind('_');
    if (us != std::string::npos && us + 1 < stem.size() &&
        stem.find_first_not_of("0123456789", us + 1) == std::string::npos)
        stem = stem.substr(0, us);
    for (std::size_t n = 1;; ++n) {
        std::string cand = stem + "_" + std::to_string(n);
        if (!avoid.count(cand)) return cand;
    }
}

namespace {

Term subst_rec(const Term& t, const std::string& x, const Term& u, const std::set<std::string>& fv_u) {
    if (t.is(TermKind::Var)) return t.name() == x ? u : t;
    if (!occurs_free(t, x)) return t;

    if (t.is(TermKind::Lam) || t.is(TermKind::LetDia) || t.is(TermKind::Case)) {
        // Rebuild with possibly renamed binders.
        auto rebind = [&](const std::string& b, const Term& body) -> std::pair<std::string, Term> {
            if (b == x) return {b, body};
            if (!fv_u.count(b)) return {b, subst_rec(body, x, u, fv_u)};
            auto avoid = fv_u;
            for (const auto& n : free_vars(body)) avoid.insert(n);
            avoid.insert(x);
            std::string nb = fresh_name(b, avoid);
            Term renamed = subst_rec(body, b, Term::var(nb), {nb});
            return {nb, subst_rec(renamed, x, u, fv_u)};
        };
        Term out = t;
        switch (t.kind()) {
        case TermKind::Lam: {
            auto [b, body] = rebind(t.name(), t.child(0));
            out = Term::lam(b, t.annot(), body);
            break;
        }
        case TermKind::LetDia: {
            Term scrut = subst_rec(t.child(0), x, u, fv_u);
            auto [b, body] = rebind(t.name(), t.child(1));
            out = Term::let_dia(b, t.annot(), scrut, body);
            break;
        }
        default: {
            Term scrut = subst_rec(t.child(0), x, u, fv_u);
            auto [b1, l] = rebind(t.name(), t.child(1));
            auto [b2, r] = rebind(t.name2(), t.child(2));
            out = Term::case_of(scrut, b1, l, b2, r);
            break;
        }
        }
        if (auto s = t.span()) out = out.with_span(*s);
        return out;
    }

    std::vector<Term> kids;
    kids.reserve(t.arity());
    for (const auto& k : t.children()) kids.push_back(subst_rec(k, x, u, fv_u));
    return t.with_children(std::move(kids));
}

bool alpha_rec(const Term& a, const Term& b, std::map<std::string, std::string>& l2r,
               std::map<std::string, std::string>& r2l) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case TermKind::Var: {
        auto il = l2r.find(a.name());
        auto ir = r2l.find(b.name());
        if (il == l2r.end() && ir == r2l.end()) return a.name() == b.name();
        if (il == l2r.end() || ir == r2l.end()) return false;
        return il->second == b.name() && ir->second == a.name();
    }
    case TermKind::Lam:
    case TermKind::LetDia:
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Abort:
        if (a.annot() != b.annot()) return false;
        break;
    default: break;
    }
    for (std::size_t i = 0; i < a.arity(); ++i) {
        std::string ba, bb;
        if (binds_over_child(a, i, &ba)) {
            binds_over_child(b, i, &bb);
            auto old_l = l2r.find(ba) == l2r.end() ? std::optional<std::string>{} : l2r[ba];
            auto old_r = r2l.find(bb) == r2l.end() ? std::optional<std::string>{} : r2l[bb];
            l2r[ba] = bb;
            r2l[bb] = ba;
            bool ok = alpha_rec(a.child(i), b.child(i), l2r, r2l);
            if (old_l) l2r[ba] = *old_l; else l2r.erase(ba);
            if (old_r) r2l[bb] = *old_r; else r2l.erase(bb);
            if (!ok) return false;
        } else if (!alpha_rec(a.child(i), b.child(i), l2r, r2l)) {
            return false;
        }
    }
    return true;
}

}  // namespace

Term subst(const Term& t, const std::string& x, const Term& u) {
    return subst_rec(t, x, u, free_vars(u));
}

bool alpha_eq(const Term& a, const Term& b) {
    if (a.same_node(b)) return true;
    std::map<std::string, std::string> l2r, r2l;
    return alpha_rec(a, b, l2r, r2l);
}

Ty formula_translation(const Ctx& ctx, const Ty& ty) {
    // ⟦B,Γ ⊢ A⟧ = B → ⟦Γ ⊢ A⟧ and ⟦lock,Γ ⊢ A⟧ = □⟦Γ ⊢ A⟧: fold from the right.
    Ty out = ty;
    for (std::size_t i = ctx.size(); i-- > 0;) {
        const auto& e = ctx[i];
        out = e.lock ? Ty::box(out) : Ty::fun(*e.ty, out);
    }
    return out;
}

}  // namespace fitch
