#include <algorithm>
#include <map>

#include "fitch/error.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/surface.hpp"

namespace fitch {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::Distinct: return "Distinct";
    case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

struct Site {
    Path path;
    const Derivation* d;
    std::set<std::string> bound;  // binders strictly above this node
};

void collect(const Derivation& d, Path& p, std::set<std::string>& bound, std::vector<Site>& out) {
    out.push_back({p, &d, bound});
    for (std::size_t i = 0; i < d.children.size(); ++i) {
        std::string b;
        bool binds = binds_over_child(d.term, i, &b);
        bool added = binds && bound.insert(b).second;
        p.push_back(i);
        collect(d.children[i], p, bound, out);
        p.pop_back();
        if (added) bound.erase(b);
    }
}

bool is_prefix(const Path& a, const Path& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

Term abstract_all(const Term& t, const std::string& key, const Term& y) {
    if (alpha_key(t) == key) return y;
    std::vector<Term> kids;
    for (const auto& c : t.children()) kids.push_back(abstract_all(c, key, y));
    return t.with_children(std::move(kids));
}

bool disjoint(const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const auto& x : a)
        if (b.count(x)) return false;
    return true;
}

std::set<std::string> between(const Site& lo, const Site& hi) {
    std::set<std::string> r;
    for (const auto& b : lo.bound)
        if (!hi.bound.count(b)) r.insert(b);
    return r;
}

bool typed_in_hole(Mode mode, const std::string& y, const Ty& tau, const Term& body) {
    try {
        infer(mode, Ctx{}.with_var(y, tau), body);
        return true;
    } catch (const Error&) {
        return false;
    }
}

/// Context-with-one-hole decomposition: `outer` is `T[inner/y]` for all
/// alpha-equal occurrences, with T mentioning nothing but y.
std::optional<Term> hole_context(const Term& outer, const Term& inner, const std::string& y) {
    Term tt = abstract_all(outer, alpha_key(inner), Term::var(y));
    auto fv = free_vars(tt);
    if (!fv.count(y) || fv.size() != 1) return std::nullopt;
    return tt;
}

struct Raw {
    std::string rule;
    Term term;
};

std::vector<Raw> raw_moves(Mode mode, const Ctx& ctx, const Term& t0, const Ty& ty, bool expansions) {
    std::vector<Raw> out;
    Term t = freshen_binders(t0, ctx.names());
    Derivation root;
    try {
        root = check(mode, ctx, t, ty);
    } catch (const Error&) {
        return out;
    }
    std::vector<Site> sites;
    Path p;
    std::set<std::string> bound;
    collect(root, p, bound, sites);

    std::set<std::string> avoid = ctx.names();
    for (const auto& n : all_names(t)) avoid.insert(n);
    const std::string y = fresh_name("h", avoid);
    avoid.insert(y);
    const std::string xn = fresh_name("d", avoid);

    auto emit = [&](const char* rule, const Path& at, const Term& repl) {
        out.push_back({rule, replace_at(t, at, repl)});
    };

    for (const Site& s : sites) {
        const Term& st = s.d->term;
        // eta for box
        if (st.is(TermKind::Shut) && st.child(0).is(TermKind::Open)) {
            const Term& inner = st.child(0).child(0);
            try {
                if (infer(mode, s.d->ctx, inner).ty == s.d->ty) emit("EtaBox", s.path, inner);
            } catch (const Error&) {
            }
        }
        // eta for diamond
        if (st.is(TermKind::LetDia) && st.child(1).is(TermKind::Dia) && st.child(1).child(0).is(TermKind::Var) &&
            st.child(1).child(0).name() == st.name())
            emit("EtaDia", s.path, st.child(0));

        // associativity, letd pulled out of a closed context T
        if (st.is(TermKind::LetDia)) {
            const Term& u = st.child(1);
            for (const Site& top : sites) {
                if (top.path.size() >= s.path.size() || !is_prefix(top.path, s.path)) continue;
                if (!disjoint(free_vars(st), between(s, top))) continue;
                auto tt = hole_context(top.d->term, st, y);
                if (!tt || !typed_in_hole(mode, y, s.d->ty, *tt)) continue;
                emit("AssocOut", top.path, Term::let_dia(st.name(), st.annot(), st.child(0), subst(*tt, y, u)));
            }
            // associativity, letd pushed into T
            Path body = s.path;
            body.push_back(1);
            const Site* bsite = nullptr;
            for (const Site& b : sites)
                if (b.path == body) bsite = &b;
            for (const Site& r : sites) {
                if (r.path.size() <= body.size() || !is_prefix(body, r.path)) continue;
                const Term& piece = r.d->term;
                if (!disjoint(free_vars(piece), between(r, *bsite))) continue;
                auto tt = hole_context(u, piece, y);
                if (!tt || !typed_in_hole(mode, y, r.d->ty, *tt)) continue;
                emit("AssocIn", s.path, subst(*tt, y, Term::let_dia(st.name(), st.annot(), st.child(0), piece)));
            }
        }

        if (!expansions) continue;
        // extrusion of a diamond-typed subterm: eta-expand it, then pull the
        // letd out as far as some enclosing T allows
        if (s.d->ty.is(TyKind::Dia) && mode.dia_enabled && !st.is(TermKind::Dia)) {
            const Ty& a = s.d->ty.operand();
            for (const Site& top : sites) {
                if (!is_prefix(top.path, s.path)) continue;
                if (!disjoint(free_vars(st), between(s, top))) continue;
                std::optional<Term> tt =
                    top.path == s.path ? std::optional<Term>(Term::var(y)) : hole_context(top.d->term, st, y);
                if (!tt || !typed_in_hole(mode, y, s.d->ty, *tt)) continue;
                emit("Extrude", top.path, Term::let_dia(xn, a, st, subst(*tt, y, Term::dia(Term::var(xn)))));
            }
        }
        // eta expansion of box-typed variables
        if (st.is(TermKind::Var) && s.d->ty.is(TyKind::Box))
            emit("EtaBoxExpand", s.path, Term::shut(Term::open(st)));
    }
    std::vector<Raw> ok;
    for (auto& r : out) {
        try {
            check(mode, ctx, r.term, ty);
            ok.push_back(std::move(r));
        } catch (const Error&) {
        }
    }
    return ok;
}

Term tidy(const Term& t, const Ctx& ctx) { return freshen_binders(normalize(t).term, ctx.names()); }

}  // namespace

std::vector<EqMove> equational_moves(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty) {
    std::vector<EqMove> out;
    std::set<std::string> seen;
    for (auto& r : raw_moves(mode, ctx, t, ty, true)) {
        Term n = Term::unit();
        try {
            n = tidy(r.term, ctx);
        } catch (const Error&) {
            continue;
        }
        if (seen.insert(alpha_key(n)).second) out.push_back({r.rule, n});
    }
    return out;
}

std::vector<EqMove> eta_assoc_instances(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty) {
    std::vector<EqMove> out;
    for (auto& r : raw_moves(mode, ctx, t, ty, false)) out.push_back({r.rule, r.term});
    return out;
}

EqResult def_eq(Mode mode, const Ctx& ctx, const Term& lhs, const Term& rhs, const Ty& ty, std::size_t search_bound,
                std::size_t state_cap) {
    for (const Term* side : {&lhs, &rhs}) {
        try {
            check(mode, ctx, *side, ty);
        } catch (const Error& e) {
            throw Error(ErrorKind::IllTyped, "'" + print(*side) + "' does not check against " + print(ty) + ": " +
                                                 e.what());
        }
    }
    EqResult res;
    res.lhs_normal = tidy(lhs, ctx);
    res.rhs_normal = tidy(rhs, ctx);

    struct Visit {
        std::string parent;
        std::string rule;
        Term term;
    };
    struct Side {
        std::map<std::string, Visit> seen;
        std::vector<std::string> frontier;
    };
    Side sides[2];
    const Term starts[2] = {res.lhs_normal, res.rhs_normal};
    for (int i = 0; i < 2; ++i) {
        std::string k = alpha_key(starts[i]);
        sides[i].seen.emplace(k, Visit{"", "", starts[i]});
        sides[i].frontier.push_back(k);
    }

    auto finish = [&](const std::string& meet) {
        std::vector<EqMove> left;
        for (std::string k = meet; !k.empty();) {
            const Visit& v = sides[0].seen.at(k);
            left.push_back({v.parent.empty() ? "start" : v.rule, v.term});
            k = v.parent;
        }
        std::reverse(left.begin(), left.end());
        for (std::string k = meet; !k.empty();) {
            const Visit& v = sides[1].seen.at(k);
            if (v.parent.empty()) break;
            const Visit& up = sides[1].seen.at(v.parent);
            left.push_back({v.rule + "^-1", up.term});
            k = v.parent;
        }
        res.trace = std::move(left);
        res.verdict = Verdict::Equal;
        res.states = sides[0].seen.size() + sides[1].seen.size();
        return res;
    };

    if (sides[1].seen.count(sides[0].frontier.front())) return finish(sides[0].frontier.front());

    bool capped = false;
    std::size_t depth[2] = {0, 0};
    while (!sides[0].frontier.empty() || !sides[1].frontier.empty()) {
        // grow the smaller frontier first
        int i = sides[0].frontier.empty()                                   ? 1
                : sides[1].frontier.empty()                                 ? 0
                : sides[0].frontier.size() <= sides[1].frontier.size() ? 0
                                                                            : 1;
        if (depth[i] >= search_bound) {
            if (depth[1 - i] >= search_bound || sides[1 - i].frontier.empty()) {
                capped = true;
                break;
            }
            i = 1 - i;
        }
        ++depth[i];
        std::vector<std::string> next;
        for (const auto& k : sides[i].frontier) {
            Term cur = sides[i].seen.at(k).term;
            for (auto& m : equational_moves(mode, ctx, cur, ty)) {
                std::string nk = alpha_key(m.term);
                if (sides[i].seen.count(nk)) continue;
                sides[i].seen.emplace(nk, Visit{k, m.rule, m.term});
                if (sides[1 - i].seen.count(nk)) return finish(nk);
                next.push_back(nk);
                if (sides[0].seen.size() + sides[1].seen.size() > state_cap) {
                    capped = true;
                    break;
                }
            }
            if (capped) break;
        }
        if (capped) break;
        sides[i].frontier = std::move(next);
    }
    res.states = sides[0].seen.size() + sides[1].seen.size();
    res.verdict = capped ? Verdict::Unknown : Verdict::Distinct;
    return res;
}

}  // namespace fitch
