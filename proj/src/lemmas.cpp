#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/surface.hpp"

namespace fitch {

namespace {

// How the context of one node is rewritten: the new context, where each old
// entry went (-1 if dropped), and for substitution where each old entry came
// from in u's context (-1 none, -2 the substituted variable).
struct Edit {
    Ctx out;
    std::vector<long> pos;
    std::vector<long> orig;
};

/// The new prefix length that corresponds to the old prefix length k: just
/// past the image of the last surviving entry before k.
std::size_t boundary(const Edit& e, std::size_t k) {
    std::size_t b = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (e.pos[i] >= 0) b = static_cast<std::size_t>(e.pos[i]) + 1;
    return b;
}

Edit restrict(const Edit& e, std::size_t k, std::size_t b) {
    Edit r{e.out.prefix(b), {e.pos.begin(), e.pos.begin() + static_cast<long>(k)},
           {e.orig.begin(), e.orig.begin() + static_cast<long>(k)}};
    for (long p : r.pos)
        if (p >= static_cast<long>(b)) throw std::logic_error("context edit is not monotone");
    return r;
}

/// Old entry k becomes a variable, placed at new index b.
Edit insert_kept(const Edit& e, std::size_t k, std::size_t b, const std::string& x, const Ty& a) {
    Edit r;
    r.out = e.out.prefix(b).with_var(x, a).concat(e.out.suffix(b));
    for (std::size_t i = 0; i < e.pos.size(); ++i) {
        if (i == k) {
            r.pos.push_back(static_cast<long>(b));
            r.orig.push_back(-1);
        }
        long p = e.pos[i];
        r.pos.push_back(p >= static_cast<long>(b) ? p + 1 : p);
        r.orig.push_back(e.orig[i]);
    }
    if (k == e.pos.size()) {
        r.pos.push_back(static_cast<long>(b));
        r.orig.push_back(-1);
    }
    return r;
}

Edit append_lock(const Edit& e) {
    Edit r = e;
    r.pos.push_back(static_cast<long>(e.out.size()));
    r.orig.push_back(-1);
    r.out = e.out.with_lock();
    return r;
}

std::string fresh_binder(const Ctx& out, const std::string& y, const Term& body) {
    if (!out.has_var(y)) return y;
    std::set<std::string> avoid = out.names();
    for (const auto& n : all_names(body)) avoid.insert(n);
    return fresh_name(y, avoid);
}

class Transport {
public:
    explicit Transport(Mode mode, const Derivation* u = nullptr) : mode_(mode), u_(u) {}

    Derivation go(const Derivation& d, const Edit& e) {
        Derivation r;
        r.rule = d.rule;
        r.ctx = e.out;
        r.ty = d.ty;
        const Term& t = d.term;
        auto kids_same = [&] {
            std::vector<Term> ts;
            for (const auto& c : d.children) {
                r.children.push_back(go(c, e));
                ts.push_back(r.children.back().term);
            }
            r.term = t.with_children(std::move(ts));
        };
        switch (d.rule) {
        case Rule::Var: {
            std::size_t i = *d.split;
            long p = e.pos[i];
            if (p < 0) {
                if (u_ && e.orig[i] == -2) return substituted(e);
                throw Error(ErrorKind::VariableIsFree, "'" + t.name() + "' is used but its binding was dropped");
            }
            r.split = static_cast<std::size_t>(p);
            r.term = Term::var(e.out[r.split.value()].name);
            return r;
        }
        case Rule::Lam: {
            const Derivation& c = d.children[0];
            std::string y = fresh_binder(e.out, c.ctx[d.ctx.size()].name, c.term);
            r.children.push_back(go(c, insert_kept(e, d.ctx.size(), e.out.size(), y, t.annot())));
            r.term = Term::lam(y, t.annot(), r.children[0].term);
            return r;
        }
        case Rule::Shut:
            r.children.push_back(go(d.children[0], append_lock(e)));
            r.term = Term::shut(r.children[0].term);
            return r;
        case Rule::Open:
        case Rule::Dia: {
            // outside IS4 the split names a lock, which has to survive
            std::size_t k = *d.split;
            std::size_t b = boundary(e, k);
            if (mode_.calculus != Calculus::IS4) {
                if (e.pos[k] < 0) throw std::logic_error("the lock used by open/dia was dropped");
                b = static_cast<std::size_t>(e.pos[k]);
            }
            r.split = b;
            r.children.push_back(go(d.children[0], restrict(e, k, b)));
            r.term = d.rule == Rule::Open ? Term::open(r.children[0].term) : Term::dia(r.children[0].term);
            return r;
        }
        case Rule::Case: {
            std::size_t k = *d.split;
            std::size_t b = boundary(e, k);
            r.split = b;
            r.children.push_back(go(d.children[0], restrict(e, k, b)));
            const Ty& s = d.children[0].ty;
            std::string names[2];
            for (int j = 0; j < 2; ++j) {
                const Derivation& c = d.children[static_cast<std::size_t>(j + 1)];
                names[j] = fresh_binder(e.out, c.ctx[k].name, c.term);
                r.children.push_back(go(c, insert_kept(e, k, b, names[j], j == 0 ? s.lhs() : s.rhs())));
            }
            r.term = Term::case_of(r.children[0].term, names[0], r.children[1].term, names[1], r.children[2].term);
            return r;
        }
        case Rule::Abort: {
            std::size_t k = *d.split;
            std::size_t b = boundary(e, k);
            r.split = b;
            r.children.push_back(go(d.children[0], restrict(e, k, b)));
            r.term = Term::abort(t.annot(), r.children[0].term);
            return r;
        }
        case Rule::LetDia:
            // the body lives in its own closed context
            r.children.push_back(go(d.children[0], e));
            r.children.push_back(d.children[1]);
            r.term = Term::let_dia(t.name(), t.annot(), r.children[0].term, r.children[1].term);
            return r;
        default: kids_same(); return r;
        }
    }

private:
    /// u weakened from its own context into the current one.
    Derivation substituted(const Edit& e) {
        Edit emb;
        emb.out = e.out;
        emb.pos.assign(u_->ctx.size(), -1);
        emb.orig.assign(u_->ctx.size(), -1);
        for (std::size_t i = 0; i < e.orig.size(); ++i)
            if (e.orig[i] >= 0) emb.pos[static_cast<std::size_t>(e.orig[i])] = e.pos[i];
        for (long p : emb.pos)
            if (p < 0) throw std::logic_error("substituted term lost part of its context");
        return Transport(mode_).go(*u_, emb);
    }

    Mode mode_;
    const Derivation* u_;
};

void fresh_names(const Ctx& have, const Ctx& extra) {
    for (const auto& x : extra.names())
        if (have.has_var(x)) throw Error(ErrorKind::NameClash, "'" + x + "' is already bound in the context");
}

/// Context `out` obtained by inserting entries, with old entries at `pos`.
Derivation run(Mode mode, const Derivation& d, Ctx out, std::vector<long> pos) {
    Edit e{std::move(out), std::move(pos), std::vector<long>(d.ctx.size(), -1)};
    return Transport(mode).go(d, e);
}

}  // namespace

Derivation weaken_var(Mode mode, const Derivation& d, std::size_t at, const std::string& x, const Ty& ty) {
    if (at > d.ctx.size()) throw Error(ErrorKind::ContextMismatch, "weakening position out of range");
    if (d.ctx.has_var(x)) throw Error(ErrorKind::NameClash, "'" + x + "' is already bound in the context");
    Ctx out = d.ctx.prefix(at).with_var(x, ty).concat(d.ctx.suffix(at));
    std::vector<long> pos;
    for (std::size_t i = 0; i < d.ctx.size(); ++i) pos.push_back(static_cast<long>(i < at ? i : i + 1));
    return run(mode, d, out, pos);
}

Derivation left_weaken(Mode mode, const Derivation& d, const Ctx& prefix) {
    fresh_names(d.ctx, prefix);
    std::vector<long> pos;
    for (std::size_t i = 0; i < d.ctx.size(); ++i) pos.push_back(static_cast<long>(prefix.size() + i));
    return run(mode, d, prefix.concat(d.ctx), pos);
}

Derivation lock_weaken(Mode mode, const Derivation& d, std::size_t at) {
    if (mode.calculus != Calculus::IR)
        throw Error(ErrorKind::ModeUnsupported, "lock weakening needs IR, not " + mode_name(mode));
    if (at > d.ctx.size()) throw Error(ErrorKind::ContextMismatch, "weakening position out of range");
    Ctx out = d.ctx.prefix(at).with_lock().concat(d.ctx.suffix(at));
    std::vector<long> pos;
    for (std::size_t i = 0; i < d.ctx.size(); ++i) pos.push_back(static_cast<long>(i < at ? i : i + 1));
    return run(mode, d, out, pos);
}

Derivation lock_replace(Mode mode, const Derivation& d, std::size_t lock_at, const Ctx& replacement) {
    if (mode.calculus != Calculus::IS4)
        throw Error(ErrorKind::ModeUnsupported, "lock replacement needs IS4, not " + mode_name(mode));
    if (lock_at >= d.ctx.size() || !d.ctx[lock_at].lock)
        throw Error(ErrorKind::NotALock, "context entry " + std::to_string(lock_at) + " is not a lock");
    fresh_names(d.ctx, replacement);
    Ctx out = d.ctx.prefix(lock_at).concat(replacement).concat(d.ctx.suffix(lock_at + 1));
    std::vector<long> pos;
    for (std::size_t i = 0; i < d.ctx.size(); ++i) {
        if (i < lock_at) pos.push_back(static_cast<long>(i));
        else if (i == lock_at) pos.push_back(-1);
        else pos.push_back(static_cast<long>(i - 1 + replacement.size()));
    }
    return run(mode, d, out, pos);
}

Derivation strengthen(Mode mode, const Derivation& d, std::size_t from, std::size_t count) {
    if (from + count > d.ctx.size()) throw Error(ErrorKind::ContextMismatch, "strengthening range out of range");
    auto fv = free_vars(d.term);
    for (std::size_t i = from; i < from + count; ++i) {
        const Entry& en = d.ctx[i];
        if (en.lock && mode.calculus != Calculus::IS4)
            throw Error(ErrorKind::ModeUnsupported, "dropping a lock needs IS4, not " + mode_name(mode));
        if (!en.lock && fv.count(en.name))
            throw Error(ErrorKind::VariableIsFree, "'" + en.name + "' is free in '" + print(d.term) + "'");
    }
    Ctx out = d.ctx.prefix(from).concat(d.ctx.suffix(from + count));
    std::vector<long> pos;
    for (std::size_t i = 0; i < d.ctx.size(); ++i) {
        if (i < from) pos.push_back(static_cast<long>(i));
        else if (i < from + count) pos.push_back(-1);
        else pos.push_back(static_cast<long>(i - count));
    }
    return run(mode, d, out, pos);
}

Derivation substitute_deriv(Mode mode, const Derivation& d, std::size_t at, const Derivation& u) {
    if (at >= d.ctx.size() || d.ctx[at].lock)
        throw Error(ErrorKind::ContextMismatch, "no variable at position " + std::to_string(at));
    if (*d.ctx[at].ty != u.ty)
        throw Error(ErrorKind::ContextMismatch, "substituting a term of type " + print(u.ty) + " for '" +
                                                    d.ctx[at].name + " : " + print(*d.ctx[at].ty) + "'");
    if (u.ctx != d.ctx.prefix(at))
        throw Error(ErrorKind::ContextMismatch, "substituted term lives in [" + print(u.ctx) + "], not [" +
                                                    print(d.ctx.prefix(at)) + "]");
    Edit e;
    e.out = d.ctx.prefix(at).concat(d.ctx.suffix(at + 1));
    for (std::size_t i = 0; i < d.ctx.size(); ++i) {
        if (i < at) {
            e.pos.push_back(static_cast<long>(i));
            e.orig.push_back(static_cast<long>(i));
        } else if (i == at) {
            e.pos.push_back(-1);
            e.orig.push_back(-2);
        } else {
            e.pos.push_back(static_cast<long>(i - 1));
            e.orig.push_back(-1);
        }
    }
    return Transport(mode, &u).go(d, e);
}

}  // namespace fitch
