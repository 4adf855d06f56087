#include <functional>
#include <map>
#include <random>

#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/surface.hpp"

namespace fitch {

namespace {

using Opt = std::optional<Term>;

class Gen {
public:
    explicit Gen(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL) {
        for (const auto& b : cfg.base_types) bases_.push_back(Ty::base(b));
        if (bases_.empty()) bases_.push_back(Ty::base("A"));
    }

    void reset_work(std::size_t cap) {
        work_ = 0;
        work_cap_ = cap;
    }

    Ty type(int depth) {
        std::vector<double> w{4, 1, 0.4};  // base, 1, 0
        if (depth > 0) {
            w.insert(w.end(), {1.2, 1, 1.4, 1.4});  // *, +, ->, []
            if (cfg_.mode.dia_enabled) w.push_back(1.2);
        }
        switch (weighted(w)) {
        case 0: return bases_[pick(bases_.size())];
        case 1: return Ty::unit();
        case 2: return Ty::empty();
        case 3: return Ty::prod(type(depth - 1), type(depth - 1));
        case 4: return Ty::sum(type(depth - 1), type(depth - 1));
        case 5: return Ty::fun(type(depth - 1), type(depth - 1));
        case 6: return Ty::box(type(depth - 1));
        default: return Ty::dia(type(depth - 1));
        }
    }

    Ctx context(bool vars, bool locks) {
        static const char* names[] = {"x", "y", "z", "w"};
        Ctx c;
        std::size_t n = vars ? pick(4) : 0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (locks && coin(0.3)) c = c.with_lock();
            if (i < n) c = c.with_var(names[i], type(2));
        }
        return c;
    }

    /// A term of type `ty` in `ctx` using at most about `budget` nodes.
    Opt term(const Ctx& ctx, const Ty& ty, int budget) {
        // out of budget or work: settle for a small inhabitant
        if (!inhabited(ctx, ty)) return std::nullopt;
        if (budget <= 0 || ++work_ > work_cap_) return small(ctx, ty);
        std::vector<std::pair<double, std::function<Opt()>>> opts;
        const Mode& m = cfg_.mode;
        const int rest = budget - 1;
        // leaves are cheap; prefer them only once the budget runs low
        const double leaf = budget > 4 ? 0.3 : 4;
        auto add = [&](double w, std::function<Opt()> f) {
            if (w > 0) opts.emplace_back(w, std::move(f));
        };

        for (std::size_t i : usable(ctx)) {
            const Ty& vt = *ctx[i].ty;
            Term v = Term::var(ctx[i].name);
            if (vt == ty) add(leaf, [v] { return v; });
            if (budget <= 0) continue;
            switch (vt.kind()) {
            case TyKind::Fun:
                if (vt.rhs() == ty)
                    add(2, [=, this] { return lift1(term(ctx, vt.lhs(), rest), [&](Term a) { return Term::app(v, a); }); });
                break;
            case TyKind::Prod:
                if (vt.lhs() == ty) add(2, [v] { return Term::fst(v); });
                if (vt.rhs() == ty) add(2, [v] { return Term::snd(v); });
                break;
            case TyKind::Sum: add(1.5, [=, this] { return case_on(ctx, v, vt, i + 1, ty, rest); }); break;
            case TyKind::Empty: add(0.5, [=] { return Term::abort(ty, v); }); break;
            default: break;
            }
        }

        // introduction forms
        switch (ty.kind()) {
        case TyKind::Unit: add(leaf, [] { return Term::unit(); }); break;
        case TyKind::Fun:
            add(3, [&, this] {
                std::string a = fresh();
                return lift1(term(ctx.with_var(a, ty.lhs()), ty.rhs(), rest),
                             [&](Term b) { return Term::lam(a, ty.lhs(), b); });
            });
            break;
        case TyKind::Prod:
            add(3, [&, this] {
                int l = split(rest);
                return lift2(term(ctx, ty.lhs(), l), [&] { return term(ctx, ty.rhs(), rest - l); },
                             [](Term a, Term b) { return Term::pair(a, b); });
            });
            break;
        case TyKind::Sum:
            add(1.5, [&, this] {
                return lift1(term(ctx, ty.lhs(), rest), [&](Term a) { return Term::inl(ty.rhs(), a); });
            });
            add(1.5, [&, this] {
                return lift1(term(ctx, ty.rhs(), rest), [&](Term a) { return Term::inr(ty.lhs(), a); });
            });
            break;
        case TyKind::Box:
            add(3, [&, this] {
                return lift1(term(ctx.with_lock(), ty.operand(), rest), [](Term a) { return Term::shut(a); });
            });
            break;
        case TyKind::Dia:
            add(3, [&, this]() -> Opt {
                auto ks = modal_splits(ctx);
                if (ks.empty()) return std::nullopt;
                std::size_t k = ks[pick(ks.size())];
                return lift1(term(ctx.prefix(k), ty.operand(), rest), [](Term a) { return Term::dia(a); });
            });
            break;
        default: break;
        }

        if (budget >= 2) {
            // eliminations through generated intermediates
            add(1, [&, this] {
                Ty x = type(1);
                int l = split(rest);
                return lift2(term(ctx, Ty::fun(x, ty), l), [&] { return term(ctx, x, rest - l); },
                             [](Term f, Term a) { return Term::app(f, a); });
            });
            add(0.6, [&, this] {
                Ty x = type(1);
                bool left = coin(0.5);
                Ty p = left ? Ty::prod(ty, x) : Ty::prod(x, ty);
                return lift1(term(ctx, p, rest), [&](Term a) { return left ? Term::fst(a) : Term::snd(a); });
            });
            add(1, [&, this]() -> Opt {
                auto ks = modal_splits(ctx);
                if (ks.empty()) return std::nullopt;
                std::size_t k = ks[pick(ks.size())];
                return lift1(term(ctx.prefix(k), Ty::box(ty), rest), [](Term a) { return Term::open(a); });
            });
            add(0.8, [&, this]() -> Opt {
                std::size_t k = pick(ctx.size() + 1);
                Ty s = Ty::sum(type(1), type(1));
                int l = split(rest);
                Opt sc = term(ctx.prefix(k), s, l);
                if (!sc) return std::nullopt;
                return case_on(ctx, *sc, s, k, ty, rest - l);
            });
            if (m.dia_enabled)
                add(1, [&, this] {
                    Ty x = type(1);
                    std::string a = fresh();
                    int l = split(rest);
                    return lift2(term(ctx, Ty::dia(x), l),
                                 [&] { return term(Ctx{}.with_var(a, x).with_lock(), ty, rest - l); },
                                 [&](Term s, Term u) { return Term::let_dia(a, x, s, u); });
                });
        }

        if (budget >= 3) {
            const double rb = cfg_.redex_bias * 10;
            add(rb, [&, this] {
                Ty x = type(1);
                std::string a = fresh();
                int l = split(rest);
                return lift2(term(ctx.with_var(a, x), ty, l), [&] { return term(ctx, x, rest - l); },
                             [&](Term b, Term arg) { return Term::app(Term::lam(a, x, b), arg); });
            });
            add(rb * 0.5, [&, this] {
                Ty x = type(1);
                int l = split(rest);
                return lift2(term(ctx, ty, l), [&] { return term(ctx, x, rest - l); },
                             [](Term a, Term b) { return beta_pair(a, b); });
            });
            add(rb * 0.6, [&, this]() -> Opt {
                auto ks = modal_splits(ctx);
                if (ks.empty()) return std::nullopt;
                std::size_t k = ks[pick(ks.size())];
                return lift1(term(ctx.prefix(k).with_lock(), ty, rest),
                             [](Term a) { return Term::open(Term::shut(a)); });
            });
            add(rb * 0.6, [&, this]() -> Opt {
                Ty x = type(1), y = type(1);
                bool left = coin(0.5);
                int l = split(rest);
                Opt in = term(ctx, left ? x : y, l);
                if (!in) return std::nullopt;
                Term s = left ? Term::inl(y, *in) : Term::inr(x, *in);
                return case_on(ctx, s, Ty::sum(x, y), ctx.size(), ty, rest - l);
            });
            if (m.dia_enabled)
                add(rb * 0.6, [&, this]() -> Opt {
                    auto ks = modal_splits(ctx);
                    if (ks.empty()) return std::nullopt;
                    std::size_t k = ks[pick(ks.size())];
                    Ty x = type(1);
                    std::string a = fresh();
                    int l = split(rest);
                    return lift2(term(ctx.prefix(k), x, l),
                                 [&] { return term(Ctx{}.with_var(a, x).with_lock(), ty, rest - l); },
                                 [&](Term s, Term u) { return Term::let_dia(a, x, Term::dia(s), u); });
                });
        }

        // sample without replacement until one option succeeds
        while (!opts.empty()) {
            std::vector<double> w;
            for (const auto& o : opts) w.push_back(o.first);
            std::size_t i = weighted(w);
            Opt r = opts[i].second();
            if (r) return r;
            opts.erase(opts.begin() + static_cast<long>(i));
        }
        return small(ctx, ty);
    }

private:
    static constexpr int kSmallDepth = 4;

    /// Shallow inhabitant search, memoised per context and type.
    Opt small(const Ctx& ctx, const Ty& ty) {
        for (int d = 1; d <= kSmallDepth; ++d)
            if (Opt t = find(ctx, ty, d)) return t;
        return std::nullopt;
    }

    // The memo only records whether a shape (locks and types, names ignored)
    // has an inhabitant; the term itself is rebuilt along a known-good path.
    static std::string shape(const Ctx& ctx, const Ty& ty, int d) {
        std::string key = std::to_string(d) + "|" + print(ty);
        for (const auto& e : ctx) key += e.lock ? std::string("|#") : "|" + print(*e.ty);
        return key;
    }

public:
    bool inhabited(const Ctx& ctx, const Ty& ty) {
        auto it = memo_.find(shape(ctx, ty, kSmallDepth));
        if (it != memo_.end()) return it->second;
        return find(ctx, ty, kSmallDepth).has_value();
    }

private:
    Opt find(const Ctx& ctx, const Ty& ty, int d) {
        if (d <= 0) return std::nullopt;
        std::string key = shape(ctx, ty, d);
        auto it = memo_.find(key);
        if (it != memo_.end() && !it->second) return std::nullopt;
        Opt r = find_uncached(ctx, ty, d);
        if (it == memo_.end()) memo_.emplace(std::move(key), r.has_value());
        return r;
    }

    std::string binder(const Ctx& ctx) const {
        for (std::size_t n = ctx.size();; ++n) {
            std::string a = "u" + std::to_string(n);
            if (!ctx.has_var(a)) return a;
        }
    }

    Opt find_uncached(const Ctx& ctx, const Ty& ty, int d) {
        auto us = usable(ctx);
        for (std::size_t i : us)
            if (*ctx[i].ty == ty) return Term::var(ctx[i].name);
        switch (ty.kind()) {
        case TyKind::Unit: return Term::unit();
        case TyKind::Fun: {
            std::string a = binder(ctx);
            if (Opt b = find(ctx.with_var(a, ty.lhs()), ty.rhs(), d - 1)) return Term::lam(a, ty.lhs(), *b);
            break;
        }
        case TyKind::Prod:
            if (Opt a = find(ctx, ty.lhs(), d - 1))
                if (Opt b = find(ctx, ty.rhs(), d - 1)) return Term::pair(*a, *b);
            break;
        case TyKind::Box:
            if (Opt a = find(ctx.with_lock(), ty.operand(), d - 1)) return Term::shut(*a);
            break;
        default: break;
        }
        if (ty.is(TyKind::Sum)) {
            if (Opt a = find(ctx, ty.lhs(), d - 1)) return Term::inl(ty.rhs(), *a);
            if (Opt b = find(ctx, ty.rhs(), d - 1)) return Term::inr(ty.lhs(), *b);
        }
        if (ty.is(TyKind::Dia))
            for (std::size_t k : modal_splits(ctx))
                if (Opt a = find(ctx.prefix(k), ty.operand(), d - 1)) return Term::dia(*a);
        for (std::size_t i : us) {
            const Ty& vt = *ctx[i].ty;
            Term v = Term::var(ctx[i].name);
            switch (vt.kind()) {
            case TyKind::Empty: return Term::abort(ty, v);
            case TyKind::Prod:
                if (vt.lhs() == ty) return Term::fst(v);
                if (vt.rhs() == ty) return Term::snd(v);
                break;
            case TyKind::Fun:
                if (vt.rhs() == ty)
                    if (Opt a = find(ctx, vt.lhs(), d - 1)) return Term::app(v, *a);
                break;
            case TyKind::Sum: {
                auto at = [&](const std::string& x, const Ty& t) {
                    return ctx.prefix(i + 1).with_var(x, t).concat(ctx.suffix(i + 1));
                };
                std::string a = binder(ctx);
                if (Opt l = find(at(a, vt.lhs()), ty, d - 1))
                    if (Opt r = find(at(a, vt.rhs()), ty, d - 1)) return Term::case_of(v, a, *l, a, *r);
                break;
            }
            case TyKind::Dia: {
                if (!cfg_.mode.dia_enabled) break;
                std::string a = binder(Ctx{});
                if (Opt u = find(Ctx{}.with_var(a, vt.operand()).with_lock(), ty, d - 1))
                    return Term::let_dia(a, vt.operand(), v, *u);
                break;
            }
            default: break;
            }
        }
        for (std::size_t k : modal_splits(ctx)) {
            Ctx pre = ctx.prefix(k);
            for (std::size_t i : usable(pre))
                if (pre[i].ty->is(TyKind::Box) && pre[i].ty->operand() == ty) return Term::open(Term::var(pre[i].name));
        }
        return std::nullopt;
    }

    static Term beta_pair(Term a, Term b) { return Term::fst(Term::pair(std::move(a), std::move(b))); }

    template <class F>
    static Opt lift1(Opt a, F f) {
        if (!a) return std::nullopt;
        return f(*a);
    }
    template <class G, class F>
    static Opt lift2(Opt a, G second, F f) {
        if (!a) return std::nullopt;
        Opt b = second();
        if (!b) return std::nullopt;
        return f(*a, *b);
    }

    Opt case_on(const Ctx& ctx, const Term& s, const Ty& st, std::size_t k, const Ty& ty, int budget) {
        std::string a = fresh(), b = fresh();
        int l = split(budget);
        auto at = [&](const std::string& x, const Ty& t) {
            return ctx.prefix(k).with_var(x, t).concat(ctx.suffix(k));
        };
        return lift2(term(at(a, st.lhs()), ty, l), [&] { return term(at(b, st.rhs()), ty, budget - l); },
                     [&](Term u, Term v) { return Term::case_of(s, a, u, b, v); });
    }

    std::vector<std::size_t> usable(const Ctx& ctx) const {
        std::vector<std::size_t> v;
        bool lock_seen = false;
        for (std::size_t i = ctx.size(); i-- > 0;) {
            if (ctx[i].lock) {
                lock_seen = true;
                continue;
            }
            if (!lock_seen || cfg_.mode.calculus == Calculus::IR) v.push_back(i);
        }
        return v;
    }

    /// Prefix lengths that open/dia may use.
    std::vector<std::size_t> modal_splits(const Ctx& ctx) const {
        std::vector<std::size_t> v;
        switch (cfg_.mode.calculus) {
        case Calculus::IK:
            if (auto l = ctx.rightmost_lock()) v.push_back(*l);
            break;
        case Calculus::IR:
            for (std::size_t k = 0; k < ctx.size(); ++k)
                if (ctx[k].lock) v.push_back(k);
            break;
        case Calculus::IS4:
            for (std::size_t k = 0; k <= ctx.size(); ++k) v.push_back(k);
            break;
        }
        return v;
    }

    std::string fresh() { return "v" + std::to_string(counter_++); }

    int split(int n) {
        if (n <= 0) return 0;
        return static_cast<int>(pick(static_cast<std::size_t>(n) + 1));
    }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
    std::size_t weighted(const std::vector<double>& w) {
        return std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng_);
    }

    const GenConfig& cfg_;
    std::mt19937_64 rng_;
    std::vector<Ty> bases_;
    int counter_ = 0;
    std::size_t work_ = 0, work_cap_ = 0;
    std::map<std::string, bool> memo_;
};

Generated attempt_loop(const GenConfig& cfg, bool closed, bool locks) {
    if (cfg.max_size < 1) throw Error(ErrorKind::PreconditionViolated, "max_size must be at least 1");
    Gen g(cfg);
    for (std::size_t i = 0; i < cfg.retries; ++i) {
        Ctx ctx = g.context(!closed, closed ? locks : true);
        Ty ty = g.type(2);
        if (!g.inhabited(ctx, ty)) continue;
        g.reset_work(40 * cfg.max_size + 200);
        // leaves filled in past the budget overshoot it, so aim below max_size
        Opt t = g.term(ctx, ty, static_cast<int>(cfg.max_size * 3 / 5));
        if (!t || t->size() > cfg.max_size) continue;
        try {
            Derivation d = check(cfg.mode, ctx, *t, ty);
            return {ctx, *t, ty, std::move(d)};
        } catch (const Error&) {
        }
    }
    throw Error(ErrorKind::GenerationExhausted,
                "no well-typed term after " + std::to_string(cfg.retries) + " attempts (seed " +
                    std::to_string(cfg.seed) + ")");
}

}  // namespace

Generated gen_typed_term(const GenConfig& cfg) { return attempt_loop(cfg, false, true); }

Generated gen_closed_term(const GenConfig& cfg, bool locks) { return attempt_loop(cfg, true, locks); }

}  // namespace fitch
