#include "fitch/semantics.hpp"

#include <sstream>

#include "fitch/error.hpp"
#include "fitch/surface.hpp"

namespace fitch {

namespace {
using Table = std::vector<int>;

std::size_t idx(int k) { return static_cast<std::size_t>(k); }
}  // namespace

int ObjData::transport(int x, int from, int to) const {
    for (int k = from; k < to; ++k) x = trans[idx(k)][idx(x)];
    return x;
}

bool ObjData::empty_everywhere() const {
    for (int s : sizes)
        if (s) return false;
    return true;
}

std::size_t ObjData::total_size() const {
    std::size_t n = 0;
    for (int s : sizes) n += static_cast<std::size_t>(s);
    return n;
}

bool Mor::is_natural() const {
    if (tables.size() != dom->sizes.size()) return false;
    for (std::size_t k = 0; k < tables.size(); ++k) {
        if (tables[k].size() != static_cast<std::size_t>(dom->sizes[k])) return false;
        for (int v : tables[k])
            if (v < 0 || v >= cod->sizes[k]) return false;
    }
    for (std::size_t k = 0; k + 1 < tables.size(); ++k)
        for (std::size_t x = 0; x < tables[k].size(); ++x)
            if (cod->trans[k][idx(tables[k][x])] != tables[k + 1][idx(dom->trans[k][x])]) return false;
    return true;
}

bool mor_eq(const Mor& f, const Mor& g) {
    if (f.dom->key != g.dom->key || f.cod->key != g.cod->key)
        throw Error(ErrorKind::ShapeMismatch, "comparing " + f.dom->key + " -> " + f.cod->key + " with " +
                                                  g.dom->key + " -> " + g.cod->key);
    return f.tables == g.tables;
}

// ---------------------------------------------------------------------------

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    last_ = cfg_.stages;
}

bool Model::supports(Mode m) const {
    switch (kind()) {
    case ModelKind::Identity: return true;
    case ModelKind::Chain: return m.calculus != Calculus::IS4;
    case ModelKind::ConstantComonad: return m.calculus != Calculus::IR;
    }
    return false;
}

Obj Model::intern(ObjData d) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(d.key);
        if (it != cache_.end()) return it->second;
    }
    if (d.kind == ObjKind::Exp) build_exp(d);
    for (int s : d.sizes)
        if (static_cast<std::size_t>(s) > kMaxCarrier)
            throw Error(ErrorKind::ModelTooLarge, "object " + d.key + " has " + std::to_string(s) + " elements");
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(d.key);
    if (it != cache_.end()) return it->second;
    Obj o = std::make_shared<const ObjData>(std::move(d));
    cache_.emplace(o->key, o);
    return o;
}

Mor Model::checked(Mor m) const {
#ifndef NDEBUG
    if (!m.is_natural())
        throw std::logic_error("constructed a non-natural morphism " + m.dom->key + " -> " + m.cod->key);
#endif
    return m;
}

Obj Model::base(const std::string& name) const {
    auto it = cfg_.bases.find(name);
    if (it == cfg_.bases.end()) throw Error(ErrorKind::UnknownBaseType, "base type '" + name + "' is not configured");
    ObjData d;
    d.key = name;
    d.kind = ObjKind::Base;
    d.sizes = it->second.sizes;
    if (!it->second.trans.empty()) {
        d.trans = it->second.trans;
    } else {
        for (int k = 0; k < last_; ++k) d.trans.emplace_back(idx(d.sizes[idx(k)]), 0);
    }
    return intern(std::move(d));
}

Obj Model::unit() const {
    ObjData d;
    d.key = "1";
    d.kind = ObjKind::Unit;
    d.sizes.assign(idx(stage_count()), 1);
    d.trans.assign(idx(last_), Table{0});
    return intern(std::move(d));
}

Obj Model::empty() const {
    ObjData d;
    d.key = "0";
    d.kind = ObjKind::Empty;
    d.sizes.assign(idx(stage_count()), 0);
    d.trans.assign(idx(last_), Table{});
    return intern(std::move(d));
}

Obj Model::prod(const Obj& a, const Obj& b) const {
    ObjData d;
    d.key = "(" + a->key + "*" + b->key + ")";
    d.kind = ObjKind::Prod;
    d.a = a;
    d.b = b;
    for (int k = 0; k < stage_count(); ++k) {
        std::size_t n = static_cast<std::size_t>(a->size(k)) * static_cast<std::size_t>(b->size(k));
        if (n > kMaxCarrier) throw Error(ErrorKind::ModelTooLarge, "object " + d.key + " is too large");
        d.sizes.push_back(static_cast<int>(n));
    }
    for (int k = 0; k < last_; ++k) {
        Table t;
        int nb = b->size(k), nb1 = b->size(k + 1);
        for (int e = 0; e < d.sizes[idx(k)]; ++e)
            t.push_back(a->trans[idx(k)][idx(e / nb)] * nb1 + b->trans[idx(k)][idx(e % nb)]);
        d.trans.push_back(std::move(t));
    }
    return intern(std::move(d));
}

Obj Model::sum(const Obj& a, const Obj& b) const {
    ObjData d;
    d.key = "(" + a->key + "+" + b->key + ")";
    d.kind = ObjKind::Sum;
    d.a = a;
    d.b = b;
    for (int k = 0; k < stage_count(); ++k) d.sizes.push_back(a->size(k) + b->size(k));
    for (int k = 0; k < last_; ++k) {
        Table t;
        for (int e = 0; e < a->size(k); ++e) t.push_back(a->trans[idx(k)][idx(e)]);
        for (int e = 0; e < b->size(k); ++e) t.push_back(a->size(k + 1) + b->trans[idx(k)][idx(e)]);
        d.trans.push_back(std::move(t));
    }
    return intern(std::move(d));
}

Obj Model::exp(const Obj& a, const Obj& b) const {
    ObjData d;
    d.key = "(" + a->key + "->" + b->key + ")";
    d.kind = ObjKind::Exp;
    d.a = a;
    d.b = b;
    return intern(std::move(d));
}

void Model::build_exp(ObjData& d) const {
    const ObjData& A = *d.a;
    const ObjData& B = *d.b;
    const int S = stage_count();
    d.fams.assign(idx(S), {});
    d.fam_index.assign(idx(S), {});
    auto too_big = [&] {
        throw Error(ErrorKind::ModelTooLarge, "exponential " + d.key + " has more than " +
                                                  std::to_string(kMaxCarrier) + " elements in a stage");
    };
    for (int j = S - 1; j >= 0; --j) {
        const int na = A.size(j);
        std::vector<std::vector<int>> choices(idx(na));
        auto emit_all = [&](int tail) {
            std::size_t count = 1;
            for (const auto& c : choices) {
                count *= c.size();
                if (count > kMaxCarrier) too_big();
            }
            if (count == 0) return;
            std::vector<std::size_t> pos(idx(na), 0);
            while (true) {
                ObjData::Family f;
                f.tail = tail;
                for (int x = 0; x < na; ++x) f.table.push_back(choices[idx(x)][pos[idx(x)]]);
                d.fam_index[idx(j)].emplace(std::make_pair(tail, f.table), static_cast<int>(d.fams[idx(j)].size()));
                d.fams[idx(j)].push_back(std::move(f));
                if (d.fams[idx(j)].size() > kMaxCarrier) too_big();
                int x = 0;
                for (; x < na; ++x) {
                    if (++pos[idx(x)] < choices[idx(x)].size()) break;
                    pos[idx(x)] = 0;
                }
                if (x == na) break;
            }
        };
        if (j == S - 1) {
            for (int x = 0; x < na; ++x)
                for (int v = 0; v < B.size(j); ++v) choices[idx(x)].push_back(v);
            emit_all(-1);
        } else {
            const auto& up = d.fams[idx(j + 1)];
            for (int s = 0; s < static_cast<int>(up.size()); ++s) {
                const Table& next = up[idx(s)].table;
                for (int x = 0; x < na; ++x) {
                    choices[idx(x)].clear();
                    int target = next[idx(A.trans[idx(j)][idx(x)])];
                    for (int v = 0; v < B.size(j); ++v)
                        if (B.trans[idx(j)][idx(v)] == target) choices[idx(x)].push_back(v);
                }
                emit_all(s);
            }
        }
    }
    for (int j = 0; j < S; ++j) d.sizes.push_back(static_cast<int>(d.fams[idx(j)].size()));
    for (int j = 0; j + 1 < S; ++j) {
        Table t;
        for (const auto& f : d.fams[idx(j)]) t.push_back(f.tail);
        d.trans.push_back(std::move(t));
    }
}

int Model::exp_lookup(const Obj& e, int stage, int tail, const std::vector<int>& table) const {
    const auto& m = e->fam_index[idx(stage)];
    auto it = m.find({tail, table});
    if (it == m.end()) throw std::logic_error("family is not natural in " + e->key);
    return it->second;
}

int Model::dia_source(int k) const {
    switch (kind()) {
    case ModelKind::Identity: return k;
    case ModelKind::Chain: return k - 1;
    case ModelKind::ConstantComonad: return last_;
    }
    return k;
}

int Model::box_source(int k) const {
    switch (kind()) {
    case ModelKind::Identity: return k;
    case ModelKind::Chain: return k == last_ ? -1 : k + 1;
    case ModelKind::ConstantComonad: return 0;
    }
    return k;
}

Obj Model::box(const Obj& x) const {
    if (kind() == ModelKind::Identity) return x;
    ObjData d;
    d.key = "[]" + x->key;
    d.kind = ObjKind::Box;
    d.a = x;
    for (int k = 0; k < stage_count(); ++k) {
        int s = box_source(k);
        d.sizes.push_back(s < 0 ? 1 : x->size(s));
    }
    for (int k = 0; k < last_; ++k) {
        if (kind() == ModelKind::ConstantComonad) {
            Table t;
            for (int e = 0; e < x->size(0); ++e) t.push_back(e);
            d.trans.push_back(std::move(t));
        } else if (k + 1 < last_) {
            d.trans.push_back(x->trans[idx(k + 1)]);
        } else {
            d.trans.emplace_back(idx(x->size(last_)), 0);
        }
    }
    return intern(std::move(d));
}

Obj Model::dia(const Obj& x) const {
    if (kind() == ModelKind::Identity) return x;
    ObjData d;
    d.key = "<>" + x->key;
    d.kind = ObjKind::Dia;
    d.a = x;
    for (int k = 0; k < stage_count(); ++k) {
        int s = dia_source(k);
        d.sizes.push_back(s < 0 ? 0 : x->size(s));
    }
    for (int k = 0; k < last_; ++k) {
        if (kind() == ModelKind::ConstantComonad) {
            Table t;
            for (int e = 0; e < x->size(last_); ++e) t.push_back(e);
            d.trans.push_back(std::move(t));
        } else if (k == 0) {
            d.trans.emplace_back();
        } else {
            d.trans.push_back(x->trans[idx(k - 1)]);
        }
    }
    return intern(std::move(d));
}

// ---------------------------------------------------------------------------

Mor Model::id(const Obj& x) const {
    return tabulate(x, x, [](int, int e) { return e; });
}

Mor Model::compose(const Mor& g, const Mor& f) const {
    if (f.cod->key != g.dom->key)
        throw Error(ErrorKind::ShapeMismatch, "cannot compose " + g.dom->key + " -> " + g.cod->key + " after " +
                                                  f.dom->key + " -> " + f.cod->key);
    Mor m{f.dom, g.cod, {}};
    for (std::size_t k = 0; k < f.tables.size(); ++k) {
        Table t;
        for (int v : f.tables[k]) t.push_back(g.tables[k][idx(v)]);
        m.tables.push_back(std::move(t));
    }
    return checked(std::move(m));
}

Mor Model::bang(const Obj& x) const {
    return tabulate(x, unit(), [](int, int) { return 0; });
}

Mor Model::absurd(const Obj& x) const {
    return tabulate(empty(), x, [](int, int) { return 0; });
}

Mor Model::fst(const Obj& a, const Obj& b) const {
    return tabulate(prod(a, b), a, [&](int k, int e) { return e / b->size(k); });
}

Mor Model::snd(const Obj& a, const Obj& b) const {
    return tabulate(prod(a, b), b, [&](int k, int e) { return e % b->size(k); });
}

Mor Model::pair(const Mor& f, const Mor& g) const {
    if (f.dom->key != g.dom->key) throw Error(ErrorKind::ShapeMismatch, "pairing morphisms with different domains");
    Obj c = prod(f.cod, g.cod);
    return tabulate(f.dom, c, [&](int k, int e) { return f.at(k, e) * g.cod->size(k) + g.at(k, e); });
}

Mor Model::prod_map(const Mor& f, const Mor& g) const {
    return pair(compose(f, fst(f.dom, g.dom)), compose(g, snd(f.dom, g.dom)));
}

Mor Model::inl(const Obj& a, const Obj& b) const {
    return tabulate(a, sum(a, b), [](int, int e) { return e; });
}

Mor Model::inr(const Obj& a, const Obj& b) const {
    return tabulate(b, sum(a, b), [&](int k, int e) { return a->size(k) + e; });
}

Mor Model::copair(const Mor& f, const Mor& g) const {
    if (f.cod->key != g.cod->key) throw Error(ErrorKind::ShapeMismatch, "copairing morphisms with different codomains");
    Obj s = sum(f.dom, g.dom);
    return tabulate(s, f.cod, [&](int k, int e) {
        int na = f.dom->size(k);
        return e < na ? f.at(k, e) : g.at(k, e - na);
    });
}

Mor Model::curry(const Mor& f) const {
    const Obj& x = f.dom->a;
    const Obj& a = f.dom->b;
    if (f.dom->kind != ObjKind::Prod) throw Error(ErrorKind::ShapeMismatch, "curry needs a product domain");
    Obj e = exp(a, f.cod);
    return tabulate(x, e, [&](int k, int el) {
        int tail = -1;
        for (int j = last_; j >= k; --j) {
            int xj = x->transport(el, k, j);
            Table t;
            for (int v = 0; v < a->size(j); ++v) t.push_back(f.at(j, xj * a->size(j) + v));
            tail = exp_lookup(e, j, tail, t);
        }
        return tail;
    });
}

Mor Model::eval(const Obj& a, const Obj& b) const {
    Obj e = exp(a, b);
    return tabulate(prod(e, a), b, [&](int k, int el) {
        int na = a->size(k);
        return e->fams[idx(k)][idx(el / na)].table[idx(el % na)];
    });
}

Mor Model::box_map(const Mor& f) const {
    if (kind() == ModelKind::Identity) return f;
    return tabulate(box(f.dom), box(f.cod), [&](int k, int e) {
        int s = box_source(k);
        return s < 0 ? 0 : f.at(s, e);
    });
}

Mor Model::dia_map(const Mor& f) const {
    if (kind() == ModelKind::Identity) return f;
    return tabulate(dia(f.dom), dia(f.cod), [&](int k, int e) { return f.at(dia_source(k), e); });
}

Mor Model::transpose(const Mor& g) const {
    if (kind() == ModelKind::Identity) return g;
    if (g.dom->kind != ObjKind::Dia) throw Error(ErrorKind::ShapeMismatch, "transpose needs a diamond domain");
    const Obj& x = g.dom->a;
    Obj by = box(g.cod);
    if (kind() == ModelKind::Chain)
        return tabulate(x, by, [&](int k, int e) { return k == last_ ? 0 : g.at(k + 1, e); });
    return tabulate(x, by, [&](int k, int e) { return g.at(0, x->transport(e, k, last_)); });
}

Mor Model::untranspose(const Mor& f) const {
    if (kind() == ModelKind::Identity) return f;
    if (f.cod->kind != ObjKind::Box) throw Error(ErrorKind::ShapeMismatch, "untranspose needs a box codomain");
    const Obj& y = f.cod->a;
    Obj dx = dia(f.dom);
    if (kind() == ModelKind::Chain) return tabulate(dx, y, [&](int k, int e) { return f.at(k - 1, e); });
    return tabulate(dx, y, [&](int k, int e) { return y->transport(f.at(last_, e), 0, k); });
}

Mor Model::unit_m(const Obj& x) const { return transpose(id(dia(x))); }
Mor Model::counit_m(const Obj& y) const { return untranspose(id(box(y))); }

Mor Model::monad_unit(const Obj& x) const {
    if (!has_monad()) throw Error(ErrorKind::ModeUnsupported, "the chain model has no monad on <>");
    if (kind() == ModelKind::Identity) return id(x);
    return tabulate(x, dia(x), [&](int k, int e) { return x->transport(e, k, last_); });
}

Mor Model::monad_mult(const Obj& x) const {
    if (!has_monad()) throw Error(ErrorKind::ModeUnsupported, "the chain model has no monad on <>");
    if (kind() == ModelKind::Identity) return id(x);
    return tabulate(dia(dia(x)), dia(x), [](int, int e) { return e; });
}

Mor Model::comonad_counit(const Obj& x) const {
    if (!has_monad()) throw Error(ErrorKind::ModeUnsupported, "the chain model has no comonad on []");
    if (kind() == ModelKind::Identity) return id(x);
    return tabulate(box(x), x, [&](int k, int e) { return x->transport(e, 0, k); });
}

Mor Model::comonad_mult(const Obj& x) const {
    if (!has_monad()) throw Error(ErrorKind::ModeUnsupported, "the chain model has no comonad on []");
    if (kind() == ModelKind::Identity) return id(x);
    return tabulate(box(x), box(box(x)), [](int, int e) { return e; });
}

Mor Model::point_r(const Obj& x) const {
    if (!has_point()) throw Error(ErrorKind::ModeUnsupported, "the constant model has no point r");
    if (kind() == ModelKind::Identity) return id(x);
    return tabulate(x, box(x), [&](int k, int e) { return k == last_ ? 0 : x->trans[idx(k)][idx(e)]; });
}

Mor Model::point_q(const Obj& x) const { return untranspose(point_r(x)); }

// ---------------------------------------------------------------------------
// Denotation

Obj denote_type(const Model& m, const Ty& ty) {
    switch (ty.kind()) {
    case TyKind::Base: return m.base(ty.name());
    case TyKind::Unit: return m.unit();
    case TyKind::Empty: return m.empty();
    case TyKind::Prod: return m.prod(denote_type(m, ty.lhs()), denote_type(m, ty.rhs()));
    case TyKind::Sum: return m.sum(denote_type(m, ty.lhs()), denote_type(m, ty.rhs()));
    case TyKind::Fun: return m.exp(denote_type(m, ty.lhs()), denote_type(m, ty.rhs()));
    case TyKind::Box: return m.box(denote_type(m, ty.operand()));
    case TyKind::Dia: return m.dia(denote_type(m, ty.operand()));
    }
    throw Error(ErrorKind::UnknownBaseType, "unknown type former");
}

Obj denote_ctx(const Model& m, const Ctx& ctx) {
    Obj o = m.unit();
    for (const auto& e : ctx) o = e.lock ? m.dia(o) : m.prod(o, denote_type(m, *e.ty));
    return o;
}

Mor lock_repl_nat(const Model& m, const Ctx& head, const Ctx& tail) {
    if (!m.has_monad()) throw Error(ErrorKind::ModeUnsupported, "lock replacement needs a monad on <>");
    Obj x = denote_ctx(m, head);
    Mor l = m.monad_unit(x);
    Ctx cur = head;
    for (const auto& e : tail) {
        Obj c = denote_ctx(m, cur);
        if (e.lock) {
            l = m.compose(m.monad_mult(x), m.dia_map(l));
            cur = cur.with_lock();
        } else {
            Obj t = denote_type(m, *e.ty);
            l = m.compose(l, m.fst(c, t));
            cur = cur.with_var(e.name, *e.ty);
        }
    }
    return l;
}

Mor weakening_nat(const Model& m, const Ctx& head, const Ctx& tail) {
    Mor w = m.id(denote_ctx(m, head));
    Ctx cur = head;
    for (const auto& e : tail) {
        Obj c = denote_ctx(m, cur);
        if (e.lock) {
            if (!m.has_point()) throw Error(ErrorKind::ModeUnsupported, "weakening past a lock needs the point r");
            w = m.compose(w, m.point_q(c));
            cur = cur.with_lock();
        } else {
            w = m.compose(w, m.fst(c, denote_type(m, *e.ty)));
            cur = cur.with_var(e.name, *e.ty);
        }
    }
    return w;
}

namespace {

class Denoter {
public:
    Denoter(const Model& m, Mode mode) : m_(m), mode_(mode) {}

    Mor go(const Derivation& d) {
        const Ctx& ctx = d.ctx;
        switch (d.rule) {
        case Rule::Var: {
            std::size_t i = *d.split;
            Obj before = denote_ctx(m_, ctx.prefix(i));
            Obj a = denote_type(m_, d.ty);
            Mor w = weakening_nat(m_, ctx.prefix(i + 1), ctx.suffix(i + 1));
            return m_.compose(m_.snd(before, a), w);
        }
        case Rule::Lam: return m_.curry(go(d.children[0]));
        case Rule::App: {
            Mor f = go(d.children[0]);
            Mor a = go(d.children[1]);
            return m_.compose(m_.eval(a.cod, denote_type(m_, d.ty)), m_.pair(f, a));
        }
        case Rule::Unit: return m_.bang(denote_ctx(m_, ctx));
        case Rule::Pair: return m_.pair(go(d.children[0]), go(d.children[1]));
        case Rule::Fst:
        case Rule::Snd: {
            Mor p = go(d.children[0]);
            const Ty& pt = d.children[0].ty;
            Obj a = denote_type(m_, pt.lhs()), b = denote_type(m_, pt.rhs());
            return m_.compose(d.rule == Rule::Fst ? m_.fst(a, b) : m_.snd(a, b), p);
        }
        case Rule::Inl:
        case Rule::Inr: {
            Mor t = go(d.children[0]);
            Obj a = denote_type(m_, d.ty.lhs()), b = denote_type(m_, d.ty.rhs());
            return m_.compose(d.rule == Rule::Inl ? m_.inl(a, b) : m_.inr(a, b), t);
        }
        case Rule::Shut: return m_.transpose(go(d.children[0]));
        case Rule::Open: return m_.compose(m_.untranspose(go(d.children[0])), to_lock(ctx, *d.split));
        case Rule::Dia: return m_.compose(m_.dia_map(go(d.children[0])), to_lock(ctx, *d.split));
        case Rule::LetDia: {
            Mor t = go(d.children[0]);
            Mor u = go(d.children[1]);
            Obj a = denote_type(m_, d.children[0].ty.operand());
            Mor tag = m_.dia_map(m_.pair(m_.bang(a), m_.id(a)));
            return m_.compose(u, m_.compose(tag, t));
        }
        case Rule::Case: return case_of(d);
        case Rule::Abort: {
            Obj dom = denote_ctx(m_, ctx);
            if (!dom->empty_everywhere())
                throw std::logic_error("abort denoted over an inhabited context");
            return m_.tabulate(dom, denote_type(m_, d.ty), [](int, int) { return 0; });
        }
        }
        throw Error(ErrorKind::IllTyped, "unknown rule");
    }

private:
    /// [[ctx]] -> Dia [[ctx[0..k)]] as the mode's open/dia rule dictates.
    Mor to_lock(const Ctx& ctx, std::size_t k) {
        if (mode_.calculus == Calculus::IS4) return lock_repl_nat(m_, ctx.prefix(k), ctx.suffix(k));
        return weakening_nat(m_, ctx.prefix(k + 1), ctx.suffix(k + 1));
    }

    /// Gamma'(f) for the functor that a context tail induces.
    Mor tail_map(const Ctx& tail, Mor f) {
        for (const auto& e : tail) f = e.lock ? m_.dia_map(f) : m_.prod_map(f, m_.id(denote_type(m_, *e.ty)));
        return f;
    }

    struct Side {
        bool left;
        int elem;
    };

    /// Distributes an element of [[G, A+B, tail[0..i)]] at stage j into the
    /// matching summand [[G, A, ...]] or [[G, B, ...]].
    Side split(const Ctx& tail, std::size_t i, const Obj& g, const Obj& a, const Obj& b, int j, int e) {
        if (i == 0) {
            int nab = a->size(j) + b->size(j);
            int gi = e / nab, s = e % nab;
            if (s < a->size(j)) return {true, gi * a->size(j) + s};
            return {false, gi * b->size(j) + (s - a->size(j))};
        }
        const Entry& en = tail[i - 1];
        if (en.lock) return split(tail, i - 1, g, a, b, m_.dia_source(j), e);
        int nt = denote_type(m_, *en.ty)->size(j);
        Side s = split(tail, i - 1, g, a, b, j, e / nt);
        return {s.left, s.elem * nt + e % nt};
    }

    Mor case_of(const Derivation& d) {
        std::size_t k = *d.split;
        Ctx head = d.ctx.prefix(k), tail = d.ctx.suffix(k);
        Obj g = denote_ctx(m_, head);
        Mor s = go(d.children[0]);
        Obj a = denote_type(m_, d.children[0].ty.lhs()), b = denote_type(m_, d.children[0].ty.rhs());
        Mor lift = tail_map(tail, m_.pair(m_.id(g), s));
        Mor l = go(d.children[1]);
        Mor r = go(d.children[2]);
        return m_.tabulate(denote_ctx(m_, d.ctx), denote_type(m_, d.ty), [&](int j, int e) {
            Side sd = split(tail, tail.size(), g, a, b, j, lift.at(j, e));
            return sd.left ? l.at(j, sd.elem) : r.at(j, sd.elem);
        });
    }

    const Model& m_;
    Mode mode_;
};

}  // namespace

Mor denote(const Model& m, Mode mode, const Derivation& d) {
    if (!m.supports(mode))
        throw Error(ErrorKind::ModeUnsupported, std::string("the ") + model_kind_name(m.kind()) +
                                                    " model does not interpret mode " + mode_name(mode));
    Denoter dn(m, mode);
    return dn.go(d);
}

std::vector<int> eval_closed(const Model& m, Mode mode, const Derivation& d) {
    if (d.ctx.has_vars() || d.ctx.has_lock())
        throw Error(ErrorKind::PreconditionViolated, "eval_closed needs an empty context");
    Mor f = denote(m, mode, d);
    std::vector<int> out;
    for (const auto& t : f.tables) out.push_back(t.at(0));
    return out;
}

std::string print_mor(const Mor& f) {
    std::ostringstream os;
    os << f.dom->key << " -> " << f.cod->key << "\n";
    for (std::size_t k = 0; k < f.tables.size(); ++k) {
        os << "  stage " << k << ":";
        if (f.tables[k].empty()) os << " (empty)";
        for (std::size_t x = 0; x < f.tables[k].size(); ++x) os << " " << x << "->" << f.tables[k][x];
        os << "\n";
    }
    return os.str();
}

}  // namespace fitch
