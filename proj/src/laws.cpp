#include <set>

#include "fitch/error.hpp"
#include "fitch/semantics.hpp"

namespace fitch {

std::vector<Obj> denotable_objects(const Model& m, int formers, std::size_t* skipped) {
    std::size_t skip = 0;
    std::set<std::string> seen;
    std::vector<Obj> all;
    // by_size[n] holds the new objects that need exactly n formers
    std::vector<std::vector<Obj>> by_size(static_cast<std::size_t>(std::max(formers, 0)) + 1);
    auto keep = [&](std::size_t n, auto make) {
        try {
            Obj o = make();
            if (seen.insert(o->key).second) {
                by_size[n].push_back(o);
                all.push_back(o);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ModelTooLarge) throw;
            ++skip;
        }
    };
    for (const auto& [name, interp] : m.config().bases) keep(0, [&, n = name] { return m.base(n); });
    keep(0, [&] { return m.unit(); });
    keep(0, [&] { return m.empty(); });
    for (std::size_t n = 1; n < by_size.size(); ++n) {
        for (const Obj& x : by_size[n - 1]) {
            keep(n, [&] { return m.box(x); });
            keep(n, [&] { return m.dia(x); });
        }
        for (std::size_t i = 0; i + 1 <= n - 1 + 1 && i <= n - 1; ++i) {
            std::size_t j = n - 1 - i;
            for (const Obj& x : by_size[i])
                for (const Obj& y : by_size[j]) {
                    keep(n, [&] { return m.prod(x, y); });
                    keep(n, [&] { return m.sum(x, y); });
                    keep(n, [&] { return m.exp(x, y); });
                }
        }
    }
    if (skipped) *skipped = skip;
    return all;
}

namespace {

bool is_bijection(const Mor& f) {
    for (int k = 0; k < f.dom->stages(); ++k) {
        if (f.dom->size(k) != f.cod->size(k)) return false;
        std::set<int> img(f.tables[static_cast<std::size_t>(k)].begin(), f.tables[static_cast<std::size_t>(k)].end());
        if (img.size() != static_cast<std::size_t>(f.cod->size(k))) return false;
    }
    return true;
}

}  // namespace

LawOutcome check_model_laws(const Model& m, int formers) {
    LawOutcome out;
    std::vector<Obj> objs = denotable_objects(m, formers, &out.skipped);
    out.objects = objs.size();
    Obj seed = m.config().bases.empty() ? m.unit() : m.base(m.config().bases.begin()->first);
    for (const Obj& x : objs) {
        auto law = [&](const char* name, auto holds) {
            try {
                ++out.checks;
                if (!holds()) out.failures.push_back(std::string(name) + " at " + x->key);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::ModelTooLarge) throw;
                --out.checks;
                ++out.skipped;
            }
        };
        law("transpose after untranspose", [&] {
            Mor f = m.unit_m(x);
            return mor_eq(m.transpose(m.untranspose(f)), f);
        });
        law("untranspose after transpose", [&] {
            Mor g = m.counit_m(x);
            return mor_eq(m.untranspose(m.transpose(g)), g);
        });
        law("triangle on Dia", [&] {
            return mor_eq(m.compose(m.counit_m(m.dia(x)), m.dia_map(m.unit_m(x))), m.id(m.dia(x)));
        });
        law("triangle on Box", [&] {
            return mor_eq(m.compose(m.box_map(m.counit_m(x)), m.unit_m(m.box(x))), m.id(m.box(x)));
        });
        if (m.has_monad()) {
            law("mu after eta", [&] {
                return mor_eq(m.compose(m.monad_mult(x), m.monad_unit(m.dia(x))), m.id(m.dia(x)));
            });
            law("mu after Dia eta", [&] {
                return mor_eq(m.compose(m.monad_mult(x), m.dia_map(m.monad_unit(x))), m.id(m.dia(x)));
            });
            law("mu associative", [&] {
                return mor_eq(m.compose(m.monad_mult(x), m.monad_mult(m.dia(x))),
                              m.compose(m.monad_mult(x), m.dia_map(m.monad_mult(x))));
            });
            law("eta after mu (idempotence)", [&] {
                return mor_eq(m.compose(m.monad_unit(m.dia(x)), m.monad_mult(x)), m.id(m.dia(m.dia(x))));
            });
        }
        if (m.has_point()) {
            law("Box r = r", [&] { return mor_eq(m.box_map(m.point_r(x)), m.point_r(m.box(x))); });
            law("q = Dia q", [&] { return mor_eq(m.point_q(m.dia(x)), m.dia_map(m.point_q(x))); });
        }
        law("Dia preserves sums", [&] {
            Obj s = m.sum(x, seed);
            Mor c = m.copair(m.dia_map(m.inl(x, seed)), m.dia_map(m.inr(x, seed)));
            return c.cod->key == m.dia(s)->key && is_bijection(c);
        });
    }
    ++out.checks;
    if (!m.dia(m.empty())->empty_everywhere()) out.failures.push_back("Dia preserves the initial object");
    return out;
}

}  // namespace fitch
