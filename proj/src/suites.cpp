#include "fitch/suites.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <sstream>
#include <thread>

#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/semantics.hpp"
#include "fitch/surface.hpp"
#include "json.hpp"

namespace fitch {

namespace {

enum class Status { Pass, Fail, Skip };

struct Sample {
    Status status = Status::Pass;
    std::string detail;
    std::map<std::string, std::size_t> counts;
};

Sample pass() { return {}; }
Sample fail(std::string d) { return {Status::Fail, std::move(d), {}}; }
Sample skip(std::string reason) { return {Status::Skip, "", {{"skip:" + reason, 1}}}; }

std::string judgment(const Ctx& ctx, const Term& t, const Ty& ty) {
    return "[" + print(ctx) + " |- " + print(t) + " : " + print(ty) + "]";
}

Mode need_mode(const SuiteConfig& cfg) {
    if (!cfg.mode) throw Error(ErrorKind::PreconditionViolated, "suite " + cfg.name + " needs a mode");
    return *cfg.mode;
}

GenConfig gen_config(const SuiteConfig& cfg, Mode m, std::uint64_t seed) {
    GenConfig g;
    g.mode = m;
    g.max_size = cfg.max_size;
    g.seed = seed;
    return g;
}

BaseInterp interp(std::vector<int> sizes, std::vector<std::vector<int>> trans = {}) {
    return {std::move(sizes), std::move(trans)};
}

ModelConfig make_model(ModelKind k, int stages, BaseInterp a, BaseInterp b) {
    ModelConfig c;
    c.kind = k;
    c.stages = stages;
    c.bases["A"] = std::move(a);
    c.bases["B"] = std::move(b);
    return c;
}

/// Every one-step contraction of t, at any position.
void all_steps(const Term& t, Path& p, std::vector<std::pair<Path, Contraction>>& out) {
    if (auto c = contract(t)) out.emplace_back(p, *c);
    for (std::size_t i = 0; i < t.arity(); ++i) {
        p.push_back(i);
        all_steps(t.child(i), p, out);
        p.pop_back();
    }
}

// ---------------------------------------------------------------------------

Sample subject_reduction(const SuiteConfig& cfg, Mode m, std::uint64_t seed) {
    Generated g = gen_typed_term(gen_config(cfg, m, seed));
    std::optional<Normalized> n;
    try {
        n.emplace(normalize(g.term, default_fuel(g.term), Strategy::Outermost, true));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::FuelExhausted) throw;
        Sample s = fail("fuel exhausted on " + judgment(g.ctx, g.term, g.ty));
        s.counts["fuel_exhausted"] = 1;
        return s;
    }
    Sample s;
    s.counts["steps"] = n->steps;
    if (n->steps > 0) s.counts["reducible_terms"] = 1;
    for (std::size_t i = 0; i < n->trace.size(); ++i) {
        const auto& c = n->trace[i];
        try {
            check(m, g.ctx, c.term, g.ty);
        } catch (const Error& e) {
            return fail("step " + std::to_string(i + 1) + " (" + redex_name(c.tag) + ") of " +
                        judgment(g.ctx, g.term, g.ty) + " gives ill-typed '" + print(c.term) + "': " + e.what());
        }
        s.counts[std::string("tag:") + redex_name(c.tag)] += 1;
    }
    return s;
}

Sample confluence(const SuiteConfig& cfg, Mode m, std::uint64_t seed) {
    Generated g = gen_typed_term(gen_config(cfg, m, seed));
    std::size_t fuel = default_fuel(g.term);
    Term a = normalize(g.term, fuel, Strategy::Outermost).term;
    Term b = normalize(g.term, fuel, Strategy::Innermost).term;
    if (!alpha_eq(a, b))
        return fail(judgment(g.ctx, g.term, g.ty) + ": outermost gives '" + print(a) + "', innermost '" + print(b) +
                    "'");
    return pass();
}

Sample canonicity(const SuiteConfig& cfg, Mode m, std::uint64_t seed) {
    Generated g = gen_closed_term(gen_config(cfg, m, seed), true);
    Term nf = normalize(g.term).term;
    Derivation d = check(m, g.ctx, nf, g.ty);
    CheckOutcome o = canonicity_check(d);
    if (!o.ok) return fail(judgment(g.ctx, g.term, g.ty) + ": " + o.detail);
    return pass();
}

Sample subformula(const SuiteConfig& cfg, Mode m, std::uint64_t seed) {
    Generated g = gen_typed_term(gen_config(cfg, m, seed));
    Term nf = normalize(g.term).term;
    Derivation d = check(m, g.ctx, nf, g.ty);
    SubformulaOutcome o = subformula_check(d);
    if (!o.holds) {
        const auto& v = o.violations.front();
        return fail("normal form '" + print(nf) + "' of " + judgment(g.ctx, g.term, g.ty) + " has '" +
                    print(v.term) + "' : " + print(v.ty));
    }
    return pass();
}

Sample coherence(const SuiteConfig& cfg, Mode m, std::uint64_t seed, const Model& model) {
    Generated g = gen_typed_term(gen_config(cfg, m, seed));
    std::vector<Derivation> ds;
    try {
        ds = enumerate_derivations(m, g.ctx, g.term, g.ty, cfg.bound);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundExceeded) throw;
        return skip("bound_exceeded");
    }
    Sample s;
    if (ds.size() < 2) {
        s.counts["single_derivation"] = 1;
        return s;
    }
    s.counts["multi_derivation"] = 1;
    s.counts["derivations"] = ds.size();
    try {
        CoherenceOutcome o = coherence_check(model, m, g.ctx, g.term, g.ty, cfg.bound);
        if (!o.ok) return fail(judgment(g.ctx, g.term, g.ty) + ": " + o.detail);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ModelTooLarge) throw;
        return skip("model_too_large");
    }
    return s;
}

Sample soundness(const SuiteConfig& cfg, Mode m, std::uint64_t seed,
                 const std::vector<std::pair<std::string, std::unique_ptr<Model>>>& models) {
    Generated g = gen_typed_term(gen_config(cfg, m, seed));
    std::vector<std::pair<Path, Contraction>> steps;
    Path p;
    all_steps(g.term, p, steps);
    std::vector<EqMove> moves = eta_assoc_instances(m, g.ctx, g.term, g.ty);
    Sample s;
    std::size_t checked_models = 0;
    for (const auto& [name, mp] : models) {
        const Model& model = *mp;
        try {
            Mor base = denote(model, m, g.deriv);
            for (const auto& [path, c] : steps) {
                Term u = replace_at(g.term, path, c.term);
                Derivation du = check(m, g.ctx, u, g.ty);
                if (!mor_eq(base, denote(model, m, du)))
                    return fail("in " + name + ", " + redex_name(c.tag) + " step of " + judgment(g.ctx, g.term, g.ty) +
                                " to '" + print(u) + "' changes the denotation");
                s.counts["steps_checked"] += 1;
            }
            for (const auto& mv : moves) {
                Derivation du = check(m, g.ctx, mv.term, g.ty);
                if (!mor_eq(base, denote(model, m, du)))
                    return fail("in " + name + ", " + mv.rule + " instance of " + judgment(g.ctx, g.term, g.ty) +
                                " to '" + print(mv.term) + "' changes the denotation");
                s.counts["eqs_checked"] += 1;
            }
            ++checked_models;
            s.counts["model:" + name] += 1;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ModelTooLarge) throw;
            s.counts["too_large:" + name] += 1;
        }
    }
    if (checked_models == 0) return skip("model_too_large");
    return s;
}

// ---------------------------------------------------------------------------

SuiteReport collect(const SuiteConfig& cfg, const std::string& mode_label, std::size_t n,
                    const std::function<Sample(std::size_t)>& run, const std::function<std::uint64_t(std::size_t)>& seed_of) {
    std::vector<Sample> results(n);
    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    auto one = [&](std::size_t i) {
        try {
            results[i] = run(i);
        } catch (const Error& e) {
            results[i] = fail(std::string(error_kind_name(e.kind())) + ": " + e.what());
        }
    };
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) one(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) one(i);
            });
        for (auto& t : pool) t.join();
    }
    SuiteReport r;
    r.suite = cfg.name;
    r.mode = mode_label;
    r.samples = n;
    for (std::size_t i = 0; i < n; ++i) {
        const Sample& s = results[i];
        for (const auto& [k, v] : s.counts) r.counts[k] += v;
        switch (s.status) {
        case Status::Pass: ++r.passed; break;
        case Status::Skip: ++r.skipped; break;
        case Status::Fail:
            ++r.failed;
            r.failures.push_back({seed_of(i), s.detail});
            break;
        }
    }
    return r;
}

ModelConfig default_coherence_model(Mode m) {
    for (auto& [name, c] : default_models()) {
        if (m.calculus == Calculus::IS4 && c.kind == ModelKind::ConstantComonad && c.stages == 1) return c;
        if (m.calculus != Calculus::IS4 && c.kind == ModelKind::Chain && c.stages == 1) return c;
    }
    throw std::logic_error("no default coherence model");
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"subject-reduction", "confluence", "canonicity", "subformula", "coherence", "soundness", "appendix-goals"};
}

std::vector<std::pair<std::string, ModelConfig>> default_models() {
    return {
        {"identity", make_model(ModelKind::Identity, 0, interp({2}), interp({3}))},
        {"chain1", make_model(ModelKind::Chain, 1, interp({1, 2}, {{0}}), interp({1, 1}, {{0}}))},
        {"chain2", make_model(ModelKind::Chain, 2, interp({1, 2, 2}, {{0}, {1, 0}}), interp({1, 1, 2}, {{0}, {1}}))},
        {"constant1", make_model(ModelKind::ConstantComonad, 1, interp({2, 3}, {{0, 2}}), interp({1, 2}, {{1}}))},
    };
}

SuiteReport run_suite(const SuiteConfig& cfg) {
    const std::string& n = cfg.name;
    auto seed_of = [&](std::size_t i) { return cfg.seed + i; };
    auto sampled = [&](auto f) {
        Mode m = need_mode(cfg);
        return collect(cfg, mode_name(m), cfg.samples, [&, m](std::size_t i) { return f(m, seed_of(i)); }, seed_of);
    };

    if (n == "subject-reduction")
        return sampled([&](Mode m, std::uint64_t s) { return subject_reduction(cfg, m, s); });
    if (n == "confluence") return sampled([&](Mode m, std::uint64_t s) { return confluence(cfg, m, s); });
    if (n == "canonicity") return sampled([&](Mode m, std::uint64_t s) { return canonicity(cfg, m, s); });
    if (n == "subformula") {
        Mode m = need_mode(cfg);
        if (m.dia_enabled)
            throw Error(ErrorKind::ModeUnsupported,
                        "the subformula property fails once <> is present; run it in a mode without <>");
        SuiteReport r = sampled([&](Mode md, std::uint64_t s) { return subformula(cfg, md, s); });
        // the known counterexample with <> must still be caught
        Mode md = Mode::ik_dia();
        Term t = parse_term("(let dia y:A = x in \\z:<>A. dia y) x");
        Derivation d = check(md, parse_ctx("x : <>A"), normalize(t).term, parse_type("<>A"));
        SubformulaOutcome o = subformula_check(d);
        bool flagged = false;
        for (const auto& v : o.violations)
            if (v.term.is(TermKind::Lam) && v.ty == parse_type("<>A -> <>A")) flagged = true;
        r.counts["counterexample_flagged"] = flagged ? 1 : 0;
        if (!flagged) {
            ++r.failed;
            r.failures.push_back({0, "the <> counterexample was not reported as a violation"});
        }
        return r;
    }
    if (n == "coherence") {
        Mode m = need_mode(cfg);
        Model model(cfg.model ? *cfg.model : default_coherence_model(m));
        if (!model.supports(m))
            throw Error(ErrorKind::ModeUnsupported, std::string("the ") + model_kind_name(model.kind()) +
                                                        " model does not interpret " + mode_name(m));
        SuiteReport r = sampled([&](Mode md, std::uint64_t s) { return coherence(cfg, md, s, model); });
        if (m.calculus == Calculus::IS4) {
            // the double-open example
            CoherenceOutcome o = coherence_check(model, m, parse_ctx("x : [][]A, #, #"), parse_term("open open x"),
                                                 parse_type("A"), cfg.bound);
            r.counts["double_open_derivations"] = o.derivations;
            if (!o.ok || o.derivations < 2) {
                ++r.failed;
                r.failures.push_back({0, "open open x: " + o.detail});
            }
        }
        return r;
    }
    if (n == "soundness") {
        Mode m = need_mode(cfg);
        std::vector<std::pair<std::string, std::unique_ptr<Model>>> models;
        if (cfg.model) {
            models.emplace_back("model", std::make_unique<Model>(*cfg.model));
        } else {
            for (auto& [name, c] : default_models()) models.emplace_back(name, std::make_unique<Model>(c));
        }
        std::erase_if(models, [&](const auto& p) { return !p.second->supports(m); });
        if (models.empty()) throw Error(ErrorKind::ModeUnsupported, "no model interprets " + mode_name(m));
        return sampled([&](Mode md, std::uint64_t s) { return soundness(cfg, md, s, models); });
    }
    if (n == "appendix-goals") {
        std::vector<Goal> gs = appendix_goals();
        if (cfg.mode) std::erase_if(gs, [&](const Goal& g) { return !(g.mode == *cfg.mode); });
        return collect(
            cfg, cfg.mode ? mode_name(*cfg.mode) : "all", gs.size(),
            [&](std::size_t i) {
                const Goal& g = gs[i];
                EqResult e = def_eq(g.mode, g.ctx, g.lhs, g.rhs, g.ty, cfg.eq_bound);
                if (e.verdict != Verdict::Equal)
                    return fail(g.name + " (" + mode_name(g.mode) + "): " + verdict_name(e.verdict) + ", '" +
                                print(e.lhs_normal) + "' vs '" + print(e.rhs_normal) + "'");
                Sample s;
                s.counts["states"] = e.states;
                return s;
            },
            [](std::size_t) { return std::uint64_t{0}; });
    }
    throw Error(ErrorKind::PreconditionViolated, "unknown suite '" + n + "'");
}

std::string report_json(const SuiteReport& r) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["mode"] = r.mode;
    j["samples"] = r.samples;
    j["passed"] = r.passed;
    j["failed"] = r.failed;
    j["skipped"] = r.skipped;
    j["counts"] = r.counts;
    j["failures"] = nlohmann::json::array();
    for (const auto& f : r.failures) j["failures"].push_back({{"seed", f.seed}, {"detail", f.detail}});
    j["ok"] = r.ok();
    return j.dump(2);
}

std::string report_text(const SuiteReport& r) {
    std::ostringstream os;
    os << r.suite << " [" << r.mode << "]: " << r.passed << " passed, " << r.failed << " failed, " << r.skipped
       << " skipped of " << r.samples << "\n";
    for (const auto& [k, v] : r.counts) os << "  " << k << " = " << v << "\n";
    for (const auto& f : r.failures) os << "  FAIL seed " << f.seed << ": " << f.detail << "\n";
    return os.str();
}

}  // namespace fitch
