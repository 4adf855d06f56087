#include "fitch/cli.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/semantics.hpp"
#include "fitch/suites.hpp"
#include "fitch/surface.hpp"
#include "fitch/typecheck.hpp"

namespace fitch {

namespace {

using json = nlohmann::ordered_json;

// Raised for bad invocations that CLI11 itself cannot see (missing mode,
// unknown definition names and so on).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string file;
    std::string name;
    std::string mode;
    std::string model;
    std::string strategy = "outermost";
    std::string out_dir;
    std::size_t fuel = 0;
    std::size_t der_bound = 64;
    std::size_t goal_bound = 32;
    std::optional<std::size_t> suite_bound;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    std::size_t max_size = 30;
    std::size_t eq_bound = 32;
    unsigned workers = 0;
    int formers = 3;
    bool json = false;
};

std::optional<Mode> flag_mode(const Options& o) {
    if (o.mode.empty()) return std::nullopt;
    auto m = parse_mode(o.mode);
    if (!m) throw UsageError("unknown mode '" + o.mode + "' (expected ik, ikd, is4, is4d, ir or ird)");
    return m;
}

Mode resolve_mode(const Options& o, const SourceFile& f) {
    if (auto m = flag_mode(o)) return *m;
    if (f.mode) return *f.mode;
    throw UsageError(o.file + " declares no mode; pass --mode");
}

const TermDecl& find_def(const SourceFile& f, const Options& o) {
    const TermDecl* d = f.find_def(o.name);
    if (!d) throw UsageError("no definition '" + o.name + "' in " + o.file);
    return *d;
}

Derivation derive(Mode mode, const TermDecl& d) {
    return d.type ? check(mode, d.ctx, d.term, *d.type) : infer(mode, d.ctx, d.term).deriv;
}

json deriv_json(const Derivation& d) {
    json j;
    j["rule"] = rule_name(d.rule);
    j["ctx"] = print(d.ctx);
    j["term"] = print(d.term);
    j["type"] = print(d.ty);
    if (d.split) j["split"] = *d.split;
    json kids = json::array();
    for (const auto& c : d.children) kids.push_back(deriv_json(c));
    j["children"] = std::move(kids);
    return j;
}

json mor_json(const Mor& f) {
    json j;
    j["dom"] = f.dom->key;
    j["cod"] = f.cod->key;
    j["tables"] = f.tables;
    return j;
}

bool is_typing_error(ErrorKind k) {
    switch (k) {
    case ErrorKind::DuplicateVariable:
    case ErrorKind::UnboundVariable:
    case ErrorKind::VariableBehindLock:
    case ErrorKind::NoLockForOpen:
    case ErrorKind::TypeMismatch:
    case ErrorKind::DiaDisabled:
    case ErrorKind::SharedVariableInLetDia:
        return true;
    default:
        return false;
    }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_check(const Options& o, std::ostream& out) {
    SourceFile f = load_source(o.file);
    Mode mode = resolve_mode(o, f);
    bool ok = true;
    json defs = json::array(), goals = json::array();
    std::ostringstream text;
    auto record = [&](json& arr, const std::string& kind, const std::string& name, auto body) {
        json e;
        e["name"] = name;
        try {
            std::string ty = body();
            e["ok"] = true;
            e["type"] = ty;
            text << kind << " " << name << " : " << ty << "  ok\n";
        } catch (const Error& ex) {
            if (!is_typing_error(ex.kind())) throw;
            ok = false;
            e["ok"] = false;
            e["error"] = ex.describe();
            text << kind << " " << name << "  FAIL " << ex.describe() << "\n";
        }
        arr.push_back(std::move(e));
    };
    for (const auto& d : f.defs)
        record(defs, "def", d.name, [&] { return print(derive(mode, d).ty); });
    for (const auto& g : f.goals)
        record(goals, "goal", g.name, [&] {
            check(mode, g.ctx, g.lhs, g.type);
            check(mode, g.ctx, g.rhs, g.type);
            return print(g.type);
        });
    if (o.json) {
        json j;
        j["file"] = o.file;
        j["mode"] = mode_name(mode);
        j["ok"] = ok;
        j["defs"] = std::move(defs);
        j["goals"] = std::move(goals);
        emit(out, j);
    } else {
        out << text.str() << (ok ? "ok" : "FAIL") << " [" << mode_name(mode) << "]\n";
    }
    return ok ? 0 : 1;
}

int cmd_normalize(const Options& o, std::ostream& out) {
    SourceFile f = load_source(o.file);
    Mode mode = resolve_mode(o, f);
    const TermDecl& d = find_def(f, o);
    Derivation der = derive(mode, d);
    Strategy s;
    if (o.strategy == "outermost") s = Strategy::Outermost;
    else if (o.strategy == "innermost") s = Strategy::Innermost;
    else throw UsageError("unknown strategy '" + o.strategy + "'");
    std::size_t fuel = o.fuel ? o.fuel : default_fuel(d.term);
    Normalized n = normalize(d.term, fuel, s, true);
    Derivation after = check(mode, d.ctx, n.term, der.ty);
    if (o.json) {
        json j;
        j["def"] = d.name;
        j["mode"] = mode_name(mode);
        j["type"] = print(after.ty);
        j["fuel"] = fuel;
        j["steps"] = n.steps;
        json tr = json::array();
        for (const auto& c : n.trace) tr.push_back({{"redex", redex_name(c.tag)}, {"term", print(c.term)}});
        j["trace"] = std::move(tr);
        j["normal"] = print(n.term);
        emit(out, j);
    } else {
        out << "  " << print(d.term) << "\n";
        for (const auto& c : n.trace) out << redex_name(c.tag) << "  " << print(c.term) << "\n";
        out << "normal form after " << n.steps << " steps: " << print(n.term) << " : " << print(after.ty) << "\n";
    }
    return 0;
}

int cmd_derivations(const Options& o, std::ostream& out) {
    SourceFile f = load_source(o.file);
    Mode mode = resolve_mode(o, f);
    const TermDecl& d = find_def(f, o);
    Ty ty = d.type ? *d.type : infer(mode, d.ctx, d.term).ty;
    auto ds = enumerate_derivations(mode, d.ctx, d.term, ty, o.der_bound);
    if (o.json) {
        json j;
        j["def"] = d.name;
        j["mode"] = mode_name(mode);
        j["count"] = ds.size();
        json arr = json::array();
        for (const auto& x : ds) {
            json e;
            e["splits"] = x.split_vector();
            e["tree"] = deriv_json(x);
            arr.push_back(std::move(e));
        }
        j["derivations"] = std::move(arr);
        emit(out, j);
    } else {
        out << ds.size() << " derivation" << (ds.size() == 1 ? "" : "s") << " of " << print(d.ctx) << " |- "
            << print(d.term) << " : " << print(ty) << "\n";
        for (std::size_t i = 0; i < ds.size(); ++i) {
            out << "-- derivation " << i + 1 << ", splits [";
            auto sv = ds[i].split_vector();
            for (std::size_t k = 0; k < sv.size(); ++k) out << (k ? "," : "") << sv[k];
            out << "]\n" << print_derivation(ds[i]);
        }
    }
    return ds.empty() ? 1 : 0;
}

ModelConfig resolve_model(const std::string& name, const SourceFile* f) {
    if (f)
        if (const ModelDecl* m = f->find_model(name)) return m->config;
    for (auto& [n, cfg] : default_models())
        if (n == name) return cfg;
    throw UsageError("unknown model '" + name + "'");
}

std::string model_names(const SourceFile* f) {
    std::string s;
    if (f)
        for (const auto& m : f->models) s += (s.empty() ? "" : ", ") + m.name;
    for (const auto& [n, cfg] : default_models()) s += (s.empty() ? "" : ", ") + n;
    return s;
}

// For a closed function the element of the exponential says little, so the
// beta-normal body is also denoted over a fresh argument.
std::optional<Derivation> applied(Mode mode, const TermDecl& d, const Ty& ty) {
    if (!d.ctx.empty() || !ty.is(TyKind::Fun)) return std::nullopt;
    std::string p = fresh_name("p", all_names(d.term));
    Ctx c = Ctx().with_var(p, ty.lhs());
    Term body = normalize(Term::app(d.term, Term::var(p))).term;
    return check(mode, c, body, ty.rhs());
}

int cmd_denote(const Options& o, std::ostream& out) {
    SourceFile f = load_source(o.file);
    Mode mode = resolve_mode(o, f);
    const TermDecl& d = find_def(f, o);
    if (o.model.empty()) throw UsageError("denote needs --model (one of " + model_names(&f) + ")");
    Model m(resolve_model(o.model, &f));
    Derivation der = derive(mode, d);
    auto app_der = applied(mode, d, der.ty);
    std::optional<Mor> mor, fun;
    if (app_der) fun = denote(m, mode, *app_der);
    try {
        mor = denote(m, mode, der);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::ModelTooLarge || !fun) throw;
    }
    if (o.json) {
        json j;
        j["def"] = d.name;
        j["mode"] = mode_name(mode);
        j["model"] = o.model;
        j["type"] = print(der.ty);
        j["morphism"] = mor ? mor_json(*mor) : json(nullptr);
        if (fun) j["applied"] = {{"term", print(app_der->term)}, {"morphism", mor_json(*fun)}};
        emit(out, j);
    } else {
        out << d.name << " : " << print(der.ty) << " in " << o.model << " (" << model_kind_name(m.kind()) << ")\n";
        if (mor) out << print_mor(*mor);
        else out << "  (exponential too large to build)\n";
        if (fun) out << "applied: " << print(app_der->ctx) << " |- " << print(app_der->term) << "\n" << print_mor(*fun);
    }
    return 0;
}

int cmd_eq(const Options& o, std::ostream& out) {
    SourceFile f = load_source(o.file);
    Mode mode = resolve_mode(o, f);
    const GoalDecl* g = f.find_goal(o.name);
    if (!g) throw UsageError("no goal '" + o.name + "' in " + o.file);
    check(mode, g->ctx, g->lhs, g->type);
    check(mode, g->ctx, g->rhs, g->type);
    EqResult r = def_eq(mode, g->ctx, g->lhs, g->rhs, g->type, o.goal_bound);
    if (o.json) {
        json j;
        j["goal"] = g->name;
        j["mode"] = mode_name(mode);
        j["verdict"] = verdict_name(r.verdict);
        j["states"] = r.states;
        j["lhs_normal"] = print(r.lhs_normal);
        j["rhs_normal"] = print(r.rhs_normal);
        json tr = json::array();
        for (const auto& mv : r.trace) tr.push_back({{"rule", mv.rule}, {"term", print(mv.term)}});
        j["trace"] = std::move(tr);
        emit(out, j);
    } else {
        out << g->name << ": " << verdict_name(r.verdict) << " (" << r.states << " states)\n";
        if (r.verdict == Verdict::Equal)
            for (const auto& mv : r.trace) out << "  " << mv.rule << "  " << print(mv.term) << "\n";
        else
            out << "  lhs normal: " << print(r.lhs_normal) << "\n  rhs normal: " << print(r.rhs_normal) << "\n";
    }
    return r.verdict == Verdict::Equal ? 0 : 1;
}

std::uint64_t env_seed(std::uint64_t fallback) {
    const char* s = std::getenv("FITCHCALC_SEED");
    if (!s || !*s) return fallback;
    char* end = nullptr;
    errno = 0;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (errno || *end || *s == '-') throw UsageError(std::string("FITCHCALC_SEED is not a seed: '") + s + "'");
    return v;
}

int cmd_suite(const Options& o, std::ostream& out) {
    SuiteConfig cfg;
    cfg.name = o.name;
    cfg.mode = flag_mode(o);
    cfg.samples = o.samples;
    cfg.seed = env_seed(o.seed);
    cfg.max_size = o.max_size;
    if (o.suite_bound) cfg.bound = *o.suite_bound;
    cfg.eq_bound = o.eq_bound;
    cfg.workers = o.workers;
    if (!o.model.empty()) cfg.model = resolve_model(o.model, nullptr);
    if (!cfg.mode && cfg.name != "appendix-goals") throw UsageError("suite " + cfg.name + " needs --mode");
    SuiteReport r = run_suite(cfg);
    out << (o.json ? report_json(r) + "\n" : report_text(r));
    return r.ok() ? 0 : 1;
}

int cmd_laws(const Options& o, std::ostream& out) {
    std::optional<SourceFile> f;
    if (!o.file.empty()) f = load_source(o.file);
    std::vector<std::pair<std::string, ModelConfig>> models;
    if (o.model.empty()) models = default_models();
    else models.emplace_back(o.model, resolve_model(o.model, f ? &*f : nullptr));
    bool ok = true;
    json arr = json::array();
    for (const auto& [name, cfg] : models) {
        Model m(cfg);
        LawOutcome lo = check_model_laws(m, o.formers);
        ok = ok && lo.ok();
        if (o.json) {
            arr.push_back({{"model", name},
                           {"objects", lo.objects},
                           {"checks", lo.checks},
                           {"skipped", lo.skipped},
                           {"failures", lo.failures}});
        } else {
            out << name << ": " << lo.checks << " checks over " << lo.objects << " objects, " << lo.skipped
                << " skipped, " << lo.failures.size() << " failed\n";
            for (const auto& s : lo.failures) out << "  FAIL " << s << "\n";
        }
    }
    if (o.json) emit(out, json{{"formers", o.formers}, {"ok", ok}, {"models", arr}});
    return ok ? 0 : 1;
}

int cmd_emit_goals(const Options& o, std::ostream& out) {
    std::optional<Mode> only = flag_mode(o);
    std::map<std::string, std::vector<Goal>> by_mode;
    std::vector<std::string> order;
    for (auto& g : appendix_goals()) {
        if (only && !(g.mode == *only)) continue;
        std::string m = mode_name(g.mode);
        if (!by_mode.count(m)) order.push_back(m);
        by_mode[m].push_back(std::move(g));
    }
    auto render = [&](const std::string& m) {
        std::string s = "mode " + m + "\n\n";
        std::set<std::string> taken;
        for (const auto& g : by_mode[m]) {
            std::string id = goal_ident(g.name);
            for (int k = 2; !taken.insert(id).second; ++k) id = goal_ident(g.name) + "_" + std::to_string(k);
            s += "-- " + g.name + "\n" + print_goal(GoalDecl{id, g.ctx, g.lhs, g.rhs, g.ty, {}}) + "\n";
        }
        return s;
    };
    if (o.out_dir.empty()) {
        for (std::size_t i = 0; i < order.size(); ++i) out << (i ? "\n" : "") << render(order[i]);
        return 0;
    }
    std::filesystem::create_directories(o.out_dir);
    for (const auto& m : order) {
        auto path = std::filesystem::path(o.out_dir) / (m + ".fmlc");
        std::ofstream f(path);
        if (!f) throw UsageError("cannot write " + path.string());
        f << render(m);
        out << path.string() << ": " << by_mode[m].size() << " goals\n";
    }
    return 0;
}

}  // namespace

std::string goal_ident(const std::string& name) {
    static const std::pair<std::string_view, std::string_view> words[] = {
        {"[]", "box"}, {"<>", "dia"}, {"->", "to"}, {"*", "times"}, {"+", "plus"}};
    std::string s;
    auto sep = [&] {
        if (!s.empty() && s.back() != '_') s += '_';
    };
    for (std::size_t i = 0; i < name.size();) {
        bool hit = false;
        for (auto [sym, word] : words)
            if (name.compare(i, sym.size(), sym) == 0) {
                sep();
                s += word;
                s += '_';
                i += sym.size();
                hit = true;
                break;
            }
        if (hit) continue;
        char c = name[i++];
        if (std::isalnum(static_cast<unsigned char>(c))) s += c;
        else sep();
    }
    while (!s.empty() && s.back() == '_') s.pop_back();
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) s.insert(s.begin(), '_');
    return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Checker, normalizer and model evaluator for Fitch-style modal lambda calculi", "fitchcalc"};
    app.require_subcommand(1);
    Options o;

    auto mode_opt = [&](CLI::App* c) {
        c->add_option("--mode", o.mode, "ik, ikd, is4, is4d, ir or ird (overrides the file's mode)");
    };
    auto json_flag = [&](CLI::App* c) { c->add_flag("--json", o.json, "Machine-readable report"); };

    auto* check_c = app.add_subcommand("check", "Type check every definition and goal in a file");
    check_c->add_option("file", o.file)->required();
    mode_opt(check_c);
    json_flag(check_c);

    auto* norm_c = app.add_subcommand("normalize", "Normalize a definition, printing every contraction");
    norm_c->add_option("file", o.file)->required();
    norm_c->add_option("def", o.name)->required();
    mode_opt(norm_c);
    norm_c->add_option("--fuel", o.fuel, "Contraction budget (default 10 * size^2)");
    norm_c->add_option("--strategy", o.strategy, "outermost or innermost");
    json_flag(norm_c);

    auto* der_c = app.add_subcommand("derivations", "Enumerate the derivations of a definition");
    der_c->add_option("file", o.file)->required();
    der_c->add_option("def", o.name)->required();
    mode_opt(der_c);
    der_c->add_option("--bound", o.der_bound, "Give up beyond this many derivations");
    json_flag(der_c);

    auto* den_c = app.add_subcommand("denote", "Print the denotation of a definition in a model");
    den_c->add_option("file", o.file)->required();
    den_c->add_option("def", o.name)->required();
    mode_opt(den_c);
    den_c->add_option("--model", o.model, "Model declared in the file or identity, chain1, chain2, constant1");
    json_flag(den_c);

    auto* eq_c = app.add_subcommand("eq", "Decide a goal by bounded definitional-equality search");
    eq_c->add_option("file", o.file)->required();
    eq_c->add_option("goal", o.name)->required();
    mode_opt(eq_c);
    eq_c->add_option("--bound", o.goal_bound, "Search bound (default 32)");
    json_flag(eq_c);

    auto* suite_c = app.add_subcommand("suite", "Run a property suite over generated terms");
    suite_c->add_option("name", o.name)->required()->check(CLI::IsMember(suite_names()));
    mode_opt(suite_c);
    suite_c->add_option("--samples", o.samples);
    suite_c->add_option("--seed", o.seed, "First seed (FITCHCALC_SEED overrides)");
    suite_c->add_option("--max-size", o.max_size);
    suite_c->add_option("--bound", o.suite_bound, "Derivation enumeration bound (default 64)");
    suite_c->add_option("--eq-bound", o.eq_bound);
    suite_c->add_option("--workers", o.workers, "0 uses every core");
    suite_c->add_option("--model", o.model, "identity, chain1, chain2 or constant1");
    json_flag(suite_c);

    auto* laws_c = app.add_subcommand("laws", "Check the structural laws of the built-in models");
    laws_c->add_option("--model", o.model);
    laws_c->add_option("--file", o.file, "File declaring the model");
    laws_c->add_option("--formers", o.formers, "Type formers per object (default 3)");
    json_flag(laws_c);

    auto* goals_c = app.add_subcommand("emit-goals", "Write the appendix goals as .fmlc files, one per mode");
    goals_c->add_option("--out", o.out_dir, "Directory (stdout when absent)");
    mode_opt(goals_c);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check_c->parsed()) return cmd_check(o, out);
        if (norm_c->parsed()) return cmd_normalize(o, out);
        if (der_c->parsed()) return cmd_derivations(o, out);
        if (den_c->parsed()) return cmd_denote(o, out);
        if (eq_c->parsed()) return cmd_eq(o, out);
        if (suite_c->parsed()) return cmd_suite(o, out);
        if (laws_c->parsed()) return cmd_laws(o, out);
        if (goals_c->parsed()) return cmd_emit_goals(o, out);
    } catch (const UsageError& e) {
        err << "fitchcalc: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "fitchcalc: " << e.describe() << "\n";
        switch (e.kind()) {
        case ErrorKind::ParseError:
        case ErrorKind::ModeUnsupported:
        case ErrorKind::PreconditionViolated:
            return 2;
        default:
            return 1;
        }
    } catch (const std::exception& e) {
        err << "fitchcalc: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace fitch
