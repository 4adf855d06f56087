#include <cctype>
#include <sstream>

#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/surface.hpp"

namespace fitch {

const char* axiom_name(Axiom a) {
    switch (a) {
    case Axiom::K: return "K";
    case Axiom::T: return "T";
    case Axiom::Four: return "Four";
    case Axiom::R: return "R";
    case Axiom::EtaM: return "EtaM";
    case Axiom::EpsM: return "EpsM";
    case Axiom::Mono: return "Mono";
    }
    return "?";
}

std::vector<Axiom> all_axioms() {
    return {Axiom::K, Axiom::T, Axiom::Four, Axiom::R, Axiom::EtaM, Axiom::EpsM, Axiom::Mono};
}

std::optional<Axiom> parse_axiom(std::string_view s) {
    for (Axiom a : all_axioms()) {
        std::string n = axiom_name(a);
        if (s.size() != n.size()) continue;
        bool same = true;
        for (std::size_t i = 0; i < n.size(); ++i)
            if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(n[i])))
                same = false;
        if (same) return a;
    }
    if (s == "4") return Axiom::Four;
    return std::nullopt;
}

Judgment axiom_term(Axiom a, Mode mode, const std::optional<Term>& f) {
    auto unavailable = [&](const char* why) {
        return Error(ErrorKind::AxiomUnavailableInMode,
                     std::string(axiom_name(a)) + " is not available in " + mode_name(mode) + ": " + why);
    };
    Judgment j;
    switch (a) {
    case Axiom::K:
        j = {parse_ctx("f : [](A -> B), x : []A"), parse_term("shut ((open f) (open x))"), parse_type("[]B")};
        break;
    case Axiom::T:
        if (mode.calculus != Calculus::IS4) throw unavailable("it needs the IS4 open rule");
        j = {parse_ctx("x : []A"), parse_term("open x"), parse_type("A")};
        break;
    case Axiom::Four:
        if (mode.calculus != Calculus::IS4) throw unavailable("it needs the IS4 open rule");
        j = {parse_ctx("x : []A"), parse_term("shut (shut (open x))"), parse_type("[][]A")};
        break;
    case Axiom::R:
        if (mode.calculus != Calculus::IR) throw unavailable("it needs variables behind locks");
        j = {parse_ctx("x : A"), parse_term("shut x"), parse_type("[]A")};
        break;
    case Axiom::EtaM:
        if (!mode.dia_enabled) throw unavailable("<> is disabled");
        j = {parse_ctx("x : A"), parse_term("shut (dia x)"), parse_type("[]<>A")};
        break;
    case Axiom::EpsM:
        if (!mode.dia_enabled) throw unavailable("<> is disabled");
        j = {parse_ctx("x : <>[]A"), parse_term("let dia y:[]A = x in open y"), parse_type("A")};
        break;
    case Axiom::Mono: {
        if (!mode.dia_enabled) throw unavailable("<> is disabled");
        Term fn = f ? *f : parse_term("\\z:A. z");
        if (!free_vars(fn).empty())
            throw Error(ErrorKind::PreconditionViolated, "monotonicity needs a closed function, got '" + print(fn) + "'");
        Ty ft = infer(mode, Ctx{}, fn).ty;
        if (!ft.is(TyKind::Fun))
            throw Error(ErrorKind::TypeMismatch, "monotonicity needs a function, got " + print(ft));
        std::set<std::string> avoid = all_names(fn);
        avoid.insert("x");
        std::string y = fresh_name("y", avoid);
        j.ctx = Ctx{}.with_var("x", Ty::dia(ft.lhs()));
        j.term = Term::let_dia(y, ft.lhs(), Term::var("x"), Term::dia(Term::app(fn, Term::var(y))));
        j.ty = Ty::dia(ft.rhs());
        break;
    }
    }
    check(mode, j.ctx, j.term, j.ty);
    return j;
}

// ---------------------------------------------------------------------------

CheckOutcome canonicity_check(const Derivation& d) {
    if (d.ctx.has_vars())
        throw Error(ErrorKind::PreconditionViolated, "canonicity needs a context without variables, got [" +
                                                         print(d.ctx) + "]");
    if (!is_normal(d.term))
        throw Error(ErrorKind::PreconditionViolated, "canonicity needs a normal term, got '" + print(d.term) + "'");
    TermKind k = d.term.kind();
    bool ok = false;
    switch (d.ty.kind()) {
    case TyKind::Fun: ok = k == TermKind::Lam; break;
    case TyKind::Prod: ok = k == TermKind::Pair; break;
    case TyKind::Unit: ok = k == TermKind::Unit; break;
    case TyKind::Sum: ok = k == TermKind::Inl || k == TermKind::Inr; break;
    case TyKind::Box: ok = k == TermKind::Shut; break;
    case TyKind::Dia: ok = k == TermKind::Dia; break;
    case TyKind::Base:
    case TyKind::Empty: ok = false; break;
    }
    CheckOutcome out;
    out.ok = ok;
    if (!ok) out.detail = "'" + print(d.term) + "' : " + print(d.ty) + " is not headed by an introduction form";
    return out;
}

namespace {
void subformula_walk(const Derivation& d, const std::vector<Ty>& allowed, SubformulaOutcome& out) {
    bool ok = false;
    for (const auto& a : allowed)
        if (d.ty.is_subtype_of(a)) ok = true;
    if (!ok) {
        out.holds = false;
        out.violations.push_back({d.term, d.ty});
    }
    for (const auto& c : d.children) subformula_walk(c, allowed, out);
}
}  // namespace

SubformulaOutcome subformula_check(const Derivation& d) {
    if (!is_normal(d.term)) throw Error(ErrorKind::NotNormal, "'" + print(d.term) + "' is not normal");
    std::vector<Ty> allowed{d.ty};
    for (const auto& e : d.ctx)
        if (!e.lock) allowed.push_back(*e.ty);
    SubformulaOutcome out;
    subformula_walk(d, allowed, out);
    return out;
}

CoherenceOutcome coherence_check(const Model& m, Mode mode, const Ctx& ctx, const Term& t, const Ty& ty,
                                 std::size_t bound) {
    if (!m.supports(mode))
        throw Error(ErrorKind::ModeUnsupported, std::string("the ") + model_kind_name(m.kind()) +
                                                    " model does not interpret " + mode_name(mode));
    auto ds = enumerate_derivations(mode, ctx, t, ty, bound);
    CoherenceOutcome out;
    out.derivations = ds.size();
    Mor first = denote(m, mode, ds.front());
    for (std::size_t i = 1; i < ds.size(); ++i) {
        if (mor_eq(denote(m, mode, ds[i]), first)) continue;
        std::ostringstream os;
        os << "derivations with splits";
        for (auto s : ds.front().split_vector()) os << " " << s;
        os << " and";
        for (auto s : ds[i].split_vector()) os << " " << s;
        os << " denote different morphisms";
        out.ok = false;
        out.detail = os.str();
        break;
    }
    return out;
}

}  // namespace fitch
