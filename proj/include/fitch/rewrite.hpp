#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fitch/syntax.hpp"
#include "fitch/typecheck.hpp"

namespace fitch {

// The commuting conversions beyond CCOpenCase/CCOpenAbort push every
// eliminator (application, projections, case, abort) through case and abort,
// which the subformula property needs once sums are present.
enum class RedexTag {
    BetaFun, BetaPair1, BetaPair2, BetaCase1, BetaCase2, BetaBox, BetaDia,
    CCOpenCase, CCOpenAbort,
    CCAppCase, CCAppAbort, CCFstCase, CCFstAbort, CCSndCase, CCSndAbort,
    CCCaseCase, CCCaseAbort, CCAbortCase, CCAbortAbort,
};

const char* redex_name(RedexTag t);

struct Contraction {
    Term term;
    RedexTag tag;
};

/// Contracts `t` itself if it is a redex.
std::optional<Contraction> contract(const Term& t);

/// One leftmost-outermost contraction; absent iff `t` is normal.
std::optional<Contraction> step(const Term& t);
/// One leftmost-innermost contraction.
std::optional<Contraction> step_innermost(const Term& t);

bool is_normal(const Term& t);

enum class Strategy { Outermost, Innermost };

struct Normalized {
    Term term;
    std::size_t steps = 0;
    std::vector<Contraction> trace;  // filled only when requested
};

/// 10 * size^2
std::size_t default_fuel(const Term& t);

/// Throws FuelExhausted once `fuel` contractions have been spent without
/// reaching a normal form.
Normalized normalize(const Term& t, std::size_t fuel, Strategy s = Strategy::Outermost, bool keep_trace = false);
Normalized normalize(const Term& t);

// ---------------------------------------------------------------------------
// Positions

using Path = std::vector<std::size_t>;

const Term& subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& u);

/// Renames every binder so that binders are pairwise distinct and avoid
/// `avoid`; free variables are untouched.
Term freshen_binders(const Term& t, const std::set<std::string>& avoid);

/// Key identifying the alpha-equivalence class of `t`.
std::string alpha_key(const Term& t);

// ---------------------------------------------------------------------------
// Eta and associativity

/// Contracts the first type-directed eta redex (preorder): shut (open t) to t
/// when t has the box type in the ambient context, and
/// let dia x = t in dia x to t. The result is re-checked.
std::optional<Derivation> eta_step(Mode mode, const Derivation& d);

struct EqMove {
    std::string rule;
    Term term;
};

/// All single equational moves from `t` (eta reductions, associativity in
/// both directions, extrusion of diamond-typed subterms, eta expansion of
/// box variables), each followed by beta/cc normalization and filtered to
/// those that still check against `ty`.
std::vector<EqMove> equational_moves(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty);

/// Only the raw eta/associativity instances, without normalization, for
/// soundness testing.
std::vector<EqMove> eta_assoc_instances(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty);

enum class Verdict { Equal, Distinct, Unknown };
const char* verdict_name(Verdict v);

struct EqResult {
    Verdict verdict = Verdict::Unknown;
    /// For Equal: the chain of terms from lhs to rhs with the rule that
    /// produced each (suffix "^-1" marks a move applied to the rhs side).
    std::vector<EqMove> trace;
    Term lhs_normal = Term::unit();
    Term rhs_normal = Term::unit();
    std::size_t states = 0;
};

/// Bounded search for a definitional equality. Equal carries a trace;
/// Distinct is reported only when every state reachable by the move set
/// was explored without a meeting point; otherwise Unknown.
EqResult def_eq(Mode mode, const Ctx& ctx, const Term& lhs, const Term& rhs, const Ty& ty,
                std::size_t search_bound, std::size_t state_cap = 4000);

}  // namespace fitch
