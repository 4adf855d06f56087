#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fitch/semantics.hpp"
#include "fitch/syntax.hpp"
#include "fitch/typecheck.hpp"

namespace fitch {

// ---------------------------------------------------------------------------
// Axiom witnesses

enum class Axiom { K, T, Four, R, EtaM, EpsM, Mono };

const char* axiom_name(Axiom a);
std::optional<Axiom> parse_axiom(std::string_view s);
std::vector<Axiom> all_axioms();

struct Judgment {
    Ctx ctx;
    Term term = Term::unit();
    Ty ty = Ty::unit();
};

/// The witness term of an axiom. Mono takes the closed function `f : A -> B`
/// (identity on A when absent). Throws AxiomUnavailableInMode.
Judgment axiom_term(Axiom a, Mode mode, const std::optional<Term>& f = std::nullopt);

// ---------------------------------------------------------------------------
// Lemmas as derivation transformations. Each rebuilds the tree node by node;
// none of them calls the checker.

/// x:ty inserted at position `at` (0..|ctx|).  NameClash if x is bound.
Derivation weaken_var(Mode mode, const Derivation& d, std::size_t at, const std::string& x, const Ty& ty);

/// Gamma, ctx |- t : A from ctx |- t : A.  NameClash on shared names.
Derivation left_weaken(Mode mode, const Derivation& d, const Ctx& prefix);

/// IR only: a lock inserted at position `at`.
Derivation lock_weaken(Mode mode, const Derivation& d, std::size_t at);

/// IS4 only: the lock at `lock_at` replaced by `replacement`.
Derivation lock_replace(Mode mode, const Derivation& d, std::size_t lock_at, const Ctx& replacement);

/// Drops ctx[from, from+count). VariableIsFree if a dropped variable is free
/// in the term; dropping locks needs IS4.
Derivation strengthen(Mode mode, const Derivation& d, std::size_t from, std::size_t count);

/// From G, x:A, G' |- t : B (x at `at`) and G |- u : A, a derivation of
/// G, G' |- t[u/x] : B.  ContextMismatch when the contexts do not line up.
Derivation substitute_deriv(Mode mode, const Derivation& d, std::size_t at, const Derivation& u);

// ---------------------------------------------------------------------------
// Structural checks

struct CheckOutcome {
    bool ok = true;
    std::string detail;
};

/// Context without variables and a normal term; passes iff the root is the
/// introduction form of the type. PreconditionViolated otherwise.
CheckOutcome canonicity_check(const Derivation& d);

struct SubformulaViolation {
    Term term;
    Ty ty;
};

struct SubformulaOutcome {
    bool holds = true;
    std::vector<SubformulaViolation> violations;  // preorder
};

/// NotNormal unless the term is beta/cc normal.
SubformulaOutcome subformula_check(const Derivation& d);

struct CoherenceOutcome {
    bool ok = true;
    std::size_t derivations = 0;
    std::string detail;
};

CoherenceOutcome coherence_check(const Model& m, Mode mode, const Ctx& ctx, const Term& t, const Ty& ty,
                                 std::size_t bound);

// ---------------------------------------------------------------------------
// Random well-typed terms

struct GenConfig {
    Mode mode;
    std::size_t max_size = 12;
    std::vector<std::string> base_types{"A", "B"};
    std::uint64_t seed = 1;
    double redex_bias = 0.35;
    std::size_t retries = 200;
};

struct Generated {
    Ctx ctx;
    Term term = Term::unit();
    Ty ty = Ty::unit();
    Derivation deriv;
};

/// Deterministic in cfg. Throws GenerationExhausted after cfg.retries failed
/// attempts.
Generated gen_typed_term(const GenConfig& cfg);

/// Closed variant: empty context (locks allowed when `locks`).
Generated gen_closed_term(const GenConfig& cfg, bool locks);

// ---------------------------------------------------------------------------
// Term model

/// [[G]] as a type: 1, [[G]] x A, <>[[G]].
Ty ctx_type(const Ctx& ctx);

/// G |- c_G : [[G]].
Term context_term(const Ctx& ctx);

/// Term-model action of the modalities on a morphism x:A |- t : B.
Term box_map_term(const std::string& x, const Term& t);
Term dia_map_term(const std::string& x, const Ty& a, const Term& t);

/// Composition u . t of term-model morphisms over the variable x.
Term compose_terms(const std::string& x, const Term& u, const Term& t);

/// x:[[G, tail]] |- l : <>[[G]] (IS4) and x:[[G, tail]] |- w : [[G]] (IR).
Term lock_repl_term(const std::string& x, const Ctx& head, const Ctx& tail);
Term weakening_term(const std::string& x, const Ctx& head, const Ctx& tail);

/// x:[[ctx]] |- [[d]] : ty in the term model.
Term term_model_denote(Mode mode, const std::string& x, const Derivation& d);

struct Goal {
    std::string name;
    Mode mode;
    Ctx ctx;
    Term lhs = Term::unit();
    Term rhs = Term::unit();
    Ty ty = Ty::unit();
};

/// Instances of the term-model equations: functor laws, naturality,
/// triangle identities, comonad laws and the context-term lemmas.
std::vector<Goal> appendix_goals();

}  // namespace fitch
