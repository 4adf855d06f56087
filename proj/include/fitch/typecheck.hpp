#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fitch/syntax.hpp"

namespace fitch {

enum class Rule { Var, Lam, App, Unit, Pair, Fst, Snd, Inl, Inr, Case, Abort, Shut, Open, Dia, LetDia };

const char* rule_name(Rule r);
Rule rule_for(TermKind k);

/// A typing tree. `split` is a prefix length k into ctx:
///   Var          index of the binding
///   Open, Dia    premise context is ctx[0..k)
///   Case, Abort  scrutinee context is ctx[0..k); branches see
///                ctx[0..k), x:A, ctx[k..]
/// When a binder name is already taken in the context the premise uses a
/// fresh name, so a child's term may be a renaming of the subterm.
struct Derivation {
    Rule rule = Rule::Unit;
    Ctx ctx;
    Term term = Term::unit();
    Ty ty = Ty::unit();
    std::optional<std::size_t> split;
    std::vector<Derivation> children;

    /// Preorder list of split choices (nodes without a split contribute
    /// nothing); two derivations of one judgment differ iff these differ.
    std::vector<std::size_t> split_vector() const;
    std::size_t node_count() const;
};

/// Name used for a binder `x` over `body` when extending `ctx`.
std::string binder_name(const Ctx& ctx, const std::string& x, const Term& body);

struct Inferred {
    Ty ty;
    Derivation deriv;
};

Inferred infer(Mode mode, const Ctx& ctx, const Term& t);
Derivation check(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty);

/// Every derivation of the judgment, differing in split choices. Throws
/// BoundExceeded if there are more than `bound`.
std::vector<Derivation> enumerate_derivations(Mode mode, const Ctx& ctx, const Term& t, const Ty& ty,
                                              std::size_t bound);

/// Node-by-node re-verification, independent of the inference policies.
/// Returns an empty string when valid, otherwise a description of the
/// first bad node.
std::string validation_error(Mode mode, const Derivation& d);
bool is_valid(Mode mode, const Derivation& d);

/// Indented rule tree, one node per line.
std::string print_derivation(const Derivation& d);

}  // namespace fitch
