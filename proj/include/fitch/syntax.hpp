#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fitch {

// ---------------------------------------------------------------------------
// Types

enum class TyKind { Base, Unit, Empty, Prod, Sum, Fun, Box, Dia };

class Ty {
public:
    static Ty base(std::string name);
    static Ty unit();
    static Ty empty();
    static Ty prod(Ty a, Ty b);
    static Ty sum(Ty a, Ty b);
    static Ty fun(Ty a, Ty b);
    static Ty box(Ty a);
    static Ty dia(Ty a);

    TyKind kind() const { return node_->kind; }
    const std::string& name() const { return node_->name; }
    /// Left operand of a binary former, or the operand of Box/Dia.
    const Ty& lhs() const { return *node_->lhs; }
    const Ty& rhs() const { return *node_->rhs; }
    const Ty& operand() const { return *node_->lhs; }

    bool is(TyKind k) const { return kind() == k; }
    std::size_t size() const;

    /// Reflexive-transitive closure of the immediate-constituent relation.
    bool is_subtype_of(const Ty& other) const;

    friend bool operator==(const Ty& a, const Ty& b);
    friend bool operator!=(const Ty& a, const Ty& b) { return !(a == b); }
    friend bool operator<(const Ty& a, const Ty& b);

private:
    struct Node {
        TyKind kind;
        std::string name;
        std::shared_ptr<const Ty> lhs, rhs;
    };
    explicit Ty(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Ty make(TyKind k, std::string name, const Ty* a, const Ty* b);

    std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Terms

enum class TermKind {
    Var, Lam, App, Unit, Pair, Fst, Snd, Inl, Inr, Case, Abort,
    Shut, Open, Dia, LetDia
};

struct Span {
    int line = 0;
    int column = 0;
};

/// Immutable lambda term. Binder names live in `name()` (Lam, LetDia, first
/// Case branch) and `name2()` (second Case branch). Annotations:
///   Lam/LetDia: type of the bound variable; Inl: right summand;
///   Inr: left summand; Abort: result type.
class Term {
public:
    static Term var(std::string x);
    static Term lam(std::string x, Ty a, Term body);
    static Term app(Term f, Term a);
    static Term unit();
    static Term pair(Term a, Term b);
    static Term fst(Term t);
    static Term snd(Term t);
    static Term inl(Ty other, Term t);
    static Term inr(Ty other, Term t);
    static Term case_of(Term s, std::string x, Term l, std::string y, Term r);
    static Term abort(Ty result, Term t);
    static Term shut(Term t);
    static Term open(Term t);
    static Term dia(Term t);
    static Term let_dia(std::string x, Ty a, Term t, Term body);

    TermKind kind() const { return node_->kind; }
    bool is(TermKind k) const { return kind() == k; }
    const std::string& name() const { return node_->name; }
    const std::string& name2() const { return node_->name2; }
    const Ty& annot() const { return *node_->annot; }
    std::size_t arity() const { return node_->kids.size(); }
    const Term& child(std::size_t i) const { return node_->kids.at(i); }
    const std::vector<Term>& children() const { return node_->kids; }

    std::optional<Span> span() const { return node_->span; }
    Term with_span(Span s) const;

    /// Same node with children replaced (binders and annotations kept).
    Term with_children(std::vector<Term> kids) const;

    std::size_t size() const;

    /// Pointer identity; structural comparison is `alpha_eq`.
    bool same_node(const Term& o) const { return node_ == o.node_; }

private:
    struct Node {
        TermKind kind;
        std::string name, name2;
        std::optional<Ty> annot;
        std::vector<Term> kids;
        std::optional<Span> span;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Term make(Node n);

    std::shared_ptr<const Node> node_;
};

/// Number of variables bound by `t` over child `i`: 0 or 1, with the name in
/// `*bound` when 1.
bool binds_over_child(const Term& t, std::size_t i, std::string* bound = nullptr);

// ---------------------------------------------------------------------------
// Contexts

struct Entry {
    bool lock = false;
    std::string name;
    std::optional<Ty> ty;

    static Entry var(std::string x, Ty a) { return {false, std::move(x), std::move(a)}; }
    static Entry lock_entry() { return {true, {}, std::nullopt}; }

    friend bool operator==(const Entry& a, const Entry& b);
    friend bool operator!=(const Entry& a, const Entry& b) { return !(a == b); }
};

class Ctx {
public:
    Ctx() = default;
    explicit Ctx(std::vector<Entry> entries);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Entry& operator[](std::size_t i) const { return entries_.at(i); }
    const std::vector<Entry>& entries() const { return entries_; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    Ctx with_var(std::string x, Ty a) const;
    Ctx with_lock() const;
    Ctx prefix(std::size_t n) const;
    Ctx suffix(std::size_t from) const;
    Ctx concat(const Ctx& tail) const;

    bool has_var(std::string_view x) const;
    std::optional<std::size_t> index_of(std::string_view x) const;
    bool has_lock() const;
    std::optional<std::size_t> rightmost_lock() const;
    bool has_vars() const;
    std::set<std::string> names() const;

    friend bool operator==(const Ctx& a, const Ctx& b) { return a.entries_ == b.entries_; }
    friend bool operator!=(const Ctx& a, const Ctx& b) { return !(a == b); }

private:
    std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Modes

enum class Calculus { IK, IS4, IR };

struct Mode {
    Calculus calculus = Calculus::IK;
    bool dia_enabled = false;

    static Mode ik() { return {Calculus::IK, false}; }
    static Mode ik_dia() { return {Calculus::IK, true}; }
    static Mode is4() { return {Calculus::IS4, false}; }
    static Mode is4_dia() { return {Calculus::IS4, true}; }
    static Mode ir() { return {Calculus::IR, false}; }
    static Mode ir_dia() { return {Calculus::IR, true}; }

    friend bool operator==(const Mode&, const Mode&) = default;
};

/// Accepts ik, ikd, is4, is4d, ir, ird (and the long forms ik-dia etc.).
std::optional<Mode> parse_mode(std::string_view s);
std::string mode_name(Mode m);

// ---------------------------------------------------------------------------
// Operations

std::set<std::string> free_vars(const Term& t);
bool occurs_free(const Term& t, std::string_view x);

/// Smallest `base_n` (or `base` itself) not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

/// Capture-avoiding substitution t[u/x].
Term subst(const Term& t, const std::string& x, const Term& u);

bool alpha_eq(const Term& a, const Term& b);

/// Every variable name occurring in `t`, free or bound.
std::set<std::string> all_names(const Term& t);

/// Sequent-to-formula translation, consuming the context left to right.
Ty formula_translation(const Ctx& ctx, const Ty& ty);

}  // namespace fitch
