#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fitch/model_config.hpp"
#include "fitch/syntax.hpp"

namespace fitch {

// Concrete syntax (ASCII):
//   types   A -> B (right assoc) | A + B | A * B (left assoc, * tighter) |
//           []A | <>A | 1 | 0 | Name | (A)
//   terms   \x:T. t | let dia x:T = t in u | case t of inl x -> u | inr y -> v |
//           t u | shut t | open t | dia t | fst t | snd t |
//           inl[T] t | inr[T] t | abort[T] t | () | (t, u) | x | (t)
//   ctx     x : T, #, y : T      (# is a lock)
//
// Parse failures throw fitch::Error(ParseError) with the position and the
// set of tokens that would have been accepted.

Ty parse_type(std::string_view src);
Term parse_term(std::string_view src);
Ctx parse_ctx(std::string_view src);

std::string print(const Ty& ty);
std::string print(const Term& t);
std::string print(const Ctx& ctx);

struct TermDecl {
    std::string name;
    Ctx ctx;
    Term term;
    std::optional<Ty> type;
    Span span;
};

struct GoalDecl {
    std::string name;
    Ctx ctx;
    Term lhs;
    Term rhs;
    Ty type;
    Span span;
};

struct ModelDecl {
    std::string name;
    ModelConfig config;
    Span span;
};

/// A parsed `.fmlc` file.
struct SourceFile {
    std::optional<Mode> mode;
    std::vector<TermDecl> defs;
    std::vector<GoalDecl> goals;
    std::vector<ModelDecl> models;

    const TermDecl* find_def(std::string_view name) const;
    const GoalDecl* find_goal(std::string_view name) const;
    const ModelDecl* find_model(std::string_view name) const;
};

SourceFile parse_source(std::string_view src);
SourceFile load_source(const std::string& path);

std::string print_model(const std::string& name, const ModelConfig& cfg);
std::string print_goal(const GoalDecl& g);
std::string print_def(const TermDecl& d);

}  // namespace fitch
