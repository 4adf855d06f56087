#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "fitch/syntax.hpp"

namespace fitch {

enum class ErrorKind {
    // surface
    ParseError,
    DuplicateVariable,
    // typecheck
    UnboundVariable,
    VariableBehindLock,
    NoLockForOpen,
    TypeMismatch,
    DiaDisabled,
    SharedVariableInLetDia,
    BoundExceeded,
    // rewrite
    FuelExhausted,
    IllTyped,
    // semantics
    UnknownBaseType,
    ModeUnsupported,
    ShapeMismatch,
    ModelTooLarge,
    // metatheory
    AxiomUnavailableInMode,
    NameClash,
    ContextMismatch,
    NotALock,
    VariableIsFree,
    PreconditionViolated,
    NotNormal,
    GenerationExhausted,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::optional<Span> span = std::nullopt)
        : std::runtime_error(message), kind_(kind), span_(span) {}

    ErrorKind kind() const { return kind_; }
    std::optional<Span> span() const { return span_; }

    /// "line:col: Kind: message" when a span is known.
    std::string describe() const;

private:
    ErrorKind kind_;
    std::optional<Span> span_;
};

}  // namespace fitch
