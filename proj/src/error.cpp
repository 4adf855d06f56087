#include "fitch/error.hpp"

namespace fitch {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateVariable: return "DuplicateVariable";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::VariableBehindLock: return "VariableBehindLock";
    case ErrorKind::NoLockForOpen: return "NoLockForOpen";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::DiaDisabled: return "DiaDisabled";
    case ErrorKind::SharedVariableInLetDia: return "SharedVariableInLetDia";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::FuelExhausted: return "FuelExhausted";
    case ErrorKind::IllTyped: return "IllTyped";
    case ErrorKind::UnknownBaseType: return "UnknownBaseType";
    case ErrorKind::ModeUnsupported: return "ModeUnsupported";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ModelTooLarge: return "ModelTooLarge";
    case ErrorKind::AxiomUnavailableInMode: return "AxiomUnavailableInMode";
    case ErrorKind::NameClash: return "NameClash";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::NotALock: return "NotALock";
    case ErrorKind::VariableIsFree: return "VariableIsFree";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::GenerationExhausted: return "GenerationExhausted";
    }
    return "Error";
}

std::string Error::describe() const {
    std::string out;
    if (span_) out = std::to_string(span_->line) + ":" + std::to_string(span_->column) + ": ";
    out += error_kind_name(kind_);
    out += ": ";
    out += what();
    return out;
}

}  // namespace fitch
