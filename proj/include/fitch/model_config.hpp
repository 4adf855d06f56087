#pragma once

#include <map>
#include <string>
#include <vector>

namespace fitch {

enum class ModelKind { Identity, Chain, ConstantComonad };

/// Carrier of one base type: a set per stage plus the transition maps
/// stage k -> stage k+1 as index tables.
struct BaseInterp {
    std::vector<int> sizes;
    std::vector<std::vector<int>> trans;
};

struct ModelConfig {
    ModelKind kind = ModelKind::Identity;
    /// Last stage index N; the identity model always uses 0.
    int stages = 0;
    std::map<std::string, BaseInterp> bases;

    /// Throws fitch::Error(PreconditionViolated) if sizes/tables are not
    /// type-correct for the declared kind and stage count.
    void validate() const;
};

const char* model_kind_name(ModelKind k);

}  // namespace fitch
