#include "fitch/model_config.hpp"

#include "fitch/error.hpp"

namespace fitch {

const char* model_kind_name(ModelKind k) {
    switch (k) {
    case ModelKind::Identity: return "identity";
    case ModelKind::Chain: return "chain";
    case ModelKind::ConstantComonad: return "constant";
    }
    return "?";
}

void ModelConfig::validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorKind::PreconditionViolated, m); };
    if (stages < 0) bad("stage count must be non-negative");
    if (kind == ModelKind::Identity && stages != 0) bad("the identity model has a single stage");
    const std::size_t n = static_cast<std::size_t>(stages) + 1;
    for (const auto& [name, b] : bases) {
        if (b.sizes.size() != n)
            bad("base '" + name + "' needs " + std::to_string(n) + " sizes, got " +
                std::to_string(b.sizes.size()));
        for (int s : b.sizes)
            if (s < 0) bad("base '" + name + "' has a negative size");
        if (b.trans.empty()) {
            // omitted tables mean "everything goes to element 0"
            for (std::size_t k = 0; k + 1 < n; ++k)
                if (b.sizes[k] > 0 && b.sizes[k + 1] == 0)
                    bad("base '" + name + "': no default transition out of stage " + std::to_string(k));
            continue;
        }
        if (b.trans.size() != n - 1)
            bad("base '" + name + "' needs " + std::to_string(n - 1) + " transition tables");
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const auto& t = b.trans[k];
            if (t.size() != static_cast<std::size_t>(b.sizes[k]))
                bad("base '" + name + "': transition " + std::to_string(k) + " has " +
                    std::to_string(t.size()) + " entries, stage has " + std::to_string(b.sizes[k]));
            for (int v : t)
                if (v < 0 || v >= b.sizes[k + 1])
                    bad("base '" + name + "': transition " + std::to_string(k) + " maps outside stage " +
                        std::to_string(k + 1));
        }
    }
}

}  // namespace fitch
