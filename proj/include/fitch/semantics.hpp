#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fitch/model_config.hpp"
#include "fitch/syntax.hpp"
#include "fitch/typecheck.hpp"

namespace fitch {

// Every built-in model lives in the category of functors from the chain
// 0 < 1 < ... < N into finite sets (N = 0 gives plain finite sets). An object
// is a carrier per stage plus transition maps; a morphism is one table per
// stage. The models differ only in how Box and Dia reindex stages:
//   identity  Box X = Dia X = X
//   chain     (Dia X)_k = X_{k-1}, empty at 0;  (Box X)_k = X_{k+1}, 1 at N
//   constant  (Dia X)_k = X_N;                  (Box X)_k = X_0

enum class ObjKind { Base, Unit, Empty, Prod, Sum, Exp, Box, Dia };

struct ObjData;
using Obj = std::shared_ptr<const ObjData>;

struct ObjData {
    std::string key;
    ObjKind kind = ObjKind::Unit;
    std::vector<int> sizes;               // per stage
    std::vector<std::vector<int>> trans;  // trans[k] : stage k -> stage k+1
    Obj a, b;                             // components / operand

    // Exponentials: an element of stage k is a natural family
    // (f_j)_{j >= k}, stored as its stage-k table plus the index of the
    // restricted family one stage up.
    struct Family {
        std::vector<int> table;
        int tail = -1;
    };
    std::vector<std::vector<Family>> fams;
    std::vector<std::map<std::pair<int, std::vector<int>>, int>> fam_index;

    int stages() const { return static_cast<int>(sizes.size()); }
    int size(int k) const { return sizes[static_cast<std::size_t>(k)]; }
    int transport(int x, int from, int to) const;
    bool empty_everywhere() const;
    std::size_t total_size() const;
};

struct Mor {
    Obj dom, cod;
    std::vector<std::vector<int>> tables;  // tables[k][x] for x in dom_k

    bool is_natural() const;
    int at(int k, int x) const { return tables[static_cast<std::size_t>(k)][static_cast<std::size_t>(x)]; }
};

/// Throws ShapeMismatch unless the morphisms share domain and codomain.
bool mor_eq(const Mor& f, const Mor& g);

class Model {
public:
    /// Carriers above this many elements in one stage raise ModelTooLarge.
    static constexpr std::size_t kMaxCarrier = 4096;

    explicit Model(ModelConfig cfg);

    const ModelConfig& config() const { return cfg_; }
    ModelKind kind() const { return cfg_.kind; }
    int last_stage() const { return last_; }
    int stage_count() const { return last_ + 1; }

    bool supports(Mode m) const;
    bool has_monad() const { return kind() != ModelKind::Chain; }
    bool has_point() const { return kind() != ModelKind::ConstantComonad; }

    // Objects
    Obj base(const std::string& name) const;
    Obj unit() const;
    Obj empty() const;
    Obj prod(const Obj& a, const Obj& b) const;
    Obj sum(const Obj& a, const Obj& b) const;
    Obj exp(const Obj& a, const Obj& b) const;  // b^a
    Obj box(const Obj& a) const;
    Obj dia(const Obj& a) const;

    /// Stage of X whose carrier is stage k of Dia X (-1 if empty there), and
    /// likewise for Box (-1 means the terminal set).
    int dia_source(int k) const;
    int box_source(int k) const;

    // Cartesian closed structure
    Mor id(const Obj& x) const;
    Mor compose(const Mor& g, const Mor& f) const;  // g . f
    Mor bang(const Obj& x) const;
    Mor absurd(const Obj& x) const;
    Mor fst(const Obj& a, const Obj& b) const;
    Mor snd(const Obj& a, const Obj& b) const;
    Mor pair(const Mor& f, const Mor& g) const;
    Mor prod_map(const Mor& f, const Mor& g) const;
    Mor inl(const Obj& a, const Obj& b) const;
    Mor inr(const Obj& a, const Obj& b) const;
    Mor copair(const Mor& f, const Mor& g) const;
    Mor curry(const Mor& f) const;             // f : X x A -> B  to  X -> B^A
    Mor eval(const Obj& a, const Obj& b) const;  // B^A x A -> B

    // Modal structure
    Mor box_map(const Mor& f) const;
    Mor dia_map(const Mor& f) const;
    Mor transpose(const Mor& g) const;    // Dia X -> Y  to  X -> Box Y
    Mor untranspose(const Mor& f) const;  // X -> Box Y  to  Dia X -> Y
    Mor unit_m(const Obj& x) const;       // X -> Box Dia X
    Mor counit_m(const Obj& y) const;     // Dia Box Y -> Y

    // Monad on Dia (identity and constant models)
    Mor monad_unit(const Obj& x) const;  // X -> Dia X
    Mor monad_mult(const Obj& x) const;  // Dia Dia X -> Dia X
    // Comonad on Box derived from the monad by the adjunction
    Mor comonad_counit(const Obj& x) const;  // Box X -> X
    Mor comonad_mult(const Obj& x) const;    // Box X -> Box Box X

    // Point (identity and chain models)
    Mor point_r(const Obj& x) const;  // X -> Box X
    Mor point_q(const Obj& x) const;  // Dia X -> X

    /// Builds a morphism from a stage-wise element function.
    template <class F>
    Mor tabulate(const Obj& dom, const Obj& cod, F f) const {
        Mor m{dom, cod, {}};
        m.tables.resize(static_cast<std::size_t>(stage_count()));
        for (int k = 0; k < stage_count(); ++k) {
            auto& t = m.tables[static_cast<std::size_t>(k)];
            t.resize(static_cast<std::size_t>(dom->size(k)));
            for (int x = 0; x < dom->size(k); ++x) t[static_cast<std::size_t>(x)] = f(k, x);
        }
        return checked(std::move(m));
    }

private:
    Obj intern(ObjData d) const;
    Mor checked(Mor m) const;
    void build_exp(ObjData& d) const;
    int exp_lookup(const Obj& e, int stage, int tail, const std::vector<int>& table) const;

    ModelConfig cfg_;
    int last_ = 0;
    mutable std::mutex mu_;
    mutable std::map<std::string, Obj> cache_;
};

// ---------------------------------------------------------------------------
// Denotation

Obj denote_type(const Model& m, const Ty& ty);
Obj denote_ctx(const Model& m, const Ctx& ctx);

/// [[d]] : [[ctx]] -> [[ty]]. Throws ModeUnsupported when the model does not
/// interpret the mode.
Mor denote(const Model& m, Mode mode, const Derivation& d);

/// l_{tail} : [[head, tail]] -> Dia [[head]]   (needs the monad)
Mor lock_repl_nat(const Model& m, const Ctx& head, const Ctx& tail);
/// w_{tail} : [[head, tail]] -> [[head]]       (needs the point)
Mor weakening_nat(const Model& m, const Ctx& head, const Ctx& tail);

/// For a closed derivation: the chosen element of [[ty]] at every stage.
std::vector<int> eval_closed(const Model& m, Mode mode, const Derivation& d);

/// Stage-wise tables, one line per stage.
std::string print_mor(const Mor& f);

// ---------------------------------------------------------------------------
// Structural laws

/// Objects denoted by types over the configured base types, 1 and 0 with at
/// most `formers` type formers, deduplicated. Objects too large to build are
/// counted in `skipped`.
std::vector<Obj> denotable_objects(const Model& m, int formers, std::size_t* skipped = nullptr);

struct LawOutcome {
    std::size_t objects = 0;
    std::size_t checks = 0;
    std::size_t skipped = 0;
    std::vector<std::string> failures;  // "law at object"
    bool ok() const { return failures.empty(); }
};

/// Adjunction bijection and triangle identities everywhere; monad laws and
/// idempotence where there is a monad; Box r = r and q = Dia q where there is
/// a point; Dia preserving binary sums and the initial object.
LawOutcome check_model_laws(const Model& m, int formers);

}  // namespace fitch
