#include <sstream>

#include "doctest.h"
#include "fitch/cli.hpp"
#include "json.hpp"

using namespace fitch;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string corpus(const std::string& rel) { return std::string(FITCH_CORPUS_DIR) + "/" + rel; }

}  // namespace

TEST_CASE("cli check exit codes") {
    CHECK(run({"check", corpus("axioms/k.fmlc"), "--mode", "ik"}).code == 0);
    CHECK(run({"check", corpus("axioms/t.fmlc"), "--mode", "ik"}).code == 1);
    CHECK(run({"check", corpus("axioms/t.fmlc")}).code == 0);
    CHECK(run({"check", corpus("axioms/four.fmlc"), "--mode", "ik"}).code == 1);
    CHECK(run({"check", corpus("axioms/r.fmlc"), "--mode", "is4"}).code == 1);
    CHECK(run({"check", corpus("axioms/r.fmlc")}).code == 0);
    for (const char* f : {"etam", "epsm", "mono"}) CHECK(run({"check", corpus(std::string("axioms/") + f + ".fmlc")}).code == 0);
    CHECK(run({"check", corpus("axioms/mono_open.fmlc")}).code == 1);
}

TEST_CASE("cli usage and parse errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"check", corpus("axioms/k.fmlc"), "--mode", "s5"}).code == 2);
    CHECK(run({"check", corpus("does-not-exist.fmlc")}).code == 2);
    CHECK(run({"normalize", corpus("axioms/k.fmlc"), "missing"}).code == 2);
    CHECK(run({"suite", "subformula", "--mode", "ikd", "--samples", "5"}).code == 2);
    CHECK(run({"suite", "confluence", "--samples", "5"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli normalize prints one contraction per line") {
    auto r = run({"normalize", corpus("examples/composites.fmlc"), "open_shut"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("BetaBox") != std::string::npos);
    auto j = nlohmann::json::parse(run({"normalize", corpus("examples/composites.fmlc"), "open_shut", "--json"}).out);
    CHECK(j["steps"] == j["trace"].size());
    CHECK(j["normal"] == "\\x:[]A. open x");
}

TEST_CASE("cli derivations and denote") {
    auto j = nlohmann::json::parse(run({"derivations", corpus("axioms/four.fmlc"), "four", "--mode", "ir", "--json"}).out);
    CHECK(j["count"] == 2);
    CHECK(run({"derivations", corpus("axioms/four.fmlc"), "four", "--bound", "1", "--mode", "ir"}).code == 1);
    auto d = run({"denote", corpus("models/models.fmlc"), "swap", "--model", "ident", "--json"});
    REQUIRE(d.code == 0);
    auto dj = nlohmann::json::parse(d.out);
    CHECK(dj["applied"]["morphism"]["tables"][0].size() == 6);
    CHECK(run({"denote", corpus("models/models.fmlc"), "etam", "--model", "chain1"}).code == 0);
    CHECK(run({"denote", corpus("models/models.fmlc"), "etam", "--model", "nowhere"}).code == 2);
    CHECK(run({"denote", corpus("models/models.fmlc"), "etam"}).code == 2);
}

TEST_CASE("cli eq") {
    CHECK(run({"eq", corpus("goals/appendix/is4d.fmlc"), "comonad_assoc_A"}).code == 0);
    CHECK(run({"eq", corpus("goals/distinct.fmlc"), "swap_not_id"}).code == 1);
}

TEST_CASE("cli suite output is deterministic") {
    std::vector<std::string> args{"suite", "confluence", "--mode", "ikd", "--samples", "40", "--seed", "7", "--json"};
    auto a = run(args);
    args.insert(args.end(), {"--workers", "3"});
    auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::parse(a.out)["samples"] == 40);
}

TEST_CASE("goal identifiers") {
    CHECK(goal_ident("box-functor-id/[]A") == "box_functor_id_box_A");
    CHECK(goal_ident("eps-natural/A -> A") == "eps_natural_A_to_A");
    CHECK(goal_ident("context-term/open-ir/ird") == "context_term_open_ir_ird");
}
