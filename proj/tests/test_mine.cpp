#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dockrule/builtin_data.hpp"
#include "dockrule/corpus.hpp"
#include "dockrule/mine.hpp"
#include "dockrule/sexp.hpp"
#include "support/oracles.hpp"
#include "support/random_trees.hpp"

using namespace dockrule;

namespace {

TreeNode T(const std::string& s) { return sexp_decode(s); }

std::vector<TreeNode> TS(const std::vector<std::string>& sexps) {
    std::vector<TreeNode> out;
    for (const auto& s : sexps) out.push_back(T(s));
    return out;
}

std::vector<std::string> pattern_sexps(const MineResult& r) {
    std::vector<std::string> out;
    for (const auto& fs : r.frequent) out.push_back(sexp_encode(fs.tree));
    return out;
}

std::vector<TreeNode> abstracted_corpus(
    const std::vector<std::string>& fixture_names) {
    std::vector<TreeNode> corpus;
    for (const auto& name : fixture_names) {
        std::ifstream in(std::filesystem::path(DOCKRULE_FIXTURES_DIR) / name,
                         std::ios::binary);
        REQUIRE(in.good());
        std::stringstream ss;
        ss << in.rdbuf();
        auto out = run_pipeline(ss.str(), builtin::default_schemas(),
                                builtin::default_abstractions());
        corpus.push_back(out.abstracted);
    }
    return corpus;
}

void check_same_result(const MineResult& fast, const MineResult& slow,
                       const std::string& context) {
    INFO(context);
    CHECK(fast.truncated == slow.truncated);
    REQUIRE(fast.frequent.size() == slow.frequent.size());
    for (size_t i = 0; i < fast.frequent.size(); ++i) {
        CHECK(sexp_encode(fast.frequent[i].tree) ==
              sexp_encode(slow.frequent[i].tree));
        CHECK(fast.frequent[i].frequency == slow.frequent[i].frequency);
        CHECK(fast.frequent[i].support ==
              doctest::Approx(slow.frequent[i].support));
    }
}

}  // namespace

TEST_CASE("collect_subtrees copies every occurrence in pre-order") {
    auto corpus = TS({"(R (A (X) (A (Y))) (A))", "(R (B))", "(A \"top\")"});
    auto inst = collect_subtrees(corpus, "A");
    REQUIRE(inst.size() == 4);
    CHECK(sexp_encode(inst[0]) == "(A (X) (A (Y)))");
    CHECK(sexp_encode(inst[1]) == "(A (Y))");  // nested occurrence
    CHECK(sexp_encode(inst[2]) == "(A)");
    CHECK(sexp_encode(inst[3]) == "(A \"top\")");
    CHECK(collect_subtrees(corpus, "Z").empty());
    // Instances are copies: mutating one leaves the corpus alone.
    inst[0].kind = "MUTATED";
    CHECK(corpus[0].children[0].kind == "A");
}

TEST_CASE("four install commands mine down to two patterns") {
    auto corpus = abstracted_corpus({"mining-demo/a.dockerfile", "mining-demo/b.dockerfile",
                                     "mining-demo/c.dockerfile", "mining-demo/d.dockerfile"});
    auto instances = collect_subtrees(corpus, "APT-GET-INSTALL");
    REQUIRE(instances.size() == 4);

    auto mined = mine_frequent_subtrees(instances);
    CHECK_FALSE(mined.truncated);
    REQUIRE(mined.frequent.size() == 2);
    CHECK(sexp_encode(mined.frequent[0].tree) ==
          "(APT-GET-INSTALL (FLAG-YES) (PACKAGES (PACKAGE)))");
    CHECK(mined.frequent[0].frequency == 4);
    CHECK(mined.frequent[0].support == doctest::Approx(1.0));
    CHECK(sexp_encode(mined.frequent[1].tree) ==
          "(APT-GET-INSTALL (FLAG-NO-RECOMMENDS))");
    CHECK(mined.frequent[1].frequency == 3);
    CHECK(mined.frequent[1].support == doctest::Approx(0.75));

    auto rules = build_tars(mined.frequent, "APT-GET-INSTALL");
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].name == "mined-apt-get-install-1");
    CHECK(sexp_encode(rules[0].antecedent) == "(APT-GET-INSTALL)");
    CHECK(rules[0].star_parent_path.empty());
    CHECK(rules[0].location == RuleLocation::ChildOf);
    CHECK(rules[0].scope == RuleScope::Intra);
    REQUIRE(rules[0].consequent.size() == 2);
    CHECK(sexp_encode(rules[0].consequent[0]) == "(FLAG-YES)");
    CHECK(sexp_encode(rules[0].consequent[1]) == "(PACKAGES (PACKAGE))");
    CHECK(rules[1].name == "mined-apt-get-install-2");
    REQUIRE(rules[1].consequent.size() == 1);
    CHECK(sexp_encode(rules[1].consequent[0]) == "(FLAG-NO-RECOMMENDS)");

    SUBCASE("raising the support floor keeps only the universal pattern") {
        MineOptions strict;
        strict.min_support = 1.0;
        auto all = mine_frequent_subtrees(instances, strict);
        REQUIRE(all.frequent.size() == 1);
        CHECK(sexp_encode(all.frequent[0].tree) ==
              "(APT-GET-INSTALL (FLAG-YES) (PACKAGES (PACKAGE)))");
    }
}

TEST_CASE("co-occurrence alone does not make a pattern") {
    // A and B each appear often, but their conjunction is supported by a
    // different instance set than the chain R-A, so it is not kept.
    auto instances = TS({"(R (A) (B))", "(R (A) (B))", "(R (A))"});
    MineOptions opt;
    opt.min_support = 0.5;
    auto mined = mine_frequent_subtrees(instances, opt);
    CHECK(pattern_sexps(mined) ==
          std::vector<std::string>{"(R (A))", "(R (B))"});
    CHECK(mined.frequent[0].frequency == 3);
    CHECK(mined.frequent[1].frequency == 2);

    // When the two always travel together the conjunction is coherent
    // and swallows both single-child patterns.
    auto paired = TS({"(R (A) (B))", "(R (A) (B))"});
    auto both = mine_frequent_subtrees(paired, opt);
    CHECK(pattern_sexps(both) == std::vector<std::string>{"(R (A) (B))"});
}

TEST_CASE("only maximal patterns survive") {
    auto instances = TS({"(R (A (B)))", "(R (A (B)))"});
    MineOptions opt;
    opt.min_support = 1.0;
    auto mined = mine_frequent_subtrees(instances, opt);
    // (R), (R (A)) and (R (A (B))) are all frequent and coherent; only
    // the largest is reported.
    CHECK(pattern_sexps(mined) == std::vector<std::string>{"(R (A (B)))"});
}

TEST_CASE("ties in frequency fall back to text order") {
    auto instances = TS({"(R (A))", "(R (B))"});
    MineOptions opt;
    opt.min_support = 0.5;
    auto mined = mine_frequent_subtrees(instances, opt);
    CHECK(pattern_sexps(mined) ==
          std::vector<std::string>{"(R (A))", "(R (B))"});
    CHECK(mined.frequent[0].frequency == 1);
    CHECK(mined.frequent[1].frequency == 1);
}

TEST_CASE("patterns are kind-only even when instances carry literals") {
    auto instances = TS({"(R (A \"x\"))", "(R (A \"y\"))"});
    auto mined = mine_frequent_subtrees(instances);
    REQUIRE(mined.frequent.size() == 1);
    CHECK(sexp_encode(mined.frequent[0].tree) == "(R (A))");
    CHECK(mined.frequent[0].frequency == 2);
}

TEST_CASE("depth and size caps mark the result truncated") {
    SUBCASE("no caps hit") {
        auto mined = mine_frequent_subtrees(TS({"(R (A))"}));
        CHECK_FALSE(mined.truncated);
        CHECK(pattern_sexps(mined) == std::vector<std::string>{"(R (A))"});
    }
    SUBCASE("depth cap") {
        TreeNode chain("R");  // R over a unary chain of eight A nodes
        TreeNode* cur = &chain;
        for (int i = 0; i < 8; ++i) {
            cur->children.emplace_back("A");
            cur = &cur->children.back();
        }
        MineOptions opt;
        opt.min_support = 1.0;
        auto mined = mine_frequent_subtrees({chain}, opt);
        CHECK(mined.truncated);
        REQUIRE(mined.frequent.size() == 1);
        CHECK(tree_depth(mined.frequent[0].tree) == opt.max_depth);
    }
    SUBCASE("node-count cap") {
        TreeNode wide("R");
        for (int i = 0; i < 25; ++i) wide.children.emplace_back("A");
        MineOptions opt;
        opt.min_support = 1.0;
        auto mined = mine_frequent_subtrees({wide}, opt);
        CHECK(mined.truncated);
        REQUIRE(mined.frequent.size() == 1);
        CHECK(count_nodes(mined.frequent[0].tree) == opt.max_nodes);
    }
    SUBCASE("tight custom caps enumerate the capped frontier") {
        MineOptions opt;
        opt.min_support = 1.0;
        opt.max_depth = 2;
        opt.max_nodes = 3;
        auto mined = mine_frequent_subtrees(TS({"(R (A) (B) (C))"}), opt);
        CHECK(mined.truncated);
        CHECK(pattern_sexps(mined) ==
              std::vector<std::string>{"(R (A) (B))", "(R (A) (C))",
                                       "(R (B) (C))"});
    }
}

TEST_CASE("degenerate inputs") {
    CHECK(mine_frequent_subtrees({}).frequent.empty());
    CHECK_FALSE(mine_frequent_subtrees({}).truncated);

    auto bare = mine_frequent_subtrees(TS({"(R)", "(R)"}));
    REQUIRE(bare.frequent.size() == 1);
    CHECK(sexp_encode(bare.frequent[0].tree) == "(R)");
    // A childless pattern carries no advice, so it mines no rule.
    CHECK(build_tars(bare.frequent, "R").empty());
}

TEST_CASE("mining whole corpora walks kinds in order and deduplicates") {
    auto corpus = abstracted_corpus({"mining-demo/a.dockerfile", "mining-demo/b.dockerfile",
                                     "mining-demo/c.dockerfile", "mining-demo/d.dockerfile"});
    auto rules = mine_rules(
        corpus, {"APT-GET-INSTALL", "DOCKER-FROM", "WGET", "APT-GET-INSTALL"});
    REQUIRE(rules.size() == 3);  // WGET absent; repeat kind deduplicated
    CHECK(rules[0].name == "mined-apt-get-install-1");
    CHECK(rules[1].name == "mined-apt-get-install-2");
    CHECK(rules[2].name == "mined-docker-from-1");
    REQUIRE(rules[2].consequent.size() == 2);
    CHECK(sexp_encode(rules[2].consequent[0]) == "(IMAGE)");
    CHECK(sexp_encode(rules[2].consequent[1]) == "(TAG)");
}

TEST_CASE("mining agrees with the exhaustive reference miner") {
    std::mt19937 rng(4242);
    for (int i = 0; i < 30; ++i) {
        auto group = testing::random_mining_group(rng, 6, 8);
        for (double threshold : {0.5, 0.75, 1.0}) {
            MineOptions opt;
            opt.min_support = threshold;
            auto fast = mine_frequent_subtrees(group, opt);
            auto slow = testing::brute_mine(group, opt);
            std::string context = "threshold " + std::to_string(threshold);
            for (const auto& g : group) context += " | " + sexp_encode(g);
            check_same_result(fast, slow, context);
        }
    }
}
