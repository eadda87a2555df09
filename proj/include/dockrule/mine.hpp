#pragma once

#include <string>
#include <vector>

#include "dockrule/rule.hpp"
#include "dockrule/tree.hpp"

namespace dockrule {

// Deep copies of every subtree rooted at a node of the given kind, in
// pre-order per tree. Each copy is one mining instance.
std::vector<TreeNode> collect_subtrees(const std::vector<TreeNode>& corpus,
                                       const std::string& kind);

struct FrequentSubtree {
    TreeNode tree;   // kind-only pattern
    int frequency;   // instances it occurs in, root-anchored
    double support;  // frequency / instance count
};

struct MineOptions {
    double min_support = 0.75;  // fraction of instances
    int max_depth = 6;
    int max_nodes = 20;
};

struct MineResult {
    std::vector<FrequentSubtree> frequent;
    // Some frequent pattern was cut off by the depth or size cap.
    bool truncated = false;
};

// Frequent patterns of the instance set, kept only when support-
// coherent (every non-root root-path of the pattern is supported by
// exactly the same instances) and maximal among those (no other kept
// pattern strictly contains it, root-anchored). Instances share the
// root kind of the set; counting is per instance, embeddings anchored
// at the instance root. Output sorts by frequency descending, then by
// s-expression.
MineResult mine_frequent_subtrees(const std::vector<TreeNode>& instances,
                                  const MineOptions& options = {});

// One child-of rule per frequent pattern with children: the pattern
// root becomes (KIND [*]) and the child forest the consequent.
// Childless patterns mine no rule.
std::vector<TreeAssociationRule> build_tars(
    const std::vector<FrequentSubtree>& frequent, const std::string& kind);

// Mines every kind over the corpus trees and concatenates the rules,
// deduplicated. Kind order is preserved.
std::vector<TreeAssociationRule> mine_rules(
    const std::vector<TreeNode>& corpus, const std::vector<std::string>& kinds,
    const MineOptions& options = {});

}  // namespace dockrule
