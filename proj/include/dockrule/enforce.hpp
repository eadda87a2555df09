#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dockrule/rule.hpp"
#include "dockrule/tree.hpp"

namespace dockrule {

// True when the kind-only pattern occurs at this node: kinds equal and
// the pattern children embed injectively, order preserved, into the
// node's children (extra children are fine). A childless pattern node
// matches regardless of the host's literal or children.
bool aligns(const TreeNode& host, const TreeNode& pattern);

// Anchor paths, in pre-order, of every node the pattern aligns at.
std::vector<NodePath> match_pattern(const TreeNode& tree,
                                    const TreeNode& pattern);

// Host path (relative to the aligned node) of the pattern node at
// pattern_path, under the leftmost alignment. The pattern must align.
NodePath align_binding(const TreeNode& host, const TreeNode& pattern,
                       const NodePath& pattern_path);

struct RuleMatch {
    NodePath anchor;               // antecedent occurrence
    std::vector<NodePath> region;  // subtree roots the consequent may use
    bool satisfied = false;
};

// One entry per antecedent occurrence, in pre-order. The tree is
// expected to be fully parsed and abstracted.
std::vector<RuleMatch> check_rule(const TreeNode& tree,
                                  const TreeAssociationRule& rule);

// Region roots for one antecedent occurrence. Throws
// std::invalid_argument when a directive-relative location is asked for
// an anchor outside any directive.
std::vector<NodePath> bind_region(const TreeNode& tree,
                                  const TreeAssociationRule& rule,
                                  const NodePath& anchor);

struct RuleMetrics {
    int support = 0;
    int satisfied = 0;
    int violated = 0;
    // Unset while support is zero.
    std::optional<double> confidence;
    std::optional<double> violation_rate;
};

RuleMetrics rule_metrics(const std::vector<TreeNode>& corpus,
                         const TreeAssociationRule& rule);

struct Violation {
    std::string rule_name;
    SourceSpan span;  // nearest enclosing span of the anchor
    NodePath anchor;
};

std::vector<Violation> collect_violations(const TreeNode& tree,
                                          const TreeAssociationRule& rule);

struct ScoredRule {
    TreeAssociationRule rule;
    RuleMetrics metrics;
};

std::vector<ScoredRule> score_rules(const std::vector<TreeNode>& corpus,
                                    const std::vector<TreeAssociationRule>& rules);

// Pure thresholding over precomputed metrics: support >= min_support
// and confidence defined and >= min_confidence.
std::vector<ScoredRule> filter_rules(const std::vector<ScoredRule>& scored,
                                     int min_support = 50,
                                     double min_confidence = 0.75);

}  // namespace dockrule
