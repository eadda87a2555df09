#include "dockrule/enforce.hpp"

#include <algorithm>
#include <stdexcept>

namespace dockrule {

bool aligns(const TreeNode& host, const TreeNode& pattern) {
    if (host.kind != pattern.kind) return false;
    size_t hi = 0;
    for (const auto& pc : pattern.children) {
        while (hi < host.children.size() && !aligns(host.children[hi], pc)) ++hi;
        if (hi >= host.children.size()) return false;
        ++hi;
    }
    return true;
}

std::vector<NodePath> match_pattern(const TreeNode& tree,
                                    const TreeNode& pattern) {
    std::vector<NodePath> out;
    walk(tree, [&](const TreeNode& n, const NodePath& path) {
        if (aligns(n, pattern)) out.push_back(path);
        return true;
    });
    return out;
}

namespace {

// Greedy leftmost embedding; records the host path of each pattern
// node. Greedy is exact here: child feasibility is independent of the
// choices made for siblings, so taking the earliest aligned child
// always extends to a full embedding.
void bind_leftmost(const TreeNode& host, const TreeNode& pattern,
                   const NodePath& host_here, const NodePath& pattern_here,
                   std::vector<std::pair<NodePath, NodePath>>& out) {
    out.emplace_back(pattern_here, host_here);
    size_t hi = 0;
    for (size_t pi = 0; pi < pattern.children.size(); ++pi) {
        while (hi < host.children.size() &&
               !aligns(host.children[hi], pattern.children[pi]))
            ++hi;
        NodePath hp = host_here;
        hp.push_back(static_cast<int>(hi));
        NodePath pp = pattern_here;
        pp.push_back(static_cast<int>(pi));
        bind_leftmost(host.children[hi], pattern.children[pi], hp, pp, out);
        ++hi;
    }
}

}  // namespace

NodePath align_binding(const TreeNode& host, const TreeNode& pattern,
                       const NodePath& pattern_path) {
    if (!aligns(host, pattern))
        throw std::invalid_argument("align_binding: pattern does not align");
    std::vector<std::pair<NodePath, NodePath>> bindings;
    bind_leftmost(host, pattern, {}, {}, bindings);
    for (const auto& [pp, hp] : bindings)
        if (pp == pattern_path) return hp;
    throw std::invalid_argument("align_binding: pattern path not found");
}

namespace {

bool is_directive_child(const NodePath& path) { return path.size() >= 1; }

// Pre-order BASH-COMMAND paths under the node.
std::vector<NodePath> command_paths(const TreeNode& root, const NodePath& base) {
    std::vector<NodePath> out;
    walk(root, [&](const TreeNode& n, const NodePath& p) {
        if (n.kind == "BASH-COMMAND") {
            NodePath full = base;
            full.insert(full.end(), p.begin(), p.end());
            out.push_back(full);
        }
        return true;
    });
    return out;
}

}  // namespace

std::vector<NodePath> bind_region(const TreeNode& tree,
                                  const TreeAssociationRule& rule,
                                  const NodePath& anchor) {
    const TreeNode* anchor_node = node_at(tree, anchor);
    if (!anchor_node)
        throw std::invalid_argument("bind_region: anchor path is invalid");

    if (rule.location == RuleLocation::ChildOf) {
        NodePath rel =
            align_binding(*anchor_node, rule.antecedent, rule.star_parent_path);
        NodePath star_parent = anchor;
        star_parent.insert(star_parent.end(), rel.begin(), rel.end());
        const TreeNode* sp = node_at(tree, star_parent);
        std::vector<NodePath> region;
        for (size_t i = 0; i < sp->children.size(); ++i) {
            NodePath p = star_parent;
            p.push_back(static_cast<int>(i));
            region.push_back(std::move(p));
        }
        return region;
    }

    if (!is_directive_child(anchor))
        throw std::invalid_argument(
            "bind_region: anchor is outside any directive");
    bool before = rule.location == RuleLocation::Precedes;

    if (rule.scope == RuleScope::Inter) {
        int dir = anchor[0];
        std::vector<NodePath> region;
        for (size_t i = 0; i < tree.children.size(); ++i) {
            bool in = before ? static_cast<int>(i) < dir
                             : static_cast<int>(i) > dir;
            if (in) region.push_back({static_cast<int>(i)});
        }
        return region;
    }

    // Intra scope: sibling commands inside the same directive. The
    // enclosing command is the nearest BASH-COMMAND ancestor-or-self.
    NodePath directive = {anchor[0]};
    NodePath enclosing;
    bool found = false;
    for (size_t len = anchor.size(); len >= 1; --len) {
        NodePath prefix(anchor.begin(), anchor.begin() + static_cast<long>(len));
        const TreeNode* n = node_at(tree, prefix);
        if (n && n->kind == "BASH-COMMAND") {
            enclosing = prefix;
            found = true;
            break;
        }
    }
    if (!found) return {};

    std::vector<NodePath> commands =
        command_paths(*node_at(tree, directive), directive);
    std::vector<NodePath> region;
    bool seen_enclosing = false;
    for (const auto& cp : commands) {
        if (cp == enclosing) {
            seen_enclosing = true;
            continue;
        }
        if (before ? !seen_enclosing : seen_enclosing) region.push_back(cp);
    }
    return region;
}

namespace {

bool subtree_contains(const TreeNode& root, const TreeNode& pattern) {
    bool hit = false;
    walk(root, [&](const TreeNode& n, const NodePath&) {
        if (aligns(n, pattern)) {
            hit = true;
            return false;
        }
        return true;
    });
    return hit;
}

}  // namespace

std::vector<RuleMatch> check_rule(const TreeNode& tree,
                                  const TreeAssociationRule& rule) {
    std::vector<RuleMatch> out;
    for (const auto& anchor : match_pattern(tree, rule.antecedent)) {
        RuleMatch m;
        m.anchor = anchor;
        m.region = bind_region(tree, rule, anchor);
        m.satisfied = true;
        for (const auto& want : rule.consequent) {
            bool found = false;
            for (const auto& rp : m.region) {
                if (subtree_contains(*node_at(tree, rp), want)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                m.satisfied = false;
                break;
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

RuleMetrics rule_metrics(const std::vector<TreeNode>& corpus,
                         const TreeAssociationRule& rule) {
    RuleMetrics metrics;
    for (const auto& tree : corpus) {
        for (const auto& m : check_rule(tree, rule)) {
            ++metrics.support;
            if (m.satisfied)
                ++metrics.satisfied;
            else
                ++metrics.violated;
        }
    }
    if (metrics.support > 0) {
        metrics.confidence =
            static_cast<double>(metrics.satisfied) / metrics.support;
        metrics.violation_rate =
            static_cast<double>(metrics.violated) / metrics.support;
    }
    return metrics;
}

std::vector<Violation> collect_violations(const TreeNode& tree,
                                          const TreeAssociationRule& rule) {
    std::vector<Violation> out;
    for (const auto& m : check_rule(tree, rule)) {
        if (m.satisfied) continue;
        Violation v;
        v.rule_name = rule.name;
        v.anchor = m.anchor;
        // Nearest enclosing span; directives always carry one.
        for (size_t len = m.anchor.size() + 1; len >= 1; --len) {
            NodePath prefix(m.anchor.begin(),
                            m.anchor.begin() + static_cast<long>(len - 1));
            const TreeNode* n = node_at(tree, prefix);
            if (n && n->span) {
                v.span = *n->span;
                break;
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<ScoredRule> score_rules(
    const std::vector<TreeNode>& corpus,
    const std::vector<TreeAssociationRule>& rules) {
    std::vector<ScoredRule> out;
    out.reserve(rules.size());
    for (const auto& rule : rules)
        out.push_back({rule, rule_metrics(corpus, rule)});
    return out;
}

std::vector<ScoredRule> filter_rules(const std::vector<ScoredRule>& scored,
                                     int min_support, double min_confidence) {
    std::vector<ScoredRule> out;
    for (const auto& sr : scored) {
        if (sr.metrics.support < min_support) continue;
        if (!sr.metrics.confidence) continue;
        if (*sr.metrics.confidence < min_confidence - 1e-9) continue;
        out.push_back(sr);
    }
    return out;
}

}  // namespace dockrule
