#include "dockrule/tree.hpp"

#include <algorithm>

namespace dockrule {

bool valid_kind(const std::string& kind) {
    if (kind.empty()) return false;
    for (char c : kind) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
        if (!ok) return false;
    }
    return true;
}

bool structurally_equal(const TreeNode& a, const TreeNode& b) {
    if (a.kind != b.kind) return false;
    if (a.literal != b.literal) return false;
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(a.children[i], b.children[i])) return false;
    }
    return true;
}

int count_nodes(const TreeNode& t) {
    int n = 1;
    for (const auto& c : t.children) n += count_nodes(c);
    return n;
}

int count_leaves(const TreeNode& t) {
    if (t.children.empty()) return 1;
    int n = 0;
    for (const auto& c : t.children) n += count_leaves(c);
    return n;
}

int tree_depth(const TreeNode& t) {
    int best = 0;
    for (const auto& c : t.children) best = std::max(best, tree_depth(c));
    return best + 1;
}

const TreeNode* node_at(const TreeNode& root, const NodePath& path) {
    const TreeNode* cur = &root;
    for (int idx : path) {
        if (idx < 0 || static_cast<size_t>(idx) >= cur->children.size())
            return nullptr;
        cur = &cur->children[idx];
    }
    return cur;
}

namespace {

bool walk_impl(const TreeNode& node, NodePath& path,
               const std::function<bool(const TreeNode&, const NodePath&)>& fn) {
    if (!fn(node, path)) return false;
    for (size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        bool keep_going = walk_impl(node.children[i], path, fn);
        path.pop_back();
        if (!keep_going) return false;
    }
    return true;
}

}  // namespace

void walk(const TreeNode& root,
          const std::function<bool(const TreeNode&, const NodePath&)>& fn) {
    NodePath path;
    walk_impl(root, path, fn);
}

int max_origin_id(const TreeNode& t) {
    int best = 0;
    walk(t, [&](const TreeNode& n, const NodePath&) {
        if (n.origin_id && *n.origin_id > best) best = *n.origin_id;
        return true;
    });
    return best;
}

bool is_eu_leaf(const TreeNode& n) {
    if (!n.children.empty()) return false;
    if (n.kind == "UNKNOWN") return true;
    return n.eu && n.literal.has_value();
}

std::set<int> eu_origin_ids(const TreeNode& t) {
    std::set<int> ids;
    walk(t, [&](const TreeNode& n, const NodePath&) {
        if (is_eu_leaf(n) && n.origin_id) ids.insert(*n.origin_id);
        return true;
    });
    return ids;
}

EuReport eu_stats(const TreeNode& tree, int phase,
                  const std::set<int>* phase2_eu_ids) {
    if (phase < 1 || phase > 3)
        throw std::invalid_argument("eu_stats: phase must be 1, 2 or 3");
    if (phase == 3 && phase2_eu_ids == nullptr)
        throw std::invalid_argument(
            "eu_stats: phase 3 requires the phase-2 EU id set");

    EuReport r;
    walk(tree, [&](const TreeNode& n, const NodePath&) {
        if (n.children.empty()) {
            ++r.total_leaves;
            if (is_eu_leaf(n)) ++r.eu_leaves;
        }
        return true;
    });
    if (phase == 3) {
        std::set<int> surviving = eu_origin_ids(tree);
        for (int id : *phase2_eu_ids) {
            if (surviving.count(id))
                ++r.unresolved_of_phase2;
            else
                ++r.resolved_of_phase2;
        }
    }
    return r;
}

}  // namespace dockrule
