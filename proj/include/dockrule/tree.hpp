#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dockrule {

// Node kinds are non-empty tokens over A-Z, 0-9 and '-'.
using NodeKind = std::string;

bool valid_kind(const std::string& kind);

struct SourceSpan {
    int line_begin = 0;
    int col_begin = 0;
    int line_end = 0;
    int col_end = 0;
};

// A path from the root to a node: child indices, outermost first.
using NodePath = std::vector<int>;

// Ordered typed tree. A node carries either a literal or children, never
// both. Rewrites build new trees; nodes are not mutated in place once a
// phase has produced them.
struct TreeNode {
    NodeKind kind;
    std::vector<TreeNode> children;
    std::optional<std::string> literal;

    // Unique within its tree; present on effectively-uninterpretable
    // literals so later phases can report what they resolved.
    std::optional<int> origin_id;
    std::optional<SourceSpan> span;

    // Literal is flagged further-parseable by the phase that produced it.
    bool eu = false;
    // Repeat-count numeral of a counted flag; exempt from abstraction.
    bool count_leaf = false;
    // Shell payload the structural parser gave up on.
    bool degraded = false;
    // Pre-abstraction literal, kept for diagnostics.
    std::optional<std::string> original_literal;

    TreeNode() = default;
    explicit TreeNode(NodeKind k) : kind(std::move(k)) {}
    TreeNode(NodeKind k, std::string lit)
        : kind(std::move(k)), literal(std::move(lit)) {}
    TreeNode(NodeKind k, std::vector<TreeNode> kids)
        : kind(std::move(k)), children(std::move(kids)) {}

    bool is_leaf() const { return children.empty(); }
};

// Equality over kind, literal and children; annotations are ignored.
bool structurally_equal(const TreeNode& a, const TreeNode& b);

int count_nodes(const TreeNode& t);
int count_leaves(const TreeNode& t);
int tree_depth(const TreeNode& t);  // single node has depth 1

const TreeNode* node_at(const TreeNode& root, const NodePath& path);

// Pre-order walk; fn(node, path). Returning false stops the walk.
void walk(const TreeNode& root,
          const std::function<bool(const TreeNode&, const NodePath&)>& fn);

int max_origin_id(const TreeNode& t);

// A leaf is effectively uninterpretable iff its literal is flagged
// further-parseable or its kind is UNKNOWN.
bool is_eu_leaf(const TreeNode& n);

struct EuReport {
    int total_leaves = 0;
    int eu_leaves = 0;
    // Phase 3 only: classification of the phase-2 EU origin ids.
    int resolved_of_phase2 = 0;
    int unresolved_of_phase2 = 0;

    double eu_fraction() const {
        return total_leaves == 0 ? 0.0
                                 : static_cast<double>(eu_leaves) / total_leaves;
    }
    // Unresolved fraction; 0 when the file had nothing to resolve.
    double unresolved_fraction() const {
        int denom = resolved_of_phase2 + unresolved_of_phase2;
        return denom == 0 ? 0.0
                          : static_cast<double>(unresolved_of_phase2) / denom;
    }
};

// Origin ids of EU leaves in the given tree.
std::set<int> eu_origin_ids(const TreeNode& t);

// phase is 1, 2 or 3; phase 3 requires the phase-2 EU id set.
EuReport eu_stats(const TreeNode& tree, int phase,
                  const std::set<int>* phase2_eu_ids = nullptr);

// Positioned failure from any parser in the toolkit. Lines and columns
// are 1-based; 0 means unknown.
struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(const std::string& msg, int line_ = 0, int col_ = 0)
        : std::runtime_error(msg), line(line_), col(col_) {}
};

}  // namespace dockrule
