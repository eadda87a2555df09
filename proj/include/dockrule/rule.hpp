#pragma once

#include <string>
#include <vector>

#include "dockrule/tree.hpp"

namespace dockrule {

// Where the consequent must appear relative to the antecedent match.
enum class RuleLocation { Precedes, Follows, ChildOf };
// Whether the search stays inside the matched directive or ranges over
// the sibling directives of the file.
enum class RuleScope { Intra, Inter };

// antecedent ⊢ consequent. Patterns are kind-only trees; a child-of
// rule has exactly one [*] slot whose parent anchors the search region.
struct TreeAssociationRule {
    std::string name;
    TreeNode antecedent;       // [*] removed
    NodePath star_parent_path; // within antecedent; ChildOf only
    std::vector<TreeNode> consequent;
    RuleLocation location = RuleLocation::ChildOf;
    RuleScope scope = RuleScope::Intra;
    bool reconstructed = false;
};

const char* location_name(RuleLocation loc);
const char* scope_name(RuleScope scope);

// Rule file format: one block per rule --
//   rule <name>
//   location precedes|follows|child-of
//   scope intra|inter
//   antecedent <sexp, child-of rules mark the slot with [*]>
//   consequent <one or more sexps on one line>
//   reconstructed true          (optional)
// Blank lines and # comments are free. Patterns must be literal-free.
std::vector<TreeAssociationRule> parse_rules(const std::string& text);

std::string format_rule(const TreeAssociationRule& rule);
std::string format_rules(const std::vector<TreeAssociationRule>& rules);

bool rules_equal(const TreeAssociationRule& a, const TreeAssociationRule& b);

// The curated rule set enforced by default.
const std::vector<TreeAssociationRule>& gold_rules();
// The full curated set including rules below the default support and
// confidence thresholds.
const std::vector<TreeAssociationRule>& gold_rules_unfiltered();

}  // namespace dockrule
