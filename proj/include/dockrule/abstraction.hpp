#pragma once

#include <regex>
#include <string>
#include <vector>

#include "dockrule/tree.hpp"

namespace dockrule {

// One literal-to-category mapping: a literal matching the pattern gains
// a child node of this kind during abstraction.
struct Abstraction {
    std::string kind;     // ABS-*
    std::string pattern;  // ECMAScript regex, search semantics
    std::regex re;
};

// Line format: KIND <whitespace> REGEX. Blank lines and # comments are
// skipped. Kinds must be valid and carry the ABS- prefix.
std::vector<Abstraction> parse_abstractions(const std::string& text);

// Kinds whose pattern matches, in list order.
std::vector<std::string> abstract_literal(
    const std::string& literal, const std::vector<Abstraction>& abstractions);

// Replaces every literal (count leaves exempt) with the matching
// abstraction kinds as children. The removed literal is retained as a
// diagnostic annotation. Idempotent.
TreeNode abstract_tree(const TreeNode& tree,
                       const std::vector<Abstraction>& abstractions);

}  // namespace dockrule
