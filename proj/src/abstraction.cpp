#include "dockrule/abstraction.hpp"

#include <sstream>

namespace dockrule {

std::vector<Abstraction> parse_abstractions(const std::string& text) {
    std::vector<Abstraction> out;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        size_t b = raw.find_first_not_of(" \t\r");
        if (b == std::string::npos || raw[b] == '#') continue;
        size_t e = raw.find_last_not_of(" \t\r");
        std::string line = raw.substr(b, e - b + 1);

        size_t ws = line.find_first_of(" \t");
        if (ws == std::string::npos)
            throw ParseError("abstractions: line needs KIND and REGEX", line_no);
        Abstraction a;
        a.kind = line.substr(0, ws);
        if (!valid_kind(a.kind) || a.kind.rfind("ABS-", 0) != 0)
            throw ParseError("abstractions: kind '" + a.kind +
                                 "' must be a valid ABS- kind",
                             line_no);
        size_t pb = line.find_first_not_of(" \t", ws);
        a.pattern = line.substr(pb);
        try {
            a.re = std::regex(a.pattern);
        } catch (const std::regex_error&) {
            throw ParseError("abstractions: bad regex for " + a.kind, line_no);
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<std::string> abstract_literal(
    const std::string& literal, const std::vector<Abstraction>& abstractions) {
    std::vector<std::string> kinds;
    for (const auto& a : abstractions)
        if (std::regex_search(literal, a.re)) kinds.push_back(a.kind);
    return kinds;
}

TreeNode abstract_tree(const TreeNode& tree,
                       const std::vector<Abstraction>& abstractions) {
    TreeNode out = tree;
    out.children.clear();
    for (const auto& c : tree.children)
        out.children.push_back(abstract_tree(c, abstractions));
    if (out.literal && !out.count_leaf) {
        for (const auto& kind : abstract_literal(*out.literal, abstractions))
            out.children.emplace_back(kind);
        out.original_literal = std::move(out.literal);
        out.literal.reset();
    }
    return out;
}

}  // namespace dockrule
