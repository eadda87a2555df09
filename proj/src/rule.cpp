#include "dockrule/rule.hpp"

#include <sstream>

#include "dockrule/builtin_data.hpp"
#include "dockrule/sexp.hpp"

namespace dockrule {

namespace {

constexpr const char* kStarKind = "STAR-SLOT";

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Patterns written by hand may use the verbose https alias.
void canonicalize_kinds(TreeNode& n) {
    if (n.kind == "ABS-URL-PROTOCOL-HTTPS") n.kind = "ABS-URL-HTTPS";
    for (auto& c : n.children) canonicalize_kinds(c);
}

void require_pattern(const TreeNode& n, const std::string& rule_name,
                     int line_no) {
    if (n.literal)
        throw ParseError("rules: pattern in rule '" + rule_name +
                             "' must not contain literals",
                         line_no);
    if (!valid_kind(n.kind))
        throw ParseError("rules: invalid kind '" + n.kind + "' in rule '" +
                             rule_name + "'",
                         line_no);
    for (const auto& c : n.children) require_pattern(c, rule_name, line_no);
}

// Replaces each [*] token with a marker node so the s-expression
// decoder can handle the pattern.
std::string replace_star(const std::string& text) {
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "[*]") == 0) {
            out += "(";
            out += kStarKind;
            out += ")";
            i += 3;
        } else {
            out.push_back(text[i++]);
        }
    }
    return out;
}

// Removes marker children, recording the parent path of each.
void strip_star(TreeNode& n, NodePath& path, std::vector<NodePath>& parents) {
    for (size_t i = 0; i < n.children.size();) {
        if (n.children[i].kind == kStarKind) {
            parents.push_back(path);
            n.children.erase(n.children.begin() + static_cast<long>(i));
        } else {
            path.push_back(static_cast<int>(i));
            strip_star(n.children[i], path, parents);
            path.pop_back();
            ++i;
        }
    }
}

// Splits a line of concatenated s-expressions on top-level boundaries.
std::vector<std::string> split_sexp_list(const std::string& line, int line_no) {
    std::vector<std::string> out;
    int depth = 0;
    size_t start = std::string::npos;
    bool in_string = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '(') {
            if (depth == 0) start = i;
            ++depth;
        } else if (c == ')') {
            if (--depth < 0)
                throw ParseError("rules: unbalanced ')'", line_no);
            if (depth == 0) {
                out.push_back(line.substr(start, i - start + 1));
                start = std::string::npos;
            }
        } else if (depth == 0 && c != ' ' && c != '\t') {
            throw ParseError("rules: stray text between patterns", line_no);
        }
    }
    if (depth != 0) throw ParseError("rules: unbalanced '('", line_no);
    return out;
}

struct PendingRule {
    TreeAssociationRule rule;
    bool has_location = false;
    bool has_scope = false;
    bool has_antecedent = false;
    bool has_consequent = false;
    int star_count = 0;
    int start_line = 0;
};

void finish(PendingRule& p, std::vector<TreeAssociationRule>& out) {
    const std::string& name = p.rule.name;
    if (!p.has_location)
        throw ParseError("rules: rule '" + name + "' has no location",
                         p.start_line);
    if (!p.has_scope)
        throw ParseError("rules: rule '" + name + "' has no scope",
                         p.start_line);
    if (!p.has_antecedent)
        throw ParseError("rules: rule '" + name + "' has no antecedent",
                         p.start_line);
    if (!p.has_consequent)
        throw ParseError("rules: rule '" + name + "' has no consequent",
                         p.start_line);
    bool child_of = p.rule.location == RuleLocation::ChildOf;
    if (child_of && p.star_count != 1)
        throw ParseError("rules: child-of rule '" + name +
                             "' needs exactly one [*]",
                         p.start_line);
    if (!child_of && p.star_count != 0)
        throw ParseError("rules: [*] is only meaningful in child-of rules ('" +
                             name + "')",
                         p.start_line);
    out.push_back(std::move(p.rule));
}

}  // namespace

const char* location_name(RuleLocation loc) {
    switch (loc) {
        case RuleLocation::Precedes: return "precedes";
        case RuleLocation::Follows: return "follows";
        case RuleLocation::ChildOf: return "child-of";
    }
    return "?";
}

const char* scope_name(RuleScope scope) {
    return scope == RuleScope::Intra ? "intra" : "inter";
}

std::vector<TreeAssociationRule> parse_rules(const std::string& text) {
    std::vector<TreeAssociationRule> out;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::optional<PendingRule> pending;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        size_t ws = line.find_first_of(" \t");
        std::string keyword = ws == std::string::npos ? line : line.substr(0, ws);
        std::string rest =
            ws == std::string::npos
                ? ""
                : trim(line.substr(ws));

        if (keyword == "rule") {
            if (pending) finish(*pending, out);
            if (rest.empty())
                throw ParseError("rules: rule line needs a name", line_no);
            pending.emplace();
            pending->rule.name = rest;
            pending->start_line = line_no;
            continue;
        }
        if (!pending)
            throw ParseError("rules: '" + keyword + "' before any rule line",
                             line_no);

        if (keyword == "location") {
            if (rest == "precedes")
                pending->rule.location = RuleLocation::Precedes;
            else if (rest == "follows")
                pending->rule.location = RuleLocation::Follows;
            else if (rest == "child-of")
                pending->rule.location = RuleLocation::ChildOf;
            else
                throw ParseError("rules: unknown location '" + rest + "'",
                                 line_no);
            pending->has_location = true;
        } else if (keyword == "scope") {
            if (rest == "intra")
                pending->rule.scope = RuleScope::Intra;
            else if (rest == "inter")
                pending->rule.scope = RuleScope::Inter;
            else
                throw ParseError("rules: unknown scope '" + rest + "'", line_no);
            pending->has_scope = true;
        } else if (keyword == "antecedent") {
            TreeNode tree;
            try {
                tree = sexp_decode(replace_star(rest));
            } catch (const ParseError& e) {
                throw ParseError("rules: bad antecedent in '" +
                                     pending->rule.name + "': " + e.what(),
                                 line_no);
            }
            if (tree.kind == kStarKind)
                throw ParseError("rules: [*] cannot be the antecedent root",
                                 line_no);
            NodePath path;
            std::vector<NodePath> parents;
            strip_star(tree, path, parents);
            canonicalize_kinds(tree);
            require_pattern(tree, pending->rule.name, line_no);
            pending->star_count = static_cast<int>(parents.size());
            if (!parents.empty()) pending->rule.star_parent_path = parents[0];
            pending->rule.antecedent = std::move(tree);
            pending->has_antecedent = true;
        } else if (keyword == "consequent") {
            for (const auto& part : split_sexp_list(rest, line_no)) {
                TreeNode tree;
                try {
                    tree = sexp_decode(part);
                } catch (const ParseError& e) {
                    throw ParseError("rules: bad consequent in '" +
                                         pending->rule.name + "': " + e.what(),
                                     line_no);
                }
                canonicalize_kinds(tree);
                require_pattern(tree, pending->rule.name, line_no);
                pending->rule.consequent.push_back(std::move(tree));
            }
            if (pending->rule.consequent.empty())
                throw ParseError("rules: consequent line has no patterns",
                                 line_no);
            pending->has_consequent = true;
        } else if (keyword == "reconstructed") {
            if (rest != "true" && rest != "false")
                throw ParseError("rules: reconstructed takes true or false",
                                 line_no);
            pending->rule.reconstructed = rest == "true";
        } else {
            throw ParseError("rules: unknown keyword '" + keyword + "'",
                             line_no);
        }
    }
    if (pending) finish(*pending, out);
    return out;
}

namespace {

// Encodes the antecedent, writing [*] as the last child of its parent.
std::string encode_with_star(const TreeNode& n, const NodePath& star_parent,
                             const NodePath& here) {
    std::string out = "(" + n.kind;
    for (size_t i = 0; i < n.children.size(); ++i) {
        NodePath child_path = here;
        child_path.push_back(static_cast<int>(i));
        out += " " + encode_with_star(n.children[i], star_parent, child_path);
    }
    if (here == star_parent) out += " [*]";
    out += ")";
    return out;
}

}  // namespace

std::string format_rule(const TreeAssociationRule& rule) {
    std::ostringstream out;
    out << "rule " << rule.name << "\n";
    out << "location " << location_name(rule.location) << "\n";
    out << "scope " << scope_name(rule.scope) << "\n";
    if (rule.location == RuleLocation::ChildOf) {
        out << "antecedent "
            << encode_with_star(rule.antecedent, rule.star_parent_path, {})
            << "\n";
    } else {
        out << "antecedent " << sexp_encode(rule.antecedent) << "\n";
    }
    out << "consequent";
    for (const auto& c : rule.consequent) out << " " << sexp_encode(c);
    out << "\n";
    if (rule.reconstructed) out << "reconstructed true\n";
    return out.str();
}

std::string format_rules(const std::vector<TreeAssociationRule>& rules) {
    std::string out;
    for (size_t i = 0; i < rules.size(); ++i) {
        if (i) out += "\n";
        out += format_rule(rules[i]);
    }
    return out;
}

bool rules_equal(const TreeAssociationRule& a, const TreeAssociationRule& b) {
    if (a.name != b.name || a.location != b.location || a.scope != b.scope ||
        a.reconstructed != b.reconstructed)
        return false;
    if (!structurally_equal(a.antecedent, b.antecedent)) return false;
    if (a.location == RuleLocation::ChildOf &&
        a.star_parent_path != b.star_parent_path)
        return false;
    if (a.consequent.size() != b.consequent.size()) return false;
    for (size_t i = 0; i < a.consequent.size(); ++i)
        if (!structurally_equal(a.consequent[i], b.consequent[i])) return false;
    return true;
}

const std::vector<TreeAssociationRule>& gold_rules() {
    static const std::vector<TreeAssociationRule> rules =
        parse_rules(builtin::gold_rules_text());
    return rules;
}

const std::vector<TreeAssociationRule>& gold_rules_unfiltered() {
    static const std::vector<TreeAssociationRule> rules =
        parse_rules(builtin::gold_rules_unfiltered_text());
    return rules;
}

}  // namespace dockrule
