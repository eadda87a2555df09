#include "dockrule/command_schema.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace dockrule {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

void require_kind(const std::string& kind, int line) {
    if (!valid_kind(kind))
        throw ParseError("schema: invalid node kind '" + kind + "'", line);
}

void require_spelling(const std::string& sp, int line) {
    if (sp.size() < 2 || sp[0] != '-')
        throw ParseError("schema: option spelling '" + sp +
                             "' must start with '-'",
                         line);
}

}  // namespace

CommandSchema parse_schema(const std::string& text) {
    CommandSchema schema;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool saw_rest_args = false;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line.rfind("command:", 0) == 0) {
            schema.command_path = split_ws(line.substr(8));
            if (schema.command_path.empty())
                throw ParseError("schema: empty command path", line_no);
            continue;
        }
        if (line.rfind("root:", 0) == 0) {
            schema.root_kind = trim(line.substr(5));
            require_kind(schema.root_kind, line_no);
            continue;
        }
        if (line.rfind("flag", 0) == 0) {
            bool counted = line.rfind("flag*", 0) == 0;
            std::string rest = trim(line.substr(counted ? 5 : 4));
            size_t eq = rest.find('=');
            if (eq == std::string::npos)
                throw ParseError("schema: flag line needs '= spellings'",
                                 line_no);
            OptionSpec spec;
            spec.kind = trim(rest.substr(0, eq));
            require_kind(spec.kind, line_no);
            spec.arity = counted ? OptionSpec::Arity::Counted
                                 : OptionSpec::Arity::Plain;
            std::string sp_part = rest.substr(eq + 1);
            std::string sp;
            std::istringstream sps(sp_part);
            while (std::getline(sps, sp, '|')) {
                sp = trim(sp);
                if (sp.empty()) continue;
                require_spelling(sp, line_no);
                spec.spellings.push_back(sp);
            }
            if (spec.spellings.empty())
                throw ParseError("schema: flag has no spellings", line_no);
            schema.options.push_back(std::move(spec));
            continue;
        }
        if (line.rfind("opt", 0) == 0) {
            std::string rest = trim(line.substr(3));
            size_t lt = rest.find('<');
            size_t gt = rest.find('>');
            size_t eq = rest.find('=');
            if (lt == std::string::npos || gt == std::string::npos ||
                gt < lt || eq == std::string::npos || eq < gt)
                throw ParseError(
                    "schema: opt line needs KIND<VALUE-KIND> = spellings",
                    line_no);
            OptionSpec spec;
            spec.kind = trim(rest.substr(0, lt));
            spec.value_kind = trim(rest.substr(lt + 1, gt - lt - 1));
            require_kind(spec.kind, line_no);
            require_kind(spec.value_kind, line_no);
            spec.arity = OptionSpec::Arity::Valued;
            std::string sp;
            std::istringstream sps(rest.substr(eq + 1));
            while (std::getline(sps, sp, '|')) {
                sp = trim(sp);
                if (sp.empty()) continue;
                require_spelling(sp, line_no);
                spec.spellings.push_back(sp);
            }
            if (spec.spellings.empty())
                throw ParseError("schema: opt has no spellings", line_no);
            schema.options.push_back(std::move(spec));
            continue;
        }
        if (line.rfind("args", 0) == 0) {
            if (saw_rest_args)
                throw ParseError(
                    "schema: no args entry may follow a rest-consuming one",
                    line_no);
            auto words = split_ws(line.substr(4));
            if (words.size() != 2)
                throw ParseError("schema: args line needs KIND and a count",
                                 line_no);
            PositionalSpec spec;
            size_t slash = words[0].find('/');
            if (slash == std::string::npos) {
                spec.item_kind = words[0];
            } else {
                spec.collection_kind = words[0].substr(0, slash);
                spec.item_kind = words[0].substr(slash + 1);
                require_kind(spec.collection_kind, line_no);
            }
            require_kind(spec.item_kind, line_no);
            if (words[1] == "*") {
                spec.exact_count = -1;
                saw_rest_args = true;
            } else {
                try {
                    spec.exact_count = std::stoi(words[1]);
                } catch (const std::exception&) {
                    throw ParseError("schema: bad args count '" + words[1] + "'",
                                     line_no);
                }
                if (spec.exact_count < 1)
                    throw ParseError("schema: args count must be positive",
                                     line_no);
            }
            schema.positionals.push_back(std::move(spec));
            continue;
        }
        throw ParseError("schema: unrecognized line '" + line + "'", line_no);
    }

    if (schema.command_path.empty())
        throw ParseError("schema: missing command: line");
    if (schema.root_kind.empty())
        throw ParseError("schema: missing root: line");

    for (size_t i = 0; i < schema.options.size(); ++i) {
        for (const auto& sp : schema.options[i].spellings) {
            auto [it, inserted] =
                schema.spelling_to_option.emplace(sp, static_cast<int>(i));
            if (!inserted)
                throw ParseError("schema: duplicate spelling '" + sp + "'");
        }
    }
    return schema;
}

std::vector<CommandSchema> load_schemas(const std::vector<std::string>& texts) {
    std::vector<CommandSchema> out;
    std::set<std::string> roots;
    std::set<std::string> paths;
    for (const auto& text : texts) {
        CommandSchema s = parse_schema(text);
        if (!roots.insert(s.root_kind).second)
            throw ParseError("schema set: duplicate root kind '" + s.root_kind +
                             "'");
        std::string joined;
        for (const auto& w : s.command_path) joined += w + " ";
        if (!paths.insert(joined).second)
            throw ParseError("schema set: duplicate command path '" +
                             trim(joined) + "'");
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

// Quote-aware argv split: outer quotes are stripped, substitutions
// ($VAR, $(...), ${...}, backticks) stay verbatim inside the word.
std::vector<std::string> tokenize_command(const std::string& s) {
    std::vector<std::string> out;
    size_t i = 0;
    size_t n = s.size();
    auto copy_region = [&](std::string& word) {
        // s[i] is '$'-introduced '(' or '{', or a backtick; copies the
        // whole region verbatim.
        char open = s[i] == '`' ? '`' : s[i];
        if (open == '`') {
            word.push_back(s[i++]);
            while (i < n) {
                if (s[i] == '\\' && i + 1 < n) {
                    word.push_back(s[i++]);
                    word.push_back(s[i++]);
                    continue;
                }
                word.push_back(s[i]);
                if (s[i++] == '`') return;
            }
            return;
        }
        char close = open == '(' ? ')' : '}';
        int depth = 0;
        while (i < n) {
            char c = s[i];
            word.push_back(c);
            ++i;
            if (c == open) ++depth;
            if (c == close) {
                if (--depth == 0) return;
            }
        }
    };
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= n) break;
        std::string word;
        bool any = false;
        while (i < n && !std::isspace(static_cast<unsigned char>(s[i]))) {
            char c = s[i];
            if (c == '\'') {
                any = true;
                ++i;
                while (i < n && s[i] != '\'') word.push_back(s[i++]);
                if (i < n) ++i;
            } else if (c == '"') {
                any = true;
                ++i;
                while (i < n && s[i] != '"') {
                    if (s[i] == '\\' && i + 1 < n &&
                        (s[i + 1] == '"' || s[i + 1] == '\\')) {
                        word.push_back(s[i + 1]);
                        i += 2;
                    } else {
                        word.push_back(s[i++]);
                    }
                }
                if (i < n) ++i;
            } else if (c == '`') {
                any = true;
                copy_region(word);
            } else if (c == '$' && i + 1 < n && (s[i + 1] == '(' || s[i + 1] == '{')) {
                any = true;
                word.push_back(s[i++]);
                copy_region(word);
            } else if (c == '\\' && i + 1 < n) {
                any = true;
                word.push_back(s[i + 1]);
                i += 2;
            } else {
                any = true;
                word.push_back(c);
                ++i;
            }
        }
        if (any) out.push_back(std::move(word));
    }
    return out;
}

std::string basename_of(const std::string& path) {
    size_t slash = path.rfind('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

TreeNode unknown_command(const std::string& text) {
    TreeNode node("UNKNOWN", text);
    node.eu = true;
    return node;
}

// Tokens the chosen subcommand path consumes, or nullopt if the path
// does not match. Flag tokens may interleave with path words.
std::optional<std::vector<size_t>> match_path(
    const std::vector<std::string>& tokens, const CommandSchema& schema) {
    std::vector<size_t> consumed;
    size_t path_idx = 1;  // tokens[0] already matched the tool word
    for (size_t t = 1; t < tokens.size() && path_idx < schema.command_path.size();
         ++t) {
        if (tokens[t] == schema.command_path[path_idx]) {
            consumed.push_back(t);
            ++path_idx;
        } else if (!tokens[t].empty() && tokens[t][0] == '-') {
            continue;
        } else {
            return std::nullopt;
        }
    }
    if (path_idx != schema.command_path.size()) return std::nullopt;
    return consumed;
}

struct OptionAccumulator {
    bool present = false;
    int count = 0;
    std::vector<std::string> values;
};

}  // namespace

TreeNode parse_command(const std::string& text,
                       const std::vector<CommandSchema>& schemas) {
    auto tokens = tokenize_command(text);
    if (tokens.empty()) return unknown_command(text);

    std::string tool = tokens[0];
    if (std::none_of(schemas.begin(), schemas.end(), [&](const CommandSchema& s) {
            return s.command_path[0] == tool;
        })) {
        std::string base = basename_of(tool);
        bool known = base != tool &&
                     std::any_of(schemas.begin(), schemas.end(),
                                 [&](const CommandSchema& s) {
                                     return s.command_path[0] == base;
                                 });
        if (!known) return unknown_command(text);
        tool = base;
    }

    const CommandSchema* chosen = nullptr;
    std::vector<size_t> path_consumed;
    for (const auto& schema : schemas) {
        if (schema.command_path[0] != tool) continue;
        auto consumed = match_path(tokens, schema);
        if (!consumed) continue;
        if (!chosen ||
            schema.command_path.size() > chosen->command_path.size()) {
            chosen = &schema;
            path_consumed = *consumed;
        }
    }
    if (!chosen) return unknown_command(text);

    std::vector<OptionAccumulator> acc(chosen->options.size());
    std::vector<std::string> unknown_flags;  // occurrence order
    std::vector<std::string> positionals;

    auto lookup = [&](const std::string& spelling) -> int {
        auto it = chosen->spelling_to_option.find(spelling);
        return it == chosen->spelling_to_option.end() ? -1 : it->second;
    };

    std::set<size_t> consumed(path_consumed.begin(), path_consumed.end());
    bool options_done = false;
    for (size_t t = 1; t < tokens.size(); ++t) {
        if (consumed.count(t)) continue;
        const std::string& tok = tokens[t];
        if (options_done || tok == "-" || tok.empty() || tok[0] != '-') {
            positionals.push_back(tok);
            continue;
        }
        if (tok == "--") {
            options_done = true;
            continue;
        }
        if (tok.rfind("--", 0) == 0) {
            size_t eq = tok.find('=');
            std::string name = eq == std::string::npos ? tok : tok.substr(0, eq);
            int idx = lookup(name);
            if (idx < 0) {
                unknown_flags.push_back(tok);
                continue;
            }
            const OptionSpec& spec = chosen->options[idx];
            if (spec.arity == OptionSpec::Arity::Valued) {
                if (eq != std::string::npos) {
                    acc[idx].values.push_back(tok.substr(eq + 1));
                } else if (t + 1 < tokens.size() && !consumed.count(t + 1)) {
                    acc[idx].values.push_back(tokens[t + 1]);
                    consumed.insert(t + 1);
                } else {
                    unknown_flags.push_back(tok);
                }
            } else if (eq != std::string::npos) {
                unknown_flags.push_back(tok);  // value on a no-value option
            } else if (spec.arity == OptionSpec::Arity::Counted) {
                ++acc[idx].count;
            } else {
                acc[idx].present = true;
            }
            continue;
        }

        // Single-dash token: an exact spelling wins over per-character
        // cluster expansion, so fused spellings like -rf stay one node.
        int whole = lookup(tok);
        if (whole >= 0) {
            const OptionSpec& spec = chosen->options[whole];
            if (spec.arity == OptionSpec::Arity::Valued) {
                if (t + 1 < tokens.size() && !consumed.count(t + 1)) {
                    acc[whole].values.push_back(tokens[t + 1]);
                    consumed.insert(t + 1);
                } else {
                    unknown_flags.push_back(tok);
                }
            } else if (spec.arity == OptionSpec::Arity::Counted) {
                ++acc[whole].count;
            } else {
                acc[whole].present = true;
            }
            continue;
        }

        struct ClusterOp {
            int idx;
            std::string value;
            bool has_value = false;
            bool needs_next = false;
        };
        std::vector<ClusterOp> ops;
        bool ok = true;
        for (size_t ci = 1; ci < tok.size() && ok; ++ci) {
            int idx = lookup(std::string("-") + tok[ci]);
            if (idx < 0) {
                ok = false;
                break;
            }
            const OptionSpec& spec = chosen->options[idx];
            if (spec.arity == OptionSpec::Arity::Valued) {
                ClusterOp op{idx, "", false, false};
                if (ci + 1 < tok.size()) {
                    op.value = tok.substr(ci + 1);
                    op.has_value = true;
                } else {
                    op.needs_next = true;
                }
                ops.push_back(op);
                break;
            }
            ops.push_back({idx, "", false, false});
        }
        if (!ok) {
            unknown_flags.push_back(tok);
            continue;
        }
        bool needs_next = !ops.empty() && ops.back().needs_next;
        if (needs_next && (t + 1 >= tokens.size() || consumed.count(t + 1))) {
            unknown_flags.push_back(tok);
            continue;
        }
        for (auto& op : ops) {
            const OptionSpec& spec = chosen->options[op.idx];
            if (spec.arity == OptionSpec::Arity::Valued) {
                if (op.has_value) {
                    acc[op.idx].values.push_back(op.value);
                } else {
                    acc[op.idx].values.push_back(tokens[t + 1]);
                    consumed.insert(t + 1);
                }
            } else if (spec.arity == OptionSpec::Arity::Counted) {
                ++acc[op.idx].count;
            } else {
                acc[op.idx].present = true;
            }
        }
    }

    TreeNode root(chosen->root_kind);
    for (size_t i = 0; i < chosen->options.size(); ++i) {
        const OptionSpec& spec = chosen->options[i];
        if (spec.arity == OptionSpec::Arity::Plain && acc[i].present) {
            root.children.emplace_back(spec.kind);
        } else if (spec.arity == OptionSpec::Arity::Counted && acc[i].count > 0) {
            TreeNode node(spec.kind, std::to_string(acc[i].count));
            node.count_leaf = true;
            root.children.push_back(std::move(node));
        } else if (spec.arity == OptionSpec::Arity::Valued) {
            for (const auto& v : acc[i].values) {
                TreeNode node(spec.kind);
                node.children.emplace_back(spec.value_kind, v);
                root.children.push_back(std::move(node));
            }
        }
    }
    for (const auto& uf : unknown_flags) {
        TreeNode node("UNKNOWN-FLAG", uf);
        node.eu = true;
        root.children.push_back(std::move(node));
    }

    size_t p = 0;
    for (const auto& spec : chosen->positionals) {
        size_t take = spec.exact_count < 0
                          ? positionals.size() - p
                          : std::min<size_t>(spec.exact_count,
                                             positionals.size() - p);
        if (take == 0) continue;
        if (spec.collection_kind.empty()) {
            for (size_t k = 0; k < take; ++k)
                root.children.emplace_back(spec.item_kind, positionals[p + k]);
        } else {
            TreeNode coll(spec.collection_kind);
            for (size_t k = 0; k < take; ++k)
                coll.children.emplace_back(spec.item_kind, positionals[p + k]);
            root.children.push_back(std::move(coll));
        }
        p += take;
    }
    for (; p < positionals.size(); ++p) {
        TreeNode node("UNKNOWN-ARG", positionals[p]);
        node.eu = true;
        root.children.push_back(std::move(node));
    }
    return root;
}

namespace {

void stamp_span(TreeNode& n, const std::optional<SourceSpan>& span) {
    if (!n.span) n.span = span;
    for (auto& c : n.children) stamp_span(c, span);
}

void expand_commands(TreeNode& node, const std::vector<CommandSchema>& schemas,
                     std::map<int, bool>& resolved) {
    if (node.kind == "BASH-COMMAND" && node.literal) {
        TreeNode child;
        if (node.degraded) {
            child = unknown_command(*node.literal);
        } else {
            child = parse_command(*node.literal, schemas);
        }
        bool ok = child.kind != "UNKNOWN";
        if (node.origin_id) {
            resolved[*node.origin_id] = ok;
            if (!ok) child.origin_id = node.origin_id;
        }
        stamp_span(child, node.span);
        node.literal.reset();
        node.eu = false;
        node.origin_id.reset();
        node.degraded = false;
        node.children.push_back(std::move(child));
        return;
    }
    for (auto& c : node.children) expand_commands(c, schemas, resolved);
}

}  // namespace

Phase3Result enrich_phase3(const TreeNode& phase2,
                           const std::vector<CommandSchema>& schemas) {
    Phase3Result out;
    out.tree = phase2;
    expand_commands(out.tree, schemas, out.resolved);
    return out;
}

}  // namespace dockrule
