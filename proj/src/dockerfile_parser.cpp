#include "dockrule/dockerfile_parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include <json.hpp>

namespace dockrule {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t") == std::string::npos;
}

bool is_comment(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    return b != std::string::npos && s[b] == '#';
}

struct Token {
    std::string value;  // quotes stripped
    size_t begin = 0;   // offsets into the payload string
    size_t end = 0;
};

// Splits on unquoted whitespace; single and double quote pairs group
// characters and are stripped from the value.
std::vector<Token> split_tokens(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        if (i >= s.size()) break;
        Token t;
        t.begin = i;
        char quote = 0;
        while (i < s.size()) {
            char c = s[i];
            if (quote) {
                if (c == quote)
                    quote = 0;
                else
                    t.value.push_back(c);
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == ' ' || c == '\t') {
                break;
            } else {
                t.value.push_back(c);
            }
            ++i;
        }
        t.end = i;
        out.push_back(std::move(t));
    }
    return out;
}

const std::set<std::string>& known_instructions() {
    static const std::set<std::string> k = {
        "FROM",    "RUN",        "CMD",     "ENTRYPOINT", "ENV",
        "LABEL",   "EXPOSE",     "WORKDIR", "USER",       "VOLUME",
        "COPY",    "ADD",        "ARG",     "STOPSIGNAL", "SHELL",
        "MAINTAINER", "ONBUILD", "HEALTHCHECK"};
    return k;
}

struct LogicalLine {
    std::string text;  // spliced, continuation escapes removed
    int line_begin = 0;
    int line_end = 0;
};

class DockerfileParser {
  public:
    explicit DockerfileParser(const std::string& text) { split_lines(text); }

    TreeNode run() {
        scan_parser_directives();
        assemble_logical_lines();
        if (logical_.empty())
            throw ParseError("dockerfile: no instructions found", 1, 1);

        TreeNode root("DOCKER-FILE");
        root.span = SourceSpan{1, 1, static_cast<int>(lines_.size()),
                               lines_.empty()
                                   ? 1
                                   : static_cast<int>(lines_.back().size()) + 1};
        for (const auto& ll : logical_) root.children.push_back(directive(ll));
        return root;
    }

  private:
    std::vector<std::string> lines_;
    std::vector<LogicalLine> logical_;
    char escape_char_ = '\\';
    int next_origin_id_ = 1;

    void split_lines(const std::string& text) {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                if (!cur.empty() && cur.back() == '\r') cur.pop_back();
                lines_.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) {
            if (cur.back() == '\r') cur.pop_back();
            lines_.push_back(cur);
        }
    }

    // Consecutive leading '# key=value' comments may adjust the parser;
    // only 'escape' is honored, unknown keys are plain comments.
    void scan_parser_directives() {
        for (const auto& line : lines_) {
            size_t b = line.find_first_not_of(" \t");
            if (b == std::string::npos || line[b] != '#') break;
            std::string body = trim(line.substr(b + 1));
            size_t eq = body.find('=');
            if (eq == std::string::npos) break;
            std::string key = trim(body.substr(0, eq));
            std::string value = trim(body.substr(eq + 1));
            if (key.find_first_of(" \t") != std::string::npos) break;
            if (upper(key) == "ESCAPE") {
                if (value == "\\")
                    escape_char_ = '\\';
                else if (value == "`")
                    escape_char_ = '`';
                else
                    throw ParseError(
                        "dockerfile: escape directive must be \\ or `", 1, 1);
            }
        }
    }

    void assemble_logical_lines() {
        size_t i = 0;
        while (i < lines_.size()) {
            if (is_blank(lines_[i]) || is_comment(lines_[i])) {
                ++i;
                continue;
            }
            LogicalLine ll;
            ll.line_begin = static_cast<int>(i) + 1;
            std::string acc = lines_[i];
            ++i;
            // A trailing escape splices the next content line verbatim;
            // comment and blank lines inside a continuation are dropped.
            while (!acc.empty() && acc.back() == escape_char_) {
                acc.pop_back();
                while (i < lines_.size() &&
                       (is_blank(lines_[i]) || is_comment(lines_[i])))
                    ++i;
                if (i >= lines_.size()) break;
                acc += lines_[i];
                ++i;
            }
            ll.line_end = static_cast<int>(i);
            ll.text = acc;
            logical_.push_back(std::move(ll));
        }
    }

    TreeNode directive(const LogicalLine& ll) {
        const std::string& s = ll.text;
        size_t kw_begin = s.find_first_not_of(" \t");
        size_t kw_end = kw_begin;
        while (kw_end < s.size() && !std::isspace(static_cast<unsigned char>(s[kw_end])))
            ++kw_end;
        std::string name = upper(s.substr(kw_begin, kw_end - kw_begin));
        if (!known_instructions().count(name))
            throw ParseError("dockerfile: unknown instruction '" +
                                 s.substr(kw_begin, kw_end - kw_begin) + "'",
                             ll.line_begin, static_cast<int>(kw_begin) + 1);
        std::string rest = trim(kw_end >= s.size() ? "" : s.substr(kw_end));
        if (rest.empty())
            throw ParseError("dockerfile: " + name + " has no arguments",
                             ll.line_begin, static_cast<int>(kw_begin) + 1);

        TreeNode node("DOCKER-" + name);
        node.span = SourceSpan{ll.line_begin, static_cast<int>(kw_begin) + 1,
                               ll.line_end,
                               static_cast<int>(lines_[ll.line_end - 1].size()) + 1};
        build(node, name, rest, ll);
        return node;
    }

    [[noreturn]] void bad(const LogicalLine& ll, const std::string& msg) {
        throw ParseError("dockerfile: " + msg, ll.line_begin, 1);
    }

    std::vector<std::string> json_string_array(const std::string& text,
                                               const LogicalLine& ll) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception&) {
            bad(ll, "malformed exec-form JSON array");
        }
        if (!j.is_array()) bad(ll, "exec form must be a JSON array");
        std::vector<std::string> out;
        for (const auto& el : j) {
            if (!el.is_string())
                bad(ll, "exec-form array elements must be strings");
            out.push_back(el.get<std::string>());
        }
        return out;
    }

    TreeNode exec_form(const std::string& rest, const LogicalLine& ll) {
        TreeNode ef("EXEC-FORM");
        for (auto& arg : json_string_array(rest, ll))
            ef.children.emplace_back("EXEC-ARG", arg);
        return ef;
    }

    void build(TreeNode& node, const std::string& name, const std::string& rest,
               const LogicalLine& ll) {
        if (name == "RUN" || name == "CMD" || name == "ENTRYPOINT") {
            if (rest[0] == '[') {
                node.children.push_back(exec_form(rest, ll));
            } else {
                node.literal = rest;
                node.eu = true;
                node.origin_id = next_origin_id_++;
            }
        } else if (name == "SHELL") {
            if (rest[0] != '[') bad(ll, "SHELL requires JSON array form");
            node.children.push_back(exec_form(rest, ll));
        } else if (name == "FROM") {
            build_from(node, rest, ll);
        } else if (name == "ENV") {
            build_pairs(node, rest, ll, "ENV-PAIR", "ENV-KEY", "ENV-VALUE");
        } else if (name == "LABEL") {
            build_pairs(node, rest, ll, "LABEL-PAIR", "LABEL-KEY", "LABEL-VALUE");
        } else if (name == "EXPOSE") {
            for (auto& t : split_tokens(rest))
                node.children.emplace_back("PORT", t.value);
        } else if (name == "WORKDIR") {
            node.children.emplace_back("PATH", rest);
        } else if (name == "USER") {
            node.children.emplace_back("USER-NAME", rest);
        } else if (name == "VOLUME") {
            if (rest[0] == '[') {
                for (auto& el : json_string_array(rest, ll))
                    node.children.emplace_back("PATH", el);
            } else {
                for (auto& t : split_tokens(rest))
                    node.children.emplace_back("PATH", t.value);
            }
        } else if (name == "COPY" || name == "ADD") {
            build_copy(node, rest, ll);
        } else if (name == "ARG") {
            auto toks = split_tokens(rest);
            if (toks.size() != 1) bad(ll, "ARG takes exactly one name");
            size_t eq = toks[0].value.find('=');
            if (eq == std::string::npos) {
                node.children.emplace_back("ARG-NAME", toks[0].value);
            } else {
                if (eq == 0) bad(ll, "ARG has an empty name");
                node.children.emplace_back("ARG-NAME", toks[0].value.substr(0, eq));
                node.children.emplace_back("ARG-DEFAULT",
                                           toks[0].value.substr(eq + 1));
            }
        } else if (name == "STOPSIGNAL") {
            node.children.emplace_back("SIGNAL", rest);
        } else {
            // MAINTAINER, ONBUILD, HEALTHCHECK stay opaque.
            node.children.emplace_back("TEXT", rest);
        }
    }

    void build_from(TreeNode& node, const std::string& rest,
                    const LogicalLine& ll) {
        auto toks = split_tokens(rest);
        size_t i = 0;
        while (i < toks.size() && toks[i].value.rfind("--", 0) == 0) {
            node.children.emplace_back("DIRECTIVE-FLAG", toks[i].value);
            ++i;
        }
        if (i >= toks.size()) bad(ll, "FROM needs an image reference");
        const std::string ref = toks[i].value;
        ++i;

        size_t at = ref.find('@');
        if (at != std::string::npos) {
            if (at == 0 || at + 1 >= ref.size())
                bad(ll, "FROM has a malformed image digest");
            node.children.emplace_back("IMAGE", ref.substr(0, at));
            node.children.emplace_back("DIGEST", ref.substr(at + 1));
        } else {
            size_t slash = ref.rfind('/');
            size_t colon = ref.rfind(':');
            if (colon != std::string::npos &&
                (slash == std::string::npos || colon > slash)) {
                node.children.emplace_back("IMAGE", ref.substr(0, colon));
                node.children.emplace_back("TAG", ref.substr(colon + 1));
            } else {
                node.children.emplace_back("IMAGE", ref);
                node.children.emplace_back("TAG", "latest");
            }
        }
        if (i < toks.size()) {
            if (upper(toks[i].value) != "AS" || i + 1 >= toks.size())
                bad(ll, "FROM allows only 'AS <stage>' after the image");
            node.children.emplace_back("STAGE-NAME", toks[i + 1].value);
            i += 2;
        }
        if (i < toks.size()) bad(ll, "FROM has trailing tokens");
    }

    void build_pairs(TreeNode& node, const std::string& rest,
                     const LogicalLine& ll, const char* pair_kind,
                     const char* key_kind, const char* value_kind) {
        auto toks = split_tokens(rest);
        if (toks.empty()) bad(ll, "expected key value pairs");
        bool kv_form = toks[0].value.find('=') != std::string::npos;
        if (kv_form) {
            for (auto& t : toks) {
                size_t eq = t.value.find('=');
                if (eq == std::string::npos || eq == 0)
                    bad(ll, "expected key=value pairs");
                TreeNode pair(pair_kind);
                pair.children.emplace_back(key_kind, t.value.substr(0, eq));
                pair.children.emplace_back(value_kind, t.value.substr(eq + 1));
                node.children.push_back(std::move(pair));
            }
        } else {
            // Legacy space-separated form defines a single pair.
            if (toks.size() < 2) bad(ll, "expected a key and a value");
            std::string value = trim(rest.substr(toks[0].end));
            TreeNode pair(pair_kind);
            pair.children.emplace_back(key_kind, toks[0].value);
            pair.children.emplace_back(value_kind, value);
            node.children.push_back(std::move(pair));
        }
    }

    void build_copy(TreeNode& node, const std::string& rest,
                    const LogicalLine& ll) {
        auto toks = split_tokens(rest);
        size_t i = 0;
        while (i < toks.size() && toks[i].value.rfind("--", 0) == 0) {
            node.children.emplace_back("DIRECTIVE-FLAG", toks[i].value);
            ++i;
        }
        if (i >= toks.size()) bad(ll, "needs at least one path");
        std::string remainder = trim(rest.substr(toks[i].begin));
        if (remainder[0] == '[') {
            for (auto& el : json_string_array(remainder, ll))
                node.children.emplace_back("PATH", el);
        } else {
            for (; i < toks.size(); ++i)
                node.children.emplace_back("PATH", toks[i].value);
        }
    }
};

}  // namespace

TreeNode parse_dockerfile(const std::string& text) {
    return DockerfileParser(text).run();
}

}  // namespace dockrule
