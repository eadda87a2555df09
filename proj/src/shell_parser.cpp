#include "dockrule/shell_parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace dockrule {

namespace {

std::string trim_ws(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Raised when the payload leaves the supported shell fragment; the
// caller then keeps the whole payload opaque.
struct Degrade {
    std::string reason;
};

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> r = {
        "if",   "then", "else",  "elif",   "fi",   "for",  "while",
        "until", "do",  "done",  "case",   "esac", "function", "select",
        "time", "coproc", "[[",  "{",      "}",    "!"};
    return r;
}

class ShellParser {
  public:
    explicit ShellParser(const std::string& text) : s_(text) {}

    TreeNode run() { return parse_seq(0, s_.size()); }

  private:
    const std::string& s_;

    // --- character scanning -------------------------------------------

    // Skips a quoted or substitution region starting at i; returns the
    // index one past its end.
    size_t skip_region(size_t i, size_t end) {
        char c = s_[i];
        if (c == '\'') {
            for (++i; i < end; ++i)
                if (s_[i] == '\'') return i + 1;
            throw Degrade{"unterminated single quote"};
        }
        if (c == '"') {
            for (++i; i < end; ++i) {
                if (s_[i] == '\\') {
                    ++i;
                    continue;
                }
                if (s_[i] == '`') {
                    i = skip_region(i, end) - 1;
                    continue;
                }
                if (s_[i] == '$' && i + 1 < end &&
                    (s_[i + 1] == '(' || s_[i + 1] == '{')) {
                    i = skip_region(i + 1, end) - 1;
                    continue;
                }
                if (s_[i] == '"') return i + 1;
            }
            throw Degrade{"unterminated double quote"};
        }
        if (c == '`') {
            for (++i; i < end; ++i) {
                if (s_[i] == '\\') {
                    ++i;
                    continue;
                }
                if (s_[i] == '`') return i + 1;
            }
            throw Degrade{"unterminated backquote substitution"};
        }
        if (c == '(') {  // $( ... ), quote-aware, nestable
            int depth = 0;
            for (; i < end; ++i) {
                char d = s_[i];
                if (d == '\\') {
                    ++i;
                    continue;
                }
                if (d == '\'' || d == '"' || d == '`') {
                    i = skip_region(i, end) - 1;
                    continue;
                }
                if (d == '(') ++depth;
                if (d == ')') {
                    if (--depth == 0) return i + 1;
                }
            }
            throw Degrade{"unterminated command substitution"};
        }
        if (c == '{') {  // ${ ... }
            int depth = 0;
            for (; i < end; ++i) {
                char d = s_[i];
                if (d == '\\') {
                    ++i;
                    continue;
                }
                if (d == '\'' || d == '"') {
                    i = skip_region(i, end) - 1;
                    continue;
                }
                if (d == '{') ++depth;
                if (d == '}') {
                    if (--depth == 0) return i + 1;
                }
            }
            throw Degrade{"unterminated parameter expansion"};
        }
        return i + 1;
    }

    struct OpHit {
        size_t pos;
        size_t len;
        std::string op;
    };

    // Connective operators at structural-paren depth 0, outside quotes
    // and substitutions.
    std::vector<OpHit> scan_ops(size_t begin, size_t end) {
        std::vector<OpHit> hits;
        int depth = 0;
        size_t i = begin;
        while (i < end) {
            char c = s_[i];
            if (c == '\\') {
                i += 2;
                continue;
            }
            if (c == '\'' || c == '"' || c == '`') {
                i = skip_region(i, end);
                continue;
            }
            if (c == '$' && i + 1 < end && (s_[i + 1] == '(' || s_[i + 1] == '{')) {
                i = skip_region(i + 1, end);
                continue;
            }
            if (c == '(') {
                ++depth;
                ++i;
                continue;
            }
            if (c == ')') {
                if (--depth < 0) throw Degrade{"unbalanced ')'"};
                ++i;
                continue;
            }
            if (depth > 0) {
                ++i;
                continue;
            }
            if (c == ';') {
                hits.push_back({i, 1, ";"});
                ++i;
            } else if (c == '\n') {
                hits.push_back({i, 1, ";"});
                ++i;
            } else if (c == '&') {
                if (i + 1 < end && s_[i + 1] == '&') {
                    hits.push_back({i, 2, "&&"});
                    i += 2;
                } else if (i > begin && (s_[i - 1] == '>' || s_[i - 1] == '<')) {
                    ++i;  // fd duplication, handled by redirect parsing
                } else if (i + 1 < end && s_[i + 1] == '>') {
                    i += 2;  // bash &> redirect
                } else {
                    hits.push_back({i, 1, "&"});
                    ++i;
                }
            } else if (c == '|') {
                if (i + 1 < end && s_[i + 1] == '|') {
                    hits.push_back({i, 2, "||"});
                    i += 2;
                } else if (i + 1 < end && s_[i + 1] == '&') {
                    hits.push_back({i, 2, "|&"});
                    i += 2;
                } else {
                    hits.push_back({i, 1, "|"});
                    ++i;
                }
            } else {
                ++i;
            }
        }
        if (depth != 0) throw Degrade{"unbalanced '('"};
        return hits;
    }

    bool blank_range(size_t b, size_t e) {
        for (size_t i = b; i < e; ++i)
            if (!std::isspace(static_cast<unsigned char>(s_[i]))) return false;
        return true;
    }

    // --- grammar -------------------------------------------------------

    TreeNode parse_seq(size_t begin, size_t end) {
        auto hits = scan_ops(begin, end);
        for (const auto& h : hits) {
            if (h.op == "&") throw Degrade{"background '&' is not supported"};
            if (h.op == "|&") throw Degrade{"'|&' is not supported"};
        }
        std::vector<std::pair<size_t, size_t>> segs;
        size_t cur = begin;
        for (const auto& h : hits) {
            if (h.op != ";") continue;
            segs.emplace_back(cur, h.pos);
            cur = h.pos + h.len;
        }
        segs.emplace_back(cur, end);
        // Leading and trailing separators are tolerated; an empty
        // segment between two commands is not.
        while (!segs.empty() && blank_range(segs.front().first, segs.front().second))
            segs.erase(segs.begin());
        while (!segs.empty() && blank_range(segs.back().first, segs.back().second))
            segs.pop_back();
        if (segs.empty()) throw Degrade{"empty command"};
        for (const auto& seg : segs)
            if (blank_range(seg.first, seg.second))
                throw Degrade{"empty command between separators"};
        if (segs.size() == 1) return parse_andor(segs[0].first, segs[0].second);
        TreeNode node("BASH-SEQ");
        for (const auto& seg : segs)
            node.children.push_back(parse_andor(seg.first, seg.second));
        return node;
    }

    TreeNode parse_andor(size_t begin, size_t end) {
        auto hits = scan_ops(begin, end);
        std::vector<OpHit> ops;
        for (const auto& h : hits)
            if (h.op == "&&" || h.op == "||") ops.push_back(h);
        if (ops.empty()) return parse_pipe(begin, end);

        // Left-associative fold; runs of one operator flatten.
        size_t cur = begin;
        TreeNode acc;
        bool acc_connective = false;
        bool first = true;
        for (size_t k = 0; k <= ops.size(); ++k) {
            size_t seg_b = cur;
            size_t seg_e = (k < ops.size()) ? ops[k].pos : end;
            if (blank_range(seg_b, seg_e)) throw Degrade{"missing operand"};
            TreeNode operand = parse_pipe(seg_b, seg_e);
            if (first) {
                acc = std::move(operand);
                first = false;
            } else {
                std::string op_kind = ops[k - 1].op == "&&" ? "BASH-AND" : "BASH-OR";
                if (acc_connective && acc.kind == op_kind) {
                    acc.children.push_back(std::move(operand));
                } else {
                    TreeNode node(op_kind);
                    node.children.push_back(std::move(acc));
                    node.children.push_back(std::move(operand));
                    acc = std::move(node);
                    acc_connective = true;
                }
            }
            if (k < ops.size()) cur = ops[k].pos + ops[k].len;
        }
        return acc;
    }

    TreeNode parse_pipe(size_t begin, size_t end) {
        auto hits = scan_ops(begin, end);
        std::vector<size_t> cuts;
        for (const auto& h : hits)
            if (h.op == "|") cuts.push_back(h.pos);
        if (cuts.empty()) return parse_unit(begin, end);
        TreeNode node("BASH-PIPE");
        size_t cur = begin;
        for (size_t pos : cuts) {
            if (blank_range(cur, pos)) throw Degrade{"missing pipeline operand"};
            node.children.push_back(parse_unit(cur, pos));
            cur = pos + 1;
        }
        if (blank_range(cur, end)) throw Degrade{"missing pipeline operand"};
        node.children.push_back(parse_unit(cur, end));
        return node;
    }

    TreeNode parse_unit(size_t begin, size_t end) {
        while (begin < end && std::isspace(static_cast<unsigned char>(s_[begin])))
            ++begin;
        while (end > begin && std::isspace(static_cast<unsigned char>(s_[end - 1])))
            --end;
        if (begin >= end) throw Degrade{"empty command"};
        if (s_[begin] == '(') {
            size_t close = skip_region(begin, end);  // '(' path counts parens
            if (close != end)
                throw Degrade{"text after subshell close"};
            TreeNode node("BASH-SUBSHELL");
            node.children.push_back(parse_seq(begin + 1, close - 1));
            return node;
        }
        return parse_simple(begin, end);
    }

    struct Word {
        std::string raw;
        bool leading_unquoted = true;  // starts outside quotes
    };

    std::vector<Word> split_words(size_t begin, size_t end) {
        std::vector<Word> words;
        size_t i = begin;
        while (i < end) {
            while (i < end && std::isspace(static_cast<unsigned char>(s_[i]))) ++i;
            if (i >= end) break;
            Word w;
            w.leading_unquoted = s_[i] != '\'' && s_[i] != '"';
            size_t start = i;
            while (i < end && !std::isspace(static_cast<unsigned char>(s_[i]))) {
                char c = s_[i];
                if (c == '\\') {
                    i += 2;
                    continue;
                }
                if (c == '\'' || c == '"' || c == '`') {
                    i = skip_region(i, end);
                    continue;
                }
                if (c == '$' && i + 1 < end && (s_[i + 1] == '(' || s_[i + 1] == '{')) {
                    i = skip_region(i + 1, end);
                    continue;
                }
                if (c == '(' || c == ')')
                    throw Degrade{"parenthesis inside a command"};
                if (c == '<' || c == '>') break;
                if (c == '&' && i + 1 < end && s_[i + 1] == '>') break;
                ++i;
            }
            w.raw = s_.substr(start, i - start);
            if (!w.raw.empty()) words.push_back(w);

            // Redirect operator?
            if (i < end && (s_[i] == '<' || s_[i] == '>' ||
                            (s_[i] == '&' && i + 1 < end && s_[i + 1] == '>'))) {
                // Marker word starting with \x01 carries the operator;
                // the target follows as the next word.
                if (!words.empty() && !words.back().raw.empty() &&
                    words.back().raw.find_first_not_of("0123456789") ==
                        std::string::npos &&
                    start == i - words.back().raw.size() &&
                    (s_[i] == '<' || s_[i] == '>')) {
                    words.pop_back();  // fd prefix belongs to the operator
                }
                std::string op;
                if (s_[i] == '&') {
                    op = "&>";
                    i += 2;
                } else {
                    op.push_back(s_[i]);
                    ++i;
                    if (i < end && s_[i] == op[0]) {
                        op.push_back(s_[i]);
                        ++i;
                    }
                    if (op == "<<") throw Degrade{"heredoc is not supported"};
                    if (i < end && s_[i] == '&') {
                        op.push_back(s_[i]);
                        ++i;
                    }
                }
                Word marker;
                marker.raw = std::string(1, '\x01') + op;
                words.push_back(marker);
            }
        }
        return words;
    }

    TreeNode parse_simple(size_t begin, size_t end) {
        auto words = split_words(begin, end);
        if (words.empty()) throw Degrade{"empty command"};

        std::vector<std::string> assigns;
        std::vector<std::string> command;
        std::vector<std::string> targets;
        bool want_target = false;
        bool in_prefix = true;
        for (auto& w : words) {
            if (!w.raw.empty() && w.raw[0] == '\x01') {
                if (want_target) throw Degrade{"redirect missing target"};
                want_target = true;
                targets.emplace_back();  // filled by the next word
                continue;
            }
            if (want_target) {
                targets.back() = w.raw;
                want_target = false;
                continue;
            }
            if (in_prefix && w.leading_unquoted && looks_like_assignment(w.raw)) {
                assigns.push_back(w.raw);
                continue;
            }
            in_prefix = false;
            command.push_back(w.raw);
        }
        if (want_target) throw Degrade{"redirect missing target"};
        if (command.empty() && assigns.empty())
            throw Degrade{"redirect without a command"};
        if (!command.empty() && reserved_words().count(command[0]))
            throw Degrade{"shell keyword '" + command[0] + "' is not supported"};
        if (command.empty() && !targets.empty())
            throw Degrade{"redirect without a command"};

        TreeNode inner;
        if (!command.empty()) {
            std::string text;
            for (size_t k = 0; k < command.size(); ++k) {
                if (k) text.push_back(' ');
                text += command[k];
            }
            inner = TreeNode("BASH-COMMAND", text);
            inner.eu = true;
        }
        if (!targets.empty()) {
            TreeNode redir("BASH-REDIRECT");
            redir.children.push_back(std::move(inner));
            for (auto& t : targets)
                redir.children.emplace_back("REDIRECT-TARGET", t);
            inner = std::move(redir);
        }
        if (!assigns.empty()) {
            TreeNode asg("BASH-ASSIGN");
            for (auto& a : assigns) asg.children.emplace_back("ASSIGN-PAIR", a);
            if (!command.empty()) asg.children.push_back(std::move(inner));
            inner = std::move(asg);
        }
        return inner;
    }

    static bool looks_like_assignment(const std::string& w) {
        size_t eq = w.find('=');
        if (eq == std::string::npos || eq == 0) return false;
        if (!std::isalpha(static_cast<unsigned char>(w[0])) && w[0] != '_')
            return false;
        for (size_t i = 1; i < eq; ++i) {
            char c = w[i];
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                return false;
        }
        return true;
    }
};

}  // namespace

ShellParse parse_shell(const std::string& payload) {
    ShellParse out;
    try {
        ShellParser p(payload);
        out.root = p.run();
        return out;
    } catch (const Degrade& d) {
        TreeNode node("BASH-COMMAND", trim_ws(payload));
        node.eu = true;
        node.degraded = true;
        out.root = std::move(node);
        out.warnings.push_back("shell payload kept opaque: " + d.reason);
        return out;
    }
}

namespace {

void stamp_shell(TreeNode& n, const std::optional<SourceSpan>& span,
                 int& next_id) {
    if (!n.span) n.span = span;
    if (n.kind == "BASH-COMMAND" && n.literal) n.origin_id = next_id++;
    for (auto& c : n.children) stamp_shell(c, span, next_id);
}

}  // namespace

Phase2Result enrich_phase2(const TreeNode& phase1) {
    Phase2Result out;
    out.tree = phase1;
    int next_id = max_origin_id(phase1) + 1;
    for (auto& child : out.tree.children) {
        if (child.kind != "DOCKER-RUN" || !child.literal) continue;
        ShellParse sp = parse_shell(*child.literal);
        for (auto& w : sp.warnings) {
            std::string where =
                child.span ? "line " + std::to_string(child.span->line_begin) + ": "
                           : "";
            out.warnings.push_back(where + w);
        }
        stamp_shell(sp.root, child.span, next_id);
        child.literal.reset();
        child.eu = false;
        child.origin_id.reset();
        child.children.clear();
        child.children.push_back(std::move(sp.root));
    }
    return out;
}

}  // namespace dockrule
