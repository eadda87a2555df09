#include "dockrule/sexp.hpp"

#include <cctype>
#include <sstream>

namespace dockrule {

std::string escape_literal(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

namespace {

void encode_impl(const TreeNode& t, bool annotated, std::string& out) {
    out.push_back('(');
    out += t.kind;
    if (annotated) {
        if (t.origin_id) out += ":id=" + std::to_string(*t.origin_id);
        if (t.eu) out += ":eu";
        if (t.count_leaf) out += ":count";
        if (t.degraded) out += ":degraded";
        if (t.span) {
            std::ostringstream ss;
            ss << ":span=" << t.span->line_begin << '.' << t.span->col_begin
               << '-' << t.span->line_end << '.' << t.span->col_end;
            out += ss.str();
        }
        if (t.original_literal)
            out += ":orig=\"" + escape_literal(*t.original_literal) + "\"";
    }
    if (t.literal) {
        out += " \"" + escape_literal(*t.literal) + "\"";
    }
    for (const auto& c : t.children) {
        out.push_back(' ');
        encode_impl(c, annotated, out);
    }
    out.push_back(')');
}

class Decoder {
  public:
    explicit Decoder(const std::string& text) : text_(text) {}

    TreeNode run() {
        skip_ws();
        TreeNode root = parse_node();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing content after tree");
        return root;
    }

  private:
    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError("sexp: " + msg, line_, col_);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r')
                advance();
            else
                break;
        }
    }

    void expect(char c) {
        if (eof() || peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string parse_quoted() {
        expect('"');
        std::string out;
        while (true) {
            if (eof()) fail("unterminated string literal");
            char c = advance();
            if (c == '"') break;
            if (c == '\\') {
                if (eof()) fail("unterminated escape");
                char e = advance();
                if (e != '"' && e != '\\') fail("invalid escape sequence");
                out.push_back(e);
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    int parse_int() {
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected a number");
        long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (advance() - '0');
            if (v > 1000000000L) fail("number out of range");
        }
        return static_cast<int>(v);
    }

    void parse_annotation(TreeNode& node) {
        advance();  // ':'
        std::string name;
        while (!eof() &&
               (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            name.push_back(advance());
        if (name == "id") {
            expect('=');
            node.origin_id = parse_int();
        } else if (name == "eu") {
            node.eu = true;
        } else if (name == "count") {
            node.count_leaf = true;
        } else if (name == "degraded") {
            node.degraded = true;
        } else if (name == "span") {
            expect('=');
            SourceSpan s;
            s.line_begin = parse_int();
            expect('.');
            s.col_begin = parse_int();
            expect('-');
            s.line_end = parse_int();
            expect('.');
            s.col_end = parse_int();
            node.span = s;
        } else if (name == "orig") {
            expect('=');
            node.original_literal = parse_quoted();
        } else {
            fail("unknown annotation ':" + name + "'");
        }
    }

    TreeNode parse_node() {
        if (eof() || peek() != '(') fail("expected '('");
        advance();
        TreeNode node;
        while (!eof()) {
            char c = peek();
            bool kind_char = (c >= 'A' && c <= 'Z') ||
                             (c >= '0' && c <= '9') || c == '-';
            if (!kind_char) break;
            node.kind.push_back(advance());
        }
        if (node.kind.empty()) fail("expected a node kind");
        while (!eof() && peek() == ':') parse_annotation(node);
        while (true) {
            skip_ws();
            if (eof()) fail("unterminated node");
            char c = peek();
            if (c == ')') {
                advance();
                break;
            }
            if (c == '"') {
                if (node.literal) fail("node has more than one literal");
                if (!node.children.empty())
                    fail("literal must precede children");
                node.literal = parse_quoted();
            } else if (c == '(') {
                node.children.push_back(parse_node());
            } else {
                fail("unexpected character");
            }
        }
        return node;
    }
};

}  // namespace

std::string sexp_encode(const TreeNode& t) {
    std::string out;
    encode_impl(t, false, out);
    return out;
}

std::string sexp_encode_annotated(const TreeNode& t) {
    std::string out;
    encode_impl(t, true, out);
    return out;
}

TreeNode sexp_decode(const std::string& text) {
    return Decoder(text).run();
}

}  // namespace dockrule
