#include "support/random_trees.hpp"

#include <string>

namespace dockrule::testing {

namespace {

int draw(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(std::mt19937& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <typename T>
const T& pick(std::mt19937& rng, const std::vector<T>& pool) {
    return pool[static_cast<size_t>(draw(rng, 0, static_cast<int>(pool.size()) - 1))];
}

struct Budget {
    int left;
    bool take(int n = 1) {
        if (left < n) return false;
        left -= n;
        return true;
    }
};

// Optional nested value child, e.g. RM-PATH -> ABS-APT-LISTS.
TreeNode arg_node(std::mt19937& rng, Budget& b, const std::string& kind,
                  const std::vector<std::string>& abs_pool) {
    TreeNode n(kind);
    if (!abs_pool.empty() && b.left > 0 && chance(rng, 0.6)) {
        b.take();
        n.children.emplace_back(pick(rng, abs_pool));
    }
    return n;
}

TreeNode random_command(std::mt19937& rng, Budget& b) {
    static const std::vector<std::string> abs_paths = {
        "ABS-APT-LISTS",     "ABS-EXTENSION-TAR", "ABS-EXTENSION-ASC",
        "ABS-PATH-ABS",      "ABS-PATH-REL",      "ABS-USR-SRC",
        "ABS-VAR-CACHE-YUM", "ABS-GLOB"};
    static const std::vector<std::string> abs_urls = {"ABS-URL-HTTPS",
                                                      "ABS-URL-HTTP"};

    int which = draw(rng, 0, 15);
    b.take();
    switch (which) {
        case 0: {
            TreeNode n("APT-GET-INSTALL");
            if (b.left > 0 && chance(rng, 0.7)) { b.take(); n.children.emplace_back("FLAG-YES"); }
            if (b.left > 0 && chance(rng, 0.5)) { b.take(); n.children.emplace_back("FLAG-NO-RECOMMENDS"); }
            if (b.left > 1 && chance(rng, 0.7)) {
                b.take(2);
                TreeNode pkgs("PACKAGES");
                pkgs.children.emplace_back("PACKAGE");
                while (b.left > 0 && chance(rng, 0.4)) { b.take(); pkgs.children.emplace_back("PACKAGE"); }
                n.children.push_back(std::move(pkgs));
            }
            return n;
        }
        case 1:
            return TreeNode("APT-GET-UPDATE");
        case 2: {
            TreeNode n("APK-ADD");
            if (b.left > 0 && chance(rng, 0.6)) { b.take(); n.children.emplace_back("FLAG-NO-CACHE"); }
            return n;
        }
        case 3: {
            TreeNode n("CURL");
            if (b.left > 0 && chance(rng, 0.6)) { b.take(); n.children.emplace_back("FLAG-FAIL"); }
            if (b.left > 0 && chance(rng, 0.4)) { b.take(); n.children.emplace_back("FLAG-SILENT"); }
            if (b.left > 0 && chance(rng, 0.8)) { b.take(); n.children.push_back(arg_node(rng, b, "SC-CURL-URL", abs_urls)); }
            return n;
        }
        case 4: {
            TreeNode n("WGET");
            if (b.left > 0 && chance(rng, 0.8)) { b.take(); n.children.push_back(arg_node(rng, b, "SC-WGET-URL", abs_urls)); }
            return n;
        }
        case 5: {
            TreeNode n("GPG");
            if (b.left > 0 && chance(rng, 0.5)) { b.take(); n.children.emplace_back("FLAG-BATCH"); }
            if (b.left > 0 && chance(rng, 0.4)) { b.take(); n.children.emplace_back("FLAG-VERIFY"); }
            if (b.left > 0 && chance(rng, 0.4)) {
                b.take();
                std::vector<std::string> pools = {"ABS-HA-POOLS"};
                n.children.push_back(arg_node(rng, b, "SC-GPG-KEYSERVER", pools));
            }
            if (b.left > 0 && chance(rng, 0.4)) {
                b.take();
                std::vector<std::string> asc = {"ABS-EXTENSION-ASC"};
                n.children.push_back(arg_node(rng, b, "SC-GPG-ARG", asc));
            }
            return n;
        }
        case 6: {
            TreeNode n("TAR");
            if (b.left > 0 && chance(rng, 0.7)) { b.take(); n.children.emplace_back("TAR-EXTRACT"); }
            if (b.left > 0 && chance(rng, 0.6)) {
                b.take();
                std::vector<std::string> tars = {"ABS-EXTENSION-TAR"};
                n.children.push_back(arg_node(rng, b, "SC-TAR-PATH", tars));
            }
            return n;
        }
        case 7: {
            TreeNode n("RM");
            if (b.left > 0 && chance(rng, 0.6)) { b.take(); n.children.emplace_back("RM-F-RECURSIVE"); }
            else if (b.left > 0 && chance(rng, 0.4)) { b.take(); n.children.emplace_back("RM-RECURSIVE"); }
            if (b.left > 0 && chance(rng, 0.8)) { b.take(); n.children.push_back(arg_node(rng, b, "RM-PATH", abs_paths)); }
            return n;
        }
        case 8: {
            TreeNode n("MKTEMP");
            if (b.left > 0 && chance(rng, 0.7)) { b.take(); n.children.emplace_back("FLAG-DIRECTORY"); }
            return n;
        }
        case 9: {
            TreeNode n("MKDIR");
            if (b.left > 0 && chance(rng, 0.5)) { b.take(); n.children.emplace_back("FLAG-PARENTS"); }
            if (b.left > 0 && chance(rng, 0.7)) {
                b.take();
                std::vector<std::string> usr = {"ABS-USR-SRC", "ABS-PATH-ABS"};
                n.children.push_back(arg_node(rng, b, "MKDIR-PATH", usr));
            }
            return n;
        }
        case 10: {
            TreeNode n("SHA256SUM");
            if (b.left > 0 && chance(rng, 0.7)) { b.take(); n.children.emplace_back("FLAG-CHECK"); }
            return n;
        }
        case 11: {
            TreeNode n("ECHO");
            if (b.left > 0 && chance(rng, 0.8)) {
                b.take();
                std::vector<std::string> sp = {"ABS-SINGLE-SPACE"};
                n.children.push_back(arg_node(rng, b, "SC-ECHO-ITEM", sp));
            }
            return n;
        }
        case 12: {
            TreeNode n("CONFIGURE");
            if (b.left > 0 && chance(rng, 0.5)) { b.take(); n.children.emplace_back("FLAG-BUILD"); }
            return n;
        }
        case 13: {
            TreeNode n("YUM-INSTALL");
            if (b.left > 0 && chance(rng, 0.6)) { b.take(); n.children.emplace_back("FLAG-YES"); }
            return n;
        }
        case 14: {
            TreeNode n("GEM-UPDATE");
            if (b.left > 0 && chance(rng, 0.5)) { b.take(); n.children.emplace_back("FLAG-SYSTEM"); }
            if (b.left > 0 && chance(rng, 0.5)) { b.take(); n.children.emplace_back("FLAG-NO-DOCUMENT"); }
            return n;
        }
        default:
            return TreeNode("MAKE");
    }
}

TreeNode random_shell(std::mt19937& rng, Budget& b, int depth) {
    auto command = [&] {
        TreeNode c("BASH-COMMAND");
        b.take();
        c.children.push_back(random_command(rng, b));
        return c;
    };
    if (depth >= 2 || b.left < 4 || chance(rng, 0.35)) return command();

    int form = draw(rng, 0, 3);
    if (form == 3 && b.left >= 3) {
        TreeNode r("BASH-REDIRECT");
        b.take();
        r.children.push_back(command());
        TreeNode target("REDIRECT-TARGET");
        b.take();
        r.children.push_back(std::move(target));
        return r;
    }
    const char* kind = form == 0 ? "BASH-AND" : form == 1 ? "BASH-SEQ" : "BASH-PIPE";
    TreeNode n(kind);
    b.take();
    int arms = draw(rng, 2, 3);
    for (int i = 0; i < arms && b.left >= 2; ++i)
        n.children.push_back(random_shell(rng, b, depth + 1));
    if (n.children.size() < 2) return command();
    return n;
}

}  // namespace

TreeNode random_ruleish_tree(std::mt19937& rng, int max_nodes) {
    Budget b{max_nodes};
    TreeNode root("DOCKER-FILE");
    b.take();

    b.take();
    TreeNode from("DOCKER-FROM");
    if (b.left > 0) { b.take(); from.children.emplace_back("IMAGE"); }
    if (b.left > 0 && chance(rng, 0.7)) { b.take(); from.children.emplace_back("TAG"); }
    root.children.push_back(std::move(from));

    while (b.left >= 3) {
        int kind = draw(rng, 0, 9);
        if (kind < 7) {
            TreeNode run("DOCKER-RUN");
            b.take();
            run.children.push_back(random_shell(rng, b, 0));
            root.children.push_back(std::move(run));
        } else if (kind == 7) {
            TreeNode env("DOCKER-ENV");
            b.take();
            if (b.left >= 3) {
                b.take(3);
                TreeNode pair("ENV-PAIR");
                pair.children.emplace_back("ENV-KEY");
                pair.children.emplace_back("ENV-VALUE");
                env.children.push_back(std::move(pair));
            }
            root.children.push_back(std::move(env));
        } else if (kind == 8) {
            TreeNode wd("DOCKER-WORKDIR");
            b.take();
            if (b.left > 0) { b.take(); wd.children.emplace_back("PATH"); }
            root.children.push_back(std::move(wd));
        } else {
            TreeNode ex("DOCKER-EXPOSE");
            b.take();
            if (b.left > 0) { b.take(); ex.children.emplace_back("PORT"); }
            root.children.push_back(std::move(ex));
        }
        if (chance(rng, 0.25)) break;
    }
    return root;
}

std::vector<TreeNode> random_mining_group(std::mt19937& rng, int max_instances,
                                          int max_nodes) {
    static const std::vector<std::string> alphabet = {"A", "B", "C", "D", "E"};
    int count = draw(rng, 1, max_instances);
    std::vector<TreeNode> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        Budget b{draw(rng, 1, max_nodes)};
        TreeNode inst("R");
        b.take();
        if (chance(rng, 0.15) && b.left >= 7) {
            // Deep chain to push past depth caps.
            TreeNode* cur = &inst;
            while (b.take()) {
                cur->children.emplace_back(pick(rng, alphabet));
                cur = &cur->children.back();
            }
        } else {
            std::function<void(TreeNode&, int)> fill = [&](TreeNode& n,
                                                           int depth) {
                int kids = draw(rng, 0, depth == 0 ? 3 : 2);
                for (int k = 0; k < kids; ++k) {
                    if (!b.take()) return;
                    n.children.emplace_back(pick(rng, alphabet));
                    if (depth < 4 && chance(rng, 0.5))
                        fill(n.children.back(), depth + 1);
                }
            };
            fill(inst, 0);
        }
        out.push_back(std::move(inst));
    }
    return out;
}

TreeNode random_serialization_tree(std::mt19937& rng, int max_nodes) {
    static const std::vector<std::string> kinds = {
        "DOCKER-FILE", "BASH-COMMAND", "K1", "LONG-KIND-NAME-42", "A", "B-2"};
    static const std::vector<std::string> literals = {
        "",
        " ",
        "hello",
        "a\"b",
        "back\\slash",
        "tab\there",
        "line\nbreak",
        "-qqy --no-install-recommends",
        "$(dirname \"$0\")/run.sh",
        "\\\"both\\\"",
        "trailing\\"};

    Budget b{draw(rng, 1, max_nodes)};
    std::function<TreeNode(int)> make = [&](int depth) {
        TreeNode n(pick(rng, kinds));
        if (chance(rng, 0.3)) n.origin_id = draw(rng, 1, 99);
        if (chance(rng, 0.25)) n.eu = true;
        if (chance(rng, 0.1)) n.count_leaf = true;
        if (chance(rng, 0.1)) n.degraded = true;
        if (chance(rng, 0.2))
            n.span = SourceSpan{draw(rng, 1, 40), draw(rng, 1, 80),
                                draw(rng, 1, 40), draw(rng, 1, 80)};
        if (chance(rng, 0.15)) n.original_literal = pick(rng, literals);

        bool leaf = depth >= 4 || b.left == 0 || chance(rng, 0.4);
        if (leaf) {
            if (chance(rng, 0.7)) n.literal = pick(rng, literals);
        } else {
            int kids = draw(rng, 1, 3);
            for (int k = 0; k < kids && b.take(); ++k)
                n.children.push_back(make(depth + 1));
            if (n.children.empty() && chance(rng, 0.7))
                n.literal = pick(rng, literals);
        }
        return n;
    };
    b.take();
    return make(0);
}

bool trees_identical(const TreeNode& a, const TreeNode& b) {
    if (a.kind != b.kind || a.literal != b.literal ||
        a.origin_id != b.origin_id || a.eu != b.eu ||
        a.count_leaf != b.count_leaf || a.degraded != b.degraded ||
        a.original_literal != b.original_literal)
        return false;
    bool span_a = a.span.has_value(), span_b = b.span.has_value();
    if (span_a != span_b) return false;
    if (span_a) {
        if (a.span->line_begin != b.span->line_begin ||
            a.span->col_begin != b.span->col_begin ||
            a.span->line_end != b.span->line_end ||
            a.span->col_end != b.span->col_end)
            return false;
    }
    if (a.children.size() != b.children.size()) return false;
    for (size_t i = 0; i < a.children.size(); ++i)
        if (!trees_identical(a.children[i], b.children[i])) return false;
    return true;
}

}  // namespace dockrule::testing
