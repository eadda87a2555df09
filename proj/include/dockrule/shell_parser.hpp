#pragma once

#include <string>
#include <vector>

#include "dockrule/tree.hpp"

namespace dockrule {

struct ShellParse {
    TreeNode root;
    std::vector<std::string> warnings;
};

// Parses one shell payload into BASH-* structure: BASH-SEQ / BASH-AND /
// BASH-OR / BASH-PIPE / BASH-SUBSHELL / BASH-REDIRECT / BASH-ASSIGN over
// BASH-COMMAND leaves whose literal is the command text. Runs of the
// same connective flatten to one n-ary node. Payloads using constructs
// outside this fragment (control flow, heredocs, background jobs,
// unbalanced quoting) degrade to a single BASH-COMMAND carrying the
// whole payload, marked degraded, with a warning.
ShellParse parse_shell(const std::string& payload);

struct Phase2Result {
    TreeNode tree;
    std::vector<std::string> warnings;
};

// Rewrites every shell-form DOCKER-RUN payload into its shell tree.
// Other directives pass through unchanged. Fresh origin ids continue
// from the largest id already present in the tree.
Phase2Result enrich_phase2(const TreeNode& phase1);

}  // namespace dockrule
