#pragma once

#include <string>

#include "dockrule/tree.hpp"

namespace dockrule {

// Parses raw Dockerfile text into a DOCKER-FILE tree with one
// DOCKER-<NAME> child per instruction. Shell-form RUN/CMD/ENTRYPOINT
// payloads stay on the directive node as a single further-parseable
// literal with a fresh origin id; exec forms expand to EXEC-FORM nodes.
// Throws ParseError on unknown instructions, empty payloads and
// malformed exec-form arrays.
TreeNode parse_dockerfile(const std::string& text);

}  // namespace dockrule
