#pragma once

#include <map>
#include <string>
#include <vector>

#include "dockrule/tree.hpp"

namespace dockrule {

struct OptionSpec {
    enum class Arity { Plain, Counted, Valued };
    std::string kind;
    Arity arity = Arity::Plain;
    std::string value_kind;  // Valued only
    std::vector<std::string> spellings;
};

struct PositionalSpec {
    std::string collection_kind;  // empty: items attach directly
    std::string item_kind;
    int exact_count = -1;  // -1: consumes the rest
};

// Declarative description of one command-line tool (or subcommand).
// Option order in the tree follows declaration order here.
struct CommandSchema {
    std::vector<std::string> command_path;  // e.g. {"apt-get", "install"}
    std::string root_kind;
    std::vector<OptionSpec> options;
    std::vector<PositionalSpec> positionals;
    std::map<std::string, int> spelling_to_option;
};

// Parses one schema document. Throws ParseError (line positioned) on
// syntax errors, invalid kinds, duplicate spellings, or a non-final
// rest-consuming args entry.
CommandSchema parse_schema(const std::string& text);

// Parses each document and checks that root kinds and command paths are
// unique across the set.
std::vector<CommandSchema> load_schemas(const std::vector<std::string>& texts);

// Parses a single command string against the schema set. Commands whose
// program resolves to no schema yield (UNKNOWN "<text>") with the
// further-parseable flag set.
TreeNode parse_command(const std::string& text,
                       const std::vector<CommandSchema>& schemas);

struct Phase3Result {
    TreeNode tree;
    // origin id of each phase-2 command literal -> resolved?
    std::map<int, bool> resolved;
};

// Expands every BASH-COMMAND literal into a typed command tree (or an
// UNKNOWN leaf that keeps the literal and its origin id).
Phase3Result enrich_phase3(const TreeNode& phase2,
                           const std::vector<CommandSchema>& schemas);

}  // namespace dockrule
