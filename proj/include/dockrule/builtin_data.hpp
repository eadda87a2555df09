#pragma once

#include <string>
#include <vector>

#include "dockrule/abstraction.hpp"
#include "dockrule/command_schema.hpp"

namespace dockrule::builtin {

struct NamedText {
    std::string name;  // file name under data/
    std::string text;
};

// Bundled copies of the data/ files, byte-identical to the shipped
// ones. The binary works without an installed data directory.
const std::vector<NamedText>& schema_texts();
const std::string& abstractions_text();
const std::string& gold_rules_text();
const std::string& gold_rules_unfiltered_text();

const std::vector<CommandSchema>& default_schemas();
const std::vector<Abstraction>& default_abstractions();

}  // namespace dockrule::builtin
