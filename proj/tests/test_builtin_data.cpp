#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dockrule/builtin_data.hpp"
#include "dockrule/rule.hpp"

using namespace dockrule;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const fs::path data_dir = fs::path(DOCKRULE_DATA_DIR);

}  // namespace

TEST_CASE("embedded schemas mirror the shipped files byte for byte") {
    std::set<std::string> on_disk;
    for (const auto& e : fs::directory_iterator(data_dir / "schemas"))
        if (e.path().extension() == ".schema")
            on_disk.insert(e.path().filename().string());
    REQUIRE(on_disk.size() == 23);

    const auto& embedded = builtin::schema_texts();
    REQUIRE(embedded.size() == on_disk.size());
    std::set<std::string> embedded_names;
    for (const auto& nt : embedded) {
        embedded_names.insert(nt.name);
        INFO("schema: " << nt.name);
        REQUIRE(on_disk.count(nt.name) == 1);
        CHECK(nt.text == slurp(data_dir / "schemas" / nt.name));
    }
    CHECK(embedded_names == on_disk);
}

TEST_CASE("embedded abstraction table mirrors the shipped file") {
    CHECK(builtin::abstractions_text() == slurp(data_dir / "abstractions.txt"));
}

TEST_CASE("embedded rule sets mirror the shipped files") {
    CHECK(builtin::gold_rules_text() == slurp(data_dir / "gold-rules"));
    CHECK(builtin::gold_rules_unfiltered_text() ==
          slurp(data_dir / "gold-rules-unfiltered"));
}

TEST_CASE("bundled schema set loads with unique roots") {
    const auto& schemas = builtin::default_schemas();
    REQUIRE(schemas.size() == 23);
    std::set<std::string> roots;
    for (const auto& s : schemas) {
        CHECK_FALSE(s.root_kind.empty());
        CHECK(roots.insert(s.root_kind).second);
    }
    CHECK(roots.count("APT-GET-INSTALL") == 1);
    CHECK(roots.count("CURL") == 1);
    CHECK(roots.count("RM") == 1);

    auto install = std::find_if(schemas.begin(), schemas.end(),
                                [](const CommandSchema& s) {
                                    return s.root_kind == "APT-GET-INSTALL";
                                });
    REQUIRE(install != schemas.end());
    CHECK(install->command_path ==
          std::vector<std::string>{"apt-get", "install"});
}

TEST_CASE("bundled abstraction catalogue loads in file order") {
    const auto& abs = builtin::default_abstractions();
    REQUIRE(abs.size() == 13);
    CHECK(abs.front().kind == "ABS-URL-HTTPS");
    CHECK(abs.back().kind == "ABS-HA-POOLS");
}

TEST_CASE("bundled rule objects come from the embedded text") {
    auto parsed = parse_rules(builtin::gold_rules_text());
    const auto& curated = gold_rules();
    REQUIRE(parsed.size() == curated.size());
    for (size_t i = 0; i < parsed.size(); ++i)
        CHECK(rules_equal(parsed[i], curated[i]));

    auto parsed_all = parse_rules(builtin::gold_rules_unfiltered_text());
    const auto& all = gold_rules_unfiltered();
    REQUIRE(parsed_all.size() == all.size());
    for (size_t i = 0; i < parsed_all.size(); ++i)
        CHECK(rules_equal(parsed_all[i], all[i]));
}
