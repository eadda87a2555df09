#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dockrule/builtin_data.hpp"
#include "dockrule/corpus.hpp"
#include "dockrule/sexp.hpp"

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

PipelineOutput pipeline(const std::string& text) {
    return run_pipeline(text, builtin::default_schemas(),
                        builtin::default_abstractions());
}

// Scratch directory populated with files, removed on scope exit.
struct TempCorpusDir {
    fs::path dir;
    TempCorpusDir() {
        dir = fs::temp_directory_path() / "dockrule-corpus-test";
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~TempCorpusDir() { fs::remove_all(dir); }
    std::string add(const std::string& name, const std::string& text) {
        fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << text;
        return p.string();
    }
};

Corpus ingest(const std::vector<std::string>& paths, int jobs = 1) {
    CorpusOptions opt;
    opt.jobs = jobs;
    return ingest_corpus(paths, opt, builtin::default_schemas(),
                         builtin::default_abstractions());
}

}  // namespace

TEST_CASE("three-phase pipeline over a small build file") {
    std::string text =
        slurp(fs::path(DOCKRULE_FIXTURES_DIR) / "mixed-resolution.dockerfile");
    PipelineOutput out = pipeline(text);

    // Phase 1: four leaves, two of them opaque payloads.
    CHECK(out.report1.total_leaves == 4);
    CHECK(out.report1.eu_leaves == 2);
    CHECK(out.report1.eu_fraction() == doctest::Approx(0.5));
    // Phase 2: shell parsing splits the first payload into two commands.
    CHECK(out.report2.total_leaves == 5);
    CHECK(out.report2.eu_leaves == 3);
    CHECK(out.report2.eu_fraction() == doctest::Approx(0.6));
    // Phase 3: both apt-get commands resolve; the local script does not.
    CHECK(out.report3.resolved_of_phase2 == 2);
    CHECK(out.report3.unresolved_of_phase2 == 1);
    CHECK(out.report3.unresolved_fraction() == doctest::Approx(1.0 / 3.0));
    CHECK(out.resolved ==
          std::map<int, bool>{{3, true}, {4, true}, {5, false}});
    CHECK(out.warnings.empty());

    CHECK(sexp_encode(out.abstracted) ==
          "(DOCKER-FILE (DOCKER-FROM (IMAGE) (TAG)) "
          "(DOCKER-RUN (BASH-AND (BASH-COMMAND (APT-GET-UPDATE)) "
          "(BASH-COMMAND (APT-GET-INSTALL (FLAG-YES) (FLAG-QUIET \"2\") "
          "(PACKAGES (PACKAGE)))))) "
          "(DOCKER-RUN (BASH-COMMAND (UNKNOWN (ABS-PATH-REL)))))");
}

TEST_CASE("content hashing uses standard SHA-1") {
    CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
    CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
    CHECK(sha1_hex(std::string(1, '\0')) ==
          "5ba93c9db0cff93f52b521d7420e43f6eda2784f");
}

TEST_CASE("corpus ingestion walks, filters, deduplicates and rejects") {
    TempCorpusDir tmp;
    std::string good = "FROM alpine\nRUN ./go.sh\n";
    tmp.add("a.dockerfile", good);
    tmp.add("b.dockerfile", good);  // byte-identical duplicate
    tmp.add("c.dockerfile", "FROM alpine:3.14\nRUN ./go.sh\n");
    tmp.add("broken.dockerfile", "BOGUS hello\n");
    tmp.add("README.md", "not docker\n");  // name misses the filter
    std::string extra = tmp.add("notes.txt", "FROM busybox\n");

    Corpus corpus = ingest({tmp.dir.string(), extra, "/nonexistent/xyz"});

    REQUIRE(corpus.entries.size() == 3);
    CHECK(corpus.entries[0].path == (tmp.dir / "a.dockerfile").string());
    CHECK(corpus.entries[1].path == (tmp.dir / "c.dockerfile").string());
    CHECK(corpus.entries[2].path == extra);  // explicit files skip the filter
    CHECK(corpus.duplicates == 1);
    CHECK(corpus.entries[0].sha1 == sha1_hex(good));

    REQUIRE(corpus.rejects.size() == 2);
    // Rejects from path screening come first, then parse failures.
    CHECK(corpus.rejects[0].path == "/nonexistent/xyz");
    CHECK(corpus.rejects[0].error == "not a file or directory");
    CHECK(corpus.rejects[1].path == (tmp.dir / "broken.dockerfile").string());
    CHECK(corpus.rejects[1].error.find("unknown instruction") !=
          std::string::npos);
}

TEST_CASE("parallel ingestion matches sequential ingestion") {
    TempCorpusDir tmp;
    for (int i = 0; i < 8; ++i) {
        std::string body = "FROM alpine\nRUN ./go" + std::to_string(i) +
                           ".sh\nRUN apt-get update\n";
        tmp.add("f" + std::to_string(i) + ".dockerfile", body);
    }
    Corpus seq = ingest({tmp.dir.string()}, 1);
    Corpus par = ingest({tmp.dir.string()}, 4);
    REQUIRE(seq.entries.size() == 8);
    REQUIRE(par.entries.size() == 8);
    for (size_t i = 0; i < 8; ++i) {
        CHECK(par.entries[i].path == seq.entries[i].path);
        CHECK(par.entries[i].sha1 == seq.entries[i].sha1);
        CHECK(sexp_encode(par.entries[i].out.abstracted) ==
              sexp_encode(seq.entries[i].out.abstracted));
    }
    CHECK(par.rejects.empty());
    CHECK(par.duplicates == 0);
}

TEST_CASE("summary statistics use interpolated quartiles") {
    TempCorpusDir tmp;
    // Three files with distinct leaf mixes pin the three fractions.
    // An untagged FROM still yields image and tag leaves, so file a
    // needs two opaque payloads to reach one half.
    tmp.add("a.dockerfile", "FROM alpine\nRUN ./go.sh\nRUN ./go2.sh\n");
    tmp.add("b.dockerfile", "FROM alpine:3.14\nRUN ./go.sh\n");     // 1/3
    tmp.add("c.dockerfile", "FROM alpine:3.14\nCMD [\"ls\"]\n");    // 0
    Corpus corpus = ingest({tmp.dir.string()});
    REQUIRE(corpus.entries.size() == 3);
    CHECK(corpus.entries[0].out.report1.eu_fraction() ==
          doctest::Approx(0.5));
    CHECK(corpus.entries[1].out.report1.eu_fraction() ==
          doctest::Approx(1.0 / 3.0));
    CHECK(corpus.entries[2].out.report1.eu_fraction() == doctest::Approx(0.0));

    EuSummary s = corpus_eu_summary(corpus);
    CHECK(s.files == 3);
    // Sorted sample {0, 1/3, 1/2}: quartile positions fall at 0.5 and
    // 1.5, interpolating between neighbours.
    CHECK(s.phase1.mean == doctest::Approx((0.0 + 1.0 / 3 + 0.5) / 3));
    CHECK(s.phase1.q1 == doctest::Approx(1.0 / 6));
    CHECK(s.phase1.median == doctest::Approx(1.0 / 3));
    CHECK(s.phase1.q3 == doctest::Approx(5.0 / 12));
    // Unresolved fractions {1, 1, 0}: only the script-free file is clean.
    CHECK(s.phase3.mean == doctest::Approx(2.0 / 3));
    CHECK(s.phase3.median == doctest::Approx(1.0));
    CHECK(s.fully_resolved_fraction == doctest::Approx(1.0 / 3));
}

TEST_CASE("summary of an empty corpus is all zeros") {
    EuSummary s = corpus_eu_summary(Corpus{});
    CHECK(s.files == 0);
    CHECK(s.phase1.mean == 0.0);
    CHECK(s.phase1.median == 0.0);
    CHECK(s.fully_resolved_fraction == 0.0);
}

TEST_CASE("hand-counted corpus matches ingestion end to end") {
    fs::path golden = fs::path(DOCKRULE_FIXTURES_DIR) / "golden";
    Corpus corpus = ingest({golden.string()});
    CHECK(corpus.rejects.empty());
    CHECK(corpus.duplicates == 0);
    REQUIRE(corpus.entries.size() == 23);

    // Expected counts per file, from the independently tallied table:
    // leaves and opaque leaves after each phase, then resolution splits.
    std::map<std::string, std::array<int, 6>> expected;
    std::ifstream table(golden / "eu_counts.txt");
    REQUIRE(table.good());
    std::string line;
    while (std::getline(table, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string name;
        std::array<int, 6> v{};
        row >> name >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5];
        REQUIRE(row);
        expected[name] = v;
    }
    REQUIRE(expected.size() == 23);

    int fully = 0;
    for (const auto& entry : corpus.entries) {
        std::string name = fs::path(entry.path).filename().string();
        REQUIRE(expected.count(name) == 1);
        const auto& v = expected[name];
        INFO("file: " << name);
        CHECK(entry.out.report1.total_leaves == v[0]);
        CHECK(entry.out.report1.eu_leaves == v[1]);
        CHECK(entry.out.report2.total_leaves == v[2]);
        CHECK(entry.out.report2.eu_leaves == v[3]);
        CHECK(entry.out.report3.resolved_of_phase2 == v[4]);
        CHECK(entry.out.report3.unresolved_of_phase2 == v[5]);
        if (v[5] == 0) ++fully;
    }
    EuSummary s = corpus_eu_summary(corpus);
    CHECK(s.files == 23);
    CHECK(s.fully_resolved_fraction ==
          doctest::Approx(static_cast<double>(fully) / 23));
}
