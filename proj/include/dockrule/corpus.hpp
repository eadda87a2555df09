#pragma once

#include <map>
#include <string>
#include <vector>

#include "dockrule/abstraction.hpp"
#include "dockrule/command_schema.hpp"
#include "dockrule/tree.hpp"

namespace dockrule {

struct PipelineOutput {
    TreeNode phase1;
    TreeNode phase2;
    TreeNode phase3;
    TreeNode abstracted;
    EuReport report1;
    EuReport report2;
    EuReport report3;
    std::map<int, bool> resolved;
    std::vector<std::string> warnings;
};

// Runs all parse phases plus abstraction over one Dockerfile text.
PipelineOutput run_pipeline(const std::string& text,
                            const std::vector<CommandSchema>& schemas,
                            const std::vector<Abstraction>& abstractions);

std::string sha1_hex(const std::string& bytes);

struct CorpusEntry {
    std::string path;
    std::string sha1;
    PipelineOutput out;
};

struct CorpusReject {
    std::string path;
    std::string error;
};

struct Corpus {
    std::vector<CorpusEntry> entries;  // sorted by path
    std::vector<CorpusReject> rejects;
    int duplicates = 0;  // files dropped as byte-identical to an earlier one
};

struct CorpusOptions {
    // Directories are walked recursively; files whose name contains
    // this (case-insensitive) are taken. Explicit file arguments are
    // always taken.
    std::string filename_filter = "dockerfile";
    int jobs = 1;
};

Corpus ingest_corpus(const std::vector<std::string>& paths,
                     const CorpusOptions& options,
                     const std::vector<CommandSchema>& schemas,
                     const std::vector<Abstraction>& abstractions);

struct DistributionStats {
    double mean = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
};

struct EuSummary {
    int files = 0;
    DistributionStats phase1;  // EU fraction after phase 1
    DistributionStats phase2;  // EU fraction after phase 2
    DistributionStats phase3;  // unresolved fraction after phase 3
    // Files whose phase-2 command literals all resolved.
    double fully_resolved_fraction = 0.0;
};

EuSummary corpus_eu_summary(const Corpus& corpus);

}  // namespace dockrule
