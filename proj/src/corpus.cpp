#include "dockrule/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "dockrule/dockerfile_parser.hpp"
#include "dockrule/shell_parser.hpp"

namespace fs = std::filesystem;

namespace dockrule {

PipelineOutput run_pipeline(const std::string& text,
                            const std::vector<CommandSchema>& schemas,
                            const std::vector<Abstraction>& abstractions) {
    PipelineOutput out;
    out.phase1 = parse_dockerfile(text);
    out.report1 = eu_stats(out.phase1, 1);

    Phase2Result p2 = enrich_phase2(out.phase1);
    out.phase2 = std::move(p2.tree);
    out.warnings = std::move(p2.warnings);
    out.report2 = eu_stats(out.phase2, 2);

    std::set<int> phase2_ids = eu_origin_ids(out.phase2);
    Phase3Result p3 = enrich_phase3(out.phase2, schemas);
    out.phase3 = std::move(p3.tree);
    out.resolved = std::move(p3.resolved);
    out.report3 = eu_stats(out.phase3, 3, &phase2_ids);

    out.abstracted = abstract_tree(out.phase3, abstractions);
    return out;
}

std::string sha1_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha1(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

namespace {

bool name_matches(const std::string& filename, const std::string& filter) {
    if (filter.empty()) return true;
    std::string lower_name;
    lower_name.reserve(filename.size());
    for (char c : filename)
        lower_name.push_back(
            static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    std::string lower_filter;
    lower_filter.reserve(filter.size());
    for (char c : filter)
        lower_filter.push_back(
            static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return lower_name.find(lower_filter) != std::string::npos;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Corpus ingest_corpus(const std::vector<std::string>& paths,
                     const CorpusOptions& options,
                     const std::vector<CommandSchema>& schemas,
                     const std::vector<Abstraction>& abstractions) {
    Corpus corpus;

    std::vector<std::string> files;
    for (const auto& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            for (auto it = fs::recursive_directory_iterator(
                     p, fs::directory_options::skip_permission_denied, ec);
                 it != fs::recursive_directory_iterator(); ++it) {
                if (!it->is_regular_file(ec)) continue;
                if (name_matches(it->path().filename().string(),
                                 options.filename_filter))
                    files.push_back(it->path().string());
            }
        } else if (fs::is_regular_file(p, ec)) {
            files.push_back(p);
        } else {
            corpus.rejects.push_back({p, "not a file or directory"});
        }
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());

    // Read and deduplicate by content hash before parsing.
    struct Job {
        std::string path;
        std::string text;
        std::string sha1;
    };
    std::vector<Job> jobs;
    std::set<std::string> seen_hashes;
    for (const auto& path : files) {
        std::string text;
        try {
            text = read_file(path);
        } catch (const std::exception& e) {
            corpus.rejects.push_back({path, e.what()});
            continue;
        }
        std::string hash = sha1_hex(text);
        if (!seen_hashes.insert(hash).second) {
            ++corpus.duplicates;
            continue;
        }
        jobs.push_back({path, std::move(text), std::move(hash)});
    }

    struct Slot {
        bool ok = false;
        CorpusEntry entry;
        CorpusReject reject;
    };
    std::vector<Slot> slots(jobs.size());

    auto work = [&](size_t idx) {
        const Job& job = jobs[idx];
        Slot& slot = slots[idx];
        try {
            slot.entry.path = job.path;
            slot.entry.sha1 = job.sha1;
            slot.entry.out = run_pipeline(job.text, schemas, abstractions);
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.reject = {job.path, e.what()};
        }
    };

    int jobs_n = std::max(1, options.jobs);
    if (jobs_n == 1 || jobs.size() < 2) {
        for (size_t i = 0; i < jobs.size(); ++i) work(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        int n_threads = static_cast<int>(
            std::min(static_cast<size_t>(jobs_n), jobs.size()));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&]() {
                while (true) {
                    size_t idx = next.fetch_add(1);
                    if (idx >= jobs.size()) break;
                    work(idx);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Merge in path order regardless of scheduling.
    for (auto& slot : slots) {
        if (slot.ok)
            corpus.entries.push_back(std::move(slot.entry));
        else
            corpus.rejects.push_back(std::move(slot.reject));
    }
    return corpus;
}

namespace {

// Linear-interpolation quantile over a sorted sample.
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    double pos = p * (sorted.size() - 1);
    size_t lo = static_cast<size_t>(pos);
    double frac = pos - lo;
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

DistributionStats distribution(std::vector<double> values) {
    DistributionStats s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / values.size();
    std::sort(values.begin(), values.end());
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    return s;
}

}  // namespace

EuSummary corpus_eu_summary(const Corpus& corpus) {
    EuSummary summary;
    summary.files = static_cast<int>(corpus.entries.size());
    std::vector<double> m1, m2, m3;
    int fully = 0;
    for (const auto& e : corpus.entries) {
        m1.push_back(e.out.report1.eu_fraction());
        m2.push_back(e.out.report2.eu_fraction());
        m3.push_back(e.out.report3.unresolved_fraction());
        if (e.out.report3.unresolved_of_phase2 == 0) ++fully;
    }
    summary.phase1 = distribution(std::move(m1));
    summary.phase2 = distribution(std::move(m2));
    summary.phase3 = distribution(std::move(m3));
    if (summary.files > 0)
        summary.fully_resolved_fraction =
            static_cast<double>(fully) / summary.files;
    return summary;
}

}  // namespace dockrule
