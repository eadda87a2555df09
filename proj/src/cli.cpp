#include "dockrule/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dockrule/abstraction.hpp"
#include "dockrule/builtin_data.hpp"
#include "dockrule/command_schema.hpp"
#include "dockrule/corpus.hpp"
#include "dockrule/enforce.hpp"
#include "dockrule/mine.hpp"
#include "dockrule/rule.hpp"
#include "dockrule/sexp.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace dockrule {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct GlobalOpts {
    std::string schemas_dir;
    std::string abstractions_file;
    std::string rules_file;
    std::string format = "text";
    int jobs = 1;
    std::string filter = "dockerfile";
};

std::vector<CommandSchema> load_schema_set(const GlobalOpts& g) {
    if (g.schemas_dir.empty()) return builtin::default_schemas();
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(g.schemas_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".schema")
            files.push_back(e.path().string());
    }
    if (files.empty())
        throw std::runtime_error("no .schema files in " + g.schemas_dir);
    std::sort(files.begin(), files.end());
    std::vector<std::string> texts;
    for (const auto& f : files) texts.push_back(read_file(f));
    return load_schemas(texts);
}

std::vector<Abstraction> load_abstraction_set(const GlobalOpts& g) {
    if (g.abstractions_file.empty()) return builtin::default_abstractions();
    return parse_abstractions(read_file(g.abstractions_file));
}

std::vector<TreeAssociationRule> load_rule_set(const GlobalOpts& g,
                                               bool unfiltered_default) {
    if (g.rules_file.empty())
        return unfiltered_default ? gold_rules_unfiltered() : gold_rules();
    return parse_rules(read_file(g.rules_file));
}

std::string fmt_fraction(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(4) << v;
    return ss.str();
}

std::string fmt_percent(double v) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << v * 100.0 << "%";
    return ss.str();
}

ordered_json metrics_json(const ScoredRule& sr) {
    ordered_json j;
    j["rule"] = sr.rule.name;
    j["support"] = sr.metrics.support;
    j["satisfied"] = sr.metrics.satisfied;
    j["violated"] = sr.metrics.violated;
    if (sr.metrics.confidence)
        j["confidence"] = *sr.metrics.confidence;
    else
        j["confidence"] = nullptr;
    if (sr.metrics.violation_rate)
        j["violation_rate"] = *sr.metrics.violation_rate;
    else
        j["violation_rate"] = nullptr;
    return j;
}

void print_rejects(const Corpus& corpus, std::ostream& err) {
    for (const auto& r : corpus.rejects)
        err << "skipped " << r.path << ": " << r.error << "\n";
}

int run_parse(const GlobalOpts& g, const std::string& file, int phase,
              bool do_abstract, bool annotated, std::ostream& out,
              std::ostream& err) {
    auto schemas = load_schema_set(g);
    auto abstractions = load_abstraction_set(g);
    PipelineOutput res = run_pipeline(read_file(file), schemas, abstractions);
    const TreeNode* tree = nullptr;
    if (do_abstract)
        tree = &res.abstracted;
    else if (phase == 1)
        tree = &res.phase1;
    else if (phase == 2)
        tree = &res.phase2;
    else
        tree = &res.phase3;
    std::string sexp = annotated ? sexp_encode_annotated(*tree)
                                 : sexp_encode(*tree);
    for (const auto& w : res.warnings) err << file << ": " << w << "\n";
    if (g.format == "json") {
        ordered_json j;
        j["file"] = file;
        j["phase"] = do_abstract ? "abstracted" : std::to_string(phase);
        j["tree"] = sexp;
        j["warnings"] = res.warnings;
        ordered_json eu;
        eu["phase1_eu_fraction"] = res.report1.eu_fraction();
        eu["phase2_eu_fraction"] = res.report2.eu_fraction();
        eu["phase3_unresolved_fraction"] = res.report3.unresolved_fraction();
        j["eu"] = eu;
        out << j.dump(2) << "\n";
    } else {
        out << sexp << "\n";
    }
    return 0;
}

int run_enforce(const GlobalOpts& g, const std::vector<std::string>& paths,
                std::ostream& out, std::ostream& err) {
    auto schemas = load_schema_set(g);
    auto abstractions = load_abstraction_set(g);
    auto rules = load_rule_set(g, false);

    CorpusOptions copt;
    copt.filename_filter = g.filter;
    copt.jobs = g.jobs;
    Corpus corpus = ingest_corpus(paths, copt, schemas, abstractions);
    print_rejects(corpus, err);
    if (corpus.entries.empty() && !corpus.rejects.empty()) {
        err << "no usable input files\n";
        return 2;
    }

    struct Row {
        std::string path;
        Violation v;
    };
    std::vector<Row> rows;
    for (const auto& entry : corpus.entries) {
        std::vector<Row> file_rows;
        for (const auto& rule : rules) {
            for (auto& v : collect_violations(entry.out.abstracted, rule))
                file_rows.push_back({entry.path, std::move(v)});
        }
        std::stable_sort(file_rows.begin(), file_rows.end(),
                         [](const Row& a, const Row& b) {
                             if (a.v.span.line_begin != b.v.span.line_begin)
                                 return a.v.span.line_begin < b.v.span.line_begin;
                             return a.v.rule_name < b.v.rule_name;
                         });
        for (auto& r : file_rows) rows.push_back(std::move(r));
    }

    std::vector<TreeNode> trees;
    trees.reserve(corpus.entries.size());
    for (const auto& e : corpus.entries) trees.push_back(e.out.abstracted);
    auto scored = score_rules(trees, rules);

    if (g.format == "json") {
        ordered_json j;
        j["files"] = corpus.entries.size();
        j["duplicates"] = corpus.duplicates;
        ordered_json viol = ordered_json::array();
        for (const auto& r : rows) {
            ordered_json v;
            v["file"] = r.path;
            v["line"] = r.v.span.line_begin;
            v["column"] = r.v.span.col_begin;
            v["rule"] = r.v.rule_name;
            viol.push_back(v);
        }
        j["violations"] = viol;
        ordered_json m = ordered_json::array();
        for (const auto& sr : scored) m.push_back(metrics_json(sr));
        j["metrics"] = m;
        ordered_json rej = ordered_json::array();
        for (const auto& r : corpus.rejects) {
            ordered_json v;
            v["file"] = r.path;
            v["error"] = r.error;
            rej.push_back(v);
        }
        j["rejects"] = rej;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : rows)
            out << r.path << ":" << r.v.span.line_begin << ":"
                << r.v.span.col_begin << ": " << r.v.rule_name << "\n";
        out << "\n";
        out << "rule metrics over " << corpus.entries.size() << " file(s):\n";
        for (const auto& sr : scored) {
            out << "  " << sr.rule.name << ": support=" << sr.metrics.support;
            if (sr.metrics.confidence)
                out << " confidence=" << fmt_percent(*sr.metrics.confidence)
                    << " violation_rate="
                    << fmt_percent(*sr.metrics.violation_rate);
            else
                out << " confidence=n/a violation_rate=n/a";
            out << "\n";
        }
        out << rows.size() << " violation(s) in " << corpus.entries.size()
            << " file(s)";
        if (corpus.duplicates)
            out << " (" << corpus.duplicates << " duplicate(s) skipped)";
        out << "\n";
    }
    return rows.empty() ? 0 : 1;
}

int run_mine(const GlobalOpts& g, const std::vector<std::string>& paths,
             double min_support, const std::string& kinds_csv,
             const std::string& output, std::ostream& out, std::ostream& err) {
    auto schemas = load_schema_set(g);
    auto abstractions = load_abstraction_set(g);

    CorpusOptions copt;
    copt.filename_filter = g.filter;
    copt.jobs = g.jobs;
    Corpus corpus = ingest_corpus(paths, copt, schemas, abstractions);
    print_rejects(corpus, err);
    if (corpus.entries.empty()) {
        err << "no usable input files\n";
        return 2;
    }

    std::vector<TreeNode> trees;
    for (const auto& e : corpus.entries) trees.push_back(e.out.abstracted);

    std::vector<std::string> kinds;
    if (kinds_csv.empty()) {
        for (const auto& s : schemas) kinds.push_back(s.root_kind);
    } else {
        std::istringstream ss(kinds_csv);
        std::string k;
        while (std::getline(ss, k, ',')) {
            if (!k.empty()) kinds.push_back(k);
        }
    }

    MineOptions mopt;
    mopt.min_support = min_support;
    auto rules = mine_rules(trees, kinds, mopt);

    std::ostringstream body;
    body << "# mined " << rules.size() << " rule(s) from "
         << corpus.entries.size() << " file(s) at min support " << min_support
         << "\n\n";
    body << format_rules(rules);

    if (g.format == "json") {
        ordered_json j;
        j["files"] = corpus.entries.size();
        j["min_support"] = min_support;
        ordered_json arr = ordered_json::array();
        for (const auto& r : rules) {
            ordered_json jr;
            jr["name"] = r.name;
            jr["location"] = location_name(r.location);
            jr["scope"] = scope_name(r.scope);
            jr["antecedent"] = sexp_encode(r.antecedent);
            ordered_json cons = ordered_json::array();
            for (const auto& c : r.consequent) cons.push_back(sexp_encode(c));
            jr["consequent"] = cons;
            arr.push_back(jr);
        }
        j["rules"] = arr;
        out << j.dump(2) << "\n";
        return 0;
    }
    if (!output.empty()) {
        std::ofstream f(output, std::ios::binary);
        if (!f) {
            err << "cannot write " << output << "\n";
            return 2;
        }
        f << body.str();
        out << "wrote " << rules.size() << " rule(s) to " << output << "\n";
    } else {
        out << body.str();
    }
    return 0;
}

int run_stats(const GlobalOpts& g, const std::vector<std::string>& paths,
              bool per_file, std::ostream& out, std::ostream& err) {
    auto schemas = load_schema_set(g);
    auto abstractions = load_abstraction_set(g);

    CorpusOptions copt;
    copt.filename_filter = g.filter;
    copt.jobs = g.jobs;
    Corpus corpus = ingest_corpus(paths, copt, schemas, abstractions);
    print_rejects(corpus, err);
    if (corpus.entries.empty()) {
        err << "no usable input files\n";
        return 2;
    }
    EuSummary s = corpus_eu_summary(corpus);

    if (g.format == "json") {
        ordered_json j;
        j["files"] = s.files;
        j["duplicates"] = corpus.duplicates;
        j["rejects"] = corpus.rejects.size();
        auto dist = [](const DistributionStats& d) {
            ordered_json x;
            x["mean"] = d.mean;
            x["q1"] = d.q1;
            x["median"] = d.median;
            x["q3"] = d.q3;
            return x;
        };
        j["phase1_eu_fraction"] = dist(s.phase1);
        j["phase2_eu_fraction"] = dist(s.phase2);
        j["phase3_unresolved_fraction"] = dist(s.phase3);
        j["fully_resolved_fraction"] = s.fully_resolved_fraction;
        if (per_file) {
            ordered_json files = ordered_json::array();
            for (const auto& e : corpus.entries) {
                ordered_json f;
                f["file"] = e.path;
                f["sha1"] = e.sha1;
                f["phase1_eu_fraction"] = e.out.report1.eu_fraction();
                f["phase2_eu_fraction"] = e.out.report2.eu_fraction();
                f["phase3_unresolved_fraction"] =
                    e.out.report3.unresolved_fraction();
                files.push_back(f);
            }
            j["per_file"] = files;
        }
        out << j.dump(2) << "\n";
    } else {
        out << "files: " << s.files << " (duplicates skipped: "
            << corpus.duplicates << ", rejected: " << corpus.rejects.size()
            << ")\n";
        auto line = [&](const char* label, const DistributionStats& d) {
            out << label << ": mean=" << fmt_fraction(d.mean)
                << " q1=" << fmt_fraction(d.q1)
                << " median=" << fmt_fraction(d.median)
                << " q3=" << fmt_fraction(d.q3) << "\n";
        };
        line("phase1 EU fraction", s.phase1);
        line("phase2 EU fraction", s.phase2);
        line("phase3 unresolved fraction", s.phase3);
        out << "fully resolved files: "
            << fmt_percent(s.fully_resolved_fraction) << "\n";
        if (per_file) {
            for (const auto& e : corpus.entries) {
                out << "  " << e.path << ": m1="
                    << fmt_fraction(e.out.report1.eu_fraction())
                    << " m2=" << fmt_fraction(e.out.report2.eu_fraction())
                    << " m3="
                    << fmt_fraction(e.out.report3.unresolved_fraction()) << "\n";
            }
        }
    }
    return 0;
}

int run_filter_rules(const GlobalOpts& g, const std::vector<std::string>& paths,
                     int min_support, double min_confidence, std::ostream& out,
                     std::ostream& err) {
    auto schemas = load_schema_set(g);
    auto abstractions = load_abstraction_set(g);
    auto rules = load_rule_set(g, true);

    CorpusOptions copt;
    copt.filename_filter = g.filter;
    copt.jobs = g.jobs;
    Corpus corpus = ingest_corpus(paths, copt, schemas, abstractions);
    print_rejects(corpus, err);
    if (corpus.entries.empty()) {
        err << "no usable input files\n";
        return 2;
    }

    std::vector<TreeNode> trees;
    for (const auto& e : corpus.entries) trees.push_back(e.out.abstracted);
    auto scored = score_rules(trees, rules);
    auto kept = filter_rules(scored, min_support, min_confidence);

    if (g.format == "json") {
        ordered_json j;
        j["files"] = corpus.entries.size();
        j["min_support"] = min_support;
        j["min_confidence"] = min_confidence;
        ordered_json all = ordered_json::array();
        for (const auto& sr : scored) all.push_back(metrics_json(sr));
        j["scored"] = all;
        ordered_json names = ordered_json::array();
        for (const auto& sr : kept) names.push_back(sr.rule.name);
        j["kept"] = names;
        out << j.dump(2) << "\n";
        return 0;
    }

    out << "# kept " << kept.size() << " of " << rules.size()
        << " rule(s) at support >= " << min_support << ", confidence >= "
        << min_confidence << "\n";
    for (const auto& sr : scored) {
        out << "# " << sr.rule.name << ": support=" << sr.metrics.support;
        if (sr.metrics.confidence)
            out << " confidence=" << fmt_percent(*sr.metrics.confidence);
        else
            out << " confidence=n/a";
        bool in = std::any_of(kept.begin(), kept.end(), [&](const ScoredRule& k) {
            return k.rule.name == sr.rule.name;
        });
        out << (in ? "" : " (dropped)") << "\n";
    }
    out << "\n";
    std::vector<TreeAssociationRule> kept_rules;
    for (const auto& sr : kept) kept_rules.push_back(sr.rule);
    out << format_rules(kept_rules);
    return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Dockerfile parsing, rule mining and rule enforcement"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--schemas", g.schemas_dir,
                   "Directory of .schema files (default: bundled set)");
    app.add_option("--abstractions", g.abstractions_file,
                   "Abstraction table file (default: bundled set)");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--jobs", g.jobs, "Worker threads for corpus parsing")
        ->check(CLI::PositiveNumber);
    app.add_option("--filter", g.filter,
                   "Directory walk keeps files whose name contains this");

    auto* parse_cmd = app.add_subcommand("parse", "Parse one Dockerfile");
    std::string parse_file;
    int parse_phase = 3;
    bool parse_abstract = false;
    bool parse_annotated = false;
    parse_cmd->add_option("file", parse_file, "Dockerfile path")->required();
    parse_cmd->add_option("--phase", parse_phase, "Stop after phase 1, 2 or 3")
        ->check(CLI::Range(1, 3));
    parse_cmd->add_flag("--abstract", parse_abstract,
                        "Print the abstracted tree");
    parse_cmd->add_flag("--annotated", parse_annotated,
                        "Include node annotations");

    auto* enforce_cmd =
        app.add_subcommand("enforce", "Check rules over Dockerfiles");
    std::vector<std::string> enforce_paths;
    enforce_cmd->add_option("paths", enforce_paths, "Files or directories")
        ->required();
    enforce_cmd->add_option("--rules", g.rules_file,
                            "Rule file (default: bundled rule set)");

    auto* mine_cmd = app.add_subcommand("mine", "Mine rules from a corpus");
    std::vector<std::string> mine_paths;
    double mine_min_support = 0.75;
    std::string mine_kinds;
    std::string mine_output;
    mine_cmd->add_option("paths", mine_paths, "Files or directories")
        ->required();
    mine_cmd->add_option("--min-support", mine_min_support,
                         "Minimum support fraction");
    mine_cmd->add_option("--kinds", mine_kinds,
                         "Comma-separated kinds (default: schema roots)");
    mine_cmd->add_option("--output", mine_output, "Write rules to this file");

    auto* stats_cmd =
        app.add_subcommand("stats", "Parse-coverage statistics for a corpus");
    std::vector<std::string> stats_paths;
    bool stats_per_file = false;
    stats_cmd->add_option("paths", stats_paths, "Files or directories")
        ->required();
    stats_cmd->add_flag("--per-file", stats_per_file, "Per-file breakdown");

    auto* filter_cmd = app.add_subcommand(
        "filter-rules", "Keep rules meeting support and confidence thresholds");
    std::vector<std::string> filter_corpus;
    int filter_min_support = 50;
    double filter_min_confidence = 0.75;
    filter_cmd->add_option("--corpus", filter_corpus, "Files or directories")
        ->required();
    filter_cmd->add_option("--rules", g.rules_file,
                           "Rule file (default: bundled unfiltered set)");
    filter_cmd->add_option("--min-support", filter_min_support,
                           "Minimum antecedent occurrences");
    filter_cmd->add_option("--min-confidence", filter_min_confidence,
                           "Minimum confidence");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (parse_cmd->parsed())
            return run_parse(g, parse_file, parse_phase, parse_abstract,
                             parse_annotated, out, err);
        if (enforce_cmd->parsed()) return run_enforce(g, enforce_paths, out, err);
        if (mine_cmd->parsed())
            return run_mine(g, mine_paths, mine_min_support, mine_kinds,
                            mine_output, out, err);
        if (stats_cmd->parsed())
            return run_stats(g, stats_paths, stats_per_file, out, err);
        if (filter_cmd->parsed())
            return run_filter_rules(g, filter_corpus, filter_min_support,
                                    filter_min_confidence, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what();
        if (e.line > 0) err << " (line " << e.line << ")";
        err << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace dockrule
