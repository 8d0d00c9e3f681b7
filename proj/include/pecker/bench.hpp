#pragma once

#include "pecker/design.hpp"
#include "pecker/diag.hpp"
#include "pecker/localizer.hpp"
#include "pecker/simulator.hpp"
#include "pecker/stimulus.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace pecker {

inline int top_k(const std::vector<int>& ranks, int k) {
    int count = 0;
    for (int r : ranks)
        if (r >= 1 && r <= k) ++count;
    return count;
}

inline double mfr(const std::vector<int>& ranks) {
    if (ranks.empty()) throw Error(ErrorKind::EmptyCorpus, "mean first rank over an empty rank set");
    long long sum = 0;
    for (int r : ranks) sum += r;
    return static_cast<double>(sum) / static_cast<double>(ranks.size());
}

inline int percentage(int count, int total) {
    if (total <= 0) return 0;
    return static_cast<int>(std::lround(100.0 * count / total));
}

struct CorpusEntry {
    std::string name;
    std::string design;   // reference, as written in the manifest
    std::string buggy;
    std::string stimulus;
    std::string truth_file;
    int truth_line = 0;
    std::string category; // easy | medium
    std::optional<int> true_activation;

    // manifest-relative paths resolved for loading
    std::string design_path;
    std::string buggy_path;
    std::string stimulus_path;
};

struct CorpusManifest {
    std::string path;
    std::vector<CorpusEntry> entries;
};

inline CorpusManifest load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open corpus manifest " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
        throw Error(ErrorKind::Format, path + ": top-level object with an \"entries\" array required");

    CorpusManifest manifest;
    manifest.path = path;
    std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&base](const std::string& rel) { return (base / rel).string(); };

    int idx = 0;
    for (const auto& je : j["entries"]) {
        std::string where = path + ": entries[" + std::to_string(idx) + "]";
        auto need = [&](const char* key) -> std::string {
            if (!je.contains(key) || !je[key].is_string())
                throw Error(ErrorKind::Format, where + ": missing string field \"" + key + "\"");
            return je[key].get<std::string>();
        };
        CorpusEntry e;
        e.design = need("design");
        e.buggy = need("buggy");
        e.stimulus = need("stimulus");
        e.category = need("category");
        if (e.category != "easy" && e.category != "medium")
            throw Error(ErrorKind::Format, where + ": category must be easy or medium");
        std::string truth = need("ground_truth");
        auto colon = truth.rfind(':');
        if (colon == std::string::npos || colon + 1 >= truth.size())
            throw Error(ErrorKind::Format, where + ": ground_truth must be file:line");
        e.truth_file = truth.substr(0, colon);
        try {
            e.truth_line = std::stoi(truth.substr(colon + 1));
        } catch (...) {
            throw Error(ErrorKind::Format, where + ": ground_truth line is not a number");
        }
        if (je.contains("name")) e.name = je["name"].get<std::string>();
        if (e.name.empty()) e.name = std::filesystem::path(e.buggy).stem().string();
        if (je.contains("true_activation")) {
            if (!je["true_activation"].is_number_integer())
                throw Error(ErrorKind::Format, where + ": true_activation must be an integer");
            e.true_activation = je["true_activation"].get<int>();
        }
        e.design_path = resolve(e.design);
        e.buggy_path = resolve(e.buggy);
        e.stimulus_path = resolve(e.stimulus);
        manifest.entries.push_back(std::move(e));
        ++idx;
    }
    if (manifest.entries.empty()) throw Error(ErrorKind::EmptyCorpus, path + ": no corpus entries");
    return manifest;
}

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

} // namespace detail

// A validated, fully loaded corpus entry ready to score.
struct PreparedBug {
    const CorpusEntry* entry = nullptr;
    Design reference;
    Design buggy;
    Stimulus stim;
    TestRun buggy_run;
    int truth_stmt = -1;
    std::optional<int> true_activation;
};

/// First cycle where the buggy and reference simulations disagree on a signal
/// the faulty statement writes. Register commits land at the end of their
/// cycle, so a corrupting edge-block execution at cycle c reports cycle c.
inline std::optional<int> compute_true_activation(const Design& reference, const Design& buggy,
                                                  const Stimulus& stim, int truth_stmt) {
    const StatementInfo& info = buggy.table.at(truth_stmt);
    std::vector<std::string> watch;
    if (!info.written.empty())
        watch.push_back(info.written);
    else
        watch = info.subtree_writes;
    if (watch.empty()) return std::nullopt;

    Simulator ref_sim(reference.ast, reference.table, reference.classes);
    Simulator bug_sim(buggy.ast, buggy.table, buggy.classes);
    for (std::size_t c = 0; c < stim.cycles.size(); ++c) {
        ref_sim.step_cycle(stim.cycles[c]);
        bug_sim.step_cycle(stim.cycles[c]);
        for (const auto& w : watch) {
            auto rv = ref_sim.values().find(w);
            auto bv = bug_sim.values().find(w);
            if (rv != ref_sim.values().end() && bv != bug_sim.values().end() && rv->second != bv->second)
                return static_cast<int>(c);
        }
    }
    return std::nullopt;
}

/// Load and check one entry: the pair of designs must differ on exactly the
/// ground-truth line, the stimulus must pass on the reference and fail on the
/// buggy design, and the line must map to a statement.
inline PreparedBug prepare_bug(const CorpusEntry& entry) {
    auto fail = [&entry](const std::string& msg) {
        return Error(ErrorKind::Format, entry.name + ": " + msg);
    };
    PreparedBug p;
    p.entry = &entry;

    if (entry.truth_file != entry.buggy)
        throw fail("ground_truth file " + entry.truth_file + " is not the buggy design " + entry.buggy);

    auto ref_lines = detail::read_lines(entry.design_path);
    auto bug_lines = detail::read_lines(entry.buggy_path);
    if (ref_lines.size() != bug_lines.size())
        throw fail("reference and buggy designs differ in line count");
    std::vector<int> diff;
    for (std::size_t i = 0; i < ref_lines.size(); ++i)
        if (ref_lines[i] != bug_lines[i]) diff.push_back(static_cast<int>(i) + 1);
    if (diff.size() != 1 || diff[0] != entry.truth_line)
        throw fail("designs must differ on exactly the ground-truth line " +
                   std::to_string(entry.truth_line));

    p.reference = load_design(entry.design_path);
    p.buggy = load_design(entry.buggy_path);
    p.stim = load_stimulus(entry.stimulus_path);
    validate_stimulus(p.stim, p.reference.ast);
    validate_stimulus(p.stim, p.buggy.ast);

    p.truth_stmt = p.buggy.table.find_by_line(entry.truth_line);
    if (p.truth_stmt < 0) throw fail("no statement on ground-truth line " + std::to_string(entry.truth_line));

    auto [ref_trace, ref_results] = simulate(p.reference.ast, p.reference.table, p.reference.classes, p.stim);
    (void)ref_trace;
    if (first_fail_cycle(ref_results))
        throw fail("stimulus fails on the reference design; golden outputs are wrong");

    auto [bug_trace, bug_results] = simulate(p.buggy.ast, p.buggy.table, p.buggy.classes, p.stim);
    p.buggy_run.trace = std::move(bug_trace);
    p.buggy_run.results = std::move(bug_results);
    if (!p.buggy_run.failing()) throw fail("stimulus never fails on the buggy design");

    p.true_activation = entry.true_activation;
    if (!p.true_activation)
        p.true_activation = compute_true_activation(p.reference, p.buggy, p.stim, p.truth_stmt);
    return p;
}

struct BenchReport {
    nlohmann::ordered_json json;
    std::string table; // human-readable summary for standard output
};

namespace detail {

struct MetricScope {
    std::vector<int> ranks;
};

inline nlohmann::ordered_json metric_block(const std::vector<int>& ranks) {
    nlohmann::ordered_json j;
    int n = static_cast<int>(ranks.size());
    j["bugs"] = n;
    j["top1"] = top_k(ranks, 1);
    j["top1_pct"] = percentage(top_k(ranks, 1), n);
    j["top3"] = top_k(ranks, 3);
    j["top3_pct"] = percentage(top_k(ranks, 3), n);
    j["top5"] = top_k(ranks, 5);
    j["top5_pct"] = percentage(top_k(ranks, 5), n);
    if (n > 0)
        j["mfr"] = mfr(ranks);
    else
        j["mfr"] = nullptr;
    return j;
}

inline std::string metric_row(const std::string& label, const std::vector<int>& ranks) {
    std::ostringstream os;
    int n = static_cast<int>(ranks.size());
    os << "  " << std::left << std::setw(16) << label;
    for (int k : {1, 3, 5}) {
        std::ostringstream cell;
        cell << top_k(ranks, k) << " (" << percentage(top_k(ranks, k), n) << "%)";
        os << std::setw(12) << cell.str();
    }
    if (n > 0) {
        std::ostringstream m;
        m << std::fixed << std::setprecision(2) << mfr(ranks);
        os << m.str();
    } else {
        os << "-";
    }
    return os.str();
}

inline const char* table_header() { return "                  Top-1       Top-3       Top-5       MFR"; }

} // namespace detail

/// Validate every entry, then score every (bug, mode) pair. Scoring failures
/// for individual pairs are recorded in the report without aborting the batch.
inline BenchReport run_corpus(const CorpusManifest& manifest, const std::vector<Mode>& modes,
                              bool empc_fixpoint = false) {
    if (manifest.entries.empty())
        throw Error(ErrorKind::EmptyCorpus, manifest.path + ": no corpus entries");

    std::vector<PreparedBug> bugs;
    for (const auto& e : manifest.entries) bugs.push_back(prepare_bug(e));

    const std::vector<std::pair<Truncation, const char*>> levels = {
        {Truncation::Full, "full"}, {Truncation::Half, "half"}, {Truncation::None, "none"}};

    nlohmann::ordered_json report;
    report["manifest"] = manifest.path;
    report["bug_count"] = static_cast<int>(bugs.size());
    report["modes"] = nlohmann::ordered_json::array();
    for (Mode m : modes) report["modes"].push_back(mode_name(m));

    // mode -> scope ("overall"/"easy"/"medium") -> ranks
    std::map<std::string, std::map<std::string, std::vector<int>>> mode_ranks;
    std::map<std::string, std::map<std::string, std::vector<int>>> trunc_ranks;
    int match_count = 0, match_evaluated = 0;
    std::vector<std::string> match_skipped;

    report["bugs"] = nlohmann::ordered_json::array();
    for (const auto& bug : bugs) {
        const CorpusEntry& entry = *bug.entry;
        nlohmann::ordered_json jb;
        jb["name"] = entry.name;
        jb["category"] = entry.category;
        jb["buggy"] = entry.buggy;
        jb["ground_truth"] = entry.truth_file + ":" + std::to_string(entry.truth_line);
        jb["stmt_id"] = bug.truth_stmt;

        std::vector<TestRun> tests;
        tests.push_back(bug.buggy_run);

        jb["ranks"] = nlohmann::ordered_json::object();
        for (Mode m : modes) {
            LocalizeOptions opt;
            opt.mode = m;
            opt.empc_fixpoint = empc_fixpoint;
            try {
                RankedList list = localize(bug.buggy.pdg, bug.buggy.table, tests, opt);
                int rank = list.rank_of_stmt(bug.truth_stmt);
                jb["ranks"][mode_name(m)] = rank;
                mode_ranks[mode_name(m)]["overall"].push_back(rank);
                mode_ranks[mode_name(m)][entry.category].push_back(rank);
            } catch (const Error& e) {
                jb["ranks"][mode_name(m)] = nullptr;
                jb["errors"][mode_name(m)] = std::string(e.what());
            }
        }

        // Truncation study and activation match always run on the full pecker
        // pipeline, independent of the requested mode list.
        jb["truncation_ranks"] = nlohmann::ordered_json::object();
        for (const auto& [level, level_name] : levels) {
            LocalizeOptions opt;
            opt.mode = Mode::Pecker;
            opt.truncation = level;
            opt.empc_fixpoint = empc_fixpoint;
            try {
                RankedList list = localize(bug.buggy.pdg, bug.buggy.table, tests, opt);
                int rank = list.rank_of_stmt(bug.truth_stmt);
                jb["truncation_ranks"][level_name] = rank;
                trunc_ranks[level_name]["overall"].push_back(rank);
                trunc_ranks[level_name][entry.category].push_back(rank);
                if (level == Truncation::Full) {
                    for (const auto& re : list.entries) {
                        if (re.stmt_id != bug.truth_stmt) continue;
                        jb["empc"] = re.empc == EmpcMap::kInf ? nlohmann::ordered_json("inf")
                                                              : nlohmann::ordered_json(re.empc);
                        jb["c_act"] = re.excluded ? nlohmann::ordered_json() : nlohmann::ordered_json(re.c_act);
                        if (bug.true_activation) {
                            jb["true_activation"] = *bug.true_activation;
                            bool match = !re.excluded && re.c_act == *bug.true_activation;
                            jb["c_act_match"] = match;
                            ++match_evaluated;
                            if (match) ++match_count;
                        } else {
                            jb["true_activation"] = nullptr;
                            match_skipped.push_back(entry.name);
                        }
                        break;
                    }
                }
            } catch (const Error& e) {
                jb["truncation_ranks"][level_name] = nullptr;
                jb["errors"][std::string("truncation-") + level_name] = std::string(e.what());
            }
        }
        report["bugs"].push_back(std::move(jb));
    }

    const std::vector<std::string> scopes = {"overall", "easy", "medium"};
    report["summary"] = nlohmann::ordered_json::object();
    for (Mode m : modes) {
        nlohmann::ordered_json js;
        for (const auto& scope : scopes)
            js[scope] = detail::metric_block(mode_ranks[mode_name(m)][scope]);
        report["summary"][mode_name(m)] = std::move(js);
    }
    report["truncation_study"] = nlohmann::ordered_json::object();
    for (const auto& [_, level_name] : levels) {
        nlohmann::ordered_json js;
        for (const auto& scope : scopes)
            js[scope] = detail::metric_block(trunc_ranks[level_name][scope]);
        report["truncation_study"][level_name] = std::move(js);
    }

    nlohmann::ordered_json jm;
    jm["matched"] = match_count;
    jm["evaluated"] = match_evaluated;
    jm["skipped"] = match_skipped;
    if (match_evaluated > 0)
        jm["ratio"] = static_cast<double>(match_count) / static_cast<double>(match_evaluated);
    else
        jm["ratio"] = nullptr;
    report["empc_match"] = std::move(jm);

    // Human-readable tables.
    std::ostringstream os;
    for (const auto& scope : scopes) {
        if (mode_ranks.empty()) break;
        std::size_t n = mode_ranks.begin()->second[scope].size();
        os << "== " << scope << " (" << n << " bugs) ==\n";
        os << detail::table_header() << "\n";
        for (Mode m : modes)
            os << detail::metric_row(mode_name(m), mode_ranks[mode_name(m)][scope]) << "\n";
        os << "\n";
    }
    os << "== truncation study (mode pecker) ==\n" << detail::table_header() << "\n";
    for (const auto& [_, level_name] : levels)
        os << detail::metric_row(level_name, trunc_ranks[level_name]["overall"]) << "\n";
    os << "\n== activation estimate ==\n";
    os << "  C_act match: " << match_count << "/" << match_evaluated;
    if (match_evaluated > 0) {
        std::ostringstream r;
        r << std::fixed << std::setprecision(2)
          << (static_cast<double>(match_count) / static_cast<double>(match_evaluated));
        os << " (ratio " << r.str() << ")";
    }
    if (!match_skipped.empty()) os << ", skipped " << match_skipped.size() << " without ground truth";
    os << "\n";

    BenchReport out;
    out.json = std::move(report);
    out.table = os.str();
    return out;
}

} // namespace pecker
