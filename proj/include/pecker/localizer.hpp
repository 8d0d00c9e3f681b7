#pragma once

#include "pecker/diag.hpp"
#include "pecker/empc.hpp"
#include "pecker/pdg.hpp"
#include "pecker/stmt_table.hpp"
#include "pecker/trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pecker {

enum class Mode { Pecker, PeckerNoAl, PeckerNoNtp, Tarantula, Ochiai };

inline const char* mode_name(Mode m) {
    switch (m) {
    case Mode::Pecker: return "pecker";
    case Mode::PeckerNoAl: return "pecker-no-al";
    case Mode::PeckerNoNtp: return "pecker-no-ntp";
    case Mode::Tarantula: return "tarantula";
    case Mode::Ochiai: return "ochiai";
    }
    return "?";
}

inline std::optional<Mode> mode_from_string(const std::string& s) {
    if (s == "pecker") return Mode::Pecker;
    if (s == "pecker-no-al") return Mode::PeckerNoAl;
    if (s == "pecker-no-ntp") return Mode::PeckerNoNtp;
    if (s == "tarantula") return Mode::Tarantula;
    if (s == "ochiai") return Mode::Ochiai;
    return std::nullopt;
}

enum class Truncation { Full, Half, None };

inline const char* truncation_name(Truncation t) {
    switch (t) {
    case Truncation::Full: return "full";
    case Truncation::Half: return "half";
    case Truncation::None: return "none";
    }
    return "?";
}

inline std::optional<Truncation> truncation_from_string(const std::string& s) {
    if (s == "full") return Truncation::Full;
    if (s == "half") return Truncation::Half;
    if (s == "none") return Truncation::None;
    return std::nullopt;
}

// One simulated test: the executed-statement trace plus per-cycle verdicts.
struct TestRun {
    ExecutionTrace trace;
    CycleResults results;

    bool failing() const { return first_fail_cycle(results).has_value(); }
};

// Per-statement activation estimate. A statement is excluded when no finite
// activation cycle explains the observed failure.
struct ActivationEntry {
    bool excluded = false;
    std::string reason; // "empc-infinite" | "negative-cycle"
    int c_act = -1;
    int empc = EmpcMap::kInf;
};

struct ActivationMap {
    int c_obs = 0;
    std::vector<ActivationEntry> by_stmt;
};

/// C_act = C_obs - EMPC. Infinite EMPC means no activated path to an output;
/// EMPC beyond C_obs would place the activation before cycle 0.
inline ActivationMap activation_cycle(const EmpcMap& empc, const Pdg& pdg, int c_obs) {
    ActivationMap out;
    out.c_obs = c_obs;
    out.by_stmt.resize(static_cast<std::size_t>(pdg.stmt_count));
    for (int s = 0; s < pdg.stmt_count; ++s) {
        ActivationEntry& e = out.by_stmt[static_cast<std::size_t>(s)];
        e.empc = empc.at(pdg.node_of_stmt(s));
        if (e.empc == EmpcMap::kInf) {
            e.excluded = true;
            e.reason = "empc-infinite";
        } else if (e.empc > c_obs) {
            e.excluded = true;
            e.reason = "negative-cycle";
        } else {
            e.c_act = c_obs - e.empc;
        }
    }
    return out;
}

struct SuspicionScore {
    std::int64_t aef = 0;
    std::int64_t aep = 0; // inv_aep = 1/aep, infinite when aep = 0
};

// Strict-weak "ranks before": aef descending, then 1/aep descending, which in
// integers is aep = 0 first and smaller aep next.
inline bool score_before(const SuspicionScore& a, const SuspicionScore& b) {
    if (a.aef != b.aef) return a.aef > b.aef;
    bool a_inf = a.aep == 0, b_inf = b.aep == 0;
    if (a_inf != b_inf) return a_inf;
    return a.aep < b.aep;
}

inline bool score_equal(const SuspicionScore& a, const SuspicionScore& b) {
    return !score_before(a, b) && !score_before(b, a);
}

namespace detail {

// Last kept cycle (inclusive) of a failing trace for a statement activated at
// c_act. Full cuts at the activation cycle, half keeps half of the polluted
// suffix, none keeps everything.
inline int kept_end(int c_act, int length, Truncation trunc) {
    int last = length - 1;
    switch (trunc) {
    case Truncation::Full: return std::min(c_act, last);
    case Truncation::Half: return std::min(c_act + (last - c_act) / 2, last);
    case Truncation::None: return last;
    }
    return last;
}

} // namespace detail

/// Score one statement. aef counts failing tests that executed it at its
/// activation cycle; aep counts its other executions in the kept prefix of each
/// failing test plus every execution in passing tests.
inline SuspicionScore dual_score(int stmt_id, int c_act,
                                 const std::vector<const TestRun*>& failing,
                                 const std::vector<const TestRun*>& passing,
                                 Truncation trunc) {
    SuspicionScore score;
    for (const TestRun* t : failing) {
        if (t->trace.executed(c_act, stmt_id)) ++score.aef;
        int end = detail::kept_end(c_act, t->trace.cycle_count(), trunc);
        for (int c = 0; c <= end; ++c)
            if (c != c_act && t->trace.executed(c, stmt_id)) ++score.aep;
    }
    for (const TestRun* t : passing)
        for (int c = 0; c < t->trace.cycle_count(); ++c)
            if (t->trace.executed(c, stmt_id)) ++score.aep;
    return score;
}

// Per-cycle spectrum counts, every cycle of every test treated as one test.
struct SpectrumCounts {
    std::int64_t ef = 0, ep = 0;
};

struct Spectra {
    std::vector<SpectrumCounts> by_stmt;
    std::int64_t total_fail = 0, total_pass = 0;
};

inline Spectra collect_cycle_spectra(const std::vector<TestRun>& tests, int stmt_count) {
    Spectra sp;
    sp.by_stmt.resize(static_cast<std::size_t>(stmt_count));
    for (const auto& t : tests) {
        for (int c = 0; c < t.trace.cycle_count(); ++c) {
            bool pass = c < static_cast<int>(t.results.size()) && t.results[static_cast<std::size_t>(c)];
            if (pass)
                ++sp.total_pass;
            else
                ++sp.total_fail;
            for (int s = 0; s < stmt_count; ++s) {
                if (!t.trace.executed(c, s)) continue;
                if (pass)
                    ++sp.by_stmt[static_cast<std::size_t>(s)].ep;
                else
                    ++sp.by_stmt[static_cast<std::size_t>(s)].ef;
            }
        }
    }
    return sp;
}

inline double tarantula_score(const SpectrumCounts& c, std::int64_t total_fail,
                              std::int64_t total_pass) {
    double fr = total_fail > 0 ? static_cast<double>(c.ef) / static_cast<double>(total_fail) : 0.0;
    double pr = total_pass > 0 ? static_cast<double>(c.ep) / static_cast<double>(total_pass) : 0.0;
    double denom = fr + pr;
    return denom == 0.0 ? 0.0 : fr / denom;
}

inline double ochiai_score(const SpectrumCounts& c, std::int64_t total_fail) {
    double denom = std::sqrt(static_cast<double>(total_fail) * static_cast<double>(c.ef + c.ep));
    return denom == 0.0 ? 0.0 : static_cast<double>(c.ef) / denom;
}

struct RankedEntry {
    int rank = 0;
    int stmt_id = -1;
    SourcePos span;
    std::string kind;

    // pecker-family fields
    bool candidate = false; // aef > 0 and not excluded
    bool excluded = false;
    std::string exclusion_reason;
    SuspicionScore score;
    int c_act = -1;
    int empc = EmpcMap::kInf;

    // baseline score; also orders the appended non-candidates
    double spectrum_score = 0.0;
};

struct RankedList {
    Mode mode = Mode::Pecker;
    Truncation truncation = Truncation::Full;
    int first_fail = -1;
    std::vector<RankedEntry> entries;

    int rank_of_stmt(int stmt_id) const {
        for (const auto& e : entries)
            if (e.stmt_id == stmt_id) return e.rank;
        return 0;
    }
};

struct LocalizeOptions {
    Mode mode = Mode::Pecker;
    Truncation truncation = Truncation::Full;
    bool empc_fixpoint = false;
};

/// Rank every statement. Candidates (aef > 0, not excluded) come first under
/// the dual-score comparator with EMPC then stmt_id as tie breaks; the rest
/// follow ordered by Ochiai over the unpruned spectra. Baseline modes rank all
/// statements by their formula alone.
inline RankedList rank_statements(const StatementTable& table, const ActivationMap* activation,
                                  const std::vector<SuspicionScore>* scores, const Spectra& spectra,
                                  Mode mode, Truncation trunc, int first_fail) {
    RankedList out;
    out.mode = mode;
    out.truncation = trunc;
    out.first_fail = first_fail;

    std::vector<RankedEntry> entries;
    for (const auto& info : table.entries) {
        RankedEntry e;
        e.stmt_id = info.stmt_id;
        e.span = info.span;
        e.kind = stmt_kind_name(info.kind);
        const auto& counts = spectra.by_stmt[static_cast<std::size_t>(info.stmt_id)];
        e.spectrum_score = mode == Mode::Tarantula
                               ? tarantula_score(counts, spectra.total_fail, spectra.total_pass)
                               : ochiai_score(counts, spectra.total_fail);
        if (activation && scores) {
            const auto& act = activation->by_stmt[static_cast<std::size_t>(info.stmt_id)];
            e.excluded = act.excluded;
            e.exclusion_reason = act.reason;
            e.c_act = act.c_act;
            e.empc = act.empc;
            e.score = (*scores)[static_cast<std::size_t>(info.stmt_id)];
            e.candidate = !act.excluded && e.score.aef > 0;
        }
        entries.push_back(std::move(e));
    }

    bool baseline = mode == Mode::Tarantula || mode == Mode::Ochiai;
    std::sort(entries.begin(), entries.end(), [baseline](const RankedEntry& a, const RankedEntry& b) {
        if (baseline) {
            if (a.spectrum_score != b.spectrum_score) return a.spectrum_score > b.spectrum_score;
            return a.stmt_id < b.stmt_id;
        }
        if (a.candidate != b.candidate) return a.candidate;
        if (a.candidate) {
            if (!score_equal(a.score, b.score)) return score_before(a.score, b.score);
            if (a.empc != b.empc) return a.empc < b.empc;
            return a.stmt_id < b.stmt_id;
        }
        if (a.spectrum_score != b.spectrum_score) return a.spectrum_score > b.spectrum_score;
        return a.stmt_id < b.stmt_id;
    });

    int rank = 1;
    for (auto& e : entries) e.rank = rank++;
    out.entries = std::move(entries);
    return out;
}

/// Full pipeline over already-simulated tests. The first failing test anchors
/// C_obs and the EMPC computation; remaining tests contribute execution
/// context. Throws NoFailure when every test passes.
inline RankedList localize(const Pdg& pdg, const StatementTable& table,
                           const std::vector<TestRun>& tests, const LocalizeOptions& opt) {
    std::vector<const TestRun*> failing, passing;
    const TestRun* primary = nullptr;
    for (const auto& t : tests) {
        if (t.failing()) {
            failing.push_back(&t);
            if (!primary) primary = &t;
        } else {
            passing.push_back(&t);
        }
    }
    if (!primary) throw Error(ErrorKind::NoFailure, "no failing cycle; nothing to localize");
    int c_obs = *first_fail_cycle(primary->results);

    Spectra spectra = collect_cycle_spectra(tests, table.size());
    if (opt.mode == Mode::Tarantula || opt.mode == Mode::Ochiai)
        return rank_statements(table, nullptr, nullptr, spectra, opt.mode, opt.truncation, c_obs);

    EmpcMap empc = compute_empc(pdg, primary->trace, primary->results, opt.empc_fixpoint);
    ActivationMap activation = activation_cycle(empc, pdg, c_obs);
    if (opt.mode == Mode::PeckerNoAl) {
        // Ablation: no activation localization, every statement gets C_obs.
        for (auto& e : activation.by_stmt) {
            e.excluded = false;
            e.reason.clear();
            e.c_act = c_obs;
        }
    }
    Truncation trunc = opt.mode == Mode::PeckerNoNtp ? Truncation::None : opt.truncation;

    std::vector<SuspicionScore> scores(static_cast<std::size_t>(table.size()));
    for (int s = 0; s < table.size(); ++s) {
        const auto& act = activation.by_stmt[static_cast<std::size_t>(s)];
        if (act.excluded) continue;
        scores[static_cast<std::size_t>(s)] = dual_score(s, act.c_act, failing, passing, trunc);
    }
    return rank_statements(table, &activation, &scores, spectra, opt.mode, trunc, c_obs);
}

/// Report entries, in rank order, ready for JSON serialization.
inline nlohmann::ordered_json ranked_list_to_json(const RankedList& list, int top = 0) {
    nlohmann::ordered_json report;
    report["mode"] = mode_name(list.mode);
    report["truncation"] = truncation_name(list.truncation);
    report["first_fail_cycle"] = list.first_fail;
    report["entries"] = nlohmann::ordered_json::array();
    bool baseline = list.mode == Mode::Tarantula || list.mode == Mode::Ochiai;
    for (const auto& e : list.entries) {
        if (top > 0 && e.rank > top) break;
        nlohmann::ordered_json j;
        j["rank"] = e.rank;
        j["stmt_id"] = e.stmt_id;
        j["where"] = e.span.file + ":" + std::to_string(e.span.line);
        j["kind"] = e.kind;
        if (baseline) {
            j["score"] = e.spectrum_score;
        } else {
            j["aef"] = e.score.aef;
            j["aep"] = e.score.aep;
            if (e.score.aep == 0)
                j["inv_aep"] = "inf";
            else
                j["inv_aep"] = 1.0 / static_cast<double>(e.score.aep);
            j["candidate"] = e.candidate;
            if (e.excluded) j["excluded"] = e.exclusion_reason;
            j["c_act"] = e.excluded ? nlohmann::ordered_json() : nlohmann::ordered_json(e.c_act);
            j["empc"] = e.empc == EmpcMap::kInf ? nlohmann::ordered_json("inf")
                                                : nlohmann::ordered_json(e.empc);
            if (!e.candidate) j["fallback_score"] = e.spectrum_score;
        }
        report["entries"].push_back(std::move(j));
    }
    return report;
}

} // namespace pecker
