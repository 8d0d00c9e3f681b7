#pragma once

#include "pecker/diag.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pecker {

// Per-cycle executed-statement sets, dense over the statement table. Cycle
// indices are contiguous from 0.
struct ExecutionTrace {
    int stmt_count = 0;
    std::vector<std::vector<bool>> cycles;

    int cycle_count() const { return static_cast<int>(cycles.size()); }

    bool executed(int cycle, int stmt_id) const {
        if (cycle < 0 || cycle >= cycle_count()) return false;
        const auto& row = cycles[static_cast<std::size_t>(cycle)];
        if (stmt_id < 0 || stmt_id >= static_cast<int>(row.size())) return false;
        return row[static_cast<std::size_t>(stmt_id)];
    }

    void set_executed(int cycle, int stmt_id) {
        while (cycle_count() <= cycle) cycles.emplace_back(static_cast<std::size_t>(stmt_count), false);
        cycles[static_cast<std::size_t>(cycle)][static_cast<std::size_t>(stmt_id)] = true;
    }

    std::vector<int> executed_list(int cycle) const {
        std::vector<int> out;
        if (cycle < 0 || cycle >= cycle_count()) return out;
        const auto& row = cycles[static_cast<std::size_t>(cycle)];
        for (int s = 0; s < static_cast<int>(row.size()); ++s)
            if (row[static_cast<std::size_t>(s)]) out.push_back(s);
        return out;
    }
};

// true = pass. Same length as the trace.
using CycleResults = std::vector<bool>;

inline std::optional<int> first_fail_cycle(const CycleResults& results) {
    for (int c = 0; c < static_cast<int>(results.size()); ++c)
        if (!results[static_cast<std::size_t>(c)]) return c;
    return std::nullopt;
}

/// JSON-lines: a mandatory `{"stmt_count":N}` header, then one
/// `{"cycle":c,"executed":[...],"pass":bool}` object per cycle. The writer is
/// byte-stable: fixed key order, ascending stmt ids, no whitespace.
inline void save_trace(const ExecutionTrace& trace, const CycleResults& results, std::ostream& os) {
    os << "{\"stmt_count\":" << trace.stmt_count << "}\n";
    for (int c = 0; c < trace.cycle_count(); ++c) {
        os << "{\"cycle\":" << c << ",\"executed\":[";
        bool first = true;
        for (int s : trace.executed_list(c)) {
            if (!first) os << ",";
            os << s;
            first = false;
        }
        bool pass = c < static_cast<int>(results.size()) && results[static_cast<std::size_t>(c)];
        os << "],\"pass\":" << (pass ? "true" : "false") << "}\n";
    }
}

inline void save_trace(const ExecutionTrace& trace, const CycleResults& results,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
    save_trace(trace, results, out);
}

inline std::pair<ExecutionTrace, CycleResults> load_trace(std::istream& is,
                                                          const std::string& name = "<trace>") {
    auto at_line = [&name](int line) { return name + ":" + std::to_string(line); };
    std::string line;
    int lineno = 0;
    ExecutionTrace trace;
    CycleResults results;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::Format, at_line(lineno) + ": " + e.what());
        }
        if (!j.is_object()) throw Error(ErrorKind::Format, at_line(lineno) + ": expected an object");
        if (!have_header) {
            if (!j.contains("stmt_count") || !j["stmt_count"].is_number_integer())
                throw Error(ErrorKind::Format,
                            at_line(lineno) + ": first line must be the {\"stmt_count\":N} header");
            int n = j["stmt_count"].get<int>();
            if (n < 0) throw Error(ErrorKind::Format, at_line(lineno) + ": negative stmt_count");
            trace.stmt_count = n;
            have_header = true;
            continue;
        }
        if (!j.contains("cycle") || !j["cycle"].is_number_integer() || !j.contains("executed") ||
            !j["executed"].is_array() || !j.contains("pass") || !j["pass"].is_boolean())
            throw Error(ErrorKind::Format,
                        at_line(lineno) + ": cycle records need integer \"cycle\", array \"executed\", boolean \"pass\"");
        int cycle = j["cycle"].get<int>();
        if (cycle != trace.cycle_count())
            throw Error(ErrorKind::Format, at_line(lineno) + ": cycle indices must be contiguous from 0, got " +
                                               std::to_string(cycle) + " expecting " +
                                               std::to_string(trace.cycle_count()));
        trace.cycles.emplace_back(static_cast<std::size_t>(trace.stmt_count), false);
        for (const auto& v : j["executed"]) {
            if (!v.is_number_integer())
                throw Error(ErrorKind::Format, at_line(lineno) + ": executed entries must be integers");
            int s = v.get<int>();
            if (s < 0 || s >= trace.stmt_count)
                throw Error(ErrorKind::Bounds, at_line(lineno) + ": stmt_id " + std::to_string(s) +
                                                   " outside stmt_count " + std::to_string(trace.stmt_count));
            trace.cycles.back()[static_cast<std::size_t>(s)] = true;
        }
        results.push_back(j["pass"].get<bool>());
    }
    if (!have_header)
        throw Error(ErrorKind::Format, name + ": missing {\"stmt_count\":N} header line");
    return {std::move(trace), std::move(results)};
}

inline std::pair<ExecutionTrace, CycleResults> load_trace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open trace file " + path);
    return load_trace(in, path);
}

} // namespace pecker
