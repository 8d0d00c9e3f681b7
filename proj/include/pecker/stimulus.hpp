#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"
#include "pecker/signal_class.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace pecker {

// One test: per-cycle input values plus golden expected outputs. The clock is
// implicit, one edge per cycle, and never appears in the input map.
struct StimulusCycle {
    std::map<std::string, std::uint64_t> inputs;
    std::map<std::string, std::uint64_t> expected_outputs;
};

struct Stimulus {
    std::vector<StimulusCycle> cycles;
};

namespace detail {

inline std::uint64_t parse_stim_value(const nlohmann::json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        auto n = v.get<std::int64_t>();
        if (n < 0) throw Error(ErrorKind::Format, where + ": negative value");
        return static_cast<std::uint64_t>(n);
    }
    if (!v.is_string())
        throw Error(ErrorKind::Format, where + ": value must be a string or unsigned integer");
    const std::string s = v.get<std::string>();
    if (s.empty()) throw Error(ErrorKind::Format, where + ": empty value");
    int base = 10;
    std::size_t start = 0;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
        base = 2;
        start = 2;
    } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        base = 16;
        start = 2;
    }
    std::uint64_t value = 0;
    for (std::size_t i = start; i < s.size(); ++i) {
        char c = s[i];
        if (c == '_') continue;
        int digit;
        if (c >= '0' && c <= '9')
            digit = c - '0';
        else if (c >= 'a' && c <= 'f')
            digit = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            digit = c - 'A' + 10;
        else
            throw Error(ErrorKind::Format, where + ": bad digit '" + std::string(1, c) + "' in \"" + s + "\"");
        if (digit >= base)
            throw Error(ErrorKind::Format, where + ": digit out of range for base in \"" + s + "\"");
        std::uint64_t next = value * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(digit);
        if (next < value || (base == 10 && value > (UINT64_MAX - static_cast<std::uint64_t>(digit)) / 10))
            throw Error(ErrorKind::Format, where + ": value overflows 64 bits in \"" + s + "\"");
        value = next;
    }
    return value;
}

inline std::map<std::string, std::uint64_t> parse_value_map(const nlohmann::json& obj,
                                                            const std::string& where) {
    if (!obj.is_object()) throw Error(ErrorKind::Format, where + ": expected an object");
    std::map<std::string, std::uint64_t> out;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        out[it.key()] = parse_stim_value(it.value(), where + "." + it.key());
    return out;
}

} // namespace detail

inline Stimulus stimulus_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("cycles") || !j["cycles"].is_array())
        throw Error(ErrorKind::Format, "stimulus: top-level object with a \"cycles\" array required");
    Stimulus stim;
    int idx = 0;
    for (const auto& c : j["cycles"]) {
        std::string where = "cycles[" + std::to_string(idx) + "]";
        if (!c.is_object()) throw Error(ErrorKind::Format, where + ": expected an object");
        StimulusCycle cyc;
        if (c.contains("inputs")) cyc.inputs = detail::parse_value_map(c["inputs"], where + ".inputs");
        if (c.contains("expected_outputs"))
            cyc.expected_outputs = detail::parse_value_map(c["expected_outputs"], where + ".expected_outputs");
        stim.cycles.push_back(std::move(cyc));
        ++idx;
    }
    return stim;
}

inline Stimulus load_stimulus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open stimulus file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Format, path + ": " + e.what());
    }
    try {
        return stimulus_from_json(j);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

/// Every cycle must drive every input except the clock, give an expectation
/// for every output, and fit the declared widths.
inline void validate_stimulus(const Stimulus& stim, const DesignAst& design) {
    int idx = 0;
    for (const auto& cyc : stim.cycles) {
        const std::string where = "cycles[" + std::to_string(idx) + "]";
        for (const auto& p : design.ports) {
            bool is_clock = design.clock && *design.clock == p.name;
            if (p.dir == PortDir::Input && !is_clock) {
                auto it = cyc.inputs.find(p.name);
                if (it == cyc.inputs.end())
                    throw Error(ErrorKind::Format, where + ": missing input " + p.name);
                if (p.width < 64 && (it->second >> p.width) != 0)
                    throw Error(ErrorKind::Format,
                                where + ": value for " + p.name + " exceeds width " + std::to_string(p.width));
            } else if (p.dir == PortDir::Output) {
                auto it = cyc.expected_outputs.find(p.name);
                if (it == cyc.expected_outputs.end())
                    throw Error(ErrorKind::Format, where + ": missing expected output " + p.name);
                if (p.width < 64 && (it->second >> p.width) != 0)
                    throw Error(ErrorKind::Format,
                                where + ": value for " + p.name + " exceeds width " + std::to_string(p.width));
            }
        }
        for (const auto& [name, _] : cyc.inputs) {
            const Port* p = design.find_port(name);
            if (!p || p->dir != PortDir::Input)
                throw Error(ErrorKind::Format, where + ": " + name + " is not an input port");
            if (design.clock && *design.clock == name)
                throw Error(ErrorKind::Format, where + ": the clock " + name + " is driven implicitly");
        }
        for (const auto& [name, _] : cyc.expected_outputs) {
            const Port* p = design.find_port(name);
            if (!p || p->dir != PortDir::Output)
                throw Error(ErrorKind::Format, where + ": " + name + " is not an output port");
        }
        ++idx;
    }
}

} // namespace pecker
