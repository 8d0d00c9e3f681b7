#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"
#include "pecker/stmt_table.hpp"

#include <map>
#include <string>

namespace pecker {

enum class SignalClass { Input, Output, Register, Combinational };

inline const char* signal_class_name(SignalClass c) {
    switch (c) {
    case SignalClass::Input: return "input";
    case SignalClass::Output: return "output";
    case SignalClass::Register: return "register";
    case SignalClass::Combinational: return "comb";
    }
    return "?";
}

using SignalClassMap = std::map<std::string, SignalClass>;

// Ports classify by direction. A non-port signal is Register iff it is assigned
// inside an edge-sensitive block (regardless of the =/<= operator used), else
// Combinational. A signal assigned in both edge-sensitive and combinational
// contexts is a MixedDriver error; one assigned by two continuous assigns or by
// a continuous assign plus a block is a MultiDriver error.
inline SignalClassMap classify_signals(const DesignAst& design, const StatementTable& table) {
    SignalClassMap classes;
    for (const auto& p : design.ports)
        classes[p.name] = p.dir == PortDir::Input ? SignalClass::Input : SignalClass::Output;
    for (const auto& v : design.vars)
        classes[v.name] = SignalClass::Combinational;

    // driver context per signal: 0 none, 1 edge, 2 comb-block, 3 continuous
    std::map<std::string, int> driver;
    std::map<std::string, int> cont_count;
    for (const auto& e : table.entries) {
        if (e.written.empty()) continue;
        int ctx = e.kind == StmtKind::ContAssign ? 3 : (e.in_edge_block ? 1 : 2);
        auto [it, fresh] = driver.emplace(e.written, ctx);
        if (ctx == 3 && ++cont_count[e.written] > 1)
            throw Error(ErrorKind::MultiDriver, e.span,
                        "'" + e.written + "' is driven by more than one continuous assign");
        if (!fresh && it->second != ctx) {
            if ((it->second == 1 && ctx == 2) || (it->second == 2 && ctx == 1))
                throw Error(ErrorKind::MixedDriver, e.span,
                            "'" + e.written + "' is assigned in both edge-sensitive and combinational contexts");
            throw Error(ErrorKind::MultiDriver, e.span,
                        "'" + e.written + "' is driven by both a continuous assign and an always block");
        }
        if (!design.find_port(e.written) && ctx == 1)
            classes[e.written] = SignalClass::Register;
    }
    return classes;
}

} // namespace pecker
