#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"
#include "pecker/parser.hpp"
#include "pecker/pdg.hpp"
#include "pecker/signal_class.hpp"
#include "pecker/stmt_table.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <utility>

namespace pecker {

// Everything the analysis passes need for one design, built in one shot.
struct Design {
    DesignAst ast;
    StatementTable table;
    SignalClassMap classes;
    Pdg pdg;
};

inline Design design_from_source(const std::string& source, const std::string& file) {
    Design d;
    d.ast = parse_design(source, file);
    d.table = enumerate_statements(d.ast);
    d.classes = classify_signals(d.ast, d.table);
    d.pdg = build_pdg(d.ast, d.table, d.classes);
    return d;
}

inline Design load_design(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open design file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return design_from_source(buf.str(), path);
}

} // namespace pecker
