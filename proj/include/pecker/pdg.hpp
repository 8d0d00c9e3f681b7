#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"
#include "pecker/signal_class.hpp"
#include "pecker/stmt_table.hpp"

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace pecker {

enum class EdgeKind { Control, Data };

// Node ids: statements occupy [0, stmt_count); signal nodes follow in
// name-sorted order. Signals committed at the clock edge are delay-1 nodes,
// everything else has delay 0.
struct Pdg {
    struct Node {
        bool is_stmt = false;
        int stmt_id = -1;
        std::string signal;
        SignalClass sig_class = SignalClass::Combinational;
        int delay = 0;
    };
    struct Edge {
        int from = -1;
        int to = -1;
        EdgeKind kind = EdgeKind::Data;
    };

    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<int> outputs;                 // node ids of Output signals
    std::map<std::string, int> signal_nodes;  // name -> node id
    int stmt_count = 0;

    int node_of_stmt(int stmt_id) const { return stmt_id; }
    int node_of_signal(const std::string& name) const {
        auto it = signal_nodes.find(name);
        return it == signal_nodes.end() ? -1 : it->second;
    }

    // Data-edge predecessors, the only edges backward propagation walks.
    std::vector<std::vector<int>> data_preds() const {
        std::vector<std::vector<int>> preds(nodes.size());
        for (const auto& e : edges)
            if (e.kind == EdgeKind::Data) preds[static_cast<std::size_t>(e.to)].push_back(e.from);
        return preds;
    }

    std::vector<std::vector<int>> data_succs() const {
        std::vector<std::vector<int>> succs(nodes.size());
        for (const auto& e : edges)
            if (e.kind == EdgeKind::Data) succs[static_cast<std::size_t>(e.from)].push_back(e.to);
        return succs;
    }

    bool has_edge(int from, int to, EdgeKind kind) const {
        for (const auto& e : edges)
            if (e.from == from && e.to == to && e.kind == kind) return true;
        return false;
    }
};

namespace detail {

struct PdgBuilder {
    const DesignAst& design;
    const StatementTable& table;
    const SignalClassMap& classes;
    Pdg pdg;
    std::set<std::pair<int, int>> data_seen, control_seen;

    void add_data(int from, int to) {
        if (from < 0 || to < 0 || from == to) return;
        if (data_seen.emplace(from, to).second)
            pdg.edges.push_back({from, to, EdgeKind::Data});
    }
    void add_control(int from, int to) {
        if (from < 0 || to < 0 || from == to) return;
        if (control_seen.emplace(from, to).second)
            pdg.edges.push_back({from, to, EdgeKind::Control});
    }

    Pdg run() {
        pdg.stmt_count = table.size();
        for (const auto& e : table.entries) {
            Pdg::Node n;
            n.is_stmt = true;
            n.stmt_id = e.stmt_id;
            pdg.nodes.push_back(std::move(n));
        }
        // A signal committed at the clock edge costs one cycle to cross, output
        // port or not; only the Register class records that for non-ports.
        std::set<std::string> edge_written;
        for (const auto& e : table.entries)
            if (e.in_edge_block && !e.written.empty()) edge_written.insert(e.written);
        for (const auto& [name, cls] : classes) {
            Pdg::Node n;
            n.signal = name;
            n.sig_class = cls;
            n.delay = cls == SignalClass::Register || edge_written.count(name) ? 1 : 0;
            pdg.signal_nodes[name] = static_cast<int>(pdg.nodes.size());
            if (cls == SignalClass::Output) pdg.outputs.push_back(static_cast<int>(pdg.nodes.size()));
            pdg.nodes.push_back(std::move(n));
        }

        for (const auto& e : table.entries) {
            int sn = pdg.node_of_stmt(e.stmt_id);
            for (const auto& r : e.reads) add_data(pdg.node_of_signal(r), sn);
            for (const auto& c : e.cond_deps) add_data(pdg.node_of_signal(c), sn);
            if (!e.written.empty()) add_data(sn, pdg.node_of_signal(e.written));
            // A branch construct routes a value into everything its arms
            // assign; that keeps a wrong dispatch reachable by backward
            // propagation from those signals.
            for (const auto& w : e.subtree_writes) add_data(sn, pdg.node_of_signal(w));
        }

        for (const auto& blk : design.always_blocks)
            for (const auto& s : blk.body) add_control_edges(*s);
        return std::move(pdg);
    }

    void add_control_edges(const Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::Assign:
            break;
        case Stmt::Kind::If:
            if (s.merged) {
                // Else-arm statements are enumeration siblings, not children.
                for (const auto& c : s.else_stmts) add_control_edges(*c);
            } else {
                for (const auto& c : s.then_stmts) {
                    add_control(s.stmt_id, top_stmt_id(*c));
                    add_control_edges(*c);
                }
                for (const auto& c : s.else_stmts) {
                    add_control(s.stmt_id, top_stmt_id(*c));
                    add_control_edges(*c);
                }
            }
            break;
        case Stmt::Kind::Case:
            for (const auto& arm : s.arms) {
                for (const auto& c : arm.body) {
                    add_control(s.stmt_id, top_stmt_id(*c));
                    add_control_edges(*c);
                }
            }
            break;
        }
    }

    static int top_stmt_id(const Stmt& s) { return s.stmt_id; }
};

} // namespace detail

/// Build the program dependency graph: Data edges read-signal -> statement and
/// statement -> written-signal, condition signals into branch statements and
/// into every assignment they guard, Control edges parent construct -> child.
inline Pdg build_pdg(const DesignAst& design, const StatementTable& table,
                     const SignalClassMap& classes) {
    return detail::PdgBuilder{design, table, classes}.run();
}

/// Deterministic Graphviz export. Statements are boxes labeled by kind and
/// source line; register signal nodes carry their unit delay as a first
/// attribute group. Data edges are solid, Control edges dashed.
inline void export_dot(const Pdg& pdg, const StatementTable& table, std::ostream& os) {
    os << "digraph pdg {\n";
    os << "  rankdir=LR;\n";
    for (const auto& e : table.entries) {
        os << "  s" << e.stmt_id << " [shape=box label=\"s" << e.stmt_id << ": "
           << stmt_kind_name(e.kind);
        if (!e.written.empty()) os << " " << e.written;
        os << " (line " << e.span.line << ")\"];\n";
    }
    for (const auto& [name, id] : pdg.signal_nodes) {
        const Pdg::Node& n = pdg.nodes[static_cast<std::size_t>(id)];
        if (n.delay > 0)
            os << "  " << name << " [delay=" << n.delay << "]";
        else
            os << "  " << name;
        os << " [shape=ellipse label=\"" << name << " : " << signal_class_name(n.sig_class)
           << "\"]";
        if (n.sig_class == SignalClass::Output) os << " [peripheries=2]";
        os << ";\n";
    }
    auto node_ref = [&pdg](int id) {
        const Pdg::Node& n = pdg.nodes[static_cast<std::size_t>(id)];
        return n.is_stmt ? "s" + std::to_string(n.stmt_id) : n.signal;
    };
    // Edges print data-first in insertion order, which is itself deterministic.
    for (const auto& e : pdg.edges) {
        if (e.kind != EdgeKind::Data) continue;
        os << "  " << node_ref(e.from) << " -> " << node_ref(e.to) << ";\n";
    }
    for (const auto& e : pdg.edges) {
        if (e.kind != EdgeKind::Control) continue;
        os << "  " << node_ref(e.from) << " -> " << node_ref(e.to) << " [style=dashed];\n";
    }
    os << "}\n";
}

} // namespace pecker
