#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"
#include "pecker/eval.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace pecker {

enum class StmtKind {
    ContAssign,
    BlockingAssign,
    NonblockingAssign,
    GuardedIf,   // if merged with its single then-arm assignment
    If,          // if whose then-arm is a block
    CaseHead,
};

inline const char* stmt_kind_name(StmtKind k) {
    switch (k) {
    case StmtKind::ContAssign: return "assign";
    case StmtKind::BlockingAssign: return "blocking";
    case StmtKind::NonblockingAssign: return "nonblocking";
    case StmtKind::GuardedIf: return "guarded-if";
    case StmtKind::If: return "if";
    case StmtKind::CaseHead: return "case";
    }
    return "?";
}

struct StatementInfo {
    int stmt_id = -1;
    StmtKind kind = StmtKind::ContAssign;
    SourcePos span;
    int block = -1;                    // index into always_blocks, -1 for continuous assigns
    bool in_edge_block = false;

    std::string written;               // assignment target; empty for pure branch heads
    std::vector<std::string> reads;    // RHS identifiers; branch heads: their condition/subject
    std::vector<std::string> cond_deps;    // enclosing branch condition identifiers
    std::vector<std::string> subtree_writes; // branch heads: every signal assigned beneath them
};

struct StatementTable {
    std::vector<StatementInfo> entries;

    int size() const { return static_cast<int>(entries.size()); }
    const StatementInfo& at(int stmt_id) const { return entries.at(static_cast<std::size_t>(stmt_id)); }

    // First statement whose span covers the given line, -1 if none. Single-line
    // seeded bugs are located this way.
    int find_by_line(int line) const {
        for (const auto& e : entries)
            if (e.span.line == line) return e.stmt_id;
        return -1;
    }
};

namespace detail {

class StatementEnumerator {
public:
    explicit StatementEnumerator(DesignAst& design) : design_(design) {}

    StatementTable run() {
        // Ids follow source order across module items, so interleaved assigns
        // and always blocks number the way the file reads.
        struct ItemRef {
            bool is_assign;
            std::size_t index;
            std::size_t offset;
        };
        std::vector<ItemRef> items;
        for (std::size_t i = 0; i < design_.assigns.size(); ++i)
            items.push_back({true, i, design_.assigns[i].pos.offset});
        for (std::size_t i = 0; i < design_.always_blocks.size(); ++i)
            items.push_back({false, i, design_.always_blocks[i].pos.offset});
        std::sort(items.begin(), items.end(),
                  [](const ItemRef& a, const ItemRef& b) { return a.offset < b.offset; });

        for (const auto& item : items) {
            if (item.is_assign) {
                auto& ca = design_.assigns[item.index];
                ca.stmt_id = next_id();
                StatementInfo info;
                info.stmt_id = ca.stmt_id;
                info.kind = StmtKind::ContAssign;
                info.span = ca.pos;
                info.written = ca.lhs;
                collect_idents(*ca.rhs, info.reads);
                table_.entries.push_back(std::move(info));
            } else {
                auto& blk = design_.always_blocks[item.index];
                std::vector<std::string> no_conds;
                for (auto& s : blk.body)
                    enumerate_stmt(*s, static_cast<int>(item.index), blk.edge_sensitive, no_conds);
            }
        }
        return std::move(table_);
    }

private:
    int next_id() { return id_++; }

    static bool mergeable_then(const Stmt& s) {
        return s.kind == Stmt::Kind::If && s.then_stmts.size() == 1 &&
               s.then_stmts[0]->kind == Stmt::Kind::Assign;
    }

    void enumerate_stmt(Stmt& s, int block, bool edge, const std::vector<std::string>& conds) {
        switch (s.kind) {
        case Stmt::Kind::Assign: {
            s.stmt_id = next_id();
            StatementInfo info;
            info.stmt_id = s.stmt_id;
            info.kind = s.nonblocking ? StmtKind::NonblockingAssign : StmtKind::BlockingAssign;
            info.span = s.pos;
            info.block = block;
            info.in_edge_block = edge;
            info.written = s.lhs;
            collect_idents(*s.rhs, info.reads);
            info.cond_deps = conds;
            table_.entries.push_back(std::move(info));
            break;
        }
        case Stmt::Kind::If: {
            s.stmt_id = next_id();
            StatementInfo info;
            info.span = s.pos;
            info.stmt_id = s.stmt_id;
            info.block = block;
            info.in_edge_block = edge;
            collect_idents(*s.cond, info.reads);
            info.cond_deps = conds;

            std::vector<std::string> inner = conds;
            collect_idents(*s.cond, inner);

            if (mergeable_then(s)) {
                // The then-arm assignment is absorbed: one statement that
                // executes only when the condition holds.
                s.merged = true;
                Stmt& a = *s.then_stmts[0];
                a.stmt_id = s.stmt_id;
                info.kind = StmtKind::GuardedIf;
                info.written = a.lhs;
                collect_idents(*a.rhs, info.reads);
                table_.entries.push_back(std::move(info));
                // Else-arm statements enumerate as siblings, guarded by the
                // same condition signals.
                for (auto& c : s.else_stmts)
                    enumerate_stmt(*c, block, edge, inner);
            } else {
                info.kind = StmtKind::If;
                table_.entries.push_back(std::move(info));
                std::size_t self = table_.entries.size() - 1;
                for (auto& c : s.then_stmts)
                    enumerate_stmt(*c, block, edge, inner);
                for (auto& c : s.else_stmts)
                    enumerate_stmt(*c, block, edge, inner);
                collect_subtree_writes(s, table_.entries[self].subtree_writes);
            }
            break;
        }
        case Stmt::Kind::Case: {
            s.stmt_id = next_id();
            StatementInfo info;
            info.stmt_id = s.stmt_id;
            info.kind = StmtKind::CaseHead;
            info.span = s.pos;
            info.block = block;
            info.in_edge_block = edge;
            collect_idents(*s.subject, info.reads);
            info.cond_deps = conds;
            table_.entries.push_back(std::move(info));
            std::size_t self = table_.entries.size() - 1;

            std::vector<std::string> inner = conds;
            collect_idents(*s.subject, inner);
            for (auto& arm : s.arms)
                for (auto& c : arm.body)
                    enumerate_stmt(*c, block, edge, inner);
            collect_subtree_writes(s, table_.entries[self].subtree_writes);
            break;
        }
        }
    }

    // Signals assigned anywhere beneath a branch construct, deduplicated.
    static void collect_subtree_writes(const Stmt& s, std::vector<std::string>& out) {
        auto add = [&out](const std::string& n) {
            for (const auto& e : out)
                if (e == n) return;
            out.push_back(n);
        };
        switch (s.kind) {
        case Stmt::Kind::Assign:
            add(s.lhs);
            break;
        case Stmt::Kind::If:
            for (const auto& c : s.then_stmts) collect_subtree_writes(*c, out);
            for (const auto& c : s.else_stmts) collect_subtree_writes(*c, out);
            break;
        case Stmt::Kind::Case:
            for (const auto& arm : s.arms)
                for (const auto& c : arm.body) collect_subtree_writes(*c, out);
            break;
        }
    }

    DesignAst& design_;
    StatementTable table_;
    int id_ = 0;
};

} // namespace detail

/// Assign stmt_ids in source order (continuous assigns first, then always-block
/// bodies) and build the side table the PDG, simulator, and localizer share.
/// An `if` whose then-arm is a single bare assignment merges with it; its
/// else-arm statements enumerate as siblings guarded by the same condition.
inline StatementTable enumerate_statements(DesignAst& design) {
    return detail::StatementEnumerator(design).run();
}

} // namespace pecker
