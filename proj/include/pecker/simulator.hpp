#pragma once

#include "pecker/ast.hpp"
#include "pecker/diag.hpp"
#include "pecker/eval.hpp"
#include "pecker/signal_class.hpp"
#include "pecker/stimulus.hpp"
#include "pecker/stmt_table.hpp"
#include "pecker/trace.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pecker {

struct CycleRecord {
    int cycle = 0;
    std::vector<int> executed;                    // ascending stmt ids
    std::map<std::string, std::uint64_t> outputs; // sampled pre-edge
    bool pass = true;
};

// Cycle protocol: apply inputs, settle combinational logic to a fixed point,
// sample outputs against expectations, then fire the clock edge and commit
// nonblocking writes. All signals start at 0; reset is the design's job.
class Simulator {
public:
    Simulator(const DesignAst& design, const StatementTable& table, const SignalClassMap& classes)
        : design_(design), table_(table) {
        for (const auto& p : design_.ports) values_[p.name] = 0;
        for (const auto& v : design_.vars) values_[v.name] = 0;
        collect_units(classes);
        order_units();
        comb_stmt_count_ = 0;
        for (const auto& e : table_.entries)
            if (!e.in_edge_block) ++comb_stmt_count_;
    }

    void reset() {
        for (auto& [_, v] : values_) v = 0;
        cycle_ = 0;
    }

    int cycle() const { return cycle_; }
    const ValueStore& values() const { return values_; }

    CycleRecord step_cycle(const StimulusCycle& cyc) {
        CycleRecord rec;
        rec.cycle = cycle_;
        std::set<int> executed;

        for (const auto& [name, value] : cyc.inputs)
            values_[name] = mask_to_width(value, design_.width_of(name));

        settle(executed);

        rec.pass = true;
        for (const auto& p : design_.ports) {
            if (p.dir != PortDir::Output) continue;
            std::uint64_t got = values_[p.name];
            rec.outputs[p.name] = got;
            auto it = cyc.expected_outputs.find(p.name);
            if (it != cyc.expected_outputs.end() && mask_to_width(it->second, p.width) != got)
                rec.pass = false;
        }

        // Clock edge: evaluate every edge-sensitive block against pre-edge
        // values, then make the buffered nonblocking writes visible.
        nb_queue_.clear();
        for (const auto& blk : design_.always_blocks) {
            if (!blk.edge_sensitive) continue;
            for (const auto& s : blk.body) exec_stmt(*s, true, executed);
        }
        for (const auto& [name, value] : nb_queue_) values_[name] = value;

        rec.executed.assign(executed.begin(), executed.end());
        ++cycle_;
        return rec;
    }

    std::pair<ExecutionTrace, CycleResults> run(const Stimulus& stim) {
        reset();
        ExecutionTrace trace;
        trace.stmt_count = table_.size();
        CycleResults results;
        for (const auto& cyc : stim.cycles) {
            int at = cycle_;
            CycleRecord rec;
            try {
                rec = step_cycle(cyc);
            } catch (const Error& e) {
                throw Error(e.kind(), "cycle " + std::to_string(at) + ": " + e.what());
            }
            trace.cycles.emplace_back(static_cast<std::size_t>(trace.stmt_count), false);
            for (int s : rec.executed)
                trace.cycles.back()[static_cast<std::size_t>(s)] = true;
            results.push_back(rec.pass);
        }
        return {std::move(trace), std::move(results)};
    }

private:
    // A combinational unit is one continuous assign or one @(*) block.
    struct CombUnit {
        bool is_assign = false;
        std::size_t index = 0; // into assigns or always_blocks
        std::size_t offset = 0;
        std::vector<std::string> reads;
        std::vector<std::string> writes;
    };

    const DesignAst& design_;
    const StatementTable& table_;
    ValueStore values_;
    std::vector<CombUnit> units_; // topologically ordered at construction
    std::vector<std::pair<std::string, std::uint64_t>> nb_queue_;
    int comb_stmt_count_ = 0;
    int cycle_ = 0;

    void collect_units(const SignalClassMap&) {
        for (std::size_t i = 0; i < design_.assigns.size(); ++i) {
            CombUnit u;
            u.is_assign = true;
            u.index = i;
            u.offset = design_.assigns[i].pos.offset;
            collect_idents(*design_.assigns[i].rhs, u.reads);
            u.writes.push_back(design_.assigns[i].lhs);
            units_.push_back(std::move(u));
        }
        for (std::size_t i = 0; i < design_.always_blocks.size(); ++i) {
            const auto& blk = design_.always_blocks[i];
            if (blk.edge_sensitive) continue;
            CombUnit u;
            u.index = i;
            u.offset = blk.pos.offset;
            for (const auto& s : blk.body) scan_stmt(*s, u);
            units_.push_back(std::move(u));
        }
        std::sort(units_.begin(), units_.end(),
                  [](const CombUnit& a, const CombUnit& b) { return a.offset < b.offset; });
    }

    static void scan_stmt(const Stmt& s, CombUnit& u) {
        switch (s.kind) {
        case Stmt::Kind::Assign:
            collect_idents(*s.rhs, u.reads);
            u.writes.push_back(s.lhs);
            break;
        case Stmt::Kind::If:
            collect_idents(*s.cond, u.reads);
            for (const auto& c : s.then_stmts) scan_stmt(*c, u);
            for (const auto& c : s.else_stmts) scan_stmt(*c, u);
            break;
        case Stmt::Kind::Case:
            collect_idents(*s.subject, u.reads);
            for (const auto& arm : s.arms) {
                for (const auto& l : arm.labels) collect_idents(*l, u.reads);
                for (const auto& c : arm.body) scan_stmt(*c, u);
            }
            break;
        }
    }

    // Order units so producers run before consumers. A dependency cycle across
    // distinct units is a real combinational loop; a unit feeding itself is
    // ordinary blocking-sequence reuse and is not.
    void order_units() {
        std::size_t n = units_.size();
        std::map<std::string, std::vector<std::size_t>> readers;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& r : units_[i].reads) readers[r].push_back(i);

        std::vector<std::set<std::size_t>> succs(n);
        std::vector<int> indeg(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& w : units_[i].writes) {
                auto it = readers.find(w);
                if (it == readers.end()) continue;
                for (std::size_t j : it->second) {
                    if (j == i) continue;
                    if (succs[i].insert(j).second) ++indeg[j];
                }
            }
        }

        std::vector<CombUnit> ordered;
        std::vector<bool> placed(n, false);
        for (std::size_t round = 0; round < n; ++round) {
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (!placed[i] && indeg[i] == 0) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                for (std::size_t i = 0; i < n; ++i) {
                    if (placed[i]) continue;
                    SourcePos pos = units_[i].is_assign ? design_.assigns[units_[i].index].pos
                                                        : design_.always_blocks[units_[i].index].pos;
                    throw Error(ErrorKind::CombinationalLoop, pos,
                                "combinational dependency cycle not broken by a register");
                }
            }
            placed[pick] = true;
            for (std::size_t j : succs[pick]) --indeg[j];
            ordered.push_back(std::move(units_[pick]));
        }
        units_ = std::move(ordered);
    }

    void settle(std::set<int>& executed) {
        int bound = comb_stmt_count_ + 1;
        for (int pass = 0; pass <= bound; ++pass) {
            std::set<int> pass_executed;
            bool changed = false;
            for (const auto& u : units_) {
                if (u.is_assign) {
                    const auto& a = design_.assigns[u.index];
                    std::uint64_t v = mask_to_width(eval_expr(*a.rhs, values_), design_.width_of(a.lhs));
                    if (values_[a.lhs] != v) {
                        values_[a.lhs] = v;
                        changed = true;
                    }
                    pass_executed.insert(a.stmt_id);
                } else {
                    const auto& blk = design_.always_blocks[u.index];
                    for (const auto& s : blk.body)
                        changed |= exec_stmt_tracking(*s, pass_executed);
                }
            }
            if (!changed) {
                // The quiet pass is the fixed point; its executions are the record.
                executed.insert(pass_executed.begin(), pass_executed.end());
                return;
            }
        }
        throw Error(ErrorKind::NonConvergence, "combinational settle exceeded " +
                                                   std::to_string(bound) + " iterations");
    }

    // Combinational execution: writes are immediate, change detection feeds the
    // settle loop.
    bool exec_stmt_tracking(const Stmt& s, std::set<int>& executed) {
        bool changed = false;
        switch (s.kind) {
        case Stmt::Kind::Assign: {
            std::uint64_t v = mask_to_width(eval_expr(*s.rhs, values_), design_.width_of(s.lhs));
            if (values_[s.lhs] != v) {
                values_[s.lhs] = v;
                changed = true;
            }
            executed.insert(s.stmt_id);
            break;
        }
        case Stmt::Kind::If: {
            bool taken = eval_expr(*s.cond, values_) != 0;
            if (s.merged) {
                if (taken) {
                    const Stmt& a = *s.then_stmts.front();
                    std::uint64_t v = mask_to_width(eval_expr(*a.rhs, values_), design_.width_of(a.lhs));
                    if (values_[a.lhs] != v) {
                        values_[a.lhs] = v;
                        changed = true;
                    }
                    executed.insert(s.stmt_id);
                } else {
                    for (const auto& c : s.else_stmts) changed |= exec_stmt_tracking(*c, executed);
                }
            } else {
                executed.insert(s.stmt_id);
                const auto& arm = taken ? s.then_stmts : s.else_stmts;
                for (const auto& c : arm) changed |= exec_stmt_tracking(*c, executed);
            }
            break;
        }
        case Stmt::Kind::Case: {
            executed.insert(s.stmt_id);
            const Stmt::CaseArm* arm = match_arm(s);
            if (arm)
                for (const auto& c : arm->body) changed |= exec_stmt_tracking(*c, executed);
            break;
        }
        }
        return changed;
    }

    // Edge execution: blocking writes land immediately, nonblocking writes are
    // buffered for the post-edge commit.
    void exec_stmt(const Stmt& s, bool edge, std::set<int>& executed) {
        switch (s.kind) {
        case Stmt::Kind::Assign:
            do_assign(s, edge, executed);
            break;
        case Stmt::Kind::If: {
            bool taken = eval_expr(*s.cond, values_) != 0;
            if (s.merged) {
                if (taken) {
                    do_assign(*s.then_stmts.front(), edge, executed);
                } else {
                    for (const auto& c : s.else_stmts) exec_stmt(*c, edge, executed);
                }
            } else {
                executed.insert(s.stmt_id);
                const auto& arm = taken ? s.then_stmts : s.else_stmts;
                for (const auto& c : arm) exec_stmt(*c, edge, executed);
            }
            break;
        }
        case Stmt::Kind::Case: {
            executed.insert(s.stmt_id);
            const Stmt::CaseArm* arm = match_arm(s);
            if (arm)
                for (const auto& c : arm->body) exec_stmt(*c, edge, executed);
            break;
        }
        }
    }

    void do_assign(const Stmt& s, bool edge, std::set<int>& executed) {
        std::uint64_t v = mask_to_width(eval_expr(*s.rhs, values_), design_.width_of(s.lhs));
        if (edge && s.nonblocking)
            nb_queue_.emplace_back(s.lhs, v);
        else
            values_[s.lhs] = v;
        if (s.stmt_id >= 0) executed.insert(s.stmt_id);
    }

    const Stmt::CaseArm* match_arm(const Stmt& s) {
        std::uint64_t subject = eval_expr(*s.subject, values_);
        const Stmt::CaseArm* dflt = nullptr;
        for (const auto& arm : s.arms) {
            if (arm.labels.empty()) {
                if (!dflt) dflt = &arm;
                continue;
            }
            for (const auto& l : arm.labels)
                if (eval_expr(*l, values_) == subject) return &arm;
        }
        return dflt;
    }
};

/// Convenience wrapper matching the data-collection workflow: fresh state, one
/// full stimulus, trace plus verdicts out.
inline std::pair<ExecutionTrace, CycleResults> simulate(const DesignAst& design,
                                                        const StatementTable& table,
                                                        const SignalClassMap& classes,
                                                        const Stimulus& stim) {
    validate_stimulus(stim, design);
    Simulator sim(design, table, classes);
    return sim.run(stim);
}

} // namespace pecker
