#pragma once

#include "pecker/diag.hpp"
#include "pecker/pdg.hpp"
#include "pecker/trace.hpp"

#include <deque>
#include <limits>
#include <string>
#include <vector>

namespace pecker {

// Node -> minimal propagation cycles to any output; kInf means no activated
// path to an output was found. Values only decrease during computation.
struct EmpcMap {
    static constexpr int kInf = std::numeric_limits<int>::max();

    std::vector<int> value;

    explicit EmpcMap(std::size_t nodes = 0) : value(nodes, kInf) {}

    int at(int node) const { return value[static_cast<std::size_t>(node)]; }
    bool is_inf(int node) const { return at(node) == kInf; }
};

inline std::string empc_text(int v) {
    return v == EmpcMap::kInf ? "inf" : std::to_string(v);
}

/// One relaxation wave for one cycle's activation set. Seeded at the outputs,
/// walking Data edges backward. Every structurally reachable node is visited so
/// values from later cycles keep flowing upstream; only eligible nodes take new
/// values (statements when activated this cycle, signal nodes always). A node
/// re-enters the queue whenever its value strictly improves.
inline bool dynamic_prop(const Pdg& pdg, const std::vector<bool>& activated, EmpcMap& map) {
    const std::size_t n = pdg.nodes.size();
    const auto preds = pdg.data_preds();
    std::deque<int> queue;
    std::vector<char> visited(n, 0), queued(n, 0);
    for (int out : pdg.outputs) {
        queue.push_back(out);
        visited[static_cast<std::size_t>(out)] = 1;
        queued[static_cast<std::size_t>(out)] = 1;
    }
    bool changed = false;
    while (!queue.empty()) {
        int head = queue.front();
        queue.pop_front();
        queued[static_cast<std::size_t>(head)] = 0;
        int head_value = map.at(head);
        int head_delay = pdg.nodes[static_cast<std::size_t>(head)].delay;
        for (int pred : preds[static_cast<std::size_t>(head)]) {
            const Pdg::Node& pn = pdg.nodes[static_cast<std::size_t>(pred)];
            bool eligible =
                !pn.is_stmt || (pn.stmt_id < static_cast<int>(activated.size()) &&
                                activated[static_cast<std::size_t>(pn.stmt_id)]);
            bool improved = false;
            if (eligible && head_value != EmpcMap::kInf) {
                int candidate = head_delay + head_value;
                if (candidate < map.at(pred)) {
                    map.value[static_cast<std::size_t>(pred)] = candidate;
                    changed = true;
                    improved = true;
                }
            }
            if (!visited[static_cast<std::size_t>(pred)] || improved) {
                visited[static_cast<std::size_t>(pred)] = 1;
                if (!queued[static_cast<std::size_t>(pred)]) {
                    queue.push_back(pred);
                    queued[static_cast<std::size_t>(pred)] = 1;
                }
            }
        }
    }
    return changed;
}

/// Outputs start at 0, everything else at infinity, then one backward sweep
/// from the first fail cycle down to 0 shares a single map across cycles.
/// `fixpoint` repeats whole sweep sequences until the map is stable; values
/// form a finite decreasing lattice, so this terminates.
inline EmpcMap compute_empc(const Pdg& pdg, const ExecutionTrace& trace,
                            const CycleResults& results, bool fixpoint = false) {
    if (trace.stmt_count != pdg.stmt_count)
        throw Error(ErrorKind::Bounds, "trace stmt_count " + std::to_string(trace.stmt_count) +
                                           " does not match the design's " +
                                           std::to_string(pdg.stmt_count) + " statements");
    auto fail = first_fail_cycle(results);
    if (!fail) throw Error(ErrorKind::NoFailure, "no failing cycle; nothing to localize");

    EmpcMap map(pdg.nodes.size());
    for (int out : pdg.outputs) map.value[static_cast<std::size_t>(out)] = 0;

    auto sweep_sequence = [&]() {
        bool any = false;
        for (int c = *fail; c >= 0; --c) {
            std::vector<bool> activated(static_cast<std::size_t>(pdg.stmt_count), false);
            for (int s = 0; s < pdg.stmt_count; ++s)
                if (trace.executed(c, s)) activated[static_cast<std::size_t>(s)] = true;
            if (dynamic_prop(pdg, activated, map)) any = true;
        }
        return any;
    };

    sweep_sequence();
    if (fixpoint)
        while (sweep_sequence()) {}
    return map;
}

} // namespace pecker
