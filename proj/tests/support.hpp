#pragma once

// Shared test scaffolding: fixture loading, an independently stated reference
// for the propagation-count relaxation, and random graph/trace generators.

#include "pecker/pecker.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace support {

inline std::string design_path(const std::string& rel) {
    return std::string(PECKER_DESIGN_DIR) + "/" + rel;
}

inline pecker::Design load_fixture(const std::string& rel) {
    return pecker::load_design(design_path(rel));
}

inline pecker::Stimulus load_stim(const std::string& rel) {
    return pecker::load_stimulus(design_path(rel));
}

inline pecker::TestRun run_design(const pecker::Design& d, const pecker::Stimulus& s) {
    auto [trace, results] = pecker::simulate(d.ast, d.table, d.classes, s);
    pecker::TestRun run;
    run.trace = std::move(trace);
    run.results = std::move(results);
    return run;
}

// Reference semantics for the relaxation, stated path-wise instead of
// sweep-wise: EMPC(n) is the minimum over data paths n -> ... -> output whose
// statement nodes (n included) admit a weakly increasing assignment of
// executed cycles within [0, last], of the sum of node delays along the path
// excluding n itself. Computed by value iteration over (node, floor) states,
// floor being the lowest cycle the next statement on the path may take.
// `unordered` drops the ordering constraint, which is what repeated sweep
// sequences converge to.
inline std::vector<int> empc_reference(const pecker::Pdg& pdg, const pecker::ExecutionTrace& trace,
                                       int last, bool unordered = false) {
    const int inf = pecker::EmpcMap::kInf;
    const int n = static_cast<int>(pdg.nodes.size());
    const auto succs = pdg.data_succs();
    const int floors = unordered ? 1 : last + 2;

    auto executed_in_window = [&](int stmt) {
        for (int c = 0; c <= last; ++c)
            if (trace.executed(c, stmt)) return true;
        return false;
    };

    std::vector<char> is_out(n, 0);
    std::vector<std::vector<int>> v(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(floors), inf));
    for (int o : pdg.outputs) {
        is_out[static_cast<std::size_t>(o)] = 1;
        for (int f = 0; f < floors; ++f) v[static_cast<std::size_t>(o)][static_cast<std::size_t>(f)] = 0;
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a) {
            if (is_out[static_cast<std::size_t>(a)]) continue;
            for (int f = 0; f < floors; ++f) {
                int best = v[static_cast<std::size_t>(a)][static_cast<std::size_t>(f)];
                for (int m : succs[static_cast<std::size_t>(a)]) {
                    const auto& mn = pdg.nodes[static_cast<std::size_t>(m)];
                    if (!mn.is_stmt) {
                        int tail = v[static_cast<std::size_t>(m)][static_cast<std::size_t>(f)];
                        if (tail != inf) best = std::min(best, mn.delay + tail);
                    } else if (unordered) {
                        int tail = v[static_cast<std::size_t>(m)][0];
                        if (tail != inf && executed_in_window(mn.stmt_id))
                            best = std::min(best, mn.delay + tail);
                    } else {
                        for (int c = f; c <= last; ++c) {
                            if (!trace.executed(c, mn.stmt_id)) continue;
                            int tail = v[static_cast<std::size_t>(m)][static_cast<std::size_t>(c)];
                            if (tail != inf) best = std::min(best, mn.delay + tail);
                        }
                    }
                }
                if (best < v[static_cast<std::size_t>(a)][static_cast<std::size_t>(f)]) {
                    v[static_cast<std::size_t>(a)][static_cast<std::size_t>(f)] = best;
                    changed = true;
                }
            }
        }
    }

    std::vector<int> out(static_cast<std::size_t>(n), inf);
    for (int a = 0; a < n; ++a) {
        const auto& an = pdg.nodes[static_cast<std::size_t>(a)];
        if (is_out[static_cast<std::size_t>(a)]) {
            out[static_cast<std::size_t>(a)] = 0;
        } else if (!an.is_stmt) {
            out[static_cast<std::size_t>(a)] = v[static_cast<std::size_t>(a)][0];
        } else if (unordered) {
            if (executed_in_window(an.stmt_id)) out[static_cast<std::size_t>(a)] = v[static_cast<std::size_t>(a)][0];
        } else {
            int best = inf;
            for (int c = 0; c <= last; ++c)
                if (trace.executed(c, an.stmt_id))
                    best = std::min(best, v[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)]);
            out[static_cast<std::size_t>(a)] = best;
        }
    }
    return out;
}

struct RandomCase {
    pecker::Pdg pdg;
    pecker::ExecutionTrace trace;
    pecker::CycleResults results;
    int first_fail = 0;
};

// Random sparse graph shaped like a real design graph: edges run signal ->
// statement (reads) and statement -> signal (writes); signals may carry a unit
// delay, a few are outputs. Activation is random per (cycle, statement).
inline RandomCase random_case(std::mt19937& rng) {
    RandomCase rc;
    std::uniform_int_distribution<int> stmt_dist(1, 15), sig_dist(2, 15), cyc_dist(1, 10);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    const int n_stmt = stmt_dist(rng);
    const int n_sig = sig_dist(rng);
    const int cycles = cyc_dist(rng);

    rc.pdg.stmt_count = n_stmt;
    for (int s = 0; s < n_stmt; ++s) {
        pecker::Pdg::Node node;
        node.is_stmt = true;
        node.stmt_id = s;
        rc.pdg.nodes.push_back(std::move(node));
    }
    std::uniform_int_distribution<int> out_dist(1, std::max(1, n_sig / 3));
    const int n_out = out_dist(rng);
    for (int i = 0; i < n_sig; ++i) {
        pecker::Pdg::Node node;
        node.signal = "v" + std::to_string(i);
        if (i < n_out) {
            node.sig_class = pecker::SignalClass::Output;
            node.delay = coin(rng) < 0.2 ? 1 : 0; // edge-committed output
        } else if (coin(rng) < 0.35) {
            node.sig_class = pecker::SignalClass::Register;
            node.delay = 1;
        } else {
            node.sig_class = pecker::SignalClass::Combinational;
            node.delay = 0;
        }
        int id = static_cast<int>(rc.pdg.nodes.size());
        rc.pdg.signal_nodes[node.signal] = id;
        if (node.sig_class == pecker::SignalClass::Output) rc.pdg.outputs.push_back(id);
        rc.pdg.nodes.push_back(std::move(node));
    }

    std::uniform_int_distribution<int> sig_pick(0, n_sig - 1);
    std::uniform_int_distribution<int> read_n(1, 3), write_n(0, 2);
    auto sig_node = [&](int i) { return n_stmt + i; };
    std::set<std::pair<int, int>> seen;
    auto add = [&](int from, int to) {
        if (seen.emplace(from, to).second)
            rc.pdg.edges.push_back({from, to, pecker::EdgeKind::Data});
    };
    for (int s = 0; s < n_stmt; ++s) {
        int nr = read_n(rng);
        for (int i = 0; i < nr; ++i) add(sig_node(sig_pick(rng)), s);
        int nw = write_n(rng);
        for (int i = 0; i < nw; ++i) add(s, sig_node(sig_pick(rng)));
    }

    rc.trace.stmt_count = n_stmt;
    rc.first_fail = std::uniform_int_distribution<int>(0, cycles - 1)(rng);
    for (int c = 0; c < cycles; ++c) {
        for (int s = 0; s < n_stmt; ++s)
            if (coin(rng) < 0.5) rc.trace.set_executed(c, s);
        if (c < rc.first_fail)
            rc.results.push_back(true);
        else if (c == rc.first_fail)
            rc.results.push_back(false);
        else
            rc.results.push_back(coin(rng) < 0.5);
    }
    while (rc.trace.cycle_count() < cycles)
        rc.trace.cycles.emplace_back(static_cast<std::size_t>(n_stmt), false);
    return rc;
}

} // namespace support
