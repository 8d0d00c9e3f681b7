#include "support.hpp"

#include "pecker/design.hpp"
#include "pecker/empc.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace pecker;

namespace {

constexpr int kInf = EmpcMap::kInf;

int at_stmt(const Design& d, const EmpcMap& m, int stmt_id) {
    return m.at(d.pdg.node_of_stmt(stmt_id));
}

int at_signal(const Design& d, const EmpcMap& m, const std::string& name) {
    return m.at(d.pdg.node_of_signal(name));
}

// Minimal hand-built graph: s0 -> a -> s1 -> out, every delay 0. Statement
// nodes first, mirroring the builder's numbering.
Pdg chain_pdg() {
    Pdg pdg;
    pdg.stmt_count = 2;
    for (int s = 0; s < 2; ++s) {
        Pdg::Node n;
        n.is_stmt = true;
        n.stmt_id = s;
        pdg.nodes.push_back(std::move(n));
    }
    Pdg::Node a;
    a.signal = "a";
    a.sig_class = SignalClass::Combinational;
    pdg.nodes.push_back(std::move(a));
    pdg.signal_nodes["a"] = 2;
    Pdg::Node out;
    out.signal = "out";
    out.sig_class = SignalClass::Output;
    pdg.nodes.push_back(std::move(out));
    pdg.signal_nodes["out"] = 3;
    pdg.outputs.push_back(3);
    pdg.edges.push_back({0, 2, EdgeKind::Data});
    pdg.edges.push_back({2, 1, EdgeKind::Data});
    pdg.edges.push_back({1, 3, EdgeKind::Data});
    return pdg;
}

ExecutionTrace chain_trace(int cycle_of_s0, int cycle_of_s1) {
    ExecutionTrace t;
    t.stmt_count = 2;
    t.set_executed(cycle_of_s0, 0);
    t.set_executed(cycle_of_s1, 1);
    while (t.cycle_count() < 3) t.cycles.emplace_back(2, false);
    return t;
}

} // namespace

TEST_CASE("propagation counts for the story fsm bug match the hand derivation") {
    Design d = support::load_fixture("bugs/fsm_story_bug1.v");
    TestRun run = support::run_design(d, support::load_stim("stim/fsm_story.json"));
    auto fail = first_fail_cycle(run.results);
    REQUIRE(fail);
    CHECK(*fail == 2);

    EmpcMap m = compute_empc(d.pdg, run.trace, run.results);
    CHECK(at_stmt(d, m, 0) == 1);       // reset branch, executed cycle 0 only
    CHECK(at_stmt(d, m, 1) == 1);       // state <= next_state
    CHECK(at_stmt(d, m, 2) == 1);       // case head
    CHECK(at_stmt(d, m, 3) == 1);       // taken arm
    CHECK(at_stmt(d, m, 4) == kInf);    // default arm never runs
    CHECK(at_stmt(d, m, 5) == 0);       // continuous assign feeding out
    CHECK(at_signal(d, m, "out") == 0);
    CHECK(at_signal(d, m, "state") == 0);
    CHECK(at_signal(d, m, "next_state") == 1);
    CHECK(at_signal(d, m, "rst") == 1);
    CHECK(at_signal(d, m, "in") == 1);
    CHECK(at_signal(d, m, "clk") == kInf);
}

TEST_CASE("a branch that never executes stays infinite") {
    Design d = support::load_fixture("bugs/fsm_ready_bug1.v");
    TestRun run = support::run_design(d, support::load_stim("stim/fsm_ready.json"));
    auto fail = first_fail_cycle(run.results);
    REQUIRE(fail);
    CHECK(*fail == 2);

    EmpcMap m = compute_empc(d.pdg, run.trace, run.results);
    CHECK(at_stmt(d, m, 0) == kInf);    // rst never true, reset branch never runs
    CHECK(at_stmt(d, m, 1) == 1);
    CHECK(at_stmt(d, m, 2) == 1);
    CHECK(at_stmt(d, m, 3) == 1);
    CHECK(at_stmt(d, m, 4) == 1);
    CHECK(at_stmt(d, m, 5) == 0);
    CHECK(at_signal(d, m, "state") == 0);
    CHECK(at_signal(d, m, "next_state") == 1);
}

TEST_CASE("values flow through statements outside their execution cycle") {
    // s0 runs in cycle 1, s1 in cycle 2: the cycle assignment (1, 2) is weakly
    // increasing, so s0 reaches the output even though the wave that finally
    // relaxes it passes through s1 in a cycle where s1 did not run.
    Pdg pdg = chain_pdg();
    ExecutionTrace trace = chain_trace(1, 2);
    CycleResults results{true, true, false};
    EmpcMap m = compute_empc(pdg, trace, results);
    CHECK(m.at(0) == 0);
    CHECK(m.at(1) == 0);
    CHECK(m.at(2) == 0);
    CHECK(m.at(3) == 0);
}

TEST_CASE("cycle ordering separates the default sweep from the fixpoint") {
    // s0 runs only after s1 does, so no weakly increasing assignment exists
    // and the single descending sweep leaves s0 infinite. Repeated sweeps drop
    // the ordering constraint and let the stale value flow back.
    Pdg pdg = chain_pdg();
    ExecutionTrace trace = chain_trace(2, 1);
    CycleResults results{true, true, false};

    EmpcMap once = compute_empc(pdg, trace, results);
    CHECK(once.at(0) == kInf);
    CHECK(once.at(1) == 0);
    CHECK(once.at(2) == 0);

    EmpcMap fix = compute_empc(pdg, trace, results, true);
    CHECK(fix.at(0) == 0);
    CHECK(fix.at(1) == 0);

    auto ref_ordered = support::empc_reference(pdg, trace, 2, false);
    auto ref_unordered = support::empc_reference(pdg, trace, 2, true);
    CHECK(ref_ordered[0] == kInf);
    CHECK(ref_unordered[0] == 0);
}

TEST_CASE("relaxation agrees with the path-wise reference on random graphs") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 150; ++trial) {
        INFO("trial " << trial);
        support::RandomCase rc = support::random_case(rng);
        EmpcMap got = compute_empc(rc.pdg, rc.trace, rc.results);
        auto want = support::empc_reference(rc.pdg, rc.trace, rc.first_fail);
        REQUIRE(got.value.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            INFO("node " << i);
            REQUIRE(got.value[i] == want[i]);
        }
    }
}

TEST_CASE("fixpoint mode agrees with the unordered reference on random graphs") {
    std::mt19937 rng(911);
    for (int trial = 0; trial < 150; ++trial) {
        INFO("trial " << trial);
        support::RandomCase rc = support::random_case(rng);
        EmpcMap got = compute_empc(rc.pdg, rc.trace, rc.results, true);
        auto want = support::empc_reference(rc.pdg, rc.trace, rc.first_fail, true);
        REQUIRE(got.value.size() == want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            INFO("node " << i);
            REQUIRE(got.value[i] == want[i]);
        }
    }
}

TEST_CASE("fixpoint never worsens a value and is stable under more sweeps") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        INFO("trial " << trial);
        support::RandomCase rc = support::random_case(rng);
        EmpcMap base = compute_empc(rc.pdg, rc.trace, rc.results);
        EmpcMap fix = compute_empc(rc.pdg, rc.trace, rc.results, true);
        for (std::size_t i = 0; i < base.value.size(); ++i)
            CHECK(fix.value[i] <= base.value[i]);

        // Once the fixpoint is reached no cycle's wave can improve anything.
        for (int c = rc.first_fail; c >= 0; --c) {
            std::vector<bool> activated(static_cast<std::size_t>(rc.pdg.stmt_count), false);
            for (int s = 0; s < rc.pdg.stmt_count; ++s)
                if (rc.trace.executed(c, s)) activated[static_cast<std::size_t>(s)] = true;
            CHECK_FALSE(dynamic_prop(rc.pdg, activated, fix));
        }
    }
}

TEST_CASE("trace shape and all-pass runs are rejected") {
    Design d = support::load_fixture("fsm_story.v");
    TestRun run = support::run_design(d, support::load_stim("stim/fsm_story.json"));

    // The golden design passes its own stimulus, so there is nothing to localize.
    try {
        compute_empc(d.pdg, run.trace, run.results);
        FAIL("expected a NoFailure error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoFailure);
    }

    ExecutionTrace off = run.trace;
    off.stmt_count = run.trace.stmt_count + 1;
    CycleResults failing{false};
    try {
        compute_empc(d.pdg, off, failing);
        FAIL("expected a BoundsError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Bounds);
    }
}
