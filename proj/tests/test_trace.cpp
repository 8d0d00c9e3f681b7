#include "pecker/trace.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace pecker;

namespace {

ExecutionTrace small_trace() {
    ExecutionTrace t;
    t.stmt_count = 3;
    t.set_executed(0, 0);
    t.set_executed(0, 2);
    t.set_executed(1, 1);
    t.cycles.resize(3, std::vector<bool>(3, false)); // cycle 2 executes nothing
    return t;
}

} // namespace

TEST_CASE("trace writer emits byte-stable json lines") {
    ExecutionTrace t = small_trace();
    CycleResults r = {true, false, true};
    std::ostringstream os;
    save_trace(t, r, os);
    CHECK(os.str() == "{\"stmt_count\":3}\n"
                      "{\"cycle\":0,\"executed\":[0,2],\"pass\":true}\n"
                      "{\"cycle\":1,\"executed\":[1],\"pass\":false}\n"
                      "{\"cycle\":2,\"executed\":[],\"pass\":true}\n");
}

TEST_CASE("trace round-trips through save and load") {
    ExecutionTrace t = small_trace();
    CycleResults r = {true, false, true};
    std::ostringstream os;
    save_trace(t, r, os);
    std::istringstream is(os.str());
    auto [t2, r2] = load_trace(is, "mem");
    CHECK(t2.stmt_count == 3);
    REQUIRE(t2.cycle_count() == 3);
    CHECK(t2.executed(0, 0));
    CHECK(t2.executed(0, 2));
    CHECK_FALSE(t2.executed(0, 1));
    CHECK(t2.executed(1, 1));
    CHECK(t2.executed_list(2).empty());
    CHECK(r2 == r);
}

TEST_CASE("trace loader rejects malformed input precisely") {
    auto load_str = [](const std::string& s) {
        std::istringstream is(s);
        return load_trace(is, "t.jsonl");
    };

    // Missing header.
    try {
        load_str("{\"cycle\":0,\"executed\":[],\"pass\":true}\n");
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Format);
    }

    // Broken json names the line.
    try {
        load_str("{\"stmt_count\":2}\n{not json}\n");
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Format);
        CHECK(std::string(e.what()).find("t.jsonl:2") != std::string::npos);
    }

    // Statement id out of range.
    try {
        load_str("{\"stmt_count\":2}\n{\"cycle\":0,\"executed\":[2],\"pass\":true}\n");
        FAIL("expected a bounds error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Bounds);
    }

    // Cycle indices must be contiguous from zero.
    CHECK_THROWS_AS(load_str("{\"stmt_count\":2}\n{\"cycle\":1,\"executed\":[],\"pass\":true}\n"),
                    Error);
    CHECK_THROWS_AS(load_str("{\"stmt_count\":2}\n"
                             "{\"cycle\":0,\"executed\":[],\"pass\":true}\n"
                             "{\"cycle\":2,\"executed\":[],\"pass\":true}\n"),
                    Error);
}

TEST_CASE("first failing cycle scans in order") {
    CHECK_FALSE(first_fail_cycle({}));
    CHECK_FALSE(first_fail_cycle({true, true}));
    CHECK(*first_fail_cycle({false}) == 0);
    CHECK(*first_fail_cycle({true, false, false}) == 1);
}
