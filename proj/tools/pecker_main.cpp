// Command-line frontend: pdg | trace | empc | localize | bench.

#include <pecker/pecker.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string empc_cell(int v) { return pecker::empc_text(v); }

void print_ranked(const pecker::RankedList& list, int top) {
    bool baseline = list.mode == pecker::Mode::Tarantula || list.mode == pecker::Mode::Ochiai;
    std::cout << "first fail: cycle " << list.first_fail << " (mode " << pecker::mode_name(list.mode);
    if (!baseline) std::cout << ", truncation " << pecker::truncation_name(list.truncation);
    std::cout << ")\n";
    std::size_t where_chars = 7;
    for (const auto& e : list.entries) {
        if (top > 0 && e.rank > top) break;
        where_chars = std::max(where_chars,
                               (e.span.file + ":" + std::to_string(e.span.line)).size());
    }
    const int where_w = static_cast<int>(where_chars) + 2;
    std::cout << std::left << std::setw(6) << "rank" << std::setw(6) << "stmt" << std::setw(where_w)
              << "where" << std::setw(13) << "kind";
    if (baseline)
        std::cout << "score";
    else
        std::cout << std::setw(5) << "aef" << std::setw(5) << "aep" << std::setw(9) << "inv_aep"
                  << std::setw(7) << "C_act" << "EMPC";
    std::cout << "\n";
    for (const auto& e : list.entries) {
        if (top > 0 && e.rank > top) break;
        std::string where = e.span.file + ":" + std::to_string(e.span.line);
        std::cout << std::left << std::setw(6) << e.rank << std::setw(6) << e.stmt_id
                  << std::setw(where_w) << where << std::setw(13) << e.kind;
        if (baseline) {
            std::cout << std::fixed << std::setprecision(4) << e.spectrum_score;
        } else if (e.excluded) {
            std::cout << "excluded (" << e.exclusion_reason << ")";
        } else {
            std::ostringstream inv;
            if (e.score.aep == 0)
                inv << "inf";
            else
                inv << std::fixed << std::setprecision(3)
                    << 1.0 / static_cast<double>(e.score.aep);
            std::cout << std::setw(5) << e.score.aef << std::setw(5) << e.score.aep << std::setw(9)
                      << inv.str() << std::setw(7) << e.c_act << empc_cell(e.empc);
            if (!e.candidate) std::cout << "  [fallback]";
        }
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bug localization for sequential designs via propagation analysis"};
    app.require_subcommand(1);

    // pdg
    auto* pdg_cmd = app.add_subcommand("pdg", "build the dependency graph of a design");
    std::string pdg_design;
    bool pdg_dot = false;
    pdg_cmd->add_option("design", pdg_design, "Verilog design file")->required();
    pdg_cmd->add_flag("--dot", pdg_dot, "emit Graphviz DOT instead of a summary");

    // trace
    auto* trace_cmd = app.add_subcommand("trace", "simulate a design against a stimulus");
    std::string trace_design, trace_stim, trace_out;
    trace_cmd->add_option("design", trace_design, "Verilog design file")->required();
    trace_cmd->add_option("--stimulus", trace_stim, "stimulus JSON file")->required();
    trace_cmd->add_option("--out", trace_out, "output trace (JSON lines)")->required();

    // empc
    auto* empc_cmd = app.add_subcommand("empc", "per-statement minimal propagation cycles");
    std::string empc_design, empc_trace;
    bool empc_fixpoint = false;
    empc_cmd->add_option("design", empc_design, "Verilog design file")->required();
    empc_cmd->add_option("--trace", empc_trace, "trace JSONL file")->required();
    empc_cmd->add_flag("--empc-fixpoint", empc_fixpoint, "repeat sweeps until the map is stable");

    // localize
    auto* loc_cmd = app.add_subcommand("localize", "rank statements by suspiciousness");
    std::string loc_design, loc_stim, loc_mode = "pecker", loc_trunc = "full", loc_report;
    bool loc_no_al = false, loc_no_prune = false, loc_fixpoint = false;
    int loc_top = 10;
    loc_cmd->add_option("design", loc_design, "Verilog design file")->required();
    loc_cmd->add_option("--stimulus", loc_stim, "stimulus JSON file")->required();
    loc_cmd->add_option("--mode", loc_mode, "pecker|tarantula|ochiai (ablations: pecker-no-al, pecker-no-ntp)");
    loc_cmd->add_flag("--no-activation-localization", loc_no_al, "score every statement at the observation cycle");
    loc_cmd->add_flag("--no-pruning", loc_no_prune, "keep polluted trail cycles when counting aep");
    loc_cmd->add_option("--truncation", loc_trunc, "full|half|none");
    loc_cmd->add_option("--top", loc_top, "rows to print, 0 for all");
    loc_cmd->add_option("--report", loc_report, "write the ranked list as JSON");
    loc_cmd->add_flag("--empc-fixpoint", loc_fixpoint, "repeat sweeps until the map is stable");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run a seeded-bug corpus and report metrics");
    std::string bench_corpus, bench_out;
    std::string bench_modes = "pecker,tarantula,ochiai,pecker-no-al,pecker-no-ntp";
    bool bench_fixpoint = false;
    bench_cmd->add_option("--corpus", bench_corpus, "corpus manifest JSON")->required();
    bench_cmd->add_option("--modes", bench_modes, "comma-separated mode list");
    bench_cmd->add_option("--out", bench_out, "write the full report as JSON");
    bench_cmd->add_flag("--empc-fixpoint", bench_fixpoint, "repeat sweeps until the map is stable");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pdg_cmd->parsed()) {
            pecker::Design d = pecker::load_design(pdg_design);
            if (pdg_dot) {
                pecker::export_dot(d.pdg, d.table, std::cout);
            } else {
                int data = 0, control = 0;
                for (const auto& e : d.pdg.edges)
                    (e.kind == pecker::EdgeKind::Data ? data : control)++;
                std::cout << d.ast.name << ": " << d.table.size() << " statements, "
                          << d.pdg.signal_nodes.size() << " signals, " << data << " data edges, "
                          << control << " control edges, " << d.pdg.outputs.size() << " outputs\n";
            }
            return 0;
        }

        if (trace_cmd->parsed()) {
            pecker::Design d = pecker::load_design(trace_design);
            pecker::Stimulus stim = pecker::load_stimulus(trace_stim);
            auto [trace, results] = pecker::simulate(d.ast, d.table, d.classes, stim);
            pecker::save_trace(trace, results, trace_out);
            auto fail = pecker::first_fail_cycle(results);
            std::cout << trace.cycle_count() << " cycles, ";
            if (fail)
                std::cout << "first fail at cycle " << *fail << "\n";
            else
                std::cout << "all pass\n";
            return 0;
        }

        if (empc_cmd->parsed()) {
            pecker::Design d = pecker::load_design(empc_design);
            auto [trace, results] = pecker::load_trace(empc_trace);
            pecker::EmpcMap map = pecker::compute_empc(d.pdg, trace, results, empc_fixpoint);
            std::cout << "stmt_id,empc\n";
            for (int s = 0; s < d.table.size(); ++s)
                std::cout << s << "," << empc_cell(map.at(d.pdg.node_of_stmt(s))) << "\n";
            return 0;
        }

        if (loc_cmd->parsed()) {
            pecker::Design d = pecker::load_design(loc_design);
            pecker::Stimulus stim = pecker::load_stimulus(loc_stim);
            auto [trace, results] = pecker::simulate(d.ast, d.table, d.classes, stim);
            pecker::TestRun run;
            run.trace = std::move(trace);
            run.results = std::move(results);

            pecker::LocalizeOptions opt;
            auto mode = pecker::mode_from_string(loc_mode);
            if (!mode) throw pecker::Error(pecker::ErrorKind::Format, "unknown mode " + loc_mode);
            opt.mode = *mode;
            auto trunc = pecker::truncation_from_string(loc_trunc);
            if (!trunc) throw pecker::Error(pecker::ErrorKind::Format, "unknown truncation " + loc_trunc);
            opt.truncation = *trunc;
            opt.empc_fixpoint = loc_fixpoint;
            if (loc_no_al && opt.mode == pecker::Mode::Pecker) opt.mode = pecker::Mode::PeckerNoAl;
            if (loc_no_prune) {
                if (opt.mode == pecker::Mode::Pecker)
                    opt.mode = pecker::Mode::PeckerNoNtp;
                else
                    opt.truncation = pecker::Truncation::None;
            }

            std::vector<pecker::TestRun> tests;
            tests.push_back(std::move(run));
            pecker::RankedList list = pecker::localize(d.pdg, d.table, tests, opt);
            print_ranked(list, loc_top);
            if (!loc_report.empty()) {
                std::ofstream out(loc_report, std::ios::binary);
                if (!out)
                    throw pecker::Error(pecker::ErrorKind::Io, "cannot open " + loc_report + " for writing");
                out << pecker::ranked_list_to_json(list).dump(2) << "\n";
            }
            return 0;
        }

        if (bench_cmd->parsed()) {
            std::vector<pecker::Mode> modes;
            std::stringstream ss(bench_modes);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (item.empty()) continue;
                auto m = pecker::mode_from_string(item);
                if (!m) throw pecker::Error(pecker::ErrorKind::Format, "unknown mode " + item);
                modes.push_back(*m);
            }
            if (modes.empty())
                throw pecker::Error(pecker::ErrorKind::Format, "no modes requested");
            pecker::CorpusManifest manifest = pecker::load_corpus(bench_corpus);
            pecker::BenchReport report = pecker::run_corpus(manifest, modes, bench_fixpoint);
            std::cout << report.table;
            if (!bench_out.empty()) {
                std::ofstream out(bench_out, std::ios::binary);
                if (!out)
                    throw pecker::Error(pecker::ErrorKind::Io, "cannot open " + bench_out + " for writing");
                out << report.json.dump(2) << "\n";
            }
            return 0;
        }
    } catch (const pecker::Error& e) {
        std::cerr << pecker::error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
