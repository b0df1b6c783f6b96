// SPDX-License-Identifier: Apache-2.0
//
// milac_cli: Monte-Carlo sweeps, CSV summaries and the built-in self test.
//
//   milac_cli run --config sweep.cfg [--out results.csv] [--plots] [--threads n] [--seed s]
//   milac_cli summarize --in results.csv
//   milac_cli selftest
//
// Exit codes: 0 success, 1 invalid input or unwritable output, 2 solver
// failure or non-convergence under --strict.

#include "milac/experiments.hpp"
#include "milac/selftest.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;

unsigned default_threads() {
    if (const char* env = std::getenv("MILAC_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring invalid MILAC_THREADS='" << env << "'\n";
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string stem_of(const std::string& path) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

struct RunOptions {
    std::string config;
    std::string out;
    bool plots = false;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    bool strict = false;
    bool timing = false;
};

int cmd_run(const RunOptions& o) {
    milac::ScenarioConfig cfg = milac::load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.timing) cfg.timing = true;
    if (!o.out.empty()) cfg.output = o.out;
    const unsigned threads = o.threads.value_or(default_threads());

    const milac::SweepOutput result = milac::run_sweep(cfg, threads);
    const auto parent = std::filesystem::path(cfg.output).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    milac::emit_csv(result.records, cfg.output);
    const std::string stem = stem_of(cfg.output);

    const auto rows = milac::summarize(result.records);
    {
        std::ofstream os(stem + "_summary.csv", std::ios::binary | std::ios::trunc);
        if (!os) throw milac::IoError("cannot write '" + stem + "_summary.csv'");
        milac::write_summary(os, rows);
    }
    milac::write_summary(std::cout, rows);

    if (cfg.export_channels) {
        std::ofstream os(stem + "_channels.csv", std::ios::binary | std::ios::trunc);
        if (!os) throw milac::IoError("cannot write '" + stem + "_channels.csv'");
        milac::write_channels(os, result.channels);
    }
    if (o.plots)
        for (const auto& path : milac::write_plots(rows, stem)) std::cerr << "wrote " << path << '\n';

    std::size_t unconverged = 0;
    for (const auto& r : result.records)
        if (!r.converged) ++unconverged;
    for (const auto& f : result.failures) std::cerr << "solver failure: " << f << '\n';
    if (unconverged > 0) std::cerr << unconverged << " of " << result.records.size() << " runs did not converge\n";
    std::cerr << "wrote " << cfg.output << " (" << result.records.size() << " records)\n";
    if (o.strict && (unconverged > 0 || !result.failures.empty())) return kExitSolver;
    return kExitOk;
}

int cmd_summarize(const std::string& in) {
    const auto records = milac::load_csv(in);
    milac::write_summary(std::cout, milac::summarize(records));
    return kExitOk;
}

int cmd_selftest() {
    bool all = true;
    double total = 0.0;
    for (const auto& c : milac::run_selftest()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << " [" << c.seconds << " s]\n";
        all = all && c.passed;
        total += c.seconds;
    }
    std::cout << (all ? "selftest passed" : "selftest FAILED") << " in " << total << " s\n";
    return all ? kExitOk : kExitSolver;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MiLAC beamforming experiments"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "Run a Monte-Carlo sweep from a config file");
    run_cmd->add_option("--config", run.config, "Scenario config (key = value)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", run.out, "Output CSV path (overrides the config)");
    run_cmd->add_flag("--plots", run.plots, "Also write SVG charts of the mean curves");
    run_cmd->add_option("--threads", run.threads, "Worker threads (default: $MILAC_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "Master seed (overrides the config)");
    run_cmd->add_flag("--strict", run.strict, "Exit with code 2 if any run fails or does not converge");
    run_cmd->add_flag("--timing", run.timing, "Record wall-clock time per run");

    std::string summarize_in;
    auto* sum_cmd = app.add_subcommand("summarize", "Per-point means and standard errors of a results CSV");
    sum_cmd->add_option("--in", summarize_in, "Results CSV")->required()->check(CLI::ExistingFile);

    auto* self_cmd = app.add_subcommand("selftest", "Run the numerical-kernel checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*sum_cmd) return cmd_summarize(summarize_in);
        if (*self_cmd) return cmd_selftest();
    } catch (const milac::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const milac::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const milac::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitInvalid;
}
