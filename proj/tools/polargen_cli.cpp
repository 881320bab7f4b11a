/*
 * Copyright 2026 The polargen authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polargen/polargen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

std::vector<std::uint32_t> parse_length_range(const std::string& text) {
    const auto parse_one = [](const std::string& s) -> std::uint32_t {
        std::size_t used = 0;
        unsigned long value = 0;
        try {
            value = std::stoul(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid code length \"" + s + "\"");
        }
        if (used != s.size() || value == 0) throw std::invalid_argument("invalid code length \"" + s + "\"");
        return static_cast<std::uint32_t>(value);
    };

    const std::size_t dots = text.find("..");
    std::vector<std::uint32_t> lengths;
    if (dots == std::string::npos) {
        lengths.push_back(parse_one(text));
    } else {
        const std::uint32_t lo = parse_one(text.substr(0, dots));
        const std::uint32_t hi = parse_one(text.substr(dots + 2));
        if (!polargen::is_power_of_two(lo) || !polargen::is_power_of_two(hi) || lo > hi) {
            throw std::invalid_argument("range must be lo..hi with powers of two, got \"" + text + "\"");
        }
        for (std::uint32_t n = lo; n <= hi; n *= 2) lengths.push_back(n);
    }
    for (std::uint32_t n : lengths) {
        if (!polargen::is_power_of_two(n)) throw std::invalid_argument("N must be a power of two");
        if (n < 8) throw std::invalid_argument("N must be at least 8");
    }
    return lengths;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed to write " + path.string());
}

struct FormulaArgs {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    bool general = false;
};

int run_formula(const FormulaArgs& args) {
    const polargen::Formula f = args.general ? polargen::general_formula(args.n, args.m)
                                             : polargen::specialized_formula(args.n, args.m);
    std::cout << polargen::format_formula(f) << "\n";
    return kExitOk;
}

struct GenArgs {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::string out_dir;
    std::uint32_t frames = 10;
    std::uint64_t seed = 1;
};

int run_gen(const GenArgs& args) {
    const polargen::Netlist nl = polargen::elaborate(polargen::specialized_formula(args.n, args.m));
    const polargen::CostReport report = polargen::cost_report(nl);
    polargen::RtlBundle bundle = polargen::emit_verilog(nl);

    const std::vector<polargen::BitVector> words = polargen::random_frames(args.n, args.frames, args.seed);
    std::vector<std::vector<polargen::BitVector>> stimulus;
    stimulus.reserve(words.size());
    for (const polargen::BitVector& u : words) {
        stimulus.push_back(polargen::input_schedule(u, args.n, args.m));
    }
    const std::vector<std::vector<polargen::BitVector>> expected =
        polargen::expected_frames(words, args.n, args.m);
    bundle.testbench = polargen::emit_testbench(nl, stimulus, expected);

    const std::filesystem::path dir = std::filesystem::path(args.out_dir) / bundle.design_name;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    write_file(dir / "top.v", bundle.top);
    write_file(dir / "cells.v", bundle.cells);
    write_file(dir / "tb.v", bundle.testbench);
    write_file(dir / "netlist.json", polargen::serialize_netlist(nl));
    write_file(dir / "cost.json", polargen::cost_to_json(nl, report).dump(2) + "\n");
    write_file(dir / "stimulus.txt", polargen::format_frame_slices(stimulus));
    write_file(dir / "expected.txt", polargen::format_frame_slices(expected));
    write_file(dir / "manifest.json", bundle.manifest.dump(2) + "\n");

    std::cout << "wrote " << dir.string() << " (xor=" << report.xor_count << ", mem=" << report.mem_count
              << ", latency=" << report.latency_cycles << " cycles, " << report.bits_per_cycle
              << " bits/cycle)\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string n_range;
    std::string m_spec = "all";
    std::uint32_t frames = 10;
    std::uint64_t seed = 1;
    bool exhaustive = false;
};

int run_verify(const VerifyArgs& args) {
    const std::vector<std::uint32_t> lengths = parse_length_range(args.n_range);
    bool all_passed = true;
    std::uint32_t points = 0;
    for (std::uint32_t n : lengths) {
        std::vector<std::uint32_t> parallelisms;
        if (args.m_spec == "all") {
            for (std::uint32_t m = 4; m <= n / 2; m *= 2) parallelisms.push_back(m);
        } else {
            polargen::check_design_params(n, static_cast<std::uint32_t>(std::stoul(args.m_spec)));
            parallelisms.push_back(static_cast<std::uint32_t>(std::stoul(args.m_spec)));
        }
        for (std::uint32_t m : parallelisms) {
            polargen::EquivalenceReport report;
            if (args.exhaustive) {
                report = polargen::verify_equivalence_exhaustive(n, m);
            } else {
                report = polargen::verify_equivalence(n, m, args.frames, args.seed);
            }
            std::cout << report.describe() << "\n";
            all_passed = all_passed && report.passed;
            ++points;
        }
    }
    std::cout << (all_passed ? "all " : "FAILURES among ") << points << " design points"
              << (all_passed ? " passed" : "") << "\n";
    return all_passed ? kExitOk : kExitVerifyFailed;
}

struct ExploreArgs {
    std::uint32_t n = 0;
    std::vector<std::string> freqs;
};

int run_explore(const ExploreArgs& args) {
    polargen::FrequencyMap freq;
    for (const std::string& entry : args.freqs) {
        const std::size_t eq = entry.find('=');
        try {
            if (eq == std::string::npos) {
                freq[0] = std::stod(entry);
            } else {
                freq[static_cast<std::uint32_t>(std::stoul(entry.substr(0, eq)))] =
                    std::stod(entry.substr(eq + 1));
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("invalid --freq entry \"" + entry + "\"; use MHZ or M=MHZ");
        }
    }
    const std::vector<polargen::ExploreRow> rows = polargen::design_space(args.n, freq);
    std::cout << polargen::format_explore_table(args.n, rows);
    return kExitOk;
}

struct SimArgs {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::string stimulus_path;
    std::string out_path = "response.txt";
    std::uint32_t frames = 1;
    std::uint64_t seed = 1;
    std::uint32_t gap = 0;
};

int run_sim(const SimArgs& args) {
    polargen::check_design_params(args.n, args.m);
    std::vector<polargen::BitVector> words;
    if (!args.stimulus_path.empty()) {
        std::ifstream in(args.stimulus_path);
        if (!in) throw std::invalid_argument("cannot open stimulus file " + args.stimulus_path);
        std::vector<std::vector<polargen::BitVector>> slices;
        try {
            slices = polargen::parse_frame_slices(in, args.m);
        } catch (const std::runtime_error& e) {
            throw std::invalid_argument(args.stimulus_path + ": " + e.what());
        }
        for (const auto& frame : slices) {
            words.push_back(polargen::deschedule_input(frame, args.n, args.m));
        }
    } else {
        words = polargen::random_frames(args.n, args.frames, args.seed);
    }

    const polargen::Netlist nl = polargen::elaborate(polargen::specialized_formula(args.n, args.m));
    const polargen::RunResult run = polargen::run_frames(nl, words, args.gap);

    std::vector<std::vector<polargen::BitVector>> response = run.frame_outputs;
    write_file(args.out_path, polargen::format_frame_slices(response));

    std::cout << "frames: " << words.size() << "\n";
    std::cout << "latency: " << run.first_output_latency << " cycles\n";
    std::cout << "bits/cycle: " << nl.lanes << "\n";
    std::cout << "response written to " << args.out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pipelined polar encoder hardware generator"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI/TOML file (flags win)");

    FormulaArgs formula_args;
    CLI::App* formula = app.add_subcommand("formula", "print the stage formula for (N, M)");
    formula->add_option("-N,--length", formula_args.n, "code length (power of two, >= 8)")->required();
    formula->add_option("-M,--parallelism", formula_args.m, "lanes per cycle (power of two, 4..N/2)")->required();
    formula->add_flag("--general", formula_args.general, "print the W-form framework formula");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate Verilog, netlist, cost report and testbench");
    gen->add_option("-N,--length", gen_args.n, "code length")->required();
    gen->add_option("-M,--parallelism", gen_args.m, "lanes per cycle")->required();
    gen->add_option("-o,--out", gen_args.out_dir, "output directory")->required();
    gen->add_option("--frames", gen_args.frames, "random stimulus frames for the testbench");
    gen->add_option("--seed", gen_args.seed, "stimulus seed");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "golden-model equivalence sweep");
    verify->add_option("-N,--length", verify_args.n_range, "code length or range lo..hi (powers of two)")
        ->required();
    verify->add_option("-M,--parallelism", verify_args.m_spec, "parallelism value or \"all\"");
    verify->add_option("--frames", verify_args.frames, "random frames per design point");
    verify->add_option("--seed", verify_args.seed, "stimulus seed");
    verify->add_flag("--exhaustive", verify_args.exhaustive, "sweep every possible source word (tiny N only)");

    ExploreArgs explore_args;
    CLI::App* explore = app.add_subcommand("explore", "tabulate the design space for a code length");
    explore->add_option("-N,--length", explore_args.n, "code length")->required();
    explore->add_option("--freq", explore_args.freqs,
                        "clock estimate in MHz, either one value or repeated M=MHZ entries");

    SimArgs sim_args;
    CLI::App* sim = app.add_subcommand("sim", "run the cycle-accurate simulator");
    sim->add_option("-N,--length", sim_args.n, "code length")->required();
    sim->add_option("-M,--parallelism", sim_args.m, "lanes per cycle")->required();
    sim->add_option("--stimulus", sim_args.stimulus_path, "stimulus file (default: random frames)");
    sim->add_option("--frames", sim_args.frames, "random frame count when no stimulus is given");
    sim->add_option("--seed", sim_args.seed, "stimulus seed");
    sim->add_option("--gap", sim_args.gap, "idle cycles between frames");
    sim->add_option("--out", sim_args.out_path, "response file path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (formula->parsed()) return run_formula(formula_args);
        if (gen->parsed()) return run_gen(gen_args);
        if (verify->parsed()) return run_verify(verify_args);
        if (explore->parsed()) return run_explore(explore_args);
        if (sim->parsed()) return run_sim(sim_args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
