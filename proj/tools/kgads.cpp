// kgads: spectral Klein-Gordon solver and verification driver.
//
//   kgads spectrum       --scenario <path> [--out <dir>]
//   kgads evolve         --scenario <path> [--out <dir>] [--threads <n>]
//   kgads verify         --scenario <path> [--out <dir>] [--threads <n>] [--seed <int>]
//   kgads oracle-compare --scenario <path> [--out <dir>]
//
// Exit codes: 0 success (verify: every check passed, controls failing as designed),
// 1 a check failed, 2 configuration or usage error, 3 numerical error.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kgads/io/runner.hpp"
#include "kgads/parallel.hpp"

namespace {

struct Options {
    std::string scenario;
    std::string out = "out";
    int threads = 1;
    int seed = 0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--scenario", o.scenario, "scenario JSON file")->required();
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for randomised test data");
}

int run(const std::string& command, const Options& o) {
    using namespace kgads;
    set_thread_count(o.threads);
    const io::ScenarioRunner runner(io::load_scenario(o.scenario), o.seed);
    const std::filesystem::path out(o.out);
    if (command == "spectrum") {
        runner.spectrum(out);
        std::cout << "wrote " << (out / "spectrum.csv").string() << '\n';
        return 0;
    }
    if (command == "evolve") {
        runner.evolve(out);
        std::cout << "wrote snapshots, tower.csv and energy.csv to " << out.string() << '\n';
        return 0;
    }
    if (command == "verify") {
        const auto outcomes = runner.verify();
        std::filesystem::create_directories(out);
        const auto doc = io::verification_document(runner, outcomes);
        io::write_json(out / "report.json", doc);
        for (const auto& oc : outcomes) std::cout << io::format_outcome(oc) << '\n';
        return doc.at("all_passed").get<bool>() ? 0 : 1;
    }
    const auto oc = runner.oracle_compare(out);
    std::cout << io::format_outcome(oc) << '\n';
    return oc.effective_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Klein-Gordon solver on the Poincare half-space and the brane interval"};
    app.require_subcommand(1);
    Options o;
    std::string command;
    for (const char* name : {"spectrum", "evolve", "verify", "oracle-compare"}) {
        auto* cmd = app.add_subcommand(name);
        add_common(cmd, o);
        cmd->callback([&command, name] { command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        return run(command, o);
    } catch (const kgads::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const kgads::DomainError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
