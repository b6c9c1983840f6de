#include <glob.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aot/scenario.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    std::vector<std::string> out;
    glob_t g{};
    if (glob(pattern.c_str(), 0, nullptr, &g) == 0)
        for (size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    globfree(&g);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic simulator for commitment-based multiparty protocols"};
    app.require_subcommand(1);

    std::string config_path, transcript_path, out_path;
    std::vector<std::string> patterns;

    CLI::App* run = app.add_subcommand("run", "Execute a scenario config");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("-o,--transcript-out", out_path, "write the full transcript here");

    CLI::App* verify = app.add_subcommand("verify", "Re-check a transcript against its config");
    verify->add_option("transcript", transcript_path, "serialized transcript")->required();
    verify->add_option("config", config_path, "scenario config file")->required();

    CLI::App* stats = app.add_subcommand("stats", "Aggregate statistics over transcripts");
    stats->add_option("glob", patterns, "transcript files or glob patterns")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            aot::ScenarioConfig cfg = aot::load_scenario(config_path);
            aot::RunResult res = aot::run_scenario(cfg);
            if (!out_path.empty()) {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot write: " + out_path);
                out << res.transcript;
            }
            std::cout << (cfg.name.empty() ? config_path : cfg.name) << ": "
                      << aot::to_string(res.outcome) << '\n';
            if (!res.expectation_met) {
                std::cout << "expectation not met: " << cfg.expect << '\n';
                return 1;
            }
            return 0;
        }
        if (verify->parsed()) {
            aot::ScenarioConfig cfg = aot::load_scenario(config_path);
            std::vector<std::string> findings =
                aot::verify_transcript(slurp(transcript_path), cfg);
            for (const std::string& f : findings) std::cout << "finding: " << f << '\n';
            std::cout << (findings.empty() ? "ok" : "failed") << '\n';
            return findings.empty() ? 0 : 1;
        }
        if (stats->parsed()) {
            std::vector<std::string> transcripts;
            for (const std::string& p : patterns)
                for (const std::string& path : expand_glob(p))
                    transcripts.push_back(slurp(path));
            std::cout << aot::stats_table(transcripts);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
