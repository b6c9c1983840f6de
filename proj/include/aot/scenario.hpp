#pragma once

#include <map>
#include <string>
#include <vector>

#include "aot/core.hpp"
#include "aot/mpc.hpp"
#include "aot/simnet.hpp"

// Declarative scenario configs, the deterministic runner behind the command
// line tool, transcript re-verification and batch statistics.

namespace aot {

// Flat key-value format with [section] headers and '#' comments.  Sections:
// [scenario] (name, protocol, n, seed, expect), [params], [circuit] (file),
// [inputs] (w<id> = bit), [adversary] (structure, collusion), and one [cheat]
// section per scripted deviation (actor, hook, action, arg).
struct ScenarioConfig {
    std::string name;
    std::string protocol = "mpc";
    int n = 3;
    uint64_t seed = 0;
    std::string expect = "any";

    MpcParams mpc;
    BroadcastParams bcast;

    std::string circuit_file;  // resolved against the config's directory
    std::map<int, int> inputs;

    std::vector<PlayerMask> structure;  // empty = no declared structure
    std::vector<CheatScript> cheats;

    // protocol-specific keys (sender, message, bit, x0, x1, sel, repeats, ...)
    std::map<std::string, std::string> extra;
};

// Throws std::runtime_error with a line number on malformed input or failed
// validation (unknown keys are reported too).
ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir = ".");
ScenarioConfig load_scenario(const std::string& path);

bool outcome_matches(const Outcome& o, const std::string& expect);

struct RunResult {
    Outcome outcome;
    std::string transcript;  // full serialized event log
    bool expectation_met = false;
};

RunResult run_scenario(const ScenarioConfig& cfg);

// Re-checks everything publicly checkable in a serialized transcript: proof
// verdict arithmetic, opened-commitment parity consistency, committed-OT set
// sizes and code dimension, and the outcome trichotomy.  Returns findings;
// empty = pass.
std::vector<std::string> verify_transcript(const std::string& transcript,
                                           const ScenarioConfig& cfg);

// Aggregate TSV over a batch of serialized transcripts: delivery and
// learn rates, broadcast cover rate, proof and identification counters.
// Header line always present; one data row when the batch is non-empty.
std::string stats_table(const std::vector<std::string>& transcripts);

}  // namespace aot
