#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "aot/core.hpp"

// Deterministic round scheduler plus the ideal channel primitives everything
// else builds on: pairwise anonymous erasure channels, the oblivious
// broadcast channel and seeded per-label randomness streams.

namespace aot {

// Bit strings as 0/1 bytes; short commitment strings elsewhere use packed
// uint32 words.
using Bits = std::vector<uint8_t>;

struct SimConfig {
    int n = 3;
    uint64_t seed = 0;
};

// Deterministic stream derived from (root seed, label).  Distinct labels give
// independent streams; the same seed and label reproduce the same bits.
class Rng {
public:
    Rng(uint64_t root_seed, const std::string& label);

    int bit() { return static_cast<int>(eng_() & 1u); }
    uint64_t word() { return eng_(); }
    // uniform in [0, bound)
    uint64_t uniform(uint64_t bound);
    uint32_t mask(int nbits);  // nbits independent coin bits, packed
    Bits bits(size_t count);

private:
    std::mt19937_64 eng_;
};

// One scripted adversarial deviation: `actor` deviates at protocol point
// `hook` with the given action.  Hook names are transcript event kinds.
struct CheatScript {
    PlayerId actor = -1;
    std::string hook;
    std::string action;
    std::string arg;
};

struct AotDelivery {
    Bits bits;                  // valid where known
    std::vector<uint8_t> known; // per-position flag
    int known_count() const;
};

using ObDelivery = AotDelivery;

// Single simulation run: one thread of control, all state local to the run.
class Sim {
public:
    Sim(SimConfig cfg, std::vector<CheatScript> cheats = {});

    int n() const { return cfg_.n; }
    uint64_t seed() const { return cfg_.seed; }
    Transcript& transcript() { return transcript_; }
    const Transcript& transcript() const { return transcript_; }
    ConflictGraph& conflicts() { return conflicts_; }

    uint32_t round() const { return round_; }
    uint32_t next_round() { return ++round_; }

    // Strict stream creation: a label may be claimed once per run.
    Rng& rng_stream(const std::string& label);
    // Memoizing variant for internal protocol use.
    Rng& coins(const std::string& label);
    // Fresh per-run instance label, e.g. "gbc/7".
    std::string fresh_label(const std::string& prefix);

    const CheatScript* cheat(PlayerId actor, const std::string& hook) const;
    bool anyone_cheats_at(const std::string& hook) const;

    void log(Actor actor, const std::string& kind, std::vector<uint8_t> payload,
             Visibility vis);
    void log_public(Actor actor, const std::string& kind, const std::string& payload);

    // Ideal AOT: each bit arrives with probability 1/2; the receiver-visible
    // record names no sender; the sender learns nothing about erasures.
    AotDelivery aot_send(PlayerId sender, PlayerId receiver, const Bits& bits);

    // Ideal oblivious broadcast: independent erasure pattern per receiver,
    // sender identity visible (authenticated at this layer).
    std::map<PlayerId, ObDelivery> ob_send(PlayerId sender, const Bits& bits);

private:
    SimConfig cfg_;
    Transcript transcript_;
    ConflictGraph conflicts_;
    std::vector<CheatScript> cheats_;
    uint32_t round_ = 0;
    std::map<std::string, std::unique_ptr<Rng>> streams_;
    std::map<std::string, uint64_t> counters_;
};

std::string pattern_str(const AotDelivery& d);  // '0'/'1'/'-' per position
std::string bits_str(const Bits& b);
Bits parse_bits(const std::string& s);

}  // namespace aot
