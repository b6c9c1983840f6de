#pragma once

#include "aot/code.hpp"
#include "aot/commit.hpp"
#include "aot/core.hpp"
#include "aot/simnet.hpp"

// Undeniable oblivious transfer from the commitment substrings, the standard
// one-out-of-two reduction with committed masks, and the nine-step globally
// committed OT with conflict resolution.

namespace aot {

struct UotOutcome {
    bool known = false;
    int value = 0;  // valid if known
    Gbc commitment; // binds the sender to the transferred bit
    int attempts = 0;
};

// Bob publishes one fully-known and one fully-erased substring of equal
// length; Alice opens one of them, chosen by a private fair coin.  Bob learns
// the committed bit with probability 1/2 and Alice cannot tell which.
UotOutcome uot(Sim& sim, PlayerId alice, PlayerId bob, int bit,
               const CommitParams& params, GbcOrigin origin);

struct OneOfTwoResult {
    bool ok = false;
    int value = 0;  // a_c
    int attempts = 0;
    std::vector<UotOutcome> masks;      // committed random bits, for audits
    std::vector<int> set0, set1;        // announced index sets
    int m0 = 0, m1 = 0;                 // masked announcements
};

// Standard reduction: batch of UOT masks, Bob labels a fully-known half
// as S_c, Alice announces both inputs masked by the set parities.
OneOfTwoResult one_of_two_uot(Sim& sim, PlayerId alice, int a0, int a1, PlayerId bob,
                              int choice, const CommitParams& params, int batch,
                              GbcOrigin origin);

struct GcotParams {
    int m = 16;
    double sigma = 0.125;
    double epsilon = 1.0 / 16;
    int uot_batch = 6;  // masks per one-out-of-two transfer
    GbcOrigin uot_origin = GbcOrigin::AotAnonymous;
};

struct GcotSession {
    LinearCode code;
    Word c0 = 0, c1 = 0;
    std::vector<int> sel_flips;         // I_0: positions where Bob flips his selector
    std::vector<int> check_set;         // I_1
    std::vector<int> audit_set;         // I_2
    std::vector<OneOfTwoResult> transfers;
    Word w = 0;
    Word h = 0;                         // subset-parity privacy amplification
    Word pub_mask = 0;                  // publicly opened codeword positions
    int opened_per_codeword = 0;
    bool conflict = false;
};

struct GcotResult {
    Outcome outcome;
    CommittedBit out;  // Bob's commitment to x_sel, valid on Success
    GcotSession session;
};

// Steps 1-9.  Alice holds committed bits x0, x1; Bob holds a committed
// selector.  On Success Bob is committed to x_sel and all players are
// convinced of it; verifiable failures identify the cheater immediately and
// step-4/5 conflicts go through conflict resolution.
GcotResult gcot(Sim& sim, PlayerId alice, CommittedBit& x0, CommittedBit& x1,
                PlayerId bob, CommittedBit& selector, const GcotParams& gp,
                const CommitParams& params);

}  // namespace aot
