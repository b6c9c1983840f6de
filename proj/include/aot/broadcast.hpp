#pragma once

#include <optional>

#include "aot/core.hpp"
#include "aot/mac.hpp"
#include "aot/simnet.hpp"

// The three AOT-based channels: authenticated broadcast, anonymous message
// transfer / anonymous broadcast, and anonymous broadcast with later
// identification of the sender.

namespace aot {

struct BroadcastParams {
    int l = 2;                    // anonymous keys per player and round
    int r = 8;                    // repetition factor of the erasure code
    double cheat_threshold = 0.99;
    int field_degree = 32;        // MAC field
    int max_send_retries = 16;
    int max_rounds = 8;           // authenticated-broadcast repetitions
};

struct AnonSendResult {
    bool ok = false;
    Bits msg;
    int attempts = 0;
};

// Repetition-coded transfer over the AOT channel; the receiver-visible record
// names no sender.  Bounded resends, then failure.
AnonSendResult anonymous_send(Sim& sim, PlayerId sender, PlayerId receiver,
                              const Bits& msg, const BroadcastParams& params);

// Authenticated broadcast.  On Success all honest players output msg; otherwise the
// outcome identifies the equivocating sender or a persistent false complainer.
Outcome authenticated_broadcast(Sim& sim, PlayerId sender, const Bits& msg,
                                const BroadcastParams& params);

struct AnonBroadcastResult {
    Outcome outcome;
    int relay_failures = 0;
};

// Relayed anonymous broadcast: at most n relay failures, each recorded in the
// conflict graph, before the sender has to leave.
AnonBroadcastResult anonymous_broadcast(Sim& sim, PlayerId sender, const Bits& msg,
                                        const BroadcastParams& params);

struct IdentifiableHandle {
    PlayerId true_sender = -1;
    Bits msg;
    std::vector<AuthKey> keys;  // one per player, known in full only to the sender
    Outcome outcome;
    int relay_failures = 0;
    bool ok() const { return outcome.kind == Outcome::Success; }
};

// Identifiable broadcast: the message is authenticated under n per-player keys
// delivered anonymously, so the sender can later prove authorship.
IdentifiableHandle anonymous_broadcast_identifiable(Sim& sim, PlayerId sender,
                                                    const Bits& msg,
                                                    const BroadcastParams& params);

// Claimant proves knowledge of every player's key by tagging a fresh public
// challenge.  Anyone else fails except with MAC-forgery probability.
bool identify_sender(Sim& sim, const IdentifiableHandle& handle, PlayerId claimant,
                     const BroadcastParams& params);

}  // namespace aot
