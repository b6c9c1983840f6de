#pragma once

#include <map>
#include <string>
#include <vector>

#include "aot/commit.hpp"
#include "aot/core.hpp"
#include "aot/ot.hpp"
#include "aot/simnet.hpp"

// Boolean-circuit evaluation on distributed bit commitments: XOR and NOT are
// local with linear proofs, AND runs the committed OT pairwise between all
// players plus a cut-and-choose product proof for each local term.

namespace aot {

struct Gate {
    enum Kind { Input, And, Xor, Not, Output };
    Kind kind = Input;
    int a = -1, b = -1, out = -1;  // wire ids
    PlayerId owner = -1;           // Input only
};

struct Circuit {
    std::vector<Gate> gates;  // in evaluation order
    std::vector<int> inputs;  // input wire ids in declaration order
    std::vector<int> outputs; // output wire ids in declaration order

    int wire_count() const;
};

// Text format, one gate per line:
//   INPUT w<id> P<owner>
//   AND w<a> w<b> -> w<c>
//   XOR w<a> w<b> -> w<c>
//   NOT w<a> -> w<b>
//   OUTPUT w<id>
// '#' starts a comment.  Throws std::runtime_error with a line number on
// malformed input, undefined wires or redefinition.
Circuit parse_circuit(const std::string& text);

struct MpcParams {
    CommitParams commit{GbcParams{3, 8}, GbcParams{2, 4}, 4};
    GcotParams gcot{8, 0.125, 1.0 / 16, 4, GbcOrigin::AotAnonymous};
    int and_proof_rounds = 2;  // rounds of the local product proof
};

// Shared-bit arithmetic on DBCs.  Every operation leaves all players
// committed to their new shares; failed proofs halt with the culprit.
Dbc xor_dbc(Sim& sim, Dbc& x, Dbc& y, const MpcParams& params);
Dbc not_dbc(Sim& sim, Dbc& x, const MpcParams& params);
Dbc and_dbc(Sim& sim, Dbc& x, Dbc& y, const MpcParams& params);

// Cut-and-choose proof that the prover's committed c equals a AND b, built
// from random committed product triples and one challenge bit per round.
void prove_product(Sim& sim, PlayerId prover, CommittedBit& a, CommittedBit& b,
                   CommittedBit& c, const MpcParams& params);

struct MpcSession {
    std::map<int, Dbc> wires;
    Outcome outcome;
};

// Full run: input phase (user commitments), gate evaluation in circuit order,
// round-robin reveal of the output shares.  `input_bits` maps input wire id
// to the owner's bit.
MpcSession run_protocol(Sim& sim, const Circuit& circuit,
                        const std::map<int, int>& input_bits, const MpcParams& params);

}  // namespace aot
