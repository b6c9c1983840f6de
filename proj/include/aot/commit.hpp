#pragma once

#include <optional>
#include <utility>

#include "aot/broadcast.hpp"
#include "aot/core.hpp"
#include "aot/simnet.hpp"

// Commitment layers: global bit commitments from AOT or oblivious broadcast,
// GBCX pairs with cut-and-choose linear-relation proofs and copying,
// distributed bit commitments and commit-reveal coin tossing.

namespace aot {

// Thrown when a publicly verifiable check fails and the run terminates with a
// definite outcome (cheater identified, group split, abort).
struct ProtocolHalt {
    Outcome outcome;
};

struct GbcParams {
    int k = 8;   // strings per receiver
    int m = 16;  // string length, <= 32
};

enum class GbcOrigin { AotAnonymous, ObliviousBroadcast };

struct CommitParams {
    GbcParams gbc{8, 16};
    GbcParams coin{2, 4};  // small commitments backing public coin tosses
    int mx = 4;            // pairs per GBCX
    GbcOrigin origin = GbcOrigin::ObliviousBroadcast;
    BroadcastParams bcast{};
};

// One global bit commitment: k parity-b strings per receiver with erasure
// patterns.  AOT origin sends independent strings per player; OB origin sends
// one shared set over the oblivious broadcast.
struct Gbc {
    uint64_t id = 0;
    PlayerId committer = -1;
    int bit = 0;
    GbcParams p;
    GbcOrigin origin = GbcOrigin::ObliviousBroadcast;
    std::vector<std::vector<uint32_t>> strings;   // [player][k], packed m bits
    std::vector<std::vector<uint32_t>> received;  // [player][k] delivery masks
    bool opened = false;
    // set for anonymously created commitments; the committer identifies
    // itself through this handle before opening
    std::shared_ptr<IdentifiableHandle> announce;
    BroadcastParams bcast;
};

// announce_anonymously: creation runs through the identifiable anonymous
// broadcast, so nobody learns the committer until it identifies itself.
Gbc gbc_commit(Sim& sim, PlayerId committer, int bit, const CommitParams& params,
               GbcOrigin origin, bool announce_anonymously = false);

// Committer publishes its strings; every player cross-checks received
// positions and the parity consistency of all strings.  A mismatch halts the
// run with CheaterIdentified(committer).
int gbc_open(Sim& sim, Gbc& g);

// Open toward a single player only (DBC share handover).  Returns the bit the
// receiver accepts, or nullopt when the private opening is inconsistent.
std::optional<int> gbc_open_private(Sim& sim, Gbc& g, PlayerId receiver);

struct Gbcx {
    PlayerId committer = -1;
    int bit = 0;
    int mx = 0;
    std::vector<std::pair<Gbc, Gbc>> pairs;  // left xor right = bit, per pair
    bool consumed = false;
};

Gbcx gbcx_commit(Sim& sim, PlayerId committer, int bit, const CommitParams& params);

// Opens every pair; all pairs must XOR to the same bit.
int gbcx_open(Sim& sim, Gbcx& g);

// Commit-reveal coin toss: uniform public bits as long as one participant is
// honest.  Refusal to open halts with CheaterIdentified.
Bits coin_toss(Sim& sim, PlayerMask participants, int nbits, const CommitParams& params);

// Cut-and-choose proof that the XOR of the operand bits equals `constant`.
// All operands must be unconsumed GBCX of the same prover; the proof consumes
// them.  A failed check halts with CheaterIdentified(prover).
void prove_linear(Sim& sim, PlayerId prover, std::vector<Gbcx*> operands, int constant,
                  const CommitParams& params, const std::string& tag = "");

// Copying procedure: 3*mx fresh pairs, a publicly coin-tossed partition into
// three GBCX and an equality proof of the first against the original.  The
// two surviving GBCX both stand for the original bit.
std::pair<Gbcx, Gbcx> gbcx_copy(Sim& sim, Gbcx& g, const CommitParams& params);

// Handle for a logical committed bit.  Proof operands consume a GBCX, so the
// handle transparently copies before handing one out; open() uses the live
// instance directly.
class CommittedBit {
public:
    CommittedBit() = default;
    explicit CommittedBit(Gbcx g) : live_(std::move(g)) {}

    bool valid() const { return live_.mx != 0; }
    PlayerId committer() const { return live_.committer; }
    int secret_bit() const { return live_.bit; }

    Gbcx take(Sim& sim, const CommitParams& params);
    int open(Sim& sim);

private:
    Gbcx live_;
};

enum class DbcRole { UserCommitment, IntermediateResult };

// n GBCX, one per player, whose values XOR to the committed bit.
struct Dbc {
    DbcRole role = DbcRole::UserCommitment;
    PlayerId owner = -1;  // UserCommitment only
    std::vector<CommittedBit> shares;

    int secret_bit() const;
};

// User commitment: every helper opens its GBCX to the owner (publicly
// on conflict) and the owner completes the parity.
Dbc dbc_create_user(Sim& sim, PlayerId owner, int bit, const CommitParams& params);

// Partition the players by identical conflict sets.
Outcome conflict_split(Sim& sim);

// Quiescence loop: every player creates l anonymous GBCX; persistent
// conflicts end in a group split whose one block holds all honest players.
Outcome anonymous_gbcx_round(Sim& sim, const CommitParams& params, int l);

// --- analysis helpers (exact, used by the oracle suites) ---

// Statistical distance of a single player's pre-opening view between b=0 and
// b=1: the chance some string arrives fully, 1-(1-2^-m)^k.
double gbc_hiding_distance(const GbcParams& p);

// Best undetected equivocation probability over all flip strategies against a
// single receiver; the optimum flips one bit per string, 2^-k.
double gbc_best_equivocation(const GbcParams& p);

}  // namespace aot
