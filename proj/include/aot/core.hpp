#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

// Player identities, adversary structures, conflict bookkeeping, protocol
// outcomes and the append-only transcript every protocol layer writes into.

namespace aot {

using PlayerId = int;

// Player subsets are bitmasks; the simulator supports up to 32 players.
using PlayerMask = uint32_t;

constexpr PlayerMask full_mask(int n) {
    return n >= 32 ? ~0u : ((1u << n) - 1u);
}
constexpr bool in_mask(PlayerMask s, PlayerId p) { return (s >> p) & 1u; }
constexpr PlayerMask with_player(PlayerMask s, PlayerId p) { return s | (1u << p); }
int mask_size(PlayerMask s);
std::vector<PlayerId> mask_players(PlayerMask s);

// Monotone family of tolerable collusions.  Never contains the full player
// set: a collusion of everyone has nobody left to cheat.
struct AdversaryStructure {
    std::set<PlayerMask> sets;

    bool contains(PlayerMask s) const { return sets.count(s) != 0; }
};

// Smallest monotone superset of the given family.  Throws std::invalid_argument
// if the family contains the full player set.
AdversaryStructure monotone_close(const std::vector<PlayerMask>& family, int n);

// True iff robust MPC is possible in the OT setting: |P| = 2, or no pair of
// members of A covers P minus a single player.
bool two_cover_check(const AdversaryStructure& a, int n);

// Symmetric irreflexive accusation relation.
class ConflictGraph {
public:
    explicit ConflictGraph(int n) : adj_(n, 0) {}

    void add(PlayerId a, PlayerId b);
    bool in_conflict(PlayerId a, PlayerId b) const { return in_mask(adj_[a], b); }
    PlayerMask conflicts_of(PlayerId p) const { return adj_[p]; }
    bool any() const;
    int n() const { return static_cast<int>(adj_.size()); }
    // A player in conflict with all others has to leave the protocol.
    bool expelled(PlayerId p) const {
        return adj_[p] == (full_mask(n()) & ~(1u << p));
    }

private:
    std::vector<PlayerMask> adj_;
};

// Blocks group players with identical conflict sets.  On an empty graph the
// trivial single-block partition is returned.
std::vector<PlayerMask> partition_by_conflicts(const ConflictGraph& g);

struct Outcome {
    enum Kind { Success, CheaterIdentified, GroupSplit, Aborted };

    Kind kind = Success;
    std::vector<int> result;               // opened output bits (Success)
    PlayerId culprit = -1;                 // CheaterIdentified
    std::vector<PlayerMask> partition;     // GroupSplit
    std::string reason;                    // Aborted

    static Outcome success(std::vector<int> bits = {});
    static Outcome cheater(PlayerId p);
    static Outcome split(std::vector<PlayerMask> blocks);
    static Outcome aborted(std::string why);
    bool ok() const { return kind == Success; }
};

std::string to_string(const Outcome& o);

// Who produced an event.  Anonymous actors keep the sender identity out of
// every receiver-visible record; Functionality marks ideal-channel actions.
struct Actor {
    enum Kind { Player, Anonymous, Functionality };
    Kind kind = Player;
    PlayerId player = -1;

    static Actor p(PlayerId id) { return {Player, id}; }
    static Actor anon() { return {Anonymous, -1}; }
    static Actor func() { return {Functionality, -1}; }
};

// Visibility set of an event: some subset of the players plus optionally the
// outside observer.
struct Visibility {
    PlayerMask players = 0;
    bool observer = false;

    static Visibility only(PlayerId p) { return {1u << p, false}; }
    static Visibility everyone(int n) { return {full_mask(n), true}; }
    static Visibility players_of(PlayerMask m) { return {m, false}; }
    bool sees(PlayerId p) const { return in_mask(players, p); }
};

struct EventRecord {
    uint32_t round = 0;
    Actor actor;
    std::string kind;
    std::vector<uint8_t> payload;
    Visibility vis;
};

// Append-only event log.  All security predicates (agreement, anonymity
// coupling, secrecy) are evaluated post hoc from this single log.
class Transcript {
public:
    void append(EventRecord ev) { events_.push_back(std::move(ev)); }
    const std::vector<EventRecord>& events() const { return events_; }
    size_t size() const { return events_.size(); }

    // Line-delimited serialization: round|actor|kind|hex-payload|visibility-csv
    std::string serialize() const;
    static std::string serialize_event(const EventRecord& ev);
    static EventRecord parse_event(const std::string& line);

    // Serialized restriction to the events a single player sees.
    std::string view(PlayerId p) const;
    std::string observer_view() const;

private:
    std::vector<EventRecord> events_;
};

std::vector<uint8_t> str_payload(const std::string& s);
std::string payload_str(const std::vector<uint8_t>& p);

}  // namespace aot
