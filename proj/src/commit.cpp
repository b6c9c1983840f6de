#include "aot/commit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace aot {

namespace {

int parity32(uint32_t w) { return std::popcount(w) & 1; }

// random m-bit string with the given parity
uint32_t parity_string(Rng& rng, int m, int parity) {
    uint32_t s = rng.mask(m - 1);
    if ((parity32(s) ^ parity) != 0) s |= 1u << (m - 1);
    return s;
}

Bits strings_to_bits(const std::vector<uint32_t>& strings, int m) {
    Bits out;
    out.reserve(strings.size() * m);
    for (uint32_t s : strings)
        for (int i = 0; i < m; ++i) out.push_back((s >> i) & 1);
    return out;
}

std::string strings_text(const std::vector<uint32_t>& strings, int m) {
    std::string out;
    for (uint32_t s : strings) {
        for (int i = 0; i < m; ++i) out += ((s >> i) & 1) ? '1' : '0';
        out += ' ';
    }
    if (!out.empty()) out.pop_back();
    return out;
}

}  // namespace

Gbc gbc_commit(Sim& sim, PlayerId committer, int bit, const CommitParams& params,
               GbcOrigin origin, bool announce_anonymously) {
    const int n = sim.n();
    const GbcParams& p = params.gbc;
    const std::string inst = sim.fresh_label("gbc");

    Gbc g;
    g.id = std::stoull(inst.substr(inst.find('/') + 1));
    g.committer = committer;
    g.bit = bit;
    g.p = p;
    g.origin = origin;
    g.bcast = params.bcast;
    g.strings.assign(n, {});
    g.received.assign(n, std::vector<uint32_t>(p.k, 0));

    const CheatScript* cc = sim.cheat(committer, "GBC_COMMIT");
    const bool bad_parity = cc && cc->action == "bad-parity";

    // string values come from an instance-keyed stream so that swapping the
    // (anonymous) committer with fixed coins leaves all deliveries unchanged
    Rng& srng = sim.coins(inst + "/strings");
    const uint32_t full = p.m >= 32 ? ~0u : ((1u << p.m) - 1u);

    if (origin == GbcOrigin::ObliviousBroadcast) {
        std::vector<uint32_t> shared(p.k);
        for (int s = 0; s < p.k; ++s) shared[s] = parity_string(srng, p.m, bit);
        if (bad_parity) shared[0] ^= 1u;
        auto deliveries = sim.ob_send(committer, strings_to_bits(shared, p.m));
        for (PlayerId j = 0; j < n; ++j) {
            g.strings[j] = shared;
            if (j == committer) {
                g.received[j].assign(p.k, full);
                continue;
            }
            const ObDelivery& d = deliveries.at(j);
            for (int s = 0; s < p.k; ++s)
                for (int i = 0; i < p.m; ++i)
                    if (d.known[s * p.m + i]) g.received[j][s] |= 1u << i;
        }
        sim.log_public(Actor::p(committer), "GBC_COMMIT",
                       "id=" + std::to_string(g.id) + ";origin=ob");
    } else {
        for (PlayerId j = 0; j < n; ++j) {
            if (j == committer) {
                g.strings[j].assign(p.k, 0);
                g.received[j].assign(p.k, full);
                continue;
            }
            g.strings[j].resize(p.k);
            for (int s = 0; s < p.k; ++s) g.strings[j][s] = parity_string(srng, p.m, bit);
            if (bad_parity) g.strings[j][0] ^= 1u;
            AotDelivery d = sim.aot_send(committer, j, strings_to_bits(g.strings[j], p.m));
            for (int s = 0; s < p.k; ++s)
                for (int i = 0; i < p.m; ++i)
                    if (d.known[s * p.m + i]) g.received[j][s] |= 1u << i;
        }
        if (announce_anonymously) {
            Bits note;  // commitment id, fixed width
            for (int i = 0; i < 32; ++i) note.push_back((g.id >> i) & 1);
            auto handle = anonymous_broadcast_identifiable(sim, committer, note, params.bcast);
            if (!handle.ok()) throw ProtocolHalt{handle.outcome};
            g.announce = std::make_shared<IdentifiableHandle>(std::move(handle));
        } else {
            sim.log_public(Actor::p(committer), "GBC_COMMIT",
                           "id=" + std::to_string(g.id) + ";origin=aot");
        }
    }
    return g;
}

int gbc_open(Sim& sim, Gbc& g) {
    const int n = sim.n();
    const GbcParams& p = g.p;
    if (g.opened) throw std::logic_error("gbc already opened");
    g.opened = true;

    if (g.announce) {
        if (!identify_sender(sim, *g.announce, g.committer, g.bcast))
            throw ProtocolHalt{Outcome::cheater(g.committer)};
    }

    const CheatScript* oc = sim.cheat(g.committer, "GBC_OPEN");
    // an equivocation attempt has to flip the parity of every claimed string;
    // flipping a single bit per string is the optimal strategy
    std::vector<std::vector<uint32_t>> claimed = g.strings;
    if (oc && oc->action == "flip") {
        Rng& crng = sim.coins("cheat/gbcopen/" + std::to_string(g.id));
        for (PlayerId j = 0; j < n; ++j) {
            if (j == g.committer) continue;
            for (int s = 0; s < p.k; ++s)
                claimed[j][s] ^= 1u << crng.uniform(p.m);
        }
    }

    std::ostringstream text;
    for (PlayerId j = 0; j < n; ++j) {
        if (j == g.committer) continue;
        text << (text.tellp() > 0 ? "|" : "") << 'P' << j << '='
             << strings_text(claimed[j], p.m);
    }
    sim.log_public(Actor::p(g.committer), "GBC_OPEN",
                   "id=" + std::to_string(g.id) + ";" + text.str());

    // cross-checks: received positions and parity agreement
    int bit = -1;
    for (PlayerId j = 0; j < n; ++j) {
        if (j == g.committer) continue;
        for (int s = 0; s < p.k; ++s) {
            if ((claimed[j][s] & g.received[j][s]) != (g.strings[j][s] & g.received[j][s])) {
                sim.log_public(Actor::p(j), "ACCUSE",
                               "gbc=" + std::to_string(g.id) + ";mismatch");
                throw ProtocolHalt{Outcome::cheater(g.committer)};
            }
            int par = parity32(claimed[j][s]);
            if (bit == -1) bit = par;
            if (par != bit) {
                sim.log_public(Actor::p(j), "ACCUSE",
                               "gbc=" + std::to_string(g.id) + ";parity");
                throw ProtocolHalt{Outcome::cheater(g.committer)};
            }
        }
    }
    return bit;
}

std::optional<int> gbc_open_private(Sim& sim, Gbc& g, PlayerId receiver) {
    const GbcParams& p = g.p;
    std::vector<uint32_t> claimed = g.strings[receiver];
    const CheatScript* oc = sim.cheat(g.committer, "DBC_SHARE");
    if (oc && oc->action == "garble")
        for (auto& s : claimed) s ^= 1u;  // wrong bits, parity flipped too

    sim.log(Actor::p(g.committer), "GBC_OPEN_PRIV",
            str_payload("id=" + std::to_string(g.id) + ";" + strings_text(claimed, p.m)),
            Visibility::only(receiver));

    int bit = -1;
    for (int s = 0; s < p.k; ++s) {
        if ((claimed[s] & g.received[receiver][s]) !=
            (g.strings[receiver][s] & g.received[receiver][s]))
            return std::nullopt;
        int par = parity32(claimed[s]);
        if (bit == -1) bit = par;
        if (par != bit) return std::nullopt;
    }
    return bit;
}

Gbcx gbcx_commit(Sim& sim, PlayerId committer, int bit, const CommitParams& params) {
    Gbcx g;
    g.committer = committer;
    g.bit = bit;
    g.mx = params.mx;
    const std::string inst = sim.fresh_label("gbcx");
    Rng& rng = sim.coins(inst + "/pairs");
    const CheatScript* cc = sim.cheat(committer, "GBCX_COMMIT");
    for (int i = 0; i < params.mx; ++i) {
        int left = rng.bit();
        int right = left ^ bit;
        if (cc && cc->action == "bad-pair" && i == 0) right ^= 1;
        g.pairs.emplace_back(gbc_commit(sim, committer, left, params, params.origin),
                             gbc_commit(sim, committer, right, params, params.origin));
    }
    return g;
}

int gbcx_open(Sim& sim, Gbcx& g) {
    if (g.consumed) throw std::logic_error("gbcx already consumed");
    g.consumed = true;
    int bit = -1;
    for (auto& [l, r] : g.pairs) {
        int v = gbc_open(sim, l) ^ gbc_open(sim, r);
        if (bit == -1) bit = v;
        if (v != bit) throw ProtocolHalt{Outcome::cheater(g.committer)};
    }
    return bit;
}

Bits coin_toss(Sim& sim, PlayerMask participants, int nbits, const CommitParams& params) {
    const std::string inst = sim.fresh_label("coin");
    CommitParams cp = params;
    cp.gbc = params.coin;

    struct Entry {
        PlayerId p;
        Bits bits;
        std::vector<Gbc> commits;
    };
    std::vector<Entry> entries;
    for (PlayerId p : mask_players(participants)) {
        Entry e;
        e.p = p;
        const CheatScript* cc = sim.cheat(p, "COIN");
        if (cc && cc->action == "fix")
            e.bits.assign(nbits, 0);
        else
            e.bits = sim.coins(inst + "/P" + std::to_string(p)).bits(nbits);
        for (int i = 0; i < nbits; ++i)
            e.commits.push_back(gbc_commit(sim, p, e.bits[i], cp, GbcOrigin::ObliviousBroadcast));
        entries.push_back(std::move(e));
    }
    Bits out(nbits, 0);
    for (auto& e : entries) {
        const CheatScript* cc = sim.cheat(e.p, "COIN");
        if (cc && cc->action == "withhold") {
            sim.log_public(Actor::p(e.p), "COIN", "refuse");
            throw ProtocolHalt{Outcome::cheater(e.p)};
        }
        for (int i = 0; i < nbits; ++i) out[i] ^= gbc_open(sim, e.commits[i]);
    }
    sim.log_public(Actor::func(), "COIN", "result=" + bits_str(out));
    return out;
}

void prove_linear(Sim& sim, PlayerId prover, std::vector<Gbcx*> operands, int constant,
                  const CommitParams& params, const std::string& tag) {
    if (operands.empty()) throw std::invalid_argument("proof needs operands");
    const int mx = operands[0]->mx;
    for (Gbcx* op : operands) {
        if (op->consumed) throw std::logic_error("proof operand already consumed");
        if (op->committer != prover) throw std::logic_error("operand not owned by prover");
        if (op->mx != mx) throw std::logic_error("operand pair-count mismatch");
        op->consumed = true;
    }

    const CheatScript* pc = sim.cheat(prover, "PROOF");
    if (pc && pc->action == "skip") {
        sim.log_public(Actor::p(prover), "PROOF", "tag=" + tag + ";refused");
        throw ProtocolHalt{Outcome::cheater(prover)};
    }

    // announced pair differences d_i = xor of left halves
    Bits d(mx);
    for (int i = 0; i < mx; ++i) {
        int v = 0;
        for (Gbcx* op : operands) v ^= op->pairs[i].first.bit;
        d[i] = static_cast<uint8_t>(v);
    }
    sim.log_public(Actor::p(prover), "PROOF",
                   "tag=" + tag + ";t=" + std::to_string(constant) + ";d=" + bits_str(d));

    Bits challenges = coin_toss(sim, full_mask(sim.n()), mx, params);

    Bits opened(mx);
    bool ok = true;
    for (int i = 0; i < mx; ++i) {
        int x = 0;
        for (Gbcx* op : operands) {
            Gbc& side = challenges[i] ? op->pairs[i].second : op->pairs[i].first;
            x ^= gbc_open(sim, side);
        }
        opened[i] = static_cast<uint8_t>(x);
        int expect = d[i] ^ (challenges[i] ? constant : 0);
        if (x != expect) ok = false;
    }
    sim.log_public(Actor::func(), "PROOF",
                   "tag=" + tag + ";e=" + bits_str(challenges) + ";x=" + bits_str(opened) +
                       ";verdict=" + (ok ? "ok" : "fail"));
    if (!ok) throw ProtocolHalt{Outcome::cheater(prover)};
}

std::pair<Gbcx, Gbcx> gbcx_copy(Sim& sim, Gbcx& g, const CommitParams& params) {
    if (g.consumed) throw std::logic_error("cannot copy a consumed gbcx");
    const int mx = g.mx;
    const PlayerId committer = g.committer;
    const std::string inst = sim.fresh_label("copy");

    // 3*mx fresh pairs, each XORing to the committed bit
    const CheatScript* cc = sim.cheat(committer, "COPY");
    int bad = 0;
    if (cc && cc->action == "bad-pairs") bad = cc->arg.empty() ? 2 : std::stoi(cc->arg);
    Rng& rng = sim.coins(inst + "/pairs");
    std::vector<std::pair<Gbc, Gbc>> pool;
    for (int i = 0; i < 3 * mx; ++i) {
        int left = rng.bit();
        int right = left ^ g.bit;
        if (i < bad) right ^= 1;
        pool.emplace_back(gbc_commit(sim, committer, left, params, params.origin),
                          gbc_commit(sim, committer, right, params, params.origin));
    }

    // public coin toss picks the random partition into three GBCX
    Bits coins = coin_toss(sim, full_mask(sim.n()), 16, params);
    uint64_t shuffle_seed = 0;
    for (int i = 0; i < 16; ++i) shuffle_seed |= static_cast<uint64_t>(coins[i]) << i;
    std::vector<int> order(3 * mx);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffler(shuffle_seed);
    for (int i = 3 * mx - 1; i > 0; --i)
        std::swap(order[i], order[shuffler() % (i + 1)]);

    auto group = [&](int which) {
        Gbcx out;
        out.committer = committer;
        out.mx = mx;
        for (int i = 0; i < mx; ++i)
            out.pairs.push_back(std::move(pool[order[which * mx + i]]));
        out.bit = g.bit;
        return out;
    };
    Gbcx first = group(0), second = group(1), third = group(2);

    sim.log_public(Actor::p(committer), "COPY", "inst=" + inst);
    prove_linear(sim, committer, {&g, &first}, 0, params, "copy-eq");
    return {std::move(second), std::move(third)};
}

Gbcx CommittedBit::take(Sim& sim, const CommitParams& params) {
    if (!valid()) throw std::logic_error("empty committed bit");
    auto [keep, give] = gbcx_copy(sim, live_, params);
    live_ = std::move(keep);
    return std::move(give);
}

int CommittedBit::open(Sim& sim) {
    if (!valid()) throw std::logic_error("empty committed bit");
    return gbcx_open(sim, live_);
}

int Dbc::secret_bit() const {
    int b = 0;
    for (const auto& s : shares) b ^= s.secret_bit();
    return b;
}

Dbc dbc_create_user(Sim& sim, PlayerId owner, int bit, const CommitParams& params) {
    const int n = sim.n();
    Dbc dbc;
    dbc.role = DbcRole::UserCommitment;
    dbc.owner = owner;
    dbc.shares.resize(n);

    int helper_parity = 0;
    for (PlayerId j = 0; j < n; ++j) {
        if (j == owner) continue;
        int share = sim.coins(sim.fresh_label("dbcshare") + "/bit").bit();
        Gbcx g = gbcx_commit(sim, j, share, params);

        // private opening to the owner, public on conflict
        bool accepted = true;
        for (auto& [l, r] : g.pairs) {
            auto lv = gbc_open_private(sim, l, owner);
            auto rv = gbc_open_private(sim, r, owner);
            if (!lv || !rv || (*lv ^ *rv) != share) accepted = false;
        }
        if (!accepted) {
            sim.log_public(Actor::p(owner), "COMPLAINT",
                           "dbc-helper=P" + std::to_string(j));
            const CheatScript* hc = sim.cheat(j, "DBC_SHARE");
            if (hc && hc->arg == "withhold") {
                sim.log_public(Actor::p(j), "DBC_SHARE", "refuse");
                throw ProtocolHalt{Outcome::cheater(j)};
            }
            // helper opens publicly: split off a copy and open it for everyone
            auto [keep, reveal] = gbcx_copy(sim, g, params);
            g = std::move(keep);
            Gbcx rv = std::move(reveal);
            share = gbcx_open(sim, rv);
            g.bit = share;
        }
        helper_parity ^= share;
        dbc.shares[j] = CommittedBit(std::move(g));
    }
    int own = bit ^ helper_parity;
    dbc.shares[owner] = CommittedBit(gbcx_commit(sim, owner, own, params));
    sim.log_public(Actor::p(owner), "DBC", "created");
    return dbc;
}

Outcome conflict_split(Sim& sim) {
    if (!sim.conflicts().any()) return Outcome::success();
    auto blocks = partition_by_conflicts(sim.conflicts());
    std::ostringstream text;
    for (PlayerMask b : blocks) text << ' ' << b;
    sim.log_public(Actor::func(), "SPLIT", "blocks=" + text.str());
    return Outcome::split(blocks);
}

Outcome anonymous_gbcx_round(Sim& sim, const CommitParams& params, int l) {
    const int n = sim.n();
    for (int round = 0; round < l; ++round) {
        sim.next_round();
        for (PlayerId p = 0; p < n; ++p) {
            int bit = sim.coins(sim.fresh_label("anongbcx") + "/bit").bit();
            CommitParams ap = params;
            ap.origin = GbcOrigin::AotAnonymous;
            Gbc g = gbc_commit(sim, p, bit, ap, GbcOrigin::AotAnonymous, true);
            const CheatScript* cc = sim.cheat(p, "GBC_COMMIT");
            bool bad_committer = cc && cc->action == "bad-parity";
            for (PlayerId q = 0; q < n; ++q) {
                if (q == p) continue;
                const CheatScript* qc = sim.cheat(q, "GBC_COMMIT");
                bool complains = qc && qc->action == "false-complain";
                // honest players complain about provably inconsistent strings
                if (bad_committer && !(sim.cheat(q, "GBC_COMMIT"))) complains = true;
                if (complains && !sim.conflicts().in_conflict(q, p)) {
                    sim.log_public(Actor::p(q), "COMPLAINT",
                                   "anon-gbcx=" + std::to_string(g.id));
                    sim.conflicts().add(q, p);
                }
            }
        }
    }
    if (!sim.conflicts().any()) {
        sim.log_public(Actor::func(), "GBCX_QUIESCENT", "ok");
        return Outcome::success();
    }
    return conflict_split(sim);
}

double gbc_hiding_distance(const GbcParams& p) {
    return 1.0 - std::pow(1.0 - std::pow(2.0, -p.m), p.k);
}

double gbc_best_equivocation(const GbcParams& p) {
    // a parity flip needs an odd number of flipped bits per string and each
    // flipped bit survives undetected with probability 1/2; strings are
    // independent, so the per-string optima multiply
    double prod = 1.0;
    for (int s = 0; s < p.k; ++s) {
        double best = 0.0;
        for (uint32_t f = 1; f < (1u << p.m); ++f)
            if (std::popcount(f) & 1)
                best = std::max(best, std::pow(0.5, std::popcount(f)));
        prod *= best;
    }
    return prod;
}

}  // namespace aot
