#include "aot/broadcast.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace aot {

namespace {

std::vector<uint8_t> pack_bits(const Bits& b) {
    std::vector<uint8_t> out((b.size() + 7) / 8, 0);
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i]) out[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    return out;
}

Bits key_bits(const AuthKey& key, int f) {
    Bits out(2 * f);
    for (int i = 0; i < f; ++i) {
        out[i] = (key.a >> i) & 1;
        out[f + i] = (key.b >> i) & 1;
    }
    return out;
}

Bits tag_bits(const AuthTag& tag, int f) {
    Bits out(f);
    for (int i = 0; i < f; ++i) out[i] = (tag.t >> i) & 1;
    return out;
}

Bits flip_first(Bits b) {
    if (!b.empty()) b[0] ^= 1;
    return b;
}

// a fresh variant per round, so the evidence against the sender accumulates
Bits equivocation_variant(Bits b, int round) {
    if (b.empty()) return b;
    size_t span = std::min<size_t>(b.size(), 5);
    unsigned v = (round + 1) % (1u << span);
    if (v == 0) v = 1;
    for (size_t i = 0; i < span; ++i)
        if ((v >> i) & 1u) b[i] ^= 1;
    return b;
}

}  // namespace

AnonSendResult anonymous_send(Sim& sim, PlayerId sender, PlayerId receiver,
                              const Bits& msg, const BroadcastParams& params) {
    AnonSendResult res;
    for (int attempt = 0; attempt < params.max_send_retries; ++attempt) {
        ++res.attempts;
        Bits encoded;
        encoded.reserve(msg.size() * params.r);
        for (uint8_t b : msg)
            for (int c = 0; c < params.r; ++c) encoded.push_back(b);
        AotDelivery d = sim.aot_send(sender, receiver, encoded);
        Bits decoded(msg.size());
        bool complete = true;
        for (size_t i = 0; i < msg.size() && complete; ++i) {
            bool got = false;
            for (int c = 0; c < params.r; ++c)
                if (d.known[i * params.r + c]) {
                    decoded[i] = d.bits[i * params.r + c];
                    got = true;
                    break;
                }
            complete = got;
        }
        if (complete) {
            sim.log(Actor::anon(), "ANON_SEND", str_payload(bits_str(decoded)),
                    Visibility::only(receiver));
            res.ok = true;
            res.msg = std::move(decoded);
            return res;
        }
        sim.log_public(Actor::p(receiver), "RESEND",
                       "attempt=" + std::to_string(attempt));
    }
    return res;
}

Outcome authenticated_broadcast(Sim& sim, PlayerId sender, const Bits& msg,
                                const BroadcastParams& params) {
    const int n = sim.n();
    const Gf2 field(params.field_degree);
    const std::string inst = sim.fresh_label("authbc");
    const CheatScript* sender_cheat = sim.cheat(sender, "AUTH_BCAST");

    std::set<std::string> distinct_auth;  // correctly authenticated messages seen
    std::set<PlayerId> prev_complainers;
    int complainer_streak = 0;

    for (int round = 0; round < params.max_rounds; ++round) {
        sim.next_round();

        // each player hands the sender l fresh one-time keys, anonymously
        std::vector<AuthKey> all_keys;
        std::map<PlayerId, std::vector<AuthKey>> own_keys;
        for (PlayerId j = 0; j < n; ++j) {
            if (j == sender) continue;
            Rng& krng = sim.coins(inst + "/key/P" + std::to_string(j));
            for (int t = 0; t < params.l; ++t) {
                AuthKey key = random_key(field, krng);
                AnonSendResult ks = anonymous_send(sim, j, sender, key_bits(key, params.field_degree), params);
                if (!ks.ok) return Outcome::aborted("key delivery failed");
                own_keys[j].push_back(key);
                all_keys.push_back(key);
            }
        }

        // distribution: one (message, tag list) per player
        std::map<PlayerId, Bits> received;
        std::map<PlayerId, bool> auth_ok;
        for (PlayerId j = 0; j < n; ++j) {
            if (j == sender) continue;
            if (sender_cheat && sender_cheat->action == "withhold" && j == (sender + 1) % n) {
                auth_ok[j] = false;
                continue;
            }
            Bits m_j = msg;
            if (sender_cheat && sender_cheat->action == "equivocate" && j % 2 == 1)
                m_j = equivocation_variant(msg, round);
            std::ostringstream tag_text;
            std::vector<AuthTag> tags;
            for (const AuthKey& key : all_keys) {
                AuthTag t = auth(field, pack_bits(m_j), key);
                tags.push_back(t);
                tag_text << ';' << t.t;
            }
            sim.log(Actor::p(sender), "AUTH_BCAST",
                    str_payload(bits_str(m_j) + tag_text.str()), Visibility::only(j));
            received[j] = m_j;
            // j accepts iff each of its keys matches some tag
            bool ok = true;
            for (const AuthKey& key : own_keys[j]) {
                bool hit = false;
                for (const AuthTag& t : tags)
                    if (verify(field, pack_bits(m_j), t, key)) {
                        hit = true;
                        break;
                    }
                ok = ok && hit;
            }
            auth_ok[j] = ok;
        }

        // public comparison: every player announces what it received
        std::map<std::string, int> announced;  // message -> auth'd receiver count
        std::set<PlayerId> complainers;
        for (PlayerId j = 0; j < n; ++j) {
            if (j == sender) continue;
            const CheatScript* fc = sim.cheat(j, "COMPLAINT");
            if (fc && fc->action == "false-complain") {
                Bits fake = flip_first(received.count(j) ? received[j] : msg);
                sim.log_public(Actor::p(j), "COMPLAINT",
                               "claim=" + bits_str(fake) + ";auth=0");
                complainers.insert(j);
                continue;
            }
            if (!auth_ok[j]) {
                sim.log_public(Actor::p(j), "COMPLAINT", "claim=;auth=0");
                if (!sim.conflicts().in_conflict(j, sender)) sim.conflicts().add(j, sender);
                continue;
            }
            std::string m = bits_str(received[j]);
            sim.log_public(Actor::p(j), "COMPARE", "msg=" + m);
            announced[m] += 1;
        }
        for (const auto& [m, cnt] : announced) distinct_auth.insert(m);

        // termination case 2: sender in conflict with everyone
        if (sim.conflicts().expelled(sender)) {
            sim.log_public(Actor::func(), "AUTH_RESULT", "expelled=P" + std::to_string(sender));
            return Outcome::cheater(sender);
        }
        // termination case 4: enough distinct authenticated messages
        if (distinct_auth.size() >= 2) {
            double evidence = 1.0 - std::pow(2.0, -static_cast<double>(distinct_auth.size()));
            if (evidence >= params.cheat_threshold) {
                sim.log_public(Actor::func(), "AUTH_RESULT",
                               "equivocation=P" + std::to_string(sender));
                return Outcome::cheater(sender);
            }
        }
        // termination case 3: the complaining players are always the same
        if (!complainers.empty() && complainers == prev_complainers)
            ++complainer_streak;
        else
            complainer_streak = complainers.empty() ? 0 : 1;
        prev_complainers = complainers;
        if (complainer_streak >= 3) {
            PlayerId culprit = *complainers.begin();
            sim.log_public(Actor::func(), "AUTH_RESULT",
                           "false-complainer=P" + std::to_string(culprit));
            return Outcome::cheater(culprit);
        }
        // termination case 1: agreement
        if (complainers.empty() && announced.size() == 1 && distinct_auth.size() == 1 &&
            static_cast<int>(received.size()) == n - 1) {
            std::string m = announced.begin()->first;
            sim.log_public(Actor::func(), "AUTH_RESULT", "ok=" + m);
            Outcome o = Outcome::success();
            for (char c : m) o.result.push_back(c == '1');
            return o;
        }
    }
    return Outcome::aborted("broadcast undecided after max rounds");
}

AnonBroadcastResult anonymous_broadcast(Sim& sim, PlayerId sender, const Bits& msg,
                                        const BroadcastParams& params) {
    AnonBroadcastResult res{Outcome::aborted("no relay"), 0};
    for (PlayerId relay = 0; relay < sim.n(); ++relay) {
        if (relay == sender) continue;
        AnonSendResult as = anonymous_send(sim, sender, relay, msg, params);
        if (!as.ok) {
            res.outcome = Outcome::aborted("anonymous send exhausted retries");
            return res;
        }
        Bits relayed = msg;
        const CheatScript* rc = sim.cheat(relay, "ANON_BCAST");
        if (rc && rc->action == "bad-relay") relayed = flip_first(relayed);
        Outcome bc = authenticated_broadcast(sim, relay, relayed, params);
        if (!bc.ok()) {
            res.outcome = bc;
            return res;
        }
        if (relayed == msg) {
            sim.log_public(Actor::anon(), "ANON_BCAST", bits_str(msg));
            res.outcome = Outcome::success({msg.begin(), msg.end()});
            for (auto& b : res.outcome.result) b = b ? 1 : 0;
            return res;
        }
        // the anonymous sender disowns the garbled broadcast
        sim.conflicts().add(sender, relay);
        ++res.relay_failures;
        sim.log_public(Actor::anon(), "COMPLAINT",
                       "relay=P" + std::to_string(relay) + ";garbled");
    }
    res.outcome = Outcome::aborted("sender expelled");
    return res;
}

IdentifiableHandle anonymous_broadcast_identifiable(Sim& sim, PlayerId sender,
                                                    const Bits& msg,
                                                    const BroadcastParams& params) {
    const int n = sim.n();
    const Gf2 field(params.field_degree);
    const std::string inst = sim.fresh_label("idbc");

    IdentifiableHandle handle;
    handle.true_sender = sender;
    handle.msg = msg;
    handle.keys.resize(n);
    for (PlayerId j = 0; j < n; ++j) {
        // instance-keyed stream: the key material does not depend on who sends
        handle.keys[j] = random_key(field, sim.coins(inst + "/key/P" + std::to_string(j)));
        if (j != sender) {
            AnonSendResult ks =
                anonymous_send(sim, sender, j, key_bits(handle.keys[j], params.field_degree), params);
            if (!ks.ok) {
                handle.outcome = Outcome::aborted("key delivery failed");
                return handle;
            }
        }
    }
    Bits payload = msg;
    for (PlayerId j = 0; j < n; ++j) {
        Bits tb = tag_bits(auth(field, pack_bits(msg), handle.keys[j]), params.field_degree);
        payload.insert(payload.end(), tb.begin(), tb.end());
    }
    AnonBroadcastResult bc = anonymous_broadcast(sim, sender, payload, params);
    handle.outcome = bc.outcome;
    handle.relay_failures = bc.relay_failures;
    if (handle.ok()) handle.outcome.result.assign(msg.begin(), msg.end());
    return handle;
}

bool identify_sender(Sim& sim, const IdentifiableHandle& handle, PlayerId claimant,
                     const BroadcastParams& params) {
    const int n = sim.n();
    const Gf2 field(params.field_degree);
    const std::string inst = sim.fresh_label("identify");
    Bits challenge = sim.coins(inst + "/challenge").bits(64);
    sim.log_public(Actor::func(), "IDENTIFY", "challenge=" + bits_str(challenge));

    bool accepted = true;
    std::ostringstream tag_text;
    for (PlayerId j = 0; j < n; ++j) {
        AuthTag t;
        if (claimant == handle.true_sender || j == claimant) {
            t = auth(field, pack_bits(challenge), handle.keys[j]);
        } else {
            // an impersonator can only guess the keys it never saw
            uint32_t lo = static_cast<uint32_t>(field.order() - 1);
            t.t = static_cast<uint32_t>(
                      sim.coins(inst + "/guess/P" + std::to_string(claimant)).word()) &
                  lo;
        }
        tag_text << (j ? ";" : "") << t.t;
        if (!verify(field, pack_bits(challenge), t, handle.keys[j])) accepted = false;
    }
    sim.log_public(Actor::p(claimant), "IDENTIFY",
                   "tags=" + tag_text.str() + ";accepted=" + (accepted ? "1" : "0"));
    return accepted;
}

}  // namespace aot
