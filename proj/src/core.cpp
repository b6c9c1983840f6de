#include "aot/core.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace aot {

int mask_size(PlayerMask s) { return std::popcount(s); }

std::vector<PlayerId> mask_players(PlayerMask s) {
    std::vector<PlayerId> out;
    for (int i = 0; i < 32; ++i)
        if (in_mask(s, i)) out.push_back(i);
    return out;
}

AdversaryStructure monotone_close(const std::vector<PlayerMask>& family, int n) {
    const PlayerMask all = full_mask(n);
    AdversaryStructure a;
    a.sets.insert(0);  // empty collusion is always tolerable
    for (PlayerMask s : family) {
        if ((s & ~all) != 0) throw std::invalid_argument("set outside player range");
        if (s == all) throw std::invalid_argument("adversary structure may not contain all players");
        // enumerate subsets of s
        PlayerMask sub = s;
        while (true) {
            a.sets.insert(sub);
            if (sub == 0) break;
            sub = (sub - 1) & s;
        }
    }
    return a;
}

bool two_cover_check(const AdversaryStructure& a, int n) {
    if (n < 2) throw std::invalid_argument("need at least two players");
    if (n == 2) return true;
    const PlayerMask all = full_mask(n);
    for (PlayerMask s : a.sets)
        for (PlayerMask t : a.sets)
            for (int i = 0; i < n; ++i)
                if ((s | t | (1u << i)) == all) return false;
    return true;
}

void ConflictGraph::add(PlayerId a, PlayerId b) {
    if (a == b) throw std::invalid_argument("conflict relation is irreflexive");
    adj_[a] = with_player(adj_[a], b);
    adj_[b] = with_player(adj_[b], a);
}

bool ConflictGraph::any() const {
    for (PlayerMask m : adj_)
        if (m) return true;
    return false;
}

std::vector<PlayerMask> partition_by_conflicts(const ConflictGraph& g) {
    const int n = g.n();
    if (!g.any()) return {full_mask(n)};
    std::vector<PlayerMask> blocks;
    std::vector<bool> placed(n, false);
    for (int i = 0; i < n; ++i) {
        if (placed[i]) continue;
        PlayerMask block = 1u << i;
        placed[i] = true;
        for (int j = i + 1; j < n; ++j) {
            if (placed[j]) continue;
            if (g.conflicts_of(i) == g.conflicts_of(j)) {
                block = with_player(block, j);
                placed[j] = true;
            }
        }
        blocks.push_back(block);
    }
    return blocks;
}

Outcome Outcome::success(std::vector<int> bits) {
    Outcome o;
    o.kind = Success;
    o.result = std::move(bits);
    return o;
}
Outcome Outcome::cheater(PlayerId p) {
    Outcome o;
    o.kind = CheaterIdentified;
    o.culprit = p;
    return o;
}
Outcome Outcome::split(std::vector<PlayerMask> blocks) {
    Outcome o;
    o.kind = GroupSplit;
    o.partition = std::move(blocks);
    return o;
}
Outcome Outcome::aborted(std::string why) {
    Outcome o;
    o.kind = Aborted;
    o.reason = std::move(why);
    return o;
}

std::string to_string(const Outcome& o) {
    std::ostringstream s;
    switch (o.kind) {
        case Outcome::Success:
            s << "success";
            for (int b : o.result) s << ' ' << b;
            break;
        case Outcome::CheaterIdentified:
            s << "cheater P" << o.culprit;
            break;
        case Outcome::GroupSplit:
            s << "split";
            for (PlayerMask m : o.partition) {
                s << " {";
                bool first = true;
                for (PlayerId p : mask_players(m)) {
                    if (!first) s << ',';
                    s << 'P' << p;
                    first = false;
                }
                s << '}';
            }
            break;
        case Outcome::Aborted:
            s << "aborted: " << o.reason;
            break;
    }
    return s.str();
}

namespace {

std::string actor_str(const Actor& a) {
    switch (a.kind) {
        case Actor::Player: return "P" + std::to_string(a.player);
        case Actor::Anonymous: return "ANON";
        case Actor::Functionality: return "F";
    }
    return "?";
}

Actor parse_actor(const std::string& s) {
    if (s == "ANON") return Actor::anon();
    if (s == "F") return Actor::func();
    if (s.size() >= 2 && s[0] == 'P') return Actor::p(std::stoi(s.substr(1)));
    throw std::invalid_argument("bad actor: " + s);
}

const char* kHexDigits = "0123456789abcdef";

}  // namespace

std::string Transcript::serialize_event(const EventRecord& ev) {
    std::ostringstream s;
    s << ev.round << '|' << actor_str(ev.actor) << '|' << ev.kind << '|';
    for (uint8_t b : ev.payload) s << kHexDigits[b >> 4] << kHexDigits[b & 15];
    s << '|';
    bool first = true;
    for (PlayerId p : mask_players(ev.vis.players)) {
        if (!first) s << ',';
        s << 'P' << p;
        first = false;
    }
    if (ev.vis.observer) {
        if (!first) s << ',';
        s << "OBS";
    }
    return s.str();
}

EventRecord Transcript::parse_event(const std::string& line) {
    std::vector<std::string> parts;
    size_t start = 0;
    for (int i = 0; i < 4; ++i) {
        size_t bar = line.find('|', start);
        if (bar == std::string::npos) throw std::invalid_argument("bad event line: " + line);
        parts.push_back(line.substr(start, bar - start));
        start = bar + 1;
    }
    parts.push_back(line.substr(start));

    EventRecord ev;
    ev.round = static_cast<uint32_t>(std::stoul(parts[0]));
    ev.actor = parse_actor(parts[1]);
    ev.kind = parts[2];
    const std::string& hex = parts[3];
    if (hex.size() % 2) throw std::invalid_argument("odd hex payload");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    for (size_t i = 0; i < hex.size(); i += 2)
        ev.payload.push_back(static_cast<uint8_t>(nib(hex[i]) << 4 | nib(hex[i + 1])));
    std::istringstream vs(parts[4]);
    std::string tok;
    while (std::getline(vs, tok, ',')) {
        if (tok == "OBS")
            ev.vis.observer = true;
        else if (tok.size() >= 2 && tok[0] == 'P')
            ev.vis.players = with_player(ev.vis.players, std::stoi(tok.substr(1)));
        else if (!tok.empty())
            throw std::invalid_argument("bad visibility token: " + tok);
    }
    return ev;
}

std::string Transcript::serialize() const {
    std::string out;
    for (const auto& ev : events_) {
        out += serialize_event(ev);
        out += '\n';
    }
    return out;
}

std::string Transcript::view(PlayerId p) const {
    std::string out;
    for (const auto& ev : events_)
        if (ev.vis.sees(p)) {
            out += serialize_event(ev);
            out += '\n';
        }
    return out;
}

std::string Transcript::observer_view() const {
    std::string out;
    for (const auto& ev : events_)
        if (ev.vis.observer) {
            out += serialize_event(ev);
            out += '\n';
        }
    return out;
}

std::vector<uint8_t> str_payload(const std::string& s) {
    return std::vector<uint8_t>(s.begin(), s.end());
}

std::string payload_str(const std::vector<uint8_t>& p) {
    return std::string(p.begin(), p.end());
}

}  // namespace aot
