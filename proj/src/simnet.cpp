#include "aot/simnet.hpp"

#include <stdexcept>

namespace aot {

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

Rng::Rng(uint64_t root_seed, const std::string& label) {
    std::seed_seq seq{root_seed, fnv1a(label), uint64_t{0x9e3779b97f4a7c15ull}};
    eng_.seed(seq);
}

uint64_t Rng::uniform(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform(0)");
    // rejection sampling keeps the draw exactly uniform
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = eng_();
    } while (v >= limit);
    return v % bound;
}

uint32_t Rng::mask(int nbits) {
    uint32_t m = 0;
    for (int i = 0; i < nbits; ++i) m |= static_cast<uint32_t>(bit()) << i;
    return m;
}

Bits Rng::bits(size_t count) {
    Bits out(count);
    for (auto& b : out) b = static_cast<uint8_t>(bit());
    return out;
}

int AotDelivery::known_count() const {
    int c = 0;
    for (uint8_t k : known) c += k;
    return c;
}

Sim::Sim(SimConfig cfg, std::vector<CheatScript> cheats)
    : cfg_(cfg), conflicts_(cfg.n), cheats_(std::move(cheats)) {
    if (cfg_.n < 2 || cfg_.n > 32) throw std::invalid_argument("player count out of range");
}

Rng& Sim::rng_stream(const std::string& label) {
    auto [it, inserted] = streams_.try_emplace(label, nullptr);
    if (!inserted) throw std::invalid_argument("rng label collision: " + label);
    it->second = std::make_unique<Rng>(cfg_.seed, label);
    return *it->second;
}

Rng& Sim::coins(const std::string& label) {
    auto it = streams_.find(label);
    if (it == streams_.end())
        it = streams_.emplace(label, std::make_unique<Rng>(cfg_.seed, label)).first;
    return *it->second;
}

std::string Sim::fresh_label(const std::string& prefix) {
    return prefix + "/" + std::to_string(counters_[prefix]++);
}

const CheatScript* Sim::cheat(PlayerId actor, const std::string& hook) const {
    for (const auto& c : cheats_)
        if (c.actor == actor && c.hook == hook) return &c;
    return nullptr;
}

bool Sim::anyone_cheats_at(const std::string& hook) const {
    for (const auto& c : cheats_)
        if (c.hook == hook) return true;
    return false;
}

void Sim::log(Actor actor, const std::string& kind, std::vector<uint8_t> payload,
              Visibility vis) {
    transcript_.append({round_, actor, kind, std::move(payload), vis});
}

void Sim::log_public(Actor actor, const std::string& kind, const std::string& payload) {
    log(actor, kind, str_payload(payload), Visibility::everyone(cfg_.n));
}

AotDelivery Sim::aot_send(PlayerId sender, PlayerId receiver, const Bits& bits) {
    AotDelivery d;
    d.bits = bits;
    d.known.resize(bits.size());
    // erasure coins keyed by receiver only, so swapping the sender with fixed
    // coins leaves the receiver-visible record unchanged
    Rng& rng = coins("aot/P" + std::to_string(receiver));
    for (size_t i = 0; i < bits.size(); ++i) {
        d.known[i] = static_cast<uint8_t>(rng.bit());
        if (!d.known[i]) d.bits[i] = 0;
    }
    log(Actor::p(sender), "AOT_SEND",
        str_payload("to=P" + std::to_string(receiver) + ";bits=" + bits_str(bits)),
        Visibility::only(sender));
    log(Actor::anon(), "AOT", str_payload(pattern_str(d)), Visibility::only(receiver));
    log(Actor::anon(), "AOT_LEN", str_payload(std::to_string(bits.size())),
        {0, true});
    return d;
}

std::map<PlayerId, ObDelivery> Sim::ob_send(PlayerId sender, const Bits& bits) {
    std::map<PlayerId, ObDelivery> out;
    log(Actor::p(sender), "OB_SEND", str_payload(bits_str(bits)),
        Visibility::only(sender));
    log(Actor::p(sender), "OB_LEN", str_payload(std::to_string(bits.size())),
        {0, true});
    for (PlayerId r = 0; r < cfg_.n; ++r) {
        if (r == sender) continue;
        ObDelivery d;
        d.bits = bits;
        d.known.resize(bits.size());
        Rng& rng = coins("ob/P" + std::to_string(r));
        for (size_t i = 0; i < bits.size(); ++i) {
            d.known[i] = static_cast<uint8_t>(rng.bit());
            if (!d.known[i]) d.bits[i] = 0;
        }
        log(Actor::p(sender), "OB_DELIVER", str_payload(pattern_str(d)),
            Visibility::only(r));
        out.emplace(r, std::move(d));
    }
    return out;
}

std::string pattern_str(const AotDelivery& d) {
    std::string s(d.bits.size(), '-');
    for (size_t i = 0; i < d.bits.size(); ++i)
        if (d.known[i]) s[i] = d.bits[i] ? '1' : '0';
    return s;
}

std::string bits_str(const Bits& b) {
    std::string s(b.size(), '0');
    for (size_t i = 0; i < b.size(); ++i)
        if (b[i]) s[i] = '1';
    return s;
}

Bits parse_bits(const std::string& s) {
    Bits b(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bad bit string");
        b[i] = s[i] == '1';
    }
    return b;
}

}  // namespace aot
