#include "aot/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aot/broadcast.hpp"
#include "aot/commit.hpp"
#include "aot/ot.hpp"

namespace aot {

namespace {

[[noreturn]] void cfg_fail(int line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long parse_int(const std::string& v, int line) {
    try {
        size_t used = 0;
        long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        cfg_fail(line, "expected integer, got '" + v + "'");
    }
}

double parse_double(const std::string& v, int line) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        cfg_fail(line, "expected number, got '" + v + "'");
    }
}

PlayerId parse_player(const std::string& v, int line) {
    if (v.size() < 2 || v[0] != 'P') cfg_fail(line, "expected player 'P<id>', got '" + v + "'");
    return static_cast<PlayerId>(parse_int(v.substr(1), line));
}

PlayerMask parse_player_set(const std::string& v, int line) {
    PlayerMask m = 0;
    std::istringstream in(v);
    std::string tok;
    while (std::getline(in, tok, ',')) m = with_player(m, parse_player(trim(tok), line));
    return m;
}

GbcOrigin parse_origin(const std::string& v, int line) {
    if (v == "ob") return GbcOrigin::ObliviousBroadcast;
    if (v == "aot") return GbcOrigin::AotAnonymous;
    cfg_fail(line, "origin must be 'ob' or 'aot'");
}

// value of `key=` inside a ';'-separated payload, or "" when absent
std::string kv(const std::string& payload, const std::string& key) {
    size_t pos = 0;
    while (pos < payload.size()) {
        size_t end = payload.find(';', pos);
        if (end == std::string::npos) end = payload.size();
        std::string item = payload.substr(pos, end - pos);
        size_t eq = item.find('=');
        if (eq != std::string::npos && item.substr(0, eq) == key) return item.substr(eq + 1);
        pos = end + 1;
    }
    return "";
}

int count_items(const std::string& csv) {
    if (csv.empty()) return 0;
    int c = 1;
    for (char ch : csv)
        if (ch == ',') ++c;
    return c;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& base_dir) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    int lineno = 0;
    CheatScript cheat;
    bool in_cheat = false;
    std::vector<PlayerMask> declared;
    PlayerMask collusion = 0;
    bool has_collusion = false;
    int collusion_line = 0;

    auto flush_cheat = [&] {
        if (in_cheat) {
            cfg.cheats.push_back(cheat);
            cheat = CheatScript{};
            in_cheat = false;
        }
    };

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            flush_cheat();
            section = line.substr(1, line.size() - 2);
            if (section == "cheat") in_cheat = true;
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) cfg_fail(lineno, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));

        if (section == "scenario") {
            if (key == "name") cfg.name = val;
            else if (key == "protocol") cfg.protocol = val;
            else if (key == "n") cfg.n = static_cast<int>(parse_int(val, lineno));
            else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_int(val, lineno));
            else if (key == "expect") cfg.expect = val;
            else cfg_fail(lineno, "unknown [scenario] key '" + key + "'");
        } else if (section == "params") {
            if (key == "gbc_k") cfg.mpc.commit.gbc.k = static_cast<int>(parse_int(val, lineno));
            else if (key == "gbc_m") cfg.mpc.commit.gbc.m = static_cast<int>(parse_int(val, lineno));
            else if (key == "coin_k") cfg.mpc.commit.coin.k = static_cast<int>(parse_int(val, lineno));
            else if (key == "coin_m") cfg.mpc.commit.coin.m = static_cast<int>(parse_int(val, lineno));
            else if (key == "mx") cfg.mpc.commit.mx = static_cast<int>(parse_int(val, lineno));
            else if (key == "origin") cfg.mpc.commit.origin = parse_origin(val, lineno);
            else if (key == "gcot_m") cfg.mpc.gcot.m = static_cast<int>(parse_int(val, lineno));
            else if (key == "gcot_sigma") cfg.mpc.gcot.sigma = parse_double(val, lineno);
            else if (key == "gcot_epsilon") cfg.mpc.gcot.epsilon = parse_double(val, lineno);
            else if (key == "uot_batch") cfg.mpc.gcot.uot_batch = static_cast<int>(parse_int(val, lineno));
            else if (key == "uot_origin") cfg.mpc.gcot.uot_origin = parse_origin(val, lineno);
            else if (key == "and_rounds") cfg.mpc.and_proof_rounds = static_cast<int>(parse_int(val, lineno));
            else if (key == "field_degree") cfg.bcast.field_degree = static_cast<int>(parse_int(val, lineno));
            else if (key == "bcast_l") cfg.bcast.l = static_cast<int>(parse_int(val, lineno));
            else if (key == "bcast_r") cfg.bcast.r = static_cast<int>(parse_int(val, lineno));
            else if (key == "cheat_threshold") cfg.bcast.cheat_threshold = parse_double(val, lineno);
            else if (key == "max_rounds") cfg.bcast.max_rounds = static_cast<int>(parse_int(val, lineno));
            else cfg_fail(lineno, "unknown [params] key '" + key + "'");
        } else if (section == "circuit") {
            if (key == "file")
                cfg.circuit_file = (std::filesystem::path(base_dir) / val).string();
            else cfg_fail(lineno, "unknown [circuit] key '" + key + "'");
        } else if (section == "inputs") {
            if (key.size() < 2 || key[0] != 'w') cfg_fail(lineno, "input keys are 'w<id>'");
            int wire = static_cast<int>(parse_int(key.substr(1), lineno));
            long b = parse_int(val, lineno);
            if (b != 0 && b != 1) cfg_fail(lineno, "input bits are 0 or 1");
            cfg.inputs[wire] = static_cast<int>(b);
        } else if (section == "adversary") {
            if (key == "structure") {
                std::istringstream ss(val);
                std::string set;
                while (ss >> set) declared.push_back(parse_player_set(set, lineno));
            } else if (key == "collusion") {
                collusion = parse_player_set(val, lineno);
                has_collusion = true;
                collusion_line = lineno;
            } else cfg_fail(lineno, "unknown [adversary] key '" + key + "'");
        } else if (section == "cheat") {
            if (key == "actor") cheat.actor = parse_player(val, lineno);
            else if (key == "hook") cheat.hook = val;
            else if (key == "action") cheat.action = val;
            else if (key == "arg") cheat.arg = val;
            else cfg_fail(lineno, "unknown [cheat] key '" + key + "'");
        } else if (section.empty()) {
            cfg_fail(lineno, "key before any [section]");
        } else {
            cfg.extra[section + "." + key] = val;
        }
    }
    flush_cheat();

    if (cfg.n < 2) throw std::runtime_error("n must be at least 2");
    if (!declared.empty()) {
        AdversaryStructure a = monotone_close(declared, cfg.n);
        cfg.structure.assign(a.sets.begin(), a.sets.end());
        PlayerMask actors = 0;
        for (const CheatScript& c : cfg.cheats) actors = with_player(actors, c.actor);
        if (has_collusion) {
            if ((actors & ~collusion) != 0)
                cfg_fail(collusion_line, "cheat actors outside the declared collusion");
            actors = collusion;
        }
        if (actors && !a.contains(actors))
            throw std::runtime_error("collusion not in the adversary structure");
    }
    for (const CheatScript& c : cfg.cheats)
        if (c.actor < 0 || c.actor >= cfg.n)
            throw std::runtime_error("cheat actor out of range");
    cfg.mpc.commit.bcast = cfg.bcast;
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), std::filesystem::path(path).parent_path().string());
}

bool outcome_matches(const Outcome& o, const std::string& expect) {
    if (expect.empty() || expect == "any") return true;
    size_t colon = expect.find(':');
    std::string kind = expect.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : expect.substr(colon + 1);
    if (kind == "success") {
        if (o.kind != Outcome::Success) return false;
        if (arg.empty()) return true;
        if (o.result.size() != arg.size()) return false;
        for (size_t i = 0; i < arg.size(); ++i)
            if ((arg[i] == '1') != (o.result[i] != 0)) return false;
        return true;
    }
    if (kind == "cheater") {
        if (o.kind != Outcome::CheaterIdentified) return false;
        return arg.empty() || o.culprit == parse_player(arg, 0);
    }
    if (kind == "split") return o.kind == Outcome::GroupSplit;
    if (kind == "abort") return o.kind == Outcome::Aborted;
    throw std::runtime_error("bad expect value: " + expect);
}

namespace {

int extra_int(const ScenarioConfig& cfg, const std::string& key, int dflt) {
    auto it = cfg.extra.find(key);
    return it == cfg.extra.end() ? dflt : std::stoi(it->second);
}

std::string extra_str(const ScenarioConfig& cfg, const std::string& key,
                      const std::string& dflt) {
    auto it = cfg.extra.find(key);
    return it == cfg.extra.end() ? dflt : it->second;
}

PlayerId extra_player(const ScenarioConfig& cfg, const std::string& key, PlayerId dflt) {
    auto it = cfg.extra.find(key);
    if (it == cfg.extra.end()) return dflt;
    return parse_player(it->second, 0);
}

Outcome dispatch(Sim& sim, const ScenarioConfig& cfg) {
    const CommitParams& cp = cfg.mpc.commit;
    if (cfg.protocol == "mpc") {
        if (cfg.circuit_file.empty()) throw std::runtime_error("mpc scenario needs a circuit");
        std::ifstream in(cfg.circuit_file);
        if (!in) throw std::runtime_error("cannot open circuit: " + cfg.circuit_file);
        std::stringstream buf;
        buf << in.rdbuf();
        Circuit circuit = parse_circuit(buf.str());
        return run_protocol(sim, circuit, cfg.inputs, cfg.mpc).outcome;
    }
    if (cfg.protocol == "gcot") {
        PlayerId alice = extra_player(cfg, "gcot.alice", 0);
        PlayerId bob = extra_player(cfg, "gcot.bob", 1);
        CommittedBit x0(gbcx_commit(sim, alice, extra_int(cfg, "gcot.x0", 0), cp));
        CommittedBit x1(gbcx_commit(sim, alice, extra_int(cfg, "gcot.x1", 0), cp));
        CommittedBit sel(gbcx_commit(sim, bob, extra_int(cfg, "gcot.sel", 0), cp));
        return gcot(sim, alice, x0, x1, bob, sel, cfg.mpc.gcot, cp).outcome;
    }
    if (cfg.protocol == "broadcast") {
        PlayerId sender = extra_player(cfg, "broadcast.sender", 0);
        Bits msg = parse_bits(extra_str(cfg, "broadcast.message", "1"));
        return authenticated_broadcast(sim, sender, msg, cfg.bcast);
    }
    if (cfg.protocol == "anonbcast") {
        PlayerId sender = extra_player(cfg, "anonbcast.sender", 0);
        Bits msg = parse_bits(extra_str(cfg, "anonbcast.message", "1"));
        return anonymous_broadcast(sim, sender, msg, cfg.bcast).outcome;
    }
    if (cfg.protocol == "gbc") {
        PlayerId committer = extra_player(cfg, "gbc.committer", 0);
        Gbc g = gbc_commit(sim, committer, extra_int(cfg, "gbc.bit", 0), cp, cp.origin);
        return Outcome::success({gbc_open(sim, g)});
    }
    if (cfg.protocol == "gbcx") {
        PlayerId committer = extra_player(cfg, "gbcx.committer", 0);
        CommittedBit cb(gbcx_commit(sim, committer, extra_int(cfg, "gbcx.bit", 0), cp));
        if (extra_int(cfg, "gbcx.copies", 0) > 0) {
            Gbcx split = cb.take(sim, cp);  // exercises the copy procedure
            std::vector<Gbcx*> ops{&split};
            prove_linear(sim, committer, ops, cb.secret_bit(), cp, "scenario-copy");
        }
        return Outcome::success({cb.open(sim)});
    }
    if (cfg.protocol == "anon_gbcx")
        return anonymous_gbcx_round(sim, cp, extra_int(cfg, "anon_gbcx.l", 2));
    if (cfg.protocol == "dbc") {
        PlayerId owner = extra_player(cfg, "dbc.owner", 0);
        Dbc d = dbc_create_user(sim, owner, extra_int(cfg, "dbc.bit", 0), cp);
        int v = 0;
        for (auto& share : d.shares) v ^= share.open(sim);
        return Outcome::success({v});
    }
    if (cfg.protocol == "coin") {
        Bits b = coin_toss(sim, full_mask(sim.n()), extra_int(cfg, "coin.nbits", 8), cp);
        return Outcome::success({b.begin(), b.end()});
    }
    if (cfg.protocol == "obcover") {
        PlayerId sender = extra_player(cfg, "obcover.sender", 0);
        int m = extra_int(cfg, "obcover.m", 8);
        int repeats = extra_int(cfg, "obcover.repeats", 100);
        Rng& rng = sim.coins("obcover/payload");
        for (int i = 0; i < repeats; ++i) sim.ob_send(sender, rng.bits(m));
        return Outcome::success();
    }
    if (cfg.protocol == "uotbatch") {
        PlayerId alice = extra_player(cfg, "uotbatch.alice", 0);
        PlayerId bob = extra_player(cfg, "uotbatch.bob", 1);
        int repeats = extra_int(cfg, "uotbatch.repeats", 100);
        Rng& rng = sim.coins("uotbatch/bits");
        for (int i = 0; i < repeats; ++i) uot(sim, alice, bob, rng.bit(), cp, cp.origin);
        return Outcome::success();
    }
    throw std::runtime_error("unknown protocol: " + cfg.protocol);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    Sim sim({cfg.n, cfg.seed}, cfg.cheats);
    Outcome o;
    try {
        o = dispatch(sim, cfg);
    } catch (const ProtocolHalt& halt) {
        o = halt.outcome;
    }
    sim.log_public(Actor::func(), "OUTCOME", to_string(o));
    RunResult res;
    res.outcome = std::move(o);
    res.transcript = sim.transcript().serialize();
    res.expectation_met = outcome_matches(res.outcome, cfg.expect);
    return res;
}

std::vector<std::string> verify_transcript(const std::string& transcript,
                                           const ScenarioConfig& cfg) {
    std::vector<std::string> findings;
    std::vector<EventRecord> events;
    std::istringstream in(transcript);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            events.push_back(Transcript::parse_event(line));
        } catch (const std::exception& e) {
            findings.push_back("line " + std::to_string(lineno) + ": unparseable event");
        }
    }

    const int gm = cfg.mpc.gcot.m;
    const int sm = std::max(1, static_cast<int>(std::lround(cfg.mpc.gcot.sigma * gm)));

    std::string pend_tag, pend_d;
    int pend_t = 0;
    bool outcome_seen = false;
    for (size_t i = 0; i < events.size(); ++i) {
        const EventRecord& ev = events[i];
        std::string payload = payload_str(ev.payload);
        if (ev.kind == "PROOF") {
            if (ev.actor.kind == Actor::Player && !kv(payload, "d").empty()) {
                pend_tag = kv(payload, "tag");
                pend_d = kv(payload, "d");
                pend_t = kv(payload, "t") == "1" ? 1 : 0;
            } else if (ev.actor.kind == Actor::Functionality) {
                std::string e = kv(payload, "e"), x = kv(payload, "x");
                std::string verdict = kv(payload, "verdict");
                if (kv(payload, "tag") != pend_tag || e.size() != pend_d.size() ||
                    x.size() != pend_d.size()) {
                    findings.push_back("proof event without matching announcement: " +
                                       kv(payload, "tag"));
                    continue;
                }
                bool ok = true;
                for (size_t j = 0; j < e.size(); ++j) {
                    int expect = (pend_d[j] - '0') ^ (e[j] == '1' ? pend_t : 0);
                    if (x[j] - '0' != expect) ok = false;
                }
                if (ok != (verdict == "ok"))
                    findings.push_back("proof verdict inconsistent with opened bits: tag=" +
                                       pend_tag);
            }
        } else if (ev.kind == "GBC_OPEN") {
            std::string id = kv(payload, "id");
            // payload after "id=..;" is "P<j>=<strings>|P<j>=..."
            size_t semi = payload.find(';');
            std::string rest = semi == std::string::npos ? "" : payload.substr(semi + 1);
            int parity = -1;
            bool consistent = true;
            std::istringstream ps(rest);
            std::string per_player;
            while (std::getline(ps, per_player, '|')) {
                // AOT origin groups strings as "P<j>=...", OB origin has one
                // shared set with no prefix
                size_t eq = per_player.find('=');
                std::istringstream ss(eq == std::string::npos ? per_player
                                                              : per_player.substr(eq + 1));
                std::string str;
                while (ss >> str) {
                    int p = 0;
                    for (char c : str) p ^= (c == '1');
                    if (parity == -1) parity = p;
                    if (p != parity) consistent = false;
                }
            }
            if (!consistent) {
                // a mismatch the protocol itself caught shows up as an ACCUSE
                bool accused = false;
                for (size_t j = i + 1; j < events.size() && j < i + 4; ++j)
                    if (events[j].kind == "ACCUSE" &&
                        kv(payload_str(events[j].payload), "gbc") == id)
                        accused = true;
                if (!accused)
                    findings.push_back("opened commitment with inconsistent parity: id=" + id);
            }
        } else if (ev.kind == "GCOT_STEP1") {
            std::string code = kv(payload, "code");
            size_t c1 = code.find(','), c2 = code.find(',', c1 + 1);
            if (c1 != std::string::npos && c2 != std::string::npos) {
                int m = std::stoi(code.substr(0, c1));
                int k = std::stoi(code.substr(c1 + 1, c2 - c1 - 1));
                int want_k = static_cast<int>(std::floor((0.5 + 2 * cfg.mpc.gcot.sigma) * m)) + 1;
                if (m != gm) findings.push_back("committed-OT code length differs from config");
                if (k != want_k) findings.push_back("committed-OT code dimension off");
            }
        } else if (ev.kind == "GCOT_STEP4") {
            if (count_items(kv(payload, "I")) != 2 * sm)
                findings.push_back("opened index set |I| != 2*sigma*m");
        } else if (ev.kind == "GCOT_STEP6") {
            if (count_items(kv(payload, "I2")) != sm)
                findings.push_back("audit set |I2| != sigma*m");
        } else if (ev.kind == "OUTCOME") {
            outcome_seen = true;
            if (payload.rfind("success", 0) != 0 && payload.rfind("cheater", 0) != 0 &&
                payload.rfind("split", 0) != 0 && payload.rfind("aborted", 0) != 0)
                findings.push_back("unrecognized outcome: " + payload);
        }
    }
    if (!outcome_seen) findings.push_back("transcript ends without an outcome");
    return findings;
}

std::string stats_table(const std::vector<std::string>& transcripts) {
    std::ostringstream out;
    out << "files\tevents\taot_bits\taot_rate\tuot_runs\tuot_rate\tob_msgs\tob_cover_rate"
           "\tproofs\tproof_fail\tsuccess\tcheater\tsplit\tabort\tidentify_ok\tidentify_fail\n";
    if (transcripts.empty()) return out.str();

    long events = 0, aot_bits = 0, aot_known = 0, uot_runs = 0, uot_known = 0;
    long ob_msgs = 0, ob_covered = 0, proofs = 0, proof_fail = 0;
    long n_success = 0, n_cheater = 0, n_split = 0, n_abort = 0;
    long id_ok = 0, id_fail = 0;

    for (const std::string& t : transcripts) {
        std::istringstream in(t);
        std::string line;
        std::vector<uint8_t> cover;
        bool in_ob = false;
        auto flush_ob = [&] {
            if (!in_ob) return;
            ++ob_msgs;
            bool full = !cover.empty();
            for (uint8_t c : cover) full = full && c;
            if (full) ++ob_covered;
            in_ob = false;
        };
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            EventRecord ev = Transcript::parse_event(line);
            ++events;
            std::string payload = payload_str(ev.payload);
            if (ev.kind != "OB_DELIVER" && ev.kind != "OB_LEN") flush_ob();
            if (ev.kind == "AOT") {
                for (char c : payload) {
                    ++aot_bits;
                    if (c != '-') ++aot_known;
                }
            } else if (ev.kind == "UOT_RESULT") {
                ++uot_runs;
                if (kv(payload, "known") == "1") ++uot_known;
            } else if (ev.kind == "OB_SEND") {
                cover.assign(payload.size(), 0);
                in_ob = true;
            } else if (ev.kind == "OB_DELIVER") {
                for (size_t i = 0; i < payload.size() && i < cover.size(); ++i)
                    if (payload[i] != '-') cover[i] = 1;
            } else if (ev.kind == "PROOF" && ev.actor.kind == Actor::Functionality) {
                ++proofs;
                if (kv(payload, "verdict") == "fail") ++proof_fail;
            } else if (ev.kind == "IDENTIFY" && !kv(payload, "accepted").empty()) {
                if (kv(payload, "accepted") == "1") ++id_ok;
                else ++id_fail;
            } else if (ev.kind == "OUTCOME") {
                if (payload.rfind("success", 0) == 0) ++n_success;
                else if (payload.rfind("cheater", 0) == 0) ++n_cheater;
                else if (payload.rfind("split", 0) == 0) ++n_split;
                else if (payload.rfind("aborted", 0) == 0) ++n_abort;
            }
        }
        flush_ob();
    }

    auto rate = [](long num, long den) {
        if (den == 0) return std::string("-");
        std::ostringstream s;
        s.precision(6);
        s << std::fixed << static_cast<double>(num) / static_cast<double>(den);
        return s.str();
    };
    out << transcripts.size() << '\t' << events << '\t' << aot_bits << '\t'
        << rate(aot_known, aot_bits) << '\t' << uot_runs << '\t' << rate(uot_known, uot_runs)
        << '\t' << ob_msgs << '\t' << rate(ob_covered, ob_msgs) << '\t' << proofs << '\t'
        << proof_fail << '\t' << n_success << '\t' << n_cheater << '\t' << n_split << '\t'
        << n_abort << '\t' << id_ok << '\t' << id_fail << '\n';
    return out.str();
}

}  // namespace aot
