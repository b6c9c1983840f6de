#include "aot/mpc.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace aot {

int Circuit::wire_count() const {
    int mx = -1;
    for (const Gate& g : gates) mx = std::max({mx, g.a, g.b, g.out});
    return mx + 1;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

int parse_wire(const std::string& tok, int line) {
    if (tok.size() < 2 || tok[0] != 'w') parse_fail(line, "expected wire, got '" + tok + "'");
    try {
        size_t used = 0;
        int id = std::stoi(tok.substr(1), &used);
        if (used != tok.size() - 1 || id < 0) throw std::invalid_argument("");
        return id;
    } catch (const std::exception&) {
        parse_fail(line, "bad wire id '" + tok + "'");
    }
}

PlayerId parse_player(const std::string& tok, int line) {
    if (tok.size() < 2 || tok[0] != 'P') parse_fail(line, "expected player, got '" + tok + "'");
    try {
        size_t used = 0;
        int id = std::stoi(tok.substr(1), &used);
        if (used != tok.size() - 1 || id < 0) throw std::invalid_argument("");
        return id;
    } catch (const std::exception&) {
        parse_fail(line, "bad player id '" + tok + "'");
    }
}

}  // namespace

Circuit parse_circuit(const std::string& text) {
    Circuit c;
    std::set<int> defined;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;

        Gate g;
        if (tok[0] == "INPUT") {
            if (tok.size() != 3) parse_fail(lineno, "INPUT takes a wire and a player");
            g.kind = Gate::Input;
            g.out = parse_wire(tok[1], lineno);
            g.owner = parse_player(tok[2], lineno);
            if (!defined.insert(g.out).second) parse_fail(lineno, "wire redefined");
            c.inputs.push_back(g.out);
        } else if (tok[0] == "AND" || tok[0] == "XOR") {
            if (tok.size() != 5 || tok[3] != "->")
                parse_fail(lineno, tok[0] + " takes two wires, '->' and an output wire");
            g.kind = tok[0] == "AND" ? Gate::And : Gate::Xor;
            g.a = parse_wire(tok[1], lineno);
            g.b = parse_wire(tok[2], lineno);
            g.out = parse_wire(tok[4], lineno);
            if (!defined.count(g.a)) parse_fail(lineno, "undefined wire " + tok[1]);
            if (!defined.count(g.b)) parse_fail(lineno, "undefined wire " + tok[2]);
            if (!defined.insert(g.out).second) parse_fail(lineno, "wire redefined");
        } else if (tok[0] == "NOT") {
            if (tok.size() != 4 || tok[2] != "->")
                parse_fail(lineno, "NOT takes a wire, '->' and an output wire");
            g.kind = Gate::Not;
            g.a = parse_wire(tok[1], lineno);
            g.out = parse_wire(tok[3], lineno);
            if (!defined.count(g.a)) parse_fail(lineno, "undefined wire " + tok[1]);
            if (!defined.insert(g.out).second) parse_fail(lineno, "wire redefined");
        } else if (tok[0] == "OUTPUT") {
            if (tok.size() != 2) parse_fail(lineno, "OUTPUT takes one wire");
            g.kind = Gate::Output;
            g.out = parse_wire(tok[1], lineno);
            if (!defined.count(g.out)) parse_fail(lineno, "undefined wire " + tok[1]);
            c.outputs.push_back(g.out);
        } else {
            parse_fail(lineno, "unknown gate '" + tok[0] + "'");
        }
        c.gates.push_back(g);
    }
    if (c.outputs.empty()) throw std::runtime_error("circuit has no OUTPUT");
    return c;
}

Dbc xor_dbc(Sim& sim, Dbc& x, Dbc& y, const MpcParams& params) {
    const int n = sim.n();
    Dbc out;
    out.role = DbcRole::IntermediateResult;
    for (PlayerId p = 0; p < n; ++p) {
        int v = x.shares[p].secret_bit() ^ y.shares[p].secret_bit();
        const CheatScript* cs = sim.cheat(p, "MPC_XOR");
        if (cs && cs->action == "bad-share") v ^= 1;
        CommittedBit nb(gbcx_commit(sim, p, v, params.commit));
        Gbcx a = x.shares[p].take(sim, params.commit);
        Gbcx b = y.shares[p].take(sim, params.commit);
        Gbcx c = nb.take(sim, params.commit);
        std::vector<Gbcx*> ops{&a, &b, &c};
        prove_linear(sim, p, ops, 0, params.commit, "xor");
        out.shares.push_back(std::move(nb));
    }
    return out;
}

Dbc not_dbc(Sim& sim, Dbc& x, const MpcParams& params) {
    const int n = sim.n();
    Dbc out;
    out.role = DbcRole::IntermediateResult;
    for (PlayerId p = 0; p < n; ++p) {
        if (p == 0) {
            int v = x.shares[p].secret_bit() ^ 1;
            CommittedBit nb(gbcx_commit(sim, p, v, params.commit));
            Gbcx a = x.shares[p].take(sim, params.commit);
            Gbcx c = nb.take(sim, params.commit);
            std::vector<Gbcx*> ops{&a, &c};
            prove_linear(sim, p, ops, 1, params.commit, "not");
            out.shares.push_back(std::move(nb));
        } else {
            // remaining shares carry over unchanged
            out.shares.emplace_back(x.shares[p].take(sim, params.commit));
        }
    }
    return out;
}

void prove_product(Sim& sim, PlayerId prover, CommittedBit& a, CommittedBit& b,
                   CommittedBit& c, const MpcParams& params) {
    const std::string inst = sim.fresh_label("prod");
    Rng& prng = sim.coins(inst + "/triples");
    const CheatScript* cs = sim.cheat(prover, "PROD");
    for (int round = 0; round < params.and_proof_rounds; ++round) {
        int x = prng.bit(), y = prng.bit();
        int z = x & y;
        if (cs && cs->action == "bad-triple") z ^= 1;
        CommittedBit cx(gbcx_commit(sim, prover, x, params.commit));
        CommittedBit cy(gbcx_commit(sim, prover, y, params.commit));
        CommittedBit cz(gbcx_commit(sim, prover, z, params.commit));
        int e = coin_toss(sim, full_mask(sim.n()), 1, params.commit)[0];
        if (e == 0) {
            int vx = cx.open(sim), vy = cy.open(sim), vz = cz.open(sim);
            if (vz != (vx & vy)) {
                sim.log_public(Actor::func(), "PROD", "id=" + inst + ";bad-triple");
                throw ProtocolHalt{Outcome::cheater(prover)};
            }
            continue;
        }
        // blinded check: ab = xy + dy + ex + de with d = a+x, e = b+y
        int d = a.secret_bit() ^ x;
        int eps = b.secret_bit() ^ y;
        sim.log_public(Actor::p(prover), "PROD",
                       "id=" + inst + ";d=" + std::to_string(d) + ";e=" + std::to_string(eps));
        {
            Gbcx oa = a.take(sim, params.commit);
            Gbcx ox = cx.take(sim, params.commit);
            std::vector<Gbcx*> ops{&oa, &ox};
            prove_linear(sim, prover, ops, d, params.commit, "prod-d");
        }
        {
            Gbcx ob = b.take(sim, params.commit);
            Gbcx oy = cy.take(sim, params.commit);
            std::vector<Gbcx*> ops{&ob, &oy};
            prove_linear(sim, prover, ops, eps, params.commit, "prod-e");
        }
        std::vector<Gbcx> taken;
        taken.push_back(c.take(sim, params.commit));
        taken.push_back(cz.take(sim, params.commit));
        if (d) taken.push_back(cy.take(sim, params.commit));
        if (eps) taken.push_back(cx.take(sim, params.commit));
        std::vector<Gbcx*> ops;
        for (auto& g : taken) ops.push_back(&g);
        prove_linear(sim, prover, ops, d & eps, params.commit, "prod-c");
    }
}

Dbc and_dbc(Sim& sim, Dbc& x, Dbc& y, const MpcParams& params) {
    const int n = sim.n();
    // terms[p]: committed bits whose XOR is player p's new share
    std::vector<std::vector<CommittedBit>> terms(n);

    for (PlayerId i = 0; i < n; ++i) {
        // diagonal term: local product with a cut-and-choose proof
        int d = x.shares[i].secret_bit() & y.shares[i].secret_bit();
        const CheatScript* cs = sim.cheat(i, "MPC_AND");
        if (cs && cs->action == "wrong-product") d ^= 1;
        CommittedBit cd(gbcx_commit(sim, i, d, params.commit));
        prove_product(sim, i, x.shares[i], y.shares[i], cd, params);
        terms[i].push_back(std::move(cd));

        // cross terms x_i * y_j via committed OT, one per other player
        for (PlayerId j = 0; j < n; ++j) {
            if (j == i) continue;
            Rng& rrng = sim.coins(sim.fresh_label("and-r"));
            int r = rrng.bit();
            CommittedBit u0(gbcx_commit(sim, i, r, params.commit));
            CommittedBit u1(gbcx_commit(sim, i, r ^ x.shares[i].secret_bit(), params.commit));
            {
                Gbcx o0 = u0.take(sim, params.commit);
                Gbcx o1 = u1.take(sim, params.commit);
                Gbcx oa = x.shares[i].take(sim, params.commit);
                std::vector<Gbcx*> ops{&o0, &o1, &oa};
                prove_linear(sim, i, ops, 0, params.commit, "and-blind");
            }
            GcotResult tr = gcot(sim, i, u0, u1, j, y.shares[j], params.gcot, params.commit);
            if (!tr.outcome.ok()) throw ProtocolHalt{tr.outcome};
            terms[i].push_back(std::move(u0));  // r cancels against Bob's r ^ x_i y_j
            terms[j].push_back(std::move(tr.out));
        }
    }

    Dbc out;
    out.role = DbcRole::IntermediateResult;
    for (PlayerId p = 0; p < n; ++p) {
        int v = 0;
        for (CommittedBit& t : terms[p]) v ^= t.secret_bit();
        CommittedBit nb(gbcx_commit(sim, p, v, params.commit));
        std::vector<Gbcx> taken;
        for (CommittedBit& t : terms[p]) taken.push_back(t.take(sim, params.commit));
        taken.push_back(nb.take(sim, params.commit));
        std::vector<Gbcx*> ops;
        for (auto& g : taken) ops.push_back(&g);
        prove_linear(sim, p, ops, 0, params.commit, "and-share");
        out.shares.push_back(std::move(nb));
    }
    return out;
}

MpcSession run_protocol(Sim& sim, const Circuit& circuit,
                        const std::map<int, int>& input_bits, const MpcParams& params) {
    MpcSession session;
    try {
        sim.log_public(Actor::func(), "MPC_PHASE",
                       "init;gbc_k=" + std::to_string(params.commit.gbc.k) +
                           ";gbc_m=" + std::to_string(params.commit.gbc.m) +
                           ";mx=" + std::to_string(params.commit.mx) +
                           ";gcot_m=" + std::to_string(params.gcot.m) +
                           ";sigma=" + std::to_string(params.gcot.sigma));
        for (const Gate& g : circuit.gates) {
            if (g.kind != Gate::Input) continue;
            auto it = input_bits.find(g.out);
            if (it == input_bits.end())
                throw std::runtime_error("no input bit for wire w" + std::to_string(g.out));
            session.wires.emplace(g.out,
                                  dbc_create_user(sim, g.owner, it->second, params.commit));
        }
        sim.log_public(Actor::func(), "MPC_PHASE", "compute");
        std::vector<int> out_bits;
        for (const Gate& g : circuit.gates) {
            switch (g.kind) {
                case Gate::Input:
                    break;
                case Gate::Xor:
                    session.wires.emplace(
                        g.out, xor_dbc(sim, session.wires.at(g.a), session.wires.at(g.b), params));
                    break;
                case Gate::And:
                    session.wires.emplace(
                        g.out, and_dbc(sim, session.wires.at(g.a), session.wires.at(g.b), params));
                    break;
                case Gate::Not:
                    session.wires.emplace(g.out, not_dbc(sim, session.wires.at(g.a), params));
                    break;
                case Gate::Output:
                    break;
            }
        }
        sim.log_public(Actor::func(), "MPC_PHASE", "reveal;fairness=simplified");
        // round-robin share opening, one output wire at a time
        for (int w : circuit.outputs) {
            Dbc& dbc = session.wires.at(w);
            int v = 0;
            for (PlayerId p = 0; p < sim.n(); ++p) {
                const CheatScript* cs = sim.cheat(p, "REVEAL");
                if (cs && cs->action == "withhold") {
                    sim.log_public(Actor::p(p), "REVEAL", "w" + std::to_string(w) + ";refused");
                    throw ProtocolHalt{Outcome::cheater(p)};
                }
                v ^= dbc.shares[p].open(sim);
            }
            sim.log_public(Actor::func(), "OUTPUT",
                           "w" + std::to_string(w) + "=" + std::to_string(v));
            out_bits.push_back(v);
        }
        session.outcome = Outcome::success(out_bits);
    } catch (const ProtocolHalt& halt) {
        session.outcome = halt.outcome;
    }
    return session;
}

}  // namespace aot
