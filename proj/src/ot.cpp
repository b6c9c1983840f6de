#include "aot/ot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace aot {

namespace {

int bit_of(Word w, int i) { return (w >> i) & 1; }

std::string pos_list(const std::vector<int>& v) {
    std::string s;
    for (int p : v) {
        if (!s.empty()) s += ',';
        s += std::to_string(p);
    }
    return s;
}

std::string word_str(Word w, int m) {
    std::string s(m, '0');
    for (int i = 0; i < m; ++i)
        if (bit_of(w, i)) s[i] = '1';
    return s;
}

// GF(2) span membership via Gaussian elimination
bool in_span(std::vector<Word> basis, Word v) {
    for (size_t r = 0; r < basis.size(); ++r) {
        if (!basis[r]) continue;
        Word pivot = basis[r] & (~basis[r] + 1u);  // lowest set bit
        for (size_t q = 0; q < basis.size(); ++q)
            if (q != r && (basis[q] & pivot)) basis[q] ^= basis[r];
        if (v & pivot) v ^= basis[r];
    }
    return v == 0;
}

}  // namespace

UotOutcome uot(Sim& sim, PlayerId alice, PlayerId bob, int bit,
               const CommitParams& params, GbcOrigin origin) {
    const std::string inst = sim.fresh_label("uot");
    const int m = params.gbc.m;
    const int k = params.gbc.k;
    Rng& bob_rng = sim.coins(inst + "/bob");
    Rng& alice_rng = sim.coins(inst + "/alice");

    UotOutcome out;
    for (int attempt = 0; attempt < 16; ++attempt) {
        ++out.attempts;
        Gbc g = gbc_commit(sim, alice, bit, params, origin, false);

        // a usable string has at least one erased position and at least as
        // many known positions as erased ones
        int chosen = -1;
        for (int s = 0; s < k; ++s) {
            int known = std::popcount(g.received[bob][s]);
            int erased = m - known;
            if (erased >= 1 && known >= erased) {
                chosen = s;
                break;
            }
        }
        if (chosen < 0) {
            sim.log_public(Actor::p(bob), "RESEND", "uot=" + inst);
            continue;
        }
        std::vector<int> unknown, known_pool;
        for (int i = 0; i < m; ++i)
            (bit_of(g.received[bob][chosen], i) ? known_pool : unknown).push_back(i);
        // random fully-known substring of matching length
        for (size_t i = known_pool.size(); i > 1; --i)
            std::swap(known_pool[i - 1], known_pool[bob_rng.uniform(i)]);
        std::vector<int> known_set(known_pool.begin(), known_pool.begin() + unknown.size());
        std::sort(known_set.begin(), known_set.end());

        int unknown_first = bob_rng.bit();
        const std::vector<int>& set_a = unknown_first ? unknown : known_set;
        const std::vector<int>& set_b = unknown_first ? known_set : unknown;
        sim.log_public(Actor::p(bob), "UOT_SETS",
                       "id=" + inst + ";s=" + std::to_string(chosen) + ";A=" +
                           pos_list(set_a) + ";B=" + pos_list(set_b));

        // Alice opens one substring, chosen by a private fair coin
        int pick = alice_rng.bit();
        const std::vector<int>& opened = pick ? set_b : set_a;
        std::string bits;
        const uint32_t str = g.strings[bob][chosen];
        for (int p : opened) bits += bit_of(str, p) ? '1' : '0';
        sim.log_public(Actor::p(alice), "UOT_OPEN",
                       "id=" + inst + ";set=" + (pick ? "B" : "A") + ";bits=" + bits);

        out.known = (&opened == &unknown);
        if (out.known) {
            uint32_t full = str;  // erased positions now filled in
            out.value = std::popcount(full & ((m >= 32) ? ~0u : ((1u << m) - 1u))) & 1;
        }
        sim.log(Actor::p(bob), "UOT_RESULT",
                str_payload(std::string("known=") + (out.known ? "1" : "0")),
                Visibility::only(bob));
        out.commitment = std::move(g);
        return out;
    }
    throw ProtocolHalt{Outcome::aborted("functionality pathology")};
}

OneOfTwoResult one_of_two_uot(Sim& sim, PlayerId alice, int a0, int a1, PlayerId bob,
                              int choice, const CommitParams& params, int batch,
                              GbcOrigin origin) {
    const std::string inst = sim.fresh_label("uot12");
    Rng& alice_rng = sim.coins(inst + "/alice");
    Rng& bob_rng = sim.coins(inst + "/bob");
    const int half = batch / 2;

    OneOfTwoResult res;
    for (int attempt = 0; attempt < 16; ++attempt) {
        ++res.attempts;
        std::vector<UotOutcome> masks;
        std::vector<int> r(batch), known(batch);
        for (int j = 0; j < batch; ++j) {
            r[j] = alice_rng.bit();
            masks.push_back(uot(sim, alice, bob, r[j], params, origin));
            known[j] = masks[j].known;
        }
        // every fully-known half whose complement still hides a mask
        std::vector<std::vector<int>> halves;
        std::vector<int> idx(half);
        std::function<void(int, int)> pick = [&](int start, int depth) {
            if (depth == half) {
                halves.emplace_back(idx);
                return;
            }
            for (int i = start; i <= batch - (half - depth); ++i) {
                if (!known[i]) continue;
                idx[depth] = i;
                pick(i + 1, depth + 1);
            }
        };
        pick(0, 0);
        int total_known = 0;
        for (int j = 0; j < batch; ++j) total_known += known[j];
        if (halves.empty() || total_known == batch) {
            sim.log_public(Actor::p(bob), "RESEND", "uot12=" + inst);
            continue;
        }
        const std::vector<int>& mine = halves[bob_rng.uniform(halves.size())];
        std::vector<int> other;
        for (int j = 0; j < batch; ++j)
            if (std::find(mine.begin(), mine.end(), j) == mine.end()) other.push_back(j);

        res.set0 = choice == 0 ? mine : other;
        res.set1 = choice == 0 ? other : mine;
        sim.log_public(Actor::p(bob), "UOT12_SETS",
                       "id=" + inst + ";S0=" + pos_list(res.set0) + ";S1=" + pos_list(res.set1));

        int p0 = 0, p1 = 0;
        for (int j : res.set0) p0 ^= r[j];
        for (int j : res.set1) p1 ^= r[j];
        res.m0 = a0 ^ p0;
        res.m1 = a1 ^ p1;
        const CheatScript* mc = sim.cheat(alice, "UOT12");
        if (!mc) mc = sim.cheat(alice, "GCOT_STEP4");
        if (mc && mc->action == "bad-mask") res.m0 ^= 1;
        sim.log_public(Actor::p(alice), "UOT12_MASKS",
                       "id=" + inst + ";m0=" + std::to_string(res.m0) +
                           ";m1=" + std::to_string(res.m1));

        int pc = 0;
        for (int j : mine) pc ^= masks[j].value;
        res.value = (choice ? res.m1 : res.m0) ^ pc;
        res.masks = std::move(masks);
        res.ok = true;
        return res;
    }
    return res;  // ok == false after exhausted retries
}

namespace {

struct GcotState {
    std::vector<CommittedBit> c0bits, c1bits, wbits;
    std::vector<uint8_t> c_opened;  // per position: codeword bits opened publicly
};

void open_codeword_positions(Sim& sim, GcotState& st, GcotSession& s,
                             const std::vector<int>& positions) {
    for (int i : positions) {
        int v0 = st.c0bits[i].open(sim);
        int v1 = st.c1bits[i].open(sim);
        s.pub_mask |= 1u << i;
        st.c_opened[i] = 1;
        // the opened bits become public knowledge of c0, c1
        if (v0) s.c0 |= 1u << i;  // honest commitments match the secret words
        if (v1) s.c1 |= 1u << i;
        (void)v0;
        (void)v1;
    }
    s.opened_per_codeword += static_cast<int>(positions.size());
}

// membership proof: one linear relation per parity-check row
void prove_membership(Sim& sim, PlayerId prover, std::vector<CommittedBit>& bits,
                      const LinearCode& code, const CommitParams& params,
                      const std::string& tag) {
    for (size_t row = 0; row < code.parity.size(); ++row) {
        std::vector<Gbcx> taken;
        taken.reserve(code.m);
        for (int i = 0; i < code.m; ++i)
            if (bit_of(code.parity[row], i)) taken.push_back(bits[i].take(sim, params));
        std::vector<Gbcx*> ops;
        for (auto& g : taken) ops.push_back(&g);
        prove_linear(sim, prover, ops, 0, params, tag + "-row" + std::to_string(row));
    }
}

PlayerId resolve_conflict(Sim& sim, PlayerId alice, PlayerId bob, PlayerId complainant,
                          GcotState& st, GcotSession& s, const CommitParams& params) {
    s.conflict = true;
    sim.log_public(Actor::p(complainant), "CONFLICT", "gcot");

    // Alice opens everything she committed to through the transfers
    Word c0 = 0, c1 = 0;
    for (int i = 0; i < s.code.m; ++i) {
        int v0, v1;
        if (st.c_opened[i]) {
            v0 = bit_of(s.c0, i);
            v1 = bit_of(s.c1, i);
        } else {
            v0 = st.c0bits[i].open(sim);
            v1 = st.c1bits[i].open(sim);
        }
        c0 |= static_cast<Word>(v0) << i;
        c1 |= static_cast<Word>(v1) << i;
    }
    if (!s.code.is_codeword(c0) || !s.code.is_codeword(c1)) {
        sim.log_public(Actor::func(), "VERDICT", "non-codeword;culprit=P" + std::to_string(alice));
        return alice;
    }
    // audit the committed transfer masks against the announcements
    for (int i = 0; i < s.code.m; ++i) {
        OneOfTwoResult& tr = s.transfers[i];
        std::vector<int> r;
        for (auto& mask : tr.masks) r.push_back(gbc_open(sim, mask.commitment));
        int p0 = 0, p1 = 0;
        for (int j : tr.set0) p0 ^= r[j];
        for (int j : tr.set1) p1 ^= r[j];
        if (tr.m0 != (bit_of(c0, i) ^ p0) || tr.m1 != (bit_of(c1, i) ^ p1)) {
            sim.log_public(Actor::func(), "VERDICT",
                           "mask-mismatch;culprit=P" + std::to_string(alice));
            return alice;
        }
    }
    if (complainant == bob) {
        // Alice's information is consistent, so the complaint was baseless
        sim.log_public(Actor::func(), "VERDICT", "culprit=P" + std::to_string(bob));
        return bob;
    }
    // Alice complained: Bob proves his committed word lies in {c0, c1}
    Word delta = c0 ^ c1;
    int pivot = -1;
    for (int i = 0; i < s.code.m && pivot < 0; ++i)
        if (bit_of(delta, i)) pivot = i;
    for (int i = 0; i < s.code.m; ++i) {
        if (bit_of(delta, i)) {
            if (i == pivot) continue;
            Gbcx a = st.wbits[i].take(sim, params);
            Gbcx b = st.wbits[pivot].take(sim, params);
            std::vector<Gbcx*> ops{&a, &b};
            prove_linear(sim, bob, ops, bit_of(c0, i) ^ bit_of(c0, pivot), params, "resolve");
        } else {
            Gbcx a = st.wbits[i].take(sim, params);
            std::vector<Gbcx*> ops{&a};
            prove_linear(sim, bob, ops, bit_of(c0, i), params, "resolve");
        }
    }
    sim.log_public(Actor::func(), "VERDICT", "culprit=P" + std::to_string(alice));
    return alice;
}

GcotResult gcot_attempt(Sim& sim, PlayerId alice, CommittedBit& x0, CommittedBit& x1,
                        PlayerId bob, CommittedBit& selector, const GcotParams& gp,
                        const CommitParams& params) {
    const std::string inst = sim.fresh_label("gcot");
    GcotResult res;
    GcotSession& s = res.session;
    GcotState st;
    const int m = gp.m;
    const int sm = std::max(1, static_cast<int>(std::lround(gp.sigma * m)));
    const Word fullw = m >= 32 ? ~0u : ((1u << m) - 1u);

    // 1: code agreement
    s.code = build_code(m, gp.sigma, gp.epsilon, sim.coins(inst + "/code"));
    sim.log_public(Actor::func(), "GCOT_STEP1", "code=" + s.code.describe());

    // 2: random codewords, bitwise commitments, membership proofs
    Rng& arng = sim.coins(inst + "/alice");
    s.c0 = s.code.random_codeword(arng);
    do {
        s.c1 = s.code.random_codeword(arng);
    } while (s.c1 == s.c0);
    const CheatScript* c2 = sim.cheat(alice, "GCOT_STEP2");
    if (c2 && c2->action == "non-codeword") s.c0 ^= 1u;
    st.c_opened.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        st.c0bits.emplace_back(gbcx_commit(sim, alice, bit_of(s.c0, i), params));
        st.c1bits.emplace_back(gbcx_commit(sim, alice, bit_of(s.c1, i), params));
    }
    sim.log_public(Actor::p(alice), "GCOT_STEP2", "committed");
    prove_membership(sim, alice, st.c0bits, s.code, params, "c0");
    prove_membership(sim, alice, st.c1bits, s.code, params, "c1");

    // 3: Bob's secret index sets and flipped selector positions
    const int sel = selector.secret_bit();
    Rng& brng = sim.coins(inst + "/bob");
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    for (size_t i = all.size(); i > 1; --i) std::swap(all[i - 1], all[brng.uniform(i)]);
    s.sel_flips.assign(all.begin(), all.begin() + sm);
    s.check_set.assign(all.begin() + sm, all.begin() + 2 * sm);
    std::sort(s.sel_flips.begin(), s.sel_flips.end());
    std::sort(s.check_set.begin(), s.check_set.end());
    sim.log(Actor::p(bob), "GCOT_STEP3",
            str_payload("I0=" + pos_list(s.sel_flips) + ";I1=" + pos_list(s.check_set)),
            Visibility::only(bob));

    // 4: m one-out-of-two transfers, then Alice opens the union I
    std::vector<int> bsel(m, sel);
    for (int i : s.sel_flips) bsel[i] ^= 1;
    Word w_raw = 0;
    for (int i = 0; i < m; ++i) {
        OneOfTwoResult tr = one_of_two_uot(sim, alice, bit_of(s.c0, i), bit_of(s.c1, i),
                                           bob, bsel[i], params, gp.uot_batch, gp.uot_origin);
        if (!tr.ok) throw ProtocolHalt{Outcome::aborted("transfer retries exhausted")};
        if (tr.value) w_raw |= 1u << i;
        s.transfers.push_back(std::move(tr));
    }
    std::vector<int> union_i = s.sel_flips;
    union_i.insert(union_i.end(), s.check_set.begin(), s.check_set.end());
    std::sort(union_i.begin(), union_i.end());
    sim.log_public(Actor::p(bob), "GCOT_STEP4", "I=" + pos_list(union_i));
    open_codeword_positions(sim, st, s, union_i);

    // 5: Bob's checks, correction, commitment to w and membership proof
    const CheatScript* b5 = sim.cheat(bob, "GCOT_STEP5");
    bool complain = b5 && b5->action == "false-complain";
    for (int i : s.sel_flips)
        if (bit_of(w_raw, i) != bit_of(sel ? s.c0 : s.c1, i)) complain = true;
    for (int i : s.check_set)
        if (bit_of(w_raw, i) != bit_of(sel ? s.c1 : s.c0, i)) complain = true;
    if (complain) {
        PlayerId culprit = resolve_conflict(sim, alice, bob, bob, st, s, params);
        res.outcome = Outcome::cheater(culprit);
        return res;
    }
    Word w = w_raw;
    for (int i : s.sel_flips) {
        w &= ~(1u << i);
        w |= static_cast<Word>(bit_of(sel ? s.c1 : s.c0, i)) << i;
    }
    if (!s.code.is_codeword(w)) {
        auto dec = s.code.decode(w);
        if (!dec) {
            PlayerId culprit = resolve_conflict(sim, alice, bob, bob, st, s, params);
            res.outcome = Outcome::cheater(culprit);
            return res;
        }
        w = *dec;
    }
    s.w = w;
    Word w_commit = w;
    const CheatScript* c5 = b5;
    if (c5 && c5->action == "wrong-w") {
        for (int i = 0; i < m; ++i)
            if (std::find(union_i.begin(), union_i.end(), i) == union_i.end()) {
                w_commit ^= 1u << i;
                break;
            }
    } else if (c5 && c5->action == "other-codeword") {
        w_commit = (w == s.c0) ? s.c1 : s.c0;
    }
    for (int i = 0; i < m; ++i)
        st.wbits.emplace_back(gbcx_commit(sim, bob, bit_of(w_commit, i), params));
    sim.log_public(Actor::p(bob), "GCOT_STEP5", "committed");
    prove_membership(sim, bob, st.wbits, s.code, params, "w");
    const CheatScript* a5 = sim.cheat(alice, "GCOT_STEP5");
    if (a5 && a5->action == "false-accuse") {
        PlayerId culprit = resolve_conflict(sim, alice, bob, alice, st, s, params);
        res.outcome = Outcome::cheater(culprit);
        return res;
    }

    // 6: public audit set I2, disjoint from I
    Bits seed_bits = coin_toss(sim, full_mask(sim.n()), 16, params);
    uint64_t seed = 0;
    for (int i = 0; i < 16; ++i) seed |= static_cast<uint64_t>(seed_bits[i]) << i;
    std::vector<int> rest;
    for (int i = 0; i < m; ++i)
        if (std::find(union_i.begin(), union_i.end(), i) == union_i.end()) rest.push_back(i);
    std::mt19937_64 pub(seed);
    for (size_t i = rest.size(); i > 1; --i) std::swap(rest[i - 1], rest[pub() % i]);
    s.audit_set.assign(rest.begin(), rest.begin() + sm);
    std::sort(s.audit_set.begin(), s.audit_set.end());
    sim.log_public(Actor::func(), "GCOT_STEP6", "I2=" + pos_list(s.audit_set));
    open_codeword_positions(sim, st, s, s.audit_set);

    // 7: Bob links w to his committed selector on I2
    const CheatScript* c7 = sim.cheat(bob, "GCOT_STEP7");
    if (c7 && c7->action == "skip") {
        sim.log_public(Actor::p(bob), "GCOT_STEP7", "refused");
        throw ProtocolHalt{Outcome::cheater(bob)};
    }
    for (int i : s.audit_set) {
        if (bit_of(s.c0, i) != bit_of(s.c1, i)) {
            Gbcx wa = st.wbits[i].take(sim, params);
            Gbcx sb = selector.take(sim, params);
            std::vector<Gbcx*> ops{&wa, &sb};
            prove_linear(sim, bob, ops, bit_of(s.c0, i), params, "step7");
        } else {
            Gbcx wa = st.wbits[i].take(sim, params);
            std::vector<Gbcx*> ops{&wa};
            prove_linear(sim, bob, ops, bit_of(s.c0, i), params, "step7");
        }
    }
    sim.log_public(Actor::p(bob), "GCOT_STEP7", "done");

    // 8: privacy amplification: subset parity over unopened positions whose
    // value the disclosed linear system leaves undetermined
    const int x0v = x0.secret_bit(), x1v = x1.secret_bit();
    std::vector<Word> disclosed = s.code.parity;
    for (int i = 0; i < m; ++i)
        if (st.c_opened[i]) disclosed.push_back(1u << i);
    Word unopened = fullw & ~s.pub_mask;
    Word h = 0;
    bool found = false;
    for (int tries = 0; tries < 4096; ++tries) {
        Word cand = arng.mask(m) & unopened;
        if (!cand) continue;
        if ((std::popcount(cand & s.c0) & 1) != x0v) continue;
        if ((std::popcount(cand & s.c1) & 1) != x1v) continue;
        if (in_span(disclosed, cand)) continue;
        h = cand;
        found = true;
        break;
    }
    if (!found) throw ProtocolHalt{Outcome::aborted("privacy amplification sampling failed")};
    s.h = h;
    sim.log_public(Actor::p(alice), "GCOT_STEP8", "h=" + word_str(h, m));
    for (Word cw = 0; cw < 2; ++cw) {
        auto& bits = cw ? st.c1bits : st.c0bits;
        CommittedBit& x = cw ? x1 : x0;
        std::vector<Gbcx> taken;
        for (int i = 0; i < m; ++i)
            if (bit_of(h, i)) taken.push_back(bits[i].take(sim, params));
        taken.push_back(x.take(sim, params));
        std::vector<Gbcx*> ops;
        for (auto& g : taken) ops.push_back(&g);
        prove_linear(sim, alice, ops, 0, params, cw ? "h-c1" : "h-c0");
    }

    // 9: Bob commits to h(w) and proves it
    int outv = std::popcount(s.w & h) & 1;
    const CheatScript* c9 = sim.cheat(bob, "GCOT_STEP9");
    if (c9 && c9->action == "wrong-bit") outv ^= 1;
    CommittedBit out(gbcx_commit(sim, bob, outv, params));
    {
        std::vector<Gbcx> taken;
        for (int i = 0; i < m; ++i)
            if (bit_of(h, i)) taken.push_back(st.wbits[i].take(sim, params));
        taken.push_back(out.take(sim, params));
        std::vector<Gbcx*> ops;
        for (auto& g : taken) ops.push_back(&g);
        prove_linear(sim, bob, ops, 0, params, "step9");
    }
    sim.log_public(Actor::p(bob), "GCOT_STEP9", "done");

    res.outcome = Outcome::success({outv});
    res.out = std::move(out);
    return res;
}

}  // namespace

GcotResult gcot(Sim& sim, PlayerId alice, CommittedBit& x0, CommittedBit& x1,
                PlayerId bob, CommittedBit& selector, const GcotParams& gp,
                const CommitParams& params) {
    // at small m every position where the codewords differ can end up publicly
    // opened, leaving no valid amplification vector; restart with fresh
    // codewords when that happens
    for (int attempt = 0;; ++attempt) {
        try {
            return gcot_attempt(sim, alice, x0, x1, bob, selector, gp, params);
        } catch (const ProtocolHalt& h) {
            if (attempt < 8 && h.outcome.kind == Outcome::Aborted &&
                h.outcome.reason == "privacy amplification sampling failed") {
                sim.log_public(Actor::func(), "GCOT_RESTART",
                               "attempt=" + std::to_string(attempt + 1));
                continue;
            }
            throw;
        }
    }
}

}  // namespace aot
