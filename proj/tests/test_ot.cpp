#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "aot/ot.hpp"
#include "doctest.h"

using namespace aot;

namespace {

CommitParams light_commit() {
    CommitParams p;
    p.gbc = {3, 8};
    p.coin = {2, 4};
    p.mx = 4;
    return p;
}

GcotParams light_gcot() {
    GcotParams g;
    g.m = 8;
    g.uot_batch = 4;
    return g;
}

struct GcotRun {
    GcotResult res;
    int x0, x1, sel;
};

GcotRun run_gcot(uint64_t seed, int x0, int x1, int sel,
                 std::vector<CheatScript> cheats = {}) {
    Sim sim({3, seed}, std::move(cheats));
    CommitParams cp = light_commit();
    CommittedBit cx0(gbcx_commit(sim, 0, x0, cp));
    CommittedBit cx1(gbcx_commit(sim, 0, x1, cp));
    CommittedBit csel(gbcx_commit(sim, 1, sel, cp));
    GcotRun r{{}, x0, x1, sel};
    try {
        r.res = gcot(sim, 0, cx0, cx1, 1, csel, light_gcot(), cp);
    } catch (const ProtocolHalt& h) {
        r.res.outcome = h.outcome;
    }
    if (r.res.outcome.ok()) {
        // open the output in the same run to check what Bob is committed to
        Gbcx out = r.res.out.take(sim, cp);
        r.res.outcome.result.assign(1, gbcx_open(sim, out));
    }
    return r;
}

}  // namespace

TEST_CASE("single transfer either learns the exact bit or nothing") {
    for (uint64_t seed = 0; seed < 40; ++seed) {
        Sim sim({3, seed});
        for (int b : {0, 1}) {
            UotOutcome u = uot(sim, 0, 1, b, light_commit(), GbcOrigin::AotAnonymous);
            if (u.known) CHECK(u.value == b);
            CHECK(u.attempts >= 1);
        }
    }
}

TEST_CASE("transfer success rate is one half") {
    int known = 0;
    const int runs = 2000;
    for (int i = 0; i < runs; ++i) {
        Sim sim({3, 100 + static_cast<uint64_t>(i)});
        if (uot(sim, 0, 1, i & 1, light_commit(), GbcOrigin::AotAnonymous).known)
            ++known;
    }
    CHECK(std::abs(known / static_cast<double>(runs) - 0.5) < 0.03);
}

TEST_CASE("the transfer commitment opens to the transferred bit") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        Sim sim({3, 50 + seed});
        UotOutcome u = uot(sim, 0, 1, 1, light_commit(), GbcOrigin::AotAnonymous);
        CHECK(gbc_open(sim, u.commitment) == 1);
    }
}

TEST_CASE("one-out-of-two delivers the chosen bit for all inputs") {
    for (int a0 : {0, 1})
        for (int a1 : {0, 1})
            for (int c : {0, 1}) {
                int checked = 0;
                for (uint64_t seed = 0; checked < 3 && seed < 40; ++seed) {
                    Sim sim({3, seed * 8 + a0 * 4 + a1 * 2 + c});
                    OneOfTwoResult r = one_of_two_uot(sim, 0, a0, a1, 1, c,
                                                      light_commit(), 4,
                                                      GbcOrigin::AotAnonymous);
                    if (!r.ok) continue;
                    CHECK(r.value == (c ? a1 : a0));
                    ++checked;
                }
                CHECK(checked == 3);
            }
}

TEST_CASE("announced index sets are disjoint and cover the batch") {
    Sim sim({3, 7});
    OneOfTwoResult r;
    while (!r.ok)
        r = one_of_two_uot(sim, 0, 1, 0, 1, 0, light_commit(), 4, GbcOrigin::AotAnonymous);
    std::set<int> all(r.set0.begin(), r.set0.end());
    for (int i : r.set1) CHECK(all.insert(i).second);
    CHECK(static_cast<int>(all.size()) == 4);
}

TEST_CASE("a flipped masked announcement corrupts the received bit") {
    int wrong = 0, delivered = 0;
    for (uint64_t seed = 0; seed < 60; ++seed) {
        Sim sim({3, 200 + seed}, {{0, "UOT12", "bad-mask", ""}});
        OneOfTwoResult r = one_of_two_uot(sim, 0, 0, 0, 1, 0, light_commit(), 4,
                                          GbcOrigin::AotAnonymous);
        if (!r.ok) continue;
        ++delivered;
        if (r.value != 0) ++wrong;
    }
    CHECK(delivered > 10);
    // the flip lands on m0; Bob reads a wrong value whenever he chose set 0
    CHECK(wrong > 0);
}

TEST_CASE("committed OT succeeds and outputs the selected bit") {
    for (int x0 : {0, 1})
        for (int x1 : {0, 1})
            for (int sel : {0, 1}) {
                GcotRun r = run_gcot(300 + x0 * 4 + x1 * 2 + sel, x0, x1, sel);
                REQUIRE(r.res.outcome.ok());
                CHECK(r.res.outcome.result[0] == (sel ? x1 : x0));
            }
}

TEST_CASE("opened codeword positions stay at the budget") {
    GcotRun r = run_gcot(42, 1, 0, 1);
    REQUIRE(r.res.outcome.ok());
    // sigma*m = 1 opened in step 5 checks is bounded by |I1|; step 6 opens
    // another sm on both codewords; total public openings per codeword 3*sm
    int sm = static_cast<int>(light_gcot().sigma * light_gcot().m);
    CHECK(r.res.session.opened_per_codeword == 3 * sm);
    CHECK(static_cast<int>(r.res.session.check_set.size()) == sm);
    CHECK(static_cast<int>(r.res.session.audit_set.size()) == sm);
}

TEST_CASE("the amplification vector avoids every opened position") {
    GcotRun r = run_gcot(43, 0, 1, 0);
    REQUIRE(r.res.outcome.ok());
    CHECK((r.res.session.h & r.res.session.pub_mask) == 0u);
    CHECK(r.res.session.h != 0u);
}

TEST_CASE("announcing a non-codeword halts on the membership proof") {
    bool caught = false;
    for (uint64_t seed = 0; seed < 10 && !caught; ++seed) {
        GcotRun r = run_gcot(400 + seed, 1, 1, 0, {{0, "GCOT_STEP2", "non-codeword", ""}});
        if (r.res.outcome.kind == Outcome::CheaterIdentified) {
            CHECK(r.res.outcome.culprit == 0);
            caught = true;
        }
    }
    CHECK(caught);
}

TEST_CASE("a bad transfer mask is pinned on the sender in resolution") {
    bool caught = false;
    for (uint64_t seed = 0; seed < 30 && !caught; ++seed) {
        GcotRun r = run_gcot(500 + seed, 1, 0, 0, {{0, "GCOT_STEP4", "bad-mask", ""}});
        if (r.res.outcome.kind == Outcome::CheaterIdentified && r.res.outcome.culprit == 0)
            caught = true;
    }
    CHECK(caught);
}

TEST_CASE("committing to a wrong word is caught by the checks") {
    bool caught = false;
    for (uint64_t seed = 0; seed < 30 && !caught; ++seed) {
        GcotRun r = run_gcot(600 + seed, 0, 1, 1, {{1, "GCOT_STEP5", "wrong-w", ""}});
        if (r.res.outcome.kind == Outcome::CheaterIdentified && r.res.outcome.culprit == 1)
            caught = true;
    }
    CHECK(caught);
}

TEST_CASE("substituting the other codeword is caught in the audit") {
    bool caught = false;
    for (uint64_t seed = 0; seed < 40 && !caught; ++seed) {
        GcotRun r = run_gcot(700 + seed, 0, 1, 1,
                             {{1, "GCOT_STEP5", "other-codeword", ""}});
        if (r.res.outcome.kind == Outcome::CheaterIdentified && r.res.outcome.culprit == 1)
            caught = true;
    }
    CHECK(caught);
}

TEST_CASE("a false complaint backfires on the complainer") {
    bool caught = false;
    for (uint64_t seed = 0; seed < 30 && !caught; ++seed) {
        GcotRun r = run_gcot(800 + seed, 1, 1, 0,
                             {{1, "GCOT_STEP5", "false-complain", ""}});
        if (r.res.outcome.kind == Outcome::CheaterIdentified) {
            CHECK(r.res.outcome.culprit == 1);
            caught = true;
        }
    }
    CHECK(caught);
}

TEST_CASE("skipping the audit proofs halts against the receiver") {
    bool caught = false;
    for (uint64_t seed = 0; seed < 10 && !caught; ++seed) {
        GcotRun r = run_gcot(900 + seed, 1, 0, 1, {{1, "GCOT_STEP7", "skip", ""}});
        if (r.res.outcome.kind == Outcome::CheaterIdentified) {
            CHECK(r.res.outcome.culprit == 1);
            caught = true;
        }
    }
    CHECK(caught);
}

TEST_CASE("committing a wrong output bit fails the final proof") {
    bool caught = false;
    for (uint64_t seed = 0; seed < 30 && !caught; ++seed) {
        GcotRun r = run_gcot(1000 + seed, 1, 0, 0, {{1, "GCOT_STEP9", "wrong-bit", ""}});
        if (r.res.outcome.kind == Outcome::CheaterIdentified && r.res.outcome.culprit == 1)
            caught = true;
    }
    CHECK(caught);
}

TEST_CASE("the code shape matches the parameter rule") {
    GcotRun r = run_gcot(44, 1, 1, 1);
    REQUIRE(r.res.outcome.ok());
    CHECK(r.res.session.code.m == 8);
    CHECK(r.res.session.code.k == 7);
    CHECK(r.res.session.c0 != r.res.session.c1);
    CHECK(r.res.session.code.is_codeword(r.res.session.c0));
    CHECK(r.res.session.code.is_codeword(r.res.session.c1));
}
