#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "aot/simnet.hpp"
#include "doctest.h"

using namespace aot;

TEST_CASE("streams are reproducible per seed and label") {
    Rng a(1, "aot/0to1"), b(1, "aot/0to1"), c(2, "aot/0to1"), d(1, "other");
    Bits x = a.bits(64), y = b.bits(64);
    CHECK(x == y);
    CHECK(x != c.bits(64));
    CHECK(x != d.bits(64));
}

TEST_CASE("uniform draws stay in range") {
    Rng r(3, "u");
    for (int i = 0; i < 1000; ++i) CHECK(r.uniform(7) < 7);
    CHECK_THROWS_AS(r.uniform(0), std::invalid_argument);
}

TEST_CASE("two labels give empirically uncorrelated streams") {
    Rng a(5, "left"), b(5, "right");
    const int n = 4096;
    int agree = 0;
    for (int i = 0; i < n; ++i)
        if (a.bit() == b.bit()) ++agree;
    // 3-sigma band around n/2
    double sigma = std::sqrt(n / 4.0);
    CHECK(std::abs(agree - n / 2.0) < 3 * sigma);
}

TEST_CASE("round counter advances monotonically") {
    Sim sim({3, 0});
    CHECK(sim.round() == 0);
    for (uint32_t k = 1; k <= 5; ++k) CHECK(sim.next_round() == k);
    CHECK(sim.round() == 5);
}

TEST_CASE("strict stream labels collide once") {
    Sim sim({3, 0});
    sim.rng_stream("x");
    CHECK_THROWS_AS(sim.rng_stream("x"), std::invalid_argument);
    sim.coins("y");
    sim.coins("y");  // memoizing variant is fine
}

TEST_CASE("player count bounds") {
    CHECK_THROWS_AS(Sim({1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(Sim({40, 0}), std::invalid_argument);
}

TEST_CASE("aot delivery of an 8-bit string") {
    Sim sim({2, 9});
    Bits msg = parse_bits("10110100");
    AotDelivery d = sim.aot_send(0, 1, msg);
    REQUIRE(d.bits.size() == 8);
    REQUIRE(d.known.size() == 8);
    for (size_t i = 0; i < 8; ++i)
        if (d.known[i]) CHECK(d.bits[i] == msg[i]);
    // receiver-visible record names no sender
    bool saw = false;
    for (const EventRecord& ev : sim.transcript().events())
        if (ev.kind == "AOT") {
            saw = true;
            CHECK(ev.actor.kind == Actor::Anonymous);
            CHECK(ev.vis.players == Visibility::only(1).players);
        }
    CHECK(saw);
}

TEST_CASE("empty aot string gives empty delivery") {
    Sim sim({2, 0});
    AotDelivery d = sim.aot_send(0, 1, {});
    CHECK(d.bits.empty());
    CHECK(d.known.empty());
}

TEST_CASE("aot per-bit delivery rate is one half") {
    Sim sim({2, 1234});
    int known = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) known += sim.aot_send(0, 1, {1}).known_count();
    CHECK(std::abs(known / static_cast<double>(n) - 0.5) < 0.015);
}

TEST_CASE("ob send covers all receivers independently") {
    Sim sim({3, 77});
    Bits msg = parse_bits("11110000");
    auto out = sim.ob_send(0, msg);
    REQUIRE(out.size() == 2);
    for (auto& [r, d] : out) {
        CHECK(r != 0);
        for (size_t i = 0; i < msg.size(); ++i)
            if (d.known[i]) CHECK(d.bits[i] == msg[i]);
    }
}

TEST_CASE("zero-length ob send") {
    Sim sim({4, 0});
    auto out = sim.ob_send(1, {});
    REQUIRE(out.size() == 3);
    for (auto& [r, d] : out) CHECK(d.bits.empty());
}

TEST_CASE("ob full-cover rate matches the closed form") {
    // 3 receivers, 8 positions: every position known somewhere w.p. (1-2^-3)^8
    const int m = 8, runs = 10000;
    Sim sim({4, 5});
    Bits msg(m, 1);
    int covered = 0;
    for (int i = 0; i < runs; ++i) {
        auto out = sim.ob_send(0, msg);
        bool full = true;
        for (int pos = 0; pos < m && full; ++pos) {
            bool anyone = false;
            for (auto& [r, d] : out) anyone = anyone || d.known[pos];
            full = anyone;
        }
        if (full) ++covered;
    }
    double expect = std::pow(1.0 - std::pow(2.0, -3), m);
    CHECK(std::abs(covered / static_cast<double>(runs) - expect) < 0.02);
}

TEST_CASE("erasure indicators are uncorrelated across receivers") {
    Sim sim({3, 6});
    const int runs = 4096;
    int both = 0, first = 0, second = 0;
    for (int i = 0; i < runs; ++i) {
        auto out = sim.ob_send(0, {1});
        int a = out.at(1).known[0], b = out.at(2).known[0];
        first += a;
        second += b;
        both += a & b;
    }
    double cov = both / static_cast<double>(runs) -
                 (first / static_cast<double>(runs)) * (second / static_cast<double>(runs));
    CHECK(std::abs(cov) < 3 * 0.25 / std::sqrt(runs));
}

TEST_CASE("swapping the aot sender leaves the receiver view unchanged") {
    Bits msg = parse_bits("1100101011");
    std::string views[2], observer[2];
    PlayerId senders[2] = {1, 2};
    for (int run = 0; run < 2; ++run) {
        Sim sim({3, 99});
        sim.aot_send(senders[run], 0, msg);
        views[run] = sim.transcript().view(0);
        observer[run] = sim.transcript().observer_view();
    }
    CHECK(views[0] == views[1]);
    CHECK(observer[0] == observer[1]);
}

TEST_CASE("whole-run transcripts are a pure function of the config") {
    for (uint64_t seed : {0ull, 42ull}) {
        std::string t[2];
        for (int run = 0; run < 2; ++run) {
            Sim sim({3, seed});
            sim.aot_send(0, 1, parse_bits("1010"));
            sim.ob_send(2, parse_bits("01"));
            t[run] = sim.transcript().serialize();
        }
        CHECK(t[0] == t[1]);
    }
}

TEST_CASE("pattern and bit-string helpers") {
    AotDelivery d;
    d.bits = parse_bits("101");
    d.known = {1, 0, 1};
    CHECK(pattern_str(d) == "1-1");
    CHECK(bits_str(parse_bits("0110")) == "0110");
    CHECK_THROWS_AS(parse_bits("01x"), std::invalid_argument);
}
