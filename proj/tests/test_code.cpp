#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "aot/code.hpp"
#include "aot/simnet.hpp"
#include "doctest.h"

using namespace aot;

namespace {

// independent exact minimum distance by scanning all nonzero codewords
int brute_min_distance(const LinearCode& c) {
    int best = c.m + 1;
    for (Word msg = 1; msg < (1u << c.k); ++msg) {
        int w = hamming_weight(c.encode(msg));
        if (w < best) best = w;
    }
    return best;
}

}  // namespace

TEST_CASE("repetition code basics") {
    LinearCode c = repetition3();
    CHECK(c.m == 3);
    CHECK(c.k == 1);
    CHECK(c.d == 3);
    CHECK(c.t == 1);
    CHECK(c.encode(1) == 0b111u);
    CHECK(c.is_codeword(0b000));
    CHECK(c.is_codeword(0b111));
    CHECK(!c.is_codeword(0b110));
    CHECK(c.decode(0b110) == 0b111u);
    CHECK(c.decode(0b001) == 0b000u);
}

TEST_CASE("zero word is always a codeword") {
    Rng rng(1, "codes");
    for (int m : {8, 12, 16}) {
        LinearCode c = build_code(m, 0.125, 1.0 / 16, rng);
        CHECK(c.is_codeword(0));
    }
}

TEST_CASE("dimension follows the sigma bound") {
    Rng rng(2, "codes");
    LinearCode c = build_code(16, 0.125, 1.0 / 16, rng);
    CHECK(c.k == 13);  // floor((1/2 + 2/8) * 16) + 1, strictly above 12
    CHECK(c.m == 16);
    CHECK(c.d > 1);    // epsilon * m = 1
    LinearCode c8 = build_code(8, 0.125, 1.0 / 16, rng);
    CHECK(c8.k == 7);
}

TEST_CASE("reported distance is exact") {
    Rng rng(3, "codes");
    for (int trial = 0; trial < 3; ++trial) {
        LinearCode c = build_code(12, 0.125, 1.0 / 16, rng);
        CHECK(c.d == brute_min_distance(c));
        CHECK(c.t == (c.d - 1) / 2);
    }
}

TEST_CASE("generator rows satisfy the parity checks") {
    Rng rng(4, "codes");
    LinearCode c = build_code(16, 0.125, 1.0 / 16, rng);
    for (Word row : c.gen) CHECK(c.is_codeword(row));
}

TEST_CASE("linearity: sums of codewords are codewords") {
    Rng rng(5, "codes");
    LinearCode c = build_code(12, 0.125, 1.0 / 16, rng);
    for (int i = 0; i < 200; ++i) {
        Word a = c.random_codeword(rng), b = c.random_codeword(rng);
        CHECK(c.is_codeword(a ^ b));
    }
}

TEST_CASE("round trip under up to t errors, exhaustively") {
    LinearCode c = repetition3();
    for (Word msg = 0; msg < 2; ++msg) {
        Word w = c.encode(msg);
        for (int e = 0; e < c.m; ++e) CHECK(c.decode(w ^ (1u << e)) == w);
    }
    Rng rng(6, "codes");
    LinearCode big = build_code(16, 0.125, 1.0 / 16, rng);
    if (big.t >= 1) {
        for (Word msg = 0; msg < (1u << big.k); msg += 97) {
            Word w = big.encode(msg);
            for (int e = 0; e < big.m; ++e) {
                auto dec = big.decode(w ^ (1u << e));
                // within radius t the round trip is exact; at t=0 nothing is promised
                if (big.t >= 1) CHECK(dec == w);
            }
        }
    }
}

TEST_CASE("decode never invents codewords beyond the radius") {
    Rng rng(7, "codes");
    LinearCode c = build_code(10, 0.0, 0.2, rng);  // forces d > 2, t >= 1
    for (int i = 0; i < 500; ++i) {
        Word w = static_cast<Word>(rng.word()) & ((1u << c.m) - 1);
        auto dec = c.decode(w);
        if (dec) {
            CHECK(c.is_codeword(*dec));
            CHECK(hamming_weight(w ^ *dec) <= c.t);
        }
    }
}

TEST_CASE("description round trips the shape") {
    Rng rng(8, "codes");
    LinearCode c = build_code(8, 0.125, 1.0 / 16, rng);
    std::string desc = c.describe();
    CHECK(desc.starts_with("8,7,"));
}

TEST_CASE("infeasible parameters are a configuration error") {
    Rng rng(9, "codes");
    // epsilon*m above the singleton-type reach for this dimension
    CHECK_THROWS(build_code(8, 0.125, 0.9, rng));
}
