#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Binary [m,k,d] linear codes in systematic form, used for the committed-OT
// codeword layer and for codeword-membership proofs.  Words are packed
// little-endian into uint32 (m <= 24 at desk scale).

namespace aot {

class Rng;

using Word = uint32_t;

struct LinearCode {
    int m = 0;  // length
    int k = 0;  // dimension
    int d = 0;  // exact minimum distance
    int t = 0;  // decoding radius floor((d-1)/2)
    std::vector<Word> gen;     // k generator rows
    std::vector<Word> parity;  // m-k parity-check rows

    Word encode(Word message) const;
    bool is_codeword(Word w) const;
    // nearest codeword if within Hamming distance t, otherwise nothing
    std::optional<Word> decode(Word w) const;
    Word random_codeword(Rng& rng) const;

    std::string describe() const;  // "m,k,d" plus generator rows, for headers
};

// Random systematic code with k = floor((1/2+2*sigma)*m)+1 and exact minimum
// distance > epsilon*m, resampled up to a bounded number of attempts.
LinearCode build_code(int m, double sigma, double epsilon, Rng& rng);

// Fixed [3,1,3] repetition code used throughout the unit tests.
LinearCode repetition3();

int hamming_weight(Word w);

}  // namespace aot
