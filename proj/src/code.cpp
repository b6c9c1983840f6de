#include "aot/code.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "aot/simnet.hpp"

namespace aot {

int hamming_weight(Word w) { return std::popcount(w); }

namespace {

int parity_of(Word w) { return std::popcount(w) & 1; }

// systematic G = [I_k | P] => H = [P^T | I_{m-k}]
std::vector<Word> parity_from_gen(const std::vector<Word>& gen, int m, int k) {
    std::vector<Word> h(m - k, 0);
    for (int r = 0; r < m - k; ++r) {
        for (int c = 0; c < k; ++c)
            if ((gen[c] >> (k + r)) & 1) h[r] |= 1u << c;
        h[r] |= 1u << (k + r);
    }
    return h;
}

int min_distance(const std::vector<Word>& gen, int k) {
    int best = 1 << 30;
    for (Word msg = 1; msg < (1u << k); ++msg) {
        Word cw = 0;
        for (int i = 0; i < k; ++i)
            if ((msg >> i) & 1) cw ^= gen[i];
        best = std::min(best, hamming_weight(cw));
    }
    return best;
}

}  // namespace

Word LinearCode::encode(Word message) const {
    Word cw = 0;
    for (int i = 0; i < k; ++i)
        if ((message >> i) & 1) cw ^= gen[i];
    return cw;
}

bool LinearCode::is_codeword(Word w) const {
    for (Word row : parity)
        if (parity_of(w & row)) return false;
    return true;
}

std::optional<Word> LinearCode::decode(Word w) const {
    // exhaustive nearest-codeword search
    int best_dist = 1 << 30;
    Word best = 0;
    bool tie = false;
    for (Word msg = 0; msg < (1u << k); ++msg) {
        Word cw = encode(msg);
        int dist = hamming_weight(cw ^ w);
        if (dist < best_dist) {
            best_dist = dist;
            best = cw;
            tie = false;
        } else if (dist == best_dist) {
            tie = true;
        }
    }
    if (best_dist > t || (tie && best_dist > 0)) return std::nullopt;
    return best;
}

Word LinearCode::random_codeword(Rng& rng) const {
    return encode(static_cast<Word>(rng.uniform(1u << k)));
}

std::string LinearCode::describe() const {
    std::ostringstream s;
    s << m << ',' << k << ',' << d;
    for (Word g : gen) s << ';' << g;
    return s.str();
}

LinearCode build_code(int m, double sigma, double epsilon, Rng& rng) {
    if (m < 2 || m > 24) throw std::invalid_argument("code length out of range");
    int k = static_cast<int>(std::floor((0.5 + 2.0 * sigma) * m)) + 1;
    if (k > m) throw std::invalid_argument("code parameters infeasible: k > m");
    const int need = static_cast<int>(std::floor(epsilon * m)) + 1;  // d > epsilon*m

    const int attempts = 4096;
    for (int a = 0; a < attempts; ++a) {
        LinearCode c;
        c.m = m;
        c.k = k;
        c.gen.resize(k);
        for (int i = 0; i < k; ++i) {
            Word tail = m > k ? static_cast<Word>(rng.uniform(1u << (m - k))) : 0;
            c.gen[i] = (1u << i) | (tail << k);
        }
        c.d = min_distance(c.gen, k);
        if (c.d < need) continue;
        c.t = (c.d - 1) / 2;
        c.parity = parity_from_gen(c.gen, m, k);
        return c;
    }
    throw std::invalid_argument("could not sample a code with the requested distance");
}

LinearCode repetition3() {
    LinearCode c;
    c.m = 3;
    c.k = 1;
    c.d = 3;
    c.t = 1;
    c.gen = {0b111};
    c.parity = {0b011, 0b101};
    return c;
}

}  // namespace aot
