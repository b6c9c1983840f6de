#pragma once

#include <cstdint>
#include <string>
#include <vector>

// One-time message authentication over a binary extension field.  Keys are
// single-use pairs (a, b); the tag of a chunked message m_1..m_l is
// b + sum_i m_i * a^i.

namespace aot {

class Rng;

// Arithmetic in GF(2^f), f <= 32.  The reduction polynomial is the
// lexicographically smallest irreducible of the degree, found once per degree
// by trial division and cached.
class Gf2 {
public:
    explicit Gf2(int degree);

    int degree() const { return degree_; }
    uint64_t modulus() const { return poly_; }
    uint64_t order() const { return 1ull << degree_; }

    uint32_t add(uint32_t x, uint32_t y) const { return x ^ y; }
    uint32_t mul(uint32_t x, uint32_t y) const;

private:
    int degree_;
    uint64_t poly_;
};

struct AuthKey {
    uint32_t a = 0;
    uint32_t b = 0;
};

struct AuthTag {
    uint32_t t = 0;
    bool operator==(const AuthTag&) const = default;
};

// Messages are byte strings, chunked into f-bit field elements little-endian.
// Chunk count is bounded so the forgery probability l/2^f stays meaningful.
constexpr size_t kMaxChunks = 1u << 16;

std::vector<uint32_t> chunk_message(const std::vector<uint8_t>& msg, int degree);

AuthTag auth(const Gf2& field, const std::vector<uint8_t>& msg, const AuthKey& key);
bool verify(const Gf2& field, const std::vector<uint8_t>& msg, const AuthTag& tag,
            const AuthKey& key);

AuthKey random_key(const Gf2& field, Rng& rng);

}  // namespace aot
