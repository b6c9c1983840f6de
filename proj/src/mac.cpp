#include "aot/mac.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "aot/simnet.hpp"

namespace aot {

namespace {

int poly_degree(uint64_t p) {
    int d = -1;
    for (int i = 0; i < 64; ++i)
        if ((p >> i) & 1) d = i;
    return d;
}

// polynomial remainder of a mod b over GF(2)
uint64_t poly_mod(uint64_t a, uint64_t b) {
    int db = poly_degree(b);
    int da = poly_degree(a);
    while (da >= db) {
        a ^= b << (da - db);
        da = poly_degree(a);
    }
    return a;
}

bool irreducible(uint64_t p) {
    int d = poly_degree(p);
    if (d < 1) return false;
    for (int dd = 1; dd <= d / 2; ++dd)
        for (uint64_t q = 1ull << dd; q < (2ull << dd); ++q)
            if (poly_mod(p, q) == 0) return false;
    return true;
}

uint64_t smallest_irreducible(int degree) {
    static std::map<int, uint64_t> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(degree);
    if (it != cache.end()) return it->second;
    for (uint64_t tail = 1; tail < (1ull << degree); ++tail) {
        uint64_t p = (1ull << degree) | tail;
        if (irreducible(p)) {
            cache[degree] = p;
            return p;
        }
    }
    throw std::logic_error("no irreducible polynomial found");
}

}  // namespace

Gf2::Gf2(int degree) : degree_(degree) {
    if (degree < 2 || degree > 32) throw std::invalid_argument("field degree out of range");
    poly_ = smallest_irreducible(degree);
}

uint32_t Gf2::mul(uint32_t x, uint32_t y) const {
    uint64_t acc = 0;
    uint64_t xs = x;
    while (y) {
        if (y & 1) acc ^= xs;
        xs <<= 1;
        y >>= 1;
    }
    return static_cast<uint32_t>(poly_mod(acc, poly_));
}

std::vector<uint32_t> chunk_message(const std::vector<uint8_t>& msg, int degree) {
    std::vector<uint32_t> chunks;
    uint32_t cur = 0;
    int fill = 0;
    for (uint8_t byte : msg)
        for (int i = 0; i < 8; ++i) {
            cur |= static_cast<uint32_t>((byte >> i) & 1) << fill;
            if (++fill == degree) {
                chunks.push_back(cur);
                cur = 0;
                fill = 0;
            }
        }
    if (fill) chunks.push_back(cur);
    return chunks;
}

AuthTag auth(const Gf2& field, const std::vector<uint8_t>& msg, const AuthKey& key) {
    auto chunks = chunk_message(msg, field.degree());
    if (chunks.size() > kMaxChunks) throw std::invalid_argument("message too long for MAC");
    uint32_t t = key.b;
    uint32_t apow = key.a;
    for (uint32_t m : chunks) {
        t = field.add(t, field.mul(m, apow));
        apow = field.mul(apow, key.a);
    }
    return {t};
}

bool verify(const Gf2& field, const std::vector<uint8_t>& msg, const AuthTag& tag,
            const AuthKey& key) {
    return auth(field, msg, key) == tag;
}

AuthKey random_key(const Gf2& field, Rng& rng) {
    uint32_t lo_mask = static_cast<uint32_t>(field.order() - 1);
    return {static_cast<uint32_t>(rng.word()) & lo_mask,
            static_cast<uint32_t>(rng.word()) & lo_mask};
}

}  // namespace aot
