#include "hnrmi/rng.hpp"

#include <stdexcept>

#include "hnrmi/special.hpp"

namespace hnrmi {

namespace {

uint64_t splitmix64(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) {
    uint64_t x = seed ^ (0xD2B74407B1CE6E93ULL * (stream + 1));
    for (uint64_t& s : s_) s = splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // forbidden all-zero state
}

uint64_t Rng::next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::next_double() {
    return (next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
    return ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    return normal_quantile(uniform_open());
}

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t x = seed ^ (0x2545F4914F6CDD1DULL * (salt + 1));
    return splitmix64(x);
}

int Rng::uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::uniform_int: n must be positive");
    // Rejection to avoid modulo bias.
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return static_cast<int>(v % un);
}

}  // namespace hnrmi
