#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace colest {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Expands (master seed, stream index) into one decorrelated stream seed.
// Every seeded component goes through this so that a single master seed
// pins the whole experiment.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed;
    splitmix64_next(s);
    s ^= 0x9e3779b97f4a7c15ull * (index + 1);
    return splitmix64_next(s);
}

// Deterministic random stream: identical seeds give identical sequences on
// every platform we build for (no libstdc++ distribution objects involved).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    static RngStream derive(std::uint64_t master_seed, std::uint64_t index) {
        return RngStream(derive_seed(master_seed, index));
    }

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0,1), 53-bit resolution
    double uniform01() { return double(gen_() >> 11) * 0x1p-53; }

    // standard normal, Box-Muller with a cached spare
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform01();
        } while (u1 == 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace colest
