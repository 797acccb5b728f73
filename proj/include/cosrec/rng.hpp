#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cosrec {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic random stream. mt19937_64 is fully specified by the standard,
// and all derived values (uniforms, Gaussians) are produced by fixed bit-level
// transforms, so a seed reproduces byte-identical output on every platform.
// std::normal_distribution / std::uniform_real_distribution are deliberately
// not used: their algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream for worker `idx` of a job seeded with `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t idx) {
        return Rng(splitmix64(seed ^ splitmix64(idx + 0x632be59bd9b4e019ull)));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0,1), 53 random bits.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1]; safe as a log() argument.
    double uniform01_pos() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Standard normal via Box-Muller; the spare value is cached, so draws come
    // in deterministic pairs.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01_pos();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace cosrec
