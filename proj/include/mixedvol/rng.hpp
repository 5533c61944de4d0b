#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mixedvol {

/// Small deterministic RNG with counter-based stream splitting.
///
/// A single 64-bit experiment seed fans out to independent per-task
/// streams via split(stream_id); the sequences are reproducible across
/// platforms and thread schedules (no libstdc++ distribution objects,
/// which are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed)) {}

    /// Derive an independent stream for task `id` from this stream's seed.
    Rng split(std::uint64_t id) const { return Rng(state_ ^ mix(id * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL)); }

    std::uint64_t next_u64() {
        // splitmix64 step
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

    /// Standard normal via Box-Muller (one value per call, mate cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    std::vector<double> normals(std::size_t n) {
        std::vector<double> out(n);
        for (auto& x : out) x = normal();
        return out;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return z ^ (z >> 33);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace mixedvol
