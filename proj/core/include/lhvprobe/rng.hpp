#pragma once

#include <cmath>
#include <cstdint>

namespace lhvprobe {

/// splitmix64 step: advances `state` by a fixed increment and returns a
/// mixed output word. Output depends only on the counter value, which is
/// what makes per-trial streams order-independent.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Small deterministic generator. Identical seeds give identical streams on
/// every platform; no global state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // 1 - u keeps the argument of log strictly positive.
        double u1 = 1.0 - next_double();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Per-trial stream: seed xor trial index, as logged in campaign manifests.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial_index) {
    return Rng(seed ^ trial_index);
}

}  // namespace lhvprobe
