#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hiervar {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input files: ragged rows, unparsable tokens, empty datasets.
struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

/// Label problems: unseen test labels, single-class inputs.
struct LabelError : Error {
    explicit LabelError(const std::string& msg) : Error(msg) {}
};

/// Invalid configuration or arguments (K too small, bad grid, L too short).
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Operation called in the wrong state (unset biases, wrong bank mode).
struct StateError : Error {
    explicit StateError(const std::string& msg) : Error(msg) {}
};

/// Dimension mismatch between related objects.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

/// Deterministic random stream. Wraps mt19937_64 but maps raw draws to
/// doubles and bounded ints itself, so serialized banks replay identically
/// across standard-library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(engine_()) * n) >> 64);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 mix; used to derive per-stage seeds from one pipeline seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Wall-clock stopwatch in seconds.
class Stopwatch {
public:
    Stopwatch() : start_(clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_;
};

/// Caps data-parallel regions (transform, F-scores). 0 = hardware default.
void set_max_threads(int n);
int max_threads();

}  // namespace hiervar
