#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace uq {

// splitmix64 mixing step; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Deterministic random stream. The engine is std::mt19937_64, whose raw
// output sequence is fixed by the standard; all variate transforms are
// implemented here explicitly so that a given (seed, call sequence) yields
// the same doubles on every platform and build.
//
// Parallel code must not share a stream. Derive one stream per work item
// with Rng::substream(master, item_index, ...) instead; results are then
// independent of scheduling and thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

    static Rng substream(std::uint64_t master, std::uint64_t a,
                         std::uint64_t b = 0, std::uint64_t c = 0) {
        std::uint64_t s = mix64(master);
        s = mix64(s ^ a);
        s = mix64(s ^ b);
        s = mix64(s ^ c);
        return Rng(s);
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform();

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos();

    // Standard normal via Box-Muller (cosine branch only, one value per call).
    double normal();

    // Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by boosting.
    double gamma(double shape);

    // Symmetric Dirichlet(concentration) over out.size() classes.
    void dirichlet(double concentration, std::span<double> out);

    // Integer uniform on [0, n).
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

}  // namespace uq
