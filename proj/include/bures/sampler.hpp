#pragma once

// Hilbert-Schmidt random density matrices rho = G G^dagger / tr(G G^dagger).
//
// Reproducibility contract: sample number i of a run with seed s draws all
// of its randomness from std::mt19937_64 seeded with splitmix64(s, i)
// (see stream_seed). Uniforms are (x >> 11) * 2^-53; complex normals use
// Box-Muller in polar form, g = sqrt(-ln(1 - u1)) * exp(2 pi i u2), so that
// E|g|^2 = 1. Ensemble reductions run in fixed chunks of kChunk samples that
// are merged in index order, so results do not depend on the worker count.

#include <algorithm>
#include <complex>
#include <exception>
#include <cstdint>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "bures/matrix.hpp"
#include "bures/states.hpp"

namespace bures::sampler {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index) : engine_(stream_seed(seed, index)) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::complex<double> complex_normal();

private:
    std::mt19937_64 engine_;
};

struct EnsembleSpec {
    int n = 2;
    int m1 = 2;
    int m2 = 0;  ///< only for pairs
    std::uint64_t samples = 1000;
    std::uint64_t seed = 1;
};

/// n x m matrix of independent complex normals with E|g|^2 = 1.
linalg::ComplexMatrix sample_ginibre(int n, int m, Stream& rng);

/// W = G G^dagger with G from sample_ginibre; E[W] = m I.
linalg::HermitianMatrix sample_wishart(int n, int m, Stream& rng);

states::DensityMatrix sample_density(int n, int m, Stream& rng);

/// Two independent draws; rho1 is drawn first from the same stream.
std::pair<states::DensityMatrix, states::DensityMatrix> sample_pair(int n, int m1, int m2,
                                                                    Stream& rng);

inline constexpr std::uint64_t kChunk = 256;

unsigned default_workers();

/// Runs body(index, acc) for index in [0, count) and merges per-chunk
/// accumulators in chunk order. Acc needs a merge(const Acc&) member.
template <class Acc, class Body>
Acc chunked_reduce(std::uint64_t count, const Acc& init, const Body& body, unsigned workers = 0) {
    const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<Acc> partial(chunks, init);
    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t end = std::min(count, (c + 1) * kChunk);
        for (std::uint64_t i = c * kChunk; i < end; ++i) body(i, partial[c]);
    };
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::uint64_t c = w; c < chunks; c += workers) run_chunk(c);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    Acc total = init;
    for (const Acc& p : partial) total.merge(p);
    return total;
}

/// Running mean / variance (Welford, with Chan's merge).
struct MeanAccumulator {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x);
    void merge(const MeanAccumulator& other);
    double variance() const;  ///< unbiased sample variance
    double stderr_of_mean() const;
};

}  // namespace bures::sampler
