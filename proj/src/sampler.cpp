#include "bures/sampler.hpp"

#include <cmath>
#include <numbers>

#include "bures/error.hpp"

namespace bures::sampler {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void check_dims(int n, int m) {
    if (n < 1 || m < n) throw DomainError("sampler: requires 1 <= n <= m");
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed;
    const std::uint64_t base = splitmix64(state);
    state = base ^ index;
    splitmix64(state);
    return splitmix64(state);
}

std::complex<double> Stream::complex_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log1p(-u1));
    return std::polar(r, 2.0 * std::numbers::pi * u2);
}

linalg::ComplexMatrix sample_ginibre(int n, int m, Stream& rng) {
    linalg::ComplexMatrix g(n, m);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k) g(i, k) = rng.complex_normal();
    return g;
}

linalg::HermitianMatrix sample_wishart(int n, int m, Stream& rng) {
    check_dims(n, m);
    const linalg::ComplexMatrix g = sample_ginibre(n, m, rng);
    return linalg::HermitianMatrix::from_trusted(g * g.adjoint());
}

states::DensityMatrix sample_density(int n, int m, Stream& rng) {
    const linalg::HermitianMatrix w = sample_wishart(n, m, rng);
    return states::DensityMatrix::trusted(w.matrix() / w.trace());
}

std::pair<states::DensityMatrix, states::DensityMatrix> sample_pair(int n, int m1, int m2,
                                                                    Stream& rng) {
    check_dims(n, m2);
    states::DensityMatrix first = sample_density(n, m1, rng);
    states::DensityMatrix second = sample_density(n, m2, rng);
    return {std::move(first), std::move(second)};
}

unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void MeanAccumulator::add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
    if (other.count == 0) return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count), nb = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += other.m2 + delta * delta * na * nb / total;
    count += other.count;
}

double MeanAccumulator::variance() const {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
}

double MeanAccumulator::stderr_of_mean() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

}  // namespace bures::sampler
