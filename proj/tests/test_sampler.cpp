#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "bures/error.hpp"
#include "bures/sampler.hpp"

using namespace bures;
using namespace bures::sampler;

namespace {

struct Sum {
    double value = 0.0;
    void merge(const Sum& o) { value += o.value; }
};

// Entrywise accumulators for an n x n matrix statistic.
struct EntryStats {
    std::vector<MeanAccumulator> re;
    explicit EntryStats(int n = 0) : re(static_cast<std::size_t>(n * n)) {}
    void merge(const EntryStats& o) {
        for (std::size_t i = 0; i < re.size(); ++i) re[i].merge(o.re[i]);
    }
};

}  // namespace

TEST_CASE("stream seeds are frozen") {
    // splitmix64 reference values computed independently
    CHECK(stream_seed(1, 0) == 0xf18d6ce93d6cf1eeULL);
    CHECK(stream_seed(1, 1) == 0xc51e9aa03802868bULL);
    CHECK(stream_seed(42, 7) == 0x9aa2311424083235ULL);
    CHECK(stream_seed(~0ULL, 12345) == 0xf6098eafa2f31288ULL);
}

TEST_CASE("determinism") {
    Stream a(9, 3), b(9, 3);
    const auto p = sample_pair(3, 4, 5, a);
    const auto q = sample_pair(3, 4, 5, b);
    CHECK(p.first.matrix() == q.first.matrix());
    CHECK(p.second.matrix() == q.second.matrix());
    Stream c(9, 4);
    CHECK_FALSE(sample_density(3, 4, c).matrix() == p.first.matrix());
}

TEST_CASE("reductions do not depend on the worker count") {
    auto body = [](std::uint64_t i, MeanAccumulator& acc) {
        Stream rng(77, i);
        acc.add(sample_density(3, 5, rng).purity());
    };
    const auto one = chunked_reduce(3000, MeanAccumulator{}, body, 1);
    const auto four = chunked_reduce(3000, MeanAccumulator{}, body, 4);
    CHECK(one.count == 3000);
    CHECK(one.mean == four.mean);
    CHECK(one.m2 == four.m2);
}

TEST_CASE("MeanAccumulator merge matches a single pass") {
    MeanAccumulator all, a, b;
    for (int i = 0; i < 100; ++i) {
        const double x = std::sin(i * 0.37) * 3.0 + i * 0.01;
        all.add(x);
        (i < 37 ? a : b).add(x);
    }
    a.merge(b);
    CHECK(a.mean == doctest::Approx(all.mean).epsilon(1e-14));
    CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-12));
}

TEST_CASE("complex normals have E|g|^2 = 1 and |g|^2 ~ Exp(1)") {
    const auto acc = chunked_reduce(100000, MeanAccumulator{}, [](std::uint64_t i, MeanAccumulator& a) {
        Stream rng(1, i);
        a.add(sample_wishart(1, 1, rng)(0, 0).real());
    });
    CHECK(std::abs(acc.mean - 1.0) < 0.01);
    CHECK(std::abs(acc.variance() - 1.0) < 0.03);
}

TEST_CASE("E[W] = m I for (n, m) = (3, 5)") {
    const int n = 3, m = 5;
    const auto st = chunked_reduce(10000, EntryStats(2 * n * n), [&](std::uint64_t i, EntryStats& s) {
        Stream rng(2, i);
        const auto w = sample_wishart(n, m, rng);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                s.re[r * n + c].add(w(r, c).real());
                s.re[n * n + r * n + c].add(w(r, c).imag());
            }
    });
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const auto& re = st.re[r * n + c];
            const auto& im = st.re[n * n + r * n + c];
            CHECK(std::abs(re.mean - (r == c ? m : 0.0)) < 3.0 * re.stderr_of_mean() + 1e-12);
            CHECK(std::abs(im.mean) < 3.0 * im.stderr_of_mean() + 1e-12);
        }
}

TEST_CASE("density matrices: n = 1, E rho = I/n, purity moment") {
    Stream one(3, 0);
    CHECK(sample_density(1, 4, one).matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-15));

    const int n = 4, m = 9;
    const auto st = chunked_reduce(100000, EntryStats(n), [&](std::uint64_t i, EntryStats& s) {
        Stream rng(4, i);
        const auto rho = sample_density(n, m, rng);
        rho.validate();
        for (int r = 0; r < n; ++r) s.re[r].add(rho.matrix()(r, r).real());
        s.re[n].add(rho.matrix()(0, 1).real());
        s.re[n + 1].add(rho.matrix()(2, 3).imag());
        s.re[n + 2].add(rho.purity());
    });
    for (int r = 0; r < n; ++r) CHECK(std::abs(st.re[r].mean - 0.25) < 3.0 * st.re[r].stderr_of_mean());
    CHECK(std::abs(st.re[n].mean) < 3.0 * st.re[n].stderr_of_mean());
    CHECK(std::abs(st.re[n + 1].mean) < 3.0 * st.re[n + 1].stderr_of_mean());
    const double purity = double(n + m) / (n * m + 1);
    CHECK(std::abs(st.re[n + 2].mean - purity) < 4.0 * st.re[n + 2].stderr_of_mean());
}

TEST_CASE("pairs: E tr(rho1 rho2) = 1/n") {
    const int n = 3;
    const auto acc = chunked_reduce(20000, MeanAccumulator{}, [&](std::uint64_t i, MeanAccumulator& a) {
        Stream rng(5, i);
        const auto [r1, r2] = sample_pair(n, 6, 7, rng);
        a.add((r1.matrix() * r2.matrix()).trace().real());
    });
    CHECK(std::abs(acc.mean - 1.0 / n) < 4.0 * acc.stderr_of_mean());
}

TEST_CASE("(2, 2) eigenvalue gap follows 3 g^2 (KS at the 1% level)") {
    // with n = m = 2 the joint eigenvalue density on the simplex is
    // proportional to (l1 - l2)^2, so the gap g has CDF g^3
    const std::uint64_t N = 100000;
    std::vector<double> gaps(N);
    for (std::uint64_t i = 0; i < N; ++i) {
        Stream rng(6, i);
        const auto e = linalg::eigvalsh(sample_density(2, 2, rng).hermitian());
        gaps[i] = e(1) - e(0);
    }
    std::sort(gaps.begin(), gaps.end());
    double d = 0.0;
    for (std::uint64_t i = 0; i < N; ++i) {
        const double cdf = std::pow(gaps[i], 3);
        d = std::max({d, std::abs(cdf - double(i) / N), std::abs(cdf - double(i + 1) / N)});
    }
    CHECK(d < 1.628 / std::sqrt(double(N)));
}

TEST_CASE("invalid dimensions") {
    Stream rng(1, 0);
    CHECK_THROWS_AS(sample_density(3, 2, rng), DomainError);
    CHECK_THROWS_AS(sample_wishart(0, 2, rng), DomainError);
    CHECK_THROWS_AS(sample_pair(3, 3, 2, rng), DomainError);
    CHECK(chunked_reduce(0, Sum{}, [](std::uint64_t, Sum&) {}).value == 0.0);
}
