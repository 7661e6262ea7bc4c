#include <cmath>
#include <vector>

#include <doctest.h>

#include "bures/analytic.hpp"
#include "bures/error.hpp"

using namespace bures;
using namespace bures::analytic;
using states::FixedStateSpectrum;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

const std::vector<double> kFig3c = {0.09, 0.12, 0.21, 0.28, 0.30};

}  // namespace

TEST_CASE("mean root fidelity against independent high-precision values") {
    CHECK(close(mean_root_fidelity_pure(2, 2).mean_root_fidelity, 24.0 / 35.0, 1e-14));
    CHECK(close(mean_root_fidelity_mixed(2, 2).mean_root_fidelity, 0.888934239205945, 1e-13));
    CHECK(close(mean_root_fidelity_mixed(5, 10).mean_root_fidelity, 0.93544342159491358, 1e-13));
    CHECK(close(mean_root_fidelity_mixed(3, 5).mean_root_fidelity, 0.92691956084730463, 1e-13));
    CHECK(close(mean_root_fidelity_two_random(2, 2, 2).mean_root_fidelity, 0.809795918367347, 1e-13));
    CHECK(close(mean_root_fidelity_two_random(2, 2, 3).mean_root_fidelity, 0.839084724799011, 1e-13));
    CHECK(close(mean_root_fidelity_two_random(3, 6, 7).mean_root_fidelity, 0.896172214862341, 1e-13));
    CHECK(close(mean_root_fidelity_two_random(5, 8, 10).mean_root_fidelity, 0.864332309105648, 1e-13));
    CHECK(close(mean_root_fidelity_fixed(FixedStateSpectrum(kFig3c), 10).mean_root_fidelity,
                0.914413420687933, 1e-12));
    CHECK(close(mean_root_fidelity_fixed(FixedStateSpectrum({0.3, 0.7}), 2).mean_root_fidelity,
                0.873629324887827, 1e-12));
    const auto two = mean_root_fidelity_two_random(2, 2, 2);
    CHECK(two.mean_sq_bures == doctest::Approx(2.0 - 2.0 * two.mean_root_fidelity).epsilon(1e-15));
    CHECK(two.mean_sq_bures == doctest::Approx(0.38040816326530612).epsilon(1e-12));
}

TEST_CASE("n = 1 is exact") {
    CHECK(mean_root_fidelity_pure(1, 4).mean_root_fidelity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mean_root_fidelity_mixed(1, 3).mean_root_fidelity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mean_root_fidelity_two_random(1, 2, 5).mean_root_fidelity == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(mean_root_fidelity_pure(1, 4).mean_sq_bures) < 1e-15);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(mean_root_fidelity_pure(3, 2), DomainError);
    CHECK_THROWS_AS(mean_root_fidelity_two_random(3, 3, 2), DomainError);
    CHECK_THROWS_AS(mean_root_fidelity_fixed(FixedStateSpectrum({0.5, 0.5}), 3), DegenerateSpectrum);
    CHECK_THROWS_AS(mean_root_fidelity_fixed(FixedStateSpectrum::pure(3), 3), DomainError);
    CHECK_THROWS_AS(parse_scenario("entangled"), DomainError);
    CHECK(parse_scenario("two") == Scenario::TwoRandom);
    CHECK_THROWS_AS(fidelity_pdf_pure(1, 3, 0.5), DomainError);
}

TEST_CASE("fixed sigma approaches the mixed result") {
    for (int n : {2, 3, 5}) {
        std::vector<double> e(n);
        for (int k = 0; k < n; ++k) e[k] = 1.0 / n + 1e-4 * (k - (n - 1) / 2.0);
        const double fixed = mean_root_fidelity_fixed(FixedStateSpectrum(e), n + 3).mean_root_fidelity;
        CHECK(std::abs(fixed - mean_root_fidelity_mixed(n, n + 3).mean_root_fidelity) < 1e-3);
    }
    const FixedStateSpectrum equal = FixedStateSpectrum::maximally_mixed(4);
    const double lim = perturbed_limit(equal, [](const FixedStateSpectrum& s) {
        return mean_root_fidelity_fixed(s, 6).mean_root_fidelity;
    });
    CHECK(std::abs(lim - mean_root_fidelity_mixed(4, 6).mean_root_fidelity) < 1e-6);
}

TEST_CASE("fixed sigma approaches the pure result") {
    const int n = 3, m = 4;
    const double pure = mean_root_fidelity_pure(n, m).mean_root_fidelity;
    double prev = 1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const FixedStateSpectrum s({1.0 - 2.5 * eps, eps, 1.5 * eps});
        const double gap = std::abs(mean_root_fidelity_fixed(s, m).mean_root_fidelity - pure);
        CAPTURE(eps);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("spread_degenerate keeps the spectrum normalized") {
    const FixedStateSpectrum s({0.2, 0.2, 0.2, 0.4});
    const auto t = spread_degenerate(s, 1e-5);
    double sum = 0.0;
    for (double x : t.eigs()) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(t.has_degeneracy());
}

TEST_CASE("pure-state fidelity density") {
    const auto r = integrate([](double f) { return fidelity_pdf_pure(5, 6, f); }, {0.0, 1.0});
    CHECK(std::abs(r.value - 1.0) < 1e-6);
    const auto g = grid_density([](double f) { return fidelity_pdf_pure(5, 6, f); }, 1000, {0.0, 1.0});
    CHECK(g.normalization_ok);
    CHECK(std::abs(g.normalization - 1.0) < 1e-6);
    // Beta(m, nm - m): mean m / (nm) = 1/n
    const auto mean = integrate([](double f) { return fidelity_pdf_pure(5, 6, f); }, {0.0, 1.0}, {},
                                [](double f) { return f; });
    CHECK(mean.value == doctest::Approx(0.2).epsilon(1e-9));
    // sqrt(F) moment reproduces the closed form
    const auto root = integrate([](double f) { return fidelity_pdf_pure(5, 6, f); }, {0.0, 1.0}, {},
                                [](double f) { return std::sqrt(f); });
    CHECK(root.value == doctest::Approx(mean_root_fidelity_pure(5, 6).mean_root_fidelity).epsilon(1e-9));
}

TEST_CASE("fixed-sigma density: normalization, moments, support") {
    const FixedStateSpectrum s({0.07, 0.17, 0.35, 0.41});
    const TauDensity tau(s, 9);
    const auto norm = integrate(tau, tau.support(), tau.breakpoints());
    CHECK(std::abs(norm.value - 1.0) < 1e-5);
    const auto first = integrate(tau, tau.support(), tau.breakpoints(), [](double x) { return x; });
    CHECK(4.0 * first.value == doctest::Approx(0.25).epsilon(1e-7));
    const auto root = integrate(tau, tau.support(), tau.breakpoints(), [](double x) { return std::sqrt(x); });
    CHECK(4.0 * root.value == doctest::Approx(mean_root_fidelity_fixed(s, 9).mean_root_fidelity).epsilon(1e-7));

    const FixedStateSpectrum a({0.15, 0.33, 0.52});
    CHECK(density_tau(a, 8, 0.6) == 0.0);
    CHECK(density_tau(a, 8, -0.1) == 0.0);
    CHECK(density_tau(a, 8, 0.2) > 0.0);
    const TauDensity ta(a, 8);
    CHECK(std::abs(integrate(ta, ta.support(), ta.breakpoints()).value - 1.0) < 1e-5);
}

TEST_CASE("maximally mixed density") {
    const MixedTauDensity p(5, 6);
    CHECK(std::abs(integrate(p, p.support()).value - 1.0) < 1e-8);
    const auto first = integrate(p, p.support(), {}, [](double x) { return x; });
    CHECK(5.0 * first.value == doctest::Approx(0.2).epsilon(1e-8));
    const auto root = integrate(p, p.support(), {}, [](double x) { return std::sqrt(x); });
    CHECK(5.0 * root.value == doctest::Approx(mean_root_fidelity_mixed(5, 6).mean_root_fidelity).epsilon(1e-8));
    CHECK(density_tau_mixed(5, 6, 0.25) == 0.0);
    // 20-digit reference value
    CHECK(close(density_tau_mixed(25, 35, 0.001), 276.31455486631163114, 1e-10));
}

TEST_CASE("two-random density for (2, 2, 3)") {
    const ChiDensity chi(2, 2, 3);
    CHECK(std::isfinite(chi.limit_at_zero()));
    CHECK(chi.limit_at_zero() > 0.0);
    CHECK(ChiDensity(2, 2, 2).limit_at_zero() == kDivergent);
    CHECK(ChiDensity(2, 3, 4).limit_at_zero() == 0.0);
    CHECK(std::abs(integrate(chi, chi.support(), {}, nullptr, 1e-9).value - 1.0) < 1e-7);
    const auto root = integrate(chi, chi.support(), {}, [](double x) { return std::sqrt(x); }, 1e-9);
    CHECK(std::abs(2.0 * root.value - 0.839084724799011) < 1e-7);
    CHECK(density_chi(2, 2, 3, 1.2) == 0.0);
    CHECK_THROWS_AS(ChiDensity(1, 2, 3), DomainError);
}

TEST_CASE("two-random density for (3, 6, 7) integrates to one") {
    const ChiDensity chi(3, 6, 7);
    CHECK(std::abs(integrate(chi, chi.support(), {}, nullptr, 1e-8).value - 1.0) < 1e-5);
}
