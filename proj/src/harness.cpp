#include "bures/harness.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "bures/error.hpp"

namespace bures::harness {

using linalg::HermitianMatrix;
using linalg::RealVector;
using states::DensityMatrix;
using states::FixedStateSpectrum;

namespace {

constexpr const char* kVersion = "bures-fidelity 1.0.0";

HermitianMatrix sqrt_diagonal(const FixedStateSpectrum& sigma) {
    RealVector d(sigma.dim());
    for (int i = 0; i < sigma.dim(); ++i) d(i) = std::sqrt(sigma.eigs()[i]);
    return HermitianMatrix::diagonal(d);
}

FixedStateSpectrum sigma_for(Scenario scenario, int n, const std::optional<FixedStateSpectrum>& sigma) {
    switch (scenario) {
        case Scenario::Pure: return FixedStateSpectrum::pure(n);
        case Scenario::Mixed: return FixedStateSpectrum::maximally_mixed(n);
        case Scenario::Fixed:
            if (!sigma) throw DomainError("fixed scenario needs sigma eigenvalues");
            if (sigma->dim() != n) throw DimensionMismatch("sigma dimension differs from n");
            return *sigma;
        case Scenario::TwoRandom: break;
    }
    throw DomainError("two-random scenario has no fixed sigma");
}

void finish(ComparisonReport& r, double mean, double se, const analytic::MeanFidelityResult& a) {
    r.mc_mean_root_fidelity = mean;
    r.mc_stderr = se;
    r.analytic_mean_root_fidelity = a.mean_root_fidelity;
    r.mc_msbd = 2.0 - 2.0 * mean;
    r.analytic_msbd = a.mean_sq_bures;
    if (r.analytic_msbd != 0.0)
        r.percent_rel_diff = 100.0 * std::abs(r.mc_msbd / r.analytic_msbd - 1.0);
    else
        r.percent_rel_diff = r.mc_msbd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// Batch means over consecutive samples.
std::pair<double, double> batch_mean(const std::vector<double>& x) {
    const std::size_t count = x.size();
    const std::size_t batches = std::min<std::size_t>(kBatches, count);
    sampler::MeanAccumulator total, of_batches;
    for (double v : x) total.add(v);
    for (std::size_t b = 0; b < batches; ++b) {
        sampler::MeanAccumulator acc;
        for (std::size_t i = b * count / batches; i < (b + 1) * count / batches; ++i) acc.add(x[i]);
        of_batches.add(acc.mean);
    }
    return {total.mean, of_batches.stderr_of_mean()};
}

struct HistAcc {
    std::vector<std::uint64_t> counts;
    void merge(const HistAcc& o) {
        if (counts.empty()) counts.assign(o.counts.size(), 0);
        for (std::size_t i = 0; i < o.counts.size(); ++i) counts[i] += o.counts[i];
    }
};

std::size_t bin_of(double x, double lo, double hi, std::size_t bins) {
    const double t = (x - lo) / (hi - lo) * static_cast<double>(bins);
    if (!(t > 0.0)) return 0;
    return std::min(bins - 1, static_cast<std::size_t>(t));
}

// Values histogrammed for one state: the fidelity for a pure sigma,
// otherwise all eigenvalues of sqrt(sigma) rho sqrt(sigma).
template <class Emit>
void fixed_values(Scenario scenario, const HermitianMatrix& sqrt_sigma, const DensityMatrix& rho,
                  const Emit& emit) {
    if (scenario == Scenario::Pure) {
        emit(rho.matrix()(0, 0).real());
        return;
    }
    const RealVector e = linalg::eigvalsh(
        HermitianMatrix::from_trusted(sqrt_sigma.matrix() * rho.matrix() * sqrt_sigma.matrix()));
    for (double v : e) emit(v);
}

template <class Emit>
void chi_values(const DensityMatrix& a, const DensityMatrix& b, const Emit& emit) {
    const HermitianMatrix s = linalg::sqrt_psd(a.hermitian());
    const RealVector e =
        linalg::eigvalsh(HermitianMatrix::from_trusted(s.matrix() * b.matrix() * s.matrix()));
    for (double v : e) emit(v);
}

std::string fmt(double x) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.15g", x);
    return buf.data();
}

}  // namespace

double ComparisonReport::z_score() const {
    const double se = msbd_stderr();
    if (se > 0.0) return std::abs(mc_msbd - analytic_msbd) / se;
    return mc_msbd == analytic_msbd ? 0.0 : std::numeric_limits<double>::infinity();
}

nlohmann::json ComparisonReport::to_json() const {
    nlohmann::json j;
    j["scenario"] = analytic::to_string(scenario);
    j["source"] = source;
    j["n"] = n;
    j["m1"] = m1;
    if (scenario == Scenario::TwoRandom)
        j["m2"] = m2;
    else
        j["m2"] = nullptr;
    j["sigma_eigs"] = sigma_eigs;
    j["samples"] = samples;
    j["seed"] = seed;
    j["mean_root_fidelity_mc"] = mc_mean_root_fidelity;
    j["mean_root_fidelity_mc_stderr"] = mc_stderr;
    j["mean_root_fidelity_analytic"] = analytic_mean_root_fidelity;
    j["msbd_mc"] = mc_msbd;
    j["msbd_analytic"] = analytic_msbd;
    j["percent_rel_diff"] = percent_rel_diff;
    j["version"] = kVersion;
    return j;
}

analytic::MeanFidelityResult analytic_mean(Scenario scenario, int n, int m1, int m2,
                                           const std::optional<FixedStateSpectrum>& sigma) {
    switch (scenario) {
        case Scenario::Pure: return analytic::mean_root_fidelity_pure(n, m1);
        case Scenario::Mixed: return analytic::mean_root_fidelity_mixed(n, m1);
        case Scenario::TwoRandom: return analytic::mean_root_fidelity_two_random(n, m1, m2);
        case Scenario::Fixed: break;
    }
    const FixedStateSpectrum s = sigma_for(Scenario::Fixed, n, sigma);
    if (!s.has_degeneracy()) return analytic::mean_root_fidelity_fixed(s, m1);
    const auto f = [m1](const FixedStateSpectrum& x) {
        return analytic::mean_root_fidelity_fixed(x, m1).mean_root_fidelity;
    };
    return analytic::make_mean_result(analytic::perturbed_limit(s, f), Scenario::Fixed);
}

ComparisonReport mc_mean_bures(const sampler::EnsembleSpec& spec, Scenario scenario,
                               const std::optional<FixedStateSpectrum>& sigma) {
    if (spec.samples == 0) throw DomainError("mc_mean_bures: samples must be positive");
    if (sigma && scenario != Scenario::Fixed)
        throw DomainError("mc_mean_bures: sigma is only accepted for the fixed scenario");
    const analytic::MeanFidelityResult exact = analytic_mean(scenario, spec.n, spec.m1, spec.m2, sigma);

    ComparisonReport r;
    r.scenario = scenario;
    r.n = spec.n;
    r.m1 = spec.m1;
    r.m2 = scenario == Scenario::TwoRandom ? spec.m2 : 0;
    r.samples = spec.samples;
    r.seed = spec.seed;

    sampler::MeanAccumulator acc;
    if (scenario == Scenario::TwoRandom) {
        acc = sampler::chunked_reduce(spec.samples, sampler::MeanAccumulator{},
                                      [&](std::uint64_t i, sampler::MeanAccumulator& a) {
                                          sampler::Stream rng(spec.seed, i);
                                          const auto [r1, r2] = sampler::sample_pair(spec.n, spec.m1, spec.m2, rng);
                                          a.add(states::root_fidelity_with_sqrt(
                                                    linalg::sqrt_psd(r1.hermitian()), r2)
                                                    .root_fidelity);
                                      });
    } else {
        const FixedStateSpectrum s = sigma_for(scenario, spec.n, sigma);
        r.sigma_eigs = s.eigs();
        const HermitianMatrix root = sqrt_diagonal(s);
        acc = sampler::chunked_reduce(spec.samples, sampler::MeanAccumulator{},
                                      [&](std::uint64_t i, sampler::MeanAccumulator& a) {
                                          sampler::Stream rng(spec.seed, i);
                                          const DensityMatrix rho = sampler::sample_density(spec.n, spec.m1, rng);
                                          a.add(states::root_fidelity_with_sqrt(root, rho).root_fidelity);
                                      });
    }
    finish(r, acc.mean, acc.stderr_of_mean(), exact);
    return r;
}

ComparisonReport kicked_top_mean_bures(const kickedtop::KickedTopConfig& config, Scenario scenario,
                                       const std::optional<kickedtop::KickedTopConfig>& second) {
    config.validate();
    ComparisonReport r;
    r.scenario = scenario;
    r.source = "kicked-top";
    r.n = config.n();
    r.m1 = config.m();
    r.samples = static_cast<std::uint64_t>(config.samples);

    std::vector<double> roots;
    roots.reserve(config.samples);
    analytic::MeanFidelityResult exact;
    if (scenario == Scenario::TwoRandom) {
        if (!second) throw DomainError("kicked_top_mean_bures: two-random needs a second system");
        r.m2 = second->m();
        exact = analytic::mean_root_fidelity_two_random(r.n, r.m1, r.m2);
        kickedtop::evolve_pair_ensemble(config, *second,
                                        [&](std::size_t, const DensityMatrix& a, const DensityMatrix& b) {
                                            roots.push_back(states::root_fidelity_with_sqrt(
                                                                linalg::sqrt_psd(a.hermitian()), b)
                                                                .root_fidelity);
                                        });
    } else {
        if (scenario == Scenario::Fixed)
            throw DomainError("kicked_top_mean_bures: use the pure or mixed scenario");
        const FixedStateSpectrum s = sigma_for(scenario, r.n, std::nullopt);
        r.sigma_eigs = s.eigs();
        exact = analytic_mean(scenario, r.n, r.m1, 0, std::nullopt);
        const HermitianMatrix root = sqrt_diagonal(s);
        kickedtop::evolve_ensemble(config, [&](std::size_t, const DensityMatrix& rho) {
            roots.push_back(states::root_fidelity_with_sqrt(root, rho).root_fidelity);
        });
    }
    const auto [mean, se] = batch_mean(roots);
    finish(r, mean, se, exact);
    return r;
}

HistogramData make_histogram(const std::vector<std::uint64_t>& counts, double lower, double upper) {
    if (counts.empty()) throw DomainError("histogram: no bins");
    if (!(upper > lower)) throw DomainError("histogram: empty range");
    HistogramData h;
    h.lower = lower;
    h.upper = upper;
    h.counts = counts;
    const std::size_t bins = counts.size();
    const double width = (upper - lower) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lower + width * static_cast<double>(b));
    h.edges.back() = upper;
    for (auto c : counts) h.total += c;
    for (std::size_t b = 0; b < bins; ++b) {
        const double w = h.edges[b + 1] - h.edges[b];
        const double scale = h.total > 0 ? 1.0 / (static_cast<double>(h.total) * w) : 0.0;
        h.centers.push_back(0.5 * (h.edges[b] + h.edges[b + 1]));
        h.density.push_back(static_cast<double>(counts[b]) * scale);
        h.density_stderr.push_back(std::sqrt(static_cast<double>(counts[b])) * scale);
    }
    return h;
}

void attach_curve(HistogramData& h, const analytic::Density& pdf) {
    // 7-point Gauss-Legendre on each bin
    static constexpr std::array<double, 7> x = {-0.949107912342758524526189684047851,
                                                -0.741531185599394439863864773280788,
                                                -0.405845151377397166906606412076961,
                                                0.0,
                                                0.405845151377397166906606412076961,
                                                0.741531185599394439863864773280788,
                                                0.949107912342758524526189684047851};
    static constexpr std::array<double, 7> w = {0.129484966168869693270611432679082,
                                                0.279705391489276667901467771423780,
                                                0.381830050505118944950369775488975,
                                                0.417959183673469387755102040816327,
                                                0.381830050505118944950369775488975,
                                                0.279705391489276667901467771423780,
                                                0.129484966168869693270611432679082};
    h.analytic.clear();
    h.expected_mass.clear();
    for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) {
        const double a = h.edges[b], c = h.edges[b + 1];
        const double mid = 0.5 * (a + c), half = 0.5 * (c - a);
        h.analytic.push_back(pdf(mid));
        double mass = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) mass += w[i] * pdf(mid + half * x[i]);
        h.expected_mass.push_back(mass * half);
    }
}

double poisson_agreement(const HistogramData& h, double k_sigma) {
    if (h.expected_mass.size() != h.counts.size())
        throw DomainError("poisson_agreement: attach the analytic curve first");
    std::size_t good = 0;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        const double expected = static_cast<double>(h.total) * std::max(h.expected_mass[b], 0.0);
        const double dev = std::abs(static_cast<double>(h.counts[b]) - expected);
        if (dev <= k_sigma * std::sqrt(expected) || (expected == 0.0 && h.counts[b] == 0)) ++good;
    }
    return static_cast<double>(good) / static_cast<double>(h.counts.size());
}

ScenarioDensity scenario_density(Scenario scenario, int n, int m1, int m2,
                                 const std::optional<FixedStateSpectrum>& sigma) {
    switch (scenario) {
        case Scenario::Fixed: {
            const analytic::TauDensity tau(sigma_for(Scenario::Fixed, n, sigma), m1);
            return {tau, tau.support(), tau.breakpoints()};
        }
        case Scenario::Pure:
            if (n < 2) throw DomainError("fidelity density needs n >= 2");
            return {[n, m1](double f) { return analytic::fidelity_pdf_pure(n, m1, f); }, {0.0, 1.0}, {}};
        case Scenario::Mixed: {
            const analytic::MixedTauDensity tau(n, m1);
            return {tau, tau.support(), {}};
        }
        case Scenario::TwoRandom: {
            const analytic::ChiDensity chi(n, m1, m2);
            return {chi, chi.support(), {}};
        }
    }
    throw DomainError("unknown scenario");
}

HistogramData mc_histogram(const sampler::EnsembleSpec& spec, Scenario scenario, int bins,
                           const std::optional<FixedStateSpectrum>& sigma) {
    if (bins < 10) throw DomainError("mc_histogram: need at least 10 bins");
    if (spec.samples == 0) throw DomainError("mc_histogram: samples must be positive");
    const ScenarioDensity d = scenario_density(scenario, spec.n, spec.m1, spec.m2, sigma);
    const auto [lo, hi] = d.support;
    const std::size_t nb = static_cast<std::size_t>(bins);
    HistAcc init;
    init.counts.assign(nb, 0);

    HistAcc acc;
    if (scenario == Scenario::TwoRandom) {
        acc = sampler::chunked_reduce(spec.samples, init, [&](std::uint64_t i, HistAcc& a) {
            sampler::Stream rng(spec.seed, i);
            const auto [r1, r2] = sampler::sample_pair(spec.n, spec.m1, spec.m2, rng);
            chi_values(r1, r2, [&](double v) { ++a.counts[bin_of(v, lo, hi, nb)]; });
        });
    } else {
        const HermitianMatrix root = sqrt_diagonal(sigma_for(scenario, spec.n, sigma));
        acc = sampler::chunked_reduce(spec.samples, init, [&](std::uint64_t i, HistAcc& a) {
            sampler::Stream rng(spec.seed, i);
            const DensityMatrix rho = sampler::sample_density(spec.n, spec.m1, rng);
            fixed_values(scenario, root, rho, [&](double v) { ++a.counts[bin_of(v, lo, hi, nb)]; });
        });
    }
    HistogramData h = make_histogram(acc.counts, lo, hi);
    attach_curve(h, d.pdf);
    return h;
}

std::string density_csv(const std::vector<double>& x, const std::vector<double>& pdf) {
    if (x.size() != pdf.size()) throw DimensionMismatch("density_csv: column lengths differ");
    std::string out = "x,analytic_pdf\n";
    for (std::size_t i = 0; i < x.size(); ++i) out += fmt(x[i]) + "," + fmt(pdf[i]) + "\n";
    return out;
}

std::string histogram_csv(const HistogramData& h) {
    std::string out = "x,analytic_pdf,mc_density,mc_stderr\n";
    for (std::size_t i = 0; i < h.centers.size(); ++i) {
        const double a = i < h.analytic.size() ? h.analytic[i] : std::nan("");
        out += fmt(h.centers[i]) + "," + fmt(a) + "," + fmt(h.density[i]) + "," +
               fmt(h.density_stderr[i]) + "\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << contents;
    if (!f.flush()) throw Error("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------------

namespace {

struct KickSet {
    double kappa1, kappa2, epsilon;
};
constexpr std::array<KickSet, 3> kSingleSets = {{{7, 8, 1}, {6, 7, 0.75}, {7, 9, 0.5}}};
constexpr std::array<std::array<KickSet, 2>, 3> kPairSets = {
    {{{{8, 7, 0.5}, {7, 8, 1}}}, {{{6, 7, 0.8}, {6, 8, 0.75}}}, {{{7, 8, 0.75}, {8, 7, 0.75}}}}};

constexpr std::uint64_t kPooledEigenvalues = 100000;
constexpr std::uint64_t kMeanSamples = 20000;
constexpr int kKickedSamples = 5000;

kickedtop::KickedTopConfig top(int n, int m, const KickSet& k, int samples) {
    kickedtop::KickedTopConfig c;
    c.j1 = (n - 1) / 2.0;
    c.j2 = (m - 1) / 2.0;
    c.kappa1 = k.kappa1;
    c.kappa2 = k.kappa2;
    c.epsilon = k.epsilon;
    c.samples = samples;
    return c;
}

nlohmann::json config_json(const kickedtop::KickedTopConfig& c) {
    return {{"j1", c.j1},         {"j2", c.j2},         {"kappa1", c.kappa1},       {"kappa2", c.kappa2},
            {"epsilon", c.epsilon}, {"theta1", c.theta1}, {"phi1", c.phi1},         {"theta2", c.theta2},
            {"phi2", c.phi2},     {"transient", c.transient}, {"samples", c.samples}, {"thinning", c.thinning}};
}

struct Writer {
    const FigureOverrides& o;
    FigureOutput& out;
    std::string path(const std::string& name) const {
        return (std::filesystem::path(o.out_dir) / name).string();
    }
    void put(const std::string& name, const std::string& contents) {
        write_file(path(name), contents);
        out.files.push_back(path(name));
    }
};

// Curve, normalization and first-moment checks shared by every density figure.
nlohmann::json curve_checks(const std::string& id, const ScenarioDensity& d, int n, bool fidelity,
                            Writer& w) {
    const analytic::GridDensity g =
        analytic::grid_density(d.pdf, w.o.grid, d.support, d.breakpoints, 1e-5);
    w.put(id + "_curve.csv", density_csv(g.abscissae, g.values));
    const auto moment = analytic::integrate(d.pdf, d.support, d.breakpoints, [](double x) { return x; }, 1e-10);
    // E[F] for the fidelity, n E[eigenvalue] = E[tr] otherwise; both are 1/n
    const double first = fidelity ? moment.value : n * moment.value;
    if (!g.normalization_ok) w.out.failures.push_back(id + ": " + g.warning);
    if (!(std::abs(first - 1.0 / n) <= 1e-5))
        w.out.failures.push_back(id + ": first moment " + fmt(first) + " differs from 1/n");
    return {{"normalization", g.normalization},
            {"normalization_trapezoid", g.trapezoid},
            {"first_moment", first},
            {"first_moment_expected", 1.0 / n},
            {"grid_points", w.o.grid},
            {"warning", g.warning}};
}

void histogram_checks(const std::string& id, HistogramData& h, bool gate, Writer& w,
                      nlohmann::json& summary) {
    const double agree = poisson_agreement(h, 4.0);
    summary["bins"] = h.counts.size();
    summary["pooled_values"] = h.total;
    summary["poisson_4sigma_fraction"] = agree;
    if (gate && agree < 0.95)
        w.out.failures.push_back(id + ": only " + fmt(100.0 * agree) + "% of bins within 4 Poisson sigma");
    w.put(id + "_hist.csv", histogram_csv(h));
}

void rmt_density_figure(const std::string& id, Scenario sc, int n, int m1, int m2,
                        const std::optional<FixedStateSpectrum>& sigma, Writer& w) {
    const ScenarioDensity d = scenario_density(sc, n, m1, m2, sigma);
    nlohmann::json s;
    s["figure"] = id;
    s["scenario"] = analytic::to_string(sc);
    s["n"] = n;
    s["m1"] = m1;
    if (sc == Scenario::TwoRandom) s["m2"] = m2;
    if (sigma) s["sigma_eigs"] = sigma->eigs();
    s["curve"] = curve_checks(id, d, n, sc == Scenario::Pure, w);
    const std::uint64_t per = sc == Scenario::Pure ? 1 : static_cast<std::uint64_t>(n);
    sampler::EnsembleSpec spec{n, m1, m2, w.o.samples.value_or((kPooledEigenvalues + per - 1) / per), w.o.seed};
    HistogramData h = mc_histogram(spec, sc, w.o.bins, sigma);
    s["samples"] = spec.samples;
    s["seed"] = spec.seed;
    histogram_checks(id, h, true, w, s);
    w.out.summary = s;
}

std::string table_header() { return "label,n,m1,m2,msbd_analytic,msbd_mc,msbd_mc_stderr,percent_rel_diff\n"; }

std::string table_row(const std::string& label, const ComparisonReport& r) {
    return label + "," + std::to_string(r.n) + "," + std::to_string(r.m1) + "," +
           (r.scenario == Scenario::TwoRandom ? std::to_string(r.m2) : std::string()) + "," +
           fmt(r.analytic_msbd) + "," + fmt(r.mc_msbd) + "," + fmt(r.msbd_stderr()) + "," +
           fmt(r.percent_rel_diff) + "\n";
}

void report_checks(const std::string& id, const ComparisonReport& r, bool gate, Writer& w) {
    const bool identity = std::abs(r.mc_msbd - (2.0 - 2.0 * r.mc_mean_root_fidelity)) <= 1e-12 &&
                          std::abs(r.analytic_msbd - (2.0 - 2.0 * r.analytic_mean_root_fidelity)) <= 1e-12;
    if (!identity) w.out.failures.push_back(id + ": msbd is not 2 - 2 mean root fidelity");
    if (gate && !(r.z_score() <= 5.0))
        w.out.failures.push_back(id + ": Monte Carlo mean is " + fmt(r.z_score()) +
                                 " standard errors from the closed form");
}

void rmt_mean_figure(const std::string& id, const std::vector<std::tuple<Scenario, int, int, int>>& cases,
                     const std::optional<FixedStateSpectrum>& sigma, Writer& w) {
    std::string csv = table_header();
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& [sc, n, m1, m2] : cases) {
        sampler::EnsembleSpec spec{n, m1, m2, w.o.samples.value_or(kMeanSamples), w.o.seed};
        const ComparisonReport r = mc_mean_bures(spec, sc, sc == Scenario::Fixed ? sigma : std::nullopt);
        report_checks(id, r, true, w);
        csv += table_row(analytic::to_string(sc), r);
        reports.push_back(r.to_json());
    }
    w.put(id + ".csv", csv);
    w.out.summary = {{"figure", id}, {"reports", reports}};
}

void kicked_density_figure(const std::string& id, Scenario sc, const kickedtop::KickedTopConfig& a,
                           const std::optional<kickedtop::KickedTopConfig>& b, Writer& w) {
    const int n = a.n(), m1 = a.m(), m2 = b ? b->m() : 0;
    const ScenarioDensity d = scenario_density(sc, n, m1, m2, std::nullopt);
    nlohmann::json s;
    s["figure"] = id;
    s["source"] = "kicked-top";
    s["scenario"] = analytic::to_string(sc);
    s["n"] = n;
    s["m1"] = m1;
    if (b) s["m2"] = m2;
    s["config_a"] = config_json(a);
    if (b) s["config_b"] = config_json(*b);
    s["curve"] = curve_checks(id, d, n, sc == Scenario::Pure, w);

    const auto [lo, hi] = d.support;
    const std::size_t nb = static_cast<std::size_t>(w.o.bins);
    std::vector<std::uint64_t> counts(nb, 0);
    auto emit = [&](double v) { ++counts[bin_of(v, lo, hi, nb)]; };
    if (b) {
        kickedtop::evolve_pair_ensemble(a, *b, [&](std::size_t, const DensityMatrix& x, const DensityMatrix& y) {
            chi_values(x, y, emit);
        });
    } else {
        const HermitianMatrix root = sqrt_diagonal(sigma_for(sc, n, std::nullopt));
        kickedtop::evolve_ensemble(a, [&](std::size_t, const DensityMatrix& rho) {
            fixed_values(sc, root, rho, emit);
        });
    }
    HistogramData h = make_histogram(counts, lo, hi);
    attach_curve(h, d.pdf);
    s["samples"] = a.samples;
    // correlated samples: reported, not gated
    histogram_checks(id, h, false, w, s);
    w.out.summary = s;
}

void kicked_mean_figure(const std::string& id, Scenario sc, const std::vector<int>& ms, Writer& w) {
    const int samples = static_cast<int>(w.o.samples.value_or(kKickedSamples));
    std::string csv = table_header();
    nlohmann::json reports = nlohmann::json::array();
    for (std::size_t set = 0; set < kSingleSets.size(); ++set)
        for (int m : ms) {
            const auto c = top(25, m, kSingleSets[set], samples);
            ComparisonReport r = kicked_top_mean_bures(c, sc);
            report_checks(id, r, false, w);
            const std::string label = "CKT" + std::to_string(set + 1);
            csv += table_row(label, r);
            nlohmann::json j = r.to_json();
            j["label"] = label;
            j["kicked_top"] = config_json(c);
            reports.push_back(j);
        }
    w.put(id + ".csv", csv);
    w.out.summary = {{"figure", id}, {"reports", reports}};
}

void kicked_pair_mean_figure(const std::string& id, const std::vector<std::pair<int, int>>& ms, Writer& w) {
    const int samples = static_cast<int>(w.o.samples.value_or(kKickedSamples));
    std::string csv = table_header();
    nlohmann::json reports = nlohmann::json::array();
    for (std::size_t set = 0; set < kPairSets.size(); ++set)
        for (const auto& [m1, m2] : ms) {
            const auto a = top(25, m1, kPairSets[set][0], samples);
            const auto b = top(25, m2, kPairSets[set][1], samples);
            ComparisonReport r = kicked_top_mean_bures(a, Scenario::TwoRandom, b);
            report_checks(id, r, false, w);
            const std::string label = "CKTP" + std::to_string(set + 1);
            csv += table_row(label, r);
            nlohmann::json j = r.to_json();
            j["label"] = label;
            j["kicked_top_a"] = config_json(a);
            j["kicked_top_b"] = config_json(b);
            reports.push_back(j);
        }
    w.put(id + ".csv", csv);
    w.out.summary = {{"figure", id}, {"reports", reports}};
}

std::vector<std::tuple<Scenario, int, int, int>> grid_cases(int n) {
    std::vector<std::tuple<Scenario, int, int, int>> cases;
    for (int a = n; a <= n + 3; ++a)
        for (int b = a; b <= n + 3; ++b) cases.emplace_back(Scenario::TwoRandom, n, a, b);
    return cases;
}

std::vector<std::tuple<Scenario, int, int, int>> sweep_cases(Scenario sc) {
    std::vector<std::tuple<Scenario, int, int, int>> cases;
    for (int m = 5; m <= 10; ++m) cases.emplace_back(sc, 5, m, 0);
    return cases;
}

const FixedStateSpectrum& fig3c_sigma() {
    static const FixedStateSpectrum s({0.09, 0.12, 0.21, 0.28, 0.30});
    return s;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig1a", "fig1b", "fig1c", "fig2a", "fig2b", "fig3a",
                                                 "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig5a",
                                                 "fig5b", "fig6a", "fig6b", "fig7",  "fig8",  "fig9",
                                                 "fig10"};
    return ids;
}

FigureOutput run_figure(const std::string& id, const FigureOverrides& o) {
    if (o.bins < 10) throw DomainError("figure: need at least 10 bins");
    if (o.grid < 2) throw DomainError("figure: need at least 2 grid points");
    if (o.samples && *o.samples == 0) throw DomainError("figure: samples must be positive");
    FigureOutput out;
    Writer w{o, out};
    const int kicked = static_cast<int>(o.samples.value_or(kKickedSamples));

    if (id == "fig1a")
        rmt_density_figure(id, Scenario::Fixed, 3, 8, 0, FixedStateSpectrum({0.15, 0.33, 0.52}), w);
    else if (id == "fig1b")
        rmt_density_figure(id, Scenario::Fixed, 4, 9, 0, FixedStateSpectrum({0.07, 0.17, 0.35, 0.41}), w);
    else if (id == "fig1c")
        rmt_density_figure(id, Scenario::Fixed, 5, 10, 0, fig3c_sigma(), w);
    else if (id == "fig2a")
        rmt_density_figure(id, Scenario::Pure, 5, 6, 0, std::nullopt, w);
    else if (id == "fig2b")
        rmt_density_figure(id, Scenario::Mixed, 5, 6, 0, std::nullopt, w);
    else if (id == "fig3a")
        rmt_mean_figure(id, sweep_cases(Scenario::Pure), std::nullopt, w);
    else if (id == "fig3b")
        rmt_mean_figure(id, sweep_cases(Scenario::Mixed), std::nullopt, w);
    else if (id == "fig3c")
        rmt_mean_figure(id, sweep_cases(Scenario::Fixed), fig3c_sigma(), w);
    else if (id == "fig4a")
        rmt_density_figure(id, Scenario::TwoRandom, 3, 6, 7, std::nullopt, w);
    else if (id == "fig4b")
        rmt_density_figure(id, Scenario::TwoRandom, 4, 5, 8, std::nullopt, w);
    else if (id == "fig4c")
        rmt_density_figure(id, Scenario::TwoRandom, 5, 8, 10, std::nullopt, w);
    else if (id == "fig5a")
        rmt_mean_figure(id, grid_cases(2), std::nullopt, w);
    else if (id == "fig5b")
        rmt_mean_figure(id, grid_cases(5), std::nullopt, w);
    else if (id == "fig6a")
        kicked_density_figure(id, Scenario::Pure, top(25, 45, kSingleSets[0], kicked), std::nullopt, w);
    else if (id == "fig6b")
        kicked_density_figure(id, Scenario::Mixed, top(25, 35, kSingleSets[0], kicked), std::nullopt, w);
    else if (id == "fig7")
        kicked_mean_figure(id, Scenario::Pure, {35, 39, 45, 49}, w);
    else if (id == "fig8")
        kicked_mean_figure(id, Scenario::Mixed, {35, 39, 45, 49}, w);
    else if (id == "fig9")
        kicked_density_figure(id, Scenario::TwoRandom, top(15, 17, kPairSets[0][0], kicked),
                              top(15, 21, kPairSets[0][1], kicked), w);
    else if (id == "fig10")
        kicked_pair_mean_figure(id, {{27, 31}, {31, 37}, {35, 41}, {41, 49}}, w);
    else
        throw DomainError("unknown figure id '" + id + "'");

    out.summary["seed"] = o.seed;
    out.summary["version"] = kVersion;
    out.summary["failures"] = out.failures;
    w.put(id + ".json", out.summary.dump(2) + "\n");
    return out;
}

}  // namespace bures::harness
