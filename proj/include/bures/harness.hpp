#pragma once

// Monte Carlo comparison harness: ensemble means of the squared Bures
// distance against the closed forms, eigenvalue histograms against the
// analytic densities, and the CSV / JSON files behind each figure.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bures/analytic.hpp"
#include "bures/kickedtop.hpp"
#include "bures/sampler.hpp"

namespace bures::harness {

using analytic::Scenario;

struct ComparisonReport {
    Scenario scenario = Scenario::Pure;
    std::string source = "wishart";  ///< "wishart" or "kicked-top"
    int n = 0, m1 = 0, m2 = 0;
    std::vector<double> sigma_eigs;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double mc_mean_root_fidelity = 0.0;
    double mc_stderr = 0.0;  ///< of the mean root fidelity
    double analytic_mean_root_fidelity = 0.0;
    double mc_msbd = 0.0;
    double analytic_msbd = 0.0;
    double percent_rel_diff = 0.0;

    double msbd_stderr() const { return 2.0 * mc_stderr; }
    /// |mc_msbd - analytic_msbd| in units of msbd_stderr()
    double z_score() const;
    nlohmann::json to_json() const;
};

/// Closed-form mean root fidelity for a scenario. `sigma` is required for
/// Scenario::Fixed; m2 only for Scenario::TwoRandom.
analytic::MeanFidelityResult analytic_mean(Scenario scenario, int n, int m1, int m2,
                                           const std::optional<states::FixedStateSpectrum>& sigma);

/// Independent Hilbert-Schmidt samples; spec.m2 is used for TwoRandom.
ComparisonReport mc_mean_bures(const sampler::EnsembleSpec& spec, Scenario scenario,
                               const std::optional<states::FixedStateSpectrum>& sigma = std::nullopt);

inline constexpr int kBatches = 50;

/// Kicked-top ensembles. Pure sigma is |j1, j1>, mixed is I/n. For
/// TwoRandom `second` supplies system B. Standard errors use kBatches batch
/// means of consecutive samples.
ComparisonReport kicked_top_mean_bures(const kickedtop::KickedTopConfig& config, Scenario scenario,
                                       const std::optional<kickedtop::KickedTopConfig>& second = std::nullopt);

struct HistogramData {
    double lower = 0.0, upper = 1.0;
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    std::vector<double> centers;
    std::vector<double> density;         ///< count / (total * width)
    std::vector<double> density_stderr;  ///< sqrt(count) / (total * width)
    std::vector<double> analytic;        ///< curve at the bin centres
    std::vector<double> expected_mass;   ///< integral of the curve over each bin
};

/// Bins values uniformly over [lower, upper]; values that fall outside by
/// rounding are assigned to the end bins.
HistogramData make_histogram(const std::vector<std::uint64_t>& counts, double lower, double upper);

/// Adds the analytic curve (centres and 7-point Gauss bin integrals).
void attach_curve(HistogramData& h, const analytic::Density& pdf);

/// Fraction of bins whose count is within k_sigma Poisson standard
/// deviations of total * expected_mass.
double poisson_agreement(const HistogramData& h, double k_sigma = 4.0);

/// Pooled eigenvalues of tau (Fixed, Mixed) or chi (TwoRandom), or the
/// fidelity itself (Pure), histogrammed over the analytic support.
HistogramData mc_histogram(const sampler::EnsembleSpec& spec, Scenario scenario, int bins,
                           const std::optional<states::FixedStateSpectrum>& sigma = std::nullopt);

/// Analytic density and its support for a scenario (n >= 2).
struct ScenarioDensity {
    analytic::Density pdf;
    std::pair<double, double> support;
    std::vector<double> breakpoints;
};
ScenarioDensity scenario_density(Scenario scenario, int n, int m1, int m2,
                                 const std::optional<states::FixedStateSpectrum>& sigma);

/// `x,analytic_pdf` rows, 15 significant digits.
std::string density_csv(const std::vector<double>& x, const std::vector<double>& pdf);
/// `x,analytic_pdf,mc_density,mc_stderr` rows at the bin centres.
std::string histogram_csv(const HistogramData& h);

struct FigureOverrides {
    std::optional<std::uint64_t> samples;
    std::uint64_t seed = 1;
    int bins = 60;
    int grid = 400;
    std::string out_dir = ".";
};

struct FigureOutput {
    std::vector<std::string> files;
    std::vector<std::string> failures;  ///< failed normalization / consistency checks
    nlohmann::json summary;
    bool ok() const { return failures.empty(); }
};

const std::vector<std::string>& figure_ids();

/// Throws DomainError for an unknown id; I/O failures raise Error.
FigureOutput run_figure(const std::string& id, const FigureOverrides& overrides);

void write_file(const std::string& path, const std::string& contents);

}  // namespace bures::harness
