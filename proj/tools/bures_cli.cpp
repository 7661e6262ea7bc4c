// Command-line front end: closed-form densities and means, Monte Carlo
// comparisons, kicked-top ensembles and figure reproduction.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bures/analytic.hpp"
#include "bures/error.hpp"
#include "bures/harness.hpp"
#include "bures/kickedtop.hpp"

namespace {

using namespace bures;
using analytic::Scenario;
using states::FixedStateSpectrum;

enum Exit { kOk = 0, kIo = 1, kParam = 2, kConvergence = 3, kConsistency = 4 };

std::optional<FixedStateSpectrum> spectrum(const std::vector<double>& eigs) {
    if (eigs.empty()) return std::nullopt;
    return FixedStateSpectrum(eigs);
}

int resolve_n(int n, const std::vector<double>& eigs) {
    if (eigs.empty()) return n;
    const int d = static_cast<int>(eigs.size());
    if (n != 0 && n != d) throw DimensionMismatch("--n disagrees with the number of --sigma-eigs");
    return d;
}

void emit(const nlohmann::json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty())
        std::cout << text;
    else
        harness::write_file(path, text);
}

int density_exit(const analytic::GridDensity& g) {
    if (!g.normalization_ok) {
        std::cerr << "consistency: " << g.warning << "\n";
        return kConsistency;
    }
    return kOk;
}

nlohmann::json grid_json(const analytic::GridDensity& g) {
    return {{"normalization", g.normalization},
            {"normalization_trapezoid", g.trapezoid},
            {"normalization_ok", g.normalization_ok},
            {"points", g.abscissae.size()},
            {"warning", g.warning}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fidelity and Bures distance statistics of random density matrices"};
    app.require_subcommand(1);

    // density-fixed
    auto* dfix = app.add_subcommand("density-fixed", "spectral density of sqrt(sigma) rho sqrt(sigma)");
    int df_n = 0, df_m = 0, df_grid = 400;
    std::vector<double> df_eigs;
    std::string df_out;
    dfix->add_option("--n", df_n, "dimension (defaults to the number of eigenvalues)");
    dfix->add_option("--m", df_m, "ancilla dimension of rho")->required();
    dfix->add_option("--sigma-eigs", df_eigs, "eigenvalues of sigma")->delimiter(',')->required();
    dfix->add_option("--grid", df_grid, "grid points");
    dfix->add_option("--out", df_out, "CSV file")->required();

    // density-two
    auto* dtwo = app.add_subcommand("density-two", "spectral density of sqrt(rho1) rho2 sqrt(rho1)");
    int dt_n = 0, dt_m1 = 0, dt_m2 = 0, dt_grid = 400;
    std::string dt_out;
    dtwo->add_option("--n", dt_n)->required();
    dtwo->add_option("--m1", dt_m1)->required();
    dtwo->add_option("--m2", dt_m2)->required();
    dtwo->add_option("--grid", dt_grid);
    dtwo->add_option("--out", dt_out, "CSV file")->required();

    // mean
    auto* mean = app.add_subcommand("mean", "closed-form mean root fidelity and mean square Bures distance");
    std::string mn_scenario;
    int mn_n = 0, mn_m = 0, mn_m2 = 0;
    std::vector<double> mn_eigs;
    mean->add_option("--scenario", mn_scenario, "fixed|pure|mixed|two")->required();
    mean->add_option("--n", mn_n);
    mean->add_option("--m", mn_m)->required();
    mean->add_option("--m2", mn_m2);
    mean->add_option("--sigma-eigs", mn_eigs)->delimiter(',');

    // mc
    auto* mc = app.add_subcommand("mc", "Monte Carlo comparison against the closed forms");
    std::string mc_scenario, mc_out;
    int mc_n = 0, mc_m = 0, mc_m2 = 0, mc_bins = 0;
    std::uint64_t mc_samples = 20000, mc_seed = 1;
    std::vector<double> mc_eigs;
    mc->add_option("--scenario", mc_scenario, "fixed|pure|mixed|two")->required();
    mc->add_option("--n", mc_n);
    mc->add_option("--m", mc_m)->required();
    mc->add_option("--m2", mc_m2);
    mc->add_option("--sigma-eigs", mc_eigs)->delimiter(',');
    mc->add_option("--samples", mc_samples);
    mc->add_option("--seed", mc_seed);
    mc->add_option("--bins", mc_bins, "histogram bins (>= 10); 0 skips the histogram");
    mc->add_option("--out", mc_out, "output prefix: writes PREFIX.json and, with --bins, PREFIX.csv");

    // kicked-top
    auto* kt = app.add_subcommand("kicked-top", "coupled kicked top ensemble against the closed forms");
    kickedtop::KickedTopConfig ka;
    std::optional<double> j2b, kappa1b, kappa2b, epsb;
    std::string kt_scenario = "mixed", kt_out;
    kt->add_option("--j1", ka.j1);
    kt->add_option("--j2", ka.j2);
    kt->add_option("--kappa1", ka.kappa1);
    kt->add_option("--kappa2", ka.kappa2);
    kt->add_option("--eps", ka.epsilon);
    kt->add_option("--theta1", ka.theta1);
    kt->add_option("--phi1", ka.phi1);
    kt->add_option("--theta2", ka.theta2);
    kt->add_option("--phi2", ka.phi2);
    kt->add_option("--transient", ka.transient);
    kt->add_option("--samples", ka.samples);
    kt->add_option("--thinning", ka.thinning);
    kt->add_option("--scenario", kt_scenario, "pure|mixed (single system); two is implied by --j2b");
    kt->add_option("--j2b", j2b, "j2 of the second system (enables pairs)");
    kt->add_option("--kappa1b", kappa1b);
    kt->add_option("--kappa2b", kappa2b);
    kt->add_option("--epsb", epsb);
    kt->add_option("--out", kt_out, "JSON file (stdout if omitted)");

    // figure
    auto* fig = app.add_subcommand("figure", "reproduce one figure as CSV + JSON");
    std::string fig_id;
    harness::FigureOverrides fo;
    std::uint64_t fig_samples = 0;
    fig->add_option("--id", fig_id, "fig1a ... fig10")->required();
    fig->add_option("--samples", fig_samples, "samples (matrices or kicked-top steps)");
    fig->add_option("--seed", fo.seed);
    fig->add_option("--out-dir", fo.out_dir);
    fig->add_option("--bins", fo.bins);
    fig->add_option("--grid", fo.grid);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParam;
    }

    try {
        if (*dfix) {
            const FixedStateSpectrum sigma(df_eigs);
            resolve_n(df_n, df_eigs);
            const analytic::TauDensity tau(sigma, df_m);
            const auto g = analytic::grid_density(tau, df_grid, tau.support(), tau.breakpoints());
            harness::write_file(df_out, harness::density_csv(g.abscissae, g.values));
            emit(grid_json(g), "");
            return density_exit(g);
        }
        if (*dtwo) {
            const analytic::ChiDensity chi(dt_n, dt_m1, dt_m2);
            const auto g = analytic::grid_density(chi, dt_grid, chi.support());
            harness::write_file(dt_out, harness::density_csv(g.abscissae, g.values));
            emit(grid_json(g), "");
            return density_exit(g);
        }
        if (*mean) {
            const Scenario sc = analytic::parse_scenario(mn_scenario);
            const int n = resolve_n(mn_n, mn_eigs);
            const auto r = harness::analytic_mean(sc, n, mn_m, mn_m2, spectrum(mn_eigs));
            nlohmann::json j{{"scenario", analytic::to_string(sc)},
                             {"n", n},
                             {"m1", mn_m},
                             {"mean_root_fidelity_analytic", r.mean_root_fidelity},
                             {"msbd_analytic", r.mean_sq_bures}};
            j["m2"] = sc == Scenario::TwoRandom ? nlohmann::json(mn_m2) : nlohmann::json(nullptr);
            j["sigma_eigs"] = mn_eigs;
            emit(j, "");
            return kOk;
        }
        if (*mc) {
            const Scenario sc = analytic::parse_scenario(mc_scenario);
            const int n = resolve_n(mc_n, mc_eigs);
            const auto sigma = spectrum(mc_eigs);
            const sampler::EnsembleSpec spec{n, mc_m, mc_m2, mc_samples, mc_seed};
            const auto report = harness::mc_mean_bures(spec, sc, sigma);
            emit(report.to_json(), mc_out.empty() ? "" : mc_out + ".json");
            if (mc_bins > 0) {
                auto h = harness::mc_histogram(spec, sc, mc_bins, sigma);
                const std::string csv = harness::histogram_csv(h);
                if (mc_out.empty())
                    std::cout << csv;
                else
                    harness::write_file(mc_out + ".csv", csv);
            }
            return kOk;
        }
        if (*kt) {
            Scenario sc = analytic::parse_scenario(kt_scenario);
            std::optional<kickedtop::KickedTopConfig> kb;
            if (j2b) {
                kickedtop::KickedTopConfig b = ka;
                b.j2 = *j2b;
                if (kappa1b) b.kappa1 = *kappa1b;
                if (kappa2b) b.kappa2 = *kappa2b;
                if (epsb) b.epsilon = *epsb;
                kb = b;
                sc = Scenario::TwoRandom;
            } else if (kappa1b || kappa2b || epsb) {
                throw DomainError("--kappa1b, --kappa2b and --epsb need --j2b");
            }
            const auto report = harness::kicked_top_mean_bures(ka, sc, kb);
            emit(report.to_json(), kt_out);
            return kOk;
        }
        if (*fig) {
            if (fig_samples > 0) fo.samples = fig_samples;
            const auto out = harness::run_figure(fig_id, fo);
            for (const auto& f : out.files) std::cout << f << "\n";
            for (const auto& f : out.failures) std::cerr << "check failed: " << f << "\n";
            return out.ok() ? kOk : kConsistency;
        }
    } catch (const DomainError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kParam;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kConvergence;
    } catch (const ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return kConsistency;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    }
    return kParam;
}
