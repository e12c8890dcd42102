// Copyright 2026 The bfctomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Usage: acceptance [work_dir]

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bfc/bayes.hpp"
#include "bfc/design.hpp"
#include "bfc/error.hpp"
#include "bfc/io.hpp"
#include "bfc/measmodel.hpp"
#include "bfc/qstate.hpp"
#include "bfc/synth.hpp"
#include "cli.hpp"
#include "oracles.hpp"

namespace {

using namespace bfc;
namespace fs = std::filesystem;
using cli::json;

fs::path g_work;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

void info(const std::string &line) { std::printf("        %s\n", line.c_str()); }

int bfctomo(const std::vector<std::string> &args) {
    std::vector<const char *> argv{"bfctomo"};
    for (const auto &a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (!err.str().empty()) info("bfctomo: " + err.str().substr(0, err.str().find('\n')));
    return code;
}

fs::path fresh(const std::string &name) {
    const fs::path p = g_work / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json read_json(const fs::path &p) { return json::parse(io::read_file(p)); }

PureState bell(int d) {
    const std::vector<double> zeros(d, 0.0);
    return maximally_entangled(FrequencyGrid{d}, zeros);
}

// ---------------------------------------------------------------------------

Outcome theory_table() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = fresh("c1");
    if (bfctomo({"theory", "--d-min", "3", "--d-max", "5", "--car", "90", "--out", dir.string()}) != 0)
        return {false, "theory command failed"};
    std::istringstream csv(io::read_file(dir / "theory.csv"));
    std::string line;
    std::getline(csv, line);
    const double f_expected[] = {0.971, 0.960, 0.949};
    const double e_expected[] = {1.58, 2.00, 2.32};
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 3 && std::getline(csv, line); ++i) {
        std::vector<double> row;
        std::istringstream ls(line);
        for (std::string field; std::getline(ls, field, ',');) row.push_back(std::stod(field));
        const int d = 3 + i;
        const double f = std::round(row[3] * 1000.0) / 1000.0;
        const double e = std::round(log_negativity(bell(d).projector(), d) * 100.0) / 100.0;
        ok = ok && row[0] == d && std::abs(f - f_expected[i]) < 1e-9 && std::abs(e - e_expected[i]) < 1e-9;
        detail += fmt("F%d=%.3f E%d=%.2f ", d, f, d, e);
    }
    const double elapsed = seconds_since(start);
    return {ok && elapsed < 1.0, detail + fmt("(%.3f s)", elapsed)};
}

Outcome forward_fixture() {
    const auto start = std::chrono::steady_clock::now();
    const int d = 4;
    const DensityMatrix ent = bell(d).projector();
    CMatrix sep = CMatrix::Zero(d * d, d * d);
    for (int k = 0; k < d; ++k) sep(k * d + k, k * d + k) = 0.25;
    const DensityMatrix classical = make_density(sep);

    Rng rng(2024);
    auto seeded_setting = [&](double delta) {
        MeasurementSetting s;
        s.delta = delta;
        for (int k = 0; k < d; ++k) s.theta.push_back(kTwoPi * rng.uniform());
        for (int k = 0; k < d; ++k) s.phi.push_back(kTwoPi * rng.uniform());
        return s;
    };
    const MeasurementSetting s0 = seeded_setting(0.0);
    const double diff0 = (outcome_probabilities(ent, s0, d) - outcome_probabilities(classical, s0, d)).cwiseAbs().maxCoeff();
    bool ok = diff0 < 1e-12;
    std::string detail = fmt("delta=0 max|dp|=%.1e", diff0);
    for (double delta : {1.5, 2.0}) {
        const MeasurementSetting s = seeded_setting(delta);
        const double diff = (outcome_probabilities(ent, s, d) - outcome_probabilities(classical, s, d)).cwiseAbs().maxCoeff();
        ok = ok && diff > 0.01;
        detail += fmt(", delta=%.1f max|dp|=%.3f", delta, diff);
    }
    const double elapsed = seconds_since(start);
    return {ok && elapsed < 1.0, detail + fmt(" (%.3f s)", elapsed)};
}

// Criterion 3 dataset and inference, written through the command-line front end.
std::vector<std::string> tomography_args(const fs::path &dir) {
    return {"--blocked", "3", "--spacing-ghz", "40", "--phases", "dispersion", "--seed", "3", "--out", dir.string()};
}

const std::vector<std::string> kTomographyFiles = {"settings.json", "counts.csv", "counts.json", "truth.json",
                                                   "summary.json",  "rho.json",   "checkpoint.json", "schedule.csv"};

int run_tomography(const fs::path &dir) {
    std::vector<std::string> sim = {"simulate", "--d", "3", "--R-tot", "21", "--delta-max", "2.5", "--car", "90",
                                    "--K", "20000"};
    const auto common = tomography_args(dir);
    sim.insert(sim.end(), common.begin(), common.end());
    if (const int code = bfctomo(sim); code != 0) return code;
    std::vector<std::string> inf = {"infer", "--threshold", "0.99"};
    inf.insert(inf.end(), common.begin(), common.end());
    return bfctomo(inf);
}

Outcome end_to_end() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = fresh("c3");
    const int code = run_tomography(dir);
    if (code != 0 && code != cli::kExitBudget) return {false, fmt("pipeline exit code %d", code)};
    const json s = read_json(dir / "summary.json");
    const DensityMatrix rho = io::density_from_json(read_json(dir / "rho.json"));
    const DensityMatrix truth = io::density_from_json(read_json(dir / "truth.json"));
    const double f_true = uhlmann_fidelity(rho, truth);
    const double f = s["fidelity_mean"], df = s["fidelity_std"];
    const double theory = white_noise_theory(3, lambda_from_car(90.0, 3)).fidelity;
    const bool converged = s["converged"];
    const bool ok = converged && f_true >= 0.98 && std::abs(f - theory) <= 3.0 * df;
    return {ok, fmt("F(rho_B, rho_true)=%.4f, F=%.4f +- %.4f vs %.4f, n_stop=%d%s (%.0f s)", f_true, f, df, theory,
                    s["n_stop"].get<int>(), converged ? "" : " not converged", seconds_since(start))};
}

Outcome convergence_vs_r() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path data = g_work / "c3";
    if (!fs::exists(data / "summary.json")) return {false, "criterion 3 outputs missing"};
    const json full = read_json(data / "summary.json");
    double f[2], df[2];
    const int rs[2] = {10, 1};
    for (int i = 0; i < 2; ++i) {
        const fs::path dir = fresh("c4_r" + std::to_string(rs[i]));
        std::vector<std::string> args = {"infer",  "--settings", (data / "settings.json").string(),
                                         "--counts", (data / "counts.csv").string(), "--first-R", std::to_string(rs[i])};
        const auto common = tomography_args(dir);
        args.insert(args.end(), common.begin(), common.end());
        const int code = bfctomo(args);
        if (code != 0 && code != cli::kExitBudget) return {false, fmt("infer R=%d exit code %d", rs[i], code)};
        const json s = read_json(dir / "summary.json");
        f[i] = s["fidelity_mean"];
        df[i] = s["fidelity_std"];
        if (!s["converged"].get<bool>()) info(fmt("R=%d stopped at the thinning budget", rs[i]));
    }
    const double f21 = full["fidelity_mean"], df21 = full["fidelity_std"];
    const bool ok = std::abs(f21 - f[0]) <= 2.0 * (df21 + df[0]) && f[1] < f21;
    return {ok, fmt("F(21)=%.4f+-%.4f F(10)=%.4f+-%.4f F(1)=%.4f+-%.4f (%.0f s)", f21, df21, f[0], df[0], f[1], df[1],
                    seconds_since(start))};
}

// Criterion 5: pooled pCN chains against an importance-sampling oracle.
struct OracleRun {
    std::string pcn_json, oracle_json;
    Outcome outcome;
};

OracleRun oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    const SettingPlan plan = random_settings(2, 5, 2.5, 3);
    const DensityMatrix truth = white_noise_state(bell(2), 0.9);
    const CoincidenceDataset data = simulate_counts(truth, plan, 1e4, CountModel::kPoisson, 4);
    const FluxModel flux{default_k0(data, plan), 0.1};

    std::vector<ParamVector> pooled;
    for (int c = 0; c < 8; ++c) {
        ChainConfig cfg;
        cfg.samples = 1024;
        cfg.thinning = 1024;
        cfg.seed = derive_seed(5, static_cast<std::uint64_t>(c));
        const auto s = run_chain(data, plan, flux, cfg);
        pooled.insert(pooled.end(), s.begin(), s.end());
    }
    const DensityMatrix pcn = mean_density(pooled, 4);
    const double t_pcn = seconds_since(start);

    const testing::ImportanceEstimate prior = testing::prior_importance(data, plan, flux, 1000000, 6);
    const double prior_diff = (pcn.matrix() - prior.mean).cwiseAbs().maxCoeff();
    info(fmt("prior-proposal importance sampling, %lld draws: ESS=%.1f, max|diff|=%.3f", (long long)prior.draws,
             prior.ess, prior_diff));

    const testing::ImportanceEstimate oracle = testing::tempered_importance(data, plan, flux, 10000, 60, 7);
    const double diff = (pcn.matrix() - oracle.mean).cwiseAbs().maxCoeff();
    info(fmt("tempered importance sampling from prior draws: %d stages, %lld proposals, min ESS=%.0f", oracle.stages,
             (long long)oracle.draws, oracle.ess));

    OracleRun run;
    run.pcn_json = io::density_to_json(pcn).dump();
    run.oracle_json = io::density_to_json(make_density(0.5 * (oracle.mean + oracle.mean.adjoint()))).dump();
    const double elapsed = seconds_since(start);
    run.outcome = {diff <= 0.02 && elapsed < 600.0,
                   fmt("max elementwise |pCN - oracle|=%.4f (pCN %.0f s, total %.0f s)", diff, t_pcn, elapsed)};
    return run;
}

Outcome prior_correctness() {
    const auto start = std::chrono::steady_clock::now();
    const LogLikelihood flat = [](const ParamVector &) { return 0.0; };
    ChainConfig cfg;
    cfg.samples = 100000;
    cfg.burn_in = 2000;
    cfg.seed = 8;
    ChainDiagnostics diag;
    const std::vector<ParamVector> s = run_chain(flat, 4, cfg, &diag);

    // Each real and imaginary part is N(0, 1/2); z is N(0, 1).
    const Eigen::Index m = s.front().y.size();
    double min_p = 1.0;
    int below = 0;
    const int tests = 2 * static_cast<int>(m) + 1;
    for (Eigen::Index k = 0; k <= m; ++k)
        for (int part = 0; part < (k < m ? 2 : 1); ++part) {
            std::vector<double> v;
            v.reserve(s.size());
            for (const auto &x : s) v.push_back(k == m ? x.z : std::sqrt(2.0) * (part ? x.y[k].imag() : x.y[k].real()));
            const double p = testing::ks_normal_pvalue(std::move(v));
            min_p = std::min(min_p, p);
            below += p <= 0.01;
        }
    const double family_p = std::min(1.0, tests * min_p);

    Rng rng(9);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        const int n = i % 2 ? 9 : 4;
        const CVector y = rng.complex_normal_vector(2 * n * n);
        try {
            const CMatrix r = bures_density(y, n).matrix();
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(r, Eigen::EigenvaluesOnly);
            if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-12 || std::abs(r.trace() - 1.0) > 1e-12 ||
                eig.eigenvalues().minCoeff() < -1e-10)
                ++violations;
        } catch (const Error &) {
            ++violations;
        }
    }
    const bool ok = family_p > 0.01 && violations == 0;
    return {ok, fmt("%d KS tests on %zu steps: min p=%.3g (%d at or below 0.01), Bonferroni p=%.3g, beta=%.2f; "
                    "Bures violations %d/100000 (%.0f s)",
                    tests, s.size(), min_p, below, family_p, diag.beta, violations, seconds_since(start))};
}

std::vector<std::string> design_files() {
    std::vector<std::string> f;
    for (const char *v : {"4", "8", "16"}) {
        f.push_back(std::string("histogram_dmax") + v + ".csv");
        f.push_back(std::string("histogram_dmax") + v + ".json");
    }
    f.push_back("design_summary.json");
    return f;
}

int run_design(const fs::path &dir) {
    return bfctomo({"design", "--d", "8", "--R", "16", "--delta-max", "4", "8", "16", "--trials", "2000", "--seed", "10",
                    "--out", dir.string()});
}

Outcome design_study() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir = fresh("c7");
    if (const int code = run_design(dir); code != 0) return {false, fmt("design exit code %d", code)};
    const json summary = read_json(dir / "design_summary.json");
    const double tail4 = summary[0]["tail_fraction"], tail8 = summary[1]["tail_fraction"];
    const double med8 = summary[1]["median_singular_value"], med16 = summary[2]["median_singular_value"];
    const double elapsed = seconds_since(start);
    info(fmt("median at delta_max=4: %.4f", summary[0]["median_singular_value"].get<double>()));
    return {tail4 > tail8 && med8 > med16 && elapsed < 300.0,
            fmt("tail(4)=%.4f tail(8)=%.4f, median(8)=%.4f median(16)=%.4f (%.0f s)", tail4, tail8, med8, med16,
                elapsed)};
}

Outcome linearization_order() {
    Rng rng(11);
    int checked = 0, in_range = 0;
    double lo = 1e300, hi = 0.0;
    for (int d : {3, 5, 8})
        for (int k : {1, 2})
            for (int i = 0; i < 50; ++i) {
                const CMatrix rho = bures_density(rng.complex_normal_vector(2 * d * d), d).matrix();
                auto err = [&](double eps) {
                    const BandProbePrediction p = band_probe_predictions(rho, BandProbe{k, eps, true});
                    return std::sqrt((p.pk - p.linearized_pk).squaredNorm() +
                                     (p.pk_prime - p.linearized_pk_prime).squaredNorm());
                };
                const double ratio = err(1e-2) / err(5e-3);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                ++checked;
                in_range += ratio >= 3.2 && ratio <= 4.8;
            }
    return {in_range == checked, fmt("%d/%d ratios in [3.2, 4.8], observed [%.4f, %.4f]", in_range, checked, lo, hi)};
}

Outcome calibration() {
    const auto start = std::chrono::steady_clock::now();
    int success = 0;
    for (int i = 0; i < 100; ++i) {
        const auto samples = testing::frequency_sweep_samples(0.2, 40.5, 1e4, 50.0, 81, 3.0, 1000 + i);
        try {
            const CorrelationFit fit = fit_correlation(samples, SweepMode::kFrequencySweep);
            const double gamma = fit.params.gamma / (kTwoPi * 1e9), fsr = fit.omega_fsr / (kTwoPi * 1e9);
            success += std::abs(gamma - 0.2) <= 0.01 * 0.2 && std::abs(fsr - 40.5) <= 0.01 * 40.5;
        } catch (const Error &) {
        }
    }
    return {success >= 95, fmt("%d/100 fits within 1%% of 200 MHz and 40.5 GHz (%.1f s)", success, seconds_since(start))};
}

Outcome reproducibility(const OracleRun &first) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> mismatched;
    auto compare = [&](const fs::path &a, const fs::path &b, const std::vector<std::string> &files) {
        for (const auto &f : files)
            if (!fs::exists(a / f) || !fs::exists(b / f) || io::read_file(a / f) != io::read_file(b / f))
                mismatched.push_back(f);
    };
    const fs::path c3 = fresh("c10_c3");
    run_tomography(c3);
    compare(g_work / "c3", c3, kTomographyFiles);

    const OracleRun again = oracle_equivalence();
    if (again.pcn_json != first.pcn_json) mismatched.push_back("pCN mean");
    if (again.oracle_json != first.oracle_json) mismatched.push_back("oracle mean");

    const fs::path c7 = fresh("c10_c7");
    run_design(c7);
    compare(g_work / "c7", c7, design_files());

    std::string detail = mismatched.empty() ? "criteria 3, 5, 7 outputs byte-identical" : "differs:";
    for (const auto &m : mismatched) detail += " " + m;
    return {mismatched.empty(), detail + fmt(" (%.0f s)", seconds_since(start))};
}

} // namespace

int main(int argc, char **argv) {
    g_work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "bfc_acceptance";
    fs::create_directories(g_work);
    int failures = 0;
    auto report = [&](int id, const char *name, const Outcome &o) {
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    };
    auto guarded = [](const std::function<Outcome()> &f) -> Outcome {
        try {
            return f();
        } catch (const std::exception &e) {
            return {false, std::string("exception: ") + e.what()};
        }
    };

    report(1, "analytic theory table", guarded(theory_table));
    report(2, "forward-model fixture", guarded(forward_fixture));
    report(3, "end-to-end tomography d=3", guarded(end_to_end));
    report(4, "convergence versus R", guarded(convergence_vs_r));
    OracleRun oracle;
    report(5, "MCMC oracle equivalence", guarded([&] {
               oracle = oracle_equivalence();
               return oracle.outcome;
           }));
    report(6, "prior correctness", guarded(prior_correctness));
    report(7, "design study d=8", guarded(design_study));
    report(8, "linearization order", guarded(linearization_order));
    report(9, "calibration fits", guarded(calibration));
    report(10, "reproducibility", guarded([&] { return reproducibility(oracle); }));
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
