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


#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "CLI11.hpp"

#include "bfc/bayes.hpp"
#include "bfc/correlation.hpp"
#include "bfc/design.hpp"
#include "bfc/error.hpp"
#include "bfc/io.hpp"
#include "bfc/measmodel.hpp"
#include "bfc/qstate.hpp"
#include "bfc/rng.hpp"
#include "bfc/synth.hpp"

namespace bfc::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void usage(const std::string &what) { throw Error(ErrorCode::kInvalidArguments, what); }

json ideal_state_defaults() {
    return json{{"blocked", 0},       {"spacing_ghz", 40.0},    {"phases", "uniform"},
                {"beta2", 2.06e-2},   {"fiber_length", 20.0},   {"include_offset", true}};
}

json merged(json base, const json &extra) {
    for (const auto &[key, value] : extra.items()) base[key] = value;
    return base;
}

fs::path resolve_output_dir(const json &config) {
    if (config.contains("output_dir") && config["output_dir"].is_string()) return config["output_dir"].get<std::string>();
    if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    return ".";
}

fs::path input_path(const json &config, const char *key, const fs::path &fallback) {
    if (config.contains(key) && config[key].is_string()) return config[key].get<std::string>();
    return fallback;
}

PureState ideal_state(const json &c, int d) {
    FrequencyGrid grid;
    grid.d = d;
    grid.blocked = c.at("blocked").get<int>();
    grid.delta_omega = kTwoPi * 1e9 * c.at("spacing_ghz").get<double>();
    grid.validate();
    std::vector<double> alphas(d, 0.0);
    const json &phases = c.at("phases");
    if (phases.is_array()) {
        alphas = phases.get<std::vector<double>>();
    } else if (phases == "dispersion") {
        DispersionConfig cfg;
        cfg.beta2 = c.at("beta2").get<double>();
        cfg.length = c.at("fiber_length").get<double>();
        cfg.include_offset = c.at("include_offset").get<bool>();
        alphas = dispersion_phases(grid, cfg);
    } else if (phases != "uniform") {
        usage("phases must be \"uniform\", \"dispersion\" or a list of d numbers");
    }
    return maximally_entangled(grid, alphas);
}

class Run {
  public:
    Run(std::string command, const json &config)
        : command_(std::move(command)), config_(config), dir_(config.at("output_dir").get<std::string>()),
          start_(std::chrono::steady_clock::now()) {}

    const fs::path &dir() const { return dir_; }

    void input(const fs::path &path) { inputs_.push_back(path.string()); }
    void seed(const std::string &name, std::uint64_t value) { seeds_[name] = value; }

    void write(const std::string &name, const std::string &content) {
        io::write_file_atomic(dir_ / name, content);
        outputs_.push_back((dir_ / name).string());
    }
    void write(const std::string &name, const json &content) { write(name, content.dump(2) + "\n"); }

    void finish(int exit_code) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
        json manifest{{"command", command_},      {"artifact_version", kArtifactVersion},
                      {"parameters", config_},    {"seeds", seeds_},
                      {"inputs", inputs_},        {"outputs", outputs_},
                      {"exit_code", exit_code},   {"duration_s", elapsed.count()}};
        io::write_file_atomic(dir_ / (command_ + "_manifest.json"), manifest.dump(2) + "\n");
    }

  private:
    std::string command_;
    json config_;
    fs::path dir_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> inputs_, outputs_;
    json seeds_ = json::object();
};

int cmd_simulate(const json &c, std::ostream &out) {
    Run run("simulate", c);
    const int d = c.at("d").get<int>();
    const int r_tot = c.at("R_tot").get<int>();
    const double delta_max = c.at("delta_max").get<double>();
    const double k = c.at("K").get<double>();
    const std::uint64_t seed = c.at("seed").get<std::uint64_t>();
    const std::string model_name = c.at("model").get<std::string>();
    if (model_name != "poisson" && model_name != "multinomial") usage("model must be poisson or multinomial");
    const CountModel model = model_name == "poisson" ? CountModel::kPoisson : CountModel::kMultinomial;
    std::vector<double> exposure;
    if (!c.at("exposure").is_null()) exposure = c.at("exposure").get<std::vector<double>>();

    std::optional<DensityMatrix> truth;
    if (c.at("rho_file").is_string()) {
        const fs::path path = c.at("rho_file").get<std::string>();
        run.input(path);
        truth = io::density_from_json(json::parse(io::read_file(path)));
        if (truth->dim() != static_cast<Eigen::Index>(d) * d) usage("rho_file dimension does not match d");
    } else {
        const bool has_car = !c.at("car").is_null(), has_lambda = !c.at("lambda").is_null();
        if (has_car == has_lambda) usage("give exactly one of car and lambda");
        const double lambda = has_lambda ? c.at("lambda").get<double>() : lambda_from_car(c.at("car").get<double>(), d);
        truth = white_noise_state(ideal_state(c, d), lambda);
    }

    const std::uint64_t plan_seed = derive_seed(seed, 0), count_seed = derive_seed(seed, 1);
    run.seed("seed", seed);
    run.seed("plan", plan_seed);
    run.seed("counts", count_seed);
    const SettingPlan plan = random_settings(d, r_tot, delta_max, plan_seed);
    const CoincidenceDataset data = simulate_counts(*truth, plan, k, model, count_seed, exposure);

    run.write("settings.json", io::plan_to_json(plan));
    run.write("counts.csv", io::counts_to_csv(data));
    run.write("counts.json", io::dataset_sidecar(data));
    run.write("truth.json", io::density_to_json(*truth));
    run.finish(kExitOk);

    const CarReport car = car_of_dataset(data);
    out << "simulate: d=" << d << " R_tot=" << r_tot << " delta_max=" << delta_max << " K=" << k
        << " JSI counts=" << data.setting_total(0) << " CAR in [" << car.min << ", " << car.max << "]\n"
        << "wrote " << run.dir().string() << "\n";
    return kExitOk;
}

int cmd_infer(const json &c, std::ostream &out, std::ostream &err) {
    Run run("infer", c);
    const fs::path settings_path = input_path(c, "settings", run.dir() / "settings.json");
    const fs::path counts_path = input_path(c, "counts", run.dir() / "counts.csv");
    const fs::path sidecar_path = input_path(c, "sidecar", fs::path(counts_path).replace_extension(".json"));
    run.input(settings_path);
    run.input(counts_path);
    run.input(sidecar_path);

    SettingPlan plan = io::plan_from_json(json::parse(io::read_file(settings_path)));
    CoincidenceDataset data =
        io::dataset_from_csv(io::read_file(counts_path), json::parse(io::read_file(sidecar_path)));
    if (data.d() != plan.d || data.settings() != plan.size())
        throw Error(ErrorCode::kDimensionMismatch, "counts and settings disagree on d or R_tot");
    if (!c.at("first_R").is_null()) {
        const int r = c.at("first_R").get<int>();
        if (r < 1 || r > plan.size()) usage("first_R must lie in [1, R_tot]");
        plan = plan.first(r);
        data = data.first(r);
    }
    const int d = plan.d;
    const PureState psi = ideal_state(c, d);

    FluxModel flux;
    flux.k0 = c.at("K0").is_null() ? default_k0(data, plan) : c.at("K0").get<double>();
    flux.sigma = c.at("sigma").get<double>();

    ChainConfig chain;
    chain.samples = c.at("samples").get<int>();
    chain.beta = c.at("beta").get<double>();
    chain.burn_in = c.at("burn_in").get<int>();
    chain.seed = c.at("seed").get<std::uint64_t>();
    chain.validate();
    const int chains = c.at("chains").get<int>();
    run.seed("seed", chain.seed);

    const PoissonLikelihood like(data, plan, flux);
    const ScheduleResult schedule = sequential_fidelity_schedule(
        std::cref(like), like.state_dim(), chain, c.at("threshold").get<double>(), c.at("max_n").get<int>(), chains);

    PosteriorSummary summary = bayes_estimates(schedule.samples, psi, d, flux);
    summary.acceptance_rate = schedule.acceptance_rate;
    summary.beta = schedule.beta;
    summary.n_stop = schedule.n_stop;
    summary.converged = schedule.converged;
    summary.sequential_fidelities = schedule.schedule;

    json summary_json = io::summary_to_json(summary);
    summary_json["R"] = plan.size();
    summary_json["K0"] = flux.k0;
    summary_json["chains"] = chains;
    run.write("summary.json", summary_json);
    run.write("rho.json", io::density_to_json(summary.rho_mean));
    run.write("checkpoint.json", io::checkpoint_to_json(schedule.checkpoint));
    run.write("schedule.csv", io::schedule_to_csv(schedule.schedule));

    out << "infer: R=" << plan.size() << " F=" << summary.fidelity_mean << " +- " << summary.fidelity_std
        << " E=" << summary.logneg_mean << " +- " << summary.logneg_std << " K=" << summary.k_mean << " +- "
        << summary.k_std << " acceptance=" << summary.acceptance_rate << " n_stop=" << summary.n_stop << "\n";
    const int code = schedule.converged ? kExitOk : kExitBudget;
    if (!schedule.converged)
        err << "warning: sequential fidelity stayed below the threshold up to n=" << schedule.n_stop
            << "; outputs hold the last estimate\n";
    run.finish(code);
    return code;
}

int cmd_design(const json &c, std::ostream &out) {
    Run run("design", c);
    DesignStudy study;
    study.d = c.at("d").get<int>();
    study.settings = c.at("R").is_null() ? 2 * study.d : c.at("R").get<int>();
    study.trials = c.at("trials").get<int>();
    study.seed = c.at("seed").get<std::uint64_t>();
    run.seed("seed", study.seed);
    const auto deltas = c.at("delta_max").get<std::vector<double>>();
    if (deltas.empty()) usage("delta_max needs at least one value");
    for (double delta : deltas) {
        study.delta_max = delta;
        study.validate();
    }

    json summary = json::array();
    for (double delta : deltas) {
        study.delta_max = delta;
        const DesignHistogram h = design_histogram(study);
        const std::string stem = "histogram_dmax" + io::format_double(delta);
        json side{{"d", study.d},
                  {"R", study.settings},
                  {"delta_max", delta},
                  {"trials", study.trials},
                  {"seed", study.seed},
                  {"median_singular_value", h.median_singular_value},
                  {"tail_fraction", h.tail_fraction},
                  {"tail_threshold_log10", kTailThreshold},
                  {"total", h.total}};
        run.write(stem + ".csv", io::histogram_to_csv(h));
        run.write(stem + ".json", side);
        summary.push_back(side);
        out << "design: delta_max=" << delta << " median=" << h.median_singular_value
            << " tail(log10 s < " << kTailThreshold << ")=" << h.tail_fraction << "\n";
    }
    run.write("design_summary.json", summary);
    run.finish(kExitOk);
    return kExitOk;
}

int cmd_theory(const json &c, std::ostream &out) {
    Run run("theory", c);
    const int d_min = c.at("d_min").get<int>(), d_max = c.at("d_max").get<int>();
    if (d_min < 2 || d_max < d_min) usage("need 2 <= d_min <= d_max");
    const auto cars = c.at("car").get<std::vector<double>>();
    const auto lambdas = c.at("lambda").get<std::vector<double>>();
    if (cars.empty() == lambdas.empty()) usage("give CAR values or lambda values, not both");
    for (double car : cars)
        if (!(car > 1.0)) usage("CAR must exceed 1");

    std::string csv = "d,lambda,car,fidelity,log_negativity\n";
    for (int d = d_min; d <= d_max; ++d) {
        const auto &values = cars.empty() ? lambdas : cars;
        for (double v : values) {
            const WhiteNoiseTheory t = white_noise_theory(d, cars.empty() ? v : lambda_from_car(v, d));
            csv += std::to_string(d) + ',' + io::format_double(t.lambda) + ',' + io::format_double(t.car) + ',' +
                   io::format_double(t.fidelity) + ',' + io::format_double(t.log_negativity) + '\n';
        }
    }
    run.write("theory.csv", csv);
    run.finish(kExitOk);
    out << csv;
    return kExitOk;
}

int cmd_calibrate(const json &c, std::ostream &out) {
    Run run("calibrate", c);
    if (!c.at("data").is_string()) usage("calibrate needs a data CSV");
    const fs::path data_path = c.at("data").get<std::string>();
    run.input(data_path);
    const std::string mode_name = c.at("mode").get<std::string>();
    if (mode_name != "phase" && mode_name != "frequency") usage("mode must be phase or frequency");
    FitOptions options;
    options.window = c.at("window").get<double>();
    options.total_phase = c.at("total_phase").get<double>();

    const auto samples = io::calibration_from_csv(io::read_file(data_path));
    try {
        const CorrelationFit fit = fit_correlation(
            samples, mode_name == "phase" ? SweepMode::kPhaseSweep : SweepMode::kFrequencySweep, options);
        run.write("calibration.json", io::fit_to_json(fit));
        if (fit.mode == SweepMode::kFrequencySweep)
            out << "calibrate: FSR=" << fit.omega_fsr / (kTwoPi * 1e9) << " GHz linewidth="
                << fit.params.gamma / (kTwoPi * 1e9) << " GHz\n";
        else
            out << "calibrate: phi0=" << fit.params.phi0 << " rad\n";
    } catch (const Error &e) {
        if (e.code() == ErrorCode::kFitDiverged) run.finish(kExitFit);
        throw;
    }
    run.finish(kExitOk);
    return kExitOk;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::kIoError:
        return kExitIo;
    case ErrorCode::kFitDiverged:
        return kExitFit;
    case ErrorCode::kAdaptationFailed:
        return kExitBudget;
    default:
        return kExitUsage;
    }
}

// Registers a flag whose value, when given, replaces config[key].
template <typename T>
void override_flag(CLI::App *app, std::vector<std::function<void(json &)>> &apply, const std::string &flag,
                   const std::string &key, const std::string &help) {
    auto value = std::make_shared<T>();
    CLI::Option *opt = app->add_option(flag, *value, help);
    apply.push_back([opt, value, key](json &j) {
        if (opt->count() > 0) j[key] = *value;
    });
}

} // namespace

json default_config(const std::string &command) {
    const json none = nullptr;
    if (command == "simulate")
        return merged(ideal_state_defaults(), json{{"d", 3},       {"R_tot", 21},    {"delta_max", 2.5},
                                                   {"K", 2.0e4},   {"car", 90.0},    {"lambda", none},
                                                   {"rho_file", none}, {"seed", 1},  {"model", "poisson"},
                                                   {"exposure", none}, {"output_dir", none}});
    if (command == "infer")
        return merged(ideal_state_defaults(),
                      json{{"settings", none}, {"counts", none},    {"sidecar", none},     {"first_R", none},
                           {"chains", 1},      {"samples", 1024},   {"beta", 0.1},         {"burn_in", -1},
                           {"seed", 1},        {"threshold", 0.99}, {"max_n", 10},         {"sigma", 0.1},
                           {"K0", none},       {"output_dir", none}});
    if (command == "design")
        return json{{"d", 8},    {"R", none},     {"delta_max", {4.0, 8.0, 16.0}},
                    {"trials", 2000}, {"seed", 1}, {"output_dir", none}};
    if (command == "theory")
        return json{{"d_min", 3}, {"d_max", 5}, {"car", {90.0}}, {"lambda", json::array()}, {"output_dir", none}};
    if (command == "calibrate")
        return json{{"data", none},       {"mode", "frequency"}, {"window", 5.0},
                    {"total_phase", 0.0}, {"output_dir", none}};
    usage("unknown command '" + command + "'");
}

json preset(const std::string &name) {
    if (name == "ppln")
        return json{{"d", 5},        {"R_tot", 21},          {"delta_max", 2.5},    {"car", 90.0},
                    {"lambda", nullptr}, {"K", 2500.0},      {"blocked", 3},        {"spacing_ghz", 40.0},
                    {"phases", "dispersion"}, {"beta2", 2.06e-2}, {"fiber_length", 20.0}};
    if (name == "mrr")
        return json{{"d", 8},        {"R_tot", 30},     {"delta_max", 3.4}, {"car", 30.0}, {"lambda", nullptr},
                    {"K", 2500.0},   {"blocked", 0},    {"spacing_ghz", 40.5}, {"phases", "uniform"}};
    usage("unknown preset '" + name + "' (expected ppln or mrr)");
}

json resolve_config(const std::string &command, const json &file_config, const std::string &preset_name,
                    const json &overrides) {
    json config = default_config(command);
    if (!preset_name.empty()) {
        const json named = preset(preset_name);
        for (const auto &[key, value] : named.items())
            if (config.contains(key)) config[key] = value;
    }

    json file = file_config.is_null() ? json::object() : file_config;
    if (!file.is_object()) usage("config must be a JSON object");
    // A manifest carries its parameters under "parameters".
    if (file.contains("command") && file.contains("parameters")) {
        if (file["command"] != command) usage("manifest belongs to command '" + file["command"].get<std::string>() + "'");
        file = file["parameters"];
    }
    for (const json *layer : std::initializer_list<const json *>{&file, &overrides}) {
        for (const auto &[key, value] : layer->items()) {
            if (!config.contains(key)) usage("unknown " + command + " parameter '" + key + "'");
            config[key] = value;
        }
        // Naming lambda alone replaces the CAR default.
        const bool lambda_given = layer->contains("lambda") && !(*layer)["lambda"].is_null() && !(*layer)["lambda"].empty();
        if (lambda_given && !layer->contains("car") && config.contains("car"))
            config["car"] = command == "theory" ? json::array() : json(nullptr);
    }
    config["output_dir"] = resolve_output_dir(config).string();
    return config;
}

int execute(const std::string &command, const json &config, std::ostream &out, std::ostream &err) {
    try {
        if (command == "simulate") return cmd_simulate(config, out);
        if (command == "infer") return cmd_infer(config, out, err);
        if (command == "design") return cmd_design(config, out);
        if (command == "theory") return cmd_theory(config, out);
        if (command == "calibrate") return cmd_calibrate(config, out);
        usage("unknown command '" + command + "'");
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const json::exception &e) {
        err << "error: bad parameter: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Bayesian tomography of frequency-bin entangled qudit pairs"};
    app.require_subcommand(1);

    struct Command {
        CLI::App *app;
        std::vector<std::function<void(json &)>> apply;
        std::string config_path, preset_name, output_dir;
    };
    std::map<std::string, Command> commands;
    const std::vector<std::pair<std::string, std::string>> names = {
        {"simulate", "Simulate coincidence counts for random settings"},
        {"infer", "Bayesian reconstruction from counts"},
        {"design", "Singular-value histograms of random measurement matrices"},
        {"theory", "Fidelity and log-negativity of white-noise states"},
        {"calibrate", "Fit a phase or frequency sweep"}};
    for (const auto &[name, help] : names) {
        Command &cmd = commands[name];
        cmd.app = app.add_subcommand(name, help);
        cmd.app->add_option("--config", cmd.config_path, "JSON config or manifest");
        cmd.app->add_option("--out", cmd.output_dir, std::string("Output directory (default $") + kOutputDirEnv + " or .)");
    }
    auto &sim = commands["simulate"];
    auto &inf = commands["infer"];
    for (Command *cmd : {&sim, &inf}) {
        cmd->app->add_option("--preset", cmd->preset_name, "Parameter preset: ppln or mrr");
        override_flag<int>(cmd->app, cmd->apply, "--blocked", "blocked", "Blocked central bins B");
        override_flag<double>(cmd->app, cmd->apply, "--spacing-ghz", "spacing_ghz", "Bin spacing in GHz");
        override_flag<std::string>(cmd->app, cmd->apply, "--phases", "phases", "Ideal-state phases: uniform or dispersion");
        override_flag<double>(cmd->app, cmd->apply, "--fiber-length", "fiber_length", "Fiber length in m");
        override_flag<std::uint64_t>(cmd->app, cmd->apply, "--seed", "seed", "Seed");
    }
    override_flag<int>(sim.app, sim.apply, "--d", "d", "Qudit dimension");
    override_flag<int>(sim.app, sim.apply, "--R-tot", "R_tot", "Number of settings");
    override_flag<double>(sim.app, sim.apply, "--delta-max", "delta_max", "Largest modulation index (rad)");
    override_flag<double>(sim.app, sim.apply, "--K", "K", "Flux K");
    override_flag<double>(sim.app, sim.apply, "--car", "car", "Coincidences-to-accidentals ratio");
    override_flag<double>(sim.app, sim.apply, "--lambda", "lambda", "Noise parameter lambda");
    override_flag<std::string>(sim.app, sim.apply, "--rho-file", "rho_file", "True state as density JSON");
    override_flag<std::string>(sim.app, sim.apply, "--model", "model", "poisson or multinomial");

    override_flag<std::string>(inf.app, inf.apply, "--settings", "settings", "Settings JSON");
    override_flag<std::string>(inf.app, inf.apply, "--counts", "counts", "Counts CSV");
    override_flag<std::string>(inf.app, inf.apply, "--sidecar", "sidecar", "Counts sidecar JSON");
    override_flag<int>(inf.app, inf.apply, "--first-R", "first_R", "Use only the first R settings");
    override_flag<int>(inf.app, inf.apply, "--chains", "chains", "Independent chains pooled per level");
    override_flag<int>(inf.app, inf.apply, "--samples", "samples", "Samples S per chain");
    override_flag<double>(inf.app, inf.apply, "--threshold", "threshold", "Sequential fidelity threshold");
    override_flag<int>(inf.app, inf.apply, "--max-n", "max_n", "Largest thinning level");
    override_flag<double>(inf.app, inf.apply, "--sigma", "sigma", "Relative width of the flux prior");
    override_flag<double>(inf.app, inf.apply, "--K0", "K0", "Flux prior mean (default: JSI total)");

    auto &des = commands["design"];
    override_flag<int>(des.app, des.apply, "--d", "d", "Qudit dimension");
    override_flag<int>(des.app, des.apply, "--R", "R", "Settings per matrix (default 2d)");
    override_flag<std::vector<double>>(des.app, des.apply, "--delta-max", "delta_max", "Largest modulation indices");
    override_flag<int>(des.app, des.apply, "--trials", "trials", "Matrices per histogram");
    override_flag<std::uint64_t>(des.app, des.apply, "--seed", "seed", "Seed");

    auto &the = commands["theory"];
    override_flag<int>(the.app, the.apply, "--d-min", "d_min", "Smallest dimension");
    override_flag<int>(the.app, the.apply, "--d-max", "d_max", "Largest dimension");
    override_flag<std::vector<double>>(the.app, the.apply, "--car", "car", "CAR values");
    override_flag<std::vector<double>>(the.app, the.apply, "--lambda", "lambda", "Lambda values");

    auto &cal = commands["calibrate"];
    override_flag<std::string>(cal.app, cal.apply, "--data", "data", "CSV with columns x,counts");
    override_flag<std::string>(cal.app, cal.apply, "--mode", "mode", "phase or frequency");
    override_flag<double>(cal.app, cal.apply, "--window", "window", "Integration half-window in units of 1/gamma");
    override_flag<double>(cal.app, cal.apply, "--total-phase", "total_phase", "Phase held during a frequency sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    for (auto &[name, cmd] : commands) {
        if (!cmd.app->parsed()) continue;
        json config;
        try {
            json file;
            if (!cmd.config_path.empty()) file = json::parse(io::read_file(cmd.config_path));
            json overrides = json::object();
            for (auto &apply : cmd.apply) apply(overrides);
            if (!cmd.output_dir.empty()) overrides["output_dir"] = cmd.output_dir;
            config = resolve_config(name, file, cmd.preset_name, overrides);
        } catch (const Error &e) {
            err << "error: " << e.what() << "\n";
            return exit_code_for(e.code());
        } catch (const json::exception &e) {
            err << "error: cannot parse config: " << e.what() << "\n";
            return kExitUsage;
        }
        return execute(name, config, out, err);
    }
    return kExitUsage;
}

} // namespace bfc::cli
