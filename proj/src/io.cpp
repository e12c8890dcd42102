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

#include "bfc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "bfc/error.hpp"

namespace bfc::io {

namespace {

[[noreturn]] void parse_error(const std::string &what) { throw Error(ErrorCode::kParseError, what); }

template <typename T>
T get(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        parse_error(std::string("field '") + key + "': " + e.what());
    }
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(field);
    }
    return out;
}

template <typename T>
T parse_number(const std::string &text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) parse_error("not a number: '" + text + "'");
    return value;
}

std::vector<std::vector<std::string>> csv_rows(const std::string &csv, const std::vector<std::string> &header) {
    std::istringstream is(csv);
    std::string line;
    bool seen_header = false;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split(line, ',');
        if (!seen_header) {
            if (fields != header) parse_error("unexpected CSV header '" + line + "'");
            seen_header = true;
            continue;
        }
        if (fields.size() != header.size()) parse_error("wrong number of fields in '" + line + "'");
        rows.push_back(std::move(fields));
    }
    if (!seen_header) parse_error("empty CSV");
    return rows;
}

json vector_json(const std::vector<double> &v) { return json(v); }

} // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

json density_to_json(const DensityMatrix &rho) {
    const auto n = rho.dim();
    json re = json::array(), im = json::array();
    for (Eigen::Index a = 0; a < n; ++a) {
        std::vector<double> r(n), i(n);
        for (Eigen::Index b = 0; b < n; ++b) {
            r[b] = rho(a, b).real();
            i[b] = rho(a, b).imag();
        }
        re.push_back(r);
        im.push_back(i);
    }
    return json{{"dim", n}, {"re", re}, {"im", im}};
}

DensityMatrix density_from_json(const json &j) {
    const int n = get<int>(j, "dim");
    const auto re = get<std::vector<std::vector<double>>>(j, "re");
    const auto im = get<std::vector<std::vector<double>>>(j, "im");
    if (n < 1 || static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n)
        parse_error("density matrix rows do not match dim");
    CMatrix m(n, n);
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(re[a].size()) != n || static_cast<int>(im[a].size()) != n)
            parse_error("density matrix columns do not match dim");
        for (int b = 0; b < n; ++b) m(a, b) = cplx(re[a][b], im[a][b]);
    }
    return make_density(std::move(m));
}

json plan_to_json(const SettingPlan &plan) {
    json settings = json::array();
    for (const auto &s : plan.settings)
        settings.push_back(json{{"theta", vector_json(s.theta)}, {"phi", vector_json(s.phi)}, {"delta", s.delta}});
    return json{{"d", plan.d}, {"delta_max", plan.delta_max}, {"seed", plan.seed}, {"settings", settings}};
}

SettingPlan plan_from_json(const json &j) {
    SettingPlan plan;
    plan.d = get<int>(j, "d");
    plan.delta_max = get<double>(j, "delta_max");
    plan.seed = get<std::uint64_t>(j, "seed");
    const json &settings = j.at("settings");
    if (!settings.is_array()) parse_error("'settings' must be an array");
    for (const auto &s : settings) {
        MeasurementSetting m;
        m.theta = get<std::vector<double>>(s, "theta");
        m.phi = get<std::vector<double>>(s, "phi");
        m.delta = get<double>(s, "delta");
        plan.settings.push_back(std::move(m));
    }
    try {
        plan.validate();
    } catch (const Error &e) {
        parse_error(e.what());
    }
    return plan;
}

std::string counts_to_csv(const CoincidenceDataset &data) {
    std::string out = "r,m,n,counts\n";
    for (int r = 0; r < data.settings(); ++r)
        for (int m = 0; m < data.d(); ++m)
            for (int n = 0; n < data.d(); ++n)
                out += std::to_string(r + 1) + ',' + std::to_string(m + 1) + ',' + std::to_string(n + 1) + ',' +
                       std::to_string(data.at(r, m, n)) + '\n';
    return out;
}

json dataset_sidecar(const CoincidenceDataset &data) {
    json j{{"d", data.d()}, {"R_tot", data.settings()}, {"exposure", data.exposure()}};
    j["seed"] = data.seed ? json(*data.seed) : json(nullptr);
    return j;
}

CoincidenceDataset dataset_from_csv(const std::string &csv, const json &sidecar) {
    const int d = get<int>(sidecar, "d");
    const int r_tot = get<int>(sidecar, "R_tot");
    if (d < 2 || r_tot < 1) parse_error("sidecar needs d >= 2 and R_tot >= 1");
    CoincidenceDataset data(d, r_tot);
    if (sidecar.contains("exposure")) {
        try {
            data.set_exposure(get<std::vector<double>>(sidecar, "exposure"));
        } catch (const Error &e) {
            parse_error(e.what());
        }
    }
    if (sidecar.contains("seed") && !sidecar.at("seed").is_null()) data.seed = get<std::uint64_t>(sidecar, "seed");

    const auto rows = csv_rows(csv, {"r", "m", "n", "counts"});
    if (rows.empty()) parse_error("counts file has no data rows");
    std::vector<bool> seen(static_cast<std::size_t>(r_tot) * d * d, false);
    for (const auto &row : rows) {
        const int r = parse_number<int>(row[0]);
        const int m = parse_number<int>(row[1]);
        const int n = parse_number<int>(row[2]);
        const auto c = parse_number<std::int64_t>(row[3]);
        if (r < 1 || r > r_tot || m < 1 || m > d || n < 1 || n > d) parse_error("index out of range in counts file");
        if (c < 0) parse_error("negative count");
        const std::size_t key = (static_cast<std::size_t>(r - 1) * d + (m - 1)) * d + (n - 1);
        if (seen[key]) parse_error("duplicate bin in counts file");
        seen[key] = true;
        data.at(r - 1, m - 1, n - 1) = c;
    }
    for (bool s : seen)
        if (!s) parse_error("counts file does not cover every (r, m, n)");
    return data;
}

json param_to_json(const ParamVector &x) {
    std::vector<double> re(x.y.size()), im(x.y.size());
    for (Eigen::Index i = 0; i < x.y.size(); ++i) {
        re[i] = x.y[i].real();
        im[i] = x.y[i].imag();
    }
    return json{{"y_re", re}, {"y_im", im}, {"z", x.z}};
}

ParamVector param_from_json(const json &j) {
    const auto re = get<std::vector<double>>(j, "y_re");
    const auto im = get<std::vector<double>>(j, "y_im");
    if (re.size() != im.size()) parse_error("parameter vector halves differ in length");
    ParamVector x;
    x.y.resize(static_cast<Eigen::Index>(re.size()));
    for (std::size_t i = 0; i < re.size(); ++i) x.y[static_cast<Eigen::Index>(i)] = cplx(re[i], im[i]);
    x.z = get<double>(j, "z");
    return x;
}

json chain_config_to_json(const ChainConfig &cfg) {
    return json{{"samples", cfg.samples},         {"thinning", cfg.thinning},       {"beta", cfg.beta},
                {"burn_in", cfg.burn_in},         {"seed", cfg.seed},               {"accept_low", cfg.accept_low},
                {"accept_high", cfg.accept_high}, {"adapt_window", cfg.adapt_window}};
}

ChainConfig chain_config_from_json(const json &j) {
    ChainConfig cfg;
    cfg.samples = get<int>(j, "samples");
    cfg.thinning = get<int>(j, "thinning");
    cfg.beta = get<double>(j, "beta");
    cfg.burn_in = get<int>(j, "burn_in");
    cfg.seed = get<std::uint64_t>(j, "seed");
    cfg.accept_low = get<double>(j, "accept_low");
    cfg.accept_high = get<double>(j, "accept_high");
    cfg.adapt_window = get<int>(j, "adapt_window");
    return cfg;
}

json checkpoint_to_json(const ChainCheckpoint &cp) {
    json samples = json::array();
    for (const auto &s : cp.samples) samples.push_back(param_to_json(s));
    return json{{"config", chain_config_to_json(cp.config)},
                {"state", param_to_json(cp.state.x)},
                {"log_like", cp.state.log_like},
                {"beta", cp.beta},
                {"rng_state", cp.rng_state},
                {"steps", cp.steps},
                {"accepted", cp.accepted},
                {"burned_in", cp.burned_in},
                {"n", cp.level},
                {"samples", samples}};
}

ChainCheckpoint checkpoint_from_json(const json &j) {
    ChainCheckpoint cp;
    cp.config = chain_config_from_json(j.at("config"));
    cp.state.x = param_from_json(j.at("state"));
    // -inf is stored as null by the JSON writer.
    cp.state.log_like = j.at("log_like").is_null() ? -std::numeric_limits<double>::infinity() : get<double>(j, "log_like");
    cp.beta = get<double>(j, "beta");
    cp.rng_state = get<std::string>(j, "rng_state");
    cp.steps = get<std::int64_t>(j, "steps");
    cp.accepted = get<std::int64_t>(j, "accepted");
    cp.burned_in = get<bool>(j, "burned_in");
    cp.level = get<int>(j, "n");
    for (const auto &s : j.at("samples")) cp.samples.push_back(param_from_json(s));
    return cp;
}

json summary_to_json(const PosteriorSummary &s) {
    json seq = json::array();
    for (const auto &[n, f] : s.sequential_fidelities) seq.push_back(json{{"n", n}, {"fidelity", f}});
    return json{{"fidelity_mean", s.fidelity_mean},
                {"fidelity_std", s.fidelity_std},
                {"logneg_mean", s.logneg_mean},
                {"logneg_std", s.logneg_std},
                {"K_mean", s.k_mean},
                {"K_std", s.k_std},
                {"acceptance_rate", s.acceptance_rate},
                {"beta", s.beta},
                {"n_stop", s.n_stop},
                {"converged", s.converged},
                {"sequential_fidelities", seq},
                {"rho_mean", density_to_json(s.rho_mean)}};
}

std::string schedule_to_csv(const std::vector<std::pair<int, double>> &schedule) {
    std::string out = "n,fidelity\n";
    for (const auto &[n, f] : schedule) out += std::to_string(n) + ',' + format_double(f) + '\n';
    return out;
}

std::string histogram_to_csv(const DesignHistogram &h) {
    std::string out = "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        out += format_double(h.edges[i]) + ',' + format_double(h.edges[i + 1]) + ',' + std::to_string(h.counts[i]) + '\n';
    return out;
}

std::vector<std::pair<double, double>> calibration_from_csv(const std::string &csv) {
    std::vector<std::pair<double, double>> out;
    for (const auto &row : csv_rows(csv, {"x", "counts"})) out.emplace_back(parse_number<double>(row[0]), parse_number<double>(row[1]));
    return out;
}

std::string calibration_to_csv(const std::vector<std::pair<double, double>> &samples) {
    std::string out = "x,counts\n";
    for (const auto &[x, c] : samples) out += format_double(x) + ',' + format_double(c) + '\n';
    return out;
}

json fit_to_json(const CorrelationFit &fit) {
    json params{{"gamma", fit.params.gamma},   {"phi", fit.params.phi},     {"phi0", fit.params.phi0},
                {"detune", fit.params.detune}, {"scale", fit.params.scale}, {"offset", fit.params.offset}};
    json sigma{{"gamma", fit.sigma_gamma},
               {"phi0", fit.sigma_phi0},
               {"omega_fsr", fit.sigma_omega_fsr},
               {"scale", fit.sigma_scale},
               {"offset", fit.sigma_offset}};
    json out{{"mode", fit.mode == SweepMode::kPhaseSweep ? "phase_sweep" : "frequency_sweep"},
             {"params", params},
             {"uncertainty", sigma},
             {"residual_sum", fit.residual_sum},
             {"samples", fit.samples}};
    if (fit.mode == SweepMode::kFrequencySweep) {
        out["omega_fsr"] = fit.omega_fsr;
        out["fsr_ghz"] = fit.omega_fsr / (kTwoPi * 1e9);
        out["linewidth_ghz"] = fit.params.gamma / (kTwoPi * 1e9);
    }
    return out;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
        out << content;
        if (!out) throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot rename into " + path.string() + ": " + ec.message());
}

} // namespace bfc::io
