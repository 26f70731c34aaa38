// Copyright 2026 The cvplateau Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cvplateau/experiments.hpp"

#include "cvplateau/closed_forms.hpp"
#include "cvplateau/estimators.hpp"
#include "cvplateau/sampling.hpp"
#include "cvplateau/scaling_laws.hpp"
#include "cvplateau/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

namespace cvplateau::cli {

namespace {

// Random instance data (prop2, train) comes from streams far away from the
// estimator's per-chunk streams.
constexpr std::uint64_t kInstanceStream = std::uint64_t{1} << 62;

constexpr Command kAllCommands[] = {Command::Toy,   Command::Prop1,      Command::Prop2,
                                    Command::Heterodyne, Command::Noise, Command::Regimes,
                                    Command::Train};

std::string fmt(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto p = s.find(sep);
        out.push_back(trim(s.substr(0, p)));
        if (p == std::string_view::npos) {
            return out;
        }
        s.remove_prefix(p + 1);
    }
}

template <class T> std::optional<T> to_number(std::string_view s) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

template <class T> T number_field(const std::string &field, std::string_view text) {
    const auto v = to_number<T>(text);
    if (!v) {
        throw ConfigError(field, "not a number: '" + std::string(text) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(*v)) {
            throw ConfigError(field, "must be finite");
        }
    }
    return *v;
}

std::vector<double> number_list(const std::string &field, std::string_view text) {
    std::vector<double> out;
    for (auto tok : split(text, ',')) {
        out.push_back(number_field<double>(field, tok));
    }
    return out;
}

std::vector<int> mode_grid(std::string_view text) {
    std::vector<int> out;
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() < 2 || parts.size() > 3) {
            throw ConfigError("m", "range must be start:stop[:step]");
        }
        const int lo = number_field<int>("m", parts[0]);
        const int hi = number_field<int>("m", parts[1]);
        const int step = parts.size() == 3 ? number_field<int>("m", parts[2]) : 1;
        if (step < 1 || hi < lo) {
            throw ConfigError("m", "range needs start <= stop and step >= 1");
        }
        for (int m = lo; m <= hi; m += step) {
            out.push_back(m);
        }
    } else {
        for (auto tok : split(text, ',')) {
            out.push_back(number_field<int>("m", tok));
        }
    }
    for (int m : out) {
        if (m < 1) {
            throw ConfigError("m", "mode counts must be positive");
        }
    }
    return out;
}

/// An intensity law or an explicit list of values.
struct IntensitySpec {
    std::optional<IntensityLaw> law;
    std::vector<double> values;

    static IntensitySpec parse(const std::string &field, std::string_view text) {
        IntensitySpec spec;
        bool numeric = !text.empty();
        for (auto tok : split(text, ',')) {
            numeric = numeric && to_number<double>(tok).has_value();
        }
        try {
            if (numeric) {
                spec.values = number_list(field, text);
                for (double v : spec.values) {
                    (void)Intensity(v);
                }
            } else {
                spec.law = IntensityLaw::parse(text);
            }
        } catch (const ConfigError &) {
            throw;
        } catch (const DomainError &e) {
            throw ConfigError(field, e.what());
        }
        return spec;
    }

    [[nodiscard]] std::vector<double> at(int m) const {
        if (law) {
            return {(*law)(m)};
        }
        return values;
    }

    /// A single law, for the scaling sweeps.
    [[nodiscard]] IntensityLaw as_law(const std::string &field) const {
        if (law) {
            return *law;
        }
        if (values.size() != 1) {
            throw ConfigError(field, "expected a law or a single value");
        }
        return {IntensityLaw::Kind::Constant, values[0]};
    }
};

GeneratorPair gate_for(const std::string &spec, int m) {
    if (spec == "uniform") {
        return uniform_phase_generator(m);
    }
    const auto colon = spec.find(':');
    try {
        GateLabel label;
        label.kind = parse_gate_kind(std::string_view(spec).substr(0, colon));
        if (colon == std::string::npos) {
            throw ConfigError("gate", "missing mode list in '" + spec + "'");
        }
        const auto modes = split(std::string_view(spec).substr(colon + 1), ',');
        label.mode_a = number_field<int>("gate", modes[0]);
        if (modes.size() > 1) {
            label.mode_b = number_field<int>("gate", modes[1]);
        }
        return make_generator(label, m);
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError("gate", std::string(e.what()) + " (m = " + std::to_string(m) +
                                      ")");
    }
}

MeanVector single_mode_input(int m, double e) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * m);
    v[0] = std::sqrt(2.0 * e);
    return MeanVector(v);
}

// --- tabular output ----------------------------------------------------------

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) {
        for (const auto &c : row) {
            if (const auto *d = std::get_if<double>(&c); d && !std::isfinite(*d)) {
                throw NumericalError("non-finite value in output row " +
                                     std::to_string(rows.size() + 1));
            }
        }
        rows.push_back(std::move(row));
    }
};

std::string cell_text(const Cell &c) {
    return std::visit(
        [](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return fmt(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else {
                return v;
            }
        },
        c);
}

/// RFC 4180 quoting for cells holding a separator, quote or newline.
std::string csv_field(std::string text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string quoted = "\"";
    for (char ch : text) {
        quoted += ch;
        if (ch == '"') {
            quoted += '"';
        }
    }
    return quoted + '"';
}

void write_table(std::ostream &out, const ExperimentConfig &cfg, const Table &t) {
    const auto map = cfg.to_map();
    if (cfg.format == Format::Csv) {
        out << "# schema: " << schema_string(cfg.command) << '\n';
        out << "# seed: " << cfg.seed << '\n';
        for (auto key : config_keys(cfg.command)) {
            out << "# config: " << key << " = " << map.at(std::string(key)) << '\n';
        }
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            out << (i ? "," : "") << t.columns[i];
        }
        out << '\n';
        for (const auto &row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << csv_field(cell_text(row[i]));
            }
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json head;
    head["schema"] = schema_string(cfg.command);
    head["seed"] = cfg.seed;
    nlohmann::ordered_json conf = nlohmann::ordered_json::object();
    for (auto key : config_keys(cfg.command)) {
        conf[std::string(key)] = map.at(std::string(key));
    }
    head["config"] = conf;
    out << head.dump() << '\n';
    for (const auto &row : t.rows) {
        nlohmann::ordered_json rec;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto &v) { rec[t.columns[i]] = v; }, row[i]);
        }
        out << rec.dump() << '\n';
    }
}

// --- experiments -------------------------------------------------------------

EstimatorOptions estimator_options(const ExperimentConfig &c) {
    EstimatorOptions o;
    o.n_samples = c.samples;
    o.seed = c.seed;
    o.threads = c.threads;
    o.chunk_size = c.chunk;
    return o;
}

Table run_toy(const ExperimentConfig &c) {
    Table t{{"m", "s", "source", "abs_grad_mean", "stderr"}, {}};
    for (int m : c.modes) {
        for (double s : c.s) {
            const double closed = toy_grad_abs_expectation(s, m).value();
            const auto mc = estimate_abs_grad(ToyInstance{m, s}, estimator_options(c));
            t.add({std::int64_t{m}, s, std::string("closed_form"), closed, 0.0});
            t.add({std::int64_t{m}, s, std::string("monte_carlo"), mc.mean,
                   mc.std_error_mean});
        }
    }
    return t;
}

Table run_prop1(const ExperimentConfig &c) {
    Table t{{"m", "E", "xi_min", "xi_max", "pred_lo", "pred_hi", "mc_second_moment",
             "mc_stderr"},
            {}};
    const auto spec = IntensitySpec::parse("intensity", c.intensity);
    for (int m : c.modes) {
        const auto gate = gate_for(c.gate, m);
        const auto xi = xi_bounds(gate.d());
        for (double e : spec.at(m)) {
            const auto iv = prop1_interval(m, Intensity(e), gate.d());
            const auto mc = estimate_grad_moments(
                CompilingInstance{single_mode_input(m, e), gate}, estimator_options(c));
            t.add({std::int64_t{m}, e, xi.min, xi.max, iv.lo.value(), iv.hi.value(),
                   mc.second_moment, mc.std_error_second});
        }
    }
    return t;
}

Table run_heterodyne(const ExperimentConfig &c) {
    Table t{{"m", "E0", "E1", "xi_min", "xi_max", "pred_lo", "pred_hi",
             "exact_second_moment", "mc_second_moment", "mc_stderr"},
            {}};
    const auto e0_spec = IntensitySpec::parse("intensity", c.intensity);
    const auto e1_spec = IntensitySpec::parse("outcome_intensity", c.outcome_intensity);
    for (int m : c.modes) {
        const auto gate = gate_for(c.gate, m);
        const auto xi = xi_bounds(gate.d());
        for (double e0 : e0_spec.at(m)) {
            for (double e1 : e1_spec.at(m)) {
                const auto iv = heterodyne_interval(m, Intensity(e0), Intensity(e1), gate.d());
                const double exact =
                    exact_compiling_second_moment(m, Intensity(e0), Intensity(e1), gate.d())
                        .value();
                const auto mc = estimate_grad_moments(
                    HeterodyneInstance{single_mode_input(m, e0), single_mode_input(m, e1),
                                       gate},
                    estimator_options(c));
                t.add({std::int64_t{m}, e0, e1, xi.min, xi.max, iv.lo.value(),
                       iv.hi.value(), exact, mc.second_moment, mc.std_error_second});
            }
        }
    }
    return t;
}

Table run_prop2(const ExperimentConfig &c) {
    Table t{{"m", "E", "trace_b", "pred_trace_form", "pred_frobenius_form",
             "mc_second_moment", "mc_stderr"},
            {}};
    const auto spec = IntensitySpec::parse("intensity", c.intensity);
    for (int m : c.modes) {
        if (m < 2) {
            throw ConfigError("m", "prop2 uses a two-mode gate and needs m >= 2");
        }
        for (double e : spec.at(m)) {
            RandomSource rng(c.seed, kInstanceStream + static_cast<std::uint64_t>(m));
            const QuadraticHamiltonian h(random_psd(m, rng));
            const auto plus = haar_orthogonal(m, rng);
            const auto u = uniform_sphere(m, std::sqrt(2.0 * e), rng);
            const auto gate = make_generator({GateKind::TwoModePhase, 0, 1}, m);
            const auto b = bk_matrix(gate, h, plus);
            const auto forms = prop2_forms(u, b);
            const auto mc = estimate_grad_moments(QuadraticInstance{u, h, gate, plus},
                                                  estimator_options(c));
            t.add({std::int64_t{m}, e, b.trace(), forms.trace_form, forms.frobenius_form,
                   mc.second_moment, mc.std_error_second});
        }
    }
    return t;
}

void add_fit_rows(Table &t, const RegimeFit &fit, const std::vector<std::vector<Cell>> &lead) {
    for (std::size_t i = 0; i < fit.m_grid.size(); ++i) {
        std::vector<Cell> row = lead[i];
        row.emplace_back(fit.log_bounds[i]);
        row.emplace_back(std::string(regime_name(fit.regime)));
        row.emplace_back(fit.rate);
        row.emplace_back(fit.residual_rms);
        t.add(std::move(row));
    }
}

Table run_regimes(const ExperimentConfig &c) {
    Table t{{"law", "m", "E", "log_bound", "regime", "rate", "fit_residual_rms"}, {}};
    const auto law = IntensitySpec::parse("intensity", c.intensity).as_law("intensity");
    RegimeFit fit;
    try {
        fit = classify_regime(law, c.modes);
    } catch (const NumericalError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError("m", e.what());
    }
    std::vector<std::vector<Cell>> lead;
    for (int m : c.modes) {
        lead.push_back({law.to_string(), std::int64_t{m}, law(m)});
    }
    add_fit_rows(t, fit, lead);
    return t;
}

Table run_noise(const ExperimentConfig &c) {
    Table t{{"m", "E0", "L", "E1", "log_bound", "regime", "rate", "fit_residual_rms"}, {}};
    const auto law = IntensitySpec::parse("intensity", c.intensity).as_law("intensity");
    std::optional<DepthLaw> depth;
    try {
        depth = DepthLaw::parse(c.depth);
    } catch (const DomainError &e) {
        throw ConfigError("depth", e.what());
    }
    if (!(c.k > 0.0 && c.k < 1.0)) {
        throw ConfigError("k", "attenuation factor must lie in (0, 1)");
    }
    RegimeFit fit;
    try {
        fit = classify_noise_regime(law, c.k, *depth, c.modes);
    } catch (const NumericalError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError("m", e.what());
    }
    std::vector<std::vector<Cell>> lead;
    for (int m : c.modes) {
        const int l = (*depth)(m);
        const double e0 = law(m);
        lead.push_back({std::int64_t{m}, e0, std::int64_t{l},
                        attenuated_intensity(Intensity(e0), c.k, l).value()});
    }
    add_fit_rows(t, fit, lead);
    return t;
}

Table run_train(const ExperimentConfig &c) {
    Table t{{"run", "m", "iteration", "cost", "grad_norm"}, {}};
    const auto spec = IntensitySpec::parse("intensity", c.intensity);
    if (c.objective != "compiling" && c.objective != "quadratic") {
        throw ConfigError("objective", "must be 'compiling' or 'quadratic'");
    }
    TrainConfig tc;
    tc.lr = c.lr;
    tc.max_iters = c.max_iters;
    tc.tol = c.tol;
    for (int m : c.modes) {
        for (double e : spec.at(m)) {
            for (int r = 0; r < c.runs; ++r) {
                RandomSource rng(c.seed + static_cast<std::uint64_t>(r), kInstanceStream);
                const auto circuit = random_layered_circuit(
                    m, alternating_gate_pattern(m, c.layers), rng);
                const auto u = uniform_sphere(m, std::sqrt(2.0 * e), rng);
                Objective obj = CompilingObjective{u};
                if (c.objective == "quadratic") {
                    obj = QuadraticObjective{u, QuadraticHamiltonian(random_psd(m, rng))};
                }
                for (const auto &rec : train(circuit, obj, tc)) {
                    t.add({std::int64_t{r}, std::int64_t{m}, std::int64_t{rec.iteration},
                           rec.cost, rec.grad_norm});
                }
            }
        }
    }
    return t;
}

std::string join_ints(const std::vector<int> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s;
}

std::string join_doubles(const std::vector<double> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + fmt(v[i]);
    }
    return s;
}

} // namespace

std::string_view command_name(Command c) {
    switch (c) {
    case Command::Toy:
        return "toy";
    case Command::Prop1:
        return "prop1";
    case Command::Prop2:
        return "prop2";
    case Command::Heterodyne:
        return "heterodyne";
    case Command::Noise:
        return "noise";
    case Command::Regimes:
        return "regimes";
    case Command::Train:
        return "train";
    }
    return "unknown";
}

Command parse_command(std::string_view name) {
    for (auto c : kAllCommands) {
        if (command_name(c) == name) {
            return c;
        }
    }
    throw ConfigError("command", "unknown command '" + std::string(name) + "'");
}

std::string schema_string(Command c) {
    return "cvplateau." + std::string(command_name(c)) + "/1";
}

std::vector<std::string_view> config_keys(Command c) {
    std::vector<std::string_view> keys = {"command", "m"};
    switch (c) {
    case Command::Toy:
        keys.insert(keys.end(), {"s", "samples", "chunk"});
        break;
    case Command::Prop1:
        keys.insert(keys.end(), {"intensity", "gate", "samples", "chunk"});
        break;
    case Command::Prop2:
        keys.insert(keys.end(), {"intensity", "samples", "chunk"});
        break;
    case Command::Heterodyne:
        keys.insert(keys.end(),
                    {"intensity", "outcome_intensity", "gate", "samples", "chunk"});
        break;
    case Command::Noise:
        keys.insert(keys.end(), {"intensity", "k", "depth"});
        break;
    case Command::Regimes:
        keys.insert(keys.end(), {"intensity"});
        break;
    case Command::Train:
        keys.insert(keys.end(),
                    {"intensity", "layers", "runs", "lr", "max_iters", "tol", "objective"});
        break;
    }
    keys.insert(keys.end(), {"seed", "threads", "format"});
    return keys;
}

ConfigMap parse_config_text(std::string_view text) {
    ConfigMap map;
    const auto body = trim(text);
    if (!body.empty() && body.front() == '{') {
        const auto first = body.substr(0, body.find('\n'));
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(first);
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError("config", std::string("bad JSON preamble: ") + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object()) {
            throw ConfigError("config", "JSON preamble has no config object");
        }
        for (const auto &[key, value] : j["config"].items()) {
            map[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        return map;
    }
    for (auto line : split(text, '\n')) {
        constexpr std::string_view kPrefix = "# config:";
        if (line.starts_with(kPrefix)) {
            line = trim(line.substr(kPrefix.size()));
        } else if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            continue;
        }
        const auto key = std::string(trim(line.substr(0, eq)));
        if (key.empty()) {
            throw ConfigError("config", "empty key in line '" + std::string(line) + "'");
        }
        if (map.contains(key)) {
            throw ConfigError(key, "given more than once");
        }
        map[key] = std::string(trim(line.substr(eq + 1)));
    }
    return map;
}

ConfigMap load_config_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_map(const ConfigMap &map) {
    ExperimentConfig c;
    const auto cmd = map.find("command");
    if (cmd == map.end()) {
        throw ConfigError("command", "missing");
    }
    c.command = parse_command(cmd->second);
    switch (c.command) {
    case Command::Toy:
        c.modes = {1, 2, 5, 10};
        c.s = {0.1, 0.5, 1.0};
        break;
    case Command::Prop1:
        c.modes = {2, 3, 4, 6};
        c.intensity = "0.25,1,4";
        break;
    case Command::Prop2:
        c.modes = {2, 3, 4};
        c.intensity = "1";
        break;
    case Command::Heterodyne:
        c.modes = {2, 3, 4};
        c.intensity = "1";
        break;
    case Command::Noise:
        c.modes = mode_grid("4:64:4");
        c.intensity = "power:1,0.5";
        break;
    case Command::Regimes:
        c.modes = mode_grid("4:64:4");
        c.intensity = "linear:1";
        break;
    case Command::Train:
        c.modes = {2};
        c.intensity = "0.5";
        break;
    }

    const auto keys = config_keys(c.command);
    for (const auto &[key, value] : map) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(key, "not a setting of '" +
                                       std::string(command_name(c.command)) + "'");
        }
        if (key == "command") {
            continue;
        }
        if (key == "m") {
            c.modes = mode_grid(value);
        } else if (key == "intensity") {
            c.intensity = value;
        } else if (key == "s") {
            c.s = number_list("s", value);
        } else if (key == "samples") {
            c.samples = number_field<std::uint64_t>(key, value);
        } else if (key == "seed") {
            c.seed = number_field<std::uint64_t>(key, value);
        } else if (key == "threads") {
            c.threads = number_field<unsigned>(key, value);
        } else if (key == "chunk") {
            c.chunk = number_field<std::uint64_t>(key, value);
        } else if (key == "format") {
            if (value != "csv" && value != "json") {
                throw ConfigError(key, "must be 'csv' or 'json'");
            }
            c.format = value == "csv" ? Format::Csv : Format::Json;
        } else if (key == "gate") {
            c.gate = value;
        } else if (key == "outcome_intensity") {
            c.outcome_intensity = value;
        } else if (key == "k") {
            c.k = number_field<double>(key, value);
        } else if (key == "depth") {
            c.depth = value;
        } else if (key == "layers") {
            c.layers = number_field<int>(key, value);
        } else if (key == "runs") {
            c.runs = number_field<int>(key, value);
        } else if (key == "lr") {
            c.lr = number_field<double>(key, value);
        } else if (key == "max_iters") {
            c.max_iters = number_field<int>(key, value);
        } else if (key == "tol") {
            c.tol = number_field<double>(key, value);
        } else if (key == "objective") {
            c.objective = value;
        }
    }

    // range checks that do not need the experiment to run
    if (c.modes.empty()) {
        throw ConfigError("m", "empty mode list");
    }
    if (c.samples < kMinSamples) {
        throw ConfigError("samples", "must be at least " + std::to_string(kMinSamples));
    }
    if (c.chunk == 0) {
        throw ConfigError("chunk", "must be positive");
    }
    if (c.threads == 0) {
        throw ConfigError("threads", "must be positive");
    }
    for (double s : c.s) {
        if (!(s >= 0.0)) {
            throw ConfigError("s", "must be nonnegative");
        }
    }
    if (c.layers < 1) {
        throw ConfigError("layers", "must be positive");
    }
    if (c.runs < 1) {
        throw ConfigError("runs", "must be positive");
    }
    if (!(c.lr > 0.0)) {
        throw ConfigError("lr", "must be positive");
    }
    if (c.max_iters < 0) {
        throw ConfigError("max_iters", "must be nonnegative");
    }
    if (!(c.tol >= 0.0)) {
        throw ConfigError("tol", "must be nonnegative");
    }
    if (!(c.k > 0.0 && c.k < 1.0)) {
        throw ConfigError("k", "attenuation factor must lie in (0, 1)");
    }
    const auto uses = [&](std::string_view key) {
        return std::find(keys.begin(), keys.end(), key) != keys.end();
    };
    if (uses("intensity")) {
        (void)IntensitySpec::parse("intensity", c.intensity);
    }
    if (uses("outcome_intensity")) {
        (void)IntensitySpec::parse("outcome_intensity", c.outcome_intensity);
    }
    if (uses("gate")) {
        for (int m : c.modes) {
            (void)gate_for(c.gate, m);
        }
    }
    if (uses("depth")) {
        try {
            (void)DepthLaw::parse(c.depth);
        } catch (const DomainError &e) {
            throw ConfigError("depth", e.what());
        }
    }
    return c;
}

ConfigMap ExperimentConfig::to_map() const {
    const ConfigMap all = {
        {"command", std::string(command_name(command))},
        {"m", join_ints(modes)},
        {"intensity", intensity},
        {"s", join_doubles(s)},
        {"samples", std::to_string(samples)},
        {"seed", std::to_string(seed)},
        {"threads", std::to_string(threads)},
        {"chunk", std::to_string(chunk)},
        {"format", format == Format::Csv ? "csv" : "json"},
        {"gate", gate},
        {"outcome_intensity", outcome_intensity},
        {"k", fmt(k)},
        {"depth", depth},
        {"layers", std::to_string(layers)},
        {"runs", std::to_string(runs)},
        {"lr", fmt(lr)},
        {"max_iters", std::to_string(max_iters)},
        {"tol", fmt(tol)},
        {"objective", objective},
    };
    ConfigMap out;
    for (auto key : config_keys(command)) {
        out[std::string(key)] = all.at(std::string(key));
    }
    return out;
}

void run_experiment(const ExperimentConfig &config, std::ostream &out) {
    Table t;
    switch (config.command) {
    case Command::Toy:
        t = run_toy(config);
        break;
    case Command::Prop1:
        t = run_prop1(config);
        break;
    case Command::Prop2:
        t = run_prop2(config);
        break;
    case Command::Heterodyne:
        t = run_heterodyne(config);
        break;
    case Command::Noise:
        t = run_noise(config);
        break;
    case Command::Regimes:
        t = run_regimes(config);
        break;
    case Command::Train:
        t = run_train(config);
        break;
    }
    write_table(out, config, t);
}

std::filesystem::path default_output_path(const ExperimentConfig &config) {
    const char *dir = std::getenv("CVPLATEAU_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0') {
        return {};
    }
    return std::filesystem::path(dir) /
           (std::string(command_name(config.command)) + "_seed" +
            std::to_string(config.seed) + (config.format == Format::Csv ? ".csv" : ".jsonl"));
}

namespace {

std::string flag_name(std::string_view key) {
    std::string f(key);
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

constexpr std::string_view kHelp[][2] = {
    {"m", "mode count(s): 3, 2,3,4 or start:stop[:step]"},
    {"intensity", "intensity law (constant:E, power:a,r, linear:a[,c], expdecay:a,b, "
                  "logpower:a,r) or explicit values"},
    {"s", "toy-model s = u1^2 + u2^2 values"},
    {"samples", "Monte Carlo samples per row"},
    {"chunk", "samples per random substream"},
    {"gate", "uniform or <kind>:a[,b] with kind phase-shifter, two-mode-phase, "
             "beamsplitter"},
    {"outcome_intensity", "intensity of the heterodyne outcome (law or values)"},
    {"k", "attenuation amplitude factor per layer, in (0, 1)"},
    {"depth", "noise depth law: constant:L, linear:a or sqrt:a"},
    {"layers", "circuit depth L"},
    {"runs", "independent training runs, seeds seed..seed+runs-1"},
    {"lr", "learning rate"},
    {"max_iters", "iteration cap"},
    {"tol", "stop when the gradient norm reaches this"},
    {"objective", "compiling or quadratic"},
    {"seed", "random seed"},
    {"threads", "worker threads (results do not depend on it)"},
    {"format", "csv or json (JSON lines)"},
};

std::string help_for(std::string_view key) {
    for (const auto &h : kHelp) {
        if (h[0] == key) {
            return std::string(h[1]);
        }
    }
    return {};
}

struct SubcommandState {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option *> options;
    std::string config_path;
    std::string output;
    std::string law;
    std::string law_a;
    std::string law_b;
};

int execute(const ExperimentConfig &config, const std::string &output, std::ostream &out,
            std::ostream &err) {
    std::filesystem::path path = output;
    if (path.empty()) {
        path = default_output_path(config);
    }
    if (path.empty() || path == "-") {
        run_experiment(config, out);
        return kExitOk;
    }
    // write to memory first so a failed run leaves no partial file
    std::ostringstream buffer;
    run_experiment(config, buffer);
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw ConfigError("output", "cannot write '" + path.string() + "'");
    }
    file << buffer.str();
    err << "wrote " << path.string() << '\n';
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Gradient statistics of random linear-optical circuits on coherent "
                 "states."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");

    std::map<std::string, SubcommandState> states;
    std::map<std::string, CLI::App *> subs;
    const std::map<Command, std::string> descriptions = {
        {Command::Toy, "local phase-shifter toy model: closed form vs Monte Carlo"},
        {Command::Prop1, "compiling-cost gradient second moment vs prediction"},
        {Command::Prop2, "quadratic-cost gradient second moment vs prediction"},
        {Command::Heterodyne, "heterodyne-target gradient second moment"},
        {Command::Noise, "regime of the heterodyne bound under attenuation"},
        {Command::Regimes, "classify an intensity scaling as BPL or trainable"},
        {Command::Train, "gradient-descent training traces"},
    };
    for (auto c : kAllCommands) {
        const std::string name(command_name(c));
        auto *sub = app.add_subcommand(name, descriptions.at(c));
        auto &st = states[name];
        sub->add_option("--config", st.config_path,
                        "config file or an earlier output file");
        sub->add_option("-o,--output", st.output,
                        "output file ('-' for stdout; default $CVPLATEAU_OUTPUT_DIR)");
        for (auto key : config_keys(c)) {
            if (key == "command") {
                continue;
            }
            std::string flags = flag_name(key);
            if (key == "m") {
                flags += ",--m-grid";
            }
            st.options[std::string(key)] =
                sub->add_option(flags, st.values[std::string(key)], help_for(key));
        }
        if (c == Command::Regimes || c == Command::Noise) {
            sub->add_option("--law", st.law, "law name, combined with --a and --b");
            sub->add_option("--a", st.law_a, "first law parameter");
            sub->add_option("--b,--r", st.law_b, "second law parameter");
        }
        subs[name] = sub;
    }
    auto *run = app.add_subcommand("run", "re-run the experiment described by a file");
    std::string run_config;
    std::string run_output;
    run->add_option("config", run_config, "config or output file")->required();
    run->add_option("-o,--output", run_output, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            return execute(ExperimentConfig::from_map(load_config_file(run_config)),
                           run_output, out, err);
        }
        for (auto &[name, sub] : subs) {
            if (!sub->parsed()) {
                continue;
            }
            auto &st = states[name];
            ConfigMap map;
            if (!st.config_path.empty()) {
                map = load_config_file(st.config_path);
                if (map.contains("command") && map["command"] != name) {
                    throw ConfigError("command", "file is for '" + map["command"] +
                                                     "', not '" + name + "'");
                }
            }
            map["command"] = name;
            for (const auto &[key, opt] : st.options) {
                if (opt->count() > 0) {
                    map[key] = st.values[key];
                }
            }
            if (!st.law.empty()) {
                if (st.law_a.empty()) {
                    throw ConfigError("a", "--law needs --a");
                }
                map["intensity"] =
                    st.law + ":" + st.law_a + (st.law_b.empty() ? "" : "," + st.law_b);
            } else if (!st.law_a.empty() || !st.law_b.empty()) {
                throw ConfigError("law", "--a/--b need --law");
            }
            return execute(ExperimentConfig::from_map(map), st.output, out, err);
        }
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}

} // namespace cvplateau::cli
