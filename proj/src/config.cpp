#include "sll/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sll/errors.hpp"
#include "sll/full_system.hpp"

namespace sll {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("key '" + std::string(key) + "': not a finite number: '" +
                          std::string(v) + "'");
    }
    return out;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view v) {
    v = trim(v);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("key '" + std::string(key) + "': not a non-negative integer: '" +
                          std::string(v) + "'");
    }
    return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const auto item = v.substr(start, comma == std::string_view::npos ? v.npos : comma - start);
        out.push_back(parse_real(key, item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

bool is_multiple(double dt, double base) {
    const double ratio = dt / base;
    return std::abs(ratio - std::round(ratio)) <= 1e-9 * std::max(1.0, ratio) && ratio >= 0.5;
}

std::string real(double x) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

}  // namespace

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::converge: return "converge";
        case Experiment::energy_audit: return "energy-audit";
        case Experiment::ou_check: return "ou-check";
        case Experiment::split_check: return "split-check";
        case Experiment::bound_check: return "bound-check";
        case Experiment::simulate: return "simulate";
    }
    return "?";
}

Experiment parse_experiment(std::string_view name) {
    for (auto e : {Experiment::converge, Experiment::energy_audit, Experiment::ou_check,
                   Experiment::split_check, Experiment::bound_check, Experiment::simulate}) {
        if (name == to_string(e)) return e;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

std::string to_string(InitialData d) {
    switch (d) {
        case InitialData::zero: return "zero";
        case InitialData::cosine: return "cosine";
        case InitialData::sine: return "sine";
        case InitialData::constant: return "constant";
    }
    return "?";
}

InitialData parse_initial(std::string_view name) {
    for (auto d : {InitialData::zero, InitialData::cosine, InitialData::sine, InitialData::constant}) {
        if (name == to_string(d)) return d;
    }
    throw ConfigError("unknown initial data '" + std::string(name) +
                      "' (expected zero, cosine, sine or constant)");
}

CovarianceSpec ExperimentConfig::interior_noise() const {
    return CovarianceSpec::interior(noise_c, noise_gamma, noise_modes);
}

CovarianceSpec ExperimentConfig::boundary_noise() const {
    return CovarianceSpec::boundary(noise_boundary_left, noise_boundary_right);
}

std::size_t ExperimentConfig::replica_count() const {
    if (replicas) return *replicas;
    switch (experiment.value_or(Experiment::simulate)) {
        case Experiment::converge: return 100;
        case Experiment::ou_check: return 2000;
        case Experiment::energy_audit:
        case Experiment::bound_check: return 500;
        case Experiment::split_check: return 20;
        case Experiment::simulate: return 1;
    }
    return 1;
}

InitialData ExperimentConfig::initial_data() const {
    if (initial) return *initial;
    switch (experiment.value_or(Experiment::simulate)) {
        case Experiment::converge:
        case Experiment::split_check:
        case Experiment::simulate: return InitialData::cosine;
        default: return InitialData::zero;
    }
}

bool ExperimentConfig::uses_parabolic_limit() const {
    return experiment.value_or(Experiment::converge) == Experiment::converge && alpha < 1.0;
}

double ExperimentConfig::master_dt() const {
    double m = uses_parabolic_limit() ? dt_limit : INFINITY;
    for (double e : eps_ladder) m = std::min(m, dt_full(e));
    return m;
}

void ExperimentConfig::validate() const {
    if (!alpha_admissible(alpha)) {
        throw ConfigError("alpha must lie in [1/2, 1) or (1, inf); got " + real(alpha));
    }
    if (eps_ladder.empty()) throw ConfigError("eps_ladder must not be empty");
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        if (!(eps_ladder[i] > 0.0 && eps_ladder[i] < 0.5)) {
            throw ConfigError("eps_ladder entries must lie in (0, 1/2)");
        }
        if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])) {
            throw ConfigError("eps_ladder must be strictly decreasing");
        }
    }
    if (n_interior < 3) throw ConfigError("n_interior must be at least 3");
    if (!(dt_full_factor >= 10.0)) throw ConfigError("dt_full_factor must be at least 10");
    if (!(dt_limit > 0.0)) throw ConfigError("dt_limit must be positive");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (replicas && *replicas < 1) throw ConfigError("replicas must be at least 1");
    if (!(r > 0.0 && r < 0.5)) throw ConfigError("r must lie in (0, 1/2)");
    interior_noise().validate();
    boundary_noise().validate();
    const double master = master_dt();
    auto aligned = [&](double dt, const std::string& what) {
        if (!is_multiple(dt, master)) {
            throw ConfigError(what + " = " + real(dt) + " is not an integer multiple of the master step " +
                              real(master));
        }
        if (!is_multiple(t_end, dt)) {
            throw ConfigError("t_end is not an integer multiple of " + what + " = " + real(dt));
        }
    };
    for (double e : eps_ladder) aligned(dt_full(e), "full-system dt at eps " + real(e));
    if (uses_parabolic_limit()) aligned(dt_limit, "dt_limit");
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        if (value.empty()) throw ConfigError("key '" + key + "' has no value");

        if (key == "experiment") cfg.experiment = parse_experiment(value);
        else if (key == "alpha") cfg.alpha = parse_real(key, value);
        else if (key == "eps_ladder") cfg.eps_ladder = parse_list(key, value);
        else if (key == "n_interior") cfg.n_interior = parse_unsigned(key, value);
        else if (key == "dt_full_factor") cfg.dt_full_factor = parse_real(key, value);
        else if (key == "dt_limit") cfg.dt_limit = parse_real(key, value);
        else if (key == "t_end") cfg.t_end = parse_real(key, value);
        else if (key == "replicas") cfg.replicas = parse_unsigned(key, value);
        else if (key == "seed") cfg.seed = parse_unsigned(key, value);
        else if (key == "noise.c") cfg.noise_c = parse_real(key, value);
        else if (key == "noise.gamma") cfg.noise_gamma = parse_real(key, value);
        else if (key == "noise.modes") cfg.noise_modes = parse_unsigned(key, value);
        else if (key == "noise.boundary_left") cfg.noise_boundary_left = parse_real(key, value);
        else if (key == "noise.boundary_right") cfg.noise_boundary_right = parse_real(key, value);
        else if (key == "r") cfg.r = parse_real(key, value);
        else if (key == "out_dir") cfg.out_dir = std::string(value);
        else if (key == "initial") cfg.initial = parse_initial(value);
        else if (key == "uniform_initial") cfg.uniform_initial = parse_initial(value);
        else if (key == "initial_scale") cfg.initial_scale = parse_real(key, value);
        else throw ConfigError("unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& cfg) {
    std::ostringstream o;
    if (cfg.experiment) o << "experiment = " << to_string(*cfg.experiment) << '\n';
    o << "alpha = " << real(cfg.alpha) << '\n';
    o << "eps_ladder = ";
    for (std::size_t i = 0; i < cfg.eps_ladder.size(); ++i) {
        o << (i ? ", " : "") << real(cfg.eps_ladder[i]);
    }
    o << '\n';
    o << "n_interior = " << cfg.n_interior << '\n';
    o << "dt_full_factor = " << real(cfg.dt_full_factor) << '\n';
    o << "dt_limit = " << real(cfg.dt_limit) << '\n';
    o << "t_end = " << real(cfg.t_end) << '\n';
    o << "replicas = " << cfg.replica_count() << '\n';
    o << "seed = " << cfg.seed << '\n';
    o << "noise.c = " << real(cfg.noise_c) << '\n';
    o << "noise.gamma = " << real(cfg.noise_gamma) << '\n';
    o << "noise.modes = " << cfg.noise_modes << '\n';
    o << "noise.boundary_left = " << real(cfg.noise_boundary_left) << '\n';
    o << "noise.boundary_right = " << real(cfg.noise_boundary_right) << '\n';
    o << "r = " << real(cfg.r) << '\n';
    o << "out_dir = " << cfg.out_dir << '\n';
    o << "initial = " << to_string(cfg.initial_data()) << '\n';
    o << "uniform_initial = " << to_string(cfg.uniform_initial) << '\n';
    o << "initial_scale = " << real(cfg.initial_scale) << '\n';
    return o.str();
}

}  // namespace sll
