#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sll/noise.hpp"

namespace sll {

enum class Experiment { converge, energy_audit, ou_check, split_check, bound_check, simulate };

std::string to_string(Experiment e);
/// Accepts the CLI spelling ("energy-audit", ...). Throws ConfigError.
Experiment parse_experiment(std::string_view name);

/// Initial data presets. `cosine` is cos(pi x), whose normal derivative
/// vanishes at both ends and so matches zero boundary velocity.
enum class InitialData { zero, cosine, sine, constant };

std::string to_string(InitialData d);
InitialData parse_initial(std::string_view name);

struct ExperimentConfig {
    std::optional<Experiment> experiment;
    double alpha = 0.5;
    std::vector<double> eps_ladder{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::size_t n_interior = 64;
    double dt_full_factor = 10.0;  ///< full-system dt = eps / dt_full_factor
    double dt_limit = 0.0015625;   ///< parabolic-limit dt
    double t_end = 1.0;
    std::optional<std::size_t> replicas;
    std::uint64_t seed = 20240601;
    double noise_c = 1.0;
    double noise_gamma = 2.0;
    std::size_t noise_modes = 50;
    double noise_boundary_left = 0.5;
    double noise_boundary_right = 0.5;
    double r = 0.1;
    std::string out_dir = "out";
    std::optional<InitialData> initial;
    InitialData uniform_initial = InitialData::cosine;
    double initial_scale = 1.0;

    CovarianceSpec interior_noise() const;
    CovarianceSpec boundary_noise() const;

    /// Initial data, falling back to the per-experiment default: cosine for
    /// converge, split-check and simulate, zero otherwise.
    InitialData initial_data() const;

    /// Replica count, falling back to the per-experiment default.
    std::size_t replica_count() const;

    /// Full-system step for a given eps.
    double dt_full(double eps) const { return eps / dt_full_factor; }

    /// True when the run steps the parabolic limit (converge with alpha < 1);
    /// dt_limit is ignored otherwise.
    bool uses_parabolic_limit() const;

    /// Finest step of all steppers in the run; every step must be an
    /// integer multiple of it so coarse increments are sums of fine ones.
    double master_dt() const;

    /// Checks every invariant; throws ConfigError.
    void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment; lists are comma
/// separated. Unknown or repeated keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text form that parse_config reads back to the same config.
std::string format_config(const ExperimentConfig& cfg);

}  // namespace sll
