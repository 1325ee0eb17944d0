#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sclab::cfg {

/// Fully validated experiment description. Defaults are the documented ones;
/// parse_config only overrides what the file sets.
struct ExperimentSpec {
    std::string name = "experiment";
    std::string task = "solve";
    uint64_t seed = 0;
    std::string output_dir = "out";

    // [grid]
    int dim = 1;
    int n = 64;

    // [flux] kind: burgers | linear | polynomial | zero
    std::string flux_kind = "burgers";
    std::vector<double> linear_c{1.0};
    std::vector<double> poly_coeffs{0.0, 0.0, 0.5};

    // [noise]
    int K = 1;
    double sigma = 0.25;
    double q = 1.0;
    double b0 = 1.0;
    double b1 = 0.0;

    // [initial] kind: riemann | constant | cosine
    std::string init_kind = "constant";
    double init_left = 1.0, init_right = 0.0;  // riemann states
    double init_value = 0.0;                   // constant level / cosine offset
    double init_amplitude = 1.0;               // cosine amplitude
    int init_freq = 1;

    // [control] kind: zero | constant | file
    std::string control_kind = "zero";
    std::vector<double> control_level;
    std::string control_file;

    // [time]
    double T = 0.25;
    int steps = 128;

    // [solver]
    double cfl = 0.45;
    std::string scheme = "engquist_osher";
    double eta = 0.0;
    std::optional<double> R;
    double eps = 0.0;  // noise intensity for the solve task

    // [mc] (also ldp-fit)
    uint64_t n_traj = 200;
    std::vector<double> eps_list;
    std::string event_kind = "mean_threshold";  // | l1_ball_complement
    double event_threshold = 0.1;
    double event_ref = 0.0;
    double action_star = 0.0;

    // [minimize]
    double delta_target = 1e-3;
    double target_shift = 0.1;
    int opt_steps = 25;

    // [condb] / [weakprobe]
    double M = 1.0;
    double delta = 0.05;
    double osc_amplitude = 1.0;
    int osc_mode = 1;  // 1-based noise coordinate

    // [kinetic]
    double xi_min = -2.0, xi_max = 2.0;
    int xi_points = 64;
};

struct ConfigError {
    int line;  // 0 when no single line applies (missing section)
    std::string message;
};

struct ParseResult {
    ExperimentSpec spec;
    std::vector<ConfigError> errors;
    bool ok() const { return errors.empty(); }
};

/// INI-style text: [section] headers, key = value lines, # or ; comments.
/// Collects every error (unknown key/section, out-of-range value, missing
/// required section) instead of stopping at the first.
ParseResult parse_config(const std::string& text);

const std::vector<std::string>& known_tasks();

}  // namespace sclab::cfg
