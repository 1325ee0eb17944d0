#pragma once

#include <string>

#include "sclab/config.hpp"
#include "sclab/control.hpp"
#include "sclab/flux.hpp"
#include "sclab/noise.hpp"
#include "sclab/solver.hpp"

namespace sclab::run {

inline constexpr const char* kVersion = "sclab 0.1.0";

// spec -> model builders, shared by the runner and the tests
TorusGrid build_grid(const cfg::ExperimentSpec& spec);
Field build_initial(const cfg::ExperimentSpec& spec);
FluxModel build_flux(const cfg::ExperimentSpec& spec);
NoiseModel build_noise(const cfg::ExperimentSpec& spec);
Control build_control(const cfg::ExperimentSpec& spec);
hyperbolic::SolverConfig build_solver(const cfg::ExperimentSpec& spec);

/// Executes the spec's task and writes its artifacts (manifest + CSVs) under
/// spec.output_dir. Outputs are byte-deterministic in (spec, seed); nothing
/// time- or host-dependent is written.
/// Exit codes: 0 success, 1 runtime failure, 2 non-converged optimization,
/// 3 insufficient data.
int run_experiment(const cfg::ExperimentSpec& spec);

/// %.17g, the shortest round-trip-exact decimal form used in every CSV.
std::string fmt(double v);

}  // namespace sclab::run
