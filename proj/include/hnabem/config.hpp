#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hnabem/geometry.hpp"
#include "hnabem/solver.hpp"

namespace hnabem {

/// Flat `key = value` run configuration; `#` starts a comment.
///
/// Screen: `screen = lo hi lo hi ...` or `cantor_level = j` (default (0, 1)).
/// Incident wave: `k`, `d = d1 d2` (normalised on input).
/// Method: `p`, `sigma`, `layers`, `c_os`, `epsilon`, `c_osc`, `c_sing`, `n_q`.
/// Outputs: `theta_samples`, `boundary_samples`.
/// converge: `p_list`, `k_list`, `p_ref`, `near_samples`, `far_samples`.
/// cantor: `levels`.
/// quad-validate: `k_min k_max k_step t0_min t0_max t0_step`.
struct RunConfig {
    std::vector<std::pair<double, double>> screen{{0.0, 1.0}};
    int cantor_level = -1;
    double k = 128.0;
    double d1 = 0.70710678118654752;
    double d2 = -0.70710678118654752;
    int p = 4;
    double sigma = 0.15;
    int layers = 0;
    double c_os = 1.25;
    double epsilon = 1e-8;
    QuadParams quad;
    int theta_samples = 3600;
    int boundary_samples = 2000;
    std::vector<int> p_list;
    std::vector<double> k_list;
    int p_ref = 8;
    int near_samples = 200;
    int far_samples = 720;
    std::vector<int> levels;
    double k_min = 1, k_max = 100, k_step = 1;
    double t0_min = -1, t0_max = 0, t0_step = 0.05;

    Screen make_screen() const;
    IncidentWave incident() const;
    SolverOptions solver_options(int threads) const;

    /// Fully resolved configuration, one `# key = value` line each.
    std::string describe() const;
};

/// Throws ConfigError naming the offending line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace hnabem
