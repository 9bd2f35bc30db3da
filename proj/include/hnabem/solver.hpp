#pragma once

#include <memory>

#include "hnabem/discretization.hpp"
#include "hnabem/geometry.hpp"
#include "hnabem/hna_space.hpp"
#include "hnabem/lsq.hpp"
#include "hnabem/osciquad.hpp"
#include "hnabem/postproc.hpp"

namespace hnabem {

struct SolverOptions {
    int p = 4;
    double sigma = 0.15;
    int layers = 0;  // 0 selects 2(p+1)
    double c_os = 1.25;
    double epsilon = 1e-8;
    QuadParams quad;
    int threads = 0;
};

struct SolveResult {
    std::shared_ptr<const HnaSpace> space;
    WeightedSystem system;
    SvdSolution svd;
    BoundarySolution solution;
    double assembly_seconds = 0.0;
    double solve_seconds = 0.0;
};

/// Space, collocation, assembly and truncated-SVD solve. Requires d2 <= 0.
SolveResult solve(const Screen& screen, const IncidentWave& incident, const SolverOptions& opts);

}  // namespace hnabem
