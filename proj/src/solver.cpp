#include "hnabem/solver.hpp"

#include <chrono>

#include "hnabem/errors.hpp"

namespace hnabem {

SolveResult solve(const Screen& screen, const IncidentWave& incident, const SolverOptions& opts) {
    if (incident.d2 > 0) throw ParameterError("solve: incident direction must satisfy d2 <= 0");
    opts.quad.validate();
    using clock = std::chrono::steady_clock;

    auto space = std::make_shared<const HnaSpace>(build_space(screen, incident.k, opts.p, opts.sigma, opts.layers));
    const auto t0 = clock::now();
    const CollocationSet colloc = collocation_points(*space, opts.c_os);
    WeightedSystem sys = assemble(*space, incident, colloc, opts.quad, opts.threads);
    const auto t1 = clock::now();
    SvdSolution svd = truncated_svd_solve(sys.A, sys.b, opts.epsilon);
    const auto t2 = clock::now();

    BoundarySolution sol(space, svd.coeffs, incident);
    return SolveResult{space,
                       std::move(sys),
                       std::move(svd),
                       std::move(sol),
                       std::chrono::duration<double>(t1 - t0).count(),
                       std::chrono::duration<double>(t2 - t1).count()};
}

}  // namespace hnabem
