// hnabem: command-line driver for the HNA collocation solver.
//
//   hnabem solve         --config run.cfg --out dir
//   hnabem quad-validate --config run.cfg --out dir
//   hnabem converge      --config run.cfg --out dir
//   hnabem cantor        --config run.cfg --out dir
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hnabem/config.hpp"
#include "hnabem/errors.hpp"
#include "hnabem/solver.hpp"

namespace fs = std::filesystem;
using namespace hnabem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Rough cap on the dense system size the cantor command will attempt.
constexpr long kMaxUnknowns = 6000;

struct Context {
    RunConfig cfg;
    fs::path out;
    int threads = 0;
};

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Table {
public:
    Table(const fs::path& path, const std::string& header) : os_(path) {
        if (!os_) throw std::runtime_error("cannot write " + path.string());
        os_ << header;
    }
    Table& row(std::initializer_list<double> cols) {
        bool first = true;
        for (double c : cols) {
            os_ << (first ? "" : " ") << fmt(c);
            first = false;
        }
        os_ << '\n';
        return *this;
    }
    std::ostream& raw() { return os_; }

private:
    std::ofstream os_;
};

std::vector<double> grid(double lo, double hi, double step) {
    if (!(step > 0)) throw ConfigError("grid step must be positive");
    std::vector<double> out;
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + i * step);
    return out;
}

// Boundary samples spread over segments by length, at cell midpoints.
std::vector<double> boundary_samples(const Screen& screen, int total) {
    std::vector<double> s;
    for (const auto& seg : screen.segments()) {
        const int n = std::max(1, static_cast<int>(std::lround(total * seg.length() / screen.total_length())));
        for (int i = 0; i < n; ++i) s.push_back(seg.lo + (i + 0.5) * seg.length() / n);
    }
    return s;
}

// 200 points evenly spaced in arclength, for the Dirichlet residual.
std::vector<double> residual_points(const Screen& screen) { return boundary_samples(screen, 200); }

void write_far_field(const fs::path& path, const std::string& header, const BoundarySolution& sol,
                     const RunConfig& cfg, double* max_abs) {
    Table t(path, header + "# columns: theta re im abs\n");
    double worst = 0.0;
    for (int i = 0; i < cfg.theta_samples; ++i) {
        const double th = 2 * kPi * i / cfg.theta_samples;
        const Complex u = far_field(sol, th, cfg.quad);
        worst = std::max(worst, std::abs(u));
        t.row({th, u.real(), u.imag(), std::abs(u)});
    }
    if (max_abs) *max_abs = worst;
}

int cmd_solve(const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    const Screen screen = cfg.make_screen();
    const IncidentWave w = cfg.incident();
    const std::string header = cfg.describe();
    const SolveResult r = solve(screen, w, cfg.solver_options(ctx.threads));
    fs::create_directories(ctx.out);

    {
        Table t(ctx.out / "boundary.txt", header + "# columns: s re im\n");
        for (double s : boundary_samples(screen, cfg.boundary_samples)) {
            const Complex v = r.solution.v(s);
            t.row({s, v.real(), v.imag()});
        }
    }
    double ff_max = 0.0;
    write_far_field(ctx.out / "far_field.txt", header, r.solution, cfg, &ff_max);
    {
        Table t(ctx.out / "singular_values.txt", header);
        t.raw() << format_condition_report(condition_report(r.system.A));
        t.raw() << "# retained rank " << r.svd.rank << " of " << r.space->size() << " at epsilon "
                << fmt(r.svd.epsilon) << '\n';
    }
    const double bc = boundary_residual(r.solution, residual_points(screen), cfg.quad);
    const double l1 = l1_norm(r.solution);
    {
        Table t(ctx.out / "diagnostics.txt", header);
        auto& os = t.raw();
        os << "N " << r.space->size() << "\nM " << r.system.colloc.size() << "\nrank " << r.svd.rank
           << "\nlsq_residual " << fmt(r.svd.residual) << "\nboundary_residual " << fmt(bc) << "\nl1_norm "
           << fmt(l1) << "\nfar_field_max " << fmt(ff_max) << "\nfar_field_bound " << (ff_max <= l1 ? "ok" : "VIOLATED")
           << '\n';
        os << "# assembly_seconds " << fmt(r.assembly_seconds) << "\n# solve_seconds " << fmt(r.solve_seconds) << '\n';
    }
    std::cout << "N=" << r.space->size() << " M=" << r.system.colloc.size() << " rank=" << r.svd.rank
              << " boundary_residual=" << fmt(bc) << "\nassembly " << r.assembly_seconds << " s, solve "
              << r.solve_seconds << " s\n";
    return 0;
}

int cmd_quad_validate(const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (!(cfg.k_min > 0) || cfg.k_max > 100 || cfg.k_min > cfg.k_max)
        throw ConfigError("quad-validate: need 0 < k_min <= k_max <= 100");
    if (cfg.t0_min < -1 || cfg.t0_max > 0 || cfg.t0_min > cfg.t0_max)
        throw ConfigError("quad-validate: need -1 <= t0_min <= t0_max <= 0");
    cfg.quad.validate();
    const auto ks = grid(cfg.k_min, cfg.k_max, cfg.k_step);
    // t0 runs from t0_max down to t0_min, matching 0, -0.05, ..., -1.
    std::vector<double> t0s;
    for (double t : grid(0.0, cfg.t0_max - cfg.t0_min, cfg.t0_step)) t0s.push_back(cfg.t0_max - t);
    const auto start = std::chrono::steady_clock::now();
    const auto rows = quad_validation(ks, t0s, cfg.quad);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fs::create_directories(ctx.out);
    Table t(ctx.out / "quad_validate.txt", cfg.describe() + "# columns: k t0 case rel_err\n");
    double worst = 0.0;
    for (const auto& r : rows) {
        t.raw() << fmt(r.k) << ' ' << fmt(r.t0) << ' ' << (static_cast<int>(r.label) + 1) << ' ' << fmt(r.rel_err)
                << '\n';
        worst = std::max(worst, r.rel_err);
    }
    t.raw() << "# max_rel_err " << fmt(worst) << "\n# seconds " << fmt(secs) << '\n';
    std::cout << "max relative error " << fmt(worst) << " over " << rows.size() << " integrals\n";
    return 0;
}

int cmd_converge(const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (cfg.p_list.empty()) throw ConfigError("converge: p_list is empty");
    const int pmax = *std::max_element(cfg.p_list.begin(), cfg.p_list.end());
    if (cfg.p_ref <= pmax) throw ConfigError("converge: p_ref must exceed every entry of p_list");
    const std::vector<double> ks = cfg.k_list.empty() ? std::vector<double>{cfg.k} : cfg.k_list;
    const Screen screen = cfg.make_screen();

    std::ostringstream body;
    body << "k,p,N,M,rel_L1,near_Linf,far_Linf,seconds\n";
    for (double k : ks) {
        const IncidentWave w = make_incident(k, cfg.d1, cfg.d2);
        SolverOptions ref_opts = cfg.solver_options(ctx.threads);
        ref_opts.p = cfg.p_ref;
        ref_opts.layers = 0;
        const SolveResult ref = solve(screen, w, ref_opts);
        for (int p : cfg.p_list) {
            SolverOptions o = cfg.solver_options(ctx.threads);
            o.p = p;
            o.layers = 0;
            const SolveResult r = solve(screen, w, o);
            const double l1 = rel_L1_error(r.solution, ref.solution);
            const double nf = near_field_Linf_error(r.solution, ref.solution, cfg.near_samples);
            const double ff = far_field_Linf_error(r.solution, ref.solution, cfg.quad, cfg.far_samples);
            body << fmt(k) << ',' << p << ',' << r.space->size() << ',' << r.system.colloc.size() << ',' << fmt(l1)
                 << ',' << fmt(nf) << ',' << fmt(ff) << ',' << fmt(r.assembly_seconds + r.solve_seconds) << '\n';
            std::cout << "k=" << k << " p=" << p << " rel_L1=" << fmt(l1) << '\n';
        }
    }
    fs::create_directories(ctx.out);
    Table t(ctx.out / "converge.csv", cfg.describe() + "# the seconds column is wall time and varies between runs\n");
    t.raw() << body.str();
    return 0;
}

int cmd_cantor(const Context& ctx) {
    const RunConfig& cfg = ctx.cfg;
    if (cfg.levels.empty()) throw ConfigError("cantor: levels is empty");
    for (int j : cfg.levels) {
        if (j < 0) throw ConfigError("cantor: levels must be >= 0");
        const long n = space_dimension(1, cfg.p, cfg.layers > 0 ? cfg.layers : 2 * (cfg.p + 1));
        if (j > 20 || (n << j) > kMaxUnknowns)
            throw NumericalError("cantor: level " + std::to_string(j) + " needs " + std::to_string(n) + " x 2^" +
                                 std::to_string(j) + " unknowns, above the budget of " +
                                 std::to_string(kMaxUnknowns));
    }
    const IncidentWave w = cfg.incident();
    struct Level {
        int j;
        SolveResult r;
    };
    std::vector<Level> results;
    for (int j : cfg.levels) results.push_back({j, solve(cantor_prefractal(j), w, cfg.solver_options(ctx.threads))});

    fs::create_directories(ctx.out);
    Table summary(ctx.out / "cantor_summary.txt", cfg.describe() + "# columns: level N M rank l1_norm far_field_max bound\n");
    bool all_ok = true;
    for (const auto& [j, r] : results) {
        RunConfig level_cfg = cfg;
        level_cfg.cantor_level = j;
        double ff_max = 0.0;
        write_far_field(ctx.out / ("far_field_level" + std::to_string(j) + ".txt"), level_cfg.describe(), r.solution,
                        cfg, &ff_max);
        const double l1 = l1_norm(r.solution);
        const bool ok = ff_max <= l1;
        all_ok = all_ok && ok;
        summary.raw() << j << ' ' << r.space->size() << ' ' << r.system.colloc.size() << ' ' << r.svd.rank << ' '
                      << fmt(l1) << ' ' << fmt(ff_max) << ' ' << (ok ? "ok" : "VIOLATED") << '\n';
        std::cout << "level " << j << ": N=" << r.space->size() << " |u_inf|max=" << fmt(ff_max)
                  << " ||v||_L1=" << fmt(l1) << (ok ? " bound ok" : " bound VIOLATED") << '\n';
    }
    return all_ok ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HNA collocation BEM for scattering by colinear sound-soft screens"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value run configuration");
        sub->add_option("--out", out_dir, "output directory (created if missing)");
        sub->add_option("--threads", threads, "worker threads for assembly (0 = all cores)")->check(CLI::NonNegativeNumber);
    };
    auto* solve_cmd = app.add_subcommand("solve", "solve once; write boundary, far-field and diagnostic tables");
    auto* quad_cmd = app.add_subcommand("quad-validate", "oscillatory quadrature vs brute force on a (k, t0) grid");
    auto* conv_cmd = app.add_subcommand("converge", "errors against a higher-degree reference over p and k lists");
    auto* cantor_cmd = app.add_subcommand("cantor", "far fields of Cantor prefractals");
    for (auto* s : {solve_cmd, quad_cmd, conv_cmd, cantor_cmd}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    Context ctx;
    ctx.out = out_dir;
    ctx.threads = threads;
    try {
        ctx.cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (solve_cmd->parsed()) return cmd_solve(ctx);
        if (quad_cmd->parsed()) return cmd_quad_validate(ctx);
        if (conv_cmd->parsed()) return cmd_converge(ctx);
        return cmd_cantor(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}
