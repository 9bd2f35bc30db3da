#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "hnabem/errors.hpp"
#include "hnabem/solver.hpp"

using namespace hnabem;

namespace {

const QuadParams kDefault{};
constexpr Complex kI{0, 1};

IncidentWave oblique(double k) { return make_incident(k, std::sqrt(0.5), -std::sqrt(0.5)); }

std::shared_ptr<const HnaSpace> unit_space(double k, int p) {
    return std::make_shared<const HnaSpace>(build_space(make_screen({{0, 1}}), k, p));
}

// Solves are shared between test cases.
const SolveResult& solved(double k, int p) {
    static std::map<std::pair<double, int>, SolveResult> cache;
    auto it = cache.find({k, p});
    if (it == cache.end()) {
        SolverOptions o;
        o.p = p;
        it = cache.emplace(std::pair{k, p}, solve(make_screen({{0, 1}}), oblique(k), o)).first;
    }
    return it->second;
}

}  // namespace

TEST_CASE("boundary evaluation") {
    const auto V = unit_space(32, 2);
    const IncidentWave w = oblique(32);
    const BoundarySolution zero(V, Eigen::VectorXcd::Zero(V->size()), w);
    for (double s : {0.0, 0.2, 0.77, 1.0}) CHECK(std::abs(eval_boundary(zero, s) - eval_psi(w, s)) < 1e-15);
    CHECK_THROWS_AS(zero.v(1.5), DomainError);

    const IncidentWave grazing = make_incident(32, 1, 0);
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(V->size());
    a(0) = 1;
    const BoundarySolution single(V, a, grazing);
    const BasisFunction& f = V->basis(0);
    const double mid = 0.5 * (f.a + f.b);
    CHECK(std::abs(single.v(mid) - V->eval(0, mid)) < 1e-15);
    // its amplitude is the constant 1/sqrt(b-a); the other direction is empty
    CHECK(std::abs(single.amplitude(0, f.dir, mid) - 1 / std::sqrt(f.b - f.a)) < 1e-12);
    const Direction other = f.dir == Direction::plus ? Direction::minus : Direction::plus;
    for (double s : {0.1, 0.5, 0.9}) CHECK(single.amplitude(0, other, s) == Complex(0, 0));
}

TEST_CASE("v splits into Psi and two modulated amplitudes") {
    const SolveResult& r = solved(128, 4);
    const auto& sol = r.solution;
    for (double s : {1e-6, 0.03, 0.5, 0.97, 1.0 - 1e-6}) {
        const Complex split = eval_psi(sol.incident(), s) +
                              sol.amplitude(0, Direction::plus, s) * std::exp(kI * 128.0 * s) +
                              sol.amplitude(0, Direction::minus, s) * std::exp(-kI * 128.0 * s);
        CHECK(std::abs(sol.v(s) - split) <= 1e-12 * std::abs(sol.v(s)));
    }
}

TEST_CASE("far field of the physical optics term") {
    const Screen one = make_screen({{0, 1}});
    const IncidentWave w = oblique(100);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> th(0, 2 * kPi);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double t = th(rng);
        const double a = w.d1 - std::cos(t);
        const Complex want = 2.0 * kI * w.k * std::abs(w.d2) * (std::exp(kI * w.k * a) - 1.0) / (kI * w.k * a);
        worst = std::max(worst, std::abs(far_field_psi(one, w, t, kDefault) - want) / std::abs(want));
    }
    CHECK(worst < 1e-10);
    const double peak = std::acos(w.d1);
    CHECK(std::abs(far_field_psi(one, w, 2 * kPi - peak, kDefault) - 2.0 * kI * w.k * std::abs(w.d2)) < 1e-10 * w.k);
    CHECK(far_field_psi(one, make_incident(100, 1, 0), 1.0, kDefault) == Complex(0, 0));
}

TEST_CASE("far-field bound and near/far consistency") {
    const SolveResult& r = solved(64, 5);
    const double l1 = l1_norm(r.solution);
    for (int i = 0; i < 720; ++i) CHECK(std::abs(far_field(r.solution, 2 * kPi * i / 720, kDefault)) <= l1);

    // u^s(r, theta) ~ u_inf(theta) e^{i(kr + pi/4)} / (2 sqrt(2 pi k r))
    const double k = 64, R = 1e4;
    for (double t : {0.4, 1.7, 3.0, 4.4, 5.9}) {
        const Complex asym = far_field(r.solution, t, kDefault) * std::exp(kI * (k * R + kPi / 4)) /
                             (2 * std::sqrt(2 * kPi * k * R));
        // measure from the screen centre, where the expansion is sharper
        const Complex u = near_field(r.solution, 0.5 + R * std::cos(t), R * std::sin(t)) *
                          std::exp(-kI * k * 0.5 * std::cos(t));
        CHECK(std::abs(u - asym) <= 0.01 * std::abs(asym));
    }
    CHECK_THROWS_AS(near_field(r.solution, 0.5, 0.0), DomainError);
}

TEST_CASE("near field of the physical optics density against brute force") {
    const auto V = unit_space(40, 1);
    const IncidentWave w = oblique(40);
    const BoundarySolution zero(V, Eigen::VectorXcd::Zero(V->size()), w);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> xd(-0.5, 1.5), yd(0.05, 1.0);
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
        const double x1 = xd(rng), x2 = (i % 2 ? 1 : -1) * yd(rng);
        GeneralOscIntegral I;
        I.k = 40;
        I.T = 1;
        I.alpha = 0;
        I.has_log_singularity = false;
        I.F = [&](Complex s) {
            const double dist = std::hypot(x1 - s.real(), x2);
            return -Complex(0, 0.25) * hankel_h0(40 * dist) * eval_psi(w, s.real());
        };
        ReferenceOptions o;
        o.points_per_wavelength = 8;
        const Complex ref = reference_integral(I, o);
        worst = std::max(worst, std::abs(near_field(zero, x1, x2) - ref) / std::abs(ref));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("boundary condition residual decreases with p") {
    double prev = 1e300;
    std::vector<double> pts;
    for (int i = 0; i < 50; ++i) pts.push_back((i + 0.5) / 50);
    for (int p : {2, 4, 6}) {
        const double r = boundary_residual(solved(256, p).solution, pts, kDefault);
        CAPTURE(p);
        CHECK(r < prev);
        prev = r;
    }
    // the total field just off the screen is small too
    const auto& sol = solved(256, 6).solution;
    for (double x : {0.13, 0.5, 0.91}) CHECK(std::abs(total_field(sol, x, 1e-10)) < 1e-3);
}

TEST_CASE("Babinet correspondence") {
    const IncidentWave w = oblique(64);
    // no scattering: u = u^i
    for (double x1 : {0.2, 3.0}) {
        const double up = 0.7, dn = -0.7;
        const Complex ui_up = eval_incident(w, x1, up), ui_dn = eval_incident(w, x1, dn);
        const IncidentWave refl{w.k, w.d1, -w.d2};
        CHECK(std::abs(babinet_aperture(ui_up, w, x1, up) - (eval_incident(refl, x1, up) + ui_up)) < 1e-15);
        CHECK(std::abs(babinet_aperture(ui_dn, w, x1, dn)) < 1e-15);
    }
    CHECK_THROWS_AS(babinet_aperture(1.0, make_incident(5, 1, 0), 0.5, 0.3), DomainError);
    CHECK_THROWS_AS(babinet_aperture(1.0, w, 0.5, 0.0), DomainError);

    // Across the aperture the two expressions differ by 2u(x1, 0), i.e. twice
    // the Dirichlet residual; the jump therefore shrinks as p grows.
    double prev = 1e300;
    for (int p : {4, 6, 8}) {
        const auto& sol = solved(64, p).solution;
        double jump = 0, resid = 0;
        for (int i = 0; i < 20; ++i) {
            const double x = (i + 0.5) / 20;
            const Complex up = babinet_aperture(total_field(sol, x, 1e-9), w, x, 1e-9);
            const Complex lo = babinet_aperture(total_field(sol, x, -1e-9), w, x, -1e-9);
            jump = std::max(jump, std::abs(up - lo));
            resid = std::max(resid, std::abs(single_layer_on_screen(sol, x, kDefault) - eval_incident(w, x, 0)));
        }
        CHECK(jump == doctest::Approx(2 * resid).epsilon(1e-3));
        CHECK(jump < prev);
        prev = jump;
    }
}

TEST_CASE("error metrics") {
    const auto& a = solved(128, 3).solution;
    CHECK(rel_L1_error(a, a) == 0.0);
    CHECK(near_field_Linf_error(a, a, 20) == 0.0);
    CHECK(far_field_Linf_error(a, a, kDefault, 36) == 0.0);

    // reference = 2 x solution (Psi = 0 makes v linear in the coefficients)
    const IncidentWave grazing = make_incident(128, 1, 0);
    const BoundarySolution x(a.space_ptr(), a.coeffs(), grazing);
    const BoundarySolution twice(a.space_ptr(), 2.0 * a.coeffs(), grazing);
    CHECK(rel_L1_error(x, twice) == doctest::Approx(0.5).epsilon(1e-12));

    const auto& ref = solved(128, 8).solution;
    const double e2 = rel_L1_error(solved(128, 2).solution, ref);
    const double e4 = rel_L1_error(solved(128, 4).solution, ref);
    CHECK(e4 > 0);
    CHECK(e4 < 1);
    CHECK(e4 < e2);

    const BoundarySolution other(std::make_shared<const HnaSpace>(build_space(cantor_prefractal(1), 128, 2)),
                                 Eigen::VectorXcd::Zero(space_dimension(2, 2, 6)), oblique(128));
    CHECK_THROWS_AS(rel_L1_error(other, ref), DomainError);
}
