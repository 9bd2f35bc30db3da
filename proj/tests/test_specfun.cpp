#include <cmath>
#include <random>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "doctest.h"
#include "hnabem/errors.hpp"
#include "hnabem/specfun.hpp"

using namespace hnabem;
namespace mp = boost::multiprecision;

namespace {

using Big = mp::cpp_bin_float_50;
using BigC = mp::cpp_complex_100;

// Ascending series for J0 + iY0 in 100-digit arithmetic, good for |z| <= 40.
Complex h0_series_oracle(Complex z) {
    const BigC zz(z.real(), z.imag());
    const BigC q = -zz * zz / 4;
    BigC term = 1, j0 = 1, tail = 0;
    mp::cpp_bin_float_100 harmonic = 0;
    for (int m = 1; m < 400; ++m) {
        term *= q / (m * m);
        harmonic += mp::cpp_bin_float_100(1) / m;
        j0 += term;
        tail += harmonic * term;
    }
    const mp::cpp_bin_float_100 pi = boost::math::constants::pi<mp::cpp_bin_float_100>();
    const mp::cpp_bin_float_100 gamma = boost::math::constants::euler<mp::cpp_bin_float_100>();
    const BigC y0 = (2 / pi) * ((log(zz / 2) + gamma) * j0 - tail);
    const BigC h = (j0 + BigC(0, 1) * y0) * exp(BigC(0, -1) * zz);
    return {static_cast<double>(h.real()), static_cast<double>(h.imag())};
}

// H0(z) e^{-iz} = (2/(i pi)) int_0^inf exp(-w (cosh t - 1)) dt, w = -iz, Re w > 0.
Complex h0_integral_oracle(Complex z) {
    using boost::math::quadrature::gauss;
    const std::complex<long double> w(z.imag(), -z.real());
    // integrand below e^{-60} once (cosh t - 1) Re w > 60
    const long double tmax = std::acosh(1 + 60 / w.real());
    // panels short enough to resolve the phase Im w (cosh t - 1)
    const int panels = 50 + static_cast<int>(std::abs(w.imag()) * std::cosh(tmax) / 4);
    const long double h = tmax / panels;
    long double re = 0, im = 0;
    for (int p = 0; p < panels; ++p) {
        const long double a = p * h, b = a + h;
        re += gauss<long double, 30>::integrate([&](long double t) { return std::exp(-w * (std::cosh(t) - 1)).real(); }, a, b);
        im += gauss<long double, 30>::integrate([&](long double t) { return std::exp(-w * (std::cosh(t) - 1)).imag(); }, a, b);
    }
    const std::complex<long double> r = std::complex<long double>(re, im) * std::complex<long double>(0, -2) /
                                        boost::math::constants::pi<long double>();
    return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("hankel_h0_scaled at z = 1") {
    const Complex want = Complex(0.7651976865579666, 0.08825696421567696) * std::exp(Complex(0, -1));
    CHECK(rel(hankel_h0_scaled(1.0), want) < 1e-14);
}

TEST_CASE("hankel_h0 small-argument leading form") {
    const double z = 1e-6;
    const Complex lead = 1.0 + Complex(0, 2 / kPi) * (std::log(z / 2) + kEulerGamma);
    CHECK(std::abs(hankel_h0(z) - lead) < 1e-11);
}

TEST_CASE("hankel_h0_scaled large-argument form") {
    const double x = 1e4;
    const Complex lead = std::sqrt(2 / (kPi * x)) * std::exp(Complex(0, -kPi / 4));
    CHECK(std::abs(hankel_h0_scaled(x) - lead) <= 1e-3 / x);
}

TEST_CASE("hankel_h0 on the real axis against boost J0, Y0 in 50 digits") {
    double worst_re = 0, worst_im = 0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 0.1 * std::pow(500.0, i / 400.0);  // 0.1 .. 50
        const Big bx(x);
        const double j0 = static_cast<double>(boost::math::cyl_bessel_j(0, bx));
        const double y0 = static_cast<double>(boost::math::cyl_neumann(0, bx));
        const Complex h = hankel_h0(x);
        const double scale = std::hypot(j0, y0);
        worst_re = std::max(worst_re, std::abs(h.real() - j0) / scale);
        worst_im = std::max(worst_im, std::abs(h.imag() - y0) / scale);
    }
    CHECK(worst_re < 1e-12);
    CHECK(worst_im < 1e-12);
}

TEST_CASE("scaled hankel modulus on the real axis up to 1e6") {
    double worst = 0;
    for (int i = 0; i <= 200; ++i) {
        const double x = 1e-8 * std::pow(1e14, i / 200.0);
        const Big bx(x);
        const Big j0 = boost::math::cyl_bessel_j(0, bx), y0 = boost::math::cyl_neumann(0, bx);
        const double mod = static_cast<double>(sqrt(j0 * j0 + y0 * y0));
        worst = std::max(worst, std::abs(std::abs(hankel_h0_scaled(x)) - mod) / mod);
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("hankel_h0_scaled in the upper half-plane against a 100-digit series") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(-2.0, std::log10(40.0)), th(0, kPi);
    double worst = 0;
    for (int i = 0; i < 300; ++i) {
        const Complex z = std::polar(std::pow(10.0, r(rng)), th(rng));
        if (z.imag() == 0 && z.real() <= 0) continue;
        worst = std::max(worst, rel(hankel_h0_scaled(z), h0_series_oracle(z)));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("hankel_h0_scaled for large complex arguments against the K0 integral") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> r(1.0, 4.0), th(0.15, kPi - 0.15);
    double worst = 0;
    for (int i = 0; i < 60; ++i) {
        const Complex z = std::polar(std::pow(10.0, r(rng)), th(rng));
        worst = std::max(worst, rel(hankel_h0_scaled(z), h0_integral_oracle(z)));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("hankel_h0_scaled domain errors") {
    CHECK_THROWS_AS(hankel_h0_scaled(0.0), DomainError);
    CHECK_THROWS_AS(hankel_h0_scaled(-1.0), DomainError);
    CHECK_THROWS_AS(hankel_h0_scaled(Complex(1, -1e-3)), DomainError);
    CHECK_NOTHROW(hankel_h0_scaled(Complex(-1, 1e-3)));
}

TEST_CASE("legendre_normalized") {
    CHECK(legendre_normalized(0, 0, 2, 1.3) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(legendre_normalized(1, -1, 1, 1.0) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
    const auto g = gauss_rule(RuleKind::legendre, 16);
    const double a = 0.3, b = 1.7;
    double worst = 0;
    for (int q = 0; q <= 10; ++q)
        for (int r = 0; r <= 10; ++r) {
            double s = 0;
            for (std::size_t j = 0; j < g->count(); ++j) {
                const double x = a + (b - a) * (g->nodes[j] + 1) / 2;
                s += g->weights[j] * (b - a) / 2 * legendre_normalized(q, a, b, x) * legendre_normalized(r, a, b, x);
            }
            worst = std::max(worst, std::abs(s - (q == r ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-13);
    CHECK(std::abs(legendre_normalized(3, a, b, Complex(0.9, 0)) - legendre_normalized(3, a, b, 0.9)) < 1e-15);
}

TEST_CASE("classical rules") {
    const auto g2 = gauss_rule(RuleKind::legendre, 2);
    CHECK(g2->nodes[0] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2->nodes[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2->weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    const auto l1 = gauss_rule(RuleKind::laguerre, 1);
    CHECK(l1->nodes[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(l1->weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    for (int n : {1, 2, 5, 10, 20, 40}) {
        const auto g = gauss_rule(RuleKind::legendre, n);
        const auto l = gauss_rule(RuleKind::laguerre, n);
        double sg = 0, sl = 0;
        for (std::size_t i = 0; i < g->count(); ++i) {
            sg += g->weights[i];
            sl += l->weights[i];
            CHECK(g->weights[i] > 0);
            CHECK(std::abs(g->nodes[i]) < 1);
            CHECK(l->nodes[i] > 0);
        }
        CHECK(std::abs(sg - 2) < 1e-14);
        CHECK(std::abs(sl - 1) < 1e-13);
        // exactness: x^j over [-1,1] and x^j e^{-x} over [0,inf), j <= 2n-1
        for (int j = 0; j <= 2 * n - 1; ++j) {
            double ig = 0;
            long double il = 0;
            for (std::size_t i = 0; i < g->count(); ++i) {
                ig += g->weights[i] * std::pow(g->nodes[i], j);
                il += l->weights[i] * std::pow(static_cast<long double>(l->nodes[i]), j);
            }
            CHECK(std::abs(ig - (j % 2 ? 0.0 : 2.0 / (j + 1))) < 1e-13);
            if (j <= 40) {
                const double f = boost::math::factorial<double>(j);
                CHECK(std::abs(static_cast<double>(il) - f) / f < 1e-11);
            }
        }
    }
    CHECK_THROWS_AS(gauss_rule(RuleKind::legendre, 0), ParameterError);
}

TEST_CASE("generalised rules match the log moments") {
    // On [0, 1] the monomial moments are well conditioned (positive weights,
    // no cancellation). On the half line they are not for large n, so the
    // Laguerre-log rules are checked on Laguerre polynomials instead:
    // int L_j e^-x = [j = 0], int L_j log x e^-x = -gamma (j = 0), -1/j.
    double worst_leg = 0, worst_lag = 0, named = 0;
    for (int n = 1; n <= 40; ++n) {
        CAPTURE(n);
        const auto a = gauss_rule(RuleKind::legendre_log, n);
        const auto b = gauss_rule(RuleKind::laguerre_log, n);
        REQUIRE(a->count() == static_cast<std::size_t>(n));
        REQUIRE(b->count() == static_cast<std::size_t>(n));
        std::vector<long double> q(n), ql(n);
        for (int i = 0; i < n; ++i) {
            const long double y = b->nodes[i];
            long double l0 = 1, l1 = 1 - y;
            for (int j = 0; j < n; ++j) {
                long double lj = j == 0 ? 1 : l1;
                if (j >= 2) {
                    lj = ((2 * j - 1 - y) * l1 - (j - 1) * l0) / j;
                    l0 = l1;
                    l1 = lj;
                }
                q[j] += b->weights[i] * lj;
                ql[j] += b->weights[i] * lj * std::log(y);
            }
        }
        for (int j = 0; j < n; ++j) {
            long double p = 0, pl = 0;
            for (int i = 0; i < n; ++i) {
                const long double x = a->nodes[i];
                p += a->weights[i] * std::pow(x, j);
                pl += a->weights[i] * std::pow(x, j) * std::log(x);
            }
            worst_leg = std::max({worst_leg, std::abs(static_cast<double>(p) * (j + 1) - 1),
                                  std::abs(static_cast<double>(pl) * (j + 1) * (j + 1) + 1)});
            const double want_log = j == 0 ? -kEulerGamma : -1.0 / j;
            worst_lag = std::max({worst_lag, std::abs(static_cast<double>(q[j]) - (j == 0 ? 1.0 : 0.0)),
                                  std::abs(static_cast<double>(ql[j]) - want_log)});
        }
        // int log x e^-x = -gamma and int x log x e^-x = 1 - gamma
        if (n >= 2) {
            double m0 = 0, m1 = 0;
            for (int i = 0; i < n; ++i) {
                m0 += b->weights[i] * std::log(b->nodes[i]);
                m1 += b->weights[i] * b->nodes[i] * std::log(b->nodes[i]);
            }
            named = std::max({named, std::abs(m0 + kEulerGamma), std::abs(m1 - (1 - kEulerGamma))});
        }
    }
    CHECK(worst_leg < 1e-12);
    CHECK(worst_lag < 1e-13);
    CHECK(named < 1e-12);
}

TEST_CASE("rule factories are deterministic under concurrent first use") {
    std::vector<std::shared_ptr<const QuadRule>> got(4);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { got[t] = gauss_rule(RuleKind::laguerre_log, 24); });
    for (auto& th : pool) th.join();
    for (int t = 1; t < 4; ++t) {
        CHECK(got[t]->nodes == got[0]->nodes);
        CHECK(got[t]->weights == got[0]->weights);
    }
    const std::string dump = format_rule(*gauss_rule(RuleKind::legendre, 3));
    CHECK(dump.find("# legendre n=3") == 0);
}
