#include "hnabem/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hnabem/errors.hpp"

namespace hnabem {

namespace {

constexpr Complex kI{0.0, 1.0};

// Ascending series, DLMF 10.2.2 and 10.8.2, times e^{-iz}.
Complex h0_scaled_series(Complex z) {
    const Complex q = -0.25 * z * z;
    Complex term = 1.0;
    Complex j0 = 1.0;
    Complex tail = 0.0;  // sum_{m>=1} H_m q^m / (m!)^2
    double harmonic = 0.0;
    for (int m = 1; m < 60; ++m) {
        term *= q / (static_cast<double>(m) * m);
        harmonic += 1.0 / m;
        j0 += term;
        tail += harmonic * term;
        if (std::abs(term) * harmonic < 1e-18 * std::abs(j0)) break;
    }
    const Complex y0 = (2.0 / kPi) * ((std::log(0.5 * z) + kEulerGamma) * j0 - tail);
    return (j0 + kI * y0) * std::exp(-kI * z);
}

// Steed's continued fraction for K_0(w) e^{w}, w = -iz with Re w >= 0.
Complex h0_scaled_cf(Complex z) {
    const Complex w = -kI * z;
    Complex b = 2.0 * (1.0 + w);
    Complex d = 1.0 / b;
    Complex h = d;
    Complex delh = d;
    Complex q1 = 0.0;
    Complex q2 = 1.0;
    const double a1 = 0.25;
    Complex q = a1;
    double c = a1;
    double a = -a1;
    Complex s = 1.0 + q * delh;
    int i = 1;
    for (; i < 20000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const Complex qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const Complex dels = q * delh;
        s += dels;
        if (std::abs(dels) < 1e-17 * std::abs(s)) break;
    }
    if (i == 20000) throw NumericalError("hankel_h0_scaled: continued fraction did not converge");
    const Complex k0_scaled = std::sqrt(kPi / (2.0 * w)) / s;
    return (2.0 / (kPi * kI)) * k0_scaled;
}

// Hankel expansion, DLMF 10.17.5.
Complex h0_scaled_asymptotic(Complex z) {
    const Complex inv = 1.0 / z;
    Complex term = 1.0;
    Complex sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double r = (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
        term *= -r * kI * inv;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(2.0 / (kPi * z)) * std::exp(Complex(0.0, -0.25 * kPi)) * sum;
}

}  // namespace

Complex hankel_h0_scaled(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("hankel_h0_scaled: non-finite argument");
    if (z.imag() < 0.0) throw DomainError("hankel_h0_scaled: Im z < 0");
    if (z.imag() == 0.0 && z.real() <= 0.0) {
        if (z.real() == 0.0) throw DomainError("hankel_h0_scaled: logarithmic singularity at z = 0");
        throw DomainError("hankel_h0_scaled: z on the branch cut (-inf, 0]");
    }
    const double r = std::abs(z);
    if (r <= 2.0) return h0_scaled_series(z);
    if (r < 40.0) return h0_scaled_cf(z);
    return h0_scaled_asymptotic(z);
}

Complex hankel_h0(Complex z) { return hankel_h0_scaled(z) * std::exp(kI * z); }

namespace {

template <class T>
T legendre_p(int q, T x) {
    if (q == 0) return T(1.0);
    T p0 = T(1.0);
    T p1 = x;
    for (int n = 1; n < q; ++n) {
        T p2 = (static_cast<double>(2 * n + 1) * x * p1 - static_cast<double>(n) * p0) /
               static_cast<double>(n + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace

double legendre_normalized(int q, double a, double b, double s) {
    const double x = 2.0 * (s - a) / (b - a) - 1.0;
    return std::sqrt((2.0 * q + 1.0) / (b - a)) * legendre_p(q, x);
}

Complex legendre_normalized(int q, double a, double b, Complex s) {
    const Complex x = 2.0 * (s - a) / (b - a) - 1.0;
    return std::sqrt((2.0 * q + 1.0) / (b - a)) * legendre_p(q, x);
}

std::string to_string(RuleKind kind) {
    switch (kind) {
        case RuleKind::legendre: return "legendre";
        case RuleKind::laguerre: return "laguerre";
        case RuleKind::legendre_log: return "legendre_log";
        case RuleKind::laguerre_log: return "laguerre_log";
    }
    return "unknown";
}

std::string format_rule(const QuadRule& rule) {
    std::ostringstream os;
    os.precision(17);
    os << "# " << to_string(rule.kind) << " n=" << rule.count() << '\n';
    for (std::size_t i = 0; i < rule.count(); ++i)
        os << rule.nodes[i] << ' ' << rule.weights[i] << '\n';
    return os.str();
}

}  // namespace hnabem
