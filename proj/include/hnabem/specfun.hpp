#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace hnabem {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// H_0^{(1)}(z) e^{-iz} on the closed upper half-plane minus the branch cut (-inf, 0].
///
/// Small arguments (|z| <= 2) use the ascending series for J_0 and Y_0; larger
/// arguments use Steed's continued fraction for K_0(-iz) in Temme's normalisation,
/// which is naturally scaled and free of cancellation for complex z.  Beyond
/// |z| = 40 the Hankel asymptotic expansion is cheaper and equally accurate.
///
/// Throws DomainError for Im z < 0, for z on (-inf, 0) and for z = 0.
Complex hankel_h0_scaled(Complex z);

/// Unscaled H_0^{(1)}(z) = hankel_h0_scaled(z) e^{iz}.
Complex hankel_h0(Complex z);

/// L^2([a,b])-normalised Legendre polynomial sqrt((2q+1)/(b-a)) P_q(2(s-a)/(b-a) - 1).
/// Accepts complex s so it can be evaluated on deformed contours.
double legendre_normalized(int q, double a, double b, double s);
Complex legendre_normalized(int q, double a, double b, Complex s);

enum class RuleKind {
    legendre,      // int_{-1}^{1} f(x) dx
    laguerre,      // int_0^inf f(x) e^{-x} dx
    legendre_log,  // int_0^1 [f0(x) + f1(x) log x] dx
    laguerre_log,  // int_0^inf [f(x) log x + g(x)] e^{-x} dx
};

std::string to_string(RuleKind kind);

struct QuadRule {
    RuleKind kind;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t count() const { return nodes.size(); }
};

/// Gaussian rule of the requested kind with n nodes.
///
/// The log kinds are true generalised Gaussian rules: n nodes and n weights
/// matching the 2n moments of {x^j, x^j log x : j < n} against the respective
/// weight. They are built once per (kind, n) and cached; the cache is safe for
/// concurrent readers. Throws ParameterError for n < 1 and NumericalError when
/// the construction does not converge.
std::shared_ptr<const QuadRule> gauss_rule(RuleKind kind, int n);

/// `node weight` table with 17 significant digits.
std::string format_rule(const QuadRule& rule);

}  // namespace hnabem
