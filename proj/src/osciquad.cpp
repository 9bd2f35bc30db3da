#include "hnabem/osciquad.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "hnabem/errors.hpp"

namespace hnabem {

namespace {

constexpr Complex kI{0.0, 1.0};

Complex cis(double x) { return {std::cos(x), std::sin(x)}; }

// Neumaier-compensated complex accumulator.
struct Accumulator {
    double re = 0, im = 0, cre = 0, cim = 0;

    static void add(double& s, double& c, double x) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    void operator+=(Complex z) {
        add(re, cre, z.real());
        add(im, cim, z.imag());
    }
    Complex value() const { return {re + cre, im + cim}; }
};

// int_lo^hi F(t) exp(ik alpha t) dt with F log-singular at lo, by the
// log-weight Gauss-Legendre rule mapped to [lo, hi]; lo < hi.
Complex log_legendre(const GeneralOscIntegral& I, double lo, double hi, int n, int& evals) {
    const auto rule = gauss_rule(RuleKind::legendre_log, n);
    const double len = hi - lo;
    Complex sum = 0.0;
    for (std::size_t j = 0; j < rule->count(); ++j) {
        const double t = lo + len * rule->nodes[j];
        sum += rule->weights[j] * I.F(t) * cis(I.k * I.alpha * t);
    }
    evals += static_cast<int>(rule->count());
    return len * sum;
}

}  // namespace

void QuadParams::validate() const {
    if (!(c_osc > 0)) throw ParameterError("quad params: c_osc must be positive");
    if (!(c_sing > 0 && c_sing <= 1)) throw ParameterError("quad params: c_sing must lie in (0, 1]");
    if (n_q < 1) throw ParameterError("quad params: N_Q must be >= 1");
}

std::string to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::case1: return "Case1";
        case CaseLabel::case2: return "Case2";
        case CaseLabel::case3: return "Case3";
        case CaseLabel::case4: return "Case4";
    }
    return "unknown";
}

CaseLabel classify(double k, double T, double alpha, double t0, const QuadParams& params) {
    const double dist = std::abs(t0);
    if (k * alpha * T / (2 * kPi) > params.c_osc) {
        const bool singular = dist * k * alpha / (2 * kPi * params.c_osc) < params.c_sing;
        return singular ? CaseLabel::case4 : CaseLabel::case3;
    }
    return dist / T < params.c_sing ? CaseLabel::case2 : CaseLabel::case1;
}

CaseLabel classify(const GeneralOscIntegral& I, const QuadParams& params) {
    const double t0 = I.has_log_singularity ? I.t0 : -HUGE_VAL;
    return classify(I.k, I.T, I.alpha, t0, params);
}

Complex steepest_descent_halfline(const Prefactor& F, double k, double alpha, double anchor,
                                  const QuadParams& params, bool log_singular, int* evals) {
    const double ka = k * alpha;
    if (!(ka > 0)) throw ParameterError("steepest_descent_halfline: k alpha must be positive");
    const auto rule = log_singular ? gauss_rule(RuleKind::laguerre_log, 2 * params.n_q)
                                   : gauss_rule(RuleKind::laguerre, params.n_q);
    Complex sum = 0.0;
    for (std::size_t j = 0; j < rule->count(); ++j)
        sum += rule->weights[j] * F(Complex(anchor, rule->nodes[j] / ka));
    if (evals) *evals += static_cast<int>(rule->count());
    return kI / ka * cis(ka * anchor) * sum;
}

OscResult integrate(const GeneralOscIntegral& I, const QuadParams& params) {
    if (!(I.T > 0) || !std::isfinite(I.T)) throw ParameterError("integrate: T must be positive");
    if (!(I.k > 0) || !std::isfinite(I.k)) throw ParameterError("integrate: k must be positive");
    if (!(I.alpha >= 0) || !std::isfinite(I.alpha)) throw ParameterError("integrate: alpha must be >= 0");
    if (I.has_log_singularity && !(I.t0 <= 0)) throw ParameterError("integrate: t0 must be <= 0");

    OscResult out{0.0, classify(I, params), 0};
    const int nq = params.n_q;
    switch (out.label) {
        case CaseLabel::case1: {
            const auto rule = gauss_rule(RuleKind::legendre, nq);
            Complex sum = 0.0;
            for (std::size_t j = 0; j < rule->count(); ++j) {
                const double t = 0.5 * I.T * (rule->nodes[j] + 1);
                sum += rule->weights[j] * I.F(t) * cis(I.k * I.alpha * t);
            }
            out.evaluations = nq;
            out.value = 0.5 * I.T * sum;
            break;
        }
        case CaseLabel::case2: {
            Complex v = log_legendre(I, I.t0, I.T, 2 * nq, out.evaluations);
            if (I.t0 < 0) v -= log_legendre(I, I.t0, 0.0, 2 * nq, out.evaluations);
            out.value = v;
            break;
        }
        case CaseLabel::case3:
            out.value = steepest_descent_halfline(I.F, I.k, I.alpha, 0.0, params, false, &out.evaluations) -
                        steepest_descent_halfline(I.F, I.k, I.alpha, I.T, params, false, &out.evaluations);
            break;
        case CaseLabel::case4: {
            Complex v = steepest_descent_halfline(I.F, I.k, I.alpha, I.t0, params, true, &out.evaluations) -
                        steepest_descent_halfline(I.F, I.k, I.alpha, I.T, params, false, &out.evaluations);
            if (I.t0 < 0) v -= log_legendre(I, I.t0, 0.0, 2 * nq, out.evaluations);
            out.value = v;
            break;
        }
    }
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
        throw NumericalError("integrate: non-finite result (" + to_string(out.label) + ")");
    return out;
}

namespace {

struct CompositeValue {
    Complex value;
    double mass;  // int |F|, the scale of the rounding error
};

CompositeValue composite(const GeneralOscIntegral& I, double ppw, int depth) {
    constexpr int kPanelPoints = 20;
    const auto rule = gauss_rule(RuleKind::legendre, kPanelPoints);
    const double ka = I.k * I.alpha;
    const double wavelength = ka > 0 ? 2 * kPi / ka : HUGE_VAL;
    // F itself varies on the scale 1/k through the Hankel factor.
    const double scale = std::min(wavelength, 2 * kPi / I.k);
    const double h_max = scale / ppw;
    const int base = std::max(1, static_cast<int>(std::ceil(I.T / h_max)));
    const double h = I.T / base;

    std::vector<double> edges;
    edges.push_back(0.0);
    double lo = h * std::ldexp(1.0, -depth);
    for (int i = depth; i > 0; --i, lo *= 2) edges.push_back(lo);
    for (int i = 1; i <= base; ++i) edges.push_back(i == base ? I.T : i * h);

    Accumulator acc;
    double mass = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        Complex sum = 0.0;
        double abs_sum = 0.0;
        for (std::size_t j = 0; j < rule->count(); ++j) {
            const double t = a + 0.5 * (b - a) * (rule->nodes[j] + 1);
            const Complex f = I.F(t);
            sum += rule->weights[j] * f * cis(ka * t);
            abs_sum += rule->weights[j] * std::abs(f);
        }
        acc += 0.5 * (b - a) * sum;
        mass += 0.5 * (b - a) * abs_sum;
    }
    return {acc.value(), mass};
}

}  // namespace

Complex reference_integral(const GeneralOscIntegral& I, const ReferenceOptions& opts) {
    if (!(I.T > 0)) throw ParameterError("reference_integral: T must be positive");
    double ppw = opts.points_per_wavelength;
    int depth = opts.grading_depth;
    Complex prev = composite(I, ppw, depth).value;
    for (int r = 0; r < opts.max_refinements; ++r) {
        ppw *= 2;
        depth += 10;
        const auto [next, mass] = composite(I, ppw, depth);
        // Strongly cancelling integrals cannot agree to the relative tolerance
        // in double precision; accept agreement at the rounding floor of the sum.
        const double floor = 64 * std::numeric_limits<double>::epsilon() * mass;
        if (std::abs(next - prev) <= std::max(opts.tolerance * std::abs(next), floor)) return next;
        prev = next;
    }
    throw NumericalError("reference_integral: refinements did not agree to the requested tolerance");
}

GeneralOscIntegral model_integral(double k, double t0) {
    const Complex phase = cis(-k * t0);
    GeneralOscIntegral I;
    I.F = [k, t0, phase](Complex t) { return phase * hankel_h0_scaled(k * (t - t0)); };
    I.k = k;
    I.T = 1.0;
    I.alpha = 1.0;
    I.t0 = t0;
    I.has_log_singularity = true;
    return I;
}

std::vector<QuadValidationRow> quad_validation(const std::vector<double>& ks, const std::vector<double>& t0s,
                                               const QuadParams& params) {
    std::vector<QuadValidationRow> rows;
    rows.reserve(ks.size() * t0s.size());
    for (double k : ks)
        for (double t0 : t0s) {
            const GeneralOscIntegral I = model_integral(k, t0);
            const OscResult r = integrate(I, params);
            const Complex ref = reference_integral(I);
            rows.push_back({k, t0, r.label, std::abs(r.value - ref) / std::abs(ref)});
        }
    return rows;
}

}  // namespace hnabem
