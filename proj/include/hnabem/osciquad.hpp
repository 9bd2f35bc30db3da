#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hnabem/specfun.hpp"

namespace hnabem {

/// Classification and rule-size parameters of the oscillatory quadrature.
struct QuadParams {
    double c_osc = 2.0;
    double c_sing = 0.5;
    int n_q = 20;

    /// Throws ParameterError unless c_osc > 0, 0 < c_sing <= 1, n_q >= 1.
    void validate() const;
};

enum class CaseLabel { case1, case2, case3, case4 };

std::string to_string(CaseLabel c);

using Prefactor = std::function<Complex(Complex)>;

/// I[F; k, T, alpha] = int_0^T F(t) exp(ik alpha t) dt.
///
/// F must be analytic in the plane cut along (-inf, t0] and grow at most
/// polynomially; near t0 it may behave like F0 + F1 log(k|t - t0|). When
/// has_log_singularity is false, t0 is ignored and the integral is never
/// treated as singular.
struct GeneralOscIntegral {
    Prefactor F;
    double k = 1.0;
    double T = 1.0;
    double alpha = 0.0;
    double t0 = 0.0;
    bool has_log_singularity = true;
};

struct OscResult {
    Complex value;
    CaseLabel label;
    int evaluations = 0;  // calls of F
};

/// Oscillatory iff k alpha T / 2pi > c_osc; singular iff |t0|/T < c_sing
/// (non-oscillatory) or |t0| k alpha / (2pi c_osc) < c_sing (oscillatory).
CaseLabel classify(double k, double T, double alpha, double t0, const QuadParams& params);
CaseLabel classify(const GeneralOscIntegral& I, const QuadParams& params);

/// Fixed-cost evaluation: N_Q, 4N_Q, 2N_Q or 5N_Q prefactor calls for cases
/// 1-4 (fewer when t0 = 0). Throws ParameterError for invalid T, k, alpha or t0.
OscResult integrate(const GeneralOscIntegral& I, const QuadParams& params);

/// int_anchor^{anchor + i inf} F(t) exp(ik alpha t) dt
///   = (i/(k alpha)) exp(ik alpha anchor) int_0^inf F(anchor + i xi/(k alpha)) e^{-xi} dxi,
/// by N_Q-point Gauss-Laguerre, or 2N_Q-point log-weight Gauss-Laguerre when
/// F is log-singular at the anchor. Adds the number of F calls to *evals.
Complex steepest_descent_halfline(const Prefactor& F, double k, double alpha, double anchor,
                                  const QuadParams& params, bool log_singular, int* evals = nullptr);

struct ReferenceOptions {
    double points_per_wavelength = 2.0;  // 20-point panels per oscillation period
    int grading_depth = 60;              // dyadic panels toward t = 0
    double tolerance = 1e-14;            // agreement of successive refinements
    int max_refinements = 4;
};

/// Brute-force composite Gauss-Legendre value of I on the real interval,
/// refined until two successive refinements agree to the tolerance (or, for
/// strongly cancelling integrands, to 64 eps int|F|).
/// Throws NumericalError otherwise.
Complex reference_integral(const GeneralOscIntegral& I, const ReferenceOptions& opts = {});

/// The model integral int_0^1 H_0^(1)(k(t - t0)) dt, t0 <= 0, in general form
/// (alpha = 1, F(t) = e^{-ik t0} H_0^(1)(k(t - t0)) e^{-ik(t - t0)}).
GeneralOscIntegral model_integral(double k, double t0);

struct QuadValidationRow {
    double k;
    double t0;
    CaseLabel label;
    double rel_err;
};

/// integrate() against reference_integral() for the model integral on the
/// grid ks x t0s.
std::vector<QuadValidationRow> quad_validation(const std::vector<double>& ks, const std::vector<double>& t0s,
                                               const QuadParams& params);

}  // namespace hnabem
