// Internal: generalised Gaussian rule construction, templated on the working
// precision so the same code serves the long double runtime path and the
// quad-precision table generator.
//
// The generalised rules are obtained by continuation in a Muntz-type family.
// For beta in (0, 1/2] the 2n functions {x^j, x^{j+beta}}, j < n, form a
// Chebyshev system whose n-node Gaussian rule is unique. At beta = 1/2 the
// substitution x = y^2 reduces it to a classical Gauss rule in y, and as
// beta -> 0 the span of {x^j, (x^{j+beta} - x^j)/beta} tends to
// {x^j, x^j log x}. Newton's method on the moment equations follows the rule
// from beta = 1/2 down to beta = 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hnabem/errors.hpp"

namespace hnabem::gauss_detail {

// Unqualified calls so that multiprecision types are found by ADL.
namespace fn {
template <class T> T cos(const T& x) { using std::cos; return cos(x); }
template <class T> T sqrt(const T& x) { using std::sqrt; return sqrt(x); }
template <class T> T log(const T& x) { using std::log; return log(x); }
template <class T> T expm1(const T& x) { using std::expm1; return expm1(x); }
template <class T> T exp(const T& x) { using std::exp; return exp(x); }
template <class T> T ceil(const T& x) { using std::ceil; return ceil(x); }
template <class T> T fabs(const T& x) { using std::fabs; return fabs(x); }
template <class T> T ldexp(const T& x, int e) { using std::ldexp; return ldexp(x, e); }
template <class T> bool isfinite(const T& x) { using std::isfinite; return isfinite(x); }
}  // namespace fn

template <class Real>
struct Kit {
    static Real eps() { return std::numeric_limits<Real>::epsilon(); }

    using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    using MatR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

    struct RawRule {
        std::vector<Real> nodes;
        std::vector<Real> weights;
    };

    static RawRule gauss_legendre_raw(int n) {
        RawRule r;
        r.nodes.resize(n);
        r.weights.resize(n);
        const Real pi = 3.14159265358979323846264338327950288L;
        for (int i = 0; i < n; ++i) {
            Real x = fn::cos(pi * (i + 0.75L) / (n + 0.5L));
            Real dp = 0;
            for (int it = 0; it < 100; ++it) {
                Real p0 = 1, p1 = x;
                for (int j = 1; j < n; ++j) {
                    Real p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) p0 = 1;
                dp = n * (x * p1 - p0) / (x * x - 1);
                const Real dx = p1 / dp;
                x -= dx;
                if (fn::fabs(dx) < 4 * std::numeric_limits<Real>::epsilon()) {
                    // one more evaluation of the derivative at the converged node
                    p0 = 1;
                    p1 = x;
                    for (int j = 1; j < n; ++j) {
                        Real p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
                        p0 = p1;
                        p1 = p2;
                    }
                    if (n == 1) p0 = 1;
                    dp = n * (x * p1 - p0) / (x * x - 1);
                    break;
                }
            }
            r.nodes[n - 1 - i] = x;
            r.weights[n - 1 - i] = 2 / ((1 - x * x) * dp * dp);
        }
        return r;
    }

    // Golub-Welsch from recurrence coefficients of monic orthogonal polynomials.
    static RawRule golub_welsch(const std::vector<Real>& alpha, const std::vector<Real>& beta, Real mu0) {
        const int n = static_cast<int>(alpha.size());
        MatR jac = MatR::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            jac(i, i) = alpha[i];
            if (i + 1 < n) {
                jac(i, i + 1) = fn::sqrt(beta[i + 1]);
                jac(i + 1, i) = jac(i, i + 1);
            }
        }
        Eigen::SelfAdjointEigenSolver<MatR> es(jac);
        if (es.info() != Eigen::Success) throw NumericalError("gauss_rule: Golub-Welsch eigensolver failed");
        RawRule r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            r.nodes[i] = es.eigenvalues()(i);
            const Real v = es.eigenvectors()(0, i);
            r.weights[i] = mu0 * v * v;
        }
        return r;
    }

    // Polished Gauss-Laguerre: eigenvalues as seeds, Newton on L_n, weights from L_{n+1}.
    static RawRule gauss_laguerre_raw(int n) {
        std::vector<Real> alpha(n), beta(n);
        for (int i = 0; i < n; ++i) {
            alpha[i] = 2 * i + 1;
            beta[i] = static_cast<Real>(i) * i;
        }
        RawRule r = golub_welsch(alpha, beta, 1);
        for (int i = 0; i < n; ++i) {
            Real x = r.nodes[i];
            for (int it = 0; it < 50; ++it) {
                Real l0 = 1, l1 = 1 - x;
                Real d0 = 0, d1 = -1;
                if (n == 1) {
                    l1 = 1 - x;
                } else {
                    for (int j = 1; j < n; ++j) {
                        const Real l2 = ((2 * j + 1 - x) * l1 - j * l0) / (j + 1);
                        const Real d2 = ((2 * j + 1 - x) * d1 - l1 - j * d0) / (j + 1);
                        l0 = l1;
                        l1 = l2;
                        d0 = d1;
                        d1 = d2;
                    }
                }
                const Real dx = l1 / d1;
                x -= dx;
                if (fn::fabs(dx) <= 4 * std::numeric_limits<Real>::epsilon() * (1 + x)) break;
            }
            // w = x / ((n+1)^2 L_{n+1}(x)^2)
            Real l0 = 1, l1 = 1 - x;
            for (int j = 1; j <= n; ++j) {
                const Real l2 = ((2 * j + 1 - x) * l1 - j * l0) / (j + 1);
                l0 = l1;
                l1 = l2;
            }
            // after the loop l1 = L_{n+1}
            r.nodes[i] = x;
            r.weights[i] = x / ((n + 1.0L) * (n + 1.0L) * l1 * l1);
        }
        return r;
    }

    // Stieltjes procedure on a discrete measure, then Golub-Welsch.
    static RawRule gauss_from_discrete_measure(const std::vector<Real>& y, const std::vector<Real>& m, int n) {
        const std::size_t K = y.size();
        std::vector<Real> alpha(n), beta(n);
        std::vector<Real> pm1(K, 0), p(K, 1), pn(K);
        Real norm_prev = 1;
        Real norm = std::accumulate(m.begin(), m.end(), Real(0));
        const Real mu0 = norm;
        for (int j = 0; j < n; ++j) {
            Real num = 0;
            for (std::size_t k = 0; k < K; ++k) num += m[k] * y[k] * p[k] * p[k];
            alpha[j] = num / norm;
            beta[j] = (j == 0) ? mu0 : norm / norm_prev;
            Real next_norm = 0;
            for (std::size_t k = 0; k < K; ++k) {
                pn[k] = (y[k] - alpha[j]) * p[k] - (j == 0 ? 0 : beta[j]) * pm1[k];
                next_norm += m[k] * pn[k] * pn[k];
            }
            pm1.swap(p);
            p.swap(pn);
            norm_prev = norm;
            norm = next_norm;
        }
        return golub_welsch(alpha, beta, mu0);
    }

    // g_beta(x) = (x^beta - 1)/beta, -> log x as beta -> 0, and its derivative.
    static Real g_beta(Real x, Real b) { return b == 0 ? fn::log(x) : fn::expm1(b * fn::log(x)) / b; }
    static Real dg_beta(Real x, Real b) { return b == 0 ? 1 / x : fn::exp((b - 1) * fn::log(x)); }

    // {sqrt(2j+1) P_j(2x-1)} and {sqrt(2j+1) P_j(2x-1) g_beta(x)} on [0,1].
    struct LegendreLogFamily {
        static constexpr bool half_line = false;
        int n;

        bool admissible(Real x) const { return x > 0 && x < 1; }

        void eval(Real x, Real b, Real* u, Real* du) const {
            const Real t = 2 * x - 1;
            Real p0 = 1, p1 = t, d0 = 0, d1 = 1;  // P_j(t), P_j'(t)
            const Real g = g_beta(x, b), dg = dg_beta(x, b);
            for (int j = 0; j < n; ++j) {
                Real pj, dj;
                if (j == 0) {
                    pj = 1;
                    dj = 0;
                } else if (j == 1) {
                    pj = t;
                    dj = 1;
                } else {
                    const Real p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                    const Real d2 = d0 + (2 * j - 1) * p1;
                    p0 = p1;
                    p1 = p2;
                    d0 = d1;
                    d1 = d2;
                    pj = p2;
                    dj = d2;
                }
                const Real c = fn::sqrt(static_cast<Real>(2 * j + 1));
                u[j] = c * pj;
                du[j] = c * 2 * dj;
                u[n + j] = c * pj * g;
                du[n + j] = c * (2 * dj * g + pj * dg);
            }
        }


        RawRule seed() const {
            // n-node Gauss rule for the weight 2y on [0,1]; nodes x = y^2
            const RawRule gl = gauss_legendre_raw(2 * n + 8);
            std::vector<Real> y(gl.nodes.size()), m(gl.nodes.size());
            for (std::size_t k = 0; k < y.size(); ++k) {
                y[k] = (gl.nodes[k] + 1) / 2;
                m[k] = gl.weights[k] / 2 * 2 * y[k];
            }
            RawRule r = gauss_from_discrete_measure(y, m, n);
            for (auto& x : r.nodes) x = x * x;
            return r;
        }
    };

    // {L_j(x)} and {L_j(x) g_beta(x)} against e^{-x} on (0, inf).
    struct LaguerreLogFamily {
        static constexpr bool half_line = true;
        int n;

        bool admissible(Real x) const { return x > 0 && fn::isfinite(x); }

        void eval(Real x, Real b, Real* u, Real* du) const {
            Real l0 = 1, l1 = 1 - x, d0 = 0, d1 = -1;
            const Real g = g_beta(x, b), dg = dg_beta(x, b);
            for (int j = 0; j < n; ++j) {
                Real lj, dj;
                if (j == 0) {
                    lj = 1;
                    dj = 0;
                } else if (j == 1) {
                    lj = 1 - x;
                    dj = -1;
                } else {
                    const int m = j - 1;
                    const Real l2 = ((2 * m + 1 - x) * l1 - m * l0) / (m + 1);
                    const Real d2 = ((2 * m + 1 - x) * d1 - l1 - m * d0) / (m + 1);
                    l0 = l1;
                    l1 = l2;
                    d0 = d1;
                    d1 = d2;
                    lj = l2;
                    dj = d2;
                }
                u[j] = lj;
                du[j] = dj;
                u[n + j] = lj * g;
                du[n + j] = dj * g + lj * dg;
            }
        }


        RawRule seed() const {
            // n-node Gauss rule for the weight 2y exp(-y^2) on (0, inf); nodes x = y^2
            const Real ymax = 14;
            const RawRule gl = gauss_legendre_raw(600);
            std::vector<Real> y(gl.nodes.size()), m(gl.nodes.size());
            for (std::size_t k = 0; k < y.size(); ++k) {
                y[k] = ymax * (gl.nodes[k] + 1) / 2;
                m[k] = gl.weights[k] * ymax / 2 * 2 * y[k] * fn::exp(-y[k] * y[k]);
            }
            RawRule r = gauss_from_discrete_measure(y, m, n);
            for (auto& x : r.nodes) x = x * x;
            return r;
        }
    };

    struct NewtonOutcome {
        bool ok = false;
        Real residual = 0;
    };

    // Composite Gauss-Legendre discretisation of the integration domain; dyadic
    // panels resolve the x -> 0 behaviour, the half-line version continues to
    // x = 300 and folds e^{-x} into the weights.
    struct Discretization {
        static constexpr int kOrder = 30;
        std::vector<Real> edges;  // panel p is [edges[p], edges[p+1]]
        std::vector<Real> z;
        std::vector<Real> omega;
        MatR to_coeffs;  // panel values -> Legendre coefficients

        std::size_t panels() const { return edges.size() - 1; }
    };

    static Discretization fine_discretization(bool half_line) {
        const RawRule gl = gauss_legendre_raw(Discretization::kOrder);
        Discretization d;
        d.edges.push_back(0);
        Real lo = fn::ldexp(Real(1), -70);
        for (int level = 70; level > 0; --level, lo *= 2) d.edges.push_back(lo);
        d.edges.push_back(1);
        if (half_line)
            for (Real a = 1; a < 300; a += 1) d.edges.push_back(a + 1);
        // Each panel holds a degree kOrder - 1 expansion of degree up to 2n
        // functions that oscillate with local rate about sqrt(n/x). A width cap
        // of sqrt(x)/8 keeps the truncation near 8^-kOrder for n <= 40; /4
        // left errors of 1e-12 in the top-degree moments at n = 40.
        std::vector<Real> refined{d.edges[0]};
        for (std::size_t p = 0; p + 1 < d.edges.size(); ++p) {
            const Real a = d.edges[p], b = d.edges[p + 1];
            const int pieces = std::max(1, static_cast<int>(fn::ceil(8 * (b - a) / fn::sqrt(b))));
            for (int i = 1; i <= pieces; ++i) refined.push_back(a + (b - a) * i / pieces);
        }
        d.edges = std::move(refined);
        for (std::size_t p = 0; p + 1 < d.edges.size(); ++p) {
            const Real a = d.edges[p], b = d.edges[p + 1];
            for (int q = 0; q < Discretization::kOrder; ++q) {
                d.z.push_back(a + (b - a) * (gl.nodes[q] + 1) / 2);
                Real om = gl.weights[q] * (b - a) / 2;
                if (half_line) om *= fn::exp(-d.z.back());
                d.omega.push_back(om);
            }
        }
        const int o = Discretization::kOrder;
        d.to_coeffs.resize(o, o);
        for (int q = 0; q < o; ++q) {
            const Real t = gl.nodes[q];
            Real p0 = 1, p1 = t;
            for (int k = 0; k < o; ++k) {
                Real pk;
                if (k == 0) {
                    pk = 1;
                } else if (k == 1) {
                    pk = t;
                } else {
                    pk = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                d.to_coeffs(k, q) = (2 * k + 1) * gl.weights[q] / 2 * pk;
            }
        }
        return d;
    }

    // Orthonormal basis of span(family at beta) with respect to the discretised
    // measure, stored as per-panel Legendre expansions so that values at arbitrary
    // points are as accurate as the samples themselves.
    class OrthonormalBasis {
    public:
        template <class Family>
        OrthonormalBasis(const Family& fam, Real b, const Discretization& disc) : disc_(disc) {
            const int cols = 2 * fam.n;
            const std::size_t K = disc.z.size();
            std::vector<Real> u(cols), du(cols);
            MatR samples(K, cols);
            for (std::size_t q = 0; q < K; ++q) {
                fam.eval(disc.z[q], b, u.data(), du.data());
                const Real s = fn::sqrt(disc.omega[q]);
                for (int j = 0; j < cols; ++j) samples(q, j) = s * u[j];
            }
            // The family is numerically rank deficient for larger n; directions
            // below the threshold are rounding noise and would change erratically
            // with beta, so they are dropped.
            Eigen::ColPivHouseholderQR<MatR> qr(samples);
            qr.setThreshold(100 * std::numeric_limits<Real>::epsilon());
            m_ = static_cast<int>(qr.rank());
            const MatR q = qr.householderQ() * MatR::Identity(K, m_);
            moments_ = VecR::Zero(m_);
            const int o = Discretization::kOrder;
            coeffs_.resize(disc.panels());
            MatR vals(o, m_);
            for (std::size_t p = 0; p < disc.panels(); ++p) {
                for (int i = 0; i < o; ++i) {
                    const std::size_t r = p * o + i;
                    const Real s = fn::sqrt(disc.omega[r]);
                    for (int j = 0; j < m_; ++j) {
                        moments_(j) += s * q(r, j);
                        vals(i, j) = s > 0 ? q(r, j) / s : 0;
                    }
                }
                coeffs_[p] = disc.to_coeffs * vals;
            }
        }

        int size() const { return m_; }
        const VecR& moments() const { return moments_; }

        // Values and x-derivatives of all basis functions at x; false outside the
        // resolved region.
        bool eval(Real x, Real* phi, Real* dphi) const {
            const auto& e = disc_.edges;
            if (!(x > e[1]) || !(x < e.back())) return false;
            const std::size_t p = std::upper_bound(e.begin(), e.end(), x) - e.begin() - 1;
            const Real a = e[p], b = e[p + 1];
            const Real t = 2 * (x - a) / (b - a) - 1;
            const int o = Discretization::kOrder;
            Real pk[Discretization::kOrder], dk[Discretization::kOrder];
            pk[0] = 1;
            dk[0] = 0;
            pk[1] = t;
            dk[1] = 1;
            for (int k = 2; k < o; ++k) {
                pk[k] = ((2 * k - 1) * t * pk[k - 1] - (k - 1) * pk[k - 2]) / k;
                dk[k] = dk[k - 2] + (2 * k - 1) * pk[k - 1];
            }
            const MatR& c = coeffs_[p];
            const Real scale = 2 / (b - a);
            for (int j = 0; j < m_; ++j) {
                Real v = 0, dv = 0;
                for (int k = 0; k < o; ++k) {
                    v += pk[k] * c(k, j);
                    dv += dk[k] * c(k, j);
                }
                phi[j] = v;
                dphi[j] = dv * scale;
            }
            return true;
        }

    private:
        const Discretization& disc_;
        int m_ = 0;
        VecR moments_;
        std::vector<MatR> coeffs_;
    };

    // Damped Gauss-Newton (minimum-norm steps) on sum_i w_i phi_j(x_i) = int phi_j
    // over an orthonormal basis of the family, unknowns scaled to relative
    // node/weight updates. Converged once the residual drops below tol, or
    // stalls below max(1e4 eps, eps^(2/3)).
    static NewtonOutcome newton_moments(const OrthonormalBasis& basis, std::vector<Real>& x, std::vector<Real>& w,
                                 Real tol, int max_iter) {
        const int n = static_cast<int>(x.size());
        const int m = basis.size();
        std::vector<Real> phi(m), dphi(m);
        MatR jac(m, 2 * n);
        VecR res(m);

        auto residual = [&](const std::vector<Real>& xs, const std::vector<Real>& ws, bool with_jac,
                            VecR& r) -> bool {
            r = -basis.moments();
            for (int i = 0; i < n; ++i) {
                if (!(ws[i] > 0) || (i > 0 && !(xs[i] > xs[i - 1]))) return false;
                if (!basis.eval(xs[i], phi.data(), dphi.data())) return false;
                for (int j = 0; j < m; ++j) {
                    r(j) += ws[i] * phi[j];
                    if (with_jac) {
                        jac(j, i) = ws[i] * xs[i] * dphi[j];
                        jac(j, n + i) = ws[i] * phi[j];
                    }
                }
            }
            return r.allFinite();
        };

        NewtonOutcome out;
        if (!residual(x, w, true, res)) return out;
        out.residual = res.norm();
        Real prev = std::numeric_limits<Real>::infinity();
        std::vector<Real> xt(n), wt(n);
        VecR rt(m);
        for (int it = 0; it < max_iter; ++it) {
            // The basis is truncated at the rounding level, so a final solve can
            // stall well above eps; accept a stall once two thirds of the digits
            // are in.
            const Real floor = std::max(Real(10000 * eps()), fn::exp(fn::log(eps()) * 2 / 3));
            if (out.residual < tol || (out.residual < floor && out.residual > 0.5L * prev)) {
                out.ok = true;
                return out;
            }
            prev = out.residual;
            VecR step = jac.completeOrthogonalDecomposition().solve(res);
            if (!step.allFinite()) return out;
            const Real big = step.cwiseAbs().maxCoeff();
            if (big > 0.5L) step *= 0.5L / big;
            bool accepted = false;
            for (int halving = 0; halving < 30 && !accepted; ++halving, step /= 2) {
                for (int i = 0; i < n; ++i) {
                    xt[i] = x[i] * (1 - step(i));
                    wt[i] = w[i] * (1 - step(n + i));
                }
                if (residual(xt, wt, false, rt) && rt.norm() < out.residual) accepted = true;
            }
            if (!accepted) return out;
            x = xt;
            w = wt;
            residual(x, w, true, res);
            out.residual = res.norm();
        }
        out.ok = out.residual < tol;
        return out;
    }

    template <class Family>
    static RawRule generalized_rule(const Family& fam) {
        RawRule r = fam.seed();
        std::sort(r.nodes.begin(), r.nodes.end());
        static const Discretization disc = fine_discretization(Family::half_line);
        Real b = 0.5L;
        // intermediate tolerance: only the final rule at beta = 0 needs full accuracy
        if (!newton_moments(OrthonormalBasis(fam, b, disc), r.nodes, r.weights, 1e-10L, 40).ok)
            throw NumericalError("gauss_rule: generalised rule seed did not converge (n=" +
                                 std::to_string(fam.n) + ")");
        std::vector<Real> px = r.nodes, pw = r.weights;  // previous accepted solution
        Real pb = b;
        bool have_prev = false;
        Real h = 0.05L;
        int steps = 0;
        bool predictor = true;
        while (b > 0) {
            if (h < 1e-8L && predictor) {
                // the secant predictor can lead Newton astray near node
                // collisions; retry from the last accepted point alone
                predictor = false;
                h = 1e-3L;
            }
            if (++steps > 4000 || h < 1e-8L) {
                std::ostringstream os;
                os << "gauss_rule: continuation stalled at beta=" << static_cast<double>(b)
                   << " (n=" << fam.n << ")";
                throw NumericalError(os.str());
            }
            const Real nb = std::max(Real(0), b - h);
            std::vector<Real> x = r.nodes, w = r.weights;
            if (have_prev && predictor) {
                const Real s = (nb - b) / (b - pb);
                for (int i = 0; i < fam.n; ++i) {
                    x[i] += s * (r.nodes[i] - px[i]);
                    w[i] += s * (r.weights[i] - pw[i]);
                }
            }
            const bool last = (nb == 0);
            if (newton_moments(OrthonormalBasis(fam, nb, disc), x, w, last ? 100 * eps() : 1e-10L, 40).ok) {
                px = r.nodes;
                pw = r.weights;
                pb = b;
                have_prev = true;
                r.nodes = std::move(x);
                r.weights = std::move(w);
                b = nb;
                h = std::min(h * 1.5L, Real(0.1));
            } else {
                h /= 2;
            }
        }
        return r;
    }
};

}  // namespace hnabem::gauss_detail
